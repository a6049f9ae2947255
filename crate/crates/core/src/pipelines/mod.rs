//! Image pipelines: texture ordering by edge statistics and color desaturation by heat flow.

pub mod color;
pub mod desaturate;
pub mod edge;
pub mod mds;
pub mod raster;
pub mod synth;
pub mod texture;

pub use color::{cielab_to_srgb, srgb_to_cielab, Lab, Lch};
pub use desaturate::{desaturate, time_schedule, DesaturateConfig};
pub use edge::{dihedral_edge_filter, EdgeResponse};
pub use mds::classical_mds;
pub use raster::{ColorImage, GrayImage};
pub use texture::{
    descriptor_distance_matrix, texture_density, texture_rank, zonal_descriptor, TextureConfig,
    TextureDescriptor, TextureRanking,
};
