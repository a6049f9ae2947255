//! Texture ordering: edge statistics on the disk, compared through their zonal spectra.

use rayon::prelude::*;

use super::edge::{dihedral_edge_filter, EdgeResponse};
use super::mds::classical_mds;
use super::raster::GrayImage;
use crate::density::{kde_spectral, DiskDensity, Grids, RadialKernel, SampleSet};
use crate::error::{Error, Result};
use crate::mft::{parseval_distance, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TextureConfig {
    /// `r = tanh(gain * rho)`
    pub gain: f64,
    pub kernel: RadialKernel,
    /// Angular orders kept in the densities; the descriptor itself only uses `m = 0`.
    pub m_max: usize,
    pub grids: Grids,
}

impl Default for TextureConfig {
    fn default() -> Self {
        TextureConfig {
            gain: 1.0,
            kernel: RadialKernel::power_cosh(4.0).expect("valid default kernel"),
            m_max: 0,
            grids: Grids::default(),
        }
    }
}

/// Orientation-invariant summary of one texture.
#[derive(Debug, Clone, PartialEq)]
pub struct TextureDescriptor {
    pub id: String,
    pub spectrum: Spectrum,
}

/// Normalized density of the edge responses on the disk.
pub fn texture_density(responses: &[EdgeResponse], k: &RadialKernel, m_max: usize, grids: &Grids) -> Result<DiskDensity> {
    if responses.is_empty() {
        return Err(Error::invalid("responses", "no edge responses"));
    }
    let samples = SampleSet::new(responses.iter().map(|r| r.coset()).collect(), None)?;
    let mut d = kde_spectral(&samples, k, m_max, grids)?;
    d.normalize()?;
    Ok(d)
}

/// The `m = 0` spectrum of a density.
pub fn zonal_descriptor(id: impl Into<String>, d: &DiskDensity) -> Result<TextureDescriptor> {
    Ok(TextureDescriptor {
        id: id.into(),
        spectrum: d.zonal()?,
    })
}

/// Pairwise Parseval distances.
pub fn descriptor_distance_matrix(descriptors: &[TextureDescriptor]) -> Result<Vec<Vec<f64>>> {
    if descriptors.len() < 2 {
        return Err(Error::invalid("descriptors", "need at least two"));
    }
    let n = descriptors.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = parseval_distance(&descriptors[i].spectrum, &descriptors[j].spectrum)?;
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    Ok(d)
}

/// Everything computed by [`texture_rank`], in input order except `ranking`.
#[derive(Debug, Clone)]
pub struct TextureRanking {
    pub ids: Vec<String>,
    pub densities: Vec<DiskDensity>,
    pub distances: Vec<Vec<f64>>,
    /// two MDS coordinates per texture
    pub embedding: Vec<Vec<f64>>,
    /// `(id, first coordinate)` sorted by the coordinate, ties by id
    pub ranking: Vec<(String, f64)>,
}

/// Filter, estimate, describe, compare, embed and sort.
pub fn texture_rank(images: &[(String, GrayImage)], cfg: &TextureConfig) -> Result<TextureRanking> {
    if images.len() < 2 {
        return Err(Error::invalid("images", "need at least two textures"));
    }
    let densities: Vec<DiskDensity> = images
        .par_iter()
        .map(|(id, img)| {
            let responses = dihedral_edge_filter(img, cfg.gain)?;
            let d = texture_density(&responses, &cfg.kernel, cfg.m_max, &cfg.grids)?;
            log::info!("texture {id}: {} edge responses", responses.len());
            Ok(d)
        })
        .collect::<Result<_>>()?;
    let descriptors: Vec<TextureDescriptor> = images
        .iter()
        .zip(&densities)
        .map(|((id, _), d)| zonal_descriptor(id.clone(), d))
        .collect::<Result<_>>()?;
    let distances = descriptor_distance_matrix(&descriptors)?;
    let embedding = classical_mds(&distances, 2)?;
    let mut ranking: Vec<(String, f64)> = descriptors
        .iter()
        .zip(&embedding)
        .map(|(d, x)| (d.id.clone(), x[0]))
        .collect();
    ranking.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(TextureRanking {
        ids: descriptors.into_iter().map(|d| d.id).collect(),
        densities,
        distances,
        embedding,
        ranking,
    })
}
