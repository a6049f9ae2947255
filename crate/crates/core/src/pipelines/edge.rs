//! Dihedral edge filters on 2x2 blocks.

use super::raster::GrayImage;
use crate::error::{Error, Result};
use crate::hypgeo::{reduce_angle, Coset, MAX_RADIUS};

/// Filter output of one block and its position on the disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeResponse {
    pub dx: f64,
    pub dy: f64,
    pub rho: f64,
    /// `atan2(dy, dx)` in `[0, 2pi)`
    pub angle: f64,
    /// `tanh(gain * rho)`
    pub r: f64,
}

impl EdgeResponse {
    pub fn new(dx: f64, dy: f64, gain: f64) -> Self {
        let rho = dx.hypot(dy);
        let angle = if rho == 0.0 { 0.0 } else { reduce_angle(dy.atan2(dx)) };
        EdgeResponse {
            dx,
            dy,
            rho,
            angle,
            r: (gain * rho).tanh().min(MAX_RADIUS),
        }
    }

    /// Coset coordinates of the disk point `r e^{i angle}`.
    pub fn coset(&self) -> Coset {
        Coset {
            phi: self.angle,
            tau: 2.0 * self.r.atanh(),
        }
    }

    /// The same response with its angle shifted by `offset`.
    pub fn rotated(&self, offset: f64) -> Self {
        EdgeResponse {
            angle: reduce_angle(self.angle + offset),
            ..*self
        }
    }
}

/// Responses of the filters `(1, 1, -1, -1) / 2` and `(1, -1, -1, 1) / 2` on every
/// 2x2 block (stride 1), pixels taken clockwise from the top left.
pub fn dihedral_edge_filter(img: &GrayImage, gain: f64) -> Result<Vec<EdgeResponse>> {
    if img.width() < 2 || img.height() < 2 {
        return Err(Error::invalid("image", "edge filter needs at least 2x2 pixels"));
    }
    if !(gain > 0.0) || !gain.is_finite() {
        return Err(Error::invalid("gain", "must be positive"));
    }
    let mut out = Vec::with_capacity((img.width() - 1) * (img.height() - 1));
    for y in 0..img.height() - 1 {
        for x in 0..img.width() - 1 {
            let (tl, tr) = (img.get(x, y), img.get(x + 1, y));
            let (br, bl) = (img.get(x + 1, y + 1), img.get(x, y + 1));
            let dx = (tl + tr - br - bl) / 2.0;
            let dy = (tl - tr - br + bl) / 2.0;
            out.push(EdgeResponse::new(dx, dy, gain));
        }
    }
    Ok(out)
}
