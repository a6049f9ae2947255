//! Saturation smoothing by heat flow of local saturation distributions.
//!
//! Chroma is scaled into the disk (`r = min(C / C_ref, 0.999)`), every pixel
//! collects the radii in a window around it, and the zonal density of those
//! radii is flowed for the requested times. The new saturation is the mode of
//! the flowed density. Lightness and hue are carried over unchanged.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::color::Lch;
use super::raster::ColorImage;
use crate::conical::conical_p_sweep;
use crate::density::{kernel_weights, Grids, RadialKernel};
use crate::error::{Error, Result};
use crate::hypgeo::MAX_RADIUS;

/// Largest disk radius a scaled chroma is mapped to.
const RADIUS_CAP: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesaturateConfig {
    /// Side of the square window, clipped at the borders.
    pub window: usize,
    pub kernel: RadialKernel,
    pub grids: Grids,
    /// Quantile of the chroma that is mapped to the disk boundary.
    pub chroma_quantile: f64,
}

impl Default for DesaturateConfig {
    fn default() -> Self {
        DesaturateConfig {
            window: 10,
            kernel: RadialKernel::power_cosh(4.0).expect("valid default kernel"),
            grids: Grids::default(),
            chroma_quantile: 0.99,
        }
    }
}

/// Time increments: `steps - 1` of `dt`, then one of `2 dt`.
pub fn time_schedule(dt: f64, steps: usize) -> Result<Vec<f64>> {
    if !(dt >= 0.0) || !dt.is_finite() {
        return Err(Error::invalid("dt", "must be finite and >= 0"));
    }
    if steps == 0 {
        return Err(Error::invalid("steps", "must be positive"));
    }
    let mut out = vec![dt; steps - 1];
    out.push(2.0 * dt);
    Ok(out)
}

/// Nearest-rank quantile of the chroma values.
fn chroma_reference(lch: &[Lch], q: f64) -> f64 {
    let mut c: Vec<f64> = lch.iter().map(|p| p.c).collect();
    c.sort_by(f64::total_cmp);
    let rank = ((q * c.len() as f64).ceil() as usize).clamp(1, c.len());
    c[rank - 1]
}

/// One output image per increment in `increments`, flowed for the cumulative time.
pub fn desaturate(img: &ColorImage, increments: &[f64], cfg: &DesaturateConfig) -> Result<Vec<ColorImage>> {
    if cfg.window < 2 {
        return Err(Error::invalid("window", "must be at least 2"));
    }
    if !(cfg.chroma_quantile > 0.0 && cfg.chroma_quantile <= 1.0) {
        return Err(Error::invalid("chroma_quantile", "must be in (0, 1]"));
    }
    let mut times = Vec::with_capacity(increments.len());
    let mut t = 0.0;
    for &dt in increments {
        if !(dt >= 0.0) || !dt.is_finite() {
            return Err(Error::invalid("time_steps", format!("increments must be >= 0, got {dt}")));
        }
        t += dt;
        times.push(t);
    }

    let (w, h) = (img.width(), img.height());
    let lch = img.lch();
    let c_ref = chroma_reference(lch, cfg.chroma_quantile);
    if c_ref == 0.0 {
        return Ok(vec![img.clone(); times.len()]);
    }

    // distinct radii, one conical row each
    let mut tau_index: HashMap<u64, u32> = HashMap::new();
    let mut taus: Vec<f64> = Vec::new();
    let pixel_tau: Vec<u32> = lch
        .iter()
        .map(|p| {
            let r = (p.c / c_ref).min(RADIUS_CAP).min(MAX_RADIUS);
            let tau = 2.0 * r.atanh();
            *tau_index.entry(tau.to_bits()).or_insert_with(|| {
                taus.push(tau);
                (taus.len() - 1) as u32
            })
        })
        .collect();
    let grids = &cfg.grids;
    let kappas = grids.spectral.nodes();
    let rows: Vec<Vec<f64>> = taus
        .par_iter()
        .map(|&tau| conical_p_sweep(0, &kappas, tau, &grids.config.quadrature))
        .collect::<Result<_>>()?;

    // distinct windows (as sorted radius multisets)
    let lo = (cfg.window - 1) / 2;
    let hi = cfg.window / 2;
    let mut window_index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut windows: Vec<Vec<u32>> = Vec::new();
    let pixel_window: Vec<Option<usize>> = (0..w * h)
        .map(|i| {
            let (x, y) = (i % w, i / w);
            let mut members = Vec::with_capacity(cfg.window * cfg.window);
            for yy in y.saturating_sub(lo)..(y + hi + 1).min(h) {
                for xx in x.saturating_sub(lo)..(x + hi + 1).min(w) {
                    members.push(pixel_tau[yy * w + xx]);
                }
            }
            if members.iter().all(|&k| taus[k as usize] == 0.0) {
                return None;
            }
            members.sort_unstable();
            let next = windows.len();
            let id = *window_index.entry(members.clone()).or_insert(next);
            if id == next {
                windows.push(members);
            }
            Some(id)
        })
        .collect();

    let mf = grids.transform()?;
    let kernel = kernel_weights(&cfg.kernel, 0, grids)?;
    let plancherel = grids.spectral.plancherel_weights();
    let n_k = kappas.len();
    // window spectra times the Plancherel weights, one column per window
    let base = DMatrix::from_fn(n_k, windows.len(), |i, u| {
        let members = &windows[u];
        let mean = members.iter().map(|&k| rows[k as usize][i]).sum::<f64>() / members.len() as f64;
        mean * kernel.values()[i] * plancherel[i]
    });

    let tau_cap = 2.0 * RADIUS_CAP.atanh();
    let radial = grids.radial;
    let n_search = (0..radial.len()).take_while(|&j| radial.node(j) <= tau_cap).count().max(1);
    let synthesis = mf.table().columns(0, n_search);

    times
        .iter()
        .map(|&t| {
            let mut flowed = base.clone();
            for (i, k) in kappas.iter().enumerate() {
                let decay = (-(0.25 + k * k) * t).exp();
                flowed.row_mut(i).scale_mut(decay);
            }
            let density = synthesis.tr_mul(&flowed);
            // first maximum: ties go to the smaller radius
            let modes: Vec<f64> = (0..windows.len())
                .map(|u| {
                    let col = density.column(u);
                    let mut best = 0;
                    for j in 1..n_search {
                        if col[j] > col[best] {
                            best = j;
                        }
                    }
                    (0.5 * radial.node(best)).tanh()
                })
                .collect();
            let mut rgb = Vec::with_capacity(w * h);
            let mut out = Vec::with_capacity(w * h);
            for (i, p) in lch.iter().enumerate() {
                // a gray pixel has no hue to carry a saturation
                let c = match pixel_window[i] {
                    Some(u) if p.c > 0.0 => modes[u] * c_ref,
                    _ => 0.0,
                };
                if c.to_bits() == p.c.to_bits() {
                    rgb.push(img.rgb()[i]);
                    out.push(*p);
                } else {
                    let q = Lch { l: p.l, c, h: p.h };
                    rgb.push(super::color::cielab_to_srgb(q.to_lab()));
                    out.push(q);
                }
            }
            Ok(ColorImage::with_parts(w, h, rgb, out))
        })
        .collect()
}
