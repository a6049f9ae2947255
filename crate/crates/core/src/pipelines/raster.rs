//! Gray and color rasters with PNG / PNM input and PNG output.

use std::path::Path;

use image::{ImageBuffer, ImageError, Luma, Rgb};

use super::color::{cielab_to_srgb, srgb_to_cielab, Lch};
use crate::error::{Error, Result};

fn create_parent(path: &Path) -> Result<()> {
    match path.parent().filter(|d| !d.as_os_str().is_empty()) {
        Some(dir) => std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        }),
        None => Ok(()),
    }
}

fn image_error(path: &Path, err: ImageError) -> Error {
    match err {
        ImageError::IoError(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        source => Error::Image {
            path: path.to_path_buf(),
            source,
        },
    }
}

/// Row-major intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    /// Values are clamped to `[0, 1]`.
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::invalid(
                "image",
                format!("{} pixels for a {width}x{height} image", pixels.len()),
            ));
        }
        if pixels.iter().any(|p| p.is_nan()) {
            return Err(Error::invalid("image", "NaN pixel"));
        }
        let pixels = pixels.into_iter().map(|p| p.clamp(0.0, 1.0)).collect();
        Ok(GrayImage { width, height, pixels })
    }

    pub fn from_u8(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        Self::new(width, height, bytes.iter().map(|&b| f64::from(b) / 255.0).collect())
    }

    /// Any supported format; color input is converted to luma.
    pub fn load(path: &Path) -> Result<Self> {
        let img = image::open(path).map_err(|e| image_error(path, e))?.to_luma8();
        let (w, h) = img.dimensions();
        Self::from_u8(w as usize, h as usize, img.as_raw())
    }

    pub fn save_png(&self, path: &Path) -> Result<()> {
        let bytes: Vec<u8> = self.pixels.iter().map(|p| (p * 255.0).round() as u8).collect();
        let buf: ImageBuffer<Luma<u8>, Vec<u8>> =
            ImageBuffer::from_raw(self.width as u32, self.height as u32, bytes).expect("buffer size matches");
        create_parent(path)?;
        buf.save(path).map_err(|e| image_error(path, e))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    /// Quarter turn clockwise.
    pub fn rotate90(&self) -> GrayImage {
        let (w, h) = (self.height, self.width);
        let mut pixels = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                pixels.push(self.get(y, self.height - 1 - x));
            }
        }
        GrayImage {
            width: w,
            height: h,
            pixels,
        }
    }
}

/// 8-bit sRGB pixels with their CIELAB values in polar form.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorImage {
    width: usize,
    height: usize,
    rgb: Vec<[u8; 3]>,
    lch: Vec<Lch>,
}

impl ColorImage {
    pub fn from_rgb(width: usize, height: usize, rgb: Vec<[u8; 3]>) -> Result<Self> {
        if width == 0 || height == 0 || rgb.len() != width * height {
            return Err(Error::invalid(
                "image",
                format!("{} pixels for a {width}x{height} image", rgb.len()),
            ));
        }
        let lch = rgb.iter().map(|&p| srgb_to_cielab(p).to_lch()).collect();
        Ok(ColorImage { width, height, rgb, lch })
    }

    /// Pixels given in CIELAB; sRGB values are derived (clamped to the gamut).
    pub fn from_lch(width: usize, height: usize, lch: Vec<Lch>) -> Result<Self> {
        if width == 0 || height == 0 || lch.len() != width * height {
            return Err(Error::invalid("image", "pixel count does not match size"));
        }
        let rgb = lch.iter().map(|p| cielab_to_srgb(p.to_lab())).collect();
        Ok(ColorImage { width, height, rgb, lch })
    }

    /// Replaces the CIELAB values while keeping the given sRGB bytes.
    pub(crate) fn with_parts(width: usize, height: usize, rgb: Vec<[u8; 3]>, lch: Vec<Lch>) -> Self {
        ColorImage { width, height, rgb, lch }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let img = image::open(path).map_err(|e| image_error(path, e))?.to_rgb8();
        let (w, h) = img.dimensions();
        let rgb = img.pixels().map(|p| p.0).collect();
        Self::from_rgb(w as usize, h as usize, rgb)
    }

    pub fn save_png(&self, path: &Path) -> Result<()> {
        let bytes: Vec<u8> = self.rgb.iter().flatten().copied().collect();
        let buf: ImageBuffer<Rgb<u8>, Vec<u8>> =
            ImageBuffer::from_raw(self.width as u32, self.height as u32, bytes).expect("buffer size matches");
        create_parent(path)?;
        buf.save(path).map_err(|e| image_error(path, e))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn rgb(&self) -> &[[u8; 3]] {
        &self.rgb
    }

    pub fn lch(&self) -> &[Lch] {
        &self.lch
    }

    pub fn mean_chroma(&self) -> f64 {
        self.lch.iter().map(|p| p.c).sum::<f64>() / self.lch.len() as f64
    }
}
