//! Generated test inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::raster::{ColorImage, GrayImage};

/// Square texture `0.5 + amplitude * U(-1, 1)`, quantized to 8 bits.
pub fn noise_texture(size: usize, amplitude: f64, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bytes: Vec<u8> = (0..size * size)
        .map(|_| {
            let v = 0.5 + amplitude * rng.random_range(-1.0..=1.0);
            (v.clamp(0.0, 1.0) * 255.0).round() as u8
        })
        .collect();
    GrayImage::from_u8(size, size, &bytes).expect("size matches")
}

/// Left half `left`, right half `right`.
pub fn two_tone(width: usize, height: usize, left: [u8; 3], right: [u8; 3]) -> ColorImage {
    let rgb = (0..width * height)
        .map(|i| if i % width < width / 2 { left } else { right })
        .collect();
    ColorImage::from_rgb(width, height, rgb).expect("size matches")
}

/// Smoothly varying colors with seeded per-pixel jitter.
pub fn color_field(width: usize, height: usize, seed: u64) -> ColorImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rgb = (0..width * height)
        .map(|i| {
            let (x, y) = ((i % width) as f64 / width as f64, (i / width) as f64 / height as f64);
            let jitter = |rng: &mut ChaCha8Rng| rng.random_range(-12.0..=12.0);
            let r = 60.0 + 150.0 * x + jitter(&mut rng);
            let g = 90.0 + 100.0 * y + jitter(&mut rng);
            let b = 200.0 - 120.0 * x * y + jitter(&mut rng);
            [r, g, b].map(|c: f64| c.round().clamp(0.0, 255.0) as u8)
        })
        .collect();
    ColorImage::from_rgb(width, height, rgb).expect("size matches")
}

/// Gray version of an image (`r = g = b = round(mean)`).
pub fn grayscale(img: &ColorImage) -> ColorImage {
    let rgb = img
        .rgb()
        .iter()
        .map(|p| {
            let v = (p.iter().map(|&c| f64::from(c)).sum::<f64>() / 3.0).round() as u8;
            [v; 3]
        })
        .collect();
    ColorImage::from_rgb(img.width(), img.height(), rgb).expect("size matches")
}
