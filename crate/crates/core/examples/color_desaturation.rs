//! Heat-flow desaturation of a two-tone image.
//!
//! `cargo run --release --example color_desaturation [out_dir]` also saves the frames.

use std::path::PathBuf;

use hyperdisk::pipelines::synth::two_tone;
use hyperdisk::pipelines::{desaturate, time_schedule, DesaturateConfig};

fn main() -> hyperdisk::Result<()> {
    let img = two_tone(64, 64, [200, 60, 60], [60, 80, 200]);
    let frames = desaturate(&img, &time_schedule(0.05, 16)?, &DesaturateConfig::default())?;
    println!("input mean chroma {:.3}", img.mean_chroma());
    let out = std::env::args().nth(1).map(PathBuf::from);
    for (k, f) in frames.iter().enumerate() {
        println!("step {:>2}: mean chroma {:.3}", k + 1, f.mean_chroma());
        if let Some(dir) = &out {
            f.save_png(&dir.join(format!("two_tone_t{}.png", k + 1)))?;
        }
    }
    Ok(())
}
