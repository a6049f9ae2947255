//! Three synthetic textures of increasing noise, ordered by the first MDS axis.

use hyperdisk::pipelines::synth::noise_texture;
use hyperdisk::pipelines::{texture_rank, TextureConfig};

fn main() -> hyperdisk::Result<()> {
    let images: Vec<_> = [0.0, 0.15, 0.4]
        .iter()
        .enumerate()
        .map(|(i, &a)| (format!("noise_{a}"), noise_texture(128, a, i as u64)))
        .collect();
    let r = texture_rank(&images, &TextureConfig::default())?;
    println!("distances:");
    for (id, row) in r.ids.iter().zip(&r.distances) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.5}")).collect();
        println!("  {id:>10}: {}", cells.join(" "));
    }
    println!("ranking:");
    for (id, x) in &r.ranking {
        println!("  {id:>10}: {x:+.5}");
    }
    Ok(())
}
