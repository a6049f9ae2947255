//! Acceptance suite: one line per criterion, run in order so the timings are not
//! polluted by other tests. Exits nonzero when any criterion fails.

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hyperdisk::conical::{addition_series, conical_p, QuadratureConfig};
use hyperdisk::density::{kde_direct, kde_spectral, Grids, RadialKernel, SampleSet};
use hyperdisk::hypgeo::{hyperbolic_distance, relative_cosh, Coset, DiskPoint, MoebiusElement};
use hyperdisk::mft::{heat_multiplier, parseval_inner, MehlerFock, RadialFunction};
use hyperdisk::pipelines::synth::{color_field, grayscale, noise_texture, two_tone};
use hyperdisk::pipelines::{desaturate, texture_rank, time_schedule, DesaturateConfig, TextureConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_element(rng: &mut ChaCha8Rng, tau_max: f64) -> MoebiusElement {
    MoebiusElement::from_cartan(
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..tau_max),
        rng.random_range(0.0..TAU),
    )
    .unwrap()
}

fn random_coset(rng: &mut ChaCha8Rng, tau_max: f64) -> Coset {
    Coset::new(rng.random_range(0.0..TAU), rng.random_range(0.0..tau_max)).unwrap()
}

fn conical_identities() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for kappa in [0.0, 0.5, 1.0, 5.0, 20.0] {
        worst = worst.max((conical_p(0, kappa, 0.0, &cfg).unwrap() - 1.0).abs());
        for m in [-8, -3, -1, 1, 2, 5, 8, 16] {
            worst = worst.max(conical_p(m, kappa, 0.0, &cfg).unwrap().abs());
        }
    }
    outcome(worst <= 1e-12, format!("max deviation {worst:.2e} (limit 1e-12)"))
}

fn quadrature_convergence() -> Outcome {
    let coarse = QuadratureConfig::new(256, 1e-8).unwrap();
    let fine = QuadratureConfig::new(2048, 1e-8).unwrap();
    let mut worst_abs: f64 = 0.0;
    let mut worst_rel: f64 = 0.0;
    let mut at = (0, 0.0, 0.0, 0.0);
    for m in [0, 2, 4, 6, 8] {
        for kappa in [0.0, 5.0, 10.0, 15.0, 20.0] {
            for tau in [0.0, 2.0, 4.0, 6.0, 8.0] {
                let a = conical_p(m, kappa, tau, &coarse).unwrap();
                let b = conical_p(m, kappa, tau, &fine).unwrap();
                let d = (a - b).abs();
                worst_rel = worst_rel.max(d / b.abs().max(1.0));
                if d > worst_abs {
                    worst_abs = d;
                    at = (m, kappa, tau, b);
                }
            }
        }
    }
    outcome(
        worst_abs < 1e-10,
        format!(
            "max |diff| {worst_abs:.2e} (limit 1e-10) at m={}, kappa={}, tau={} where |P| = {:.2e}; \
             max diff relative to max(1, |P|) {worst_rel:.2e}",
            at.0,
            at.1,
            at.2,
            at.3.abs()
        ),
    )
}

fn mft_round_trip() -> Outcome {
    let grids = Grids::default();
    let mf = MehlerFock::new(grids.radial, grids.spectral, &grids.config).unwrap();
    let mut worst: f64 = 0.0;
    for s in [2.0, 3.0, 4.0] {
        let f = RadialFunction::from_fn(grids.radial, |t: f64| t.cosh().powf(-s)).unwrap();
        let back = mf.inverse(&mf.forward(&f).unwrap()).unwrap();
        worst = worst.max(back.relative_l2_error(&f).unwrap());
    }
    outcome(worst < 1e-3, format!("max relative L2 error {worst:.2e} (limit 1e-3)"))
}

fn parseval() -> Outcome {
    let grids = Grids::default();
    let mf = grids.transform().unwrap();
    let f = RadialFunction::from_fn(grids.radial, |t: f64| t.cosh().powi(-2)).unwrap();
    let c = mf.forward(&f).unwrap();
    let inner = parseval_inner(&c, &c).unwrap();
    let rel = (inner - 1.0 / 3.0).abs() * 3.0;
    outcome(rel < 1e-3, format!("<c, c> = {inner:.9}, relative error {rel:.2e} (limit 1e-3)"))
}

fn addition_formula() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let kappa = rng.random_range(0.0..2.0);
        let tau_l = rng.random_range(0.0..2.0);
        let tau_0 = rng.random_range(0.0..2.0);
        let theta = rng.random_range(0.0..TAU);
        let series = addition_series(kappa, tau_l, tau_0, theta, 60, &cfg).unwrap();
        let direct = conical_p(0, kappa, relative_cosh(tau_l, theta, tau_0, 0.0).acosh(), &cfg).unwrap();
        worst = worst.max((series - direct).abs());
    }
    outcome(worst < 1e-6, format!("50 draws, max |series - direct| {worst:.2e} (limit 1e-6)"))
}

fn geometry_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let kernel = RadialKernel::power_cosh(3.0).unwrap();
    let mut worst_d: f64 = 0.0;
    let mut worst_k: f64 = 0.0;
    for _ in 0..1000 {
        let g = random_element(&mut rng, 2.0);
        let w = DiskPoint::from_coset(random_coset(&mut rng, 3.0));
        let z = DiskPoint::from_coset(random_coset(&mut rng, 3.0));
        worst_d = worst_d.max((hyperbolic_distance(g.apply(w), g.apply(z)) - hyperbolic_distance(w, z)).abs());

        let points: Vec<Coset> = (0..5).map(|_| random_coset(&mut rng, 2.0)).collect();
        let weights: Vec<f64> = (0..5).map(|_| rng.random_range(0.1..1.0)).collect();
        let moved: Vec<Coset> = points
            .iter()
            .map(|&p| g.apply(DiskPoint::from_coset(p)).coset())
            .collect();
        let a = SampleSet::new(points, Some(weights.clone())).unwrap();
        let b = SampleSet::new(moved, Some(weights)).unwrap();
        let q = DiskPoint::from_coset(random_coset(&mut rng, 2.0));
        worst_k = worst_k.max((kde_direct(&b, &kernel, g.apply(q)) - kde_direct(&a, &kernel, q)).abs());
    }
    let worst = worst_d.max(worst_k);
    outcome(
        worst < 1e-10,
        format!("1000 transforms, max deviation: distance {worst_d:.2e}, kde {worst_k:.2e} (limit 1e-10)"),
    )
}

/// `|m| <= m_max` part of the angular Fourier series of the direct estimate,
/// from a 1024-point DFT in `phi`; `phis` must be a subset of those nodes.
fn truncated_direct(set: &SampleSet, k: &RadialKernel, m_max: usize, phis: &[f64], tau: f64) -> Vec<f64> {
    const N: usize = 1024;
    let values: Vec<f64> = (0..N)
        .map(|n| {
            let phi = TAU * n as f64 / N as f64;
            kde_direct(set, k, DiskPoint::from_coset(Coset::new(phi, tau).unwrap()))
        })
        .collect();
    let coeffs: Vec<Complex64> = (0..=m_max)
        .map(|m| {
            values
                .iter()
                .enumerate()
                .map(|(n, v)| v * Complex64::from_polar(1.0, -TAU * (m * n) as f64 / N as f64))
                .sum::<Complex64>()
                / N as f64
        })
        .collect();
    phis.iter()
        .map(|&phi| {
            coeffs[0].re
                + coeffs[1..]
                    .iter()
                    .enumerate()
                    .map(|(i, c)| 2.0 * (c * Complex64::from_polar(1.0, (i + 1) as f64 * phi)).re)
                    .sum::<f64>()
        })
        .collect()
}

fn kde_separation() -> Outcome {
    let grids = Grids::default();
    let kernel = RadialKernel::power_cosh(4.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let phis: Vec<f64> = (0..32).map(|i| TAU * i as f64 / 32.0).collect();
    let taus: Vec<f64> = (0..32).map(|j| 3.0 * j as f64 / 31.0).collect();
    let mut worst: f64 = 0.0;
    let mut floor: f64 = 0.0;
    let mut vs_truncated: f64 = 0.0;
    let mut per_set = Vec::new();
    for _ in 0..5 {
        let points: Vec<Coset> = (0..20).map(|_| random_coset(&mut rng, 3.0)).collect();
        let set = SampleSet::new(points, None).unwrap();
        let d = kde_spectral(&set, &kernel, 32, &grids).unwrap();
        let unclipped = d.evaluate_polar_unclipped(&phis, &taus).unwrap();
        let (mut err, mut trunc_err, mut gap, mut peak) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for (j, &tau) in taus.iter().enumerate() {
            let truncated = truncated_direct(&set, &kernel, 32, &phis, tau);
            for (i, &phi) in phis.iter().enumerate() {
                let direct = kde_direct(&set, &kernel, DiskPoint::from_coset(Coset::new(phi, tau).unwrap()));
                let spectral = unclipped[i][j];
                err = err.max((spectral.max(0.0) - direct).abs());
                trunc_err = trunc_err.max((truncated[i].max(0.0) - direct).abs());
                gap = gap.max((spectral - truncated[i]).abs());
                peak = peak.max(direct);
            }
        }
        per_set.push(format!("{:.1e}", err / peak));
        worst = worst.max(err / peak);
        floor = floor.max(trunc_err / peak);
        vs_truncated = vs_truncated.max(gap / peak);
    }
    outcome(
        worst < 0.01,
        format!(
            "5 sets of 20 samples in tau < 3, 32x32 grid, m_max 32: max relative L-inf error {worst:.2e} \
             (limit 1e-2; per set {}); the exactly truncated angular series of the direct sum has {floor:.2e}, \
             and differs from the spectral synthesis by {vs_truncated:.2e}",
            per_set.join(", ")
        ),
    )
}

fn heat_semigroup() -> Outcome {
    let grids = Grids::default();
    let mf = grids.transform().unwrap();
    let mut law: f64 = 0.0;
    let mut rise: f64 = 0.0;
    for s in [2.0, 3.0, 4.0, 6.0] {
        let k = RadialKernel::power_cosh(s).unwrap();
        let c = mf.forward(&k.radial(grids.radial).unwrap()).unwrap();
        for (t1, t2) in [(0.1, 0.2), (0.5, 0.25), (1.0, 2.0)] {
            let twice = heat_multiplier(&heat_multiplier(&c, t1).unwrap(), t2).unwrap();
            let once = heat_multiplier(&c, t1 + t2).unwrap();
            // e^{-lambda t} carries a relative rounding error of about lambda t eps,
            // so the gap is measured in units of eps (1 + lambda t)
            for ((a, b), k) in twice.values().iter().zip(once.values()).zip(c.grid.nodes()) {
                let gap = (a - b).abs();
                let units = if b.abs() >= f64::MIN_POSITIVE {
                    gap / (b.abs() * f64::EPSILON * (1.0 + (0.25 + k * k) * (t1 + t2)))
                } else if gap <= f64::MIN_POSITIVE {
                    0.0
                } else {
                    f64::INFINITY
                };
                law = law.max(units);
            }
        }
        let mut prev = f64::INFINITY;
        for i in 0..=20 {
            let t = 0.1 * i as f64;
            let sup = mf.inverse(&heat_multiplier(&c, t).unwrap()).unwrap().max_abs();
            rise = rise.max(sup - prev);
            prev = sup;
        }
    }
    outcome(
        law <= 4.0 && rise <= 1e-6,
        format!(
            "semigroup gap {law:.2} eps (1 + lambda t) (limit 4), largest sup-norm increase {rise:.2e} (limit 1e-6)"
        ),
    )
}

fn texture_pipeline() -> Outcome {
    let amplitudes = [0.0, 0.15, 0.4];
    let textures: Vec<(String, _)> = amplitudes
        .iter()
        .enumerate()
        .map(|(i, &a)| (format!("a{i}"), noise_texture(128, a, 11 + i as u64)))
        .collect();
    let cfg = TextureConfig::default();
    let orders: [[usize; 3]; 3] = [[0, 1, 2], [2, 0, 1], [1, 2, 0]];
    let mut runs = Vec::new();
    let mut slowest = Duration::ZERO;
    for (threads, order) in [(1, orders[0]), (2, orders[0]), (1, orders[1]), (3, orders[2])] {
        let input: Vec<_> = order.iter().map(|&i| textures[i].clone()).collect();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let start = Instant::now();
        let r = pool.install(|| texture_rank(&input, &cfg)).unwrap();
        slowest = slowest.max(start.elapsed());
        runs.push(r.ranking);
    }
    let ids: Vec<Vec<String>> = runs.iter().map(|r| r.iter().map(|(id, _)| id.clone()).collect()).collect();
    let monotone = ids[0] == ["a0", "a1", "a2"] || ids[0] == ["a2", "a1", "a0"];
    let stable_order = ids.iter().all(|i| *i == ids[0]);
    let coords = |r: &Vec<(String, f64)>| r.iter().map(|(_, x)| x.to_bits()).collect::<Vec<_>>();
    let bitwise_threads = coords(&runs[0]) == coords(&runs[1]);
    let pass = monotone && stable_order && bitwise_threads && slowest < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "ranking {:?}, monotone {monotone}, same order in all 4 runs {stable_order}, \
             bit-identical across thread counts {bitwise_threads}, slowest run {:.1} s (limit 60 s)",
            runs[0],
            slowest.as_secs_f64()
        ),
    )
}

fn desaturation_pipeline() -> Outcome {
    let cfg = DesaturateConfig::default();
    let schedule = time_schedule(0.05, 16).unwrap();

    let gray = grayscale(&color_field(64, 64, 3));
    let fixed = desaturate(&gray, &schedule, &cfg)
        .unwrap()
        .iter()
        .all(|o| o.rgb() == gray.rgb());

    let grids = Grids::default();
    let c = grids
        .transform()
        .unwrap()
        .forward(&RadialKernel::power_cosh(4.0).unwrap().radial(grids.radial).unwrap())
        .unwrap();
    let identity = heat_multiplier(&c, 0.0).unwrap() == c;

    let img = two_tone(64, 64, [200, 60, 60], [60, 80, 200]);
    let start = Instant::now();
    let out = desaturate(&img, &schedule, &cfg).unwrap();
    let elapsed = start.elapsed();
    let means: Vec<f64> = out.iter().map(|o| o.mean_chroma()).collect();
    let non_increasing = out.len() == 16 && means.windows(2).all(|w| w[1] <= w[0]);
    outcome(
        fixed && identity && non_increasing && elapsed < Duration::from_secs(120),
        format!(
            "gray fixed point {fixed}, t=0 identity {identity}, 16 steps non-increasing {non_increasing} \
             (mean chroma {:.2} -> {:.2}), {:.2} s (limit 120 s)",
            means[0],
            means[means.len() - 1],
            elapsed.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, f64, fn() -> Outcome); 10] = [
        ("conical identities at tau = 0", 1.0, conical_identities),
        ("quadrature convergence 256 vs 2048 nodes", 30.0, quadrature_convergence),
        ("MFT round trip", 60.0, mft_round_trip),
        ("Parseval for the s = 2 kernel", 10.0, parseval),
        ("addition formula", 60.0, addition_formula),
        ("geometry invariance", 5.0, geometry_invariance),
        ("KDE separation", 120.0, kde_separation),
        ("heat semigroup", 30.0, heat_semigroup),
        ("texture pipeline", 60.0, texture_pipeline),
        ("desaturation pipeline", 120.0, desaturation_pipeline),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let pass = o.pass && secs < *limit;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:2} {}: {name}: {} [{secs:.2} s, limit {limit} s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
