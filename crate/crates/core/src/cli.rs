//! The `hyperdisk` command line.
//!
//! Every knob lives in [`RunConfig`]. A value given as a flag wins over the
//! `--config` file, which wins over the built-in default.
//!
//! Exit codes: 0 on success, 2 for bad input (unreadable or malformed files,
//! invalid parameters), 3 when the conical quadrature fails.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conical::{conical_p, QuadratureConfig};
use crate::density::{kde_spectral, DiskDensity, Grids, KernelFamily, RadialKernel, SampleSet};
use crate::error::Error;
use crate::hypgeo::Coset;
use crate::io;
use crate::mft::{MehlerFock, MftConfig, RadialGrid, SpectralGrid};
use crate::pipelines::{desaturate, texture_rank, time_schedule, ColorImage, DesaturateConfig, GrayImage, TextureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub tau_max: f64,
    pub n_tau: usize,
    pub kappa_max: f64,
    pub n_kappa: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = Grids::default();
        GridConfig {
            tau_max: g.radial.tau_max(),
            n_tau: g.radial.len(),
            kappa_max: g.spectral.kappa_max(),
            n_kappa: g.spectral.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelConfig {
    pub family: KernelFamily,
    pub s: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            family: KernelFamily::PowerCosh,
            s: 4.0,
        }
    }
}

/// `steps - 1` increments of `dt`, then one of `2 dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    pub dt: f64,
    pub steps: usize,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig { dt: 0.05, steps: 16 }
    }
}

/// Polar grid of the contour dumps: `phi_i = 2 pi i / n_phi`, `tau_j = tau_max j / (n_tau - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContourConfig {
    pub n_phi: usize,
    pub n_tau: usize,
    pub tau_max: f64,
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig {
            n_phi: 72,
            n_tau: 61,
            tau_max: 6.0,
        }
    }
}

impl ContourConfig {
    fn phis(&self) -> Vec<f64> {
        (0..self.n_phi).map(|i| 2.0 * PI * i as f64 / self.n_phi as f64).collect()
    }

    fn taus(&self) -> Vec<f64> {
        (0..self.n_tau)
            .map(|j| self.tau_max * j as f64 / (self.n_tau - 1) as f64)
            .collect()
    }
}

/// Everything a run depends on; the JSON form uses these field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grids: GridConfig,
    pub quadrature: QuadratureConfig,
    pub kernel: KernelConfig,
    /// Highest angular order; unset means 32 for `kde` and 0 for `texture`.
    pub m_max: Option<usize>,
    pub gain: f64,
    pub window: usize,
    pub time_schedule: ScheduleConfig,
    pub contour: ContourConfig,
    /// unset: one worker per core
    pub threads: Option<usize>,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grids: GridConfig::default(),
            quadrature: QuadratureConfig::default(),
            kernel: KernelConfig::default(),
            m_max: None,
            gain: 1.0,
            window: 10,
            time_schedule: ScheduleConfig::default(),
            contour: ContourConfig::default(),
            threads: None,
            out_dir: PathBuf::from("."),
            seed: 42,
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<(), Error> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be positive, got {v}"),
        })
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })
    }

    /// Checks every field; nothing is computed before this passes.
    pub fn validate(&self) -> Result<(), Error> {
        self.to_grids()?;
        self.kernel()?;
        positive("gain", self.gain)?;
        if self.window < 2 {
            return Err(Error::InvalidParameter {
                name: "window",
                reason: format!("must be at least 2, got {}", self.window),
            });
        }
        time_schedule(self.time_schedule.dt, self.time_schedule.steps)?;
        positive("contour.tau_max", self.contour.tau_max)?;
        if self.contour.n_phi == 0 || self.contour.n_tau < 2 {
            return Err(Error::InvalidParameter {
                name: "contour",
                reason: "need n_phi >= 1 and n_tau >= 2".into(),
            });
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter {
                name: "threads",
                reason: "must be positive".into(),
            });
        }
        Ok(())
    }

    pub fn to_grids(&self) -> Result<Grids, Error> {
        self.quadrature.validate()?;
        Ok(Grids {
            radial: RadialGrid::new(self.grids.tau_max, self.grids.n_tau)?,
            spectral: SpectralGrid::new(self.grids.kappa_max, self.grids.n_kappa)?,
            config: MftConfig {
                quadrature: self.quadrature,
                ..MftConfig::default()
            },
        })
    }

    pub fn kernel(&self) -> Result<RadialKernel, Error> {
        match self.kernel.family {
            KernelFamily::PowerCosh => RadialKernel::power_cosh(self.kernel.s),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hyperdisk", version, about = "Harmonic analysis on the hyperbolic disk")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every command; each one overrides the config file.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON file with RunConfig fields
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// kernel exponent in cosh(tau)^-s
    #[arg(long, global = true)]
    pub s: Option<f64>,
    #[arg(long, global = true)]
    pub m_max: Option<usize>,
    #[arg(long, global = true)]
    pub tau_max: Option<f64>,
    #[arg(long, global = true)]
    pub n_tau: Option<usize>,
    #[arg(long, global = true)]
    pub kappa_max: Option<f64>,
    #[arg(long, global = true)]
    pub n_kappa: Option<usize>,
    /// minimum trapezoid nodes of the conical integral
    #[arg(long, global = true)]
    pub n_theta: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mehler-Fock transform of a radial or spectrum file
    Mft {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "forward")]
        direction: Direction,
    },
    /// Print one conical function value
    Conical {
        #[arg(long, allow_negative_numbers = true)]
        m: i32,
        #[arg(long, allow_negative_numbers = true)]
        kappa: f64,
        #[arg(long)]
        tau: f64,
    },
    /// Density estimate of disk samples
    Kde {
        /// `phi,tau[,weight]` rows
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        samples: Option<PathBuf>,
        /// draw this many samples from the seeded generator instead
        #[arg(long)]
        random: Option<usize>,
    },
    /// Order a directory of grayscale textures
    Texture {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        gain: Option<f64>,
    },
    /// Heat-flow desaturation of a color image
    Desaturate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        window: Option<usize>,
    },
}

/// Config file (or defaults) with the command-line overrides applied.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, Error> {
    let c = &cli.common;
    let mut cfg = match &c.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    fn set<T: Copy>(slot: &mut T, v: Option<T>) {
        if let Some(v) = v {
            *slot = v;
        }
    }
    if let Some(dir) = &c.out_dir {
        cfg.out_dir = dir.clone();
    }
    if c.threads.is_some() {
        cfg.threads = c.threads;
    }
    if c.m_max.is_some() {
        cfg.m_max = c.m_max;
    }
    set(&mut cfg.seed, c.seed);
    set(&mut cfg.kernel.s, c.s);
    set(&mut cfg.grids.tau_max, c.tau_max);
    set(&mut cfg.grids.n_tau, c.n_tau);
    set(&mut cfg.grids.kappa_max, c.kappa_max);
    set(&mut cfg.grids.n_kappa, c.n_kappa);
    set(&mut cfg.quadrature.n_theta, c.n_theta);
    match &cli.command {
        Command::Texture { gain, .. } => set(&mut cfg.gain, *gain),
        Command::Desaturate { dt, steps, window, .. } => {
            set(&mut cfg.time_schedule.dt, *dt);
            set(&mut cfg.time_schedule.steps, *steps);
            set(&mut cfg.window, *window);
        }
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn exit_code(e: &Error) -> u8 {
    if e.is_quadrature_failure() {
        3
    } else {
        2
    }
}

/// Parses the arguments, runs the command and maps errors to exit codes.
pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Runs one parsed command inside a pool of the configured size.
pub fn run(cli: &Cli) -> Result<(), Error> {
    let cfg = resolve_config(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidParameter {
            name: "threads",
            reason: e.to_string(),
        })?;
    pool.install(|| match &cli.command {
        Command::Mft { input, direction } => cmd_mft(&cfg, input, *direction),
        Command::Conical { m, kappa, tau } => {
            println!("{}", cmd_conical(&cfg, *m, *kappa, *tau)?);
            Ok(())
        }
        Command::Kde { samples, random } => cmd_kde(&cfg, samples.as_deref(), *random),
        Command::Texture { input, .. } => cmd_texture(&cfg, input),
        Command::Desaturate { input, .. } => cmd_desaturate(&cfg, input),
    })
}

/// Transforms `input` and writes `<stem>_spectrum.csv` or `<stem>_radial.csv`.
pub fn cmd_mft(cfg: &RunConfig, input: &Path, direction: Direction) -> Result<(), Error> {
    let grids = cfg.to_grids()?;
    let series = io::read_series(input)?;
    match (direction, series) {
        (Direction::Forward, io::Series::Radial(f)) => {
            let mf = MehlerFock::shared(f.grid, grids.spectral, &grids.config)?;
            let c = mf.forward(&f)?;
            let back = mf.inverse(&c)?;
            if f.l2_norm() > 0.0 {
                log::info!("round-trip relative L2 error {:.3e}", back.relative_l2_error(&f)?);
            } else {
                log::info!("input has zero norm; no round-trip error");
            }
            let out = io::derived_path(&cfg.out_dir, input, "_spectrum.csv");
            io::write_spectrum(&out, &c)?;
            log::info!("wrote {}", out.display());
        }
        (Direction::Inverse, io::Series::Spectrum(c)) => {
            let mf = MehlerFock::shared(grids.radial, c.grid, &grids.config)?;
            let f = mf.inverse(&c)?;
            let out = io::derived_path(&cfg.out_dir, input, "_radial.csv");
            io::write_radial(&out, &f)?;
            log::info!("wrote {}", out.display());
        }
        (d, _) => {
            let want = if d == Direction::Forward { "radial" } else { "spectrum" };
            return Err(Error::Parse {
                path: input.to_path_buf(),
                line: 1,
                message: format!("{d:?} transform needs a {want} file"),
            });
        }
    }
    Ok(())
}

/// The value rounded to 15 significant digits, as printed by the `conical` command.
pub fn cmd_conical(cfg: &RunConfig, m: i32, kappa: f64, tau: f64) -> Result<String, Error> {
    let v = conical_p(m, kappa, tau, &cfg.quadrature)?;
    let rounded: f64 = format!("{v:.14e}").parse().expect("formatted float parses");
    // + 0.0 turns -0 into 0
    Ok(format!("{:?}", rounded + 0.0))
}

/// Samples drawn uniformly in `phi` and in `tau` over `[0, 2)`.
pub fn random_samples(n: usize, seed: u64) -> Result<SampleSet, Error> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "random",
            reason: "need at least one sample".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| Coset::new(rng.random_range(0.0..2.0 * PI), rng.random_range(0.0..2.0)))
        .collect::<Result<Vec<_>, _>>()?;
    SampleSet::new(points, None)
}

fn write_contour(cfg: &RunConfig, path: &Path, d: &DiskDensity) -> Result<(), Error> {
    let values = d.evaluate_polar(&cfg.contour.phis(), &cfg.contour.taus())?;
    io::write_contour(path, &values)
}

/// Writes `density.csv` (coefficients), `density_contour.csv` and, for drawn samples, `samples.csv`.
pub fn cmd_kde(cfg: &RunConfig, samples: Option<&Path>, random: Option<usize>) -> Result<(), Error> {
    let grids = cfg.to_grids()?;
    let set = match (samples, random) {
        (Some(path), _) => io::read_samples(path)?,
        (None, Some(n)) => {
            let set = random_samples(n, cfg.seed)?;
            io::write_samples(&cfg.out_dir.join("samples.csv"), &set)?;
            set
        }
        (None, None) => {
            return Err(Error::InvalidParameter {
                name: "samples",
                reason: "give --samples or --random".into(),
            })
        }
    };
    let m_max = cfg.m_max.unwrap_or(32);
    log::info!("{} samples, m_max {m_max}", set.len());
    let d = kde_spectral(&set, &cfg.kernel()?, m_max, &grids)?;
    io::write_density(&cfg.out_dir.join("density.csv"), &d)?;
    write_contour(cfg, &cfg.out_dir.join("density_contour.csv"), &d)?;
    log::info!("wrote density.csv and density_contour.csv to {}", cfg.out_dir.display());
    Ok(())
}

/// Loads every regular, non-hidden file of `dir` in name order. Fails listing all unreadable ones.
pub fn load_texture_dir(dir: &Path) -> Result<Vec<(String, GrayImage)>, Error> {
    let entries = std::fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut paths = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let path = entry.path();
        let hidden = entry.file_name().to_string_lossy().starts_with('.');
        if path.is_file() && !hidden {
            paths.push(path);
        }
    }
    paths.sort();
    let mut images = Vec::new();
    let mut bad = Vec::new();
    for path in &paths {
        match GrayImage::load(path) {
            Ok(img) => {
                let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                images.push((id, img));
            }
            Err(e) => bad.push(e.to_string()),
        }
    }
    if !bad.is_empty() {
        return Err(Error::InvalidParameter {
            name: "input",
            reason: format!("unreadable images: {}", bad.join("; ")),
        });
    }
    if images.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "input",
            reason: format!("{} holds {} readable images, need at least 2", dir.display(), images.len()),
        });
    }
    Ok(images)
}

/// Writes `distances.csv`, `embedding.csv`, `ranking.csv` and `<id>_density.csv` contours.
pub fn cmd_texture(cfg: &RunConfig, dir: &Path) -> Result<(), Error> {
    let images = load_texture_dir(dir)?;
    let tcfg = TextureConfig {
        gain: cfg.gain,
        kernel: cfg.kernel()?,
        m_max: cfg.m_max.unwrap_or(0),
        grids: cfg.to_grids()?,
    };
    let r = texture_rank(&images, &tcfg)?;
    let out = &cfg.out_dir;
    let mut header = vec!["id".to_string()];
    header.extend(r.ids.iter().cloned());
    io::write_matrix(&out.join("distances.csv"), Some(&header), Some(&r.ids), &r.distances)?;
    let header: Vec<String> = ["id", "x1", "x2"].iter().map(|s| s.to_string()).collect();
    io::write_matrix(&out.join("embedding.csv"), Some(&header), Some(&r.ids), &r.embedding)?;
    let mut ranking = String::from("rank,id,x1\n");
    for (i, (id, x)) in r.ranking.iter().enumerate() {
        ranking.push_str(&format!("{},{id},{x:.16e}\n", i + 1));
    }
    io::write(&out.join("ranking.csv"), &ranking)?;
    for (id, d) in r.ids.iter().zip(&r.densities) {
        write_contour(cfg, &out.join(format!("{id}_density.csv")), d)?;
    }
    for (id, x) in &r.ranking {
        log::info!("{id}: {x:.6}");
    }
    Ok(())
}

/// Writes `<stem>_t<k>.png` for `k = 1..=steps`.
pub fn cmd_desaturate(cfg: &RunConfig, input: &Path) -> Result<(), Error> {
    let img = ColorImage::load(input)?;
    let increments = time_schedule(cfg.time_schedule.dt, cfg.time_schedule.steps)?;
    let dcfg = DesaturateConfig {
        window: cfg.window,
        kernel: cfg.kernel()?,
        grids: cfg.to_grids()?,
        ..DesaturateConfig::default()
    };
    let frames = desaturate(&img, &increments, &dcfg)?;
    for (k, frame) in frames.iter().enumerate() {
        let path = io::derived_path(&cfg.out_dir, input, &format!("_t{}.png", k + 1));
        frame.save_png(&path)?;
        log::info!("{}: mean chroma {:.4}", path.display(), frame.mean_chroma());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("hyperdisk").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_beat_config_beats_default() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"seed": 7, "grids": {"n_kappa": 100}, "kernel": {"s": 3.0}}"#).unwrap();
        let p = path.to_str().unwrap();
        let cfg = resolve_config(&parse(&["--config", p, "--s", "5", "conical", "--m", "0", "--kappa", "1", "--tau", "0"])).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.kernel.s, 5.0);
        assert_eq!(cfg.grids.n_kappa, 100);
        assert_eq!(cfg.grids.n_tau, GridConfig::default().n_tau);
        let cfg = resolve_config(&parse(&["conical", "--m", "0", "--kappa", "1", "--tau", "0", "--seed", "9"])).unwrap();
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn unknown_and_invalid_fields_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"sead": 7}"#).unwrap();
        assert!(RunConfig::load(&path).is_err());
        let cfg = RunConfig {
            gain: 0.0,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig {
            threads: Some(0),
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn default_config_round_trips_through_json() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
        cfg.validate().unwrap();
    }

    #[test]
    fn conical_prints_fifteen_digits() {
        let cfg = RunConfig::default();
        assert_eq!(cmd_conical(&cfg, 0, 1.0, 0.0).unwrap(), "1.0");
        assert_eq!(cmd_conical(&cfg, 1, 1.0, 0.0).unwrap(), "0.0");
    }

    #[test]
    fn random_samples_follow_the_seed() {
        let a = random_samples(10, 3).unwrap();
        let b = random_samples(10, 3).unwrap();
        let c = random_samples(10, 4).unwrap();
        assert_eq!(a.points(), b.points());
        assert_ne!(a.points(), c.points());
    }
}
