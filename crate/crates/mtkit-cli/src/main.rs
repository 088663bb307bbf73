//! `mtkit` command-line driver: basis construction, orthonormality
//! checks, maximal-operator runs, phase unwinding, structural probes and
//! the experiment sweeps, with CSV/SVG/JSON-lines emission.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 resource guard,
//! 4 numeric instability.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use mtkit_core::{
    build_basis, claim2_sigma, emit_plot, make_sequence, maximal_partial_sum,
    orthonormality_deviation, random_admissible_input, random_trig_poly, required_grid_size,
    run_corollary_b, run_counterexample, run_lacunary, run_thm1, trigonometric_deviation,
    unwind, CircleGrid, DiskPoint, Error, ExperimentConfig, MTSequence, PlotSpec,
    PolynomialH2, ProbeConfig, SequenceKind,
};

#[derive(Parser)]
#[command(name = "mtkit", about = "Rational orthogonal systems toolkit", version)]
struct Cli {
    /// Plain `key=value` config file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Boundary grid size (power of two recommended).
    #[arg(long)]
    grid: Option<usize>,
    /// RNG seed for the deterministic generators.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout summaries are printed either way.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit calibration summaries alongside the main output.
    #[arg(long)]
    calibrate: bool,
}

#[derive(Args, Clone)]
struct SeqArgs {
    /// Sequence family: ar | ar-extended | dr | b | zeros.
    #[arg(long, default_value = "ar")]
    kind: String,
    /// Dyadic parameter: r = 1 - 2^-k for ar / ar-extended / dr.
    #[arg(long)]
    k: Option<u32>,
    /// Length for the b / zeros families.
    #[arg(long)]
    len: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a basis and write it as CSV (n,theta,re,im).
    Basis {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        seq: SeqArgs,
    },
    /// Report the orthonormality deviation of a basis.
    Ortho {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        seq: SeqArgs,
    },
    /// Run the maximal partial-sum operator on a random test function.
    Maximal {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        seq: SeqArgs,
    },
    /// Unwind a polynomial; emits JSON lines, one record per step.
    Unwind {
        #[command(flatten)]
        common: Common,
        /// Coefficients c0,c1,... as comma-separated re:im pairs,
        /// e.g. "0:0,1:0,0:0,2:-1".
        #[arg(long)]
        coeffs: String,
        /// Maximum number of unwinding steps.
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
    /// Structural probe report: per-trial combined quadratic forms.
    Probe {
        #[command(flatten)]
        common: Common,
        /// Dyadic parameter: r = 1 - 2^-k.
        #[arg(long)]
        k: Option<u32>,
        /// Even dilation factor.
        #[arg(long)]
        lambda: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Experiment sweeps: thm1 | counterexample | lacunary | corollary-b.
    Exp {
        #[command(flatten)]
        common: Common,
        /// Experiment name.
        #[arg(long)]
        name: String,
        #[arg(long)]
        k_min: Option<u32>,
        #[arg(long)]
        k_max: Option<u32>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        m_max: Option<u32>,
        /// Accepted for config-file symmetry with `probe`.
        #[arg(long)]
        lambda: Option<u64>,
        /// Also render the primary column pair as an SVG plot.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
}

type FileConfig = HashMap<String, String>;

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig, Error> {
    let mut map = HashMap::new();
    if let Some(p) = path {
        let text = std::fs::read_to_string(p)?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::invalid(format!("config line {}: expected key=value", i + 1))
            })?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    Ok(map)
}

fn cfg_get<T: std::str::FromStr>(
    flag: Option<T>,
    cfg: &FileConfig,
    key: &str,
) -> Result<Option<T>, Error> {
    if flag.is_some() {
        return Ok(flag);
    }
    match cfg.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| Error::invalid(format!("config key {key}: bad value {raw:?}"))),
    }
}

fn build_sequence(seq: &SeqArgs, cfg: &FileConfig) -> Result<MTSequence, Error> {
    let kind = cfg_get(Some(seq.kind.clone()), cfg, "kind")?.unwrap();
    let k = cfg_get(seq.k, cfg, "k")?.unwrap_or(4);
    let r = 1.0 - 2f64.powi(-(k as i32));
    let len = cfg_get(seq.len, cfg, "len")?.unwrap_or(16);
    match kind.as_str() {
        "ar" => make_sequence(SequenceKind::Ar { r }, None),
        "ar-extended" => make_sequence(SequenceKind::ArExtended { r }, None),
        "dr" => make_sequence(SequenceKind::Dr { r }, None),
        "b" => make_sequence(SequenceKind::B { truncation: len }, None),
        "zeros" => Ok(MTSequence::new(
            vec![DiskPoint::origin(); len],
            1,
            SequenceKind::Custom,
        )),
        other => Err(Error::invalid(format!(
            "unknown sequence kind {other:?}; expected ar | ar-extended | dr | b | zeros"
        ))),
    }
}

fn grid_for(seq: &MTSequence, common: &Common, cfg: &FileConfig) -> Result<CircleGrid, Error> {
    let need = required_grid_size(seq);
    let n = cfg_get(common.grid, cfg, "grid")?.unwrap_or(need).max(need);
    CircleGrid::new(n)
}

fn write_or_print(out: &Option<PathBuf>, content: &str, label: &str) -> Result<(), Error> {
    match out {
        Some(path) => {
            std::fs::write(path, content)?;
            println!("{label} written to {}", path.display());
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn parse_coeffs(spec: &str) -> Result<Vec<Complex64>, Error> {
    spec.split(',')
        .map(|pair| {
            let (re, im) = pair
                .split_once(':')
                .ok_or_else(|| Error::invalid(format!("coefficient {pair:?}: expected re:im")))?;
            let re: f64 = re
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad real part {re:?}")))?;
            let im: f64 = im
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad imaginary part {im:?}")))?;
            Ok(Complex64::new(re, im))
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), Error> {
    let cfg = load_config(&cli.config)?;
    match cli.command {
        Command::Basis { common, seq } => {
            let sequence = build_sequence(&seq, &cfg)?;
            let grid = grid_for(&sequence, &common, &cfg)?;
            let basis = build_basis(&sequence, grid)?;
            println!(
                "basis: {} functions on grid {}",
                basis.len(),
                grid.n_points()
            );
            if common.out.is_some() {
                write_or_print(&common.out, &basis.to_csv(), "basis CSV")?;
            }
            Ok(())
        }
        Command::Ortho { common, seq } => {
            let sequence = build_sequence(&seq, &cfg)?;
            let grid = grid_for(&sequence, &common, &cfg)?;
            let basis = build_basis(&sequence, grid)?;
            let dev = orthonormality_deviation(&basis)?;
            println!("orthonormality deviation: {dev:.3e}");
            if seq.kind == "zeros" {
                let trig = trigonometric_deviation(&basis)?;
                println!("trigonometric deviation: {trig:.3e}");
            }
            Ok(())
        }
        Command::Maximal { common, seq } => {
            let sequence = build_sequence(&seq, &cfg)?;
            let grid = grid_for(&sequence, &common, &cfg)?;
            let basis = build_basis(&sequence, grid)?;
            let seed = cfg_get(common.seed, &cfg, "seed")?.unwrap_or(1);
            let f = random_trig_poly(grid, grid.n_points() as i64 / 4, seed)?;
            let (sup, levels) = maximal_partial_sum(&f, &basis)?;
            println!(
                "maximal ratio: {:.6} (levels {}..={})",
                sup.norm() / f.norm(),
                levels.min_level(),
                levels.max_level()
            );
            if common.out.is_some() {
                write_or_print(&common.out, &levels.to_csv(), "level CSV")?;
            }
            Ok(())
        }
        Command::Unwind {
            common,
            coeffs,
            steps,
        } => {
            let poly = PolynomialH2::new(parse_coeffs(&coeffs)?)?;
            let result = unwind(&poly, steps)?;
            let dump = result.to_json_lines();
            println!(
                "unwound {} steps, residual degree {}",
                result.steps.len(),
                result.residual.degree()
            );
            write_or_print(&common.out, &dump, "unwinding JSON lines")?;
            Ok(())
        }
        Command::Probe {
            common,
            k,
            lambda,
            trials,
        } => {
            let k = cfg_get(k, &cfg, "k")?.unwrap_or(8);
            let lambda = cfg_get(lambda, &cfg, "lambda")?.unwrap_or(8);
            let trials = cfg_get(trials, &cfg, "trials")?.unwrap_or(5);
            let seed = cfg_get(common.seed, &cfg, "seed")?.unwrap_or(1);
            let grid_n = cfg_get(common.grid, &cfg, "grid")?.unwrap_or(1 << 11);
            let r = 1.0 - 2f64.powi(-(k as i32));
            let probe_cfg = ProbeConfig::new(r, lambda)?;
            let grid = CircleGrid::new(grid_n)?;
            let mut csv = String::from("trial,r,lambda,sigma,g_norm_sq,ratio\n");
            for trial in 0..trials {
                let (g, levels) =
                    random_admissible_input(&probe_cfg, grid, seed ^ (trial as u64))?;
                let sigma = claim2_sigma(&probe_cfg, &g, &levels)?;
                let nsq = g.norm() * g.norm();
                let ratio = if nsq > 0.0 { sigma / nsq } else { 0.0 };
                csv.push_str(&format!(
                    "{trial},{},{lambda},{},{},{}\n",
                    mtkit_core::circle::fmt_g17(r),
                    mtkit_core::circle::fmt_g17(sigma),
                    mtkit_core::circle::fmt_g17(nsq),
                    mtkit_core::circle::fmt_g17(ratio),
                ));
            }
            write_or_print(&common.out, &csv, "probe report CSV")?;
            Ok(())
        }
        Command::Exp {
            common,
            name,
            k_min,
            k_max,
            trials,
            m_max,
            lambda: _,
            plot,
        } => {
            let defaults = ExperimentConfig::default();
            let exp_cfg = ExperimentConfig {
                k_min: cfg_get(k_min, &cfg, "k_min")?.unwrap_or(defaults.k_min),
                k_max: cfg_get(k_max, &cfg, "k_max")?.unwrap_or(defaults.k_max),
                grid: cfg_get(common.grid, &cfg, "grid")?,
                trials: cfg_get(trials, &cfg, "trials")?.unwrap_or(defaults.trials),
                seed: cfg_get(common.seed, &cfg, "seed")?.unwrap_or(defaults.seed),
                m_max: cfg_get(m_max, &cfg, "m_max")?.unwrap_or(defaults.m_max),
            };
            let (csv, x_col, y_col) = match name.as_str() {
                "thm1" => (run_thm1(&exp_cfg)?, "k", "rho"),
                "counterexample" => (run_counterexample(&exp_cfg)?, "k", "ratio_sq"),
                "lacunary" => (run_lacunary(&exp_cfg)?, "m", "psi2_max"),
                "corollary-b" => (run_corollary_b(&exp_cfg)?, "depth", "rho"),
                other => {
                    return Err(Error::invalid(format!(
                        "unknown experiment {other:?}; expected \
                         thm1 | counterexample | lacunary | corollary-b"
                    )))
                }
            };
            write_or_print(&common.out, &csv, "experiment CSV")?;
            if let Some(plot_path) = plot {
                let spec = PlotSpec::line_plot(x_col, y_col, &format!("{name}: {y_col} vs {x_col}"));
                std::fs::write(&plot_path, emit_plot(&csv, &spec)?)?;
                println!("plot written to {}", plot_path.display());
            }
            if common.calibrate {
                let band = calibration_summary(&csv, y_col)?;
                let path = common
                    .out
                    .as_ref()
                    .map(|p| p.with_extension("calibration"))
                    .unwrap_or_else(|| PathBuf::from(format!("{name}.calibration")));
                std::fs::write(&path, band)?;
                println!("calibration written to {}", path.display());
            }
            Ok(())
        }
    }
}

/// Min/max/band summary of one CSV column, written as key=value lines.
fn calibration_summary(csv: &str, col: &str) -> Result<String, Error> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::invalid("empty CSV"))?
        .split(',')
        .collect();
    let idx = header
        .iter()
        .position(|c| *c == col)
        .ok_or_else(|| Error::invalid(format!("missing column {col:?}")))?;
    let vals: Vec<f64> = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split(',')
                .nth(idx)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::invalid("bad CSV row"))
        })
        .collect::<Result<_, _>>()?;
    if vals.is_empty() {
        return Err(Error::invalid("no data rows"));
    }
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(format!(
        "column={col}\nmin={lo}\nmax={hi}\nband={}\n",
        if lo != 0.0 { hi / lo } else { f64::INFINITY }
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidArgument(_) | Error::Io(_) => ExitCode::from(2),
                Error::ResourceGuard(_) => ExitCode::from(3),
                Error::NumericInstability(_) => ExitCode::from(4),
            }
        }
    }
}
