//! Deterministic desk-scale experiments: flatness of the maximal-operator
//! ratio for the translational sequence, growth for the log-spread
//! sequence with its pointwise imaginary-part lower bound, lacunary block
//! phase-derivative sums, and the truncated dyadic sequence; all emitted
//! as CSV with seed-reproducible bytes.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::blaschke::{mobius_phase_deriv, DiskPoint, SequenceKind};
use crate::circle::{fmt_g17, CircleGrid, GridFunction, TAU};
use crate::error::{Error, Result};
use crate::mt::{build_basis, make_sequence, maximal_partial_sum, required_grid_size, MTBasis};

/// Feasibility guard on the dyadic sweep: r = 1 - 2^{-k} needs grids of
/// size 64 * 2^k, so k is capped.
pub const MAX_SWEEP_K: u32 = 10;

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Sweep range: r = 1 - 2^{-k} for k in k_min..=k_max.
    pub k_min: u32,
    pub k_max: u32,
    /// Optional grid override; by default each k uses its resolution
    /// requirement.
    pub grid: Option<usize>,
    /// Random test functions per parameter value.
    pub trials: usize,
    pub seed: u64,
    /// Lacunary block range m = 1..=m_max.
    pub m_max: u32,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            k_min: 4,
            k_max: 9,
            grid: None,
            trials: 5,
            seed: 1,
            m_max: 14,
        }
    }
}

impl ExperimentConfig {
    fn check_sweep(&self) -> Result<()> {
        if self.k_min < 1 || self.k_min > self.k_max {
            return Err(Error::invalid(format!(
                "need 1 <= k_min <= k_max, got {}..={}",
                self.k_min, self.k_max
            )));
        }
        if self.k_max > MAX_SWEEP_K {
            return Err(Error::guard(format!(
                "k_max {} beyond feasibility cap {MAX_SWEEP_K}",
                self.k_max
            )));
        }
        Ok(())
    }

    fn grid_for(&self, seq_need: usize) -> usize {
        self.grid.map_or(seq_need, |g| g.max(seq_need))
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// Random analytic polynomial with unit-variance complex Gaussian
/// coefficients on frequencies 0..=degree.
pub fn random_analytic_poly(grid: CircleGrid, degree: usize, rng: &mut ChaCha8Rng) -> GridFunction {
    let coeffs: Vec<Complex64> = (0..=degree)
        .map(|_| Complex64::new(gaussian(rng), gaussian(rng)) / 2f64.sqrt())
        .collect();
    GridFunction::from_fn(grid, |t| {
        let z = Complex64::from_polar(1.0, t);
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    })
}

fn ratio_for(f: &GridFunction, basis: &MTBasis) -> Result<f64> {
    let (sup, _) = maximal_partial_sum(f, basis)?;
    Ok(sup.norm() / f.norm())
}

/// Sum of even-indexed basis functions, the structured adversary.
fn even_index_sum(basis: &MTBasis, j_min: i64, j_max: i64) -> Result<GridFunction> {
    let n_pts = basis.grid().n_points();
    let mut acc = vec![Complex64::new(0.0, 0.0); n_pts];
    for j in j_min..=j_max {
        let row = basis.phi_row(2 * j)?;
        for (a, &p) in acc.iter_mut().zip(row) {
            *a += p;
        }
    }
    GridFunction::new(basis.grid(), acc)
}

/// Maximal-operator ratio sweep for the translational sequence.
/// CSV columns: `k,r,rho`.
pub fn run_thm1(cfg: &ExperimentConfig) -> Result<String> {
    cfg.check_sweep()?;
    let mut csv = String::from("k,r,rho\n");
    for k in cfg.k_min..=cfg.k_max {
        let r = 1.0 - 2f64.powi(-(k as i32));
        let seq = make_sequence(SequenceKind::Ar { r }, None)?;
        let grid = CircleGrid::new(cfg.grid_for(required_grid_size(&seq)))?;
        let basis = build_basis(&seq, grid)?;
        let mut rho = 0.0f64;
        for trial in 0..cfg.trials {
            let mut rng =
                ChaCha8Rng::seed_from_u64(cfg.seed ^ ((k as u64) << 32) ^ (trial as u64));
            let degree = (basis.len() * 2).min(grid.n_points() / 4);
            let f = random_analytic_poly(grid, degree, &mut rng);
            rho = rho.max(ratio_for(&f, &basis)?);
        }
        let adversary = even_index_sum(&basis, 0, basis.n_max() / 2)?;
        rho = rho.max(ratio_for(&adversary, &basis)?);
        csv.push_str(&format!("{k},{},{}\n", fmt_g17(r), fmt_g17(rho)));
    }
    Ok(csv)
}

/// Per-k output of the log-spread counterexample experiment.
pub struct CounterexampleRow {
    pub k: u32,
    pub r: f64,
    pub m: usize,
    /// Maximal-operator ratio on f = sum of even basis functions.
    pub ratio: f64,
    /// sqrt(1-r)-scaled minimum of the imaginary part over the prescribed
    /// intervals, for the partial sums starting at j = 0.
    pub scaled_min_j0: f64,
    /// Same with the sum starting at j = 1.
    pub scaled_min_j1: f64,
}

/// Lower-bound experiment for the log-spread sequence.
/// CSV columns: `k,r,m,ratio,ratio_sq,scaled_min_j0,scaled_min_j1`.
pub fn run_counterexample(cfg: &ExperimentConfig) -> Result<String> {
    let rows = counterexample_rows(cfg)?;
    let mut csv = String::from("k,r,m,ratio,ratio_sq,scaled_min_j0,scaled_min_j1\n");
    for row in rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.k,
            fmt_g17(row.r),
            row.m,
            fmt_g17(row.ratio),
            fmt_g17(row.ratio * row.ratio),
            fmt_g17(row.scaled_min_j0),
            fmt_g17(row.scaled_min_j1),
        ));
    }
    Ok(csv)
}

pub fn counterexample_rows(cfg: &ExperimentConfig) -> Result<Vec<CounterexampleRow>> {
    cfg.check_sweep()?;
    let mut out = Vec::new();
    for k in cfg.k_min..=cfg.k_max {
        let r = 1.0 - 2f64.powi(-(k as i32));
        let log_factor = (1.0 / (1.0 - r)).ln();
        // half the sequence length: the even-index test function uses
        // basis functions phi_2, phi_4, ..., phi_2m
        let m_real = 1.0 / (2.0 * (1.0 - r) * log_factor);
        let m = m_real.floor() as usize;
        let seq = make_sequence(SequenceKind::Dr { r }, None)?;
        let grid = CircleGrid::new(cfg.grid_for(required_grid_size(&seq)))?;
        let basis = build_basis(&seq, grid)?;
        let j_hi = (m as i64).min(basis.n_max() / 2);
        let f = even_index_sum(&basis, 1, j_hi)?;
        let ratio = ratio_for(&f, &basis)?;

        // running partial sums of phi_0 + phi_2 + ... + phi_{2n}; the
        // interval for index n sits between the angles of the (2n+2)-th
        // and (2n+3)-th sequence points, which in this angle convention
        // (consecutive poles pi/M apart) is pi*(2n+2)/M .. pi*(2n+3)/M
        let n_pts = grid.n_points();
        let mut running = vec![Complex64::new(0.0, 0.0); n_pts];
        let phi0 = basis.phi_row(0)?.to_vec();
        for (a, &p) in running.iter_mut().zip(&phi0) {
            *a += p;
        }
        let mut worst_j0 = f64::INFINITY;
        let mut worst_j1 = f64::INFINITY;
        let scale = (1.0 - r).sqrt();
        let n_hi = j_hi.min(((2.0 * m_real - 3.0) / 2.0).floor() as i64);
        for n in 1..=n_hi {
            let row = basis.phi_row(2 * n)?;
            for (a, &p) in running.iter_mut().zip(row) {
                *a += p;
            }
            let theta_lo = std::f64::consts::PI * (2.0 * n as f64 + 2.0) / m_real;
            let theta_hi = std::f64::consts::PI * (2.0 * n as f64 + 3.0) / m_real;
            let step = TAU / n_pts as f64;
            let j_lo = (theta_lo / step).ceil() as usize;
            let j_fin = (theta_hi / step).floor() as usize;
            for j in j_lo..=j_fin.min(n_pts - 1) {
                let im_full = running[j].im;
                worst_j0 = worst_j0.min(scale * im_full);
                worst_j1 = worst_j1.min(scale * (im_full - phi0[j].im));
            }
        }
        out.push(CounterexampleRow {
            k,
            r,
            m,
            ratio,
            scaled_min_j0: worst_j0,
            scaled_min_j1: worst_j1,
        });
    }
    Ok(out)
}

/// Per-m output of the lacunary block computation.
pub struct LacunaryRow {
    pub m: u32,
    /// Block Poisson sum at y = 0 minus 2^m. NOTE: this drift grows like
    /// 2^m, not m — the block points form a full angular lattice, so the
    /// sum obeys the exact identity
    /// `sum_j P_r(y - 2 pi j/N) = N (1 - r^{2N}) / (1 + r^{2N} - 2 r^N cos(N y))`
    /// whose value at a lattice point is N (1 + r^N)/(1 - r^N) ~ 2.16 N.
    /// Only the circle average of the block derivative sum equals N.
    pub d_minus_pow: f64,
    /// Same drift computed through the lattice identity (independent
    /// closed-form oracle).
    pub d_minus_pow_identity: f64,
    /// Max over one period of |sum of second phase derivatives|; grows
    /// like 4^m by the same identity.
    pub psi2_max: f64,
    /// Relative error of the closed-form second derivative against a
    /// central finite difference of the first, at the scan maximizer.
    pub fd_rel: f64,
}

pub fn lacunary_rows(cfg: &ExperimentConfig) -> Result<Vec<LacunaryRow>> {
    if cfg.m_max < 1 || cfg.m_max > 20 {
        return Err(Error::invalid(format!(
            "m_max must lie in 1..=20, got {}",
            cfg.m_max
        )));
    }
    let mut out = Vec::new();
    for m in 1..=cfg.m_max {
        let pow = 2u64.pow(m) as i64;
        let r = 1.0 - 2f64.powi(-(m as i32));
        let spacing = TAU / pow as f64;
        let mut d = 0.0f64;
        for j in 1..=pow {
            let s = (spacing * j as f64 / 2.0).sin();
            d += (1.0 - r * r) / ((1.0 - r) * (1.0 - r) + 4.0 * r * s * s);
        }
        // the block points fill a full angular lattice of spacing
        // 2 pi 2^{-m}, so the derivative sums are periodic with that
        // period: scanning one cell suffices
        let points: Vec<DiskPoint> = (1..=pow)
            .map(|j| DiskPoint::new(r, spacing * j as f64))
            .collect::<Result<_>>()?;
        let samples = 256usize;
        let mut psi2_max = 0.0f64;
        let mut argmax_y = 0.0f64;
        for s in 0..samples {
            let y = spacing * (s as f64 + 0.5) / samples as f64;
            let mut acc = 0.0f64;
            for p in &points {
                acc += mobius_phase_deriv(*p, y, 2)?;
            }
            if acc.abs() > psi2_max {
                psi2_max = acc.abs();
                argmax_y = y;
            }
        }
        // cross-check the closed form at the maximizer
        let h = 1e-4 * (1.0 - r);
        let mut closed = 0.0f64;
        let mut fd = 0.0f64;
        for p in &points {
            closed += mobius_phase_deriv(*p, argmax_y, 2)?;
            fd += (mobius_phase_deriv(*p, argmax_y + h, 1)?
                - mobius_phase_deriv(*p, argmax_y - h, 1)?)
                / (2.0 * h);
        }
        let fd_rel = (closed - fd).abs() / closed.abs().max(1e-300);
        let rho = r.powi(pow as i32);
        let d_identity = pow as f64 * (1.0 + rho) / (1.0 - rho);
        out.push(LacunaryRow {
            m,
            d_minus_pow: d - pow as f64,
            d_minus_pow_identity: d_identity - pow as f64,
            psi2_max,
            fd_rel,
        });
    }
    Ok(out)
}

/// Lacunary block sums. CSV columns:
/// `m,d_minus_pow,d_minus_pow_identity,psi2_max,fd_rel`.
pub fn run_lacunary(cfg: &ExperimentConfig) -> Result<String> {
    let mut csv = String::from("m,d_minus_pow,d_minus_pow_identity,psi2_max,fd_rel\n");
    for row in lacunary_rows(cfg)? {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.m,
            fmt_g17(row.d_minus_pow),
            fmt_g17(row.d_minus_pow_identity),
            fmt_g17(row.psi2_max),
            fmt_g17(row.fd_rel),
        ));
    }
    Ok(csv)
}

/// Maximal-operator ratios for the dyadic sequence truncated at depths
/// 2^m. CSV columns: `depth,rho`.
pub fn run_corollary_b(cfg: &ExperimentConfig) -> Result<String> {
    let m_cap = cfg.m_max.min(8);
    if m_cap < 1 {
        return Err(Error::invalid("corollary sweep needs m_max >= 1"));
    }
    let mut csv = String::from("depth,rho\n");
    for m in 1..=m_cap {
        let depth = 2usize.pow(m);
        let seq = make_sequence(SequenceKind::B { truncation: depth }, None)?;
        let grid = CircleGrid::new(cfg.grid_for(required_grid_size(&seq)))?;
        let basis = build_basis(&seq, grid)?;
        let mut rho = 0.0f64;
        for trial in 0..cfg.trials {
            let mut rng =
                ChaCha8Rng::seed_from_u64(cfg.seed ^ ((m as u64) << 40) ^ (trial as u64));
            let degree = (basis.len() * 2).min(grid.n_points() / 4);
            let f = random_analytic_poly(grid, degree, &mut rng);
            rho = rho.max(ratio_for(&f, &basis)?);
        }
        // first basis function: in-span, so the ratio is at least 1
        let phi0 = GridFunction::new(grid, basis.phi_row(0)?.to_vec())?;
        rho = rho.max(ratio_for(&phi0, &basis)?);
        csv.push_str(&format!("{depth},{}\n", fmt_g17(rho)));
    }
    Ok(csv)
}
