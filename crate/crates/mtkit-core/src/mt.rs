//! Malmquist-Takenaka bases: sequence generation, basis evaluation,
//! coefficients, partial sums by two independent routes, and the maximal
//! partial-sum operator.
//!
//! Partial sums are normalized as `S_n f = sum_{j <= n} <f, phi_j> phi_j`,
//! so the complement of the span of `phi_{i_min-1} ... phi_n` is
//! `B_{n+1} H^2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::blaschke::{
    build_phase_table, DiskPoint, MTSequence, PhaseTable, SequenceKind,
};
use crate::carleson::LevelFunction;
use crate::circle::{hardy_project, inner_product, CircleGrid, GridFunction, TAU};
use crate::error::{Error, Result};

/// Build one of the named point sequences, or a custom one from
/// explicit points.
///
/// `b_len` supplies the truncation length for kind `B` (taken from the
/// kind itself when `None`).
pub fn make_sequence(kind: SequenceKind, b_len: Option<usize>) -> Result<MTSequence> {
    match kind {
        SequenceKind::Ar { r } => {
            check_r(r)?;
            let l = (1.0 / (1.0 - r)).floor() as i64;
            let points = (1..=l)
                .map(|n| DiskPoint::new(r, TAU * n as f64 * (1.0 - r)))
                .collect::<Result<Vec<_>>>()?;
            Ok(MTSequence::new(points, 1, kind))
        }
        SequenceKind::ArExtended { r } => {
            check_r(r)?;
            let l = (1.0 / (1.0 - r)).floor() as i64;
            let k = (1.0 / (4.0 * (1.0 - r))).floor() as i64;
            let points = (-k..=l)
                .map(|n| DiskPoint::new(r, TAU * n as f64 * (1.0 - r)))
                .collect::<Result<Vec<_>>>()?;
            Ok(MTSequence::new(points, -k, kind))
        }
        SequenceKind::B { truncation } => {
            let len = b_len.unwrap_or(truncation);
            if len < 1 {
                return Err(Error::invalid("b-sequence truncation must be >= 1"));
            }
            let points = (1..=len as i64)
                .map(|n| {
                    let m = (n as f64).log2().floor();
                    let scale = 2f64.powf(-m);
                    DiskPoint::new(1.0 - scale, TAU * n as f64 * scale)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(MTSequence::new(
                points,
                1,
                SequenceKind::B { truncation: len },
            ))
        }
        SequenceKind::Dr { r } => {
            check_r(r)?;
            let log_factor = (1.0 / (1.0 - r)).ln();
            let l = (1.0 / ((1.0 - r) * log_factor)).floor() as i64;
            let points = (1..=l)
                .map(|n| DiskPoint::new(r, TAU * n as f64 * (1.0 - r) * log_factor))
                .collect::<Result<Vec<_>>>()?;
            Ok(MTSequence::new(points, 1, kind))
        }
        SequenceKind::Custom => Err(Error::invalid(
            "custom sequences are built with MTSequence::new",
        )),
    }
}

fn check_r(r: f64) -> Result<()> {
    if !(0.5 < r && r < 1.0) {
        return Err(Error::invalid(format!("sequence parameter r must lie in (1/2, 1), got {r}")));
    }
    Ok(())
}

/// The orthonormal family `phi_n = B_n sqrt(1-|a_{n+1}|^2)/(1 - conj(a_{n+1}) z)`
/// sampled on the boundary grid. Rows are indexed `i_min-1 ..= i_max-1`.
#[derive(Debug, Clone)]
pub struct MTBasis {
    table: PhaseTable,
    // rows n = i_min-1 ..= i_max-1
    phi: Vec<Vec<Complex64>>,
}

impl MTBasis {
    pub fn sequence(&self) -> &MTSequence {
        self.table.sequence()
    }

    pub fn grid(&self) -> CircleGrid {
        self.table.grid()
    }

    pub fn phase_table(&self) -> &PhaseTable {
        &self.table
    }

    pub fn n_min(&self) -> i64 {
        self.sequence().i_min() - 1
    }

    pub fn n_max(&self) -> i64 {
        self.sequence().i_max() - 1
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn phi_row(&self, n: i64) -> Result<&[Complex64]> {
        if n < self.n_min() || n > self.n_max() {
            return Err(Error::invalid(format!(
                "basis index {n} outside [{}, {}]",
                self.n_min(),
                self.n_max()
            )));
        }
        Ok(&self.phi[(n - self.n_min()) as usize])
    }

    pub fn phi_fn(&self, n: i64) -> Result<GridFunction> {
        Ok(GridFunction::new(self.grid(), self.phi_row(n)?.to_vec())?)
    }

    /// CSV dump with columns `n,theta,re,im`.
    pub fn to_csv(&self) -> String {
        use crate::circle::fmt_g17;
        let mut out = String::from("n,theta,re,im\n");
        for n in self.n_min()..=self.n_max() {
            let row = self.phi_row(n).unwrap();
            for (j, v) in row.iter().enumerate() {
                out.push_str(&format!(
                    "{n},{},{},{}\n",
                    fmt_g17(self.grid().theta(j)),
                    fmt_g17(v.re),
                    fmt_g17(v.im)
                ));
            }
        }
        out
    }
}

/// Minimum grid size for a sequence: 64 samples per pole scale.
pub fn required_grid_size(seq: &MTSequence) -> usize {
    let min_gap = seq
        .points()
        .iter()
        .map(|p| 1.0 - p.modulus())
        .fold(1.0f64, f64::min);
    let need = (64.0 / min_gap).ceil() as usize;
    need.next_power_of_two().max(2)
}

pub fn build_basis(seq: &MTSequence, grid: CircleGrid) -> Result<MTBasis> {
    let need = required_grid_size(seq);
    if grid.n_points() < need {
        return Err(Error::invalid(format!(
            "grid size {} below resolution guard; need at least {need}",
            grid.n_points()
        )));
    }
    build_basis_unchecked(seq, grid)
}

/// Same as [`build_basis`] without the resolution guard.
pub fn build_basis_unchecked(seq: &MTSequence, grid: CircleGrid) -> Result<MTBasis> {
    if seq.is_empty() {
        return Err(Error::invalid("cannot build a basis from an empty sequence"));
    }
    let table = build_phase_table(seq, grid)?;
    let n_pts = grid.n_points();
    let mut phi = Vec::with_capacity(seq.len());
    for n in (seq.i_min() - 1)..=(seq.i_max() - 1) {
        let a = seq.point(n + 1)?;
        let norm_factor = (1.0 - a.modulus() * a.modulus()).sqrt();
        let ac = a.to_complex().conj();
        let mut row = Vec::with_capacity(n_pts);
        for (j, theta) in grid.thetas().enumerate() {
            let b = Complex64::from_polar(1.0, table.psi(n, j));
            let z = Complex64::from_polar(1.0, theta);
            row.push(b * norm_factor / (Complex64::new(1.0, 0.0) - ac * z));
        }
        phi.push(row);
    }
    Ok(MTBasis { table, phi })
}

/// Coefficients `<f, phi_j>` for `j = n_min ..= n_max`.
#[derive(Debug, Clone)]
pub struct MTExpansion {
    n_min: i64,
    coeffs: Vec<Complex64>,
}

impl MTExpansion {
    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, n: i64) -> Result<Complex64> {
        if n < self.n_min || n > self.n_max() {
            return Err(Error::invalid(format!(
                "coefficient index {n} outside [{}, {}]",
                self.n_min,
                self.n_max()
            )));
        }
        Ok(self.coeffs[(n - self.n_min) as usize])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// CSV dump with columns `n,coeff_re,coeff_im`.
    pub fn to_csv(&self) -> String {
        use crate::circle::fmt_g17;
        let mut out = String::from("n,coeff_re,coeff_im\n");
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{}\n",
                self.n_min + i as i64,
                fmt_g17(c.re),
                fmt_g17(c.im)
            ));
        }
        out
    }
}

/// Expand `f` against the basis up to index `n_max` (inclusive).
/// Enforces the Bessel inequality as a numeric sanity check.
pub fn expand(f: &GridFunction, basis: &MTBasis, n_max: i64) -> Result<MTExpansion> {
    if f.grid() != basis.grid() {
        return Err(Error::invalid("expand: grid mismatch"));
    }
    if n_max < basis.n_min() || n_max > basis.n_max() {
        return Err(Error::invalid(format!(
            "expansion order {n_max} outside basis range [{}, {}]",
            basis.n_min(),
            basis.n_max()
        )));
    }
    let mut coeffs = Vec::with_capacity((n_max - basis.n_min() + 1) as usize);
    for n in basis.n_min()..=n_max {
        let phi = basis.phi_fn(n)?;
        coeffs.push(inner_product(f, &phi)?);
    }
    let exp = MTExpansion {
        n_min: basis.n_min(),
        coeffs,
    };
    let f_energy = f.norm().powi(2);
    if exp.energy() > f_energy + 1e-9 {
        return Err(Error::unstable(format!(
            "Bessel inequality violated: coefficient energy {} exceeds {}",
            exp.energy(),
            f_energy
        )));
    }
    Ok(exp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartialSumMethod {
    /// Direct coefficient sum `sum_{j<=n} <f,phi_j> phi_j`.
    Coefficient,
    /// Kernel identity route through Hardy projections, no singular
    /// quadrature: `S_n f = P f - B_{n+1} P (B_{n+1}^{-1} f)` realized as
    /// modulations by `exp(i psi_{n+1})`.
    Kernel,
}

pub fn partial_sum(
    f: &GridFunction,
    basis: &MTBasis,
    n: i64,
    method: PartialSumMethod,
) -> Result<GridFunction> {
    if f.grid() != basis.grid() {
        return Err(Error::invalid("partial_sum: grid mismatch"));
    }
    if n < basis.n_min() || n > basis.n_max() {
        return Err(Error::invalid(format!(
            "partial sum order {n} outside basis range [{}, {}]",
            basis.n_min(),
            basis.n_max()
        )));
    }
    match method {
        PartialSumMethod::Coefficient => {
            let exp = expand(f, basis, n)?;
            let mut acc = vec![Complex64::new(0.0, 0.0); f.grid().n_points()];
            for j in basis.n_min()..=n {
                let c = exp.coeff(j)?;
                for (a, &p) in acc.iter_mut().zip(basis.phi_row(j)?) {
                    *a += c * p;
                }
            }
            Ok(GridFunction::new(f.grid(), acc)?)
        }
        PartialSumMethod::Kernel => {
            let table = basis.phase_table();
            let psi = table.psi_row(n + 1)?;
            let n_pts = f.grid().n_points();
            let demod = GridFunction::new(
                f.grid(),
                (0..n_pts)
                    .map(|j| f.values()[j] * Complex64::from_polar(1.0, -psi[j]))
                    .collect(),
            )?;
            let p_demod = hardy_project(&demod);
            let p_f = hardy_project(f);
            let vals = (0..n_pts)
                .map(|j| {
                    p_f.values()[j]
                        - Complex64::from_polar(1.0, psi[j]) * p_demod.values()[j]
                })
                .collect();
            Ok(GridFunction::new(f.grid(), vals)?)
        }
    }
}

/// Pointwise supremum over n of |S_n f| together with the smallest index
/// attaining it at each point.
pub fn maximal_partial_sum(
    f: &GridFunction,
    basis: &MTBasis,
) -> Result<(GridFunction, LevelFunction)> {
    if f.grid() != basis.grid() {
        return Err(Error::invalid("maximal_partial_sum: grid mismatch"));
    }
    let exp = expand(f, basis, basis.n_max())?;
    let n_pts = f.grid().n_points();
    let mut running = vec![Complex64::new(0.0, 0.0); n_pts];
    let mut best = vec![0.0f64; n_pts];
    let mut argmax = vec![basis.n_min(); n_pts];
    for n in basis.n_min()..=basis.n_max() {
        let c = exp.coeff(n)?;
        let row = basis.phi_row(n)?;
        for j in 0..n_pts {
            running[j] += c * row[j];
            let mag = running[j].norm();
            if mag > best[j] {
                best[j] = mag;
                argmax[j] = n;
            }
        }
    }
    let sup = GridFunction::new(
        f.grid(),
        best.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
    )?;
    let levels = LevelFunction::new(f.grid(), argmax, basis.n_min(), basis.n_max())?;
    Ok((sup, levels))
}

/// Max orthonormality deviation `max_{i,j} |<phi_i, phi_j> - delta_ij|`.
pub fn orthonormality_deviation(basis: &MTBasis) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in basis.n_min()..=basis.n_max() {
        let fi = basis.phi_fn(i)?;
        for j in i..=basis.n_max() {
            let fj = basis.phi_fn(j)?;
            let ip = inner_product(&fi, &fj)?;
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ip - Complex64::new(target, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// Max pointwise deviation of the trigonometric reduction `phi_n = e^{i n theta}`
/// for the all-zero sequence; used by tests and the acceptance suite.
pub fn trigonometric_deviation(basis: &MTBasis) -> Result<f64> {
    let grid = basis.grid();
    let mut worst = 0.0f64;
    for n in basis.n_min()..=basis.n_max() {
        let row = basis.phi_row(n)?;
        for (j, theta) in grid.thetas().enumerate() {
            let target = Complex64::from_polar(1.0, n as f64 * theta);
            worst = worst.max((row[j] - target).norm());
        }
    }
    Ok(worst)
}

#[allow(dead_code)]
fn unused_pi_guard() -> f64 {
    PI
}
