//! Moebius boundary phases, cumulative Blaschke phases and Blaschke
//! product evaluation.
//!
//! The phase of the Moebius factor taking `w` to 0 is
//! `Psi_w(x) = t + 2 asin(|w| sin t / sqrt(1 + |w|^2 - 2|w| cos t))`
//! with `t = x - arg(w)` reduced to (-pi, pi]. Branch jumps introduced by
//! the reduction are harmless: everything downstream consumes `exp(i psi)`
//! or phase differences.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::circle::{reduce_angle, CircleGrid, TAU};
use crate::error::{Error, Result};

/// Default cap on phase-table size (rows x columns).
pub const PHASE_TABLE_BUDGET: usize = 1 << 28;

/// A point strictly inside the unit disk, in polar form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    modulus: f64,
    angle: f64,
}

impl DiskPoint {
    /// Moduli at or beyond 1 - 1e-15 are rejected: the Poisson kernel
    /// blows past double range there.
    pub fn new(modulus: f64, angle: f64) -> Result<Self> {
        if !(0.0..1.0 - 1e-15).contains(&modulus) || !angle.is_finite() {
            return Err(Error::invalid(format!(
                "disk point modulus must lie in [0, 1-1e-15), got {modulus}"
            )));
        }
        Ok(DiskPoint { modulus, angle })
    }

    pub fn origin() -> Self {
        DiskPoint {
            modulus: 0.0,
            angle: 0.0,
        }
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.angle)
    }

    /// The Moebius factor `(conj(a)/|a|) (z - a)/(1 - conj(a) z)`,
    /// reducing to `z` when `a = 0`.
    pub fn moebius_factor(&self, z: Complex64) -> Complex64 {
        if self.modulus == 0.0 {
            return z;
        }
        let a = self.to_complex();
        (a.conj() / self.modulus) * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
    }
}

/// Generator metadata for the named sequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SequenceKind {
    /// `a_n = r exp(2 pi i n (1-r))`, n = 1 ..= [1/(1-r)].
    Ar { r: f64 },
    /// `a_r` extended to negative indices n = -K ..= [1/(1-r)], K = [1/(4(1-r))].
    ArExtended { r: f64 },
    /// `b_n = (1 - 2^-[log2 n]) exp(2 pi i n 2^-[log2 n])`, truncated.
    B { truncation: usize },
    /// `d_n = r exp(2 pi i n (1-r) log(1/(1-r)))`, n = 1 ..= [1/((1-r) log(1/(1-r)))].
    Dr { r: f64 },
    Custom,
}

/// A finite indexed sequence of disk points. The index range is
/// `[i_min, i_min + len - 1]`; `i_min` may be negative.
#[derive(Debug, Clone)]
pub struct MTSequence {
    points: Vec<DiskPoint>,
    i_min: i64,
    kind: SequenceKind,
}

impl MTSequence {
    pub fn new(points: Vec<DiskPoint>, i_min: i64, kind: SequenceKind) -> Self {
        MTSequence {
            points,
            i_min,
            kind,
        }
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn i_min(&self) -> i64 {
        self.i_min
    }

    pub fn i_max(&self) -> i64 {
        self.i_min + self.points.len() as i64 - 1
    }

    pub fn point(&self, n: i64) -> Result<DiskPoint> {
        if self.is_empty() || n < self.i_min || n > self.i_max() {
            return Err(Error::invalid(format!(
                "sequence index {n} outside [{}, {}]",
                self.i_min,
                self.i_max()
            )));
        }
        Ok(self.points[(n - self.i_min) as usize])
    }

    pub fn points(&self) -> &[DiskPoint] {
        &self.points
    }

    pub fn iter_indexed(&self) -> impl Iterator<Item = (i64, DiskPoint)> + '_ {
        self.points
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.i_min + i as i64, p))
    }

    /// CSV dump with columns `index,modulus,angle`.
    pub fn to_csv(&self) -> String {
        use crate::circle::fmt_g17;
        let mut out = String::from("index,modulus,angle\n");
        for (n, p) in self.iter_indexed() {
            out.push_str(&format!("{n},{},{}\n", fmt_g17(p.modulus), fmt_g17(p.angle)));
        }
        out
    }
}

/// Boundary phase of the Moebius factor taking `w` to 0; `Psi_0(x) = x`.
pub fn mobius_phase(w: DiskPoint, x: f64) -> f64 {
    if w.modulus == 0.0 {
        return x;
    }
    let t = reduce_angle(x - w.angle);
    let rho = w.modulus;
    let d = (1.0 + rho * rho - 2.0 * rho * t.cos()).sqrt();
    let s = (rho * t.sin() / d).clamp(-1.0, 1.0);
    t + 2.0 * s.asin()
}

/// Closed-form derivatives of the Moebius phase. Order 1 is the Poisson
/// kernel `(1-|w|^2)/(1+|w|^2-2|w|cos(x-arg w))`; the denominator is
/// evaluated in the cancellation-free half-angle form
/// `(1-|w|)^2 + 4|w| sin^2(t/2)` so the kernel stays accurate to relative
/// machine precision arbitrarily close to the pole.
pub fn mobius_phase_deriv(w: DiskPoint, x: f64, order: u32) -> Result<f64> {
    let rho = w.modulus;
    let t = x - w.angle;
    let s = (t / 2.0).sin();
    let denom = (1.0 - rho) * (1.0 - rho) + 4.0 * rho * s * s;
    match order {
        1 => Ok((1.0 - rho * rho) / denom),
        2 => Ok(-2.0 * rho * (1.0 - rho * rho) * t.sin() / (denom * denom)),
        _ => Err(Error::invalid(format!(
            "phase derivative order must be 1 or 2, got {order}"
        ))),
    }
}

/// Cumulative phases `psi_n(theta_j) = sum_{j=i_min}^{n} Psi_{a_j}(theta_j)`
/// tabulated on a grid. Row `i_min - 1` is identically zero.
#[derive(Debug, Clone)]
pub struct PhaseTable {
    seq: MTSequence,
    grid: CircleGrid,
    // rows n = i_min-1 ..= i_max
    psi: Vec<Vec<f64>>,
}

impl PhaseTable {
    pub fn sequence(&self) -> &MTSequence {
        &self.seq
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn n_min(&self) -> i64 {
        self.seq.i_min - 1
    }

    pub fn n_max(&self) -> i64 {
        self.seq.i_max()
    }

    pub fn psi_row(&self, n: i64) -> Result<&[f64]> {
        if n < self.n_min() || n > self.n_max() {
            return Err(Error::invalid(format!(
                "phase index {n} outside [{}, {}]",
                self.n_min(),
                self.n_max()
            )));
        }
        Ok(&self.psi[(n - self.n_min()) as usize])
    }

    /// `psi_n(theta_j)` without bounds re-checking beyond debug assertions.
    pub fn psi(&self, n: i64, j: usize) -> f64 {
        self.psi[(n - self.n_min()) as usize][j]
    }
}

/// Tabulate cumulative phases for the sequence on the grid.
pub fn build_phase_table(seq: &MTSequence, grid: CircleGrid) -> Result<PhaseTable> {
    build_phase_table_with_budget(seq, grid, PHASE_TABLE_BUDGET)
}

pub fn build_phase_table_with_budget(
    seq: &MTSequence,
    grid: CircleGrid,
    budget: usize,
) -> Result<PhaseTable> {
    let rows = seq.len() + 1;
    let n = grid.n_points();
    let need = rows.saturating_mul(n);
    if need > budget {
        return Err(Error::guard(format!(
            "phase table needs {need} entries, budget is {budget}"
        )));
    }
    let mut psi = Vec::with_capacity(rows);
    psi.push(vec![0.0f64; n]);
    for (_, a) in seq.iter_indexed() {
        let prev = psi.last().unwrap();
        let mut row = Vec::with_capacity(n);
        for (j, theta) in grid.thetas().enumerate() {
            row.push(prev[j] + mobius_phase(a, theta));
        }
        psi.push(row);
    }
    Ok(PhaseTable {
        seq: seq.clone(),
        grid,
        psi,
    })
}

/// Product-form Blaschke evaluation `B_n(z) = prod_{j=i_min}^{n} factor_j(z)`,
/// with `B_{i_min - 1} = 1`.
pub fn blaschke_eval(seq: &MTSequence, n: i64, z: Complex64) -> Result<Complex64> {
    if n < seq.i_min - 1 || (!seq.is_empty() && n > seq.i_max()) || (seq.is_empty() && n != seq.i_min - 1)
    {
        return Err(Error::invalid(format!(
            "Blaschke index {n} outside [{}, {}]",
            seq.i_min - 1,
            seq.i_max()
        )));
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for (j, a) in seq.iter_indexed() {
        if j > n {
            break;
        }
        prod *= a.moebius_factor(z);
    }
    Ok(prod)
}

/// Cell index `k(x) = floor(x / (2 pi (1-r)))`. Floor, not truncation:
/// negative arguments must land in the cell below zero.
pub fn cell_index(r: f64, x: f64) -> Result<i64> {
    if !(0.0 < r && r < 1.0) {
        return Err(Error::invalid(format!("cell_index needs 0 < r < 1, got {r}")));
    }
    Ok((x / (TAU * (1.0 - r))).floor() as i64)
}

/// Positivity band endpoints of `Psi_r'(y) (y^2 + (1-r)^2)/(1-r)` over a
/// grid of y in [-pi, pi]; used by the phase-derivative envelope tests.
pub fn poisson_envelope_band(r: f64, samples: usize) -> (f64, f64) {
    let w = DiskPoint::new(r, 0.0).expect("r in (0,1)");
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..samples {
        let y = -PI + TAU * (i as f64 + 0.5) / samples as f64;
        let d = mobius_phase_deriv(w, y, 1).unwrap();
        let ratio = d * (y * y + (1.0 - r) * (1.0 - r)) / (1.0 - r);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    (lo, hi)
}
