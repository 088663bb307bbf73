//! Circular Hilbert transforms, the linearized Carleson operator and its
//! adjoint, the modulation factor chi and the TT* quadratic form.
//!
//! All singular integrals are realized in frequency space. The only
//! direct double-sum quadrature in the crate is the quadratic form
//! `B(g, N)`, whose kernel is bounded off the diagonal and vanishes on it.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::blaschke::PhaseTable;
use crate::circle::{from_spectrum, reduce_angle, to_spectrum, CircleGrid, GridFunction};
use crate::error::{Error, Result};

/// Grid-size guard for the O(N^2) quadratic form.
pub const QUADRATIC_FORM_MAX_GRID: usize = 1 << 13;

/// An integer stopping index per grid point, the linearization of the
/// maximal operator.
#[derive(Debug, Clone)]
pub struct LevelFunction {
    grid: CircleGrid,
    levels: Vec<i64>,
    min_level: i64,
    max_level: i64,
}

impl LevelFunction {
    pub fn new(grid: CircleGrid, levels: Vec<i64>, min_level: i64, max_level: i64) -> Result<Self> {
        if levels.len() != grid.n_points() {
            return Err(Error::invalid("level count does not match grid size"));
        }
        if let Some(&bad) = levels.iter().find(|&&l| l < min_level || l > max_level) {
            return Err(Error::invalid(format!(
                "level {bad} outside declared range [{min_level}, {max_level}]"
            )));
        }
        Ok(LevelFunction {
            grid,
            levels,
            min_level,
            max_level,
        })
    }

    pub fn constant(grid: CircleGrid, level: i64) -> Self {
        LevelFunction {
            grid,
            levels: vec![level; grid.n_points()],
            min_level: level,
            max_level: level,
        }
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    pub fn level(&self, j: usize) -> i64 {
        self.levels[j]
    }

    pub fn min_level(&self) -> i64 {
        self.min_level
    }

    pub fn max_level(&self) -> i64 {
        self.max_level
    }

    /// Distinct levels actually occurring, sorted.
    pub fn occurring_levels(&self) -> Vec<i64> {
        let mut ls = self.levels.clone();
        ls.sort_unstable();
        ls.dedup();
        ls
    }

    /// CSV dump with columns `theta,level`.
    pub fn to_csv(&self) -> String {
        use crate::circle::fmt_g17;
        let mut out = String::from("theta,level\n");
        for (j, &l) in self.levels.iter().enumerate() {
            out.push_str(&format!("{},{l}\n", fmt_g17(self.grid.theta(j))));
        }
        out
    }
}

/// Circular Hilbert transform with cotangent kernel: frequency multiplier
/// `-i sgn(k)`. For analytic f this is `-i (f - mean f)`.
pub fn hilbert_h(f: &GridFunction) -> GridFunction {
    let mut s = to_spectrum(f);
    s.multiply(|k| match k.cmp(&0) {
        std::cmp::Ordering::Greater => Complex64::new(0.0, -1.0),
        std::cmp::Ordering::Equal => Complex64::new(0.0, 0.0),
        std::cmp::Ordering::Less => Complex64::new(0.0, 1.0),
    });
    from_spectrum(&s)
}

/// Partial sums of the Leibniz series `sum_{j=1}^{n} (-1)^{j-1}/(2j-1)`.
fn leibniz_partial_sums(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for j in 1..=n {
        acc += if j % 2 == 1 { 1.0 } else { -1.0 } / (2 * j - 1) as f64;
        out.push(acc);
    }
    out
}

/// Hilbert transform with the `1/sin((x-y)/2)` kernel, realized as the
/// frequency multiplier `-i sgn(k) (4/pi) sum_{j=1}^{|k|} (-1)^{j-1}/(2j-1)`.
pub fn hilbert_tilde(f: &GridFunction) -> GridFunction {
    let n = f.grid().n_points();
    let sums = leibniz_partial_sums(n / 2);
    let mut s = to_spectrum(f);
    s.multiply(|k| {
        let a = k.unsigned_abs() as usize;
        let sgn = (k.signum()) as f64;
        Complex64::new(0.0, -sgn * (4.0 / PI) * sums[a])
    });
    from_spectrum(&s)
}

// 16-point Gauss-Legendre nodes and weights on [-1, 1].
const GL16_X: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL16_W: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

fn gauss_panel(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..8 {
        acc += GL16_W[i] * (f(mid + half * GL16_X[i]) + f(mid - half * GL16_X[i]));
    }
    acc * half
}

/// Sine coefficient of the bounded correction kernel `tan(t/4)` computed
/// by panelled Gauss quadrature: `(1/pi) int_0^pi tan(t/4) sin(k t) dt`.
/// Independent of the Leibniz-series closed form; serves as its oracle.
pub fn correction_kernel_sine_coeff(k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let panels = k / 2 + 4;
    let h = PI / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let a = p as f64 * h;
        acc += gauss_panel(|t| (t / 4.0).tan() * (k as f64 * t).sin(), a, a + h);
    }
    acc / PI
}

/// Kernel-route realization of `hilbert_tilde`: `H f` plus spectral
/// convolution with `tan(t/4)`, the kernel coefficients coming from
/// quadrature rather than the closed form.
pub fn hilbert_tilde_kernel_route(f: &GridFunction) -> GridFunction {
    let n = f.grid().n_points();
    let coeffs: Vec<f64> = (0..=n / 2).map(correction_kernel_sine_coeff).collect();
    let hf = hilbert_h(f);
    let mut s = to_spectrum(f);
    s.multiply(|k| {
        let a = k.unsigned_abs() as usize;
        let sgn = k.signum() as f64;
        Complex64::new(0.0, -sgn * coeffs[a])
    });
    let corr = from_spectrum(&s);
    let vals = hf
        .values()
        .iter()
        .zip(corr.values())
        .map(|(a, b)| a + b)
        .collect();
    GridFunction::new(f.grid(), vals).expect("finite by construction")
}

fn check_levels_in_table(table: &PhaseTable, levels: &LevelFunction) -> Result<()> {
    if levels.grid() != table.grid() {
        return Err(Error::invalid("level function grid does not match phase table"));
    }
    for &l in levels.levels() {
        if l < table.n_min() || l > table.n_max() {
            return Err(Error::invalid(format!(
                "level {l} outside phase table range [{}, {}]",
                table.n_min(),
                table.n_max()
            )));
        }
    }
    Ok(())
}

/// Linearized Carleson operator `T_N f(x) = Htilde(f e^{-i psi_{N(x)}})(x)`,
/// computed with one transform per occurring level.
pub fn linearized_carleson(
    f: &GridFunction,
    table: &PhaseTable,
    levels: &LevelFunction,
) -> Result<GridFunction> {
    if f.grid() != table.grid() {
        return Err(Error::invalid("linearized_carleson: grid mismatch"));
    }
    check_levels_in_table(table, levels)?;
    let grid = f.grid();
    let n = grid.n_points();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for m in levels.occurring_levels() {
        let psi = table.psi_row(m)?;
        let demod = GridFunction::new(
            grid,
            (0..n)
                .map(|j| f.values()[j] * Complex64::from_polar(1.0, -psi[j]))
                .collect(),
        )?;
        let t = hilbert_tilde(&demod);
        for j in 0..n {
            if levels.level(j) == m {
                out[j] = t.values()[j];
            }
        }
    }
    Ok(GridFunction::new(grid, out)?)
}

/// Adjoint `T_N* g(y) = - sum_m e^{i psi_m(y)} Htilde(g 1_{A_m})(y)`.
pub fn linearized_adjoint(
    g: &GridFunction,
    table: &PhaseTable,
    levels: &LevelFunction,
) -> Result<GridFunction> {
    if g.grid() != table.grid() {
        return Err(Error::invalid("linearized_adjoint: grid mismatch"));
    }
    check_levels_in_table(table, levels)?;
    let grid = g.grid();
    let n = grid.n_points();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for m in levels.occurring_levels() {
        let piece = GridFunction::new(
            grid,
            (0..n)
                .map(|j| {
                    if levels.level(j) == m {
                        g.values()[j]
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect(),
        )?;
        let t = hilbert_tilde(&piece);
        let psi = table.psi_row(m)?;
        for j in 0..n {
            out[j] -= Complex64::from_polar(1.0, psi[j]) * t.values()[j];
        }
    }
    Ok(GridFunction::new(grid, out)?)
}

/// Modulation factor `chi_N(x, z) = sgn(N(z) - N(x)) sin((psi_{N(z)} - psi_{N(x)})(x))`.
pub fn chi(table: &PhaseTable, levels: &LevelFunction, x_index: usize, z_index: usize) -> f64 {
    let nx = levels.level(x_index);
    let nz = levels.level(z_index);
    if nz == nx {
        return 0.0;
    }
    let sgn = if nz > nx { 1.0 } else { -1.0 };
    sgn * (table.psi(nz, x_index) - table.psi(nx, x_index)).sin()
}

/// The TT* quadratic form
/// `B(g, N) = (1/2pi)^2 int int g(x) g(z) chi_N(x,z) / sin((z-x)/2) dx dz`,
/// discretized as a double sum with `1/N^2` weights. Diagonal terms are
/// zero because chi vanishes there.
pub fn quadratic_form_b(
    g: &GridFunction,
    table: &PhaseTable,
    levels: &LevelFunction,
) -> Result<f64> {
    if !g.is_real() {
        return Err(Error::invalid("quadratic_form_b requires a real-valued g"));
    }
    if g.grid() != table.grid() {
        return Err(Error::invalid("quadratic_form_b: grid mismatch"));
    }
    check_levels_in_table(table, levels)?;
    let n = g.grid().n_points();
    if n > QUADRATIC_FORM_MAX_GRID {
        return Err(Error::guard(format!(
            "quadratic form is O(N^2); grid size {n} exceeds {QUADRATIC_FORM_MAX_GRID}"
        )));
    }
    let grid = g.grid();
    let gv: Vec<f64> = g.values().iter().map(|v| v.re).collect();
    // half-angle sines of grid differences, indexed by (j_z - j_x) mod N
    let half_sin: Vec<f64> = (0..n)
        .map(|d| (reduce_angle(grid.theta(d)) / 2.0).sin())
        .collect();
    let mut acc = 0.0f64;
    for jx in 0..n {
        if gv[jx] == 0.0 {
            continue;
        }
        let nx = levels.level(jx);
        for jz in 0..n {
            if jz == jx || gv[jz] == 0.0 {
                continue;
            }
            let nz = levels.level(jz);
            if nz == nx {
                continue;
            }
            let sgn = if nz > nx { 1.0 } else { -1.0 };
            let c = sgn * (table.psi(nz, jx) - table.psi(nx, jx)).sin();
            acc += gv[jx] * gv[jz] * c / half_sin[(jz + n - jx) % n];
        }
    }
    Ok(acc / (n * n) as f64)
}

/// Exact derivative of `psi_{m'} - psi_m` at a point, a sum of Poisson
/// kernels; positive whenever m' > m.
pub fn psi_diff_deriv(table: &PhaseTable, m_lo: i64, m_hi: i64, y: f64) -> Result<f64> {
    if m_lo < table.n_min() || m_hi > table.n_max() || m_lo > m_hi {
        return Err(Error::invalid("psi_diff_deriv: bad index range"));
    }
    let mut acc = 0.0;
    for j in (m_lo + 1)..=m_hi {
        let a = table.sequence().point(j)?;
        acc += crate::blaschke::mobius_phase_deriv(a, y, 1)?;
    }
    Ok(acc)
}
