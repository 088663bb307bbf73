//! Uniform grids on the circle, quadrature, discrete Fourier analysis,
//! the Hardy projection and the Hardy-Littlewood maximal function.
//!
//! All integrals over the circle carry the 1/(2pi) normalization, so the
//! inner product of two grid functions is the plain average
//! `(1/N) sum_j f_j conj(g_j)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub const TAU: f64 = 2.0 * PI;

/// Reduce an angle to the symmetric interval (-pi, pi].
pub fn reduce_angle(x: f64) -> f64 {
    let mut t = x.rem_euclid(TAU);
    if t > PI {
        t -= TAU;
    }
    t
}

/// A power-of-two uniform grid of angles `theta_j = 2 pi j / N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleGrid {
    n_points: usize,
}

impl CircleGrid {
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < 2 || !n_points.is_power_of_two() {
            return Err(Error::invalid(format!(
                "grid size must be a power of two >= 2, got {n_points}"
            )));
        }
        Ok(CircleGrid { n_points })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn step(&self) -> f64 {
        TAU / self.n_points as f64
    }

    /// Angle of grid point `j` in [0, 2pi).
    pub fn theta(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n_points as f64
    }

    /// Angle of grid point `j` reduced to (-pi, pi].
    pub fn theta_symmetric(&self, j: usize) -> f64 {
        let n = self.n_points;
        let j = j % n;
        if 2 * j <= n {
            self.theta(j)
        } else {
            self.theta(j) - TAU
        }
    }

    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.theta(j))
    }
}

/// Complex samples of a function at the grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: CircleGrid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: CircleGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::invalid(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.n_points()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::invalid("grid function contains non-finite values"));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn from_fn(grid: CircleGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.thetas().map(f).collect();
        GridFunction { grid, values }
    }

    pub fn constant(grid: CircleGrid, c: Complex64) -> Self {
        GridFunction {
            grid,
            values: vec![c; grid.n_points()],
        }
    }

    pub fn zero(grid: CircleGrid) -> Self {
        Self::constant(grid, Complex64::new(0.0, 0.0))
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// L2 norm under the normalized measure: sqrt((1/N) sum |f_j|^2).
    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.grid.n_points() as f64)
            .sqrt()
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.grid.n_points() as f64
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// CSV dump with columns `theta,re,im`, one row per grid point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,re,im\n");
        for (j, v) in self.values.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_g17(self.grid.theta(j)),
                fmt_g17(v.re),
                fmt_g17(v.im)
            );
        }
        out
    }
}

/// 17-significant-digit formatting, enough to round-trip an f64.
pub fn fmt_g17(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Frequency-side representation. Coefficients follow the convention
/// `fhat(k) = (1/N) sum_j f_j exp(-i k theta_j)` for k in [-N/2, N/2),
/// stored internally in FFT bin order.
#[derive(Debug, Clone)]
pub struct SpectrumFunction {
    grid: CircleGrid,
    bins: Vec<Complex64>,
}

impl SpectrumFunction {
    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn zero(grid: CircleGrid) -> Self {
        SpectrumFunction {
            grid,
            bins: vec![Complex64::new(0.0, 0.0); grid.n_points()],
        }
    }

    pub fn k_min(&self) -> i64 {
        -((self.grid.n_points() / 2) as i64)
    }

    pub fn k_max(&self) -> i64 {
        (self.grid.n_points() / 2) as i64 - 1
    }

    fn bin(&self, k: i64) -> usize {
        let n = self.grid.n_points() as i64;
        debug_assert!(k >= self.k_min() && k <= self.k_max());
        k.rem_euclid(n) as usize
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.bins[self.bin(k)]
    }

    pub fn set_coeff(&mut self, k: i64, v: Complex64) {
        let b = self.bin(k);
        self.bins[b] = v;
    }

    /// Apply a frequency multiplier in place.
    pub fn multiply(&mut self, m: impl Fn(i64) -> Complex64) {
        let n = self.grid.n_points() as i64;
        for (b, v) in self.bins.iter_mut().enumerate() {
            let k = if (b as i64) < n / 2 { b as i64 } else { b as i64 - n };
            *v *= m(k);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.grid.n_points() as i64;
        self.bins.iter().enumerate().map(move |(b, &v)| {
            let k = if (b as i64) < n / 2 { b as i64 } else { b as i64 - n };
            (k, v)
        })
    }
}

/// Forward transform: `fhat(k) = (1/N) sum_j f_j exp(-i k theta_j)`.
pub fn to_spectrum(f: &GridFunction) -> SpectrumFunction {
    let n = f.grid.n_points();
    let mut bins = f.values.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut bins);
    let scale = 1.0 / n as f64;
    for v in bins.iter_mut() {
        *v *= scale;
    }
    SpectrumFunction { grid: f.grid, bins }
}

/// Inverse transform, exact at the grid points.
pub fn from_spectrum(s: &SpectrumFunction) -> GridFunction {
    let n = s.grid.n_points();
    let mut values = s.bins.clone();
    FftPlanner::new().plan_fft_inverse(n).process(&mut values);
    GridFunction {
        grid: s.grid,
        values,
    }
}

/// Normalized inner product `(1/N) sum_j f_j conj(g_j)`.
pub fn inner_product(f: &GridFunction, g: &GridFunction) -> Result<Complex64> {
    if f.grid != g.grid {
        return Err(Error::invalid("inner_product: grid mismatch"));
    }
    let n = f.grid.n_points() as f64;
    Ok(f.values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a * b.conj())
        .sum::<Complex64>()
        / n)
}

/// Zero out all strictly negative frequencies.
pub fn hardy_project(f: &GridFunction) -> GridFunction {
    let mut s = to_spectrum(f);
    s.multiply(|k| {
        if k >= 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    from_spectrum(&s)
}

/// Random trigonometric polynomial with unit-variance complex Gaussian-ish
/// coefficients on |k| <= max_abs_freq, deterministic in the seed. Keeping
/// the spectrum away from the Nyquist wrap region is required when testing
/// identities whose discrete realization involves modulations.
pub fn random_trig_poly(grid: CircleGrid, max_abs_freq: i64, seed: u64) -> Result<GridFunction> {
    use rand::prelude::*;
    if max_abs_freq < 0 || max_abs_freq >= grid.n_points() as i64 / 2 {
        return Err(Error::invalid(format!(
            "max_abs_freq {max_abs_freq} outside [0, N/2) for N = {}",
            grid.n_points()
        )));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut s = SpectrumFunction::zero(grid);
    for k in -max_abs_freq..=max_abs_freq {
        s.set_coeff(
            k,
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
        );
    }
    Ok(from_spectrum(&s))
}

/// Hardy-Littlewood maximal function: at each point, the maximum over
/// centered arcs (half-lengths 0..=N/2 grid steps, window clipped to the
/// full circle) of the arc average of |f|.
pub fn hl_maximal(f: &GridFunction) -> GridFunction {
    let n = f.grid.n_points();
    let abs: Vec<f64> = f.values.iter().map(|v| v.norm()).collect();
    // circular prefix sums over three periods: window ends can reach 2n + n/2
    let mut prefix = vec![0.0f64; 3 * n + 1];
    for i in 0..3 * n {
        prefix[i + 1] = prefix[i] + abs[i % n];
    }
    let total: f64 = prefix[n];
    let mut out = vec![0.0f64; n];
    for h in 0..=n / 2 {
        let w = (2 * h + 1).min(n);
        let inv_w = 1.0 / w as f64;
        for (j, o) in out.iter_mut().enumerate() {
            let avg = if w == n {
                total * inv_w
            } else {
                // window centered at j: indices j-h ..= j+h
                let lo = j + n - h;
                (prefix[lo + w] - prefix[lo]) * inv_w
            };
            if avg > *o {
                *o = avg;
            }
        }
    }
    GridFunction {
        grid: f.grid,
        values: out.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
    }
}
