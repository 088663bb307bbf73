//! Structural probes for the quadratic-form machinery: the reflection tau,
//! the dilation eta, the set E, the three associated pairs, the combined
//! quantity Sigma, and the sparse model form T(alpha) with its dilation.
//!
//! All cell maps are exact on commensurable grids: the grid step must
//! divide the cell length 2 pi (1 - r), so tau and eta permute grid points
//! with integer arithmetic and no interpolation.

use num_complex::Complex64;

use crate::blaschke::{build_phase_table, cell_index, PhaseTable};
use crate::carleson::{quadratic_form_b, LevelFunction};
use crate::circle::{CircleGrid, GridFunction, TAU};
use crate::error::{Error, Result};
use crate::mt::make_sequence;
use crate::blaschke::SequenceKind;

/// Support-size guard for the O(n^2) model form.
pub const MODEL_T_MAX_SUPPORT: usize = 1 << 13;

/// Parameters of the probe: radius, even dilation factor and the derived
/// index bounds.
#[derive(Debug, Clone, Copy)]
pub struct ProbeConfig {
    r: f64,
    lambda: u64,
    k_cap: i64,
    level_bound: i64,
}

impl ProbeConfig {
    pub fn new(r: f64, lambda: u64) -> Result<Self> {
        if !(r > 0.5 && r < 1.0) {
            return Err(Error::invalid(format!("r must be in (1/2, 1), got {r}")));
        }
        if lambda < 4 || lambda % 2 != 0 {
            return Err(Error::invalid(format!(
                "dilation must be an even integer >= 4, got {lambda}"
            )));
        }
        let k_cap = (1.0 / (4.0 * (1.0 - r))).floor() as i64;
        let level_bound = (1.0 / (16.0 * lambda as f64 * (1.0 - r))).floor() as i64;
        if level_bound < 1 {
            return Err(Error::invalid(format!(
                "degenerate probe: level bound floor(1/(16*{lambda}*(1-r))) = {level_bound} < 1"
            )));
        }
        Ok(ProbeConfig {
            r,
            lambda,
            k_cap,
            level_bound,
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    /// Bound K on the level ranges of the associated pairs.
    pub fn k_cap(&self) -> i64 {
        self.k_cap
    }

    /// Admissible range [-level_bound, level_bound] for the input levels.
    pub fn level_bound(&self) -> i64 {
        self.level_bound
    }

    /// Cell length in grid steps; errors unless the grid step divides the
    /// cell length exactly.
    pub fn cell_units(&self, grid: CircleGrid) -> Result<i64> {
        let n = grid.n_points() as f64;
        let c = n * (1.0 - self.r);
        if c < 1.0 || c.fract() != 0.0 {
            return Err(Error::invalid(format!(
                "grid of size {} is not commensurable with cell length 2pi(1-r), r = {}",
                grid.n_points(),
                self.r
            )));
        }
        Ok(c as i64)
    }
}

/// Reflection of x across the midpoint of its cell.
pub fn tau(cfg: &ProbeConfig, x: f64) -> f64 {
    let k = cell_index(cfg.r, x).expect("r validated at construction");
    TAU * (1.0 - cfg.r) * (2 * k + 1) as f64 - x
}

/// Dilated cell index: Lambda * k(x), always even for even Lambda.
pub fn ktilde(cfg: &ProbeConfig, x: f64) -> i64 {
    cfg.lambda as i64 * cell_index(cfg.r, x).expect("r validated at construction")
}

/// Dilation-translation: x shifted by (ktilde - k) whole cells.
pub fn eta(cfg: &ProbeConfig, x: f64) -> f64 {
    let k = cell_index(cfg.r, x).expect("r validated at construction");
    (ktilde(cfg, x) - k) as f64 * TAU * (1.0 - cfg.r) + x
}

/// Signed grid units of point j: the grid angle reduced to (-pi, pi],
/// measured in steps.
fn signed_units(grid: CircleGrid, j: usize) -> i64 {
    let n = grid.n_points() as i64;
    let j = j as i64;
    if j < n / 2 {
        j
    } else {
        j - n
    }
}

fn units_to_index(grid: CircleGrid, u: i64) -> usize {
    let n = grid.n_points() as i64;
    u.rem_euclid(n) as usize
}

/// Exact integer versions of the maps on a commensurable grid.
#[derive(Debug, Clone, Copy)]
pub struct GridMaps {
    grid: CircleGrid,
    cell: i64,
    lambda: i64,
}

impl GridMaps {
    pub fn new(cfg: &ProbeConfig, grid: CircleGrid) -> Result<Self> {
        Ok(GridMaps {
            grid,
            cell: cfg.cell_units(grid)?,
            lambda: cfg.lambda as i64,
        })
    }

    pub fn cell(&self) -> i64 {
        self.cell
    }

    /// Cell index of grid point j.
    pub fn k_of(&self, j: usize) -> i64 {
        signed_units(self.grid, j).div_euclid(self.cell)
    }

    /// Grid index of tau(theta_j).
    pub fn tau_of(&self, j: usize) -> usize {
        let u = signed_units(self.grid, j);
        let k = u.div_euclid(self.cell);
        units_to_index(self.grid, self.cell * (2 * k + 1) - u)
    }

    /// Grid index of eta(theta_j). Errors if the image leaves (-pi, pi].
    pub fn eta_of(&self, j: usize) -> Result<usize> {
        let u = signed_units(self.grid, j);
        let k = u.div_euclid(self.cell);
        let v = (self.lambda - 1) * k * self.cell + u;
        let half = self.grid.n_points() as i64 / 2;
        if v <= -half || v > half {
            return Err(Error::invalid(format!(
                "eta image leaves the circle chart at grid index {j}"
            )));
        }
        Ok(units_to_index(self.grid, v))
    }
}

/// The set E and the level offset p. E consists of the grid points with
/// |x| <= 1/(2 Lambda), even cell index and p(x) = N(x) - k(x) >= 0.
pub struct EAndP {
    pub in_e: Vec<bool>,
    pub p: Vec<i64>,
}

pub fn build_e_and_p(
    cfg: &ProbeConfig,
    levels: &LevelFunction,
) -> Result<EAndP> {
    if levels.min_level() < -cfg.level_bound || levels.max_level() > cfg.level_bound {
        return Err(Error::invalid(format!(
            "levels range [{}, {}] violates probe bound {}",
            levels.min_level(),
            levels.max_level(),
            cfg.level_bound
        )));
    }
    let grid = levels.grid();
    let cell = cfg.cell_units(grid)?;
    let n = grid.n_points();
    let half_window = 1.0 / (2.0 * cfg.lambda as f64);
    let mut in_e = vec![false; n];
    let mut p = vec![0i64; n];
    for j in 0..n {
        let x = grid.theta_symmetric(j);
        let k = cell_index(cfg.r, x)?;
        p[j] = levels.level(j) - k;
        // cell-start grid points are excluded: tau reflects them onto the
        // next cell's start, so the grid maps are only involutive on cell
        // interiors (the boundary is measure zero in the continuum)
        let interior = signed_units(grid, j).rem_euclid(cell) != 0;
        in_e[j] = interior && x.abs() <= half_window && k.rem_euclid(2) == 0 && p[j] >= 0;
    }
    Ok(EAndP { in_e, p })
}

/// The three associated pairs derived from (g, N).
pub struct AssociatedPairs {
    pub f: GridFunction,
    pub m: LevelFunction,
    pub g_tilde: GridFunction,
    pub n_tilde: LevelFunction,
    pub f_tilde: GridFunction,
    pub m_tilde: LevelFunction,
}

pub fn associated_pairs(
    cfg: &ProbeConfig,
    g: &GridFunction,
    levels: &LevelFunction,
) -> Result<AssociatedPairs> {
    let grid = g.grid();
    if grid != levels.grid() {
        return Err(Error::invalid("associated_pairs: grid mismatch"));
    }
    let maps = GridMaps::new(cfg, grid)?;
    let ep = build_e_and_p(cfg, levels)?;
    let n = grid.n_points();
    for j in 0..n {
        if !ep.in_e[j] && g.values()[j].norm() != 0.0 {
            return Err(Error::invalid(format!(
                "g must vanish outside E; nonzero at grid index {j}"
            )));
        }
    }
    let k_cap = cfg.k_cap;
    let check = |name: &str, j: usize, v: i64| -> Result<()> {
        if v < -k_cap || v > k_cap {
            return Err(Error::invalid(format!(
                "{name} level {v} at grid index {j} outside [-{k_cap}, {k_cap}]"
            )));
        }
        Ok(())
    };

    // reflected pair: f = g(tau(.)) 1_E(tau(.)), M = (k + 1 - p(tau(.))) on
    // the same support
    let mut f_vals = vec![Complex64::new(0.0, 0.0); n];
    let mut m_lv = vec![0i64; n];
    for j in 0..n {
        let tj = maps.tau_of(j);
        if ep.in_e[tj] {
            f_vals[j] = g.values()[tj];
            let v = maps.k_of(j) + 1 - ep.p[tj];
            check("M", j, v)?;
            m_lv[j] = v;
        }
    }

    // dilated pair: on eta(E), N~(eta(x)) = ktilde(x) + p(x), g~ = g o eta^{-1}
    let mut gt_vals = vec![Complex64::new(0.0, 0.0); n];
    let mut nt_lv = vec![0i64; n];
    let mut in_eta_e = vec![false; n];
    for j in 0..n {
        if ep.in_e[j] {
            let ej = maps.eta_of(j)?;
            if in_eta_e[ej] {
                return Err(Error::invalid(format!(
                    "eta collision at grid index {ej}"
                )));
            }
            in_eta_e[ej] = true;
            gt_vals[ej] = g.values()[j];
            let v = maps.lambda * maps.k_of(j) + ep.p[j];
            check("N~", ej, v)?;
            nt_lv[ej] = v;
        }
    }

    // dilated reflected pair on eta(tau(E)): M~ = ktilde + M - k through
    // eta^{-1}, f~ = f o eta^{-1}
    let mut ft_vals = vec![Complex64::new(0.0, 0.0); n];
    let mut mt_lv = vec![0i64; n];
    for j in 0..n {
        let tj = maps.tau_of(j);
        if ep.in_e[tj] {
            // j is in tau(E); push it through eta
            let ej = maps.eta_of(j)?;
            ft_vals[ej] = f_vals[j];
            let v = maps.lambda * maps.k_of(j) + m_lv[j] - maps.k_of(j);
            check("M~", ej, v)?;
            mt_lv[ej] = v;
        }
    }

    Ok(AssociatedPairs {
        f: GridFunction::new(grid, f_vals)?,
        m: LevelFunction::new(grid, m_lv, -k_cap, k_cap)?,
        g_tilde: GridFunction::new(grid, gt_vals)?,
        n_tilde: LevelFunction::new(grid, nt_lv, -k_cap, k_cap)?,
        f_tilde: GridFunction::new(grid, ft_vals)?,
        m_tilde: LevelFunction::new(grid, mt_lv, -k_cap, k_cap)?,
    })
}

/// Independent route to the dilated-reflected levels, for cross-checking:
/// M~(x) = (k(x) + 1 - p_{N~}(tau(x))) on eta(tau(E)).
pub fn m_tilde_via_consistency(
    cfg: &ProbeConfig,
    levels: &LevelFunction,
    pairs: &AssociatedPairs,
) -> Result<Vec<i64>> {
    let grid = levels.grid();
    let maps = GridMaps::new(cfg, grid)?;
    let ep = build_e_and_p(cfg, levels)?;
    let n = grid.n_points();
    // membership of eta(tau(E)) rebuilt from scratch
    let mut in_eta_tau_e = vec![false; n];
    for j in 0..n {
        if ep.in_e[j] {
            let tj = maps.tau_of(j);
            in_eta_tau_e[maps.eta_of(tj)?] = true;
        }
    }
    let mut out = vec![0i64; n];
    for x in 0..n {
        if in_eta_tau_e[x] {
            let tx = maps.tau_of(x);
            let p_nt = pairs.n_tilde.level(tx) - maps.k_of(tx);
            out[x] = maps.k_of(x) + 1 - p_nt;
        }
    }
    Ok(out)
}

/// The combined quantity
/// `Sigma = B(g,N) + Lambda B(g~,N~) + B(f,M) + Lambda B(f~,M~)`
/// evaluated with the extended a_r phase table.
pub fn claim2_sigma(
    cfg: &ProbeConfig,
    g: &GridFunction,
    levels: &LevelFunction,
) -> Result<f64> {
    let pairs = associated_pairs(cfg, g, levels)?;
    let seq = make_sequence(SequenceKind::ArExtended { r: cfg.r }, None)?;
    let table = build_phase_table(&seq, g.grid())?;
    let lam = cfg.lambda as f64;
    let b_g = quadratic_form_b(g, &table, levels)?;
    let b_gt = quadratic_form_b(&pairs.g_tilde, &table, &pairs.n_tilde)?;
    let b_f = quadratic_form_b(&pairs.f, &table, &pairs.m)?;
    let b_ft = quadratic_form_b(&pairs.f_tilde, &table, &pairs.m_tilde)?;
    Ok(b_g + lam * b_gt + b_f + lam * b_ft)
}

/// Seeded random admissible probe input: a level function within the
/// configured bound and a real g supported on the compatible set E.
pub fn random_admissible_input(
    cfg: &ProbeConfig,
    grid: CircleGrid,
    seed: u64,
) -> Result<(GridFunction, LevelFunction)> {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n_points();
    let mut lv = vec![0i64; n];
    for l in lv.iter_mut() {
        *l = rng.gen_range(0..=cfg.level_bound);
    }
    let levels = LevelFunction::new(grid, lv, -cfg.level_bound, cfg.level_bound)?;
    let ep = build_e_and_p(cfg, &levels)?;
    let vals = (0..n)
        .map(|j| {
            if ep.in_e[j] {
                Complex64::new(rng.gen::<f64>() - 0.5, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok((GridFunction::new(grid, vals)?, levels))
}

/// A finitely supported real sequence on nonnegative integer indices.
#[derive(Debug, Clone)]
pub struct SparseSeq {
    support: Vec<u64>,
    values: Vec<f64>,
}

impl SparseSeq {
    pub fn new(support: Vec<u64>, values: Vec<f64>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::invalid("support and value lengths differ"));
        }
        if !support.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("support must be strictly increasing"));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("values must be finite"));
        }
        Ok(SparseSeq { support, values })
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// The model bilinear form
/// `T(alpha) = -sum_{j<j'} alpha_j alpha_{j'} sin(log(j'-j)/(2pi)) / (j'-j)`.
pub fn model_t(alpha: &SparseSeq) -> Result<f64> {
    if alpha.len() > MODEL_T_MAX_SUPPORT {
        return Err(Error::guard(format!(
            "model form is O(n^2); support size {} exceeds {MODEL_T_MAX_SUPPORT}",
            alpha.len()
        )));
    }
    let mut acc = 0.0f64;
    for i in 0..alpha.len() {
        if alpha.values[i] == 0.0 {
            continue;
        }
        for ip in (i + 1)..alpha.len() {
            let gap = (alpha.support[ip] - alpha.support[i]) as f64;
            acc -= alpha.values[i] * alpha.values[ip] * (gap.ln() / TAU).sin() / gap;
        }
    }
    Ok(acc)
}

/// Sparse dilation: support index j maps to floor(lambda_real * j),
/// values copied, so the l2 norm is preserved exactly.
pub fn model_dilate(alpha: &SparseSeq, lambda_real: f64) -> Result<SparseSeq> {
    if !(lambda_real >= 1.0 && lambda_real.is_finite()) {
        return Err(Error::invalid(format!(
            "dilation factor must be >= 1, got {lambda_real}"
        )));
    }
    if let Some(&max) = alpha.support.last() {
        if lambda_real * max as f64 >= 9.007_199_254_740_992e15 {
            return Err(Error::invalid(
                "dilated support exceeds the exact-integer range of f64",
            ));
        }
    }
    let support = alpha
        .support
        .iter()
        .map(|&j| (lambda_real * j as f64).floor() as u64)
        .collect();
    SparseSeq::new(support, alpha.values.clone())
}

/// Reference to the phase table used by the reflection identity checks.
pub fn extended_table(cfg: &ProbeConfig, grid: CircleGrid) -> Result<PhaseTable> {
    let seq = make_sequence(SequenceKind::ArExtended { r: cfg.r }, None)?;
    build_phase_table(&seq, grid)
}
