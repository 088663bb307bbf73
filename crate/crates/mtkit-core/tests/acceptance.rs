//! Acceptance suite: fourteen numbered checks, one printed pass/fail line
//! each. Quantitative budgets with no closed-form value are calibrated
//! once from seeded runs and frozen here; each frozen constant carries a
//! comment with the observed value it was frozen from.
//!
//! Check 10 is reported but not enforced: the two linear-in-m budgets it
//! asks for cannot hold. The lacunary block points form a full angular
//! lattice, so the block Poisson sum obeys the exact identity
//! `sum_j P_r(y - 2pi j/N) = N (1 - r^{2N}) / (1 + r^{2N} - 2 r^N cos(Ny))`,
//! which at lattice points gives a drift of about `1.16 * 2^m` (not `C m`)
//! and a second-derivative maximum of about `1.29 * 4^m` (not `C' m`);
//! only the circle average of the block derivative sum equals `2^m`. The
//! suite verifies the identity itself and the finite-difference
//! cross-check, prints the measured growth, and lets the line read FAIL.

use std::time::Instant;

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use mtkit_core::{
    blaschke_product_boundary, build_basis, build_phase_table, cell_index, counterexample_rows,
    eta, hilbert_h, hilbert_tilde, hilbert_tilde_kernel_route, hl_maximal, ktilde, lacunary_rows,
    linearized_adjoint, make_sequence, mobius_phase, mobius_phase_deriv, model_dilate, model_t,
    orthonormality_deviation, partial_sum, poly_roots, quadratic_form_b, random_trig_poly,
    reduce_angle, required_grid_size, run_corollary_b, run_counterexample, run_lacunary, run_thm1,
    tau, telescoping_error, trigonometric_deviation, unwind, unwind_to_mt, CircleGrid, DiskPoint,
    ExperimentConfig, GridFunction, GridMaps, LevelFunction, MTSequence, PartialSumMethod,
    PolynomialH2, ProbeConfig, SequenceKind, SparseSeq, TAU,
};

const PI: f64 = std::f64::consts::PI;

struct Outcome {
    id: u32,
    pass: bool,
    detail: String,
}

fn outcome(id: u32, pass: bool, detail: String) -> Outcome {
    Outcome { id, pass, detail }
}

fn random_real(grid: CircleGrid, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GridFunction::new(
        grid,
        (0..grid.n_points())
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, 0.0))
            .collect(),
    )
    .unwrap()
}

fn random_levels(grid: CircleGrid, lo: i64, hi: i64, seed: u64) -> LevelFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    LevelFunction::new(
        grid,
        (0..grid.n_points()).map(|_| rng.gen_range(lo..=hi)).collect(),
        lo,
        hi,
    )
    .unwrap()
}

/// 1. Orthonormality of the dyadic-flat sequence at r = 1 - 2^-5 on a
///    2^15 grid: deviation < 1e-8 within a 10 s budget.
fn c01_orthonormality() -> Outcome {
    let t0 = Instant::now();
    let r = 1.0 - 2f64.powi(-5);
    let seq = make_sequence(SequenceKind::Ar { r }, None).unwrap();
    assert_eq!(seq.len(), 32);
    let grid = CircleGrid::new(1 << 15).unwrap();
    let basis = build_basis(&seq, grid).unwrap();
    let dev = orthonormality_deviation(&basis).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    outcome(
        1,
        dev < 1e-8 && secs < 10.0,
        format!("deviation {dev:.3e} (budget 1e-8), {secs:.2} s (budget 10 s)"),
    )
}

/// 2. All-zero sequence of 16 points reduces to the trigonometric system
///    pointwise to 1e-12.
fn c02_trigonometric_reduction() -> Outcome {
    let seq = MTSequence::new(vec![DiskPoint::origin(); 16], 1, SequenceKind::Custom);
    let grid = CircleGrid::new(64).unwrap();
    let basis = build_basis(&seq, grid).unwrap();
    let dev = trigonometric_deviation(&basis).unwrap();
    outcome(2, dev < 1e-12, format!("max pointwise deviation {dev:.3e} (budget 1e-12)"))
}

/// 3. Closed-form phase derivatives (orders 1 and 2) against central
///    finite differences of the phase: sup-relative error < 1e-6 at 10^3
///    random points for each r in {0.5, 0.9, 0.99}.
fn c03_phase_derivatives() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for &r in &[0.5, 0.9, 0.99] {
        let h = 1e-4 * (1.0 - r);
        let mut err1 = 0.0f64;
        let mut err2 = 0.0f64;
        let mut sup1 = 0.0f64;
        let mut sup2 = 0.0f64;
        for _ in 0..1000 {
            let angle = (rng.gen::<f64>() - 0.5) * TAU;
            let w = DiskPoint::new(r, angle).unwrap();
            // keep the stencil away from the 2pi phase branch at the
            // antipode of the pole, where the finite difference is invalid
            let t = (rng.gen::<f64>() - 0.5) * 2.0 * (PI - 1e-2);
            let x = angle + t;
            let d1 = mobius_phase_deriv(w, x, 1).unwrap();
            let d2 = mobius_phase_deriv(w, x, 2).unwrap();
            let fd1 = (mobius_phase(w, x + h) - mobius_phase(w, x - h)) / (2.0 * h);
            let fd2 = (mobius_phase_deriv(w, x + h, 1).unwrap()
                - mobius_phase_deriv(w, x - h, 1).unwrap())
                / (2.0 * h);
            err1 = err1.max((fd1 - d1).abs());
            err2 = err2.max((fd2 - d2).abs());
            sup1 = sup1.max(d1.abs());
            sup2 = sup2.max(d2.abs());
        }
        worst = worst.max(err1 / sup1).max(err2 / sup2);
    }
    outcome(3, worst < 1e-6, format!("worst sup-relative error {worst:.3e} (budget 1e-6)"))
}

/// 4. Coefficient and kernel partial-sum routes agree to relative L2
///    error 1e-6 on 20 random band-limited functions at r = 1 - 2^-4.
fn c04_partial_sum_dual_method() -> Outcome {
    let r = 1.0 - 2f64.powi(-4);
    let seq = make_sequence(SequenceKind::Ar { r }, None).unwrap();
    let grid = CircleGrid::new(required_grid_size(&seq)).unwrap();
    let basis = build_basis(&seq, grid).unwrap();
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let f = random_trig_poly(grid, grid.n_points() as i64 / 4, 400 + seed).unwrap();
        let n = (seed as i64 * 7) % (basis.n_max() + 1);
        let a = partial_sum(&f, &basis, n, PartialSumMethod::Coefficient).unwrap();
        let b = partial_sum(&f, &basis, n, PartialSumMethod::Kernel).unwrap();
        let diff: f64 = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / (grid.n_points() as f64).sqrt();
        worst = worst.max(diff / f.norm());
    }
    outcome(4, worst < 1e-6, format!("worst relative L2 discrepancy {worst:.3e} (budget 1e-6)"))
}

/// 5. Conjugate-function identities: H f = -i (f - mean f) for analytic
///    polynomials to 1e-10, and the two realizations of the modified
///    transform agree pointwise to 1e-10.
fn c05_hilbert_identities() -> Outcome {
    let grid = CircleGrid::new(512).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let coeffs: Vec<Complex64> = (0..=12)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let f = GridFunction::from_fn(grid, |theta| {
        let z = Complex64::from_polar(1.0, theta);
        coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    });
    let hf = hilbert_h(&f);
    let mean = f.mean();
    let analytic_err = GridFunction::new(
        grid,
        f.values()
            .iter()
            .zip(hf.values())
            .map(|(&v, &h)| h + Complex64::new(0.0, 1.0) * (v - mean))
            .collect(),
    )
    .unwrap()
    .norm();

    let g = random_trig_poly(grid, 128, 55).unwrap();
    let a = hilbert_tilde(&g);
    let b = hilbert_tilde_kernel_route(&g);
    let dual_err = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0f64, f64::max);
    outcome(
        5,
        analytic_err < 1e-10 && dual_err < 1e-10,
        format!("analytic identity {analytic_err:.3e}, dual realization {dual_err:.3e} (budgets 1e-10)"),
    )
}

/// Frozen from the seeded calibration run (seeds fixed below): observed
/// remainder ratios 1.006 (grid 2^10) and 1.004 (grid 2^11), worst
/// negative-part ratio 0.003. Frozen with ~2x/3x margin.
const C6_REMAINDER: f64 = 2.0;
const C6_NEGATIVE: f64 = 0.01;

/// 6. Adjoint/quadratic-form consistency: |‖T_N* g‖^2 - 2 B(g,N)| stays
///    below a frozen multiple of ‖g‖^2 at grids 2^10 and 2^11, the two
///    observed constants agree within x2, and B is bounded below by a
///    frozen negative multiple of ‖g‖^2.
fn c06_ttstar_consistency() -> Outcome {
    let r = 1.0 - 1.0 / 8.0;
    let seq = make_sequence(SequenceKind::Ar { r }, None).unwrap();
    let mut per_grid = Vec::new();
    let mut worst_neg = 0.0f64;
    for &size in &[1usize << 10, 1 << 11] {
        let grid = CircleGrid::new(size).unwrap();
        let table = build_phase_table(&seq, grid).unwrap();
        let mut worst = 0.0f64;
        for trial in 0..50u64 {
            let g = random_real(grid, 600 + trial);
            let levels = random_levels(grid, 1, 6, 700 + trial);
            let adj = linearized_adjoint(&g, &table, &levels).unwrap();
            let b = quadratic_form_b(&g, &table, &levels).unwrap();
            let energy = g.norm().powi(2);
            worst = worst.max((adj.norm().powi(2) - 2.0 * b).abs() / energy);
            worst_neg = worst_neg.max((-b).max(0.0) / energy);
        }
        per_grid.push(worst);
    }
    let (lo, hi) = (per_grid[0].min(per_grid[1]), per_grid[0].max(per_grid[1]));
    let pass = hi <= C6_REMAINDER && hi / lo <= 2.0 && worst_neg <= C6_NEGATIVE;
    outcome(
        6,
        pass,
        format!(
            "remainder ratios {:.3}/{:.3} (frozen {C6_REMAINDER}, cross-grid x{:.2} <= 2), \
             negative part {:.3} (frozen {C6_NEGATIVE})",
            per_grid[0],
            per_grid[1],
            hi / lo,
            worst_neg
        ),
    )
}

/// Frozen from the seeded calibration run below: observed max 0.272.
const C7_DOMINATION: f64 = 0.5;

/// 7. Pointwise domination of the partial sums by the demodulated
///    modified transform plus the conjugate function plus the maximal
///    average, with one frozen constant across both r values.
fn c07_pointwise_domination() -> Outcome {
    let mut worst = 0.0f64;
    for &r in &[1.0 - 2f64.powi(-4), 1.0 - 2f64.powi(-6)] {
        let seq = make_sequence(SequenceKind::Ar { r }, None).unwrap();
        let grid = CircleGrid::new(required_grid_size(&seq)).unwrap();
        let basis = build_basis(&seq, grid).unwrap();
        let table = basis.phase_table();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for trial in 0..5u64 {
            let f = random_trig_poly(grid, grid.n_points() as i64 / 4, 800 + trial).unwrap();
            let hf = hilbert_h(&f);
            let mf = hl_maximal(&f);
            let mut orders = vec![0, basis.n_max() / 2, basis.n_max()];
            orders.push(rng.gen_range(0..=basis.n_max()));
            orders.push(rng.gen_range(0..=basis.n_max()));
            for &n in &orders {
                let s = partial_sum(&f, &basis, n, PartialSumMethod::Coefficient).unwrap();
                let psi = table.psi_row(n + 1).unwrap();
                let demod = GridFunction::new(
                    grid,
                    (0..grid.n_points())
                        .map(|j| f.values()[j] * Complex64::from_polar(1.0, -psi[j]))
                        .collect(),
                )
                .unwrap();
                let ht = hilbert_tilde(&demod);
                for j in 0..grid.n_points() {
                    let bound =
                        ht.values()[j].norm() + hf.values()[j].norm() + mf.values()[j].re;
                    worst = worst.max(s.values()[j].norm() / bound);
                }
            }
        }
    }
    outcome(
        7,
        worst <= C7_DOMINATION,
        format!("worst pointwise ratio {worst:.3} (frozen constant {C7_DOMINATION})"),
    )
}

/// 8. Dyadic sweep k = 4..9: the flat sequence keeps its maximal-operator
///    ratio band within x2, while the log-spread sequence's squared ratio
///    increases strictly in k with positive least-squares slope against
///    k log 2; all under a five-minute budget.
fn c08_sweep_flat_vs_growth(rows: &[mtkit_core::CounterexampleRow]) -> Outcome {
    let t0 = Instant::now();
    let cfg = ExperimentConfig {
        k_min: 4,
        k_max: 9,
        grid: None,
        trials: 3,
        seed: 1,
        m_max: 14,
    };
    let csv = run_thm1(&cfg).unwrap();
    let rhos: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    let band = rhos.iter().cloned().fold(f64::MIN, f64::max)
        / rhos.iter().cloned().fold(f64::MAX, f64::min);

    let sq: Vec<(f64, f64)> = rows
        .iter()
        .map(|row| (row.k as f64 * 2f64.ln(), row.ratio * row.ratio))
        .collect();
    let increasing = sq.windows(2).all(|w| w[1].1 > w[0].1);
    let n = sq.len() as f64;
    let mx = sq.iter().map(|p| p.0).sum::<f64>() / n;
    let my = sq.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = sq.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / sq.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let secs = t0.elapsed().as_secs_f64();
    outcome(
        8,
        band <= 2.0 && increasing && slope > 0.0 && secs < 300.0,
        format!(
            "flat band x{band:.3} (budget 2), squared ratios strictly increasing: {increasing}, \
             slope {slope:.4} > 0, {secs:.1} s (budget 300 s)"
        ),
    )
}

/// 9. Scaled pointwise imaginary-part lower bound on the prescribed
///    inter-pole intervals: positive and stable (max/min < 3) over k = 5..9.
fn c09_lower_bound_stability(rows: &[mtkit_core::CounterexampleRow]) -> Outcome {
    let mins: Vec<f64> = rows
        .iter()
        .filter(|row| row.k >= 5)
        .map(|row| row.scaled_min_j1)
        .collect();
    let lo = mins.iter().cloned().fold(f64::MAX, f64::min);
    let hi = mins.iter().cloned().fold(f64::MIN, f64::max);
    outcome(
        9,
        lo > 0.0 && hi / lo < 3.0,
        format!("scaled minima in [{lo:.4}, {hi:.4}], stability x{:.2} (budget 3)", hi / lo),
    )
}

/// 10. Lacunary block phase sums for m <= 14: the requested linear-in-m
///     budgets for the drift and the second-derivative maximum, with
///     constants calibrated on m <= 6 (x2 margin), plus the
///     finite-difference cross-check. The linear budgets cannot hold (see
///     the module comment): the measured growth follows the lattice
///     identity's 2^m and 4^m rates, so this check reports FAIL honestly;
///     the identity oracle and the cross-check are asserted separately in
///     the unit suite.
fn c10_lacunary_budgets() -> Outcome {
    let cfg = ExperimentConfig {
        m_max: 14,
        ..Default::default()
    };
    let rows = lacunary_rows(&cfg).unwrap();
    let calib = |f: &dyn Fn(&mtkit_core::LacunaryRow) -> f64| {
        2.0 * rows
            .iter()
            .filter(|row| row.m <= 6)
            .map(|row| f(row) / row.m as f64)
            .fold(0.0f64, f64::max)
    };
    let c_drift = calib(&|row| row.d_minus_pow.abs());
    let c_psi2 = calib(&|row| row.psi2_max);
    let drift_ok = rows.iter().all(|row| row.d_minus_pow.abs() <= c_drift * row.m as f64);
    let psi2_ok = rows.iter().all(|row| row.psi2_max <= c_psi2 * row.m as f64);
    let fd_worst = rows.iter().map(|row| row.fd_rel).fold(0.0f64, f64::max);
    let last = rows.last().unwrap();
    outcome(
        10,
        drift_ok && psi2_ok && fd_worst < 1e-6,
        format!(
            "linear drift budget holds: {drift_ok}, linear curvature budget holds: {psi2_ok} \
             (at m=14: drift/2^m = {:.3}, max|sum psi''|/4^m = {:.3} — lattice-identity growth), \
             finite-difference cross-check {fd_worst:.3e} (budget 1e-6)",
            last.d_minus_pow / 2f64.powi(14),
            last.psi2_max / 4f64.powi(14),
        ),
    )
}

/// 11. Reflection/dilation map identities at lambda = 8, r = 1 - 2^-10:
///     commutation, involution and cell-index identities exact to 1e-12;
///     difference residuals within 4 pi (1-r) (the dilation one measured
///     after normalizing by lambda); dilation injective on the grid
///     window with image inside [-1, 1], exhaustively.
fn c11_reflection_dilation() -> Outcome {
    let cfg = ProbeConfig::new(1.0 - 2f64.powi(-10), 8).unwrap();
    let one_minus_r = 1.0 - cfg.r();
    let lam = cfg.lambda() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut exact_worst = 0.0f64;
    for _ in 0..10_000 {
        let x = (rng.gen::<f64>() - 0.5) / 4.0;
        exact_worst = exact_worst
            .max((tau(&cfg, eta(&cfg, x)) - eta(&cfg, tau(&cfg, x))).abs())
            .max((tau(&cfg, tau(&cfg, x)) - x).abs());
        if cell_index(cfg.r(), eta(&cfg, x)).unwrap() != ktilde(&cfg, x) {
            return outcome(11, false, format!("cell-index identity broken at x = {x}"));
        }
    }
    let mut res_worst = 0.0f64;
    for _ in 0..1000 {
        let x = (rng.gen::<f64>() - 0.5) / 4.0;
        let z = (rng.gen::<f64>() - 0.5) / 4.0;
        res_worst = res_worst
            .max((tau(&cfg, x) - tau(&cfg, z) - (x - z)).abs())
            .max(((eta(&cfg, x) - eta(&cfg, z)) / lam - (x - z)).abs());
    }
    let grid = CircleGrid::new(1 << 13).unwrap();
    let maps = GridMaps::new(&cfg, grid).unwrap();
    let half_window = 1.0 / (2.0 * lam);
    let mut seen = std::collections::HashSet::new();
    let mut injective = true;
    let mut in_range = true;
    for j in 0..grid.n_points() {
        let x = grid.theta_symmetric(j);
        if x.abs() <= half_window {
            let ej = maps.eta_of(j).unwrap();
            injective &= seen.insert(ej);
            in_range &= grid.theta_symmetric(ej).abs() <= 1.0;
        }
    }
    let pass =
        exact_worst < 1e-12 && res_worst <= 4.0 * PI * one_minus_r && injective && in_range;
    outcome(
        11,
        pass,
        format!(
            "exact identities {exact_worst:.2e} (budget 1e-12), residuals {res_worst:.3e} \
             (budget {:.3e}), injective: {injective}, image in [-1,1]: {in_range}",
            4.0 * PI * one_minus_r
        ),
    )
}

/// 12. Model bilinear form: dilating the support indices by the literal
///     e^{2 pi^2} flips the sign and divides the value by that constant,
///     to relative accuracy 0.1, for a positive sequence of size 512 with
///     support gaps >= 16.
fn c12_model_dilation() -> Outcome {
    let lam = (2.0 * PI * PI).exp();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut support = Vec::with_capacity(512);
    let mut idx = 0u64;
    for _ in 0..512 {
        support.push(idx);
        idx += rng.gen_range(16..=32);
    }
    let values: Vec<f64> = (0..512).map(|_| rng.gen::<f64>() + 0.1).collect();
    let alpha = SparseSeq::new(support, values).unwrap();
    let beta = model_dilate(&alpha, lam).unwrap();
    let ta = model_t(&alpha).unwrap();
    let tb = model_t(&beta).unwrap();
    let rel = (tb + ta / lam).abs() / (ta / lam).abs();
    outcome(12, rel <= 0.1, format!("relative deviation {rel:.4} (budget 0.1)"))
}

/// 13. Unwinding on random degree-8 polynomials, 10 steps each:
///     telescoping identity to 1e-8, Bessel-type inequality for the
///     extracted constants, and agreement with the rational-basis partial
///     sums at block boundaries to 1e-6 (on seeds whose roots stay within
///     the resolution budget).
fn c13_unwinding() -> Outcome {
    let grid = CircleGrid::new(1024).unwrap();
    let mut tel_worst = 0.0f64;
    let mut bessel_ok = true;
    let mut mt_worst = 0.0f64;
    let mut mt_runs = 0usize;
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1300 + seed);
        let coeffs: Vec<Complex64> = (0..=8)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let f = PolynomialH2::new(coeffs).unwrap();
        let result = unwind(&f, 10).unwrap();
        tel_worst = tel_worst.max(telescoping_error(&f, &result, grid));
        bessel_ok &= result.bessel_sum() <= f.norm().powi(2) + 1e-8;

        let roots = result.all_roots();
        if roots.is_empty() {
            continue;
        }
        let points: Vec<DiskPoint> = roots
            .iter()
            .map(|z| DiskPoint::new(z.norm(), z.arg()).unwrap())
            .collect();
        let seq = MTSequence::new(points, 1, SequenceKind::Custom);
        let need = required_grid_size(&seq);
        if need > 1 << 13 {
            continue; // a root too close to the boundary for this budget
        }
        let cmp_grid = CircleGrid::new(need.max(grid.n_points())).unwrap();
        let cmp = unwind_to_mt(&f, &result, cmp_grid).unwrap();
        mt_worst = mt_worst.max(cmp.max_discrepancy);
        mt_runs += 1;
    }
    let pass = tel_worst <= 1e-8 && bessel_ok && mt_runs >= 2 && mt_worst <= 1e-6;
    outcome(
        13,
        pass,
        format!(
            "telescoping {tel_worst:.3e} (budget 1e-8), Bessel: {bessel_ok}, \
             block-boundary agreement {mt_worst:.3e} over {mt_runs} runs (budget 1e-6)"
        ),
    )
}

/// 14. Byte-for-byte determinism of every experiment under an identical
///     configuration.
fn c14_determinism() -> Outcome {
    let cfg = ExperimentConfig {
        k_min: 4,
        k_max: 5,
        grid: None,
        trials: 2,
        seed: 7,
        m_max: 6,
    };
    let runs: [fn(&ExperimentConfig) -> mtkit_core::Result<String>; 4] = [
        run_thm1,
        run_counterexample,
        run_lacunary,
        run_corollary_b,
    ];
    let names = ["thm1", "counterexample", "lacunary", "corollary-b"];
    for (run, name) in runs.iter().zip(names) {
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        if a != b {
            return outcome(14, false, format!("{name} output differs between identical runs"));
        }
    }
    outcome(14, true, "all four experiments byte-identical on re-run".to_string())
}

/// Sanity anchor for the suite itself: the root finder still recovers a
/// planted factorization, so check 13 exercises real factor extraction.
fn roots_sanity() {
    let roots = [Complex64::new(0.3, 0.2), Complex64::new(-0.5, 0.1)];
    let coeffs = vec![
        roots[0] * roots[1],
        -(roots[0] + roots[1]),
        Complex64::new(1.0, 0.0),
    ];
    let p = PolynomialH2::new(coeffs).unwrap();
    let found = poly_roots(&p).unwrap();
    for z in &found {
        let near = roots.iter().any(|w| (z - w).norm() < 1e-9);
        assert!(near, "unexpected root {z}");
    }
    let unimod = blaschke_product_boundary(&found, Complex64::new(1.0, 0.0)).norm();
    assert!((unimod - 1.0).abs() < 1e-9);
    let _ = reduce_angle(7.0);
}

#[test]
fn acceptance() {
    roots_sanity();
    let cfg_sweep = ExperimentConfig {
        k_min: 4,
        k_max: 9,
        grid: None,
        trials: 3,
        seed: 1,
        m_max: 14,
    };
    let counterexample = counterexample_rows(&cfg_sweep).unwrap();

    let results = vec![
        c01_orthonormality(),
        c02_trigonometric_reduction(),
        c03_phase_derivatives(),
        c04_partial_sum_dual_method(),
        c05_hilbert_identities(),
        c06_ttstar_consistency(),
        c07_pointwise_domination(),
        c08_sweep_flat_vs_growth(&counterexample),
        c09_lower_bound_stability(&counterexample),
        c10_lacunary_budgets(),
        c11_reflection_dilation(),
        c12_model_dilation(),
        c13_unwinding(),
        c14_determinism(),
    ];

    // Check 10's linear budgets are unattainable (module comment); its
    // line is reported but does not abort the suite.
    let expected_fail = [10u32];
    let mut unexpected = Vec::new();
    for r in &results {
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!("criterion {:02}: {status} - {}", r.id, r.detail);
        if !r.pass && !expected_fail.contains(&r.id) {
            unexpected.push(format!("criterion {:02}: {}", r.id, r.detail));
        }
    }
    assert!(
        unexpected.is_empty(),
        "unexpected acceptance failures:\n{}",
        unexpected.join("\n")
    );
}
