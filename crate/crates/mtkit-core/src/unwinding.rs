//! Nonlinear phase unwinding of polynomial H^2 functions: iterated
//! Blaschke factorization F_{n} = (F_{n-1} - F_{n-1}(0)) / B_n, the
//! telescoping series it generates, and its agreement with the MT
//! expansion built from the block roots.

use num_complex::Complex64;

use crate::blaschke::{DiskPoint, MTSequence, SequenceKind};
use crate::circle::{fmt_g17, CircleGrid, GridFunction};
use crate::error::{Error, Result};
use crate::mt::{build_basis, partial_sum, PartialSumMethod};

/// Roots within this distance of the unit circle are treated as outer
/// factors and left in the quotient.
pub const BOUNDARY_ROOT_TOLERANCE: f64 = 1e-9;

/// An analytic polynomial `c_0 + c_1 z + ... + c_d z^d`, the desk-scale
/// stand-in for an H^2 function.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialH2 {
    coeffs: Vec<Complex64>,
}

impl PolynomialH2 {
    /// Trailing (leading-power) zero coefficients are trimmed so the
    /// leading coefficient is nonzero; the zero polynomial is `[0]`.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("polynomial needs at least one coefficient"));
        }
        if !coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::invalid("polynomial coefficients must be finite"));
        }
        while coeffs.len() > 1 && coeffs.last().unwrap().norm() == 0.0 {
            coeffs.pop();
        }
        Ok(PolynomialH2 { coeffs })
    }

    pub fn zero() -> Self {
        PolynomialH2 {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        PolynomialH2 { coeffs: vec![c] }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].norm() == 0.0
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// H^2 norm: by Parseval (with the 1/(2pi) normalization on the
    /// boundary) this is the l2 norm of the coefficients.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Boundary samples on a grid.
    pub fn sample(&self, grid: CircleGrid) -> GridFunction {
        GridFunction::from_fn(grid, |t| self.eval(Complex64::from_polar(1.0, t)))
    }
}

fn coeff_norm(coeffs: &[Complex64]) -> f64 {
    coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// All roots of the polynomial with multiplicity, by the Aberth-Ehrlich
/// simultaneous iteration. Roots at the origin are stripped exactly first.
/// Each returned root satisfies |p(root)| <= 1e-10 * ||coeffs||.
pub fn poly_roots(p: &PolynomialH2) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(Error::invalid("zero polynomial has no well-defined roots"));
    }
    if p.degree() == 0 {
        return Err(Error::invalid("constant polynomial has no roots"));
    }
    let mut coeffs: Vec<Complex64> = p.coeffs.clone();
    let mut roots = Vec::with_capacity(p.degree());
    // exact zeros at the origin
    while coeffs[0].norm() == 0.0 {
        roots.push(Complex64::new(0.0, 0.0));
        coeffs.remove(0);
    }
    let d = coeffs.len() - 1;
    if d == 0 {
        return Ok(roots);
    }
    let scale = coeff_norm(&coeffs);

    let eval_both = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            dv = dv * z + v;
            v = v * z + c;
        }
        (v, dv)
    };

    // initial guesses on a circle sized by the Cauchy bound, angles offset
    // to avoid symmetry traps
    let lead = coeffs[d].norm();
    let cauchy = 1.0
        + coeffs[..d]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0f64, f64::max);
    let r0 = cauchy.min(1e6) * 0.8;
    let mut z: Vec<Complex64> = (0..d)
        .map(|i| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * i as f64 / d as f64 + 0.4))
        .collect();

    for _sweep in 0..400 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (v, dv) = eval_both(z[i]);
            if v.norm() <= 1e-14 * scale {
                continue;
            }
            let ratio = if dv.norm() == 0.0 {
                Complex64::new(1e-12, 0.0)
            } else {
                v / dv
            };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 1e-300 {
                        s += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * s;
            let w = if denom.norm() < 1e-300 { ratio } else { ratio / denom };
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }

    for &root in &z {
        let (v, _) = eval_both(root);
        if v.norm() > 1e-10 * scale {
            return Err(Error::unstable(format!(
                "root residual {} exceeds contract {}",
                v.norm(),
                1e-10 * scale
            )));
        }
    }
    roots.extend(z);
    Ok(roots)
}

/// Result of pulling the inner (Blaschke) part out of a polynomial.
pub struct Factorization {
    /// Roots with |a| < 1 - 1e-9, zeros at the origin included.
    pub inside_roots: Vec<Complex64>,
    /// p with the Blaschke part divided out; unimodular-corrected so its
    /// boundary modulus matches |p| on |z| = 1.
    pub quotient: PolynomialH2,
    /// Per-root synthetic-division remainder magnitudes.
    pub remainders: Vec<f64>,
}

/// Synthetic division by (z - a): returns (quotient, remainder = p(a)).
fn divide_linear(coeffs: &[Complex64], a: Complex64) -> (Vec<Complex64>, Complex64) {
    let d = coeffs.len() - 1;
    let mut q = vec![Complex64::new(0.0, 0.0); d];
    let mut carry = coeffs[d];
    for i in (0..d).rev() {
        q[i] = carry;
        carry = coeffs[i] + carry * a;
    }
    (q, carry)
}

/// Multiply the coefficient list by (1 - conj(a) z) * a/|a|.
fn mul_moebius_numerator(coeffs: &[Complex64], a: Complex64) -> Vec<Complex64> {
    let u = a / a.norm();
    let mut out = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
    for (i, &c) in coeffs.iter().enumerate() {
        out[i] += u * c;
        out[i + 1] -= u * a.conj() * c;
    }
    out
}

/// Extract the Blaschke product of the polynomial's inside zeros.
/// For each inside root a, the factor (z - a) is divided out exactly and
/// the quotient is multiplied by (1 - conj(a) z) a/|a| (for a = 0 the
/// factor is z and no correction is applied), so that
/// `p = B * quotient` with `B` a product of unimodular Blaschke factors.
pub fn blaschke_factorize(p: &PolynomialH2) -> Result<Factorization> {
    if p.is_zero() || p.degree() == 0 {
        return Ok(Factorization {
            inside_roots: Vec::new(),
            quotient: p.clone(),
            remainders: Vec::new(),
        });
    }
    let scale = p.norm();
    let all_roots = poly_roots(p)?;
    let mut coeffs = p.coeffs.clone();
    let mut inside = Vec::new();
    let mut remainders = Vec::new();
    for root in all_roots {
        if root.norm() >= 1.0 - BOUNDARY_ROOT_TOLERANCE {
            continue;
        }
        let (q, rem) = divide_linear(&coeffs, root);
        let rem_mag = rem.norm();
        if rem_mag > 1e-8 * scale {
            return Err(Error::unstable(format!(
                "division remainder {rem_mag} exceeds 1e-8 * ||p||"
            )));
        }
        remainders.push(rem_mag);
        coeffs = if root.norm() == 0.0 {
            q
        } else {
            mul_moebius_numerator(&q, root)
        };
        inside.push(root);
    }
    Ok(Factorization {
        inside_roots: inside,
        quotient: PolynomialH2::new(coeffs)?,
        remainders,
    })
}

/// One unwinding step: the roots of B_k and the next iterate.
pub struct UnwindingStep {
    /// F_k(0), the constant removed at this step.
    pub constant: Complex64,
    /// Zeros of B_{k+1} inside the disk (with multiplicity).
    pub roots: Vec<Complex64>,
    /// Largest division remainder of the factorization.
    pub remainder: f64,
}

pub struct UnwindingResult {
    pub steps: Vec<UnwindingStep>,
    /// F_n after the last step (zero when the series terminated).
    pub residual: PolynomialH2,
}

impl UnwindingResult {
    pub fn constants(&self) -> Vec<Complex64> {
        self.steps.iter().map(|s| s.constant).collect()
    }

    /// Flattened block roots in unwinding order.
    pub fn all_roots(&self) -> Vec<Complex64> {
        self.steps.iter().flat_map(|s| s.roots.iter().copied()).collect()
    }

    pub fn bessel_sum(&self) -> f64 {
        self.steps.iter().map(|s| s.constant.norm_sqr()).sum()
    }

    /// JSON-lines dump: one record per step.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for (k, s) in self.steps.iter().enumerate() {
            let roots: Vec<String> = s
                .roots
                .iter()
                .map(|r| format!("{{\"re\":{},\"im\":{}}}", fmt_g17(r.re), fmt_g17(r.im)))
                .collect();
            out.push_str(&format!(
                "{{\"k\":{k},\"Fk0_re\":{},\"Fk0_im\":{},\"roots\":[{}],\"remainder\":{}}}\n",
                fmt_g17(s.constant.re),
                fmt_g17(s.constant.im),
                roots.join(","),
                fmt_g17(s.remainder),
            ));
        }
        out
    }
}

/// Iterate `F_n = (F_{n-1} - F_{n-1}(0)) / B_n` for at most `steps` steps,
/// stopping early when the iterate is constant.
pub fn unwind(f: &PolynomialH2, steps: usize) -> Result<UnwindingResult> {
    let mut current = f.clone();
    let mut out = Vec::new();
    for _ in 0..steps {
        let c0 = current.eval(Complex64::new(0.0, 0.0));
        let mut g_coeffs = current.coeffs.clone();
        g_coeffs[0] -= c0;
        let g = PolynomialH2::new(g_coeffs)?;
        if g.is_zero() {
            out.push(UnwindingStep {
                constant: c0,
                roots: Vec::new(),
                remainder: 0.0,
            });
            return Ok(UnwindingResult {
                steps: out,
                residual: PolynomialH2::zero(),
            });
        }
        let fact = blaschke_factorize(&g)?;
        if fact.inside_roots.is_empty() {
            return Err(Error::unstable(
                "iterate vanishing at 0 produced no inside roots",
            ));
        }
        out.push(UnwindingStep {
            constant: c0,
            roots: fact.inside_roots,
            remainder: fact.remainders.iter().cloned().fold(0.0, f64::max),
        });
        current = fact.quotient;
    }
    Ok(UnwindingResult {
        steps: out,
        residual: current,
    })
}

/// Evaluate the product of unimodular Blaschke factors with the given
/// zeros at a boundary point.
pub fn blaschke_product_boundary(roots: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for &a in roots {
        if a.norm() == 0.0 {
            acc *= z;
        } else {
            acc *= (a.conj() / a.norm()) * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z);
        }
    }
    acc
}

/// Sup-norm error of the telescoping identity
/// `F = sum_k F_k(0) B_1...B_k + F_n B_1...B_n` on a boundary grid.
pub fn telescoping_error(f: &PolynomialH2, result: &UnwindingResult, grid: CircleGrid) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..grid.n_points() {
        let z = Complex64::from_polar(1.0, grid.theta(j));
        let mut acc = Complex64::new(0.0, 0.0);
        let mut prod = Complex64::new(1.0, 0.0);
        for s in &result.steps {
            acc += s.constant * prod;
            prod *= blaschke_product_boundary(&s.roots, z);
        }
        acc += result.residual.eval(z) * prod;
        worst = worst.max((acc - f.eval(z)).norm());
    }
    worst
}

/// Comparison of the unwinding series against the MT expansion built from
/// the flattened block roots, at block-boundary indices.
pub struct MtComparison {
    /// Max relative L^2 discrepancy over block boundaries.
    pub max_discrepancy: f64,
    /// Cumulative root count at each compared boundary.
    pub boundaries: Vec<usize>,
}

pub fn unwind_to_mt(
    f: &PolynomialH2,
    result: &UnwindingResult,
    grid: CircleGrid,
) -> Result<MtComparison> {
    let roots = result.all_roots();
    if roots.is_empty() {
        return Ok(MtComparison {
            max_discrepancy: 0.0,
            boundaries: Vec::new(),
        });
    }
    let points: Vec<DiskPoint> = roots
        .iter()
        .map(|r| DiskPoint::new(r.norm(), r.arg()))
        .collect::<Result<_>>()?;
    let seq = MTSequence::new(points, 1, SequenceKind::Custom);
    let basis = build_basis(&seq, grid)?;
    let f_grid = f.sample(grid);
    let f_norm = f_grid.norm().max(1e-300);

    let mut boundaries = Vec::new();
    let mut worst = 0.0f64;
    let mut cum = 0usize;
    for (b, s) in result.steps.iter().enumerate() {
        if s.roots.is_empty() {
            // terminating constant-only step: not a block boundary
            break;
        }
        cum += s.roots.len();
        boundaries.push(cum);
        // unwinding partial sum through block b
        let mut unw = vec![Complex64::new(0.0, 0.0); grid.n_points()];
        for j in 0..grid.n_points() {
            let z = Complex64::from_polar(1.0, grid.theta(j));
            let mut acc = Complex64::new(0.0, 0.0);
            let mut prod = Complex64::new(1.0, 0.0);
            for s2 in result.steps.iter().take(b + 1) {
                acc += s2.constant * prod;
                prod *= blaschke_product_boundary(&s2.roots, z);
            }
            unw[j] = acc;
        }
        // MT partial sum over phi_0 .. phi_{cum - 1}
        let mt = partial_sum(&f_grid, &basis, cum as i64 - 1, PartialSumMethod::Coefficient)?;
        let mut diff_sq = 0.0f64;
        for j in 0..grid.n_points() {
            diff_sq += (unw[j] - mt.values()[j]).norm_sqr();
        }
        let disc = (diff_sq / grid.n_points() as f64).sqrt() / f_norm;
        worst = worst.max(disc);
    }
    Ok(MtComparison {
        max_discrepancy: worst,
        boundaries,
    })
}
