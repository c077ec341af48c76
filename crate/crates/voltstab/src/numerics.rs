//! Shared numerical kernels: real roots of low-degree polynomials, bracketed
//! scalar root refinement, and a dense-grid sign-scan used as an independent
//! cross-check in tests.

use nalgebra::DMatrix;
use thiserror::Error;

/// Candidate eigenvalues with imaginary part below this are treated as real.
const IMAG_TOL: f64 = 1e-9;

/// Roots closer than this are merged into one.
pub const ROOT_MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum NumericsError {
    #[error("polynomial has no nonzero coefficients")]
    DegenerateInput,
    #[error("no sign change across bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
}

/// Dense real polynomial with coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending-degree coefficients. Trailing zero
    /// coefficients are trimmed; the zero polynomial is kept as a single
    /// zero coefficient and rejected later by `real_roots`.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::new(vec![0.0]);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }
}

/// Interval with a sign change of some scalar function across it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

/// All real roots of `p` inside `[lo, hi]`, ascending, deduplicated.
///
/// Candidates come from the eigenvalues of the companion matrix; near-real
/// candidates are projected onto the real axis and polished by bisection
/// (falling back to damped Newton when no local sign change exists, e.g. at
/// even-multiplicity roots). Exact zero roots are deflated out first so that
/// e.g. `v^4 - v^2` reports 0 and 1 exactly.
pub fn real_roots(p: &Polynomial, lo: f64, hi: f64) -> Result<Vec<f64>, NumericsError> {
    if p.is_zero() {
        return Err(NumericsError::DegenerateInput);
    }
    if lo >= hi || !lo.is_finite() || !hi.is_finite() {
        return Err(NumericsError::InvalidInterval { lo, hi });
    }

    // Deflate exact roots at the origin.
    let mut coeffs = p.coeffs().to_vec();
    let mut zero_root = false;
    while coeffs.len() > 1 && coeffs[0] == 0.0 {
        coeffs.remove(0);
        zero_root = true;
    }
    let deflated = Polynomial::new(coeffs);

    let mut roots = Vec::new();
    if zero_root && lo <= 0.0 && 0.0 <= hi {
        roots.push(0.0);
    }

    let residual_tol = 1e-10 * p.max_abs_coeff().max(1.0);
    match deflated.degree() {
        0 => {}
        1 => {
            let r = -deflated.coeffs()[0] / deflated.coeffs()[1];
            if lo <= r && r <= hi {
                roots.push(r);
            }
        }
        _ => {
            for cand in companion_eigen_real_candidates(&deflated) {
                if cand < lo - 1e-9 || cand > hi + 1e-9 {
                    continue;
                }
                let r = polish_root(&deflated, cand).clamp(lo, hi);
                if deflated.eval(r).abs() <= residual_tol {
                    roots.push(r);
                }
            }
        }
    }

    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= ROOT_MERGE_TOL);
    Ok(roots)
}

/// Real parts of companion-matrix eigenvalues whose imaginary part is
/// negligible. Degree must be >= 2.
fn companion_eigen_real_candidates(p: &Polynomial) -> Vec<f64> {
    let n = p.degree();
    let c = p.coeffs();
    let lead = c[n];
    let m = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    m.complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() < IMAG_TOL)
        .map(|z| z.re)
        .collect()
}

/// Tightens an eigenvalue candidate: bisection when a local sign change
/// brackets it, then guarded Newton to squeeze out the last few ulps (also
/// the sole fallback at even-multiplicity roots, where no sign change
/// exists).
fn polish_root(p: &Polynomial, cand: f64) -> f64 {
    let h = 1e-6 * cand.abs().max(1.0);
    let (a, b) = (cand - h, cand + h);
    let (fa, fb) = (p.eval(a), p.eval(b));
    let mut x = if fa == 0.0 {
        a
    } else if fb == 0.0 {
        b
    } else if fa.signum() != fb.signum() {
        bisect_refine(|t| p.eval(t), Bracket { lo: a, hi: b }, 0.0)
            .expect("sign change verified above")
    } else {
        cand
    };

    let dp = p.derivative();
    for _ in 0..30 {
        let fx = p.eval(x);
        if fx == 0.0 {
            break;
        }
        let dfx = dp.eval(x);
        if dfx == 0.0 {
            break;
        }
        let step = fx / dfx;
        if !step.is_finite() || step.abs() > h {
            break;
        }
        x -= step;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    if p.eval(x).abs() <= p.eval(cand).abs() {
        x
    } else {
        cand
    }
}

/// Bisection on a bracketed sign change. Stops when `|f(mid)| <= tol` or the
/// bracket width shrinks below 1e-14.
pub fn bisect_refine<F>(f: F, bracket: Bracket, tol: f64) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    let Bracket { mut lo, mut hi } = bracket;
    if lo >= hi || lo.is_nan() || hi.is_nan() {
        return Err(NumericsError::InvalidInterval { lo, hi });
    }
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(NumericsError::NoSignChange { lo, hi });
    }

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 || fmid.abs() <= tol || (hi - lo) <= 1e-14 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Samples `f` at `n` evenly spaced points and reports every sub-interval
/// with a sign change. This is the brute-force oracle the root finders are
/// validated against.
pub fn grid_sign_scan<F>(f: F, lo: f64, hi: f64, n: usize) -> Vec<Bracket>
where
    F: Fn(f64) -> f64,
{
    assert!(n >= 2, "grid scan needs at least two samples");
    let mut brackets = Vec::new();
    let step = (hi - lo) / (n - 1) as f64;
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..n {
        let x = if i == n - 1 { hi } else { lo + i as f64 * step };
        let fx = f(x);
        if f_prev == 0.0 {
            brackets.push(Bracket { lo: x_prev, hi: x_prev });
        } else if fx != 0.0 && f_prev.signum() != fx.signum() {
            brackets.push(Bracket { lo: x_prev, hi: x });
        }
        x_prev = x;
        f_prev = fx;
    }
    if f_prev == 0.0 {
        brackets.push(Bracket { lo: x_prev, hi: x_prev });
    }
    brackets
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_root_in_interval() {
        // x^2 - 1 on [0, 2] -> {1}
        let p = Polynomial::new(vec![-1.0, 0.0, 1.0]);
        let roots = real_roots(&p, 0.0, 2.0).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_load_quartic_has_origin_and_unit_roots() {
        // v^4 - v^2 on [0, 2] -> {0, 1}; the origin root is exact.
        let p = Polynomial::new(vec![0.0, 0.0, -1.0, 0.0, 1.0]);
        let roots = real_roots(&p, 0.0, 2.0).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0], 0.0);
        assert!((roots[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn benchmark_quintic_with_load_line() {
        // Tunnel-diode characteristic plus the (v1 - v)/r load line, r = 0.2.
        // True roots sit ~1e-5 from the nominal 0.2/0.5/0.9 markings; the
        // frozen values below come from 30-digit refinement of the same
        // coefficients.
        let p = Polynomial::new(vec![
            -5.0,
            52.5842 + 5.0,
            -246.6894,
            517.9071,
            -539.0593,
            218.6576,
        ]);
        let roots = real_roots(&p, 0.0, 1.5).unwrap();
        assert_eq!(roots.len(), 3);
        let expected = [0.20000065651376277, 0.49998999452509196, 0.9000022102061234];
        for (r, e) in roots.iter().zip(expected) {
            assert!((r - e).abs() < 1e-9, "root {r} vs {e}");
        }
        let tol = 1e-10 * p.max_abs_coeff().max(1.0);
        for r in &roots {
            assert!(p.eval(*r).abs() <= tol);
        }
    }

    #[test]
    fn degenerate_polynomial_rejected() {
        let p = Polynomial::new(vec![0.0, 0.0]);
        assert_eq!(real_roots(&p, 0.0, 1.0), Err(NumericsError::DegenerateInput));
    }

    #[test]
    fn constant_polynomial_has_no_roots() {
        let p = Polynomial::new(vec![2.5]);
        assert!(real_roots(&p, -1.0, 1.0).unwrap().is_empty());
    }

    #[test]
    fn bisect_linear() {
        let root = bisect_refine(|v| v - 0.5, Bracket { lo: 0.0, hi: 1.0 }, 1e-12).unwrap();
        assert!((root - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bisect_requires_sign_change() {
        let err = bisect_refine(|v| v * v + 1.0, Bracket { lo: 0.0, hi: 1.0 }, 1e-12);
        assert!(matches!(err, Err(NumericsError::NoSignChange { .. })));
    }

    #[test]
    fn grid_scan_finds_single_bracket() {
        let brackets = grid_sign_scan(|v| v * v - 0.25, 0.0, 1.0, 1000);
        assert_eq!(brackets.len(), 1);
        assert!(brackets[0].lo < 0.5 && 0.5 < brackets[0].hi);
    }

    #[test]
    fn random_root_count_matches_grid_oracle() {
        // 1000 random polynomials of degree <= 5 built from known roots with
        // separation > 1e-4; companion-matrix extraction must agree with a
        // dense sign scan on both count and location.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..1000 {
            let degree = rng.gen_range(2..=5usize);
            let mut roots: Vec<f64> = Vec::new();
            while roots.len() < degree {
                let cand: f64 = rng.gen_range(-0.95..0.95);
                if roots.iter().all(|r| (r - cand).abs() > 1e-3) {
                    roots.push(cand);
                }
            }
            roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
            // expand product of (x - r_i)
            let mut coeffs = vec![1.0];
            for r in &roots {
                let mut next = vec![0.0; coeffs.len() + 1];
                for (k, &c) in coeffs.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * r;
                }
                coeffs = next;
            }
            let p = Polynomial::new(coeffs);

            let found = real_roots(&p, -1.0, 1.0).unwrap();
            let brackets = grid_sign_scan(|x| p.eval(x), -1.0, 1.0, 100_000);
            assert_eq!(
                found.len(),
                brackets.len(),
                "trial {trial}: root count mismatch (roots {roots:?})"
            );
            for (f, e) in found.iter().zip(&roots) {
                assert!((f - e).abs() < 1e-8, "trial {trial}: {f} vs {e}");
            }
        }
    }
}
