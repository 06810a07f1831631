//! Shared numeric utilities: adaptive quadrature, exact rational complex
//! arithmetic, power series, and overflow-safe log-space helpers.

pub mod dec;
pub mod quad;
pub mod rat;
pub mod series;

use num_complex::Complex64;

/// Chordal distance on the unit sphere: `2|a-b| / sqrt((1+|a|^2)(1+|b|^2))`.
/// Ranges over (0, 2]; antipodal points (e.g. 1 and -1) are at distance 2.
pub fn chordal(a: Complex64, b: Complex64) -> f64 {
    let na = (1.0 + a.norm_sqr()).sqrt();
    let nb = (1.0 + b.norm_sqr()).sqrt();
    2.0 * (a - b).norm() / (na * nb)
}

/// `log(max(x, 1)) = max(log x, 0)` taken directly on a log-magnitude input:
/// given `lf = log|f|`, returns `log^+ |f|`.
pub fn log_plus_from_log(lf: f64) -> f64 {
    lf.max(0.0)
}

/// `log sqrt(1 + |f|^2)` from `lf = log|f|`, stable for any magnitude.
pub fn log_sqrt1p_sq_from_log(lf: f64) -> f64 {
    if lf > 20.0 {
        // 1 dominates nothing: log|f| + log sqrt(1 + |f|^-2)
        lf + 0.5 * (-2.0 * lf).exp().ln_1p()
    } else if lf < -20.0 {
        0.5 * (2.0 * lf).exp().ln_1p()
    } else {
        0.5 * (2.0 * lf).exp().ln_1p()
    }
}

/// `log(e^a + e^b)` without overflow.
pub fn logsumexp2(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Golden-section refinement of a local maximum of `f` on `[lo, hi]`.
/// Returns `(argmax, max)`. Deterministic; `iters` halvings of the bracket.
pub fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    if fm >= fc && fm >= fd {
        (mid, fm)
    } else if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chordal_antipodal_is_two() {
        let d = chordal(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0));
        assert!((d - 2.0).abs() < 1e-15);
    }

    #[test]
    fn chordal_zero_infinity_limit() {
        // chordal(0, w) -> 2 as |w| -> infinity
        let d = chordal(Complex64::new(0.0, 0.0), Complex64::new(1e12, 0.0));
        assert!((d - 2.0).abs() < 1e-10);
    }

    #[test]
    fn log_sqrt_stable_across_scales() {
        // |f| = e^500: log sqrt(1+|f|^2) = 500 exactly to fp accuracy.
        assert!((log_sqrt1p_sq_from_log(500.0) - 500.0).abs() < 1e-12);
        // |f| = 1: log sqrt 2
        let expect = 0.5 * 2.0_f64.ln();
        assert!((log_sqrt1p_sq_from_log(0.0) - expect).abs() < 1e-15);
        // tiny |f|: ~ |f|^2/2 in log space -> ~0
        assert!(log_sqrt1p_sq_from_log(-500.0).abs() < 1e-15);
    }

    #[test]
    fn golden_finds_quadratic_peak() {
        let (x, v) = golden_max(|x| 1.0 - (x - 0.3).powi(2), 0.0, 1.0, 60);
        // argmax of a smooth peak resolves only to ~sqrt(eps): comparisons
        // near the top differ by O((c-d)^2)
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-15);
    }
}
