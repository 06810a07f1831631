//! Completed-zeta evaluators.
//!
//! `zeta_tilde(z) = (z - 1) zeta(z)` is computed pole-free: Euler-Maclaurin
//! gives `zeta(s) = P(s) + N^{1-s}/(s-1)` with `P` entire in the summation
//! window, so `(z-1) P(z) + N^{1-z}` never divides by `z - 1`.  The strip
//! `Re z >= -1/2` uses Euler-Maclaurin directly; the left half-plane goes
//! through the functional equation in log space.  `xi` folds `Re z < 1/2`
//! onto `1 - z` by its exact symmetry.
//!
//! Accuracy is validated for `|z| <= 60` (see `ZETA_ENVELOPE`), with
//! near-machine relative error for `|z| <= 40`.

use crate::num::rat::{binomial, factorial, rat_to_f64};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

/// Euler-Maclaurin correction depth.
const EM_TERMS: usize = 20;
/// Stirling series depth for `ln_gamma`.
const STIRLING_TERMS: usize = 10;

struct Tables {
    /// B_{2j} / (2j)! for j = 1..=EM_TERMS
    em: Vec<f64>,
    /// B_{2j} / (2j (2j-1)) for j = 1..=STIRLING_TERMS
    stirling: Vec<f64>,
}

static TABLES: OnceLock<Tables> = OnceLock::new();

/// Exact Bernoulli numbers B_0 .. B_n (B_1 = -1/2 convention) via the
/// defining recurrence.
fn bernoulli_rationals(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::from_integer(1.into()));
    for m in 1..=n {
        let mut s = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += BigRational::from_integer(binomial(m + 1, j)) * bj;
        }
        let coef = BigRational::new(BigInt::from(-1), BigInt::from(m as i64 + 1));
        b.push(coef * s);
    }
    b
}

fn tables() -> &'static Tables {
    TABLES.get_or_init(|| {
        let b = bernoulli_rationals(2 * EM_TERMS + 2);
        let em = (1..=EM_TERMS)
            .map(|j| {
                let r = &b[2 * j] / BigRational::from_integer(factorial(2 * j));
                rat_to_f64(&r)
            })
            .collect();
        let stirling = (1..=STIRLING_TERMS)
            .map(|j| {
                let d = BigInt::from((2 * j * (2 * j - 1)) as i64);
                let r = &b[2 * j] / BigRational::from_integer(d);
                rat_to_f64(&r)
            })
            .collect();
        Tables { em, stirling }
    })
}

/// Euler-Maclaurin evaluation of the pole-free part `P(s)` with
/// `zeta(s) = P(s) + N^{1-s}/(s-1)`, valid for `Re s >= -1/2`.
/// Returns `(P(s), N)`.
fn em_pole_free(s: Complex64) -> (Complex64, f64) {
    let t = tables();
    let n_cut = 30 + (0.8 * s.im.abs()).ceil() as usize;
    let nf = n_cut as f64;
    let ln_n = nf.ln();

    let mut p = Complex64::new(0.0, 0.0);
    for n in 1..n_cut {
        let lnn = (n as f64).ln();
        p += (-s * lnn).exp();
    }
    p += (-s * ln_n).exp() * 0.5;

    // sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    let mut rising = s;
    for (j, bf) in t.em.iter().enumerate() {
        let j = j + 1;
        let expo = -(s + (2 * j - 1) as f64) * ln_n;
        if expo.re > -745.0 {
            p += rising * *bf * expo.exp();
        }
        rising = rising * (s + (2 * j - 1) as f64) * (s + (2 * j) as f64);
    }
    (p, nf)
}

/// Log of `sin w`, dominant-branch stable for large `|Im w|`.
/// Any branch ambiguity is a multiple of `2 pi i` and vanishes under `exp`.
fn log_sin(w: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    if w.im >= 20.0 {
        // sin w = -e^{-iw} (1 - e^{2iw}) / (2i)
        -i * w + (Complex64::new(1.0, 0.0) - (i * w * 2.0).exp()).ln()
            + Complex64::new(-LN_2, PI / 2.0)
    } else if w.im <= -20.0 {
        i * w + (Complex64::new(1.0, 0.0) - (-i * w * 2.0).exp()).ln()
            - Complex64::new(LN_2, PI / 2.0)
    } else {
        w.sin().ln()
    }
}

/// Principal `log Gamma(z)` for `Re z > 0`: argument shifts into `|z| >= 12`,
/// then the Stirling series.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    assert!(z.re > 0.0, "ln_gamma requires Re z > 0, got {z}");
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.norm() < 12.0 {
        acc -= z.ln();
        z += 1.0;
    }
    let t = tables();
    let mut s = (z - 0.5) * z.ln() - z + Complex64::new(0.5 * (2.0 * PI).ln(), 0.0);
    let zi = z.inv();
    let z2 = zi * zi;
    let mut zp = zi;
    for c in &t.stirling {
        s += zp * *c;
        zp *= z2;
    }
    s + acc
}

/// `(z - 1) zeta(z)`, entire.
pub fn zeta_tilde(z: Complex64) -> Complex64 {
    if z.re >= -0.5 {
        let (p, n) = em_pole_free(z);
        let ln_n = n.ln();
        (z - 1.0) * p + ((Complex64::new(1.0, 0.0) - z) * ln_n).exp()
    } else {
        // trivial zeros sit exactly on the negative even integers
        if z.im == 0.0 && (z.re / 2.0).fract() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        // (z-1) zeta(z) = (z-1) 2^z pi^{z-1} sin(pi z / 2) Gamma(1-z) zeta(1-z)
        let w = Complex64::new(1.0, 0.0) - z; // Re w >= 3/2
        let (p, n) = em_pole_free(w);
        let zeta_w = p + ((Complex64::new(1.0, 0.0) - w) * n.ln()).exp() / (w - 1.0);
        let log_total = (z - 1.0).ln()
            + z * LN_2
            + (z - 1.0) * PI.ln()
            + log_sin(z * (PI / 2.0))
            + ln_gamma(w)
            + zeta_w.ln();
        log_total.exp()
    }
}

/// `zeta(z)`; unbounded near the pole at `z = 1`.
pub fn zeta(z: Complex64) -> Complex64 {
    if z.re >= -0.5 {
        let (p, n) = em_pole_free(z);
        p + ((Complex64::new(1.0, 0.0) - z) * n.ln()).exp() / (z - 1.0)
    } else {
        zeta_tilde(z) / (z - 1.0)
    }
}

/// Completed zeta `xi(z) = pi^{-z/2} Gamma(z/2 + 1) (z - 1) zeta(z)`,
/// entire and symmetric under `z -> 1 - z`.
pub fn xi(z: Complex64) -> Complex64 {
    let z = if z.re < 0.5 {
        Complex64::new(1.0, 0.0) - z
    } else {
        z
    };
    let zt = zeta_tilde(z);
    if zt.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let lg = ln_gamma(z / 2.0 + 1.0);
    let lpi = -(z / 2.0) * PI.ln();
    (lg + lpi + zt.ln()).exp()
}

/// k-th derivative by a discrete Cauchy integral on a radius-1/2 circle
/// with 256 samples; for functions analytic well past that circle the
/// aliasing error is negligible.
pub fn deriv_via_cauchy(
    f: &dyn Fn(Complex64) -> Complex64,
    z: Complex64,
    k: usize,
) -> Complex64 {
    const K: usize = 256;
    const RHO: f64 = 0.5;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..K {
        let th = 2.0 * PI * m as f64 / K as f64;
        let v = f(z + Complex64::from_polar(RHO, th));
        acc += v * Complex64::from_polar(1.0, -(k as f64) * th);
    }
    let kfac = rat_to_f64(&BigRational::from_integer(factorial(k)));
    acc * kfac / (K as f64) / RHO.powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_rel(got: Complex64, want: Complex64, tol: f64) {
        let scale = want.norm().max(1e-30);
        let err = (got - want).norm() / scale;
        assert!(err < tol, "got {got}, want {want}, rel err {err:.3e}");
    }

    #[test]
    fn bernoulli_recurrence_exact() {
        let b = bernoulli_rationals(12);
        assert_eq!(b[2], BigRational::new(1.into(), 6.into()));
        assert_eq!(b[4], BigRational::new((-1).into(), 30.into()));
        assert_eq!(b[12], BigRational::new((-691).into(), 2730.into()));
        assert!(b[3].is_zero() && b[5].is_zero() && b[11].is_zero());
    }

    #[test]
    fn zeta_right_half_plane() {
        assert_rel(zeta(c(2.0, 0.0)), c(1.6449340668482264, 0.0), 1e-13);
        assert_rel(zeta(c(3.0, 0.0)), c(1.2020569031595943, 0.0), 1e-13);
        assert_rel(zeta(c(0.0, 0.0)), c(-0.5, 0.0), 1e-13);
        assert_rel(zeta(c(0.5, 0.0)), c(-1.4603545088095868, 0.0), 1e-13);
        assert_rel(
            zeta(c(2.0, 3.0)),
            c(0.79802198514627572, -0.11374430805293850),
            1e-13,
        );
        assert_rel(
            zeta(c(0.25, 20.0)),
            c(0.22259143807242658, -1.3524169988674268),
            1e-12,
        );
        assert_rel(
            zeta(c(30.0, 30.0)),
            c(0.99999999965969427, -8.6692679817842084e-10),
            1e-13,
        );
    }

    #[test]
    fn zeta_left_half_plane_reflection() {
        assert_rel(zeta(c(-1.0, 0.0)), c(-1.0 / 12.0, 0.0), 1e-13);
        assert_rel(zeta(c(-15.5, 0.0)), c(0.49627121991205761, 0.0), 1e-12);
        assert_rel(
            zeta(c(-2.5, 10.0)),
            c(4.2635902888891945, 1.4598166199175628),
            1e-12,
        );
        assert_rel(
            zeta(c(-30.0, 25.0)),
            c(4.1216098912191170e20, 2.5179443772689832e20),
            5e-12,
        );
    }

    #[test]
    fn zeta_trivial_zeros_exact() {
        for k in [-2.0, -8.0, -30.0] {
            assert_eq!(zeta_tilde(c(k, 0.0)), c(0.0, 0.0));
        }
    }

    #[test]
    fn zeta_tilde_pole_free_near_one() {
        assert_rel(zeta_tilde(c(0.999, 0.0)), c(0.99942285715578879, 0.0), 1e-13);
        assert_rel(zeta_tilde(c(1.0, 0.0)), c(1.0, 0.0), 1e-13);
        assert_rel(zeta_tilde(c(2.0, 0.0)), c(1.6449340668482264, 0.0), 1e-13);
    }

    #[test]
    fn ln_gamma_frozen_values() {
        // Gamma(6) = 120
        let g6 = ln_gamma(c(6.0, 0.0)).exp();
        assert_rel(g6, c(120.0, 0.0), 1e-13);
        assert_rel(
            ln_gamma(c(0.5, 30.0)),
            c(-46.204951270642226, 72.037310428805793),
            1e-13,
        );
    }

    #[test]
    fn xi_frozen_values() {
        assert_rel(xi(c(0.5, 0.0)), c(0.49712077818831411, 0.0), 1e-13);
        assert_rel(xi(c(2.0, 0.0)), c(PI / 6.0, 0.0), 1e-13);
        assert_rel(
            xi(c(3.0, 4.0)),
            c(0.35616210033585061, 0.18055839777162675),
            1e-12,
        );
        assert_rel(xi(c(30.0, 0.0)), c(1323273.2064323477, 0.0), 1e-12);
    }

    #[test]
    fn xi_functional_symmetry() {
        for (re, im) in [(0.3, 5.0), (-3.0, 2.0), (0.5, 14.0), (-10.0, -7.0)] {
            let a = xi(c(re, im));
            let b = xi(c(1.0 - re, -im));
            assert_rel(a, b, 1e-11);
        }
    }

    #[test]
    fn cauchy_derivative_matches_finite_difference() {
        let f = |z: Complex64| zeta_tilde(z);
        let z0 = c(2.0, 1.0);
        let h = 1e-5;
        let fd = (f(z0 + c(h, 0.0)) - f(z0 - c(h, 0.0))) / (2.0 * h);
        let dc = deriv_via_cauchy(&f, z0, 1);
        assert!((fd - dc).norm() < 1e-8, "fd {fd} vs cauchy {dc}");
        // second derivative of e^z is e^z
        let g = |z: Complex64| z.exp();
        let d2 = deriv_via_cauchy(&g, c(0.3, 0.2), 2);
        assert_rel(d2, c(0.3, 0.2).exp(), 1e-12);
    }
}
