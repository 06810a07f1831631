//! Truncated power-series arithmetic, generic over the coefficient scalar so
//! the same kernels serve f64-complex, exact rational-complex, and
//! number-field coefficients.

use super::rat::CRat;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

/// Coefficient scalar for truncated series arithmetic.
pub trait Scalar: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    /// Multiply by a small nonnegative integer.
    fn scale_u(&self, k: usize) -> Self;
    /// Divide by a small positive integer (exact where the scalar is exact).
    fn div_u(&self, k: usize) -> Self;
    fn is_zero(&self) -> bool;
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn scale_u(&self, k: usize) -> Self {
        self * k as f64
    }
    fn div_u(&self, k: usize) -> Self {
        self / k as f64
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl Scalar for CRat {
    fn zero() -> Self {
        CRat::zero()
    }
    fn one() -> Self {
        CRat::one()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn scale_u(&self, k: usize) -> Self {
        let k = BigRational::from_integer(k.into());
        self.scale(&k)
    }
    fn div_u(&self, k: usize) -> Self {
        let k = BigRational::from_integer(k.into());
        assert!(!k.is_zero());
        self.scale(&k.recip())
    }
    fn is_zero(&self) -> bool {
        CRat::is_zero(self)
    }
}

/// Cauchy product truncated to `len` coefficients (orders `0..len`).
pub fn mul_trunc<T: Scalar>(a: &[T], b: &[T], len: usize) -> Vec<T> {
    let mut out = vec![T::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add_ref(&ai.mul_ref(bj));
        }
    }
    out
}

/// `a^j` truncated to `len` coefficients, by repeated products
/// (series here are short; no need for binary powering).
pub fn pow_trunc<T: Scalar>(a: &[T], j: usize, len: usize) -> Vec<T> {
    let mut out = vec![T::zero(); len];
    if len == 0 {
        return out;
    }
    out[0] = T::one();
    for _ in 0..j {
        out = mul_trunc(&out, a, len);
    }
    out
}

/// Coefficients of `exp(q(z))` truncated to `len`, for a polynomial `q`
/// with `q(0) = 0`, via the derivative recurrence `b' = q' b`:
/// `(k+1) b_{k+1} = sum_i (i+1) q_{i+1} b_{k-i}`.
pub fn exp_poly_trunc<T: Scalar>(q: &[T], len: usize) -> Vec<T> {
    assert!(q.is_empty() || q[0].is_zero(), "exp series needs q(0) = 0");
    let mut b = vec![T::zero(); len];
    if len == 0 {
        return b;
    }
    b[0] = T::one();
    for k in 0..len.saturating_sub(1) {
        let mut acc = T::zero();
        for i in 0..=k {
            if i + 1 < q.len() && !q[i + 1].is_zero() {
                let term = q[i + 1].mul_ref(&b[k - i]).scale_u(i + 1);
                acc = acc.add_ref(&term);
            }
        }
        b[k + 1] = acc.div_u(k + 1);
    }
    b
}

/// Derivative of a truncated series (drops one order).
pub fn derive<T: Scalar>(a: &[T]) -> Vec<T> {
    if a.len() <= 1 {
        return vec![];
    }
    (1..a.len()).map(|k| a[k].scale_u(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat::factorial;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn exp_z_coefficients_exact() {
        // q(z) = z: exp series must be exactly 1/k!
        let q = vec![CRat::zero(), CRat::one()];
        let b = exp_poly_trunc(&q, 12);
        for (k, bk) in b.iter().enumerate() {
            let expect = BigRational::new(BigInt::from(1), factorial(k));
            assert_eq!(bk.re, expect, "order {k}");
            assert!(bk.im.is_zero());
        }
    }

    #[test]
    fn exp_2z_matches_cauchy_square() {
        // exp(2z) coefficients as exp(z)^2 (Cauchy product oracle)
        let q1 = vec![CRat::zero(), CRat::one()];
        let e1 = exp_poly_trunc(&q1, 16);
        let sq = mul_trunc(&e1, &e1, 16);
        let q2 = vec![CRat::zero(), CRat::from_int(2)];
        let e2 = exp_poly_trunc(&q2, 16);
        for k in 0..16 {
            assert_eq!(sq[k].re, e2[k].re, "order {k}");
        }
    }

    #[test]
    fn float_pow_matches_exact() {
        let a: Vec<Complex64> = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.5),
            Complex64::new(-0.25, 0.0),
        ];
        let p = pow_trunc(&a, 3, 8);
        // order-3 coefficient of (a1 z + a2 z^2)^3 is a1^3
        let a1 = Complex64::new(1.0, 0.5);
        assert!((p[3] - a1 * a1 * a1).norm() < 1e-14);
        // order-4: 3 a1^2 a2
        let a2 = Complex64::new(-0.25, 0.0);
        assert!((p[4] - 3.0 * a1 * a1 * a2).norm() < 1e-14);
    }
}
