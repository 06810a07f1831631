//! Exact rational-complex arithmetic used by the kernel constructions and
//! the exact Taylor paths.

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Gaussian rational: `re + im * i` with exact rational parts.
#[derive(Clone, PartialEq, Eq)]
pub struct CRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CRat { re, im }
    }

    pub fn zero() -> Self {
        CRat {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        CRat {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        CRat {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        CRat {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_real(re: BigRational) -> Self {
        CRat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Exact reciprocal; panics on zero (callers guard).
    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "reciprocal of zero CRat");
        CRat {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        CRat {
            re: &self.re * k,
            im: &self.im * k,
        }
    }
}

impl fmt::Debug for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Add for &CRat {
    type Output = CRat;
    fn add(self, rhs: &CRat) -> CRat {
        CRat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &CRat {
    type Output = CRat;
    fn sub(self, rhs: &CRat) -> CRat {
        CRat {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &CRat {
    type Output = CRat;
    fn mul(self, rhs: &CRat) -> CRat {
        CRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        CRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

/// Canonical text form: "p", "p/q", "p+r/si", "p-r/si", "r/si".
/// `parse_crat` accepts exactly what this emits.
pub fn crat_string(c: &CRat) -> String {
    fn rat(r: &BigRational) -> String {
        if r.denom().is_one() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
    if c.im.is_zero() {
        rat(&c.re)
    } else if c.re.is_zero() {
        format!("{}i", rat(&c.im))
    } else if c.im.is_negative() {
        format!("{}-{}i", rat(&c.re), rat(&(-c.im.clone())))
    } else {
        format!("{}+{}i", rat(&c.re), rat(&c.im))
    }
}

pub fn parse_crat(s: &str) -> Option<CRat> {
    let s = s.trim();
    if let Some(body) = s.strip_suffix('i') {
        // split at the sign that separates real and imaginary parts; a
        // leading sign belongs to the real part
        for (pos, ch) in body.char_indices().rev() {
            if (ch == '+' || ch == '-') && pos > 0 {
                let re: BigRational = body[..pos].parse().ok()?;
                let im_body = &body[pos + 1..];
                let im: BigRational = if im_body.is_empty() {
                    BigRational::one()
                } else {
                    im_body.parse().ok()?
                };
                let im = if ch == '-' { -im } else { im };
                return Some(CRat::new(re, im));
            }
        }
        let im: BigRational = if body.is_empty() || body == "-" {
            if body == "-" {
                -BigRational::one()
            } else {
                BigRational::one()
            }
        } else {
            body.parse().ok()?
        };
        Some(CRat::new(BigRational::zero(), im))
    } else {
        let re: BigRational = s.parse().ok()?;
        Some(CRat::new(re, BigRational::zero()))
    }
}

/// Rational-to-f64 with correct handling of magnitudes outside the direct
/// i128 range (falls back on the big-integer bit path).
pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // extremely large/small ratio: compute via logs
        let n = r.numer();
        let d = r.denom();
        if n.is_zero() {
            return 0.0;
        }
        let sign = if n.sign() == Sign::Minus { -1.0 } else { 1.0 };
        let ln = big_log2_abs(n) - big_log2_abs(d);
        sign * (ln * std::f64::consts::LN_2).exp()
    })
}

/// log2 |n| for a BigInt, accurate enough for magnitude decisions.
pub fn big_log2_abs(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 53 {
        return n.abs().to_f64().unwrap().log2();
    }
    let shift = bits - 53;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().unwrap().log2() + shift as f64
}

/// Exact factorial as a BigInt.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Exact conversion of a finite f64 into a rational (IEEE-754 is binary,
/// so every finite double is a dyadic rational).
pub fn f64_to_rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite f64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_mul_matches_float() {
        let a = CRat::new(
            BigRational::new(BigInt::from(3), BigInt::from(7)),
            BigRational::new(BigInt::from(-2), BigInt::from(5)),
        );
        let b = CRat::new(
            BigRational::new(BigInt::from(1), BigInt::from(3)),
            BigRational::new(BigInt::from(4), BigInt::from(9)),
        );
        let exact = (&a * &b).to_complex();
        let float = a.to_complex() * b.to_complex();
        assert!((exact - float).norm() < 1e-15);
    }

    #[test]
    fn recip_roundtrip() {
        let a = CRat::new(
            BigRational::new(BigInt::from(5), BigInt::from(11)),
            BigRational::new(BigInt::from(7), BigInt::from(2)),
        );
        let prod = &a * &a.recip();
        assert!(prod.re.is_one());
        assert!(prod.im.is_zero());
    }

    #[test]
    fn binomial_row() {
        let row: Vec<i64> = (0..=6).map(|k| binomial(6, k).to_f64().unwrap() as i64).collect();
        assert_eq!(row, vec![1, 6, 15, 20, 15, 6, 1]);
    }

    #[test]
    fn big_log2_handles_hugeness() {
        let n = BigInt::from(2).pow(5000) * 3;
        let l = big_log2_abs(&n);
        assert!((l - (5000.0 + 3f64.log2())).abs() < 1e-9);
    }
}
