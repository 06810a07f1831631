//! Entire-function kinds and pointwise evaluation.
//!
//! A function is one of a closed set of kinds: exponential-polynomial sums
//! `sum_j p_j(z) exp(q_j(z))` with exact rational-complex coefficients,
//! plain polynomials (degenerate Taylor streams), lacunary gap series,
//! the completed zeta variants, programmatic Taylor streams, and the
//! dilation/shift combinators.
//!
//! Every kind supports *scaled* evaluation `f(z) = v * exp(s)` with `|v|`
//! moderate, so growth integrands (`log^+ |f|`, spherical derivative) stay
//! finite far beyond f64 overflow range.

pub mod zeta;

use crate::error::{Error, Result};
use crate::num::rat::CRat;
use crate::num::series;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;
use std::sync::Arc;

/// Largest |z| at which the zeta-family evaluators are trusted.
pub const ZETA_ENVELOPE: f64 = 60.0;

#[derive(Clone)]
pub struct EntireFunction {
    kind: Kind,
}

#[derive(Clone)]
enum Kind {
    /// sum of p_j(z) exp(q_j(z)), exact coefficients with float mirrors
    ExpPoly(ExpPolyData),
    /// finite Taylor polynomial
    Poly(PolyData),
    /// sum over j of (z / n_j)^{n_j}, n_{j+1} = n_j^{tau - 1}
    Gap(GapData),
    /// (z - 1) zeta(z)
    ZetaTilde,
    /// pi^{-z/2} Gamma(z/2 + 1) (z - 1) zeta(z), symmetric about z = 1/2
    Xi,
    /// programmatic coefficient stream with a declared tail bound
    Stream(Arc<StreamData>),
    Dilate {
        inner: Box<EntireFunction>,
        factor: f64,
        factor_exact: Option<BigRational>,
    },
    /// f - offset
    Shift {
        inner: Box<EntireFunction>,
        offset: Complex64,
        offset_exact: Option<CRat>,
    },
}

#[derive(Clone)]
struct ExpTerm {
    p: Vec<CRat>,
    q: Vec<CRat>,
    pf: Vec<Complex64>,
    qf: Vec<Complex64>,
}

#[derive(Clone)]
struct ExpPolyData {
    terms: Vec<ExpTerm>,
}

#[derive(Clone)]
struct PolyData {
    c: Vec<CRat>,
    cf: Vec<Complex64>,
}

#[derive(Clone, Copy)]
struct GapData {
    n1: u64,
    tau: u32,
}

pub struct StreamData {
    pub name: String,
    /// coefficient a_l
    pub coeff: Box<dyn Fn(usize) -> Complex64 + Send + Sync>,
    pub exact: Option<Box<dyn Fn(usize) -> CRat + Send + Sync>>,
    /// log of a certified upper bound of sum_{l >= l0} |a_l| r^l
    pub tail_log: Box<dyn Fn(usize, f64) -> f64 + Send + Sync>,
    /// highest nonzero order, if the stream is a polynomial
    pub max_order: Option<usize>,
}

impl ExpTerm {
    fn new(p: Vec<CRat>, q: Vec<CRat>) -> Self {
        let pf = p.iter().map(CRat::to_complex).collect();
        let qf = q.iter().map(CRat::to_complex).collect();
        ExpTerm { p, q, pf, qf }
    }
}

fn poly_eval(c: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for ck in c.iter().rev() {
        acc = acc * z + ck;
    }
    acc
}

fn poly_derive_exact(c: &[CRat]) -> Vec<CRat> {
    series::derive(c)
}

fn poly_mul_exact(a: &[CRat], b: &[CRat]) -> Vec<CRat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    series::mul_trunc(a, b, a.len() + b.len() - 1)
}

fn poly_add_exact(a: &[CRat], b: &[CRat]) -> Vec<CRat> {
    let n = a.len().max(b.len());
    let mut out = vec![CRat::zero(); n];
    for (i, v) in a.iter().enumerate() {
        out[i] = &out[i] + v;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] = &out[i] + v;
    }
    out
}

fn trim_exact(mut c: Vec<CRat>) -> Vec<CRat> {
    while c.last().is_some_and(CRat::is_zero) {
        c.pop();
    }
    c
}

impl EntireFunction {
    /// `e^z`.
    pub fn exp() -> Self {
        EntireFunction {
            kind: Kind::ExpPoly(ExpPolyData {
                terms: vec![ExpTerm::new(
                    vec![CRat::one()],
                    vec![CRat::zero(), CRat::one()],
                )],
            }),
        }
    }

    /// General exponential-polynomial sum from exact coefficients:
    /// each term is `(p coefficients, q coefficients)` meaning `p(z) e^{q(z)}`.
    pub fn exp_poly(terms: Vec<(Vec<CRat>, Vec<CRat>)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::domain("exp-polynomial sum needs at least one term"));
        }
        Ok(EntireFunction {
            kind: Kind::ExpPoly(ExpPolyData {
                terms: terms
                    .into_iter()
                    .map(|(p, q)| ExpTerm::new(trim_exact(p), trim_exact(q)))
                    .collect(),
            }),
        })
    }

    /// Polynomial with exact coefficients `c[0] + c[1] z + ...`
    /// (degenerate Taylor stream).
    pub fn polynomial(c: Vec<CRat>) -> Self {
        let c = trim_exact(c);
        let cf = c.iter().map(CRat::to_complex).collect();
        EntireFunction {
            kind: Kind::Poly(PolyData { c, cf }),
        }
    }

    /// Monomial `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![CRat::zero(); n + 1];
        c[n] = CRat::one();
        Self::polynomial(c)
    }

    /// Gap series `sum_j (z / n_j)^{n_j}` with `n_{j+1} = n_j^{tau-1}`.
    pub fn gap_series(n1: u64, tau: u32) -> Result<Self> {
        if n1 < 2 {
            return Err(Error::domain("gap series needs n1 >= 2"));
        }
        if tau < 3 {
            return Err(Error::domain("gap series needs integer tau >= 3"));
        }
        Ok(EntireFunction {
            kind: Kind::Gap(GapData { n1, tau }),
        })
    }

    /// `(z-1) zeta(z)`, entire.
    pub fn zeta_tilde() -> Self {
        EntireFunction {
            kind: Kind::ZetaTilde,
        }
    }

    /// Completed zeta `xi(z)`, entire, `xi(z) = xi(1-z)`.
    pub fn xi() -> Self {
        EntireFunction { kind: Kind::Xi }
    }

    /// Programmatic Taylor stream.
    pub fn stream(data: StreamData) -> Self {
        EntireFunction {
            kind: Kind::Stream(Arc::new(data)),
        }
    }

    /// Dilation `z -> f(factor * z)`; nested dilations combine
    /// multiplicatively into a single node.
    pub fn dilate(self, factor: f64, factor_exact: Option<BigRational>) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::domain("dilation factor must be positive and finite"));
        }
        if let Some(r) = &factor_exact {
            let back = crate::num::rat::rat_to_f64(r);
            if (back - factor).abs() > 1e-12 * factor.abs() {
                return Err(Error::domain("exact dilation factor disagrees with float"));
            }
        }
        Ok(match self.kind {
            Kind::Dilate {
                inner,
                factor: f0,
                factor_exact: e0,
            } => EntireFunction {
                kind: Kind::Dilate {
                    inner,
                    factor: f0 * factor,
                    factor_exact: match (e0, factor_exact) {
                        (Some(a), Some(b)) => Some(a * b),
                        _ => None,
                    },
                },
            },
            kind => EntireFunction {
                kind: Kind::Dilate {
                    inner: Box::new(EntireFunction { kind }),
                    factor,
                    factor_exact,
                },
            },
        })
    }

    /// `f - offset`; nested shifts combine additively.
    pub fn shift(self, offset: Complex64, offset_exact: Option<CRat>) -> Self {
        match self.kind {
            Kind::Shift {
                inner,
                offset: w0,
                offset_exact: e0,
            } => EntireFunction {
                kind: Kind::Shift {
                    inner,
                    offset: w0 + offset,
                    offset_exact: match (e0, offset_exact) {
                        (Some(a), Some(b)) => Some(&a + &b),
                        _ => None,
                    },
                },
            },
            kind => EntireFunction {
                kind: Kind::Shift {
                    inner: Box::new(EntireFunction { kind }),
                    offset,
                    offset_exact,
                },
            },
        }
    }

    /// Radius beyond which evaluation accuracy is not validated
    /// (`None` = no hard envelope).
    pub fn envelope_radius(&self) -> Option<f64> {
        match &self.kind {
            Kind::ZetaTilde | Kind::Xi => Some(ZETA_ENVELOPE),
            Kind::Dilate { inner, factor, .. } => {
                inner.envelope_radius().map(|r| r / factor)
            }
            Kind::Shift { inner, .. } => inner.envelope_radius(),
            _ => None,
        }
    }

    /// Degree if the function is a polynomial.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match &self.kind {
            Kind::Poly(p) => Some(p.c.len().saturating_sub(1)),
            Kind::ExpPoly(d) => {
                if d.terms.iter().all(|t| t.q.len() <= 1 && t.q.iter().all(CRat::is_zero)) {
                    Some(
                        d.terms
                            .iter()
                            .map(|t| t.p.len().saturating_sub(1))
                            .max()
                            .unwrap_or(0),
                    )
                } else {
                    None
                }
            }
            Kind::Gap(_) | Kind::ZetaTilde | Kind::Xi => None,
            Kind::Stream(s) => s.max_order,
            Kind::Dilate { inner, .. } | Kind::Shift { inner, .. } => inner.polynomial_degree(),
        }
    }

    /// f(0).
    pub fn at_zero(&self) -> Complex64 {
        self.eval(Complex64::new(0.0, 0.0))
    }

    /// Plain evaluation. May overflow to infinity for very large |z|;
    /// growth integrands use [`EntireFunction::eval_scaled`] instead.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let (v, _, s) = self.eval_with_deriv_scaled(z);
        v * s.exp()
    }

    /// Scaled evaluation: returns `(v, s)` with `f(z) = v * exp(s)` and
    /// `|v|` within f64 range (0 encoded as `(0, 0)`).
    pub fn eval_scaled(&self, z: Complex64) -> (Complex64, f64) {
        let (v, _, s) = self.eval_with_deriv_scaled(z);
        (v, s)
    }

    /// `log |f(z)|` (`-inf` at zeros), overflow-safe.
    pub fn log_abs(&self, z: Complex64) -> f64 {
        let (v, s) = self.eval_scaled(z);
        let n = v.norm();
        if n == 0.0 {
            f64::NEG_INFINITY
        } else {
            n.ln() + s
        }
    }

    /// Spherical derivative `|f'| / (1 + |f|^2)`, overflow-safe.
    pub fn spherical(&self, z: Complex64) -> f64 {
        let (v, w, s) = self.eval_with_deriv_scaled(z);
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        let lf = {
            let nv = v.norm();
            if nv == 0.0 {
                f64::NEG_INFINITY
            } else {
                nv.ln() + s
            }
        };
        // log sqrt(1+|f|^2)
        let l = crate::num::log_sqrt1p_sq_from_log(lf);
        (nw.ln() + s - 2.0 * l).exp()
    }

    /// First derivative.
    pub fn deriv(&self, z: Complex64) -> Complex64 {
        let (_, w, s) = self.eval_with_deriv_scaled(z);
        w * s.exp()
    }

    /// Scaled joint evaluation `(v, w, s)`: `f = v e^s`, `f' = w e^s`.
    pub fn eval_with_deriv_scaled(&self, z: Complex64) -> (Complex64, Complex64, f64) {
        match &self.kind {
            Kind::ExpPoly(d) => exppoly_eval_scaled(d, z),
            Kind::Poly(p) => {
                let mut f = Complex64::new(0.0, 0.0);
                let mut df = Complex64::new(0.0, 0.0);
                for ck in p.cf.iter().rev() {
                    df = df * z + f;
                    f = f * z + ck;
                }
                (f, df, 0.0)
            }
            Kind::Gap(g) => gap_eval_scaled(*g, z),
            Kind::ZetaTilde => {
                let f = zeta::zeta_tilde(z);
                let df = zeta::deriv_via_cauchy(&|w| zeta::zeta_tilde(w), z, 1);
                (f, df, 0.0)
            }
            Kind::Xi => {
                let f = zeta::xi(z);
                let df = zeta::deriv_via_cauchy(&|w| zeta::xi(w), z, 1);
                (f, df, 0.0)
            }
            Kind::Stream(sd) => stream_eval(sd, z),
            Kind::Dilate { inner, factor, .. } => {
                let (v, w, s) = inner.eval_with_deriv_scaled(z * *factor);
                (v, w * *factor, s)
            }
            Kind::Shift { inner, offset, .. } => {
                let (v, w, s) = inner.eval_with_deriv_scaled(z);
                // subtract offset in the scaled frame
                if s.abs() < 500.0 {
                    let es = s.exp();
                    (v - offset / es, w, s)
                } else if s > 0.0 {
                    // offset negligible against e^s scale only if |offset| << e^s;
                    // here e^s is astronomically large, offset vanishes
                    (v, w, s)
                } else {
                    // f itself negligible against offset
                    let es = s.exp();
                    (v * es - offset, w * es, 0.0)
                }
            }
        }
    }

    /// k-th derivative (k = 0 is plain evaluation).
    pub fn eval_deriv(&self, z: Complex64, k: usize) -> Complex64 {
        if k == 0 {
            return self.eval(z);
        }
        match &self.kind {
            Kind::ExpPoly(d) => {
                let mut cur = d.clone();
                for _ in 0..k {
                    cur = exppoly_differentiate(&cur);
                }
                let (v, _, s) = exppoly_eval_scaled(&cur, z);
                v * s.exp()
            }
            Kind::Poly(p) => {
                let mut c = p.c.clone();
                for _ in 0..k {
                    c = poly_derive_exact(&c);
                }
                let cf: Vec<Complex64> = c.iter().map(CRat::to_complex).collect();
                poly_eval(&cf, z)
            }
            Kind::Gap(g) => gap_deriv(*g, z, k),
            Kind::ZetaTilde => zeta::deriv_via_cauchy(&|w| zeta::zeta_tilde(w), z, k),
            Kind::Xi => zeta::deriv_via_cauchy(&|w| zeta::xi(w), z, k),
            Kind::Stream(sd) => stream_deriv(sd, z, k),
            Kind::Dilate { inner, factor, .. } => {
                inner.eval_deriv(z * *factor, k) * factor.powi(k as i32)
            }
            Kind::Shift { inner, .. } => inner.eval_deriv(z, k),
        }
    }

    /// Float Taylor coefficients `a_0 .. a_{len-1}` at the origin.
    pub fn taylor_float(&self, len: usize) -> Vec<Complex64> {
        if let Some(exact) = self.taylor_exact(len) {
            return exact.iter().map(CRat::to_complex).collect();
        }
        match &self.kind {
            Kind::ZetaTilde => taylor_via_cauchy(&|w| zeta::zeta_tilde(w), len, 1.0, 512),
            Kind::Xi => taylor_via_cauchy(&|w| zeta::xi(w), len, 1.0, 512),
            Kind::Stream(sd) => (0..len).map(|k| (sd.coeff)(k)).collect(),
            Kind::Dilate { inner, factor, .. } => {
                let base = inner.taylor_float(len);
                let mut rk = 1.0;
                base.into_iter()
                    .map(|c| {
                        let out = c * rk;
                        rk *= factor;
                        out
                    })
                    .collect()
            }
            Kind::Shift { inner, offset, .. } => {
                let mut base = inner.taylor_float(len);
                if !base.is_empty() {
                    base[0] -= offset;
                }
                base
            }
            _ => unreachable!("exact kinds handled above"),
        }
    }

    /// Exact Taylor coefficients at the origin, where the kind supports them.
    pub fn taylor_exact(&self, len: usize) -> Option<Vec<CRat>> {
        match &self.kind {
            Kind::ExpPoly(d) => {
                let mut acc = vec![CRat::zero(); len];
                for t in &d.terms {
                    // p(z) * e^{q(0)} ... exact only when q(0) = 0
                    if t.q.first().is_some_and(|c| !c.is_zero()) {
                        return None;
                    }
                    let e = series::exp_poly_trunc(&t.q, len);
                    let term = series::mul_trunc(&t.p, &e, len);
                    for (a, b) in acc.iter_mut().zip(term.iter()) {
                        *a = &*a + b;
                    }
                }
                Some(acc)
            }
            Kind::Poly(p) => {
                let mut out = vec![CRat::zero(); len];
                for (i, c) in p.c.iter().enumerate().take(len) {
                    out[i] = c.clone();
                }
                Some(out)
            }
            Kind::Gap(g) => {
                let mut out = vec![CRat::zero(); len];
                for n in g.exponents_below(len as u64) {
                    let nn = num_bigint::BigInt::from(n);
                    let den = num_traits::pow::pow(nn, n as usize);
                    out[n as usize] = CRat::from_real(BigRational::new(1.into(), den));
                }
                Some(out)
            }
            Kind::ZetaTilde | Kind::Xi => None,
            Kind::Stream(sd) => sd
                .exact
                .as_ref()
                .map(|f| (0..len).map(|k| f(k)).collect()),
            Kind::Dilate {
                inner,
                factor_exact,
                ..
            } => {
                let fe = factor_exact.as_ref()?;
                let base = inner.taylor_exact(len)?;
                let mut rk = BigRational::from_integer(1.into());
                Some(
                    base.into_iter()
                        .map(|c| {
                            let out = c.scale(&rk);
                            rk = &rk * fe;
                            out
                        })
                        .collect(),
                )
            }
            Kind::Shift {
                inner,
                offset_exact,
                ..
            } => {
                let oe = offset_exact.as_ref()?;
                let mut base = inner.taylor_exact(len)?;
                if !base.is_empty() {
                    base[0] = &base[0] - oe;
                }
                Some(base)
            }
        }
    }

    /// Certified `log` upper bound for `sum_{l >= l0} |a_l| r^l`
    /// (`None` where the kind has no rigorous coefficient bound).
    pub fn coeff_tail_log(&self, l0: usize, r: f64) -> Option<f64> {
        match &self.kind {
            Kind::Poly(p) => {
                if l0 >= p.cf.len() {
                    return Some(f64::NEG_INFINITY);
                }
                let mut acc = f64::NEG_INFINITY;
                for (i, c) in p.cf.iter().enumerate().skip(l0) {
                    let term = c.norm().ln() + i as f64 * r.ln();
                    acc = crate::num::logsumexp2(acc, term);
                }
                Some(acc)
            }
            Kind::ExpPoly(_) => {
                // Cauchy tail through a certified modulus bound at radius 2r
                let lm = self.log_max_modulus_upper(2.0 * r)?;
                Some(lm - (l0 as f64) * std::f64::consts::LN_2 + std::f64::consts::LN_2)
            }
            Kind::Gap(g) => Some(gap_tail_log(*g, l0, r)),
            Kind::Stream(sd) => Some((sd.tail_log)(l0, r)),
            Kind::ZetaTilde | Kind::Xi => None,
            Kind::Dilate { inner, factor, .. } => inner.coeff_tail_log(l0, r * *factor),
            Kind::Shift { inner, offset, .. } => {
                let base = inner.coeff_tail_log(l0, r)?;
                if l0 == 0 {
                    Some(crate::num::logsumexp2(base, offset.norm().ln()))
                } else {
                    Some(base)
                }
            }
        }
    }

    /// Certified upper bound for `log M(r, f)` (`None` for zeta kinds).
    pub fn log_max_modulus_upper(&self, r: f64) -> Option<f64> {
        match &self.kind {
            Kind::ExpPoly(d) => {
                let mut acc = f64::NEG_INFINITY;
                for t in &d.terms {
                    let lp = abs_poly_log(&t.pf, r);
                    let aq = abs_poly_sum(&t.qf, r);
                    acc = crate::num::logsumexp2(acc, lp + aq);
                }
                Some(acc)
            }
            Kind::Poly(p) => Some(abs_poly_log(&p.cf, r)),
            Kind::Gap(g) => Some(gap_tail_log(*g, 0, r)),
            Kind::Stream(sd) => Some((sd.tail_log)(0, r)),
            Kind::ZetaTilde | Kind::Xi => None,
            Kind::Dilate { inner, factor, .. } => inner.log_max_modulus_upper(r * *factor),
            Kind::Shift { inner, offset, .. } => {
                let base = inner.log_max_modulus_upper(r)?;
                Some(crate::num::logsumexp2(base, offset.norm().ln()))
            }
        }
    }

    /// Canonical descriptor, parseable by the CLI.
    pub fn descriptor(&self) -> String {
        match &self.kind {
            Kind::ExpPoly(d) => {
                if d.terms.len() == 1 {
                    let t = &d.terms[0];
                    if t.p.len() == 1
                        && t.p[0] == CRat::one()
                        && t.q.len() == 2
                        && t.q[0].is_zero()
                        && t.q[1] == CRat::one()
                    {
                        return "exp".to_string();
                    }
                }
                let terms: Vec<String> = d
                    .terms
                    .iter()
                    .map(|t| {
                        format!(
                            "p({});q({})",
                            crat_list_string(&t.p),
                            crat_list_string(&t.q)
                        )
                    })
                    .collect();
                format!("expsum({})", terms.join("|"))
            }
            Kind::Poly(p) => format!("poly({})", crat_list_string(&p.c)),
            Kind::Gap(g) => format!("gap({},{})", g.n1, g.tau),
            Kind::ZetaTilde => "zeta-tilde".to_string(),
            Kind::Xi => "xi".to_string(),
            Kind::Stream(s) => format!("stream({})", s.name),
            Kind::Dilate {
                inner,
                factor,
                factor_exact,
            } => {
                let f = factor_exact
                    .as_ref()
                    .map(rat_string)
                    .unwrap_or_else(|| factor.to_string());
                format!("dilate({},{})", f, inner.descriptor())
            }
            Kind::Shift { inner, offset, offset_exact } => {
                let w = offset_exact
                    .as_ref()
                    .map(crat_string)
                    .unwrap_or_else(|| format!("{}+{}i", offset.re, offset.im));
                format!("shift({},{})", w, inner.descriptor())
            }
        }
    }
}

/// Checked zeta evaluation: rejects the pole at 1 and points outside the
/// validated accuracy envelope.
pub fn zeta_eval(z: Complex64) -> Result<Complex64> {
    if (z - Complex64::new(1.0, 0.0)).norm() < 1e-8 {
        return Err(Error::domain(
            "zeta has a pole at 1; evaluate zeta-tilde there instead",
        ));
    }
    check_zeta_envelope(z)?;
    Ok(zeta::zeta(z))
}

/// Checked evaluation of the symmetric completed function
/// `pi^{-z/2} Gamma(z/2 + 1) (z - 1) zeta(z)`.
pub fn xi_eval(z: Complex64) -> Result<Complex64> {
    check_zeta_envelope(z)?;
    Ok(zeta::xi(z))
}

fn check_zeta_envelope(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("argument must be finite"));
    }
    if z.norm() > ZETA_ENVELOPE {
        return Err(Error::AccuracyEnvelope(format!(
            "|z| = {} exceeds the validated envelope {ZETA_ENVELOPE}",
            z.norm()
        )));
    }
    Ok(())
}

impl fmt::Display for EntireFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}

impl fmt::Debug for EntireFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EntireFunction({})", self.descriptor())
    }
}

fn rat_string(r: &BigRational) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn crat_string(c: &CRat) -> String {
    if c.im.is_zero() {
        rat_string(&c.re)
    } else if c.re.is_zero() {
        format!("{}i", rat_string(&c.im))
    } else {
        format!("{}+{}i", rat_string(&c.re), rat_string(&c.im))
    }
}

fn crat_list_string(cs: &[CRat]) -> String {
    cs.iter().map(crat_string).collect::<Vec<_>>().join(",")
}

/// `log sum_i |c_i| r^i` (upper bound for |p(z)| on |z| = r).
fn abs_poly_log(c: &[Complex64], r: f64) -> f64 {
    let mut acc = f64::NEG_INFINITY;
    for (i, ci) in c.iter().enumerate() {
        let n = ci.norm();
        if n > 0.0 {
            acc = crate::num::logsumexp2(acc, n.ln() + i as f64 * r.ln());
        }
    }
    acc
}

/// `sum_i |c_i| r^i` in plain arithmetic (used for exponent bounds).
fn abs_poly_sum(c: &[Complex64], r: f64) -> f64 {
    let mut acc = 0.0;
    let mut rk = 1.0;
    for ci in c {
        acc += ci.norm() * rk;
        rk *= r;
    }
    acc
}

fn exppoly_differentiate(d: &ExpPolyData) -> ExpPolyData {
    let terms = d
        .terms
        .iter()
        .map(|t| {
            let dp = poly_derive_exact(&t.p);
            let dq = poly_derive_exact(&t.q);
            let p_new = trim_exact(poly_add_exact(&dp, &poly_mul_exact(&t.p, &dq)));
            ExpTerm::new(p_new, t.q.clone())
        })
        .collect();
    ExpPolyData { terms }
}

fn exppoly_eval_scaled(d: &ExpPolyData, z: Complex64) -> (Complex64, Complex64, f64) {
    // per-term log magnitude Re q_j(z) + log |p_j(z)|
    let mut vals: Vec<(Complex64, Complex64, Complex64)> = Vec::with_capacity(d.terms.len());
    let mut s = f64::NEG_INFINITY;
    for t in &d.terms {
        let pv = poly_eval(&t.pf, z);
        let qv = poly_eval(&t.qf, z);
        // derivative factor p' + p q'
        let dpv = {
            // Horner for derivative of p
            let mut f = Complex64::new(0.0, 0.0);
            let mut df = Complex64::new(0.0, 0.0);
            for ck in t.pf.iter().rev() {
                df = df * z + f;
                f = f * z + ck;
            }
            df
        };
        let dqv = {
            let mut f = Complex64::new(0.0, 0.0);
            let mut df = Complex64::new(0.0, 0.0);
            for ck in t.qf.iter().rev() {
                df = df * z + f;
                f = f * z + ck;
            }
            df
        };
        let lm = qv.re + if pv.norm() > 0.0 { pv.norm().ln() } else { f64::NEG_INFINITY };
        if lm > s {
            s = lm;
        }
        vals.push((pv, dpv + pv * dqv, qv));
    }
    if s == f64::NEG_INFINITY {
        // p_j(z) all vanish: derivative may still be nonzero; recompute scale
        // from the derivative factors
        for (_, dw, qv) in &vals {
            let lm = qv.re + if dw.norm() > 0.0 { dw.norm().ln() } else { f64::NEG_INFINITY };
            if lm > s {
                s = lm;
            }
        }
        if s == f64::NEG_INFINITY {
            return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0);
        }
    }
    let mut f = Complex64::new(0.0, 0.0);
    let mut df = Complex64::new(0.0, 0.0);
    for (pv, dw, qv) in vals {
        let phase = (qv - Complex64::new(s, 0.0)).exp();
        f += pv * phase;
        df += dw * phase;
    }
    (f, df, s)
}

impl GapData {
    /// Exponents n_j while they stay below `cap`.
    fn exponents_below(&self, cap: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut n = self.n1 as u128;
        let cap = cap as u128;
        while n < cap {
            out.push(n as u64);
            let mut next: u128 = 1;
            for _ in 0..(self.tau - 1) {
                next = next.saturating_mul(n);
                if next > 1 << 62 {
                    return out;
                }
            }
            if next <= n {
                break;
            }
            n = next;
        }
        out
    }

    /// Exponents that can contribute at radius `r` above ~1e-320 relative.
    fn active_exponents(&self, r: f64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut n = self.n1 as u128;
        loop {
            let nf = n as f64;
            let log_term = nf * (r.max(1e-308).ln() - nf.ln());
            out.push(n as u64);
            // once in the decaying regime and negligible, stop
            if nf > 2.0 * r && log_term < -800.0 {
                break;
            }
            let mut next: u128 = 1;
            for _ in 0..(self.tau - 1) {
                next = next.saturating_mul(n);
                if next > 1 << 62 {
                    return out;
                }
            }
            if next <= n {
                break;
            }
            n = next;
        }
        out
    }
}

fn gap_eval_scaled(g: GapData, z: Complex64) -> (Complex64, Complex64, f64) {
    let r = z.norm();
    if r == 0.0 {
        return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0);
    }
    let exps = g.active_exponents(r);
    // term_j = exp(n (Log z - ln n)); scale by the largest log magnitude
    let logz = z.ln();
    let mut s = f64::NEG_INFINITY;
    let mut logs: Vec<Complex64> = Vec::with_capacity(exps.len());
    for &n in &exps {
        let nf = n as f64;
        let lt = logz * nf - Complex64::new(nf * nf.ln(), 0.0);
        if lt.re > s {
            s = lt.re;
        }
        logs.push(lt);
    }
    let mut f = Complex64::new(0.0, 0.0);
    let mut df = Complex64::new(0.0, 0.0);
    for (&n, lt) in exps.iter().zip(logs.iter()) {
        let t = (lt - Complex64::new(s, 0.0)).exp();
        f += t;
        // d/dz (z/n)^n = (n/z) (z/n)^n
        df += t * (n as f64) / z;
    }
    (f, df, s)
}

fn gap_deriv(g: GapData, z: Complex64, k: usize) -> Complex64 {
    // d^k/dz^k (z/n)^n = n!/(n-k)! z^{n-k} / n^n
    let r = z.norm();
    let exps = g.active_exponents(r.max(1.0));
    let mut acc = Complex64::new(0.0, 0.0);
    for &n in &exps {
        let n_us = n as usize;
        if n_us < k {
            continue;
        }
        let nf = n as f64;
        // log coefficient sum_{i<k} ln(n-i) - n ln n
        let mut lc = -nf * nf.ln();
        for i in 0..k {
            lc += (nf - i as f64).ln();
        }
        let term = if r == 0.0 {
            if n_us == k {
                Complex64::new(lc.exp(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        } else {
            let lt = z.ln() * (nf - k as f64) + Complex64::new(lc, 0.0);
            if lt.re < -745.0 {
                Complex64::new(0.0, 0.0)
            } else {
                lt.exp()
            }
        };
        acc += term;
    }
    acc
}

/// log upper bound of `sum_{n_j >= l0} (r / n_j)^{n_j}`.
fn gap_tail_log(g: GapData, l0: usize, r: f64) -> f64 {
    if r <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let mut acc = f64::NEG_INFINITY;
    let mut n = g.n1 as u128;
    loop {
        let nf = n as f64;
        if n >= l0 as u128 {
            let log_term = nf * (r.ln() - nf.ln());
            if nf >= 2.0 * r && nf >= l0 as f64 {
                // remaining terms bounded by 2 * 2^{-n}
                acc = crate::num::logsumexp2(
                    acc,
                    -nf * std::f64::consts::LN_2 + std::f64::consts::LN_2,
                );
                break;
            }
            acc = crate::num::logsumexp2(acc, log_term);
        }
        let mut next: u128 = 1;
        for _ in 0..(g.tau - 1) {
            next = next.saturating_mul(n);
            if next > 1 << 62 {
                return acc;
            }
        }
        if next <= n {
            break;
        }
        n = next;
    }
    acc
}

fn stream_eval(sd: &StreamData, z: Complex64) -> (Complex64, Complex64, f64) {
    let r = z.norm();
    let mut f = Complex64::new(0.0, 0.0);
    let mut zk = Complex64::new(1.0, 0.0); // z^k
    let budget = sd.max_order.map(|m| m + 1).unwrap_or(100_000);
    for k in 0..budget {
        let a = (sd.coeff)(k);
        f += a * zk;
        zk *= z;
        // stop when the declared tail is negligible against the partial sum
        if k >= 8 && k % 8 == 0 {
            let tail = (sd.tail_log)(k + 1, r);
            if tail < f.norm().max(1e-300).ln() - 40.0 {
                break;
            }
        }
    }
    // derivative: sum k a_k z^{k-1}
    let mut df = Complex64::new(0.0, 0.0);
    let mut zk1 = Complex64::new(1.0, 0.0); // z^{k-1}
    for k in 1..budget {
        let a = (sd.coeff)(k);
        df += a * (k as f64) * zk1;
        zk1 *= z;
        if k >= 8 && k % 8 == 0 {
            let tail = (sd.tail_log)(k + 1, r.max(1e-300)) + (k as f64).ln();
            if tail < df.norm().max(1e-300).ln() - 40.0 {
                break;
            }
        }
    }
    (f, df, 0.0)
}

fn stream_deriv(sd: &StreamData, z: Complex64, k: usize) -> Complex64 {
    let r = z.norm();
    let budget = sd.max_order.map(|m| m + 1).unwrap_or(100_000);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zm = Complex64::new(1.0, 0.0);
    for m in 0..budget.saturating_sub(k) {
        // falling factorial (m+k)! / m!
        let mut fall = 1.0;
        for i in 1..=k {
            fall *= (m + i) as f64;
        }
        acc += (sd.coeff)(m + k) * fall * zm;
        zm *= z;
        if m >= 8 && m % 8 == 0 {
            let tail = (sd.tail_log)(m + k + 1, r.max(1e-300)) + (k as f64) * ((m + k) as f64).ln();
            if tail < acc.norm().max(1e-300).ln() - 40.0 {
                break;
            }
        }
    }
    acc
}

/// Taylor coefficients by discrete Cauchy integrals over a circle of radius
/// `rho` with `samples` points (naive DFT; aliasing decays like the
/// coefficient tail at order `samples`).
pub fn taylor_via_cauchy(
    f: &dyn Fn(Complex64) -> Complex64,
    len: usize,
    rho: f64,
    samples: usize,
) -> Vec<Complex64> {
    let vals: Vec<Complex64> = (0..samples)
        .map(|m| {
            let th = 2.0 * std::f64::consts::PI * m as f64 / samples as f64;
            f(Complex64::from_polar(rho, th))
        })
        .collect();
    (0..len)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, v) in vals.iter().enumerate() {
                let th = -2.0 * std::f64::consts::PI * (k * m % samples) as f64 / samples as f64;
                acc += v * Complex64::from_polar(1.0, th);
            }
            acc / samples as f64 / rho.powi(k as i32)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, ToPrimitive};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exp_eval_basics() {
        let f = EntireFunction::exp();
        assert!((f.eval(c(1.0, 0.0)) - c(std::f64::consts::E, 0.0)).norm() < 1e-15);
        assert!((f.eval(c(0.0, std::f64::consts::PI)) - c(-1.0, 0.0)).norm() < 1e-14);
        // derivative equals the function
        assert!((f.deriv(c(0.7, -0.3)) - f.eval(c(0.7, -0.3))).norm() < 1e-14);
    }

    #[test]
    fn exp_scaled_far_beyond_overflow() {
        let f = EntireFunction::exp();
        // |z| = 5000: e^z overflows f64 but the scaled path must not
        let z = c(5000.0, 1.0);
        let (v, w, s) = f.eval_with_deriv_scaled(z);
        assert!((s - 5000.0).abs() < 1e-9);
        assert!((v.norm() - 1.0).abs() < 1e-12);
        assert!((w.norm() - 1.0).abs() < 1e-12);
        assert!((f.log_abs(z) - 5000.0).abs() < 1e-9);
        // spherical derivative = 1/(2 cosh x) ~ e^{-5000}, underflows to 0
        assert_eq!(f.spherical(z), 0.0);
        // at moderate points it matches the closed form
        let rho = f.spherical(c(1.0, 0.0));
        let expect = 0.324027136831942699787488676613;
        assert!((rho - expect).abs() < 1e-14);
    }

    #[test]
    fn exp_taylor_exact() {
        let f = EntireFunction::exp();
        let t = f.taylor_exact(10).unwrap();
        assert!(t[0].re.is_one());
        let six = BigRational::new(1.into(), 6.into());
        assert_eq!(t[3].re, six);
    }

    #[test]
    fn polynomial_eval_and_deriv() {
        // z^2 - 2z + 3
        let f = EntireFunction::polynomial(vec![
            CRat::from_int(3),
            CRat::from_int(-2),
            CRat::from_int(1),
        ]);
        let z = c(1.5, -0.5);
        let expect = z * z - 2.0 * z + 3.0;
        assert!((f.eval(z) - expect).norm() < 1e-14);
        assert!((f.deriv(z) - (2.0 * z - 2.0)).norm() < 1e-14);
        assert!((f.eval_deriv(z, 2) - c(2.0, 0.0)).norm() < 1e-14);
        assert_eq!(f.polynomial_degree(), Some(2));
    }

    #[test]
    fn gap_series_value_frozen() {
        // n1 = 2, tau = 3 at z = 2: exactly 1 + 1/16 + 2^-48 + O(2^-1792)
        let f = EntireFunction::gap_series(2, 3).unwrap();
        let v = f.eval(c(2.0, 0.0));
        let expect = 1.0625000000000036; // frozen from exact rational sum
        assert!((v.re - expect).abs() < 1e-15, "got {}", v.re);
        assert!(v.im.abs() < 1e-18);
    }

    #[test]
    fn gap_series_exact_taylor() {
        let f = EntireFunction::gap_series(2, 3).unwrap();
        let t = f.taylor_exact(20).unwrap();
        // nonzero exactly at 2, 4, 16
        for (k, tk) in t.iter().enumerate() {
            match k {
                2 => assert_eq!(tk.re, BigRational::new(1.into(), 4.into())),
                4 => assert_eq!(tk.re, BigRational::new(1.into(), 256.into())),
                16 => assert_eq!(
                    tk.re,
                    BigRational::new(1.into(), num_bigint::BigInt::from(16u64).pow(16))
                ),
                _ => assert!(tk.is_zero(), "order {k} should vanish"),
            }
        }
    }

    #[test]
    fn gap_derivative_matches_finite_difference() {
        let f = EntireFunction::gap_series(2, 3).unwrap();
        let z = c(1.2, 0.7);
        let h = 1e-6;
        let fd = (f.eval(z + c(h, 0.0)) - f.eval(z - c(h, 0.0))) / (2.0 * h);
        assert!((f.deriv(z) - fd).norm() < 1e-8);
    }

    #[test]
    fn dilation_composes_multiplicatively() {
        let f = EntireFunction::exp()
            .dilate(2.0, Some(BigRational::from_integer(2.into())))
            .unwrap()
            .dilate(1.5, Some(BigRational::new(3.into(), 2.into())))
            .unwrap();
        assert_eq!(f.descriptor(), "dilate(3,exp)");
        let z = c(0.4, 0.1);
        assert!((f.eval(z) - (3.0 * z).exp()).norm() < 1e-14);
        // taylor: a_k = 3^k / k!
        let t = f.taylor_exact(5).unwrap();
        assert_eq!(t[2].re, BigRational::new(9.into(), 2.into()));
    }

    #[test]
    fn shift_subtracts_value() {
        let f = EntireFunction::exp().shift(c(1.0, 0.0), Some(CRat::one()));
        assert!(f.eval(c(0.0, 0.0)).norm() < 1e-15);
        let t = f.taylor_exact(3).unwrap();
        assert!(t[0].is_zero());
        assert!(t[1].re.is_one());
        // shift must not disturb huge-scale evaluation
        let (v, _, s) = f.eval_with_deriv_scaled(c(1000.0, 0.0));
        assert!((s - 1000.0).abs() < 1e-9);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exppoly_two_terms_cosh() {
        // cosh z = (e^z + e^{-z}) / 2
        let half = CRat::from_ratio(1, 2);
        let f = EntireFunction::exp_poly(vec![
            (vec![half.clone()], vec![CRat::zero(), CRat::one()]),
            (vec![half], vec![CRat::zero(), CRat::from_int(-1)]),
        ])
        .unwrap();
        let z = c(0.3, 1.1);
        assert!((f.eval(z) - z.cosh()).norm() < 1e-14);
        // taylor of cosh: 1, 0, 1/2, 0, 1/24
        let t = f.taylor_exact(5).unwrap();
        assert!(t[1].is_zero());
        assert_eq!(t[4].re, BigRational::new(1.into(), 24.into()));
    }

    #[test]
    fn max_modulus_upper_is_a_bound() {
        let f = EntireFunction::exp();
        // M(r, e^z) = e^r: bound must be >= r and not absurdly larger
        let b = f.log_max_modulus_upper(10.0).unwrap();
        assert!(b >= 10.0);
        assert!(b < 10.0 + 1e-9);
        let g = EntireFunction::polynomial(vec![CRat::from_int(1), CRat::from_int(-2)]);
        let bg = g.log_max_modulus_upper(3.0).unwrap();
        assert!(bg >= (1.0f64 + 6.0).ln() - 1e-12);
    }

    #[test]
    fn taylor_via_cauchy_matches_exp() {
        let f = EntireFunction::exp();
        let coeffs = taylor_via_cauchy(&|z| f.eval(z), 12, 1.0, 256);
        for (k, got) in coeffs.iter().enumerate() {
            let expect = 1.0 / (crate::num::rat::factorial(k).to_f64().unwrap());
            assert!((got.re - expect).abs() < 1e-12, "order {k}");
            assert!(got.im.abs() < 1e-12);
        }
    }

    #[test]
    fn envelope_of_zeta_kinds() {
        assert_eq!(EntireFunction::zeta_tilde().envelope_radius(), Some(60.0));
        let dil = EntireFunction::zeta_tilde().dilate(2.0, None).unwrap();
        assert_eq!(dil.envelope_radius(), Some(30.0));
        assert_eq!(EntireFunction::exp().envelope_radius(), None);
    }

    #[test]
    fn zeta_eval_guards() {
        assert!(matches!(
            zeta_eval(Complex64::new(1.0 + 1e-12, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            zeta_eval(Complex64::new(61.0, 0.0)),
            Err(Error::AccuracyEnvelope(_))
        ));
        let v = zeta_eval(Complex64::new(2.0, 0.0)).unwrap();
        assert!((v.re - 1.6449340668482264).abs() < 1e-13);
        let x = xi_eval(Complex64::new(0.5, 0.0)).unwrap();
        assert!((x.re - 0.49712077818831411).abs() < 1e-12);
        assert!(matches!(
            xi_eval(Complex64::new(0.0, 61.0)),
            Err(Error::AccuracyEnvelope(_))
        ));
    }
}
