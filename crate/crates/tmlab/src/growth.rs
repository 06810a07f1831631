//! Growth characteristics on circles and disks: maximum modulus, the
//! Nevanlinna and Ahlfors-Shimizu characteristics, spherical area and
//! length, admissible radii, and proximate-order fitting.
//!
//! `T0` is always computed twice, by a radial integral of `S(t)/t` and by
//! the proximity identity `T0 = m0 - log sqrt(1 + |f(0)|^2)`; disagreement
//! beyond combined error bounds is a hard error, not a warning. All circle
//! and area integrals run through adaptive Gauss-Kronrod quadrature on
//! overflow-safe scaled evaluation, so radii in the tens of thousands are
//! fine for exponential-type functions.

use crate::entire::EntireFunction;
use crate::error::{Error, Result};
use crate::num::dec::{Dec, Meas};
use crate::num::{log_plus_from_log, log_sqrt1p_sq_from_log, quad};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::f64::consts::{LN_2, PI, TAU};

/// Default absolute/relative tolerance for circle integrals.
const CIRCLE_TOL: f64 = 1e-10;
/// Segment budget for a single adaptive pass.
const MAX_SEG: usize = 6000;
/// Radial floor factor for the T0 radial integral: below `r * 2^-20` the
/// integrand is modeled by the quadratic-vanishing ramp and the modeled
/// mass is charged to the error bound.
const T0_FLOOR: f64 = 9.5367431640625e-7; // 2^-20
/// Cross-check slack floor; quadrature error bounds do not see the
/// systematic part of nested-integral truncation, this does.
const CROSSCHECK_FLOOR: f64 = 1e-7;

fn check_radius(f: &EntireFunction, r: f64) -> Result<()> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    if let Some(env) = f.envelope_radius() {
        if r > env {
            return Err(Error::AccuracyEnvelope(format!(
                "radius {r} exceeds the validated envelope {env} for {f}"
            )));
        }
    }
    Ok(())
}

/// Maximum modulus on `|z| = r` as `(log M(r), witness angle)`.
///
/// Dense grid of 1024 angles (always containing 0) plus golden-section
/// polish around the two best grid peaks. The value is exact to evaluation
/// accuracy whenever the maximum sits on the grid, as it does for any
/// function with nonnegative real coefficients.
pub fn max_modulus(f: &EntireFunction, r: f64) -> Result<(f64, f64)> {
    check_radius(f, r)?;
    const GRID: usize = 1024;
    let la = |th: f64| f.log_abs(Complex64::from_polar(r, th));
    let mut best: Vec<(usize, f64)> = Vec::with_capacity(GRID);
    for j in 0..GRID {
        best.push((j, la(TAU * j as f64 / GRID as f64)));
    }
    // two strongest separated peaks, each polished in its grid bracket
    best.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    let mut cand: Vec<(f64, f64)> = Vec::new();
    for &(j, v) in best.iter().take(8) {
        if v == f64::NEG_INFINITY {
            continue;
        }
        let th = TAU * j as f64 / GRID as f64;
        if cand.iter().any(|&(t, _)| {
            let d = (t - th).abs();
            d.min(TAU - d) < 1.5 * TAU / GRID as f64
        }) {
            continue;
        }
        let lo = th - TAU / GRID as f64;
        let hi = th + TAU / GRID as f64;
        cand.push(crate::num::golden_max(la, lo, hi, 80));
        if cand.len() == 2 {
            break;
        }
    }
    let (theta, log_max) = cand
        .into_iter()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or((0.0, f64::NEG_INFINITY));
    Ok((log_max, theta.rem_euclid(TAU)))
}

/// `m(r) = log^+ M(r)`.
pub fn growth_m(f: &EntireFunction, r: f64) -> Result<f64> {
    let (log_max, _) = max_modulus(f, r)?;
    Ok(log_plus_from_log(log_max))
}

/// Nevanlinna characteristic `T(r) = (2pi)^-1 \int log^+ |f(r e^{i t})| dt`.
pub fn nevanlinna_t(f: &EntireFunction, r: f64) -> Result<Meas> {
    check_radius(f, r)?;
    let q = quad::adaptive(
        |th| log_plus_from_log(f.log_abs(Complex64::from_polar(r, th))),
        0.0,
        TAU,
        CIRCLE_TOL,
        CIRCLE_TOL,
        MAX_SEG,
    )?;
    Ok(Meas::new(q.value / TAU, q.err / TAU + 1e-13 * (1.0 + q.value.abs())))
}

/// Proximity function `m0(r) = (2pi)^-1 \int log sqrt(1 + |f|^2) dt`.
pub fn proximity_m0(f: &EntireFunction, r: f64) -> Result<Meas> {
    check_radius(f, r)?;
    let q = quad::adaptive(
        |th| log_sqrt1p_sq_from_log(f.log_abs(Complex64::from_polar(r, th))),
        0.0,
        TAU,
        CIRCLE_TOL,
        CIRCLE_TOL,
        MAX_SEG,
    )?;
    Ok(Meas::new(q.value / TAU, q.err / TAU + 1e-13 * (1.0 + q.value.abs())))
}

/// Spherical length of the image of `|z| = r`: `L(r) = 2 r \int rho_f dt`.
pub fn length_l(f: &EntireFunction, r: f64) -> Result<Meas> {
    check_radius(f, r)?;
    let q = quad::adaptive(
        |th| f.spherical(Complex64::from_polar(r, th)),
        0.0,
        TAU,
        CIRCLE_TOL,
        CIRCLE_TOL,
        MAX_SEG,
    )?;
    Ok(Meas::new(2.0 * r * q.value, 2.0 * r * q.err + 1e-13 * (1.0 + r)))
}

/// `\int rho_f(s e^{i t})^2 dt` over the full circle.
fn ring_rho2(f: &EntireFunction, s: f64, tol_abs: f64) -> Result<quad::QuadResult<f64>> {
    quad::adaptive(
        |th| {
            let v = f.spherical(Complex64::from_polar(s, th));
            v * v
        },
        0.0,
        TAU,
        tol_abs,
        1e-10,
        MAX_SEG,
    )
}

/// Runs `outer` with a closure that evaluates `inner` per node, smuggling
/// inner errors out of the non-Result quadrature callback.
fn nested<F>(outer: F) -> Result<quad::QuadResult<f64>>
where
    F: FnOnce(&RefCell<Option<Error>>) -> Result<quad::QuadResult<f64>>,
{
    let captured: RefCell<Option<Error>> = RefCell::new(None);
    let out = outer(&captured);
    if let Some(e) = captured.into_inner() {
        return Err(e);
    }
    out
}

/// Ahlfors covering area `S(r) = pi^-1 \int_{|z|<=r} rho_f^2 d(area)`,
/// in polar form with an adaptive ring integral per radial node.
pub fn ahlfors_s(f: &EntireFunction, r: f64) -> Result<Meas> {
    check_radius(f, r)?;
    let inner_tol = (1e-11 / (1.0 + r * r)).max(1e-15);
    let q = nested(|captured| {
        quad::adaptive(
            |s| {
                if s <= 0.0 || captured.borrow().is_some() {
                    return 0.0;
                }
                match ring_rho2(f, s, inner_tol) {
                    Ok(g) => s * g.value,
                    Err(e) => {
                        *captured.borrow_mut() = Some(e);
                        0.0
                    }
                }
            },
            0.0,
            r,
            1e-10 * (1.0 + r),
            1e-10,
            MAX_SEG,
        )
    })?;
    let value = q.value / PI;
    let err = q.err / PI + 1e-10 * (1.0 + value.abs());
    Ok(Meas::new(value, err))
}

/// Both routes to the Ahlfors-Shimizu characteristic at one radius.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualT0 {
    /// radial integral of S(t)/t
    pub radial: Meas,
    /// m0(r) - log sqrt(1 + |f(0)|^2)
    pub identity: Meas,
}

impl DualT0 {
    pub fn agree(&self) -> bool {
        let bound = (self.radial.err() + self.identity.err()).max(CROSSCHECK_FLOOR);
        (self.radial.value() - self.identity.value()).abs() <= bound
    }

    /// The reported value (radial route).
    pub fn value(&self) -> f64 {
        self.radial.value()
    }
}

/// `T0(r) = \int_0^r S(t)/t dt`, radial route.
///
/// The iterated integral is evaluated after one exact order swap:
/// `\int_{t0}^r S(t)/t dt = S(t0) log(r/t0)
///   + pi^-1 \int_{t0}^r s g(s) log(r/s) ds` with `g(s)` the ring integral
/// of `rho_f^2`. The swap removes one nesting level; the piece below the
/// floor `t0` is modeled by the quadratic ramp and charged to the error.
pub fn ahlfors_t0_radial(f: &EntireFunction, r: f64) -> Result<Meas> {
    check_radius(f, r)?;
    let t0 = r * T0_FLOOR;
    let s_floor = ahlfors_s(f, t0)?;
    let inner_tol = (1e-11 / (1.0 + r * r)).max(1e-15);
    let q = nested(|captured| {
        quad::adaptive(
            |s| {
                if s <= 0.0 || captured.borrow().is_some() {
                    return 0.0;
                }
                match ring_rho2(f, s, inner_tol) {
                    Ok(g) => s * g.value * (r / s).ln(),
                    Err(e) => {
                        *captured.borrow_mut() = Some(e);
                        0.0
                    }
                }
            },
            t0,
            r,
            1e-10 * (1.0 + r),
            1e-10,
            MAX_SEG,
        )
    })?;
    // below-floor mass: true \int_0^{t0} S/t lies in [0, S(t0)] for S
    // vanishing quadratically; model S(t0)/2, charge S(t0)/2 to the error
    let value = q.value / PI + s_floor.value() * (r / t0).ln() + 0.5 * s_floor.value();
    let err = q.err / PI
        + s_floor.err() * ((r / t0).ln() + 0.5)
        + 0.5 * s_floor.value()
        + 1e-10 * (1.0 + value.abs());
    Ok(Meas::new(value, err))
}

/// Dual-route `T0(r)`; errors out when the routes disagree beyond their
/// combined error bounds. This is the module's primary self-check.
pub fn ahlfors_t0(f: &EntireFunction, r: f64) -> Result<DualT0> {
    let radial = ahlfors_t0_radial(f, r)?;
    let m0 = proximity_m0(f, r)?;
    let f0 = f.at_zero();
    let lf0 = if f0.norm() == 0.0 {
        f64::NEG_INFINITY
    } else {
        f0.norm().ln()
    };
    let identity = Meas::new(m0.value() - log_sqrt1p_sq_from_log(lf0), m0.err());
    let dual = DualT0 { radial, identity };
    if !dual.agree() {
        return Err(Error::CrossCheck(format!(
            "T0 routes disagree at r = {r}: radial {} +- {}, identity {} +- {}",
            dual.radial.value(),
            dual.radial.err(),
            dual.identity.value(),
            dual.identity.err()
        )));
    }
    Ok(dual)
}

/// One radius of a growth profile. `log_max_modulus` stores `log M(r)`
/// since `M` itself overflows f64 for exponential-type functions well
/// inside the radii of interest.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub r: Dec,
    pub log_max_modulus: Meas,
    pub growth_m: Meas,
    pub nevanlinna_t: Meas,
    pub proximity_m0: Meas,
    pub t0_radial: Meas,
    pub t0_identity: Meas,
    pub ahlfors_s: Meas,
    pub length_l: Meas,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub descriptor: String,
    /// log^+ |f(0)|
    pub log_plus_f0: Dec,
    /// log sqrt(1 + |f(0)|^2)
    pub log_sqrt_f0: Dec,
    pub points: Vec<GrowthPoint>,
}

/// Grid stride: 8 points per octave, so doubling pairs are exactly 8 apart.
const OCTAVE_STEPS: usize = 8;

/// Computes the full profile on the geometric grid
/// `r_i = rmin * 2^{i/8}` up to and including the first point `>= rmax`.
/// Radii are independent and run in parallel.
pub fn growth_profile(f: &EntireFunction, rmin: f64, rmax: f64) -> Result<GrowthProfile> {
    if !(rmin.is_finite() && rmin > 0.0 && rmax > rmin) {
        return Err(Error::domain(format!(
            "need 0 < rmin < rmax, got [{rmin}, {rmax}]"
        )));
    }
    check_radius(f, rmax)?;
    let steps = (OCTAVE_STEPS as f64 * (rmax / rmin).log2()).ceil() as usize;
    if steps > 4096 {
        return Err(Error::domain(format!(
            "profile grid would need {steps} points; narrow the range"
        )));
    }
    let radii: Vec<f64> = (0..=steps)
        .map(|i| rmin * 2f64.powf(i as f64 / OCTAVE_STEPS as f64))
        .collect();
    let f0 = f.at_zero();
    let lf0 = if f0.norm() == 0.0 {
        f64::NEG_INFINITY
    } else {
        f0.norm().ln()
    };
    let points: Result<Vec<GrowthPoint>> = radii
        .par_iter()
        .map(|&r| {
            let (log_max, _) = max_modulus(f, r)?;
            let t = nevanlinna_t(f, r)?;
            let m0 = proximity_m0(f, r)?;
            let dual = ahlfors_t0(f, r)?;
            let s = ahlfors_s(f, r)?;
            let l = length_l(f, r)?;
            Ok(GrowthPoint {
                r: Dec(r),
                log_max_modulus: Meas::exactish(log_max),
                growth_m: Meas::exactish(log_plus_from_log(log_max)),
                nevanlinna_t: t,
                proximity_m0: m0,
                t0_radial: dual.radial,
                t0_identity: dual.identity,
                ahlfors_s: s,
                length_l: l,
            })
        })
        .collect();
    Ok(GrowthProfile {
        descriptor: f.descriptor(),
        log_plus_f0: Dec(log_plus_from_log(lf0)),
        log_sqrt_f0: Dec(log_sqrt1p_sq_from_log(lf0)),
        points: points?,
    })
}

/// One inequality instance inside an identity report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub r: Dec,
    pub lhs: Dec,
    pub rhs: Dec,
    /// rhs - lhs after folding in the error bounds; negative means violated
    pub margin: Dec,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub k: Dec,
    pub checks: Vec<IdentityCheck>,
    pub violations: usize,
    pub pairs_checked: usize,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.violations == 0
    }
}

fn find_pair(radii: &[f64], target: f64) -> Option<usize> {
    let j = radii.partition_point(|&r| r < target);
    for cand in [j.wrapping_sub(1), j, j + 1] {
        if let Some(&r) = radii.get(cand) {
            if (r - target).abs() <= 1e-9 * target {
                return Some(cand);
            }
        }
    }
    None
}

/// Checks the four growth inequalities on a computed profile:
/// T(r) <= m(r), m(r) <= (k+1)/(k-1) T(kr), the T-T0 band of width
/// (log 2)/2, S(r) log k <= T0(kr), and L^2 <= 8 pi^2 r S' with S' by
/// central differences and 1% slack. Failures are data, not errors.
pub fn verify_growth_identities(profile: &GrowthProfile, k: f64) -> IdentityReport {
    let radii: Vec<f64> = profile.points.iter().map(|p| p.r.0).collect();
    let mut checks = Vec::new();
    let mut pairs = 0usize;
    let ratio = (k + 1.0) / (k - 1.0);
    for (i, p) in profile.points.iter().enumerate() {
        let r = p.r.0;
        // T <= m
        {
            let lhs = p.nevanlinna_t.value();
            let rhs = p.growth_m.value();
            let margin = rhs - lhs + p.nevanlinna_t.err() + p.growth_m.err();
            checks.push(IdentityCheck {
                identity: "t-le-m".into(),
                r: Dec(r),
                lhs: Dec(lhs),
                rhs: Dec(rhs),
                margin: Dec(margin),
                pass: margin >= 0.0,
            });
        }
        // T - T0 band
        {
            let lhs = (p.nevanlinna_t.value() - p.t0_radial.value() - profile.log_plus_f0.0).abs();
            let rhs = 0.5 * LN_2;
            let margin = rhs - lhs + p.nevanlinna_t.err() + p.t0_radial.err();
            checks.push(IdentityCheck {
                identity: "tt0-band".into(),
                r: Dec(r),
                lhs: Dec(lhs),
                rhs: Dec(rhs),
                margin: Dec(margin),
                pass: margin >= 0.0,
            });
        }
        if let Some(j) = find_pair(&radii, k * r) {
            pairs += 1;
            let pk = &profile.points[j];
            // m(r) <= (k+1)/(k-1) T(kr)
            {
                let lhs = p.growth_m.value();
                let rhs = ratio * pk.nevanlinna_t.value();
                let margin = rhs - lhs + ratio * pk.nevanlinna_t.err() + p.growth_m.err();
                checks.push(IdentityCheck {
                    identity: "m-le-tm".into(),
                    r: Dec(r),
                    lhs: Dec(lhs),
                    rhs: Dec(rhs),
                    margin: Dec(margin),
                    pass: margin >= 0.0,
                });
            }
            // S(r) log k <= T0(kr)
            {
                let lhs = p.ahlfors_s.value() * k.ln();
                let rhs = pk.t0_radial.value();
                let margin =
                    rhs - lhs + pk.t0_radial.err() + p.ahlfors_s.err() * k.ln();
                checks.push(IdentityCheck {
                    identity: "st0".into(),
                    r: Dec(r),
                    lhs: Dec(lhs),
                    rhs: Dec(rhs),
                    margin: Dec(margin),
                    pass: margin >= 0.0,
                });
            }
        }
        // L^2 <= 8 pi^2 r S', S' by central differences, 1% slack
        if i > 0 && i + 1 < profile.points.len() {
            let rm = profile.points[i - 1].r.0;
            let rp = profile.points[i + 1].r.0;
            let sp = (profile.points[i + 1].ahlfors_s.value()
                - profile.points[i - 1].ahlfors_s.value())
                / (rp - rm);
            let lhs = p.length_l.value() * p.length_l.value();
            let rhs = 8.0 * PI * PI * r * sp * 1.01;
            let err = 2.0 * p.length_l.value().abs() * p.length_l.err()
                + 8.0
                    * PI
                    * PI
                    * r
                    * (profile.points[i + 1].ahlfors_s.err()
                        + profile.points[i - 1].ahlfors_s.err())
                    / (rp - rm);
            let margin = rhs - lhs + err;
            checks.push(IdentityCheck {
                identity: "ls".into(),
                r: Dec(r),
                lhs: Dec(lhs),
                rhs: Dec(rhs),
                margin: Dec(margin),
                pass: margin >= 0.0,
            });
        }
    }
    let violations = checks.iter().filter(|c| !c.pass).count();
    IdentityReport {
        k: Dec(k),
        checks,
        violations,
        pairs_checked: pairs,
    }
}

/// Finds `r' in (r, kr)` with `L(r') <= eps S(r')` by deterministic grid
/// scan at increasing resolutions. Requires the area precondition
/// `S(r) >= 8 pi^2 / (eps^2 log k)` that guarantees existence.
pub fn find_admissible_radius(f: &EntireFunction, r: f64, k: f64, eps: f64) -> Result<f64> {
    check_radius(f, r)?;
    if !(k > 1.0) {
        return Err(Error::domain(format!("need k > 1, got {k}")));
    }
    if !(eps > 0.0) {
        return Err(Error::domain(format!("need eps > 0, got {eps}")));
    }
    let s_r = ahlfors_s(f, r)?;
    let need = 8.0 * PI * PI / (eps * eps * k.ln());
    if s_r.value() + s_r.err() < need {
        return Err(Error::domain(format!(
            "precondition S(r) >= 8 pi^2/(eps^2 log k) fails: S({r}) = {} < {need}",
            s_r.value()
        )));
    }
    for &grid in &[16usize, 64, 256] {
        for i in 1..=grid {
            let t = r * k.powf(i as f64 / (grid + 1) as f64);
            let l = length_l(f, t)?;
            let s = ahlfors_s(f, t)?;
            if l.value() + l.err() <= eps * (s.value() - s.err()) {
                return Ok(t);
            }
        }
    }
    Err(Error::ScanFailure(format!(
        "no admissible radius on (r, kr) at the finest grid (256 points), r = {r}, k = {k}, eps = {eps}"
    )))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrderSample {
    pub r: Dec,
    pub m: Dec,
    pub rho_r: Dec,
    pub psi: Dec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RnSolution {
    pub n: u64,
    pub r_n: Dec,
}

/// Fitted order and proximate order of a function from `m(r)` samples.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrderEstimate {
    pub rho: Dec,
    pub samples: Vec<OrderSample>,
    /// measured slow-variation defect: max |psi(kr)/psi(r) - 1| over
    /// sampled pairs with k in (1, 2]
    pub slow_variation_epsilon: Dec,
    pub rn: Vec<RnSolution>,
}

/// Least-squares slope of `log m` against `log r` over the top decade of
/// the sampled range, plus a proximate-order envelope fit. Errors when the
/// slope has not stabilized over the window.
pub fn order_estimate(f: &EntireFunction, rmax: f64) -> Result<OrderEstimate> {
    if !(rmax.is_finite()) || rmax < 20.0 {
        return Err(Error::domain(format!(
            "order estimate needs rmax >= 20, got {rmax}"
        )));
    }
    check_radius(f, rmax)?;
    let rmin = (rmax / 10.0).max(2.0);
    let n = 33usize;
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let r = rmin * (rmax / rmin).powf(i as f64 / (n - 1) as f64);
        let m = growth_m(f, r)?;
        if m > 0.0 {
            samples.push((r, m));
        }
    }
    if samples.len() < 8 {
        return Err(Error::InsufficientRange(
            "growth too small over the window: fewer than 8 positive m(r) samples".into(),
        ));
    }
    let est = proximate_fit(&samples)?;
    // stabilization: slope over the upper half window must agree
    let upper: Vec<(f64, f64)> = samples[samples.len() / 2..].to_vec();
    let rho_upper = ls_slope(&upper);
    if (rho_upper - est.rho.0).abs() > 0.05 * est.rho.0.max(1.0) {
        return Err(Error::InsufficientRange(format!(
            "order not stabilized: slope {} over the full window vs {} over the top half",
            est.rho.0, rho_upper
        )));
    }
    Ok(est)
}

fn ls_slope(samples: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(r, m)| (r.ln(), m.ln()))
        .collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Envelope fit from `(r, m(r))` samples: order by least squares, then the
/// slow-variation factor as the running maximum of `m(r) r^{-rho}`, so the
/// envelope `r^{rho(r)} = r^rho psi(r)` dominates every sample and touches
/// the record-setting ones.
pub fn proximate_fit(samples: &[(f64, f64)]) -> Result<OrderEstimate> {
    if samples.len() < 3 {
        return Err(Error::InsufficientRange(
            "proximate fit needs at least 3 samples".into(),
        ));
    }
    for w in samples.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::domain("samples must have strictly increasing radii"));
        }
    }
    if samples.iter().any(|&(r, m)| r <= 1.0 || m <= 0.0) {
        return Err(Error::domain(
            "proximate fit needs r > 1 and m(r) > 0 on every sample",
        ));
    }
    let rho = ls_slope(samples);
    if !(rho.is_finite() && rho >= 0.0) {
        return Err(Error::InsufficientRange(format!(
            "order slope came out {rho}; growth data unusable"
        )));
    }
    let mut out = Vec::with_capacity(samples.len());
    let mut psi_hat = f64::NEG_INFINITY;
    for &(r, m) in samples {
        // log psi candidate = log m - rho log r
        let w = m.ln() - rho * r.ln();
        psi_hat = psi_hat.max(w);
        let rho_r = rho + psi_hat / r.ln();
        out.push(OrderSample {
            r: Dec(r),
            m: Dec(m),
            rho_r: Dec(rho_r),
            psi: Dec(psi_hat.exp()),
        });
    }
    // slow-variation defect over pairs within a factor of 2
    let mut epsilon: f64 = 0.0;
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let ratio = out[j].r.0 / out[i].r.0;
            if ratio > 2.0 {
                break;
            }
            epsilon = epsilon.max((out[j].psi.0 / out[i].psi.0 - 1.0).abs());
        }
    }
    Ok(OrderEstimate {
        rho: Dec(rho),
        samples: out,
        slow_variation_epsilon: Dec(epsilon),
        rn: Vec::new(),
    })
}

/// Solves `r^{rho(r)} = n` by bisection on `rho(r) log r`, with `rho(r)`
/// piecewise linear in `log r` through the fitted samples (clamped
/// constant outside the sampled range).
pub fn solve_rn(est: &OrderEstimate, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    if est.samples.is_empty() || est.rho.0 <= 0.0 {
        return Err(Error::InsufficientRange(
            "order estimate has no usable samples or zero order".into(),
        ));
    }
    let xs: Vec<f64> = est.samples.iter().map(|s| s.r.0.ln()).collect();
    let ys: Vec<f64> = est.samples.iter().map(|s| s.rho_r.0).collect();
    let phi = |lr: f64| -> f64 {
        if lr <= xs[0] {
            return ys[0];
        }
        if lr >= *xs.last().unwrap() {
            return *ys.last().unwrap();
        }
        let j = xs.partition_point(|&x| x < lr).max(1);
        let t = (lr - xs[j - 1]) / (xs[j] - xs[j - 1]);
        ys[j - 1] + t * (ys[j] - ys[j - 1])
    };
    let g = |lr: f64| phi(lr) * lr;
    let target = (n as f64).ln();
    let mut lo = 1e-12;
    let mut hi = (target / est.rho.0 + 1.0).max(xs[xs.len() - 1] + 1.0);
    let mut tries = 0;
    while g(hi) < target {
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::InsufficientRange(format!(
                "could not bracket r_n for n = {n}"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat::CRat;

    fn exp_fn() -> EntireFunction {
        EntireFunction::exp()
    }

    fn poly_z() -> EntireFunction {
        EntireFunction::polynomial(vec![CRat::zero(), CRat::one()])
    }

    fn poly_z2() -> EntireFunction {
        EntireFunction::polynomial(vec![CRat::zero(), CRat::zero(), CRat::one()])
    }

    #[test]
    fn max_modulus_exp_and_cube() {
        let (lm, th) = max_modulus(&exp_fn(), 2.0).unwrap();
        assert!((lm - 2.0).abs() < 1e-12);
        assert!(th.min(TAU - th) < 1e-6);
        let cube = EntireFunction::monomial(3);
        let (lm3, _) = max_modulus(&cube, 2.0).unwrap();
        assert!((lm3 - 8f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn growth_m_clamps_small_functions() {
        let half = EntireFunction::polynomial(vec![CRat::from_ratio(1, 2)]);
        assert_eq!(growth_m(&half, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn nevanlinna_exp_closed_form() {
        // T(r, e^z) = r/pi
        let t = nevanlinna_t(&exp_fn(), 5.0).unwrap();
        assert!((t.value() - 5.0 / PI).abs() < 1e-9, "got {}", t.value());
        let t1 = nevanlinna_t(&exp_fn(), 1.0).unwrap();
        assert!((t1.value() - 1.0 / PI).abs() < 1e-10);
    }

    #[test]
    fn nevanlinna_constant_modulus() {
        // log^+|4 e^{2 i t}| is constant: T(2, z^2) = 2 log 2
        let t = nevanlinna_t(&poly_z2(), 2.0).unwrap();
        assert!((t.value() - 2.0 * LN_2).abs() < 1e-10);
    }

    #[test]
    fn proximity_m0_frozen() {
        let m01 = proximity_m0(&exp_fn(), 1.0).unwrap();
        assert!((m01.value() - 0.45870449032592457).abs() < 1e-9);
        let m05 = proximity_m0(&exp_fn(), 5.0).unwrap();
        assert!((m05.value() - 1.6180706215724761).abs() < 1e-9);
    }

    #[test]
    fn ahlfors_s_exact_for_z() {
        // S(r, z) = r^2/(1+r^2)
        let s1 = ahlfors_s(&poly_z(), 1.0).unwrap();
        assert!((s1.value() - 0.5).abs() < 1e-8, "got {}", s1.value());
        let s100 = ahlfors_s(&poly_z(), 100.0).unwrap();
        assert!(s100.value() > 0.99 && s100.value() <= 1.0 + 1e-9);
    }

    #[test]
    fn ahlfors_s_exp_frozen() {
        let s = ahlfors_s(&exp_fn(), 2.0).unwrap();
        assert!((s.value() - 0.55897091867008732).abs() < 1e-7, "got {}", s.value());
    }

    #[test]
    fn dual_t0_exp() {
        for (r, want) in [(1.0, 0.11213090004595192), (5.0, 1.2714970312925035)] {
            let dual = ahlfors_t0(&exp_fn(), r).unwrap();
            assert!(dual.agree());
            assert!(
                (dual.radial.value() - want).abs() < 1e-6,
                "radial {} at r = {r}",
                dual.radial.value()
            );
            assert!((dual.radial.value() - dual.identity.value()).abs() < 1e-6);
        }
    }

    #[test]
    fn dual_t0_square_both_routes() {
        // T0(1, z^2) = (log 2)/2 on both routes; f(0) = 0 so the identity
        // route is exactly m0(1)
        let dual = ahlfors_t0(&poly_z2(), 1.0).unwrap();
        let want = 0.5 * LN_2;
        assert!((dual.radial.value() - want).abs() < 1e-6, "radial {}", dual.radial.value());
        assert!((dual.identity.value() - want).abs() < 1e-9);
    }

    #[test]
    fn t0_exact_for_z() {
        // T0(r, z) = log sqrt(1 + r^2)
        let dual = ahlfors_t0(&poly_z(), 3.0).unwrap();
        let want = (1.0f64 + 9.0).sqrt().ln();
        assert!((dual.radial.value() - want).abs() < 1e-6);
        assert!((dual.identity.value() - want).abs() < 1e-9);
    }

    #[test]
    fn length_frozen_and_trivial() {
        let l1 = length_l(&exp_fn(), 1.0).unwrap();
        assert!((l1.value() - 5.0802147752211741).abs() < 1e-7, "got {}", l1.value());
        let c = EntireFunction::polynomial(vec![CRat::one()]);
        assert_eq!(length_l(&c, 1.0).unwrap().value(), 0.0);
    }

    #[test]
    fn constant_function_all_zero() {
        let c = EntireFunction::polynomial(vec![CRat::one()]);
        assert_eq!(nevanlinna_t(&c, 2.0).unwrap().value(), 0.0);
        let dual = ahlfors_t0(&c, 2.0).unwrap();
        assert!(dual.radial.value().abs() < 1e-12);
        assert!(dual.identity.value().abs() < 1e-12);
        assert!(ahlfors_s(&c, 1.0).unwrap().value().abs() < 1e-15);
    }

    #[test]
    fn dilation_consistency() {
        let f3 = exp_fn().dilate(3.0, None).unwrap();
        let a = growth_m(&f3, 2.0).unwrap();
        let b = growth_m(&exp_fn(), 6.0).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn identities_pass_on_polynomial_profile() {
        let profile = growth_profile(&poly_z(), 1.0, 8.0).unwrap();
        let report = verify_growth_identities(&profile, 2.0);
        assert!(report.all_pass(), "violations: {:?}",
            report.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        assert!(report.pairs_checked > 0);
    }

    #[test]
    fn corrupted_s_breaks_st0() {
        let mut profile = growth_profile(&poly_z(), 1.0, 8.0).unwrap();
        for p in &mut profile.points {
            let v = p.ahlfors_s.value() * 10.0;
            p.ahlfors_s = Meas::new(v, p.ahlfors_s.err());
        }
        let report = verify_growth_identities(&profile, 2.0);
        assert!(report
            .checks
            .iter()
            .any(|c| c.identity == "st0" && !c.pass));
    }

    #[test]
    fn profile_monotone_within_errors() {
        let profile = growth_profile(&exp_fn(), 1.0, 4.0).unwrap();
        for w in profile.points.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            assert!(b.nevanlinna_t.value() + 1e-9 >= a.nevanlinna_t.value());
            assert!(b.ahlfors_s.value() + 1e-9 >= a.ahlfors_s.value());
            assert!(b.t0_radial.value() + 1e-9 >= a.t0_radial.value());
            assert!(b.log_max_modulus.value() >= a.log_max_modulus.value());
            // T <= m pointwise
            assert!(a.nevanlinna_t.value() <= a.growth_m.value() + 1e-9);
        }
    }

    #[test]
    fn admissible_radius_polynomial_precondition() {
        // S(r, z) < 1 always: the precondition fails for small eps
        let err = find_admissible_radius(&poly_z(), 5.0, 4.0 / 3.0, 1.0 / 6.0);
        match err {
            Err(Error::Domain(msg)) => assert!(msg.contains("precondition")),
            other => panic!("expected precondition violation, got {other:?}"),
        }
    }

    #[test]
    fn order_of_exp_and_expsq() {
        let est = order_estimate(&exp_fn(), 100.0).unwrap();
        assert!((est.rho.0 - 1.0).abs() < 0.02, "rho = {}", est.rho.0);
        // e^{z^2}
        let esq = EntireFunction::exp_poly(vec![(
            vec![CRat::one()],
            vec![CRat::zero(), CRat::zero(), CRat::one()],
        )])
        .unwrap();
        let est2 = order_estimate(&esq, 30.0).unwrap();
        assert!((est2.rho.0 - 2.0).abs() < 0.05, "rho = {}", est2.rho.0);
    }

    #[test]
    fn solve_rn_constant_order() {
        // synthetic phi = 2 everywhere: r_n = sqrt(n)
        let samples: Vec<(f64, f64)> = (0..20)
            .map(|i| {
                let r = 2.0 * 1.3f64.powi(i);
                (r, r * r)
            })
            .collect();
        let est = proximate_fit(&samples).unwrap();
        assert!((est.rho.0 - 2.0).abs() < 1e-9);
        let r16 = solve_rn(&est, 16).unwrap();
        assert!((r16 - 4.0).abs() < 1e-6, "r_16 = {r16}");
        assert!(est.slow_variation_epsilon.0 < 1e-9);
    }

    #[test]
    fn proximate_envelope_dominates() {
        // oscillating growth data: envelope must cover every sample
        let samples: Vec<(f64, f64)> = (0..24)
            .map(|i| {
                let r = 2.0 * 1.4f64.powi(i);
                let wob = 1.0 + 0.3 * ((i as f64) * 1.7).sin();
                (r, r.powf(1.5) * wob)
            })
            .collect();
        let est = proximate_fit(&samples).unwrap();
        for s in &est.samples {
            let envelope = est.rho.0 * s.r.0.ln() + s.psi.0.ln();
            assert!(s.m.0.ln() <= envelope + 1e-12);
        }
    }

    #[test]
    fn envelope_radius_guard() {
        let zt = EntireFunction::zeta_tilde();
        assert!(matches!(
            nevanlinna_t(&zt, 100.0),
            Err(Error::AccuracyEnvelope(_))
        ));
    }
}
