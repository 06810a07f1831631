//! Certified lower bounds for the extremal quantities mₙ(r), eₙ = log Eₙ,
//! and Wₙ(z).
//!
//! Each quantity is a sup over polynomials P of degree ≤ n normalized by
//! the graph sup-norm `sup_{|z| <= 1} |P(z, f(z))| <= 1`. The search side
//! discretizes that constraint into a phased linear program (see
//! `lp`); the reported value never trusts the LP. Every candidate is
//! re-certified: the objective numerator is a dense sample maximum (a
//! true lower bound), the denominator is a rigorous upper bound on the
//! graph sup obtained from a Bernstein derivative bound on a truncation
//! of F plus a Cauchy coefficient-tail estimate. Rescaling by that upper
//! bound makes the constraint hold exactly, so value = numerator − bound
//! is a certified lower bound regardless of how sloppy the LP was.

use super::lp::ExchangeLp;
use super::{
    coeff_count, composed_log_max, monomials, vanishing_polynomial, BivarPolynomial,
    ComposedFunction,
};
use crate::entire::EntireFunction;
use crate::error::{Error, Result};
use crate::num::dec::Dec;
use crate::num::rat::CRat;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI, TAU};

/// Relative size of the admitted Taylor tail in the certification bound.
const TAIL_REL: f64 = 1e-9;
/// Largest truncation degree the certifier will chase; beyond this the
/// candidate cancels so deeply on the unit circle that its value would
/// collapse anyway.
const MAX_TRIG_DEGREE: usize = 1200;

/// Discretization sizes of the extremal programs.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SolverGrids {
    /// constraint samples on the unit circle
    pub circle: usize,
    /// directions in the phase fan approximating the modulus constraint
    pub phases: usize,
    /// objective targets (circle angles for mₙ, grid side for eₙ)
    pub objective: usize,
}

impl SolverGrids {
    pub fn for_degree(n: usize) -> SolverGrids {
        SolverGrids {
            circle: 8 * (n + 1) * (n + 1),
            phases: 16,
            objective: 8,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.circle < 8 || self.phases < 4 || self.objective == 0 {
            return Err(Error::domain(format!(
                "solver grids too small: circle {} (min 8), phases {} (min 4), objective {} (min 1)",
                self.circle, self.phases, self.objective
            )));
        }
        Ok(())
    }
}

/// Outcome of one extremal program.
#[derive(Clone, Debug, Serialize)]
pub struct ExtremalSolution {
    /// winning polynomial, rescaled so its certified graph sup is ≤ 1
    pub polynomial: BivarPolynomial,
    /// certified lower bound for the extremal quantity (log scale)
    pub value: Dec,
    /// the same ratio before the certification slack was charged
    pub raw_value: Dec,
    /// sup-norm correction charged to the winner (log scale)
    pub slack: Dec,
    /// distance from value to the best LP upper estimate, when one exists
    pub gap: Option<Dec>,
    pub grids: SolverGrids,
}

/// One point of a Wₙ profile. All logarithmic fields are normalized by
/// n², matching the Wₙ(z)/n² scale of the limit function.
#[derive(Clone, Debug, Serialize)]
pub struct WnPoint {
    pub z_re: Dec,
    pub z_im: Dec,
    /// certified lower bound of Wₙ(z)/n²
    pub value: Dec,
    pub raw_value: Dec,
    pub slack: Dec,
    pub gap: Option<Dec>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WnProfile {
    pub n: usize,
    pub grids: SolverGrids,
    pub points: Vec<WnPoint>,
}

#[derive(Clone, Copy, Debug)]
struct Cert {
    sup_log: f64,
    grid_log: f64,
    slack_log: f64,
}

#[derive(Clone)]
struct Scored {
    poly: BivarPolynomial,
    obj_log: f64,
    cert: Cert,
}

impl Scored {
    fn value(&self) -> f64 {
        self.obj_log - self.cert.sup_log
    }
}

enum Eval {
    Kept(Scored),
    Collapsed { raw: f64, certified: f64 },
    Failed,
}

/// Certified mₙ(r) lower bound: sup of log ‖P_f‖ on |z| = r over P of
/// degree ≤ n with certified ‖P_f‖ ≤ 1 on the unit disk.
pub fn mn_lower(
    f: &EntireFunction,
    n: usize,
    r: f64,
    grids: Option<SolverGrids>,
) -> Result<ExtremalSolution> {
    if n == 0 {
        return Err(Error::domain("mn needs polynomial degree n >= 1"));
    }
    if !(r.is_finite() && r >= 1.0) {
        return Err(Error::domain(format!("mn needs r >= 1, got {r}")));
    }
    check_envelope(f, r)?;
    let grids = grids.unwrap_or_else(|| SolverGrids::for_degree(n));
    grids.validate()?;
    let mut grads = Vec::with_capacity(grids.objective);
    for l in 0..grids.objective {
        let z0 = Complex64::from_polar(r, TAU * l as f64 / grids.objective as f64);
        grads.push(point_gradient(f, n, z0)?);
    }
    let (winner, upper) = run_program(f, n, grids, grads, |fc| {
        composed_log_max(fc, r).map(|(v, _)| v)
    })?;
    Ok(finish(winner, upper, grids))
}

/// Certified eₙ = log Eₙ lower bound: sup of log ‖P‖ on the torus over
/// the same normalized family. Degree 0 is allowed and gives exactly 0.
pub fn en_lower(
    f: &EntireFunction,
    n: usize,
    grids: Option<SolverGrids>,
) -> Result<ExtremalSolution> {
    let grids = grids.unwrap_or_else(|| SolverGrids::for_degree(n));
    grids.validate()?;
    let mut grads = Vec::with_capacity(grids.objective * grids.objective);
    for a in 0..grids.objective {
        let z0 = Complex64::from_polar(1.0, TAU * a as f64 / grids.objective as f64);
        for b in 0..grids.objective {
            let w0 = Complex64::from_polar(1.0, TAU * b as f64 / grids.objective as f64);
            grads.push(torus_gradient(n, z0, w0));
        }
    }
    let (winner, upper) = run_program(f, n, grids, grads, |fc| {
        Ok(torus_log_max(fc.polynomial()))
    })?;
    Ok(finish(winner, upper, grids))
}

/// Certified Wₙ(z)/n² lower bounds at the given points. Wₙ vanishes
/// identically on the closed unit disk, so those points short-circuit to
/// an exact 0.
pub fn wn_profile(
    f: &EntireFunction,
    n: usize,
    points: &[Complex64],
    grids: Option<SolverGrids>,
) -> Result<WnProfile> {
    if n == 0 {
        return Err(Error::domain("Wn needs polynomial degree n >= 1"));
    }
    let grids = grids.unwrap_or_else(|| SolverGrids::for_degree(n));
    grids.validate()?;
    let n2 = (n * n) as f64;
    let mut out = Vec::with_capacity(points.len());
    for &z in points {
        if !z.is_finite() {
            return Err(Error::domain("non-finite profile point"));
        }
        if z.norm() <= 1.0 {
            out.push(WnPoint {
                z_re: Dec(z.re),
                z_im: Dec(z.im),
                value: Dec(0.0),
                raw_value: Dec(0.0),
                slack: Dec(0.0),
                gap: Some(Dec(0.0)),
            });
            continue;
        }
        check_envelope(f, z.norm())?;
        let grad = point_gradient(f, n, z)?;
        let (w, upper) = run_program(f, n, grids, vec![grad], move |fc| {
            let v = fc.eval(z);
            if !v.is_finite() {
                return Err(Error::AccuracyEnvelope(format!(
                    "composed evaluation overflowed at {z}"
                )));
            }
            Ok(v.norm().ln())
        })?;
        let value = w.value();
        out.push(WnPoint {
            z_re: Dec(z.re),
            z_im: Dec(z.im),
            value: Dec(value / n2),
            raw_value: Dec((w.obj_log - w.cert.grid_log) / n2),
            slack: Dec(w.cert.slack_log / n2),
            gap: upper.map(|u| Dec((u - value).max(0.0) / n2)),
        });
    }
    Ok(WnProfile {
        n,
        grids,
        points: out,
    })
}

fn check_envelope(f: &EntireFunction, r: f64) -> Result<()> {
    if let Some(env) = f.envelope_radius() {
        if r > env {
            return Err(Error::AccuracyEnvelope(format!(
                "radius {r} exceeds the function's accuracy envelope {env}"
            )));
        }
    }
    Ok(())
}

fn const_one() -> BivarPolynomial {
    BivarPolynomial::from_exact(0, vec![CRat::one()]).unwrap()
}

/// Shared driver: assemble candidates (constant, vanishing construction,
/// LP winners per objective target), certify each, and keep the best.
fn run_program<S>(
    f: &EntireFunction,
    n: usize,
    grids: SolverGrids,
    grads: Vec<Vec<f64>>,
    score: S,
) -> Result<(Scored, Option<f64>)>
where
    S: Fn(&ComposedFunction) -> Result<f64> + Sync,
{
    let mut candidates: Vec<BivarPolynomial> = vec![const_one()];
    if n >= 1 {
        candidates.push(vanishing_polynomial(f, n)?);
    }
    let lp = build_lp(f, n, grids)?;
    let sec_log = -(PI / grids.phases as f64).cos().ln();
    let lp_out: Vec<Option<(BivarPolynomial, f64)>> = grads
        .par_iter()
        .map(|g| {
            let sol = match lp.solve(g) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("DBG lp err: {e}");
                    return None;
                }
            };
            if sol.off_cone || !(sol.objective > 0.0) {
                eprintln!(
                    "DBG lp discard: off_cone={} obj={:.6e}",
                    sol.off_cone, sol.objective
                );
                return None;
            }
            let poly = poly_from_x(n, &sol.x)?;
            Some((poly, sol.objective.ln() + sec_log))
        })
        .collect();
    let mut upper: Option<f64> = None;
    let mut ests: Vec<Option<f64>> = vec![None; candidates.len()];
    for (poly, est) in lp_out.into_iter().flatten() {
        upper = Some(upper.map_or(est, |u| u.max(est)));
        candidates.push(poly);
        ests.push(Some(est));
    }
    let evals: Vec<Eval> = candidates
        .into_par_iter()
        .enumerate()
        .map(|(ci, p)| {
            let fc = ComposedFunction::new(p, f.clone());
            let cert = match certify_sup(&fc) {
                Ok(c) => c,
                Err(_) => return Eval::Failed,
            };
            let obj_log = match score(&fc) {
                Ok(v) => v,
                Err(_) => return Eval::Failed,
            };
            let raw = obj_log - cert.grid_log;
            if std::env::var("TMLAB_LP_DEBUG").is_ok() {
                eprintln!(
                    "DBG cand {ci}: est={:?} raw={raw:.4} slack={:.3e} value={:.4}",
                    ests[ci],
                    cert.slack_log,
                    obj_log - cert.sup_log
                );
            }
            if cert.slack_log > 0.5 * raw {
                return Eval::Collapsed {
                    raw,
                    certified: obj_log - cert.sup_log,
                };
            }
            Eval::Kept(Scored {
                poly: fc.polynomial().clone(),
                obj_log,
                cert,
            })
        })
        .collect();
    let mut best: Option<Scored> = None;
    let mut best_collapsed: Option<(f64, f64)> = None;
    for e in evals {
        match e {
            Eval::Kept(s) => {
                if best.as_ref().map_or(true, |b| s.value() > b.value()) {
                    best = Some(s);
                }
            }
            Eval::Collapsed { raw, certified } => {
                if best_collapsed.map_or(true, |(r, _)| raw > r) {
                    best_collapsed = Some((raw, certified));
                }
            }
            Eval::Failed => {}
        }
    }
    match best {
        Some(w) => Ok((w, upper)),
        None => match best_collapsed {
            Some((raw, certified)) => Err(Error::CertificationCollapse { raw, certified }),
            None => Err(Error::Solver(
                "no extremal candidate survived certification".into(),
            )),
        },
    }
}

fn finish(winner: Scored, upper: Option<f64>, grids: SolverGrids) -> ExtremalSolution {
    let value = winner.value();
    let raw = winner.obj_log - winner.cert.grid_log;
    let polynomial = if winner.cert.sup_log == 0.0 {
        winner.poly
    } else {
        winner.poly.scaled((-winner.cert.sup_log).exp())
    };
    ExtremalSolution {
        polynomial,
        value: Dec(value),
        raw_value: Dec(raw),
        slack: Dec(winner.cert.slack_log),
        gap: upper.map(|u| Dec((u - value).max(0.0))),
        grids,
    }
}

/// Rigorous upper bound on sup_{|z| <= 1} |F| (equivalently on |z| = 1).
///
/// Write F = F_L + tail with F_L the degree-L Taylor truncation. On the
/// circle F_L is a trigonometric polynomial of degree L, so Bernstein's
/// inequality bounds its oscillation between K₂ = max(4096, 2048 L)
/// equispaced samples: sup |F_L| ≤ G_L / (1 − πL/K₂). The tail is bounded
/// through Cauchy coefficient estimates at radius 3/2 and L is chosen to
/// push it below 1e-9 of the sampled scale. When f is a polynomial (or
/// no monomial touches w), F itself is a polynomial: the tail is zero and
/// L is its exact degree — in particular constants certify with zero
/// slack.
fn certify_sup(fc: &ComposedFunction) -> Result<Cert> {
    let p = fc.polynomial();
    let f = fc.function();
    let mut mons: Vec<(usize, usize, f64)> = Vec::new();
    for (i, j) in monomials(p.degree()) {
        let a = p.coeff(i, j).norm();
        if a > 0.0 {
            mons.push((i, j, a));
        }
    }
    if mons.is_empty() {
        return Err(Error::Solver("cannot certify the zero polynomial".into()));
    }
    let exact_l = if let Some(d) = f.polynomial_degree() {
        Some(mons.iter().map(|&(i, j, _)| i + j * d).max().unwrap())
    } else if mons.iter().all(|&(_, j, _)| j == 0) {
        Some(mons.iter().map(|&(i, _, _)| i).max().unwrap())
    } else {
        None
    };
    let (l, eps) = match exact_l {
        Some(l) => (l, 0.0),
        None => {
            let g0 = circle_grid_max(fc, 1024)?;
            let lmu = match f.log_max_modulus_upper(1.5) {
                Some(v) => v,
                // no closed-form envelope: padded empirical circle max
                None => empirical_log_max(f, 1.5) + 4f64.ln(),
            };
            let ln15 = 1.5f64.ln();
            let terms: Vec<f64> = mons
                .iter()
                .map(|&(i, j, a)| a.ln() + i as f64 * ln15 + j as f64 * lmu)
                .collect();
            let lm_hat = logsumexp(&terms);
            let need = (LN_2 + lm_hat - (TAIL_REL * g0).ln()) / ln15;
            let l = need.ceil().max(1.0);
            if l as usize > MAX_TRIG_DEGREE {
                return Err(Error::Solver(format!(
                    "certification would need truncation degree {l:.0}; the candidate cancels \
                     too deeply on the unit circle to be worth keeping"
                )));
            }
            let l = l as usize;
            (l, 2.0 * (lm_hat - l as f64 * ln15).exp())
        }
    };
    let k2 = 4096usize.max(2048 * l);
    let g = circle_grid_max(fc, k2)?;
    let frac = PI * l as f64 / k2 as f64;
    let sup = (g + eps) / (1.0 - frac) + eps;
    Ok(Cert {
        sup_log: sup.ln(),
        grid_log: g.ln(),
        slack_log: sup.ln() - g.ln(),
    })
}

fn circle_grid_max(fc: &ComposedFunction, k: usize) -> Result<f64> {
    let mut best = 0.0f64;
    for i in 0..k {
        let v = fc.eval(Complex64::from_polar(1.0, TAU * i as f64 / k as f64));
        if !v.is_finite() {
            return Err(Error::AccuracyEnvelope(
                "composed evaluation overflowed on the unit circle".into(),
            ));
        }
        let nv = v.norm();
        if nv > best {
            best = nv;
        }
    }
    if best == 0.0 {
        return Err(Error::Solver(
            "candidate vanishes on the whole unit-circle sample grid".into(),
        ));
    }
    Ok(best)
}

fn empirical_log_max(f: &EntireFunction, r: f64) -> f64 {
    const K: usize = 4096;
    let mut best = f64::NEG_INFINITY;
    for k in 0..K {
        let v = f.log_abs(Complex64::from_polar(r, TAU * k as f64 / K as f64));
        if v > best {
            best = v;
        }
    }
    best
}

fn logsumexp(ts: &[f64]) -> f64 {
    let mx = ts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !mx.is_finite() {
        return mx;
    }
    mx + ts.iter().map(|t| (t - mx).exp()).sum::<f64>().ln()
}

fn torus_log_max(p: &BivarPolynomial) -> f64 {
    const G: usize = 256;
    let mut best = 0.0f64;
    for a in 0..G {
        let z = Complex64::from_polar(1.0, TAU * a as f64 / G as f64);
        for b in 0..G {
            let w = Complex64::from_polar(1.0, TAU * b as f64 / G as f64);
            let v = p.eval(z, w).norm();
            if v > best {
                best = v;
            }
        }
    }
    if best == 0.0 {
        f64::NEG_INFINITY
    } else {
        best.ln()
    }
}

fn pow_table(base: Complex64, n: usize) -> Vec<Complex64> {
    let mut t = Vec::with_capacity(n + 1);
    t.push(Complex64::new(1.0, 0.0));
    for _ in 0..n {
        let prev = *t.last().unwrap();
        t.push(prev * base);
    }
    t
}

/// Objective gradient of Re F(z₀) in the interleaved real coordinates.
fn point_gradient(f: &EntireFunction, n: usize, z0: Complex64) -> Result<Vec<f64>> {
    let fv = f.eval(z0);
    if !fv.is_finite() {
        return Err(Error::AccuracyEnvelope(format!(
            "cannot evaluate the function at objective point {z0}"
        )));
    }
    let zp = pow_table(z0, n);
    let fp = pow_table(fv, n);
    let mut c = vec![0.0; 2 * coeff_count(n)];
    for (t, (i, j)) in monomials(n).into_iter().enumerate() {
        let g = zp[i] * fp[j];
        if !g.is_finite() {
            return Err(Error::AccuracyEnvelope(format!(
                "monomial overflow at objective point {z0}"
            )));
        }
        c[2 * t] = g.re;
        c[2 * t + 1] = -g.im;
    }
    Ok(c)
}

/// Objective gradient of Re P(z₀, w₀) for the torus program.
fn torus_gradient(n: usize, z0: Complex64, w0: Complex64) -> Vec<f64> {
    let zp = pow_table(z0, n);
    let wp = pow_table(w0, n);
    let mut c = vec![0.0; 2 * coeff_count(n)];
    for (t, (i, j)) in monomials(n).into_iter().enumerate() {
        let g = zp[i] * wp[j];
        c[2 * t] = g.re;
        c[2 * t + 1] = -g.im;
    }
    c
}

fn poly_from_x(n: usize, x: &[f64]) -> Option<BivarPolynomial> {
    if x.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let coeffs: Vec<Complex64> = (0..coeff_count(n))
        .map(|t| Complex64::new(x[2 * t], x[2 * t + 1]))
        .collect();
    BivarPolynomial::from_float(n, coeffs).ok()
}

/// Constraint rows: for circle point ζ, the generator pair (R, I) such
/// that the phase-ψ constraint gradient is cos ψ · R − sin ψ · I.
fn build_lp(f: &EntireFunction, n: usize, grids: SolverGrids) -> Result<ExchangeLp> {
    let nn = coeff_count(n);
    let m = 2 * nn;
    let mons = monomials(n);
    let mut re_rows = Vec::with_capacity(grids.circle);
    let mut im_rows = Vec::with_capacity(grids.circle);
    for k in 0..grids.circle {
        let zeta = Complex64::from_polar(1.0, TAU * k as f64 / grids.circle as f64);
        let fv = f.eval(zeta);
        if !fv.is_finite() {
            return Err(Error::AccuracyEnvelope(
                "cannot evaluate the function on the unit circle".into(),
            ));
        }
        let zp = pow_table(zeta, n);
        let fp = pow_table(fv, n);
        let mut re = vec![0.0; m];
        let mut im = vec![0.0; m];
        for (t, &(i, j)) in mons.iter().enumerate() {
            let g = zp[i] * fp[j];
            re[2 * t] = g.re;
            re[2 * t + 1] = -g.im;
            im[2 * t] = g.im;
            im[2 * t + 1] = g.re;
        }
        re_rows.push(re);
        im_rows.push(im);
    }
    ExchangeLp::new(re_rows, im_rows, grids.phases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn exp_fn() -> EntireFunction {
        EntireFunction::exp()
    }

    #[test]
    fn mn_at_unit_radius_is_exactly_zero() {
        let sol = mn_lower(&exp_fn(), 2, 1.0, None).unwrap();
        assert_eq!(sol.value.0, 0.0);
        assert_eq!(sol.slack.0, 0.0);
        assert_eq!(sol.polynomial.degree(), 0);
        assert!(sol.polynomial.is_exact());
    }

    #[test]
    fn mn_degree_one_at_e() {
        let sol = mn_lower(&exp_fn(), 1, E, None).unwrap();
        // floor (n^2+3n)/2 * log e = 2; sup is comfortably below 4
        assert!(sol.value.0 >= 2.0, "value {}", sol.value.0);
        assert!(sol.value.0 <= 4.0, "value {}", sol.value.0);
        assert!(sol.slack.0 < 0.01);
        if let Some(g) = sol.gap {
            assert!(g.0 >= 0.0 && g.0 < 1.0, "gap {}", g.0);
        }
    }

    #[test]
    fn mn_degree_two_at_e() {
        let sol = mn_lower(&exp_fn(), 2, E, None).unwrap();
        assert!(sol.value.0 >= 5.0, "value {}", sol.value.0);
        assert!(sol.value.0 <= 7.0, "value {}", sol.value.0);
    }

    #[test]
    fn mn_monotone_in_radius_and_degree() {
        let f = exp_fn();
        let a = mn_lower(&f, 1, 2.0, None).unwrap();
        let b = mn_lower(&f, 1, E, None).unwrap();
        assert!(a.value.0 <= b.value.0 + 0.05, "{} vs {}", a.value.0, b.value.0);
        let c = mn_lower(&f, 2, E, None).unwrap();
        assert!(b.value.0 <= c.value.0 + 0.05, "{} vs {}", b.value.0, c.value.0);
    }

    #[test]
    fn en_degree_zero_is_exactly_zero() {
        let sol = en_lower(&exp_fn(), 0, None).unwrap();
        assert_eq!(sol.value.0, 0.0);
        assert_eq!(sol.slack.0, 0.0);
        assert!(sol.polynomial.is_exact());
    }

    #[test]
    fn en_consistency_with_mn() {
        // m_n(r) <= (e_n + n m(R)) / log R * log r with n = 2, r = e,
        // R = e^2, m(R) = R for the exponential
        let f = exp_fn();
        let mn = mn_lower(&f, 2, E, None).unwrap();
        let en = en_lower(&f, 2, None).unwrap();
        let gap = en.gap.map_or(0.5, |g| g.0);
        let rhs = (en.value.0 + gap + 2.0 * E * E) / 2.0;
        assert!(
            mn.value.0 <= rhs + 0.25,
            "mn {} vs rhs {rhs}",
            mn.value.0
        );
        assert!(en.value.0 >= 0.0);
    }

    #[test]
    fn wn_inside_disk_is_zero_and_outside_positive() {
        let f = exp_fn();
        let prof = wn_profile(
            &f,
            2,
            &[Complex64::new(0.3, 0.2), Complex64::new(E, 0.0)],
            None,
        )
        .unwrap();
        assert_eq!(prof.points[0].value.0, 0.0);
        assert_eq!(prof.points[0].slack.0, 0.0);
        let w = &prof.points[1];
        // the square of the degree-1 vanishing polynomial, scaled to unit sup,
        // already attains ln|F(e)|/4 = 1.384, so the solver must do at least
        // as well; the grid optimum lands near 1.71
        assert!(w.value.0 > 1.3, "value {}", w.value.0);
        assert!(w.value.0 < 2.2, "value {}", w.value.0);
        assert!(w.value.0 <= w.raw_value.0);
    }

    #[test]
    fn certificate_survives_finer_grid() {
        let sol = mn_lower(&exp_fn(), 2, E, None).unwrap();
        // the normalized winner must respect the unit constraint on a grid
        // 10x finer than the constraint grid
        let fc = ComposedFunction::new(sol.polynomial.clone(), exp_fn());
        let k = 10 * sol.grids.circle;
        let mut worst = 0.0f64;
        for i in 0..k {
            let v = fc
                .eval(Complex64::from_polar(1.0, TAU * i as f64 / k as f64))
                .norm();
            worst = worst.max(v);
        }
        assert!(worst <= 1.0 + 1e-9, "finer-grid sup {worst}");
    }

    #[test]
    fn grids_default_and_validation() {
        let g = SolverGrids::for_degree(2);
        assert_eq!(g.circle, 72);
        assert_eq!(g.phases, 16);
        assert_eq!(g.objective, 8);
        let bad = SolverGrids {
            circle: 4,
            phases: 16,
            objective: 8,
        };
        assert!(mn_lower(&exp_fn(), 1, 2.0, Some(bad)).is_err());
    }

    #[test]
    fn solution_serializes() {
        let sol = mn_lower(&exp_fn(), 1, 2.0, None).unwrap();
        let json = serde_json::to_string(&sol).unwrap();
        assert!(json.contains("\"value\""));
        assert!(json.contains("\"degree\""));
        assert!(json.contains("\"circle\""));
    }
}
