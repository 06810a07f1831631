//! Dense linear programming core for the phased sup-norm discretization.
//!
//! The primal program (maximize a linear functional of the coefficient
//! vector subject to `Re(e^{i psi_j} F(zeta_k)) <= 1`) is solved through
//! its dual: minimize total constraint weight subject to writing the
//! objective gradient as a nonnegative combination of constraint
//! gradients. The multipliers of the dual equality rows are exactly the
//! primal coefficient vector, so solving the weight form yields the
//! polynomial directly.
//!
//! The weight form is solved with an infeasible-start predictor-
//! corrector interior method rather than a vertex method. Each circle
//! point contributes a full fan of phase columns of rank two, so the
//! weight program is massively degenerate: simplex steps collapse to
//! zero length at the fan vertices, and perturbations small enough to
//! preserve the objective drown in solve noise. The interior iteration
//! never touches a vertex, is indifferent to degeneracy, and follows
//! the central path to a fixed relative complementarity in a few dozen
//! small Cholesky solves. Every candidate is re-certified from scratch
//! downstream, so the mild terminal gap of an interior method costs
//! proposal quality only, never soundness.
//!
//! The full program (every circle point, every phase) is never solved
//! directly. Adjacent points of a fine grid contribute nearly parallel
//! columns that wreck the normal-equation conditioning long before they
//! improve the optimum. [`ExchangeLp`] therefore grows a working set of
//! (point, phase) pairs: solve on the current pairs, evaluate the
//! candidate at every point and phase, admit the worst violated pairs,
//! repeat. Constraint dropping only relaxes the primal, so every
//! working-set optimum upper-bounds the full optimum; on convergence
//! the iterate is full-grid feasible, hence optimal to tolerance.

use crate::error::{Error, Result};
use std::f64::consts::TAU;

/// Fraction of the step to the positivity boundary actually taken.
const STEP: f64 = 0.9995;
/// Relative complementarity at which the iteration is declared solved.
const MU_TOL: f64 = 1e-10;
/// Relative primal and dual equality residuals required at a solved exit.
const FEAS_TOL: f64 = 1e-9;
/// Dual residual below which an unpolished iterate is still usable. A
/// violation at this scale costs the candidate a fraction of a percent
/// of sup norm, which certification charges honestly, and the violated
/// pairs are exactly what the exchange scan then admits.
const RD_USABLE: f64 = 3e-2;
/// Best-seen primal residual above which the run is declared a cone
/// failure: when the gradient has no nonnegative representation the
/// residual stays at the cone distance, orders of magnitude above any
/// numerical stall of a feasible program.
const RP_COARSE: f64 = 1e-2;
/// Scaling-ratio cap keeping nearly active columns from annihilating
/// the normal matrix conditioning in the endgame.
const D_CAP: f64 = 1e14;
/// Iterate magnitude treated as divergence toward a Farkas ray.
const BLOWUP: f64 = 1e18;
/// Iterations without a 10x progress factor before the iteration settles
/// for its current point. A premature stop only weakens the proposal.
const STAG: usize = 30;
const MAX_IT: usize = 120;
/// Exchange rounds before the working-set loop settles for its best
/// iterate. Each round adds at most [`ADD_PER_ROUND`] pairs.
const EXCHANGE_ROUNDS: usize = 64;
const ADD_PER_ROUND: usize = 8;
/// Phased-value overshoot tolerated at non-working pairs when declaring
/// the exchange converged. Certification never relies on it.
const EX_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct LpSolution {
    /// equality multipliers of the weight form = primal coefficients
    pub x: Vec<f64>,
    /// primal objective at x
    pub objective: f64,
    /// phase 1 could not bring the artificial level near zero: the
    /// objective gradient leaves the constraint cone and x is unusable
    pub off_cone: bool,
}

/// Dense symmetric positive definite solve via Cholesky, with an
/// escalating diagonal shift when roundoff costs definiteness. The
/// shift only damps the step direction, never the returned multipliers'
/// meaning, because every iterate is re-derived from fresh weights.
struct Spd {
    m: usize,
    l: Vec<f64>,
}

impl Spd {
    fn factor(m: usize, a: &[f64]) -> Result<Spd> {
        let trace: f64 = (0..m).map(|i| a[i * m + i]).sum();
        let base = (trace / m as f64).max(f64::MIN_POSITIVE);
        let mut shift = 0.0;
        'outer: loop {
            let mut l = a.to_vec();
            for i in 0..m {
                l[i * m + i] += shift;
            }
            for k in 0..m {
                for j in 0..k {
                    let f = l[k * m + j];
                    if f != 0.0 {
                        for i in k..m {
                            l[i * m + k] -= f * l[i * m + j];
                        }
                    }
                }
                let d = l[k * m + k];
                if d <= base * 1e-15 {
                    shift = if shift == 0.0 { base * 1e-14 } else { shift * 100.0 };
                    if shift > base * 1e-2 {
                        return Err(Error::Solver(
                            "normal equations of the weight program lost definiteness".into(),
                        ));
                    }
                    continue 'outer;
                }
                let inv = 1.0 / d.sqrt();
                for i in k..m {
                    l[i * m + k] *= inv;
                }
            }
            return Ok(Spd { m, l });
        }
    }

    /// Solves (L Lᵀ) z = b in place.
    fn solve(&self, b: &mut [f64]) {
        let m = self.m;
        for k in 0..m {
            let mut acc = b[k];
            for j in 0..k {
                acc -= self.l[k * m + j] * b[j];
            }
            b[k] = acc / self.l[k * m + k];
        }
        for k in (0..m).rev() {
            let mut acc = b[k];
            for i in k + 1..m {
                acc -= self.l[i * m + k] * b[i];
            }
            b[k] = acc / self.l[k * m + k];
        }
    }
}

/// Weight program over an explicit list of constraint-gradient columns.
/// Columns and rows are equilibrated to near-unit max norm, the column
/// scale folded into the costs and the row scale into the gradient and
/// multipliers, so mixed-magnitude generators cannot wreck the
/// normal-equation conditioning.
struct PairLp {
    m: usize,
    cols: Vec<Vec<f64>>,
    /// column equilibration factors (original column max norms)
    scales: Vec<f64>,
    /// row equilibration factors applied to the stored columns
    row_scale: Vec<f64>,
}

impl PairLp {
    fn new(raw_cols: Vec<Vec<f64>>, m: usize) -> Result<PairLp> {
        let mut cols = raw_cols;
        let mut scales = Vec::with_capacity(cols.len());
        for col in cols.iter_mut() {
            debug_assert_eq!(col.len(), m);
            let s = col.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if s == 0.0 || !s.is_finite() {
                return Err(Error::domain("degenerate weight column"));
            }
            let inv = 1.0 / s;
            col.iter_mut().for_each(|v| *v *= inv);
            scales.push(s);
        }
        // one row sweep after the column sweep balances the generator
        // magnitudes across monomial indices; zero rows keep scale one
        // and surface as residual failures when the gradient hits them
        let mut row_scale = vec![1.0; m];
        for i in 0..m {
            let r = cols.iter().fold(0.0f64, |a, c| a.max(c[i].abs()));
            if r > 0.0 {
                row_scale[i] = 1.0 / r;
            }
        }
        for col in cols.iter_mut() {
            for (v, rs) in col.iter_mut().zip(&row_scale) {
                *v *= rs;
            }
        }
        Ok(PairLp {
            m,
            cols,
            scales,
            row_scale,
        })
    }

    /// `out = P v` accumulated over the scaled columns.
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (vp, col) in v.iter().zip(&self.cols) {
            if *vp != 0.0 {
                for (o, a) in out.iter_mut().zip(col) {
                    *o += vp * a;
                }
            }
        }
    }

    /// Normal matrix `P diag(d) Pt` (lower triangle mirrored).
    fn normal(&self, d: &[f64], mat: &mut [f64]) {
        let m = self.m;
        mat.iter_mut().for_each(|v| *v = 0.0);
        for (dp, col) in d.iter().zip(&self.cols) {
            if *dp == 0.0 {
                continue;
            }
            for i in 0..m {
                let wi = dp * col[i];
                if wi != 0.0 {
                    for j in 0..=i {
                        mat[i * m + j] += wi * col[j];
                    }
                }
            }
        }
        for i in 0..m {
            for j in 0..i {
                mat[j * m + i] = mat[i * m + j];
            }
        }
    }

    /// Solves for the given objective gradient (length m). Returns the
    /// primal coefficient vector and objective; `off_cone` flags
    /// solutions the caller must discard.
    fn solve(&self, c_obj: &[f64]) -> Result<LpSolution> {
        let m = self.m;
        if c_obj.len() != m {
            return Err(Error::domain(format!(
                "objective gradient has length {}, program has {m} rows",
                c_obj.len()
            )));
        }
        let sigma = c_obj.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if sigma == 0.0 {
            return Ok(LpSolution {
                x: vec![0.0; m],
                objective: 0.0,
                off_cone: false,
            });
        }
        if !sigma.is_finite() {
            return Err(Error::domain("non-finite objective gradient"));
        }
        // the gradient rides the same row scale as the stored columns
        let g: Vec<f64> = c_obj
            .iter()
            .zip(&self.row_scale)
            .map(|(v, rs)| v / sigma * rs)
            .collect();
        let nc = self.cols.len();
        // unit-max costs balance the primal and dual scales; the
        // returned multipliers are rescaled back at the end
        let raw_cost: Vec<f64> = self.scales.iter().map(|s| 1.0 / s).collect();
        let cmax = raw_cost.iter().fold(0.0f64, |a, v| a.max(*v));
        let cost: Vec<f64> = raw_cost.iter().map(|v| v / cmax).collect();
        let dbg = std::env::var("TMLAB_LP_DEBUG").is_ok();

        // interior start: least-squares levels pushed safely positive
        let mut mat = vec![0.0; m * m];
        self.normal(&vec![1.0; nc], &mut mat);
        let ch = Spd::factor(m, &mat)?;
        let mut yls = g.clone();
        ch.solve(&mut yls);
        let mut w: Vec<f64> = self.cols.iter().map(|col| dot(col, &yls)).collect();
        let mut yc = vec![0.0; m];
        self.apply(&cost, &mut yc);
        ch.solve(&mut yc);
        let mut s: Vec<f64> = self
            .cols
            .iter()
            .zip(&cost)
            .map(|(col, cp)| cp - dot(col, &yc))
            .collect();
        shift_positive(&mut w);
        shift_positive(&mut s);
        let mut y = vec![0.0; m];

        // predictor-corrector path following on
        //   min cost . w   s.t.  P w = g,  w >= 0
        // with dual  max g . y  s.t.  Pt y + s = cost,  s >= 0;
        // the converged equality multipliers y are the primal
        // coefficient vector of the phased program.
        let mut rp = vec![0.0; m];
        let mut rd = vec![0.0; nc];
        let mut dwa = vec![0.0; nc];
        let mut dsa = vec![0.0; nc];
        let mut dy = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        let mut tmp = vec![0.0; nc];
        let mut best_rd = f64::INFINITY;
        let mut best_rp = f64::INFINITY;
        let mut best_gy = f64::NEG_INFINITY;
        let mut best_y = vec![0.0; m];
        let mut best_prog = f64::MAX;
        let mut stag = 0usize;
        for it in 0..MAX_IT {
            self.apply(&w, &mut rp);
            for (r, gv) in rp.iter_mut().zip(&g) {
                *r = gv - *r;
            }
            for p in 0..nc {
                rd[p] = cost[p] - dot(&self.cols[p], &y) - s[p];
            }
            let mu = w.iter().zip(&s).map(|(a, b)| a * b).sum::<f64>() / nc as f64;
            let obj = dot(&cost, &w);
            let rp_rel = inf_norm(&rp) * 0.5;
            let rd_rel = inf_norm(&rd) * 0.5;
            let mu_rel = mu / (1.0 + obj.abs());
            // among near-feasible multipliers keep the strongest claim:
            // weak duality caps g . y at the optimum, so the largest
            // such iterate is the closest to it
            if inf_norm(&y).is_finite() {
                best_rd = best_rd.min(rd_rel);
                best_rp = best_rp.min(rp_rel);
                if rd_rel <= RD_USABLE {
                    let gy = dot(&g, &y);
                    if gy > best_gy {
                        best_gy = gy;
                        best_y.copy_from_slice(&y);
                    }
                }
            }
            if mu_rel <= MU_TOL && rp_rel <= FEAS_TOL && rd_rel <= FEAS_TOL {
                if dbg {
                    eprintln!("DBG lp stop solved: it={it} obj={obj:.6e} nc={nc}");
                }
                break;
            }
            if !mu.is_finite() || inf_norm(&w).max(inf_norm(&s)).max(inf_norm(&y)) > BLOWUP {
                if dbg {
                    eprintln!("DBG lp stop diverged: it={it} rp_rel={rp_rel:.3e} nc={nc}");
                }
                break;
            }
            let prog = mu_rel.max(rp_rel);
            if prog < 0.1 * best_prog {
                best_prog = prog;
                stag = 0;
            } else {
                stag += 1;
                if stag > STAG {
                    if dbg {
                        eprintln!(
                            "DBG lp stop stalled: it={it} mu_rel={mu_rel:.3e} rp_rel={rp_rel:.3e} rd_rel={rd_rel:.3e} nc={nc}"
                        );
                    }
                    break;
                }
            }
            // predictor: pure Newton step toward feasibility and zero
            // complementarity (sigma = 0)
            let d: Vec<f64> = w
                .iter()
                .zip(&s)
                .map(|(a, b)| (a / b).min(D_CAP))
                .collect();
            self.normal(&d, &mut mat);
            let ch = Spd::factor(m, &mat)?;
            // M dy = rp + P (d o rd) - P (rc / s), affine rc = -w o s
            for p in 0..nc {
                tmp[p] = d[p] * rd[p] + w[p];
            }
            self.apply(&tmp, &mut rhs);
            for (r, v) in rhs.iter_mut().zip(&rp) {
                *r += v;
            }
            dy.copy_from_slice(&rhs);
            ch.solve(&mut dy);
            for p in 0..nc {
                dsa[p] = rd[p] - dot(&self.cols[p], &dy);
                dwa[p] = -w[p] - d[p] * dsa[p];
            }
            let ap = step_len(&w, &dwa);
            let ad = step_len(&s, &dsa);
            let mu_aff = (0..nc)
                .map(|p| (w[p] + ap * dwa[p]) * (s[p] + ad * dsa[p]))
                .sum::<f64>()
                / nc as f64;
            let sig = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
            // corrector: recenter toward sigma mu and cancel the
            // second-order product of the predictor
            for p in 0..nc {
                let rc = sig * mu - w[p] * s[p] - dwa[p] * dsa[p];
                tmp[p] = d[p] * rd[p] - rc / s[p];
            }
            self.apply(&tmp, &mut rhs);
            for (r, v) in rhs.iter_mut().zip(&rp) {
                *r += v;
            }
            dy.copy_from_slice(&rhs);
            ch.solve(&mut dy);
            for p in 0..nc {
                let ds = rd[p] - dot(&self.cols[p], &dy);
                let rc = sig * mu - w[p] * s[p] - dwa[p] * dsa[p];
                let dw = rc / s[p] - d[p] * ds;
                dsa[p] = ds;
                dwa[p] = dw;
            }
            let ap = step_len(&w, &dwa);
            let ad = step_len(&s, &dsa);
            for p in 0..nc {
                w[p] += ap * dwa[p];
                s[p] += ad * dsa[p];
            }
            for (yv, dv) in y.iter_mut().zip(&dy) {
                *yv += ad * dv;
            }
        }
        if best_rd > RD_USABLE || best_rp > RP_COARSE {
            if dbg {
                eprintln!("DBG lp off cone: best_rd={best_rd:.3e} best_rp={best_rp:.3e} nc={nc}");
            }
            return Ok(LpSolution {
                x: vec![0.0; m],
                objective: 0.0,
                off_cone: true,
            });
        }
        // undo the cost and row normalizations: the multipliers of the
        // scaled program are the true ones divided by cmax and the
        // per-row equilibration factors
        let x: Vec<f64> = best_y
            .iter()
            .zip(&self.row_scale)
            .map(|(v, rs)| v * rs * cmax)
            .collect();
        let objective = c_obj.iter().zip(&x).map(|(a, b)| a * b).sum();
        Ok(LpSolution {
            x,
            objective,
            off_cone: false,
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Largest fraction of the Newton step keeping the iterate positive.
fn step_len(v: &[f64], dv: &[f64]) -> f64 {
    let mut a = 1.0f64;
    for (x, d) in v.iter().zip(dv) {
        if *d < 0.0 {
            a = a.min(-STEP * x / d);
        }
    }
    a
}

/// Shifts a least-squares start into the strict interior, keeping its
/// shape where it is already informative.
fn shift_positive(v: &mut [f64]) {
    let min = v.iter().fold(f64::INFINITY, |a, x| a.min(*x));
    let mean_abs = v.iter().map(|x| x.abs()).sum::<f64>() / v.len() as f64;
    let delta = (-1.5 * min).max(0.0) + 0.1 * (1.0 + mean_abs);
    v.iter_mut().for_each(|x| *x += delta);
}

/// Working-set exchange over the full circle discretization.
pub struct ExchangeLp {
    re_rows: Vec<Vec<f64>>,
    im_rows: Vec<Vec<f64>>,
    phases: usize,
    cos_tab: Vec<f64>,
    sin_tab: Vec<f64>,
}

impl ExchangeLp {
    /// Builds the exchange program from per-circle-point generator rows:
    /// the phase-psi constraint gradient at point k is
    /// `cos(psi) R_k - sin(psi) I_k`. Row lists must be matched,
    /// nonempty, finite, of even positive length, with at least 4 phases.
    pub fn new(re_rows: Vec<Vec<f64>>, im_rows: Vec<Vec<f64>>, phases: usize) -> Result<ExchangeLp> {
        if re_rows.is_empty() || re_rows.len() != im_rows.len() {
            return Err(Error::domain(
                "phased program needs matched, nonempty generator row lists",
            ));
        }
        let m = re_rows[0].len();
        if m < 2 || m % 2 != 0 {
            return Err(Error::domain(format!(
                "row dimension must be even and positive, got {m}"
            )));
        }
        if re_rows.iter().chain(im_rows.iter()).any(|r| r.len() != m) {
            return Err(Error::domain("ragged generator rows"));
        }
        if phases < 4 {
            return Err(Error::domain(format!(
                "phase fan needs at least 4 directions, got {phases}"
            )));
        }
        if re_rows
            .iter()
            .chain(im_rows.iter())
            .flatten()
            .any(|v| !v.is_finite())
        {
            return Err(Error::domain("non-finite entry in generator rows"));
        }
        if re_rows
            .iter()
            .zip(&im_rows)
            .any(|(re, im)| re.iter().chain(im).all(|v| *v == 0.0))
        {
            return Err(Error::domain("zero generator row"));
        }
        let cos_tab = (0..phases).map(|j| (TAU * j as f64 / phases as f64).cos()).collect();
        let sin_tab = (0..phases).map(|j| (TAU * j as f64 / phases as f64).sin()).collect();
        Ok(ExchangeLp {
            re_rows,
            im_rows,
            phases,
            cos_tab,
            sin_tab,
        })
    }

    /// Materializes the constraint gradient of pair (k, j).
    fn pair_column(&self, k: usize, j: usize) -> Vec<f64> {
        let (co, si) = (self.cos_tab[j], self.sin_tab[j]);
        self.re_rows[k]
            .iter()
            .zip(&self.im_rows[k])
            .map(|(re, im)| co * re - si * im)
            .collect()
    }

    fn pair_lp(&self, pairs: &[(usize, usize)]) -> Result<PairLp> {
        let m = self.re_rows[0].len();
        let cols = pairs.iter().map(|&(k, j)| self.pair_column(k, j)).collect();
        PairLp::new(cols, m)
    }

    /// Solves the full-grid program through the exchange loop. The round
    /// budget is a proposal-quality knob, not a soundness one: a
    /// non-converged iterate is still feasible for its working set and
    /// the caller re-certifies every candidate from scratch.
    pub fn solve(&self, c_obj: &[f64]) -> Result<LpSolution> {
        let n_pts = self.re_rows.len();
        let m = self.re_rows[0].len();
        let phases = self.phases;
        let mut in_pair = vec![false; n_pts * phases];
        let seed_phases = [0, phases / 4, phases / 2, (3 * phases) / 4];
        let mut density = (m / 2).max(4).min(n_pts);
        let seed = |in_pair: &mut Vec<bool>, density: usize| {
            for t in 0..density {
                let k = t * n_pts / density;
                for &j in &seed_phases {
                    in_pair[k * phases + j] = true;
                }
            }
        };
        seed(&mut in_pair, density);
        let dbg = std::env::var("TMLAB_LP_DEBUG").is_ok();
        let mut last: Option<LpSolution> = None;
        for round in 0..EXCHANGE_ROUNDS {
            let pairs: Vec<(usize, usize)> = (0..n_pts * phases)
                .filter(|&p| in_pair[p])
                .map(|p| (p / phases, p % phases))
                .collect();
            let sol = self.pair_lp(&pairs)?.solve(c_obj)?;
            if dbg {
                eprintln!(
                    "DBG ex round={round} nc={} off={} ln_obj={:.4}",
                    pairs.len(),
                    sol.off_cone,
                    sol.objective.max(1e-300).ln()
                );
            }
            if sol.off_cone {
                // the gradient may still enter the cone of a larger set:
                // first add points, then widen to the full phase fan
                if density < n_pts {
                    density = (density * 2).min(n_pts);
                    seed(&mut in_pair, density);
                } else if in_pair.iter().any(|p| !p) {
                    in_pair.iter_mut().for_each(|p| *p = true);
                } else {
                    return Ok(sol);
                }
                last = Some(sol);
                continue;
            }
            // worst violated phase per circle point, over the full fan
            let mut peaks: Vec<(f64, usize, usize)> = Vec::new();
            for k in 0..n_pts {
                let (re, im) = (&self.re_rows[k], &self.im_rows[k]);
                let mut u = 0.0;
                let mut v = 0.0;
                for i in 0..m {
                    u += sol.x[i] * re[i];
                    v += sol.x[i] * im[i];
                }
                let (val, j) = (0..phases)
                    .map(|j| (self.cos_tab[j] * u - self.sin_tab[j] * v, j))
                    .fold((f64::NEG_INFINITY, 0), |acc, it| {
                        if it.0 > acc.0 {
                            it
                        } else {
                            acc
                        }
                    });
                if val > 1.0 + EX_TOL && !in_pair[k * phases + j] {
                    peaks.push((val, k, j));
                }
            }
            if dbg && !peaks.is_empty() {
                let worst = peaks.iter().fold(0.0f64, |a, p| a.max(p.0));
                eprintln!("DBG ex   viol={} worst={worst:.6}", peaks.len());
            }
            if peaks.is_empty() {
                return Ok(sol);
            }
            peaks.sort_by(|a, b| b.0.total_cmp(&a.0));
            for &(_, k, j) in peaks.iter().take(ADD_PER_ROUND) {
                in_pair[k * phases + j] = true;
            }
            last = Some(sol);
        }
        Ok(last.expect("exchange ran at least one round"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// One circle point whose generator pair spans the coordinate plane:
    /// the feasible set is the regular `phases`-gon.
    fn single_point_lp(phases: usize) -> ExchangeLp {
        ExchangeLp::new(vec![vec![1.0, 0.0]], vec![vec![0.0, 1.0]], phases).unwrap()
    }

    #[test]
    fn face_objective_is_one() {
        let lp = single_point_lp(16);
        let sol = lp.solve(&[1.0, 0.0]).unwrap();
        assert!(!sol.off_cone);
        assert!((sol.objective - 1.0).abs() < 1e-7, "got {}", sol.objective);
        let sol = lp.solve(&[0.0, 1.0]).unwrap();
        assert!(!sol.off_cone);
        assert!((sol.objective - 1.0).abs() < 1e-7, "got {}", sol.objective);
    }

    #[test]
    fn vertex_objective_is_secant() {
        let lp = single_point_lp(16);
        let a = PI / 16.0;
        let sol = lp.solve(&[a.cos(), -a.sin()]).unwrap();
        assert!(!sol.off_cone);
        let want = 1.0 / (PI / 16.0).cos();
        assert!(
            (sol.objective - want).abs() < 1e-7,
            "got {}, want {want}",
            sol.objective
        );
    }

    #[test]
    fn multipliers_stay_in_polygon() {
        let lp = single_point_lp(16);
        for ang in [0.0, 0.13, 1.1, 2.9, 4.5] {
            let c = [f64::cos(ang), -f64::sin(ang)];
            let sol = lp.solve(&c).unwrap();
            assert!(!sol.off_cone);
            // x must satisfy every polygon constraint
            for j in 0..16 {
                let psi = TAU * j as f64 / 16.0;
                let lhs = psi.cos() * sol.x[0] - psi.sin() * sol.x[1];
                assert!(lhs <= 1.0 + 1e-7, "phase {j}: {lhs}");
            }
            // and the optimum lies between inscribed and circumscribed circles
            assert!(sol.objective >= 1.0 - 1e-7);
            assert!(sol.objective <= 1.0 / (PI / 16.0).cos() + 1e-7);
        }
    }

    #[test]
    fn off_cone_objective_flagged() {
        // one circle point spanning only the first coordinate plane of R^4
        let lp = ExchangeLp::new(
            vec![vec![1.0, 0.0, 0.0, 0.0]],
            vec![vec![0.0, 1.0, 0.0, 0.0]],
            8,
        )
        .unwrap();
        let sol = lp.solve(&[0.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(sol.off_cone);
    }

    #[test]
    fn two_plane_objective_splits() {
        // two generator planes; objective along the second
        let lp = ExchangeLp::new(
            vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 0.0]],
            vec![vec![0.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]],
            16,
        )
        .unwrap();
        let sol = lp.solve(&[0.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(!sol.off_cone);
        assert!((sol.objective - 1.0).abs() < 1e-6);
        // the (x0, x1) block is objective-free, so only feasibility is pinned
        for j in 0..16 {
            let psi = TAU * j as f64 / 16.0;
            let a = psi.cos() * sol.x[0] - psi.sin() * sol.x[1];
            let b = psi.cos() * sol.x[2] - psi.sin() * sol.x[3];
            assert!(a <= 1.0 + 1e-6 && b <= 1.0 + 1e-6, "phase {j}: {a} {b}");
        }
        assert!((sol.x[2] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn scaled_objective_same_multipliers() {
        let lp = single_point_lp(16);
        let a = 0.4f64;
        let s1 = lp.solve(&[a.cos(), -a.sin()]).unwrap();
        let s2 = lp
            .solve(&[1e8 * a.cos(), -1e8 * a.sin()])
            .unwrap();
        assert!((s2.objective - 1e8 * s1.objective).abs() < 1e8 * 1e-7);
        for (u, v) in s1.x.iter().zip(&s2.x) {
            assert!((u - v).abs() < 1e-7);
        }
    }

    #[test]
    fn zero_objective_trivial() {
        let lp = single_point_lp(8);
        let sol = lp.solve(&[0.0, 0.0]).unwrap();
        assert_eq!(sol.objective, 0.0);
        assert!(!sol.off_cone);
    }

    #[test]
    fn exchange_matches_dense_circle() {
        // first-coefficient objective over a densely discretized disk
        // constraint: the exchange must land between the inscribed and
        // circumscribed polygon radii using far fewer active pairs
        let n_pts = 64;
        let mut re_rows = Vec::new();
        let mut im_rows = Vec::new();
        for k in 0..n_pts {
            let th = TAU * k as f64 / n_pts as f64;
            re_rows.push(vec![th.cos(), -th.sin()]);
            im_rows.push(vec![th.sin(), th.cos()]);
        }
        let lp = ExchangeLp::new(re_rows.clone(), im_rows.clone(), 16).unwrap();
        let sol = lp.solve(&[1.0, 0.0]).unwrap();
        assert!(!sol.off_cone);
        assert!(sol.objective >= 1.0 - 1e-6, "got {}", sol.objective);
        assert!(
            sol.objective <= 1.0 / (PI / 16.0).cos() + 1e-6,
            "got {}",
            sol.objective
        );
        // returned point respects every grid constraint to tolerance
        for k in 0..n_pts {
            let u: f64 = re_rows[k].iter().zip(&sol.x).map(|(a, b)| a * b).sum();
            let v: f64 = im_rows[k].iter().zip(&sol.x).map(|(a, b)| a * b).sum();
            for j in 0..16 {
                let psi = TAU * j as f64 / 16.0;
                assert!(
                    psi.cos() * u - psi.sin() * v <= 1.0 + 1e-5,
                    "point {k} phase {j}"
                );
            }
        }
    }
}
