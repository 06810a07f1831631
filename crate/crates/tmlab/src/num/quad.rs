//! Adaptive Gauss–Kronrod (G7/K15) quadrature over finite intervals.
//!
//! Bisection-based refinement driven by a worst-first interval heap; the
//! per-interval error estimate is the |K15 - G7| difference. Deterministic:
//! heap ties break on insertion order.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::BinaryHeap;

/// Kronrod-15 abscissae on [0, 1] side (symmetric about 0).
const XK: [f64; 8] = [
    0.000000000000000000000000000000000,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
];

const WK: [f64; 8] = [
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
];

/// Gauss-7 weights aligned with XK indices 0, 2, 4, 6 (others unused).
const WG: [f64; 4] = [
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
];

/// Value types integrable by the adaptive driver.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, k: f64) -> Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult<V> {
    pub value: V,
    /// Accumulated error estimate (not a rigorous bound).
    pub err: f64,
    pub evals: usize,
}

struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    err: f64,
    seq: u64,
}

impl<V> PartialEq for Segment<V> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.seq == other.seq
    }
}
impl<V> Eq for Segment<V> {}
impl<V> PartialOrd for Segment<V> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Segment<V> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // worst error first; older segment first on ties
        self.err
            .total_cmp(&other.err)
            .then(other.seq.cmp(&self.seq))
    }
}

fn gk15<V: QuadValue>(f: &mut impl FnMut(f64) -> V, a: f64, b: f64) -> (V, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let f0 = f(c);
    let mut kron = f0.scale(WK[0]);
    let mut gauss = f0.scale(WG[0]);
    for i in 1..8 {
        let dx = h * XK[i];
        let fp = f(c + dx);
        let fm = f(c - dx);
        let s = fp.add(fm);
        kron = kron.add(s.scale(WK[i]));
        if i % 2 == 0 {
            gauss = gauss.add(s.scale(WG[i / 2]));
        }
    }
    let kron = kron.scale(h);
    let gauss = gauss.scale(h);
    let diff = kron.add(gauss.scale(-1.0)).norm();
    // QUADPACK-style sharpening of the raw difference
    let err = if diff > 0.0 {
        let scale = (200.0 * diff).powf(1.5);
        if scale < diff {
            scale
        } else {
            diff
        }
    } else {
        0.0
    };
    (kron, err.max(diff * 1e-3))
}

/// Adaptive quadrature of `f` over `[a, b]` to absolute tolerance `tol_abs`
/// or relative tolerance `tol_rel` (whichever is weaker), with an interval
/// budget `max_segments`.
pub fn adaptive<V: QuadValue>(
    mut f: impl FnMut(f64) -> V,
    a: f64,
    b: f64,
    tol_abs: f64,
    tol_rel: f64,
    max_segments: usize,
) -> Result<QuadResult<V>> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::domain(format!("bad quadrature interval [{a}, {b}]")));
    }
    let mut evals = 15usize;
    let mut seq = 0u64;
    let (v0, e0) = gk15(&mut f, a, b);
    let mut heap: BinaryHeap<Segment<V>> = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v0,
        err: e0,
        seq,
    });
    let mut total_value = v0;
    let mut total_err = e0;

    while total_err > tol_abs.max(tol_rel * total_value.norm()) {
        if heap.len() >= max_segments {
            return Err(Error::QuadratureNonconvergence(format!(
                "error {total_err:.3e} after {} segments on [{a}, {b}]",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("nonempty heap");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // interval at fp resolution: no further progress possible
            heap.push(worst);
            break;
        }
        let (vl, el) = gk15(&mut f, worst.a, m);
        let (vr, er) = gk15(&mut f, m, worst.b);
        evals += 30;
        total_value = total_value.add(worst.value.scale(-1.0)).add(vl).add(vr);
        total_err = total_err - worst.err + el + er;
        seq += 1;
        heap.push(Segment {
            a: worst.a,
            b: m,
            value: vl,
            err: el,
            seq,
        });
        seq += 1;
        heap.push(Segment {
            a: m,
            b: worst.b,
            value: vr,
            err: er,
            seq,
        });
    }

    // Re-sum from segments for a less drift-prone total.
    let mut value = V::zero();
    let mut err = 0.0;
    for s in heap.iter() {
        value = value.add(s.value);
        err += s.err;
    }
    Ok(QuadResult { value, err, evals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = adaptive(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 1e-12, 0.0, 1000).unwrap();
        // integral of x^3-2x+1 over [-1,3] = [x^4/4 - x^2 + x] = (81/4-9+3)-(1/4-1-1)
        let expect = (81.0 / 4.0 - 9.0 + 3.0) - (0.25 - 2.0);
        assert!((r.value - expect).abs() < 1e-12);
    }

    #[test]
    fn peaked_integrand_converges() {
        // narrow Lorentzian peak: integral over [-1,1] of eps/(x^2+eps^2) -> ~pi
        let eps = 1e-6;
        let r = adaptive(|x: f64| eps / (x * x + eps * eps), -1.0, 1.0, 1e-10, 1e-12, 100_000)
            .unwrap();
        let expect = 2.0 * (1.0 / eps).atan();
        assert!((r.value - expect).abs() < 1e-8, "got {} want {}", r.value, expect);
        assert!((r.value - PI).abs() < 1e-5);
    }

    #[test]
    fn complex_contour_unit_circle() {
        // (1/2 pi i) * integral of 1/z over |z| = 1 equals 1
        let r = adaptive(
            |t: f64| {
                let z = Complex64::from_polar(1.0, t);
                let dz = Complex64::new(0.0, 1.0) * z;
                dz / z
            },
            0.0,
            2.0 * PI,
            1e-12,
            0.0,
            1000,
        )
        .unwrap();
        let w = r.value / Complex64::new(0.0, 2.0 * PI);
        assert!((w - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn kink_integrand() {
        // log^+ style kink at pi/2: integral over [0, pi] of max(cos t, 0) = 1
        let r = adaptive(|t: f64| t.cos().max(0.0), 0.0, PI, 1e-11, 0.0, 100_000).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_reports() {
        let r = adaptive(|x: f64| (1e8 * x).sin(), 0.0, 1.0, 1e-14, 0.0, 8);
        assert!(matches!(r, Err(Error::QuadratureNonconvergence(_))));
    }
}
