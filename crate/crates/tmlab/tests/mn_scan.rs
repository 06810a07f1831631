use num_complex::Complex64;
use std::f64::consts::E;
use std::time::Instant;
use tmlab::entire::EntireFunction;
use tmlab::extremal::{mn_lower, wn_profile};

#[test]
fn scan() {
    let f = EntireFunction::exp();
    for n in [2usize, 4, 6, 8] {
        let t = Instant::now();
        match mn_lower(&f, n, E, None) {
            Ok(sol) => {
                let v = sol.value.0;
                println!(
                    "n={n}: mn={v:.6} mn/n^2={:.6} raw={:.6} slack={:.3e} gap={:?} floor={:.4} [{:?}]",
                    v / (n * n) as f64,
                    sol.raw_value.0,
                    sol.slack.0,
                    sol.gap.map(|g| g.0),
                    0.5 + 1.5 / n as f64,
                    t.elapsed()
                );
            }
            Err(e) => println!("n={n}: ERR {e} [{:?}]", t.elapsed()),
        }
    }
    let t = Instant::now();
    match wn_profile(
        &f,
        8,
        &[Complex64::new(E, 0.0), Complex64::new(E * E, 0.0)],
        None,
    ) {
        Ok(prof) => {
            for p in &prof.points {
                println!(
                    "wn n=8 z=({},{}): value={:.6} raw={:.6} slack={:.3e} [{:?}]",
                    p.z_re.0,
                    p.z_im.0,
                    p.value.0,
                    p.raw_value.0,
                    p.slack.0,
                    t.elapsed()
                );
            }
        }
        Err(e) => println!("wn ERR {e} [{:?}]", t.elapsed()),
    }
}
