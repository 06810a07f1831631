use num_complex::Complex64;
use std::f64::consts::{E, TAU};
use tmlab::entire::EntireFunction;
use tmlab::extremal::{compose_taylor, vanishing_polynomial, ComposedFunction};

#[test]
fn dbg_vanishing_n6() {
    let f = EntireFunction::exp();
    let p = vanishing_polynomial(&f, 6).unwrap();
    let mut amax = 0.0f64;
    for i in 0..=6 {
        for j in 0..=(6 - i) {
            amax = amax.max(p.coeff(i, j).norm());
        }
    }
    println!("max |a_t| = {amax:.6e}");
    let fc = ComposedFunction::new(p.clone(), f.clone());
    let mut g1 = 0.0f64;
    for i in 0..2048 {
        let v = fc.eval(Complex64::from_polar(1.0, TAU * i as f64 / 2048.0)).norm();
        g1 = g1.max(v);
    }
    let mut ge = 0.0f64;
    for i in 0..2048 {
        let v = fc.eval(Complex64::from_polar(E, TAU * i as f64 / 2048.0)).norm();
        ge = ge.max(v);
    }
    println!("f64 grid max |z|=1: {g1:.6e}  ln={:.4}", g1.ln());
    println!("f64 grid max |z|=e: {ge:.6e}  ln={:.4}", ge.ln());
    println!("ratio ln: {:.4}", ge.ln() - g1.ln());
    let tay = compose_taylor(&p, &f, 60);
    for k in 20..=40 {
        println!("c[{k}] = {:.6e}", tay[k].norm());
    }
    let sum_tail: f64 = tay.iter().skip(27).map(|c| c.norm()).sum();
    println!("sum |c_k| k=27..60 = {sum_tail:.6e} ln={:.4}", sum_tail.ln());
}
