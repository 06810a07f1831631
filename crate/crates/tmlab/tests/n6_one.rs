use std::f64::consts::E;
use tmlab::entire::EntireFunction;
use tmlab::extremal::{mn_lower, SolverGrids};

#[test]
fn dbg_n6_one() {
    let f = EntireFunction::exp();
    let g = SolverGrids {
        circle: 392,
        phases: 16,
        objective: 1,
    };
    let sol = mn_lower(&f, 6, E, Some(g)).unwrap();
    println!("n=6 single-grad value {} gap {:?}", sol.value.0, sol.gap.map(|d| d.0));
}
