use std::f64::consts::E;
use tmlab::entire::EntireFunction;
use tmlab::extremal::mn_lower;

#[test]
fn dbg_n6() {
    let f = EntireFunction::exp();
    match mn_lower(&f, 6, E, None) {
        Ok(sol) => println!("n=6 value {} gap {:?}", sol.value.0, sol.gap.map(|g| g.0)),
        Err(e) => println!("n=6 ERR {e}"),
    }
}
