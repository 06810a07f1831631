//! Numerical laboratory for growth of entire functions and the size of
//! polynomial expressions along their graphs.
//!
//! The crate is organized around a small set of interlocking toolkits:
//!
//! | module        | provides                                                               |
//! |---------------|------------------------------------------------------------------------|
//! | [`entire`]    | entire-function kinds, evaluation, derivatives, spherical derivative, zeta/xi |
//! | [`growth`]    | max modulus, Nevanlinna and spherical characteristics, growth profiles, proximate orders |
//! | [`extremal`]  | bivariate polynomials on the graph, vanishing constructions, certified extremal lower bounds |
//! | [`covering`]  | preimage location, enclosing disks, n-th diameters of preimage sets    |
//! | [`growthclass`] | explicit constants, admissible intervals, covering scans, growth classes, bound registry |
//! | [`algebraic`] | quadratic number fields, lattice point counts, value jets, Siegel-type solving, algebraic measures |
//! | [`cli`]       | command-line front end: subcommands, JSON/SVG output, run manifests    |
//!
//! Quadrature-backed quantities carry reported error estimates, exact
//! constructions (kernel null spaces, field arithmetic, lattice solves) are
//! done in exact rational/integer arithmetic, and every extremal lower bound
//! is certified by re-evaluation before it is reported.

pub mod algebraic;
pub mod cli;
pub mod covering;
pub mod entire;
pub mod error;
pub mod extremal;
pub mod growth;
pub mod growthclass;
pub mod num;

pub use entire::EntireFunction;
pub use error::{Error, Result};
