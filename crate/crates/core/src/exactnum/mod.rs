//! Exact scalar and polynomial arithmetic.

mod algreal;
pub mod matrix;
mod piecewise;
mod poly;
mod rat;
mod roots;

pub use algreal::AlgReal;
pub use piecewise::{poly_integrate, PiecewisePoly};
pub use poly::Poly;
pub use rat::{
    ceil, floor, fmt_rat, int, lcm_denominators, parse_rat, rat, rat_to_decimal, rat_to_f64,
    simplest_between, Rat, Sign,
};
pub use roots::{isolate_roots, real_roots, SturmChain};

/// Exact sign of an algebraic value.
pub fn sign_of(v: &AlgReal) -> Sign {
    v.sign()
}
