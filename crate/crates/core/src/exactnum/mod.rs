//! Exact arithmetic: arbitrary-precision rationals and real quadratic values
//! `a + b√n`. Nothing downstream ever touches floating point except for
//! display.

mod quad;
mod rational;

pub use quad::{perfect_square, quad_is_rational, sqrt_to_quad, squarefree_split, QuadValue};
pub use rational::{rat_arith, rat_cmp, RatOp, Rational};
