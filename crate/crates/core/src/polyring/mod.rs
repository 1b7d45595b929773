//! Exact truncated polynomial algebra.
//!
//! A [`Poly`] is a sparse map from monomials ([`MIndex`]) to exact rationals.
//! Monomials range over the phase variables `x_0..x_{N-1}, y_0..y_{N-1}`, the
//! time `t` and the formal parameters `ν, γ, ε`. Only the total phase degree
//! is truncated; `t` and parameter exponents are unbounded.
//!
//! [`RadialSeries`] carries power series in the per-site radial variable
//! `s = ν(x² + y²)` whose coefficients are polynomials in `t` and parameters.

mod poly;
mod radial;

pub use poly::{poisson_bracket, MIndex, Param, ParamValues, Poly, Var};
pub use radial::{radial_expand, RadialFn, RadialSeries};

/// Exact rational coefficient, always kept in lowest terms with a positive
/// denominator.
pub type Rat = num_rational::BigRational;

/// Small helper to build a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Rational power with a nonnegative integer exponent.
pub(crate) fn rat_pow(base: &Rat, exp: u32) -> Rat {
    num_traits::pow::pow(base.clone(), exp as usize)
}
