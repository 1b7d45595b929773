//! Symbolic–numeric toolkit for moving the Ablowitz–Ladik and Salerno
//! lattices to canonical coordinates and computing their normal forms.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every algorithmic
//! piece: exact truncated polynomial algebra ([`polyring`]), the Moser
//! construction and the closed-form Darboux map ([`moser`]), the
//! extended-phase-space Lie-series engine ([`lieseries`]) with its
//! error-budget calculator ([`budget`]), and the lattice models with an
//! adaptive Dormand–Prince integrator ([`lattice`], [`ode`]).
//!
//! Everything touching files, randomness or threads lives in the companion
//! `darboux` crate.
#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod budget;
mod error;
pub mod lattice;
pub mod lieseries;
pub mod moser;
pub mod ode;
pub mod polyring;
pub mod scalar;

pub use error::{Error, Result};
pub use lattice::{Boundary, LatticeState, ModelKind, ModelParams, Trajectory};
pub use polyring::{MIndex, Param, ParamValues, Poly, RadialFn, RadialSeries, Rat, Var};
