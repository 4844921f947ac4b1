//! Quaternionic λ-metamonogenic functions on the unit disk.
//!
//! The crate builds the Bessel-based functions `F_n[λ]` and
//! `F_{n,m} = F_n[j_{n,m}]`, which satisfy `(D + λ)F = 0` for the left
//! Dirac operator `D = ∂ₓ𝐢 + ∂ᵧ𝐣`, and provides the numerical machinery
//! around them: disk quadrature, Gram audits, expansions of arbitrary
//! metamonogenic fields, and imaginary-time wave solutions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod basis;
pub mod bessel;
pub mod cli;
pub mod config;
pub mod diskquad;
pub mod error;
pub mod evolution;
pub mod expansion;
pub mod gram;
pub mod io;
pub mod quatnum;
pub mod verify;

pub use basis::{
    BasisFunction, BasisIndex, BasisSeries, DiskPoint, FieldFunction, StandardFunction,
};
pub use diskquad::{QuadratureRule, Samples};
pub use error::{Error, Result};
pub use quatnum::Quaternion;
