//! Exact evaluation of degree-zero descendant cyclic Hurwitz-Hodge integrals
//! arising from the weighted projective stacks `P(1,N)` (the *line* theory)
//! and `P(1,1,N)` (the *surface* theory).
//!
//! Everything here is exact: scalars are big rationals, the one-point
//! generating series are truncated power series with polynomial-in-`z`
//! coefficients, and the coefficient systems are solved by exact elimination.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! and the batch verifier live in the `hhodge` crate.
//!
//! - [`arith`]: [`Rational`] and the factorial family.
//! - [`series`]: truncated `(t, z)` series and the one-point generating functions.
//! - [`moduli`]: stacky types, ranks, admissibility and dimension gates.
//! - [`linalg`]: small dense exact matrices.
//! - [`line`]: closed forms, coefficient systems and recursion residuals for `P(1,N)`.
//! - [`surface`]: the same for `P(1,1,N)`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arith;
pub mod error;
pub mod linalg;
pub mod line;
pub mod moduli;
mod recursion;
pub mod series;
pub mod surface;

pub use arith::{
    double_factorial, frac_factorial, half_step_factorial, multinomial, shifted_factorial, Rational,
};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use moduli::{GammaKey, GammaTable, IntegralSpec, StackyType, Theory};
pub use series::{ZPoly, ZPolySeries};

use alloc::vec::Vec;

/// Per-position values `Θ(k, l)_r`, one for each stacky marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaVector(pub Vec<Rational>);

/// Solution `c_g` of a coefficient system, one entry per stacky marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffVector(pub Vec<Rational>);

impl ThetaVector {
    /// `Σ_r c_r Θ_r`.
    pub fn dot(&self, c: &CoeffVector) -> Rational {
        self.0.iter().zip(&c.0).map(|(t, c)| t * c).sum()
    }
}
