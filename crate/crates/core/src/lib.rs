//! Finite-dimensional noncommutative resistance networks.
//!
//! A finite-dimensional C*-algebra is modelled as a direct sum of full matrix
//! blocks carrying a faithful trace. On top of that the crate builds
//! carré-du-champ (CdC) forms, energy forms and their Laplacians, heat
//! semigroups, the energy metric on states, resistance distance on classical
//! networks, Schur-complement quotients, Hodge–Dirac operators and the
//! standard-deviation example. Almost every construction ships with a checker
//! that turns the corresponding identity or inequality into a numeric
//! [`Check`].
//!
//! Everything works in `f64` / [`C64`] on dense `nalgebra` matrices.

pub mod algebra;
pub mod cdc;
pub mod dirac;
pub mod energy;
mod error;
pub mod linalg;
pub mod metric;
pub mod network;
pub mod quotient;
mod report;
pub mod sampling;
pub mod stddev;

pub use algebra::{
    conditional_expectation, functional_calculus, ring_op, Algebra, Element, PiecewiseLinear,
    RingOp, SuperOperator,
};
pub use cdc::{CdCForm, CdCReport};
pub use energy::{EnergyForm, Laplacian};
pub use error::{Error, Result};
pub use metric::State;
pub use network::ResistanceNetwork;
pub use report::{Check, Witness};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense real matrix.
pub type RMatrix = nalgebra::DMatrix<f64>;

/// Numerical thresholds shared by every checker.
///
/// `pos` is the relative slack for positivity and inequality tests, `rank`
/// the relative cutoff below which an eigenvalue counts as zero, and `eq` the
/// tolerance for identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub pos: f64,
    pub rank: f64,
    pub eq: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pos: 1e-9,
            rank: 1e-10,
            eq: 1e-9,
        }
    }
}
