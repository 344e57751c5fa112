use crate::report::Check;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("element is not self-adjoint (defect {0:.3e})")]
    NotSelfAdjoint(f64),
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("generator does not annihilate the unit (|N(1)| = {0:.3e})")]
    UnitNotAnnihilated(f64),
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("conductance matrix: {0}")]
    Conductance(String),
    #[error("not a unital *-automorphism: {0}")]
    NotAutomorphism(String),
    #[error("not a CdC form: {0}")]
    NotCdc(String),
    #[error("not metrically connected: {0}")]
    Disconnected(String),
    #[error("invalid projection: {0}")]
    InvalidProjection(String),
    #[error("singular block: {0}")]
    Singular(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition `{}` failed (residual {:.3e})", .0.name, .0.residual)]
    Rejected(Box<Check>),
}
