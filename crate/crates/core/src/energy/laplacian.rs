use std::sync::Arc;

use super::EnergyForm;
use crate::cdc::{gamma_from_generator, CdCForm};
use crate::linalg::{hermitian_eigen, hermitian_pinv, max_abs};
use crate::{Algebra, CMatrix, Element, Error, Result, SuperOperator, Tolerances};

/// A positive semidefinite superoperator with `Δ(1) = 0`, together with its
/// eigendecomposition in the orthonormal basis.
#[derive(Debug, Clone)]
pub struct Laplacian {
    superop: SuperOperator,
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
    kernel_dim: usize,
    rank_tol: f64,
}

/// The Laplace operator of `E`: its matrix in the orthonormal basis is the
/// matrix of `E` in that basis.
pub fn laplacian(e: &EnergyForm, tol: &Tolerances) -> Result<Laplacian> {
    let op = SuperOperator::from_matrix(e.algebra(), e.onb_matrix())?;
    Laplacian::from_superop(op, tol)
}

/// `Γ_Δ(a, b) = ½ (Δ(a*) b − Δ(a* b) + a* Δ(b))`.
pub fn gamma_delta(lap: &Laplacian, tol: &Tolerances) -> Result<CdCForm> {
    gamma_from_generator(&lap.superop, 0.5, tol.eq)
}

/// True when the kernel of `Δ` is exactly the scalars.
pub fn connectedness(lap: &Laplacian) -> bool {
    lap.kernel_dim == 1
}

impl Laplacian {
    /// Validates a candidate: Hermitian, positive semidefinite and `Δ(1) = 0`.
    pub fn from_superop(op: SuperOperator, tol: &Tolerances) -> Result<Self> {
        let alg = op.algebra().clone();
        let scale = 1.0 + op.max_abs();
        let defect = op.hermitian_defect();
        if defect > tol.eq * scale {
            return Err(Error::NotHermitian(defect));
        }
        let u = op.apply(&Element::identity(&alg)).max_abs();
        if u > tol.eq * scale {
            return Err(Error::UnitNotAnnihilated(u));
        }
        let (eigenvalues, eigenvectors) = hermitian_eigen(op.matrix());
        let top = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if eigenvalues[0] < -tol.pos * top {
            return Err(Error::InvalidArgument(format!(
                "Laplacian has negative eigenvalue {:.3e}",
                eigenvalues[0]
            )));
        }
        let cut = tol.rank * top;
        let kernel_dim = eigenvalues.iter().filter(|&&v| v <= cut).count();
        Ok(Laplacian {
            superop: op,
            eigenvalues,
            eigenvectors,
            kernel_dim,
            rank_tol: tol.rank,
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.superop.algebra()
    }

    pub fn superop(&self) -> &SuperOperator {
        &self.superop
    }

    pub fn matrix(&self) -> &CMatrix {
        self.superop.matrix()
    }

    pub fn apply(&self, a: &Element) -> Element {
        self.superop.apply(a)
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors (columns) in the orthonormal basis of `L²(A, τ)`.
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().unwrap_or(&0.0)
    }

    /// Threshold below which an eigenvalue counts as zero.
    pub fn zero_cut(&self) -> f64 {
        self.rank_tol * self.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Moore–Penrose inverse in the orthonormal basis.
    pub fn pseudo_inverse(&self) -> CMatrix {
        hermitian_pinv(self.matrix(), self.rank_tol)
    }

    /// `max |Δ − Δ'|` entrywise.
    pub fn max_abs_diff(&self, other: &Laplacian) -> f64 {
        max_abs(&(self.matrix() - other.matrix()))
    }
}
