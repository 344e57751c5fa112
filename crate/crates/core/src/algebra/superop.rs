use std::sync::Arc;

use nalgebra::DVector;

use super::{amplify, Algebra, Element};
use crate::linalg::{hermitian_defect, max_abs};
use crate::{CMatrix, Error, Result, C64};

/// A ℂ-linear map on an algebra, stored as its matrix in the orthonormal basis
/// of `L²(A, τ)`.
#[derive(Debug, Clone)]
pub struct SuperOperator {
    algebra: Arc<Algebra>,
    matrix: CMatrix,
}

impl SuperOperator {
    pub fn from_matrix(algebra: &Arc<Algebra>, matrix: CMatrix) -> Result<Self> {
        let d = algebra.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::Shape(format!(
                "superoperator must be {d}x{d}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(SuperOperator {
            algebra: algebra.clone(),
            matrix,
        })
    }

    /// Tabulates a linear map given element-wise.
    pub fn from_fn(algebra: &Arc<Algebra>, f: impl Fn(&Element) -> Element) -> Self {
        let d = algebra.dim();
        let mut matrix = CMatrix::zeros(d, d);
        for m in 0..d {
            let fm = Element::basis(algebra, m).scale_re(1.0 / algebra.basis_weight(m).sqrt());
            matrix.set_column(m, &f(&fm).onb_coords());
        }
        SuperOperator {
            algebra: algebra.clone(),
            matrix,
        }
    }

    pub fn identity(algebra: &Arc<Algebra>) -> Self {
        let d = algebra.dim();
        SuperOperator {
            algebra: algebra.clone(),
            matrix: CMatrix::identity(d, d),
        }
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        let d = algebra.dim();
        SuperOperator {
            algebra: algebra.clone(),
            matrix: CMatrix::zeros(d, d),
        }
    }

    /// `a ↦ h a`.
    pub fn left_mul(h: &Element) -> Self {
        SuperOperator::from_fn(h.algebra(), |a| h * a)
    }

    /// `a ↦ a h`.
    pub fn right_mul(h: &Element) -> Self {
        SuperOperator::from_fn(h.algebra(), |a| a * h)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, a: &Element) -> Element {
        assert!(
            a.algebra() == &self.algebra,
            "superoperator applied to an element of another algebra"
        );
        let y: DVector<C64> = &self.matrix * a.onb_coords();
        Element::from_onb_coords(&self.algebra, y.as_slice())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SuperOperator) -> Self {
        SuperOperator {
            algebra: self.algebra.clone(),
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn add(&self, other: &SuperOperator) -> Self {
        SuperOperator {
            algebra: self.algebra.clone(),
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn sub(&self, other: &SuperOperator) -> Self {
        SuperOperator {
            algebra: self.algebra.clone(),
            matrix: &self.matrix - &other.matrix,
        }
    }

    pub fn scale(&self, z: C64) -> Self {
        SuperOperator {
            algebra: self.algebra.clone(),
            matrix: &self.matrix * z,
        }
    }

    /// Adjoint for `⟨·,·⟩_τ`.
    pub fn hilbert_adjoint(&self) -> Self {
        SuperOperator {
            algebra: self.algebra.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    /// `N♯(c) = (N(c*))*`, tabulated element by element because the
    /// involution is conjugate-linear.
    pub fn sharp(&self) -> Self {
        SuperOperator::from_fn(&self.algebra, |c| self.apply(&c.adjoint()).adjoint())
    }

    /// `I_n ⊗ N` acting entrywise on `M_n(A)`.
    pub fn amplify(&self, n: usize) -> Self {
        let big = self.algebra.amplify(n);
        SuperOperator::from_fn(&big, |x| {
            let ents: Vec<Element> = amplify::entries(x, &self.algebra, n)
                .iter()
                .map(|e| self.apply(e))
                .collect();
            amplify::from_entries(&self.algebra, n, &ents)
        })
    }

    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.matrix)
    }

    pub fn max_abs_diff(&self, other: &SuperOperator) -> f64 {
        max_abs(&(&self.matrix - &other.matrix))
    }

    /// `max_i ‖N(e_i)‖` entrywise over the canonical basis; a cheap size measure.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }
}
