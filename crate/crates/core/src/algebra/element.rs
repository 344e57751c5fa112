use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::DVector;

use super::Algebra;
use crate::linalg::{hermitian_eigenvalues, max_abs, spectral_norm};
use crate::{CMatrix, Error, Result, C64};

/// A block-diagonal element of an [`Algebra`].
#[derive(Debug, Clone)]
pub struct Element {
    algebra: Arc<Algebra>,
    blocks: Vec<CMatrix>,
}

/// Operations exposed through [`ring_op`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RingOp {
    Add,
    Mul,
    /// Ignores the second operand.
    Adjoint,
    /// Ignores the second operand.
    Scale(C64),
}

/// Checked ring arithmetic; mismatched algebras are an input error.
pub fn ring_op(a: &Element, b: &Element, op: RingOp) -> Result<Element> {
    match op {
        RingOp::Add => a.try_add(b),
        RingOp::Mul => a.try_mul(b),
        RingOp::Adjoint => Ok(a.adjoint()),
        RingOp::Scale(z) => Ok(a.scale(z)),
    }
}

/// Orthogonal projection of `full ∈ M_n` onto the block-diagonal copy of
/// `algebra`, for the normalized trace on `M_n`. It keeps the diagonal blocks.
pub fn conditional_expectation(full: &CMatrix, algebra: &Arc<Algebra>) -> Result<Element> {
    let n = algebra.hilbert_dim();
    if full.nrows() != n || full.ncols() != n {
        return Err(Error::Shape(format!(
            "expected a {n}x{n} matrix, got {}x{}",
            full.nrows(),
            full.ncols()
        )));
    }
    let blocks = (0..algebra.block_count())
        .map(|b| {
            let (o, m) = (algebra.block_row_offset(b), algebra.blocks()[b]);
            full.view((o, o), (m, m)).into_owned()
        })
        .collect();
    Ok(Element {
        algebra: algebra.clone(),
        blocks,
    })
}

fn same(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Element {
    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        let blocks = algebra
            .blocks()
            .iter()
            .map(|&n| CMatrix::zeros(n, n))
            .collect();
        Element {
            algebra: algebra.clone(),
            blocks,
        }
    }

    pub fn identity(algebra: &Arc<Algebra>) -> Self {
        let blocks = algebra
            .blocks()
            .iter()
            .map(|&n| CMatrix::identity(n, n))
            .collect();
        Element {
            algebra: algebra.clone(),
            blocks,
        }
    }

    pub fn scalar(algebra: &Arc<Algebra>, z: C64) -> Self {
        Element::identity(algebra).scale(z)
    }

    /// The canonical basis element (matrix unit) with index `idx`.
    pub fn basis(algebra: &Arc<Algebra>, idx: usize) -> Self {
        let mut e = Element::zero(algebra);
        let (b, r, c) = algebra.basis_label(idx);
        e.blocks[b][(r, c)] = C64::new(1.0, 0.0);
        e
    }

    /// Matrix unit `e^{(block)}_{row,col}`.
    pub fn unit(algebra: &Arc<Algebra>, block: usize, row: usize, col: usize) -> Self {
        Element::basis(algebra, algebra.basis_index(block, row, col))
    }

    pub fn from_blocks(algebra: &Arc<Algebra>, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != algebra.block_count() {
            return Err(Error::Shape(format!(
                "expected {} blocks, got {}",
                algebra.block_count(),
                blocks.len()
            )));
        }
        for (i, (m, &n)) in blocks.iter().zip(algebra.blocks()).enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::Shape(format!(
                    "block {i} should be {n}x{n}, got {}x{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(Element {
            algebra: algebra.clone(),
            blocks,
        })
    }

    /// Element with the given coefficients on the canonical basis.
    pub fn from_coords(algebra: &Arc<Algebra>, coords: &[C64]) -> Self {
        assert_eq!(coords.len(), algebra.dim(), "coordinate length");
        let mut e = Element::zero(algebra);
        for (idx, &z) in coords.iter().enumerate() {
            let (b, r, c) = algebra.basis_label(idx);
            e.blocks[b][(r, c)] = z;
        }
        e
    }

    /// Element with the given coordinates in the orthonormal basis `e/√w`.
    pub fn from_onb_coords(algebra: &Arc<Algebra>, coords: &[C64]) -> Self {
        let canon: Vec<C64> = coords
            .iter()
            .enumerate()
            .map(|(i, &z)| z / algebra.basis_weight(i).sqrt())
            .collect();
        Element::from_coords(algebra, &canon)
    }

    /// Real function on the points of a commutative algebra.
    pub fn from_values(algebra: &Arc<Algebra>, values: &[f64]) -> Result<Self> {
        if !algebra.is_commutative() {
            return Err(Error::NotCommutative);
        }
        if values.len() != algebra.dim() {
            return Err(Error::Shape(format!(
                "expected {} values, got {}",
                algebra.dim(),
                values.len()
            )));
        }
        let c: Vec<C64> = values.iter().map(|&v| C64::new(v, 0.0)).collect();
        Ok(Element::from_coords(algebra, &c))
    }

    /// Block-diagonal element `⊕ λ_i 1_{n_i}`.
    pub fn central(algebra: &Arc<Algebra>, per_block: &[C64]) -> Self {
        assert_eq!(
            per_block.len(),
            algebra.block_count(),
            "one scalar per block"
        );
        let blocks = algebra
            .blocks()
            .iter()
            .zip(per_block)
            .map(|(&n, &z)| CMatrix::identity(n, n) * z)
            .collect();
        Element {
            algebra: algebra.clone(),
            blocks,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    /// Canonical-basis coefficients.
    pub fn coords(&self) -> Vec<C64> {
        self.blocks
            .iter()
            .flat_map(|m| {
                let n = m.nrows();
                (0..n * n).map(move |k| m[(k / n, k % n)])
            })
            .collect()
    }

    /// Coordinates in the orthonormal basis of `L²(A, τ)`.
    pub fn onb_coords(&self) -> DVector<C64> {
        let a = &self.algebra;
        let c = self.coords();
        DVector::from_iterator(
            c.len(),
            c.iter()
                .enumerate()
                .map(|(i, &z)| z * a.basis_weight(i).sqrt()),
        )
    }

    /// Values of a function on a commutative algebra.
    pub fn values(&self) -> Vec<C64> {
        self.blocks.iter().map(|m| m[(0, 0)]).collect()
    }

    /// Real parts of [`values`](Self::values).
    pub fn real_values(&self) -> Vec<f64> {
        self.values().iter().map(|z| z.re).collect()
    }

    /// Block-diagonal matrix of size `Σ n_i`.
    pub fn embed(&self) -> CMatrix {
        let n = self.algebra.hilbert_dim();
        let mut m = CMatrix::zeros(n, n);
        for (b, blk) in self.blocks.iter().enumerate() {
            let o = self.algebra.block_row_offset(b);
            m.view_mut((o, o), blk.shape()).copy_from(blk);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        self.map(|m| m.adjoint())
    }

    pub fn scale(&self, z: C64) -> Self {
        self.map(|m| m * z)
    }

    pub fn scale_re(&self, x: f64) -> Self {
        self.map(|m| m.scale(x))
    }

    fn map(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        Element {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Element, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<Self> {
        if !same(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Element {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &Element) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Element) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn try_mul(&self, other: &Element) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Element) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn same_algebra(&self, other: &Element) -> bool {
        same(&self.algebra, &other.algebra)
    }

    /// `τ(a) = Σ w_i tr(a_i)`.
    pub fn tau(&self) -> C64 {
        self.blocks
            .iter()
            .zip(self.algebra.weights())
            .map(|(m, &w)| m.trace() * w)
            .sum()
    }

    /// `⟨a, b⟩_τ = τ(a* b)`.
    pub fn tau_inner(&self, other: &Element) -> Result<C64> {
        if !self.same_algebra(other) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .zip(self.algebra.weights())
            .map(|((a, b), &w)| a.dotc(b) * w)
            .sum())
    }

    /// Operator (spectral) norm: the largest singular value over all blocks.
    pub fn operator_norm(&self) -> f64 {
        self.blocks.iter().map(spectral_norm).fold(0.0, f64::max)
    }

    /// `‖a‖_τ = τ(a*a)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.blocks
            .iter()
            .zip(self.algebra.weights())
            .map(|(m, &w)| w * m.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entry modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Element) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| max_abs(&(a - b)))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(max_abs).fold(0.0, f64::max)
    }

    pub fn self_adjoint_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.self_adjoint_defect() <= tol * (1.0 + self.operator_norm())
    }

    /// Sorted eigenvalues of the Hermitian part, over all blocks.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.blocks.iter().flat_map(hermitian_eigenvalues).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// `a ≥ 0` up to the relative tolerance `tol (1 + ‖a‖)`.
    pub fn is_positive(&self, tol: f64) -> bool {
        let slack = tol * (1.0 + self.operator_norm());
        self.self_adjoint_defect() <= slack && self.spectrum()[0] >= -slack
    }

    /// Central support: the sum of the block units on which `self` is nonzero.
    pub fn central_support(&self, tol: f64) -> Element {
        let flags: Vec<C64> = self
            .blocks
            .iter()
            .map(|m| C64::new(if max_abs(m) > tol { 1.0 } else { 0.0 }, 0.0))
            .collect();
        Element::central(&self.algebra, &flags)
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("operands share an algebra")
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.try_sub(rhs).expect("operands share an algebra")
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.try_mul(rhs).expect("operands share an algebra")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale_re(-1.0)
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Mul for Element {
    type Output = Element;
    fn mul(self, rhs: Element) -> Element {
        &self * &rhs
    }
}
