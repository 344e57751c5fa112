//! Finite-dimensional C*-algebras `⊕ M_{n_i}` with a faithful trace
//! `τ = Σ w_i tr_i`.
//!
//! The canonical basis is the family of matrix units `e^{(i)}_{jk}`,
//! enumerated block-major and then row-major: block `i` occupies indices
//! `offset_i .. offset_i + n_i²` and `e^{(i)}_{jk}` sits at
//! `offset_i + j n_i + k`. The orthonormal basis of `L²(A, τ)` is
//! `e^{(i)}_{jk} / √w_i`; superoperator matrices are always written in it.

mod amplify;
mod calculus;
mod element;
mod superop;

use std::sync::Arc;

pub use amplify::{amplified_direct_sum, entries, from_entries, scalar_sandwich};
pub use calculus::{functional_calculus, PiecewiseLinear};
pub use element::{conditional_expectation, ring_op, Element, RingOp};
pub use superop::SuperOperator;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Algebra {
    blocks: Vec<usize>,
    weights: Vec<f64>,
    offsets: Vec<usize>,
    row_offsets: Vec<usize>,
    dim: usize,
}

impl Algebra {
    /// `⊕ M_{blocks[i]}` with trace weights `weights[i]`.
    pub fn new(blocks: Vec<usize>, weights: Vec<f64>) -> Result<Arc<Algebra>> {
        if blocks.is_empty() {
            return Err(Error::InvalidAlgebra("no blocks given".into()));
        }
        if blocks.len() != weights.len() {
            return Err(Error::InvalidAlgebra(format!(
                "blocks has {} entries but trace_weights has {}",
                blocks.len(),
                weights.len()
            )));
        }
        if let Some(i) = blocks.iter().position(|&n| n == 0) {
            return Err(Error::InvalidAlgebra(format!("block {i} has size 0")));
        }
        if let Some(i) = weights.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidAlgebra(format!(
                "trace weight {i} is {}, weights must be positive",
                weights[i]
            )));
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut row_offsets = Vec::with_capacity(blocks.len());
        let (mut dim, mut rows) = (0, 0);
        for &n in &blocks {
            offsets.push(dim);
            row_offsets.push(rows);
            dim += n * n;
            rows += n;
        }
        Ok(Arc::new(Algebra {
            blocks,
            weights,
            offsets,
            row_offsets,
            dim,
        }))
    }

    /// `M_n` with the unnormalized trace.
    pub fn matrix(n: usize) -> Arc<Algebra> {
        Algebra::new(vec![n], vec![1.0]).expect("valid block")
    }

    /// `C(X)` for `|X| = n` with counting measure.
    pub fn commutative(n: usize) -> Arc<Algebra> {
        Algebra::new(vec![1; n], vec![1.0; n]).expect("valid blocks")
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Complex dimension `Σ n_i²`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Size `Σ n_i` of the block-diagonal representation.
    pub fn hilbert_dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// `τ(1) = Σ w_i n_i`.
    pub fn tau_unit(&self) -> f64 {
        self.blocks
            .iter()
            .zip(&self.weights)
            .map(|(&n, &w)| n as f64 * w)
            .sum()
    }

    pub fn is_commutative(&self) -> bool {
        self.blocks.iter().all(|&n| n == 1)
    }

    pub fn block_offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    /// Row offset of `block` inside the block-diagonal representation.
    pub fn block_row_offset(&self, block: usize) -> usize {
        self.row_offsets[block]
    }

    pub fn basis_index(&self, block: usize, row: usize, col: usize) -> usize {
        self.offsets[block] + row * self.blocks[block] + col
    }

    /// Inverse of [`basis_index`](Self::basis_index).
    pub fn basis_label(&self, idx: usize) -> (usize, usize, usize) {
        assert!(idx < self.dim, "basis index {idx} out of range");
        let block = match self.offsets.binary_search(&idx) {
            Ok(b) => b,
            Err(b) => b - 1,
        };
        let n = self.blocks[block];
        let local = idx - self.offsets[block];
        (block, local / n, local % n)
    }

    /// Index of `e_idx*`.
    pub fn basis_adjoint(&self, idx: usize) -> usize {
        let (b, r, c) = self.basis_label(idx);
        self.basis_index(b, c, r)
    }

    /// Matrix units multiply to another matrix unit or to zero.
    pub fn basis_product(&self, i: usize, j: usize) -> Option<usize> {
        let (b1, r1, c1) = self.basis_label(i);
        let (b2, r2, c2) = self.basis_label(j);
        (b1 == b2 && c1 == r2).then(|| self.basis_index(b1, r1, c2))
    }

    /// Basis indices of the diagonal matrix units, whose sum is the unit.
    pub fn unit_indices(&self) -> Vec<usize> {
        (0..self.block_count())
            .flat_map(|b| (0..self.blocks[b]).map(move |r| (b, r)))
            .map(|(b, r)| self.basis_index(b, r, r))
            .collect()
    }

    /// Weight `w_i` of the block holding basis element `idx`.
    pub fn basis_weight(&self, idx: usize) -> f64 {
        self.weights[self.basis_label(idx).0]
    }

    /// `M_n(A) = ⊕ M_{n n_i}` with the same weights, i.e. trace `tr_n ⊗ τ`.
    pub fn amplify(&self, n: usize) -> Arc<Algebra> {
        assert!(n >= 1, "amplification order must be positive");
        Algebra::new(
            self.blocks.iter().map(|&b| b * n).collect(),
            self.weights.clone(),
        )
        .expect("amplified algebra is valid")
    }

    /// `A ⊕ B`, blocks of `self` first.
    pub fn direct_sum(&self, other: &Algebra) -> Arc<Algebra> {
        let mut blocks = self.blocks.clone();
        blocks.extend_from_slice(&other.blocks);
        let mut weights = self.weights.clone();
        weights.extend_from_slice(&other.weights);
        Algebra::new(blocks, weights).expect("direct sum is valid")
    }

    /// The algebra formed by a subset of the blocks.
    pub fn sub_blocks(&self, keep: &[usize]) -> Result<Arc<Algebra>> {
        if let Some(&b) = keep.iter().find(|&&b| b >= self.block_count()) {
            return Err(Error::InvalidArgument(format!(
                "block index {b} out of range"
            )));
        }
        Algebra::new(
            keep.iter().map(|&b| self.blocks[b]).collect(),
            keep.iter().map(|&b| self.weights[b]).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_and_tau_unit() {
        let a = Algebra::new(vec![2, 1], vec![1.0, 2.0]).unwrap();
        assert_eq!(a.dim(), 5);
        assert_eq!(a.hilbert_dim(), 3);
        assert!((a.tau_unit() - 4.0).abs() < 1e-15);
        assert_eq!(Algebra::matrix(2).dim(), 4);
        assert!(Algebra::commutative(3).is_commutative());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Algebra::new(vec![], vec![]).is_err());
        assert!(Algebra::new(vec![2], vec![1.0, 1.0]).is_err());
        assert!(Algebra::new(vec![0], vec![1.0]).is_err());
        assert!(Algebra::new(vec![1], vec![0.0]).is_err());
        assert!(Algebra::new(vec![1], vec![-2.0]).is_err());
    }

    #[test]
    fn basis_labels_round_trip() {
        let a = Algebra::new(vec![2, 1, 3], vec![1.0, 1.0, 1.0]).unwrap();
        for idx in 0..a.dim() {
            let (b, r, c) = a.basis_label(idx);
            assert_eq!(a.basis_index(b, r, c), idx);
            assert_eq!(a.basis_adjoint(a.basis_adjoint(idx)), idx);
        }
        assert_eq!(a.basis_label(4), (1, 0, 0));
        // e12 e21 = e11 in the first block
        assert_eq!(a.basis_product(1, 2), Some(0));
        assert_eq!(a.basis_product(1, 1), None);
        assert_eq!(a.basis_product(0, 4), None);
    }
}
