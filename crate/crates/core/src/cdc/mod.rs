//! Carré-du-champ forms `Γ : A × A → A`.
//!
//! A form is stored through its values `Γ(e_i, e_j)` on the canonical basis;
//! `Γ` is conjugate-linear in the first slot and linear in the second. Every
//! form records the scale factor it was built with (1 for `Γ_N` and for
//! commutator sums, 1/2 for `Γ_Δ` and, by default, for networks).

mod builders;
mod checks;
mod commutative;

use std::sync::Arc;

pub use builders::{
    commutator_cdc, double_commutator_generator, gamma_from_generator, group_action_cdc,
    lindblad_generator, spectral_triple_cdc, validate_automorphism,
};
pub use checks::{ccn_check, complete_positivity, is_cdc, CdCReport};
pub use commutative::{conductances_from_cdc, network_cdc};

use crate::algebra::{entries, from_entries};
use crate::{Algebra, Element, Error, Result, C64};

#[derive(Debug, Clone)]
pub struct CdCForm {
    algebra: Arc<Algebra>,
    gram: Vec<Element>,
    scale: f64,
}

impl CdCForm {
    /// `gram[i * d + j] = Γ(e_i, e_j)`.
    pub fn from_gram(algebra: &Arc<Algebra>, gram: Vec<Element>, scale: f64) -> Result<Self> {
        let d = algebra.dim();
        if gram.len() != d * d {
            return Err(Error::Shape(format!(
                "gram needs {} entries, got {}",
                d * d,
                gram.len()
            )));
        }
        if gram.iter().any(|g| g.algebra() != algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(CdCForm {
            algebra: algebra.clone(),
            gram,
            scale,
        })
    }

    /// Tabulates a sesquilinear `f` on basis pairs.
    pub fn from_fn(
        algebra: &Arc<Algebra>,
        scale: f64,
        f: impl Fn(&Element, &Element) -> Element,
    ) -> Self {
        let d = algebra.dim();
        let basis: Vec<Element> = (0..d).map(|i| Element::basis(algebra, i)).collect();
        let mut gram = Vec::with_capacity(d * d);
        for ei in &basis {
            for ej in &basis {
                gram.push(f(ei, ej));
            }
        }
        CdCForm {
            algebra: algebra.clone(),
            gram,
            scale,
        }
    }

    pub fn zero(algebra: &Arc<Algebra>, scale: f64) -> Self {
        let d = algebra.dim();
        CdCForm {
            algebra: algebra.clone(),
            gram: vec![Element::zero(algebra); d * d],
            scale,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `Γ(e_i, e_j)`.
    pub fn entry(&self, i: usize, j: usize) -> &Element {
        &self.gram[i * self.dim() + j]
    }

    pub fn gram(&self) -> &[Element] {
        &self.gram
    }

    /// `Γ(a, b) = Σ ā_i b_j Γ(e_i, e_j)`.
    pub fn eval(&self, a: &Element, b: &Element) -> Element {
        let (ca, cb) = (a.coords(), b.coords());
        let zero = C64::new(0.0, 0.0);
        let mut acc = Element::zero(&self.algebra);
        for (i, za) in ca.iter().enumerate() {
            if *za == zero {
                continue;
            }
            for (j, zb) in cb.iter().enumerate() {
                if *zb == zero {
                    continue;
                }
                acc = &acc + &self.entry(i, j).scale(za.conj() * zb);
            }
        }
        acc
    }

    /// Largest entry difference between the two Gram tables.
    pub fn max_abs_diff(&self, other: &CdCForm) -> f64 {
        self.gram
            .iter()
            .zip(&other.gram)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.gram.iter().map(Element::max_abs).fold(0.0, f64::max)
    }

    /// Sum of two forms; the scale of `self` is kept.
    pub fn add(&self, other: &CdCForm) -> CdCForm {
        CdCForm {
            algebra: self.algebra.clone(),
            gram: self
                .gram
                .iter()
                .zip(&other.gram)
                .map(|(a, b)| a + b)
                .collect(),
            scale: self.scale,
        }
    }

    pub fn scaled(&self, factor: f64) -> CdCForm {
        CdCForm {
            algebra: self.algebra.clone(),
            gram: self.gram.iter().map(|g| g.scale_re(factor)).collect(),
            scale: self.scale * factor,
        }
    }

    /// `Γ_n(A, B)_{jk} = Σ_p Γ(a_pj, b_pk)` on `M_n(A)` for arbitrary elements.
    pub fn eval_amplified(&self, x: &Element, y: &Element, n: usize) -> Element {
        let (ex, ey) = (entries(x, &self.algebra, n), entries(y, &self.algebra, n));
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                let mut acc = Element::zero(&self.algebra);
                for p in 0..n {
                    acc = &acc + &self.eval(&ex[p * n + j], &ey[p * n + k]);
                }
                out.push(acc);
            }
        }
        from_entries(&self.algebra, n, &out)
    }
}

/// The amplified form `Γ_n` on `M_n(A)`.
///
/// A basis element of `M_n(A)` has a single nonzero entry `e_α` at position
/// `(p, j)`, so `Γ_n` of two basis elements is `δ_{pp'} Γ(e_α, e_β)` placed at
/// `(j, k)`.
pub fn amplify_cdc(form: &CdCForm, n: usize) -> CdCForm {
    assert!(n >= 1, "amplification order must be positive");
    if n == 1 {
        return form.clone();
    }
    let base = &form.algebra;
    let big = base.amplify(n);
    let dd = big.dim();
    let label = |idx: usize| {
        let (b, r, c) = big.basis_label(idx);
        let m = base.blocks()[b];
        (r / m, c / m, base.basis_index(b, r % m, c % m))
    };
    let mut gram = Vec::with_capacity(dd * dd);
    for i in 0..dd {
        let (p, j, alpha) = label(i);
        for l in 0..dd {
            let (q, k, beta) = label(l);
            if p != q {
                gram.push(Element::zero(&big));
                continue;
            }
            let mut ents = vec![Element::zero(base); n * n];
            ents[j * n + k] = form.entry(alpha, beta).clone();
            gram.push(from_entries(base, n, &ents));
        }
    }
    CdCForm {
        algebra: big,
        gram,
        scale: form.scale,
    }
}

/// `max |D(e_i e_j) − D(e_i) e_j − e_i D(e_j)|` over basis pairs; zero exactly
/// when `D` is a derivation.
pub fn derivation_defect(dmap: &crate::SuperOperator) -> f64 {
    let alg = dmap.algebra();
    let d = alg.dim();
    let basis: Vec<Element> = (0..d).map(|i| Element::basis(alg, i)).collect();
    let images: Vec<Element> = basis.iter().map(|e| dmap.apply(e)).collect();
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let lhs = match alg.basis_product(i, j) {
                Some(k) => images[k].clone(),
                None => Element::zero(alg),
            };
            let rhs = &(&images[i] * &basis[j]) + &(&basis[i] * &images[j]);
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Sampler;

    #[test]
    fn amplification_matches_entry_formula() {
        let a = Algebra::matrix(2);
        let v = Element::unit(&a, 0, 0, 1);
        let g = commutator_cdc(&[v]).unwrap();
        let g2 = amplify_cdc(&g, 2);
        let mut s = Sampler::new(21);
        let big = a.amplify(2);
        let (x, y) = (s.element(&big), s.element(&big));
        assert!(g2.eval(&x, &y).max_abs_diff(&g.eval_amplified(&x, &y, 2)) < 1e-12);
        assert!(amplify_cdc(&g, 1).max_abs_diff(&g) == 0.0);
        let one = Element::identity(&big);
        assert!(g2.eval(&one, &x).max_abs() < 1e-12);
    }

    #[test]
    fn eval_is_sesquilinear() {
        let a = Algebra::new(vec![2, 1], vec![1.0, 2.0]).unwrap();
        let mut s = Sampler::new(22);
        let v = s.element(&a);
        let g = commutator_cdc(&[v]).unwrap();
        let (x, y) = (s.element(&a), s.element(&a));
        let z = s.complex();
        let lhs = g.eval(&x.scale(z), &y);
        let rhs = g.eval(&x, &y).scale(z.conj());
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }
}
