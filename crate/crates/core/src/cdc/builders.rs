use std::sync::Arc;

use super::CdCForm;
use crate::linalg::hermitian_defect;
use crate::{conditional_expectation, Algebra, CMatrix, Element, Error, Result, SuperOperator};

/// `Γ_N(a, b) = scale · (N(a*) b − N(a* b) + a* N(b))`.
pub fn gamma_from_generator(n: &SuperOperator, scale: f64, tol: f64) -> Result<CdCForm> {
    let alg = n.algebra();
    let n1 = n.apply(&Element::identity(alg)).max_abs();
    if n1 > tol * (1.0 + n.max_abs()) {
        return Err(Error::UnitNotAnnihilated(n1));
    }
    let d = alg.dim();
    let basis: Vec<Element> = (0..d).map(|i| Element::basis(alg, i)).collect();
    let images: Vec<Element> = basis.iter().map(|e| n.apply(e)).collect();
    let zero = Element::zero(alg);
    let mut gram = Vec::with_capacity(d * d);
    for i in 0..d {
        let is = alg.basis_adjoint(i);
        for j in 0..d {
            let middle = alg.basis_product(is, j).map_or(&zero, |k| &images[k]);
            let g = &(&(&images[is] * &basis[j]) - middle) + &(&basis[is] * &images[j]);
            gram.push(g.scale_re(scale));
        }
    }
    CdCForm::from_gram(alg, gram, scale)
}

/// `Γ(a, b) = Σ_j [v_j, a]* [v_j, b]`, scale 1.
pub fn commutator_cdc(vs: &[Element]) -> Result<CdCForm> {
    let first = vs
        .first()
        .ok_or_else(|| Error::InvalidArgument("commutator form needs at least one v".into()))?;
    let alg = first.algebra().clone();
    if vs.iter().any(|v| !v.same_algebra(first)) {
        return Err(Error::AlgebraMismatch);
    }
    let d = alg.dim();
    let comms: Vec<Vec<Element>> = vs
        .iter()
        .map(|v| {
            (0..d)
                .map(|i| v.commutator(&Element::basis(&alg, i)))
                .collect()
        })
        .collect();
    let mut gram = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = Element::zero(&alg);
            for c in &comms {
                acc = &acc + &(&c[i].adjoint() * &c[j]);
            }
            gram.push(acc);
        }
    }
    CdCForm::from_gram(&alg, gram, 1.0)
}

/// `N_v(a) = −v* a v + ½ (v* v a + a v* v)`, whose `Γ_N` is `[v,a]*[v,b]`.
pub fn lindblad_generator(v: &Element) -> SuperOperator {
    let vs = v.adjoint();
    let vsv = &vs * v;
    SuperOperator::from_fn(v.algebra(), |a| {
        let half = (&(&vsv * a) + &(a * &vsv)).scale_re(0.5);
        &half - &(&(&vs * a) * v)
    })
}

/// `N(a) = [v*, [v, a]]`, whose `Γ_N` is `Γ_v + Γ_{v*}`.
pub fn double_commutator_generator(v: &Element) -> SuperOperator {
    let vs = v.adjoint();
    SuperOperator::from_fn(v.algebra(), |a| vs.commutator(&v.commutator(a)))
}

/// Checks that `alpha` is a unital *-automorphism on basis elements.
pub fn validate_automorphism(alpha: &SuperOperator, tol: f64) -> Result<()> {
    let alg = alpha.algebra();
    let one = Element::identity(alg);
    let scale = 1.0 + alpha.max_abs();
    if alpha.apply(&one).max_abs_diff(&one) > tol * scale {
        return Err(Error::NotAutomorphism("α(1) ≠ 1".into()));
    }
    let d = alg.dim();
    let images: Vec<Element> = (0..d)
        .map(|i| alpha.apply(&Element::basis(alg, i)))
        .collect();
    for i in 0..d {
        if images[alg.basis_adjoint(i)].max_abs_diff(&images[i].adjoint()) > tol * scale {
            return Err(Error::NotAutomorphism(format!("α(e{i}*) ≠ α(e{i})*")));
        }
        for j in 0..d {
            let lhs = match alg.basis_product(i, j) {
                Some(k) => images[k].clone(),
                None => Element::zero(alg),
            };
            if lhs.max_abs_diff(&(&images[i] * &images[j])) > tol * scale * scale {
                return Err(Error::NotAutomorphism(format!(
                    "α(e{i} e{j}) ≠ α(e{i}) α(e{j})"
                )));
            }
        }
    }
    let smin = alpha
        .matrix()
        .clone()
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if smin <= tol {
        return Err(Error::NotAutomorphism("α is not invertible".into()));
    }
    Ok(())
}

/// `Γ(a, b) = Σ_x c_x (α_x(a) − a)* (α_x(b) − b)`, scale 1.
///
/// Automorphisms equal to the identity contribute nothing whatever their weight.
pub fn group_action_cdc(autos: &[SuperOperator], weights: &[f64], tol: f64) -> Result<CdCForm> {
    let first = autos.first().ok_or_else(|| {
        Error::InvalidArgument("group action needs at least one automorphism".into())
    })?;
    let alg = first.algebra().clone();
    if autos.len() != weights.len() {
        return Err(Error::InvalidArgument(format!(
            "{} automorphisms but {} weights",
            autos.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| w.is_nan() || **w < 0.0) {
        return Err(Error::InvalidArgument(format!("negative weight {w}")));
    }
    for alpha in autos {
        if alpha.algebra() != &alg {
            return Err(Error::AlgebraMismatch);
        }
        validate_automorphism(alpha, tol)?;
    }
    let id = SuperOperator::identity(&alg);
    let d = alg.dim();
    let diffs: Vec<(f64, Vec<Element>)> = autos
        .iter()
        .zip(weights)
        .filter(|(alpha, &w)| w > 0.0 && alpha.max_abs_diff(&id) > tol)
        .map(|(alpha, &w)| {
            let col = (0..d)
                .map(|i| {
                    let e = Element::basis(&alg, i);
                    &alpha.apply(&e) - &e
                })
                .collect();
            (w, col)
        })
        .collect();
    let mut gram = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = Element::zero(&alg);
            for (w, col) in &diffs {
                acc = &acc + &(&col[i].adjoint() * &col[j]).scale_re(*w);
            }
            gram.push(acc);
        }
    }
    CdCForm::from_gram(&alg, gram, 1.0)
}

/// `Γ(a, b) = E([D, a]* [D, b])` for the block-diagonal embedding of `algebra`
/// in `M_n`, `n = Σ n_i`, and the trace conditional expectation `E`. Scale 1.
pub fn spectral_triple_cdc(dirac: &CMatrix, algebra: &Arc<Algebra>, tol: f64) -> Result<CdCForm> {
    let n = algebra.hilbert_dim();
    if dirac.nrows() != n || dirac.ncols() != n {
        return Err(Error::Shape(format!(
            "D must be {n}x{n}, got {}x{}",
            dirac.nrows(),
            dirac.ncols()
        )));
    }
    let defect = hermitian_defect(dirac);
    if defect > tol * (1.0 + crate::linalg::max_abs(dirac)) {
        return Err(Error::NotHermitian(defect));
    }
    let d = algebra.dim();
    let comms: Vec<CMatrix> = (0..d)
        .map(|i| {
            let e = Element::basis(algebra, i).embed();
            dirac * &e - &e * dirac
        })
        .collect();
    let mut gram = Vec::with_capacity(d * d);
    for ci in &comms {
        for cj in &comms {
            gram.push(conditional_expectation(&(ci.adjoint() * cj), algebra)?);
        }
    }
    CdCForm::from_gram(algebra, gram, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdc::{derivation_defect, is_cdc};
    use crate::sampling::Sampler;
    use crate::{Tolerances, C64};

    fn m2() -> Arc<Algebra> {
        Algebra::matrix(2)
    }

    #[test]
    fn zero_generator_gives_zero_form() {
        let a = m2();
        let g = gamma_from_generator(&SuperOperator::zero(&a), 1.0, 1e-9).unwrap();
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn generator_must_kill_the_unit() {
        let a = m2();
        let err = gamma_from_generator(&SuperOperator::identity(&a), 1.0, 1e-9);
        assert!(matches!(err, Err(Error::UnitNotAnnihilated(_))));
    }

    #[test]
    fn double_commutator_generator_on_e11() {
        let a = m2();
        let v = Element::unit(&a, 0, 0, 1);
        let g = gamma_from_generator(&double_commutator_generator(&v), 1.0, 1e-9).unwrap();
        let e11 = Element::unit(&a, 0, 0, 0);
        assert!(g.eval(&e11, &e11).max_abs_diff(&Element::identity(&a)) < 1e-12);
        // it splits as Γ_v + Γ_{v*}
        let split = commutator_cdc(std::slice::from_ref(&v))
            .unwrap()
            .add(&commutator_cdc(&[v.adjoint()]).unwrap());
        assert!(g.max_abs_diff(&split) < 1e-12);
    }

    #[test]
    fn sharp_of_double_commutator_generator() {
        let a = m2();
        let v = Element::unit(&a, 0, 0, 1);
        let n = double_commutator_generator(&v);
        let n_star = double_commutator_generator(&v.adjoint());
        assert!(n.sharp().max_abs_diff(&n_star) < 1e-12);
    }

    #[test]
    fn commutator_form_examples() {
        let a = m2();
        let central = Element::identity(&a).scale_re(3.0);
        assert!(commutator_cdc(&[central]).unwrap().max_abs() < 1e-15);
        let v = Element::unit(&a, 0, 0, 1);
        let g = commutator_cdc(&[v]).unwrap();
        let e11 = Element::unit(&a, 0, 0, 0);
        assert!(g.eval(&e11, &e11).max_abs_diff(&Element::unit(&a, 0, 1, 1)) < 1e-15);
        let mut s = Sampler::new(1);
        let x = s.element(&a);
        assert!(g.eval(&Element::identity(&a), &x).max_abs() < 1e-15);
        assert!(commutator_cdc(&[]).is_err());
    }

    #[test]
    fn lindblad_generator_reproduces_commutator_form() {
        let a = Algebra::new(vec![2, 1], vec![1.0, 2.0]).unwrap();
        let mut s = Sampler::new(2);
        let v = s.element(&a);
        let g = gamma_from_generator(&lindblad_generator(&v), 1.0, 1e-9).unwrap();
        assert!(g.max_abs_diff(&commutator_cdc(&[v]).unwrap()) < 1e-10);
    }

    #[test]
    fn inner_derivations_do_not_change_gamma() {
        let a = Algebra::matrix(3);
        let mut s = Sampler::new(3);
        let n = lindblad_generator(&s.element(&a));
        let w = s.element(&a);
        let delta = SuperOperator::from_fn(&a, |x| w.commutator(x));
        let g1 = gamma_from_generator(&n, 1.0, 1e-9).unwrap();
        let g2 = gamma_from_generator(&n.add(&delta), 1.0, 1e-9).unwrap();
        assert!(g1.max_abs_diff(&g2) < 1e-10);
    }

    #[test]
    fn symmetry_iff_n_minus_sharp_is_derivation() {
        let a = m2();
        let mut s = Sampler::new(4);
        let tol = Tolerances::default();
        // symmetric case: Lindblad generator plus an inner derivation
        let w = s.element(&a);
        let n = lindblad_generator(&s.element(&a))
            .add(&SuperOperator::from_fn(&a, |x| w.commutator(x)));
        let g = gamma_from_generator(&n, 1.0, 1e-9).unwrap();
        assert!(is_cdc(&g, &tol).symmetric.passed);
        assert!(derivation_defect(&n.sub(&n.sharp())) < 1e-10);
        // generic N with N(1) = 0
        let m = SuperOperator::from_matrix(&a, s.matrix(4, 4)).unwrap();
        let m1 = m.apply(&Element::identity(&a));
        let tau1 = a.tau_unit();
        let n = SuperOperator::from_fn(&a, |x| {
            &m.apply(x) - &m1.scale(x.tau() / C64::new(tau1, 0.0))
        });
        let g = gamma_from_generator(&n, 1.0, 1e-9).unwrap();
        let rep = is_cdc(&g, &tol);
        assert!(!rep.symmetric.passed);
        assert!(rep.symmetric.witness.is_some());
        assert!(derivation_defect(&n.sub(&n.sharp())) > 1e-3);
    }

    #[test]
    fn group_action_examples() {
        let c2 = Algebra::commutative(2);
        let id = SuperOperator::identity(&c2);
        assert!(
            group_action_cdc(std::slice::from_ref(&id), &[5.0], 1e-9)
                .unwrap()
                .max_abs()
                == 0.0
        );
        let swap = SuperOperator::from_fn(&c2, |f| {
            let v = f.values();
            Element::from_coords(&c2, &[v[1], v[0]])
        });
        let g = group_action_cdc(&[id, swap], &[0.0, 1.0], 1e-9).unwrap();
        let f = Element::from_values(&c2, &[1.0, 0.0]).unwrap();
        assert_eq!(g.eval(&f, &f).real_values(), vec![1.0, 1.0]);
        let mut s = Sampler::new(5);
        assert!(g.eval(&Element::identity(&c2), &s.element(&c2)).max_abs() < 1e-15);
    }

    #[test]
    fn rejects_non_automorphisms() {
        let a = m2();
        let half = SuperOperator::identity(&a).scale(C64::new(0.5, 0.0));
        assert!(validate_automorphism(&half, 1e-9).is_err());
        let transpose = SuperOperator::from_fn(&a, |x| {
            Element::from_blocks(&a, vec![x.block(0).transpose()]).unwrap()
        });
        assert!(validate_automorphism(&transpose, 1e-9).is_err());
        let mut s = Sampler::new(6);
        let x = s.self_adjoint(&a);
        // eigenvectors of a self-adjoint element form a unitary
        let (_, vecs) = crate::linalg::hermitian_eigen(x.block(0));
        let uu = Element::from_blocks(&a, vec![vecs]).unwrap();
        let inner = SuperOperator::from_fn(&a, |y| &(&uu * y) * &uu.adjoint());
        assert!(validate_automorphism(&inner, 1e-9).is_ok());
    }

    #[test]
    fn spectral_triple_examples() {
        let c2 = Algebra::commutative(2);
        let mut flip = CMatrix::zeros(2, 2);
        flip[(0, 1)] = C64::new(1.0, 0.0);
        flip[(1, 0)] = C64::new(1.0, 0.0);
        let g = spectral_triple_cdc(&flip, &c2, 1e-9).unwrap();
        let f = Element::from_values(&c2, &[0.3, -1.2]).unwrap();
        let want = 1.5f64 * 1.5;
        let got = g.eval(&f, &f).real_values();
        assert!((got[0] - want).abs() < 1e-12 && (got[1] - want).abs() < 1e-12);
        assert!(g.eval(&Element::identity(&c2), &f).max_abs() < 1e-15);
        let central = CMatrix::identity(2, 2) * C64::new(2.0, 0.0);
        assert!(spectral_triple_cdc(&central, &c2, 1e-9).unwrap().max_abs() < 1e-15);
        let mut bad = CMatrix::zeros(2, 2);
        bad[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            spectral_triple_cdc(&bad, &c2, 1e-9),
            Err(Error::NotHermitian(_))
        ));
    }
}
