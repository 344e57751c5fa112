use super::EnergyForm;
use crate::cdc::CdCForm;
use crate::{Check, Element, SuperOperator, Tolerances, Witness, C64};

#[derive(Debug, Clone)]
pub struct RealityReport {
    /// `τ(Γ(a*, b*)) = τ(Γ(b, a))`.
    pub tau_real: Check,
    /// `τ(Γ(ab, c)) = τ(Γ(c*, b*) a*) + τ(b* Γ(a, c))`.
    pub tau_balanced: Check,
}

/// `τ(X e)` for the matrix unit `e = e^{(k)}_{rc}`: `w_k X^{(k)}_{cr}`.
fn tau_times_unit(x: &Element, unit: usize) -> C64 {
    let alg = x.algebra();
    let (k, r, c) = alg.basis_label(unit);
    x.block(k)[(c, r)] * alg.weights()[k]
}

/// τ-reality on basis pairs and τ-balance on basis triples.
pub fn reality_checks(form: &CdCForm, tol: &Tolerances) -> RealityReport {
    let alg = form.algebra();
    let d = alg.dim();
    let taus: Vec<C64> = form.gram().iter().map(Element::tau).collect();
    let t = |i: usize, j: usize| taus[i * d + j];
    let scale = 1.0 + taus.iter().map(|z| z.norm()).fold(0.0, f64::max);

    let mut real = (0.0, 0, 0);
    for i in 0..d {
        for j in 0..d {
            let r = (t(alg.basis_adjoint(i), alg.basis_adjoint(j)) - t(j, i)).norm();
            if r > real.0 {
                real = (r, i, j);
            }
        }
    }
    let tau_real = Check::within("tau_real", real.0, tol.eq * scale)
        .witness_if_failed(|| Witness::Indices(vec![real.1, real.2]));

    let mut bal = (0.0, [0usize; 3]);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let lhs = alg
                    .basis_product(a, b)
                    .map_or(C64::new(0.0, 0.0), |ab| t(ab, c));
                let rhs = tau_times_unit(
                    form.entry(alg.basis_adjoint(c), alg.basis_adjoint(b)),
                    alg.basis_adjoint(a),
                ) + tau_times_unit(form.entry(a, c), alg.basis_adjoint(b));
                let r = (lhs - rhs).norm();
                if r > bal.0 {
                    bal = (r, [a, b, c]);
                }
            }
        }
    }
    let tau_balanced = Check::within("tau_balanced", bal.0, tol.eq * scale)
        .witness_if_failed(|| Witness::Indices(bal.1.to_vec()));
    RealityReport {
        tau_real,
        tau_balanced,
    }
}

/// Reality of an energy form: `E(a*, b*) = E(b, a)` on basis pairs.
pub fn energy_reality(e: &EnergyForm, tol: &Tolerances) -> Check {
    let alg = e.algebra();
    let g = e.gram();
    let d = alg.dim();
    let scale = 1.0 + crate::linalg::max_abs(g);
    let mut worst = (0.0, 0, 0);
    for i in 0..d {
        for j in 0..d {
            let r = (g[(alg.basis_adjoint(i), alg.basis_adjoint(j))] - g[(j, i)]).norm();
            if r > worst.0 {
                worst = (r, i, j);
            }
        }
    }
    Check::within("energy_real", worst.0, tol.eq * scale)
        .witness_if_failed(|| Witness::Indices(vec![worst.1, worst.2]))
}

/// `max_i |Δ(e_i*) − Δ(e_i)*|`: zero exactly when `Δ` commutes with the involution.
pub fn involution_defect(op: &SuperOperator) -> f64 {
    let alg = op.algebra();
    (0..alg.dim())
        .map(|i| {
            let e = Element::basis(alg, i);
            op.apply(&e.adjoint()).max_abs_diff(&op.apply(&e).adjoint())
        })
        .fold(0.0, f64::max)
}

/// `‖Σ_j [v_j*, v_j]‖`; it vanishes exactly when `Σ Γ_{v_j}` is τ-real.
pub fn detailed_balance_residual(vs: &[Element]) -> f64 {
    let Some(first) = vs.first() else {
        return 0.0;
    };
    vs.iter()
        .fold(Element::zero(first.algebra()), |acc, v| {
            &acc + &v.adjoint().commutator(v)
        })
        .operator_norm()
}

/// `‖[v, a*][b, v*] − [a*, v*][v, b]‖`, the defect of the τ-balance identity
/// for a single-commutator form.
pub fn balance_identity_residual(v: &Element, a: &Element, b: &Element) -> f64 {
    let a_s = a.adjoint();
    let v_s = v.adjoint();
    let lhs = &v.commutator(&a_s) * &b.commutator(&v_s);
    let rhs = &a_s.commutator(&v_s) * &v.commutator(b);
    (&lhs - &rhs).operator_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdc::{commutator_cdc, network_cdc};
    use crate::energy::{energy_form, gamma_delta, laplacian};
    use crate::sampling::Sampler;
    use crate::{Algebra, RMatrix};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn single_raising_operator_is_not_tau_real() {
        let a = Algebra::matrix(2);
        let v = Element::unit(&a, 0, 0, 1);
        let rep = reality_checks(&commutator_cdc(std::slice::from_ref(&v)).unwrap(), &tol());
        assert!(!rep.tau_real.passed);
        assert!(!rep.tau_balanced.passed);
        assert!((detailed_balance_residual(std::slice::from_ref(&v)) - 1.0).abs() < 1e-14);
        let both = [v.clone(), v.adjoint()];
        assert!(
            reality_checks(&commutator_cdc(&both).unwrap(), &tol())
                .tau_real
                .passed
        );
        assert!(detailed_balance_residual(&both) < 1e-14);
    }

    #[test]
    fn commutative_forms_are_tau_real_and_balanced() {
        let c = Sampler::new(2).connected_conductances(4, 0.6);
        let a = Algebra::commutative(4);
        let rep = reality_checks(&network_cdc(&a, &c, 0.5, false).unwrap(), &tol());
        assert!(rep.tau_real.passed && rep.tau_balanced.passed);
        let a = Algebra::new(vec![1; 4], vec![1.0, 2.0, 0.5, 3.0]).unwrap();
        let rep = reality_checks(&network_cdc(&a, &c, 0.5, false).unwrap(), &tol());
        assert!(rep.tau_real.passed);
    }

    #[test]
    fn diagonal_phase_counterexample() {
        let a = Algebra::matrix(3);
        let i = C64::new(0.0, 1.0);
        let v = Element::from_coords(&a, &{
            let mut c = vec![C64::new(0.0, 0.0); 9];
            c[0] = C64::new(1.0, 0.0);
            c[4] = i;
            c
        });
        let b = &Element::unit(&a, 0, 1, 0) + &Element::unit(&a, 0, 2, 1);
        let form = commutator_cdc(std::slice::from_ref(&v)).unwrap();
        let rep = reality_checks(&form, &tol());
        assert!(rep.tau_real.passed);
        assert!(!rep.tau_balanced.passed);
        assert!((balance_identity_residual(&v, &b.adjoint(), &b) - 2.0).abs() < 1e-12);
        let lap = laplacian(&energy_form(&form, &tol(), false).unwrap(), &tol()).unwrap();
        assert!(gamma_delta(&lap, &tol()).unwrap().max_abs_diff(&form) > 1e-3);
    }

    #[test]
    fn reality_matches_involution_preservation() {
        let a = Algebra::matrix(2);
        for vs in [
            vec![Element::unit(&a, 0, 0, 1)],
            vec![Element::unit(&a, 0, 0, 1), Element::unit(&a, 0, 1, 0)],
        ] {
            let form = commutator_cdc(&vs).unwrap();
            let real = reality_checks(&form, &tol()).tau_real.passed;
            let e = energy_form(&form, &tol(), false).unwrap();
            let lap = laplacian(&e, &tol()).unwrap();
            assert_eq!(real, involution_defect(lap.superop()) < 1e-10);
            assert_eq!(real, energy_reality(&e, &tol()).passed);
        }
    }

    #[test]
    fn trace_of_gamma_delta_symmetrizes_energy() {
        let a = Algebra::new(vec![2, 1], vec![1.0, 2.0]).unwrap();
        let mut s = Sampler::new(3);
        let form = commutator_cdc(&[s.element(&a)]).unwrap();
        let e = energy_form(&form, &tol(), false).unwrap();
        let gd = gamma_delta(&laplacian(&e, &tol()).unwrap(), &tol()).unwrap();
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let (ei, ej) = (Element::basis(&a, i), Element::basis(&a, j));
                let lhs = gd.eval(&ei, &ej).tau();
                let rhs = (e.eval(&ei, &ej) + e.eval(&ej.adjoint(), &ei.adjoint())) * 0.5;
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn balanced_iff_gamma_equals_gamma_delta_on_networks() {
        let a = Algebra::commutative(5);
        let c = Sampler::new(4).connected_conductances(5, 0.4);
        let c = RMatrix::from_fn(5, 5, |x, y| c[(x, y)]);
        let form = network_cdc(&a, &c, 0.5, false).unwrap();
        let lap = laplacian(&energy_form(&form, &tol(), false).unwrap(), &tol()).unwrap();
        assert!(reality_checks(&form, &tol()).tau_balanced.passed);
        assert!(gamma_delta(&lap, &tol()).unwrap().max_abs_diff(&form) < 1e-9);
    }
}
