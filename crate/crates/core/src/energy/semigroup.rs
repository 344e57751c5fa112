use nalgebra::DVector;

use super::Laplacian;
use crate::algebra::conditional_expectation;
use crate::linalg::{hermitian_defect, hermitian_eigenvalues};
use crate::sampling::Sampler;
use crate::{CMatrix, Check, Element, Error, Result, SuperOperator, Tolerances, Witness, C64};

/// `Φ_t = e^{−tΔ}` with its unitality and complete positivity checks.
#[derive(Debug, Clone)]
pub struct HeatMap {
    pub t: f64,
    pub superop: SuperOperator,
    pub unital: Check,
    pub cp: Check,
}

fn spectral_map(lap: &Laplacian, f: impl Fn(f64) -> f64) -> SuperOperator {
    let u = lap.eigenvectors();
    let d: Vec<C64> = lap
        .eigenvalues()
        .iter()
        .map(|&l| C64::new(f(l), 0.0))
        .collect();
    let m = u * CMatrix::from_diagonal(&DVector::from_vec(d)) * u.adjoint();
    SuperOperator::from_matrix(lap.algebra(), m).expect("shape preserved")
}

fn unital_check(name: &str, op: &SuperOperator, tol: f64) -> Check {
    let one = Element::identity(op.algebra());
    Check::within(name, op.apply(&one).max_abs_diff(&one), tol)
}

/// Choi matrix of `Φ ∘ E` where `E` compresses `B(H)` onto the block diagonal.
/// `Φ` is completely positive on `A` iff this matrix is positive.
fn choi_matrix(op: &SuperOperator) -> CMatrix {
    let alg = op.algebra();
    let h = alg.hilbert_dim();
    let mut choi = CMatrix::zeros(h * h, h * h);
    for r in 0..h {
        for s in 0..h {
            let mut unit = CMatrix::zeros(h, h);
            unit[(r, s)] = C64::new(1.0, 0.0);
            let img = op
                .apply(&conditional_expectation(&unit, alg).expect("square"))
                .embed();
            for u in 0..h {
                for v in 0..h {
                    choi[(r * h + u, s * h + v)] = img[(u, v)];
                }
            }
        }
    }
    choi
}

pub fn heat_map(lap: &Laplacian, t: f64, tol: &Tolerances) -> Result<HeatMap> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "heat time must be >= 0, got {t}"
        )));
    }
    let superop = spectral_map(lap, |l| (-t * l).exp());
    let unital = unital_check("heat_unital", &superop, tol.eq);
    let choi = choi_matrix(&superop);
    let min = hermitian_eigenvalues(&choi)[0];
    let residual = (-min).max(hermitian_defect(&choi)).max(0.0);
    let cp = Check::new("heat_cp", residual <= tol.pos, residual);
    Ok(HeatMap {
        t,
        superop,
        unital,
        cp,
    })
}

/// `R_t = (1 + tΔ)^{-1}`.
pub fn resolvent(lap: &Laplacian, t: f64) -> Result<SuperOperator> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "resolvent parameter must be >= 0, got {t}"
        )));
    }
    Ok(spectral_map(lap, |l| 1.0 / (1.0 + t * l)))
}

/// For each `t`, checks that `R_t` and its amplification to `M_2(A)` are
/// unital, positive, and map positives `p` to `R_t(p) ≤ ‖p‖`.
pub fn resolvent_check(
    lap: &Laplacian,
    ts: &[f64],
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &t in ts {
        let r = resolvent(lap, t)?;
        for n in [1usize, 2] {
            let rn = if n == 1 { r.clone() } else { r.amplify(n) };
            let alg = rn.algebra().clone();
            let mut samples: Vec<Element> = alg
                .unit_indices()
                .into_iter()
                .map(|i| Element::basis(&alg, i))
                .collect();
            let mut s = Sampler::new(seed.wrapping_add(n as u64));
            samples.extend((0..10).map(|_| s.positive(&alg)));
            let one = Element::identity(&alg);
            let mut residual = rn.apply(&one).max_abs_diff(&one);
            let mut witness = None;
            for p in &samples {
                let norm = p.operator_norm();
                let img = rn.apply(p);
                let spec = img.spectrum();
                let low = -spec[0];
                let high = spec[spec.len() - 1] - norm;
                let excess = low.max(high).max(img.self_adjoint_defect());
                if excess > residual {
                    residual = excess;
                    if excess > tol.pos * (1.0 + norm) {
                        witness = Some(Witness::Elements(vec![p.clone()]));
                    }
                }
            }
            let name = format!("resolvent_t{t}_n{n}");
            let passed = witness.is_none() && residual <= tol.pos;
            let check = Check::new(name, passed, residual);
            out.push(match witness {
                Some(w) => check.with_witness(w),
                None => check,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdc::{commutator_cdc, network_cdc};
    use crate::energy::{energy_form, laplacian};
    use crate::{Algebra, RMatrix};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn two_point(c: f64) -> Laplacian {
        let a = Algebra::commutative(2);
        let cm = RMatrix::from_row_slice(2, 2, &[0.0, c, c, 0.0]);
        let form = network_cdc(&a, &cm, 0.5, false).unwrap();
        laplacian(&energy_form(&form, &tol(), false).unwrap(), &tol()).unwrap()
    }

    #[test]
    fn two_point_heat_closed_form() {
        let c = 0.7;
        let lap = two_point(c);
        for t in [0.0, 0.1, 1.0, 10.0] {
            let hm = heat_map(&lap, t, &tol()).unwrap();
            let f = Element::from_values(lap.algebra(), &[1.0, 0.0]).unwrap();
            let out = hm.superop.apply(&f).real_values();
            // Δ has eigenvalue 2c on (1, −1).
            let decay = (-2.0 * c * t).exp();
            assert!((out[0] - (0.5 + 0.5 * decay)).abs() < 1e-12);
            assert!((out[1] - (0.5 - 0.5 * decay)).abs() < 1e-12);
            assert!(hm.unital.passed && hm.cp.passed);
        }
    }

    #[test]
    fn heat_is_cp_for_quantum_generator() {
        let a = Algebra::new(vec![2, 1], vec![1.0, 0.5]).unwrap();
        let mut s = Sampler::new(8);
        let (u, v) = (s.element(&a), s.element(&a));
        let form = commutator_cdc(&[u.clone(), u.adjoint(), v.clone(), v.adjoint()]).unwrap();
        let lap = laplacian(&energy_form(&form, &tol(), false).unwrap(), &tol()).unwrap();
        for t in [0.0, 0.1, 1.0, 10.0] {
            let hm = heat_map(&lap, t, &tol()).unwrap();
            assert!(hm.unital.passed, "{t}: {:?}", hm.unital);
            assert!(hm.cp.passed, "{t}: {:?}", hm.cp);
        }
        for c in resolvent_check(&lap, &[0.0, 0.1, 1.0, 10.0], 3, &tol()).unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn resolvent_two_point_closed_form() {
        let c = 1.3;
        let lap = two_point(c);
        let t = 0.4;
        let r = resolvent(&lap, t).unwrap();
        let out = r
            .apply(&Element::from_values(lap.algebra(), &[1.0, 0.0]).unwrap())
            .real_values();
        let k = 1.0 / (1.0 + 2.0 * c * t);
        assert!((out[0] - 0.5 * (1.0 + k)).abs() < 1e-12);
        assert!((out[1] - 0.5 * (1.0 - k)).abs() < 1e-12);
    }

    #[test]
    fn non_cp_map_is_detected() {
        let a = Algebra::matrix(2);
        let transpose = SuperOperator::from_fn(&a, |x| {
            Element::from_blocks(&a, vec![x.block(0).transpose()]).unwrap()
        });
        assert!(hermitian_eigenvalues(&choi_matrix(&transpose))[0] < -0.5);
    }

    #[test]
    fn negative_time_rejected() {
        assert!(heat_map(&two_point(1.0), -1.0, &tol()).is_err());
        assert!(resolvent(&two_point(1.0), -0.5).is_err());
    }

    #[test]
    fn one_sided_heat_flow_is_not_cp() {
        // Γ from {e12} alone is not τ-real, so Δ does not commute with * and
        // the semigroup cannot be positive.
        let a = Algebra::matrix(2);
        let form = commutator_cdc(&[Element::unit(&a, 0, 0, 1)]).unwrap();
        let lap = laplacian(&energy_form(&form, &tol(), false).unwrap(), &tol()).unwrap();
        assert!(heat_map(&lap, 0.0, &tol()).unwrap().cp.passed);
        assert!(!heat_map(&lap, 1.0, &tol()).unwrap().cp.passed);
    }
}
