//! Standard deviation as a quotient energy seminorm. For a central weight
//! `p > 0` with `τ(p) = 1` and `μ(a) = τ(pa)`, the algebra is extended to
//! `B = A ⊕ ℂ` with `Δ_B(a, α) = (p(a − α), α − μ(a))`. Dividing out the `ℂ`
//! summand gives `Δ^A(a) = p(a − μ(a))`, whose energy seminorm is
//! `‖a − μ(a)‖_μ`.

use std::sync::Arc;

use crate::cdc::{is_cdc, CdCForm};
use crate::energy::{
    complete_markov_check, energy_form, gamma_delta, laplacian, leibniz_check, leibniz_samples,
    EnergyForm, Laplacian,
};
use crate::linalg::max_abs;
use crate::metric::State;
use crate::quotient::{projection_from_blocks, schur_quotient, split};
use crate::{Algebra, CMatrix, Check, Element, Error, Result, SuperOperator, Tolerances, C64};

#[derive(Debug, Clone)]
pub struct ExtendedAlgebra {
    base: Arc<Algebra>,
    weight: Element,
    mu: State,
    extended: Arc<Algebra>,
    energy: EnergyForm,
    laplacian: Laplacian,
    /// Pairing identity, kernel and `Γ_Δ` formula on basis pairs.
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone)]
pub struct StddevReport {
    pub extension: Vec<Check>,
    /// Schur complement against `a ↦ p(a − μ(a))`.
    pub schur_vs_closed_form: Check,
    /// Laplacian of the independent-copies form against the closed form.
    pub copies_vs_closed_form: Check,
    /// Independent-copies CdC against `Γ_Δ` of the quotient Laplacian.
    pub copies_vs_gamma_delta: Check,
    pub markov: Vec<Check>,
    pub leibniz: Check,
}

impl StddevReport {
    pub fn checks(&self) -> Vec<&Check> {
        let mut out: Vec<&Check> = self.extension.iter().collect();
        out.extend([
            &self.schur_vs_closed_form,
            &self.copies_vs_closed_form,
            &self.copies_vs_gamma_delta,
        ]);
        out.extend(self.markov.iter());
        out.push(&self.leibniz);
        out
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed)
    }
}

/// Per-block values of a central, strictly positive weight with `τ(p) = 1`.
fn weight_scalars(p: &Element, tol: f64) -> Result<Vec<f64>> {
    let alg = p.algebra();
    for i in 0..alg.dim() {
        if p.commutator(&Element::basis(alg, i)).max_abs() > tol {
            return Err(Error::InvalidState(
                "weight element must be central; non-tracial states are not supported".into(),
            ));
        }
    }
    if !p.is_self_adjoint(tol) {
        return Err(Error::NotSelfAdjoint(p.self_adjoint_defect()));
    }
    let vals: Vec<f64> = (0..alg.block_count())
        .map(|b| p.block(b)[(0, 0)].re)
        .collect();
    if vals.iter().any(|&v| v <= tol) {
        return Err(Error::InvalidState(
            "weight element must be strictly positive".into(),
        ));
    }
    let t = p.tau().re;
    if (t - 1.0).abs() > tol {
        return Err(Error::InvalidState(format!(
            "weight element has τ(p) = {t}, expected 1"
        )));
    }
    Ok(vals)
}

/// `B = A ⊕ ℂ` (weight 1 on `ℂ`) with the energy form
/// `E_B((a, α), (b, β)) = μ((a − α)*(b − β))` and its Laplacian.
pub fn extend(base: &Arc<Algebra>, p: &Element, tol: &Tolerances) -> Result<ExtendedAlgebra> {
    if p.algebra().as_ref() != base.as_ref() {
        return Err(Error::AlgebraMismatch);
    }
    weight_scalars(p, 1e-10)?;
    let mu = State::new(p.clone())?;
    let extended = base.direct_sum(&Algebra::commutative(1));
    let da = base.dim();
    let db = extended.dim();
    // `a − α` for each basis element of `B`.
    let diffs: Vec<Element> = (0..db)
        .map(|i| {
            if i < da {
                Element::basis(base, i)
            } else {
                -&Element::identity(base)
            }
        })
        .collect();
    let gram = CMatrix::from_fn(db, db, |i, j| mu.eval(&(&diffs[i].adjoint() * &diffs[j])));
    let energy = EnergyForm::from_gram(&extended, gram, tol)?;
    let lap = laplacian(&energy, tol)?;

    let mut pairing = 0.0f64;
    let mut gamma = 0.0f64;
    let gd = gamma_delta(&lap, tol)?;
    for i in 0..db {
        let ei = Element::basis(&extended, i);
        let lhs_i = lap.apply(&ei);
        for j in 0..db {
            let ej = Element::basis(&extended, j);
            let x = &diffs[i].adjoint() * &diffs[j];
            let want = mu.eval(&x);
            pairing = pairing
                .max((ej.tau_inner(&lhs_i)? - mu.eval(&(&diffs[j].adjoint() * &diffs[i]))).norm());
            let g = gd.entry(i, j).scale_re(2.0);
            let mut blocks: Vec<CMatrix> = (p * &x).blocks().to_vec();
            blocks.push(CMatrix::from_element(1, 1, want));
            let target = Element::from_blocks(&extended, blocks)?;
            gamma = gamma.max(g.max_abs_diff(&target));
        }
    }
    let checks = vec![
        Check::within("pairing_identity", pairing, 1e-10),
        Check::new(
            "extension_connected",
            lap.kernel_dim() == 1,
            lap.kernel_dim() as f64 - 1.0,
        ),
        Check::within("extension_gamma", gamma, 1e-10),
    ];
    Ok(ExtendedAlgebra {
        base: base.clone(),
        weight: p.clone(),
        mu,
        extended,
        energy,
        laplacian: lap,
        checks,
    })
}

impl ExtendedAlgebra {
    pub fn base(&self) -> &Arc<Algebra> {
        &self.base
    }

    pub fn weight(&self) -> &Element {
        &self.weight
    }

    pub fn state(&self) -> &State {
        &self.mu
    }

    pub fn extended(&self) -> &Arc<Algebra> {
        &self.extended
    }

    pub fn energy(&self) -> &EnergyForm {
        &self.energy
    }

    pub fn laplacian(&self) -> &Laplacian {
        &self.laplacian
    }

    /// `(a, α)` as an element of `B`.
    pub fn pair(&self, a: &Element, alpha: C64) -> Result<Element> {
        if a.algebra().as_ref() != self.base.as_ref() {
            return Err(Error::AlgebraMismatch);
        }
        let mut blocks = a.blocks().to_vec();
        blocks.push(CMatrix::from_element(1, 1, alpha));
        Element::from_blocks(&self.extended, blocks)
    }
}

/// `Δ^A` as the Schur complement of the `ℂ` block of `Δ_B`.
pub fn stddev_laplacian(ea: &ExtendedAlgebra, tol: &Tolerances) -> Result<Laplacian> {
    let keep: Vec<usize> = (0..ea.base.block_count()).collect();
    let p = projection_from_blocks(&ea.extended, &keep)?;
    let qd = split(&ea.laplacian, &p, tol)?;
    let lap = schur_quotient(&qd, tol)?;
    // The blocks are identical, so re-home the result on the base algebra.
    Laplacian::from_superop(
        SuperOperator::from_matrix(&ea.base, lap.matrix().clone())?,
        tol,
    )
}

/// `a ↦ p(a − μ(a))`.
pub fn closed_form_laplacian(mu: &State) -> SuperOperator {
    let alg = mu.algebra().clone();
    let p = mu.density().clone();
    SuperOperator::from_fn(&alg, |a| {
        let shifted = a - &Element::scalar(&alg, mu.eval(a));
        &p * &shifted
    })
}

/// `‖a − μ(a)‖_μ = μ((a − μ(a))*(a − μ(a)))^{1/2}`.
pub fn stddev_seminorm(mu: &State, a: &Element) -> f64 {
    let c = a - &Element::scalar(a.algebra(), mu.eval(a));
    mu.eval(&(&c.adjoint() * &c)).re.max(0.0).sqrt()
}

/// `x ⊗ y` terms with coefficients.
type Tensor = Vec<(C64, Element, Element)>;

/// `⟨Σ x ⊗ y, Σ z ⊗ w⟩ = ½ Σ y* τ(x* z) w`.
fn slice_inner(s: &Tensor, t: &Tensor, alg: &Arc<Algebra>) -> Element {
    let mut acc = Element::zero(alg);
    for (c, x, y) in s {
        for (d, z, w) in t {
            let k = c.conj() * d * (&x.adjoint() * z).tau() * 0.5;
            acc = &acc + &(&y.adjoint() * w).scale(k);
        }
    }
    acc
}

/// The CdC of the independent-copies metric on `A ⊗ A`:
/// `∂a = p^{1/2}(a ⊗ 1 − 1 ⊗ a)p^{1/2}` with the slice-map inner product.
pub fn independent_copies_cdc(base: &Arc<Algebra>, p: &Element) -> Result<CdCForm> {
    if p.algebra().as_ref() != base.as_ref() {
        return Err(Error::AlgebraMismatch);
    }
    let vals = weight_scalars(p, 1e-10)?;
    let root = Element::central(
        base,
        &vals
            .iter()
            .map(|v| C64::new(v.sqrt(), 0.0))
            .collect::<Vec<_>>(),
    );
    let one = C64::new(1.0, 0.0);
    let partial = |a: &Element| -> Tensor {
        vec![
            (one, &root * a, root.clone()),
            (-one, root.clone(), a * &root),
        ]
    };
    let d = base.dim();
    let parts: Vec<Tensor> = (0..d).map(|i| partial(&Element::basis(base, i))).collect();
    let mut gram = Vec::with_capacity(d * d);
    for pi in &parts {
        for pj in &parts {
            gram.push(slice_inner(pi, pj, base));
        }
    }
    CdCForm::from_gram(base, gram, 0.5)
}

/// Runs the three routes to `Δ^A` against each other and checks the Markov
/// and Leibniz properties of standard deviation.
pub fn stddev_report(
    base: &Arc<Algebra>,
    p: &Element,
    seed: u64,
    tol: &Tolerances,
) -> Result<StddevReport> {
    let ea = extend(base, p, tol)?;
    let schur = stddev_laplacian(&ea, tol)?;
    let closed = closed_form_laplacian(&ea.mu);
    let copies = independent_copies_cdc(base, p)?;
    let copies_rep = is_cdc(&copies, tol);
    if !copies_rep.is_cdc() {
        return Err(Error::NotCdc(copies_rep.failures().join(", ")));
    }
    let copies_e = energy_form(&copies, tol, false)?;
    let copies_lap = laplacian(&copies_e, tol)?;
    let gd = gamma_delta(&schur, tol)?;

    let schur_vs = max_abs(&(schur.matrix() - closed.matrix()));
    let copies_vs = max_abs(&(copies_lap.matrix() - closed.matrix()));
    let gamma_vs = copies.max_abs_diff(&gd);
    let e = EnergyForm::from_laplacian(&schur);
    let markov = complete_markov_check(&e, seed, 20, tol.eq);
    let leibniz = leibniz_check(&e, &leibniz_samples(base, seed, 20), tol.eq);
    Ok(StddevReport {
        extension: ea.checks.clone(),
        schur_vs_closed_form: Check::within("schur_vs_closed_form", schur_vs, tol.eq),
        copies_vs_closed_form: Check::within("copies_vs_closed_form", copies_vs, tol.eq),
        copies_vs_gamma_delta: Check::within("copies_vs_gamma_delta", gamma_vs, tol.eq),
        markov,
        leibniz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Sampler;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn uniform_c2() -> (Arc<Algebra>, Element) {
        let a = Algebra::new(vec![1, 1], vec![0.5, 0.5]).unwrap();
        let p = Element::identity(&a);
        (a, p)
    }

    #[test]
    fn c2_example() {
        let (a, p) = uniform_c2();
        let ea = extend(&a, &p, &tol()).unwrap();
        assert!(ea.checks.iter().all(|c| c.passed), "{:?}", ea.checks);
        let one = ea.pair(&Element::identity(&a), C64::new(1.0, 0.0)).unwrap();
        assert!(ea.laplacian().apply(&one).max_abs() < 1e-14);
        // The extension is a star: each point of A is linked only to the new point.
        let e = ea.energy().gram();
        assert!(e[(0, 1)].norm() < 1e-15);
        assert!(e[(0, 2)].re < 0.0 && e[(1, 2)].re < 0.0);

        let f = Element::from_values(&a, &[1.0, 0.0]).unwrap();
        let lap = stddev_laplacian(&ea, &tol()).unwrap();
        let out = lap.apply(&f).real_values();
        assert!((out[0] - 0.5).abs() < 1e-12 && (out[1] + 0.5).abs() < 1e-12);
        assert!(lap.apply(&Element::identity(&a)).max_abs() < 1e-12);
        assert!((stddev_seminorm(ea.state(), &f) - 0.5).abs() < 1e-14);
        assert!(stddev_seminorm(ea.state(), &Element::identity(&a)).abs() < 1e-14);
    }

    #[test]
    fn m2_trace_example() {
        let a = Algebra::new(vec![2], vec![0.5]).unwrap();
        let p = Element::identity(&a);
        let mu = State::new(p.clone()).unwrap();
        let e11 = Element::unit(&a, 0, 0, 0);
        assert!((stddev_seminorm(&mu, &e11) - 0.5).abs() < 1e-14);
        let rep = stddev_report(&a, &p, 1, &tol()).unwrap();
        for c in rep.checks() {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn three_routes_agree_with_nonuniform_weight() {
        let a = Algebra::new(vec![2, 1], vec![0.25, 1.0]).unwrap();
        // τ(p) = 0.25·2·p0 + p1 = 1.
        let p = Element::central(&a, &[C64::new(1.2, 0.0), C64::new(0.4, 0.0)]);
        let rep = stddev_report(&a, &p, 2, &tol()).unwrap();
        for c in rep.checks() {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn seminorm_matches_quotient_energy() {
        let a = Algebra::new(vec![1, 2], vec![0.5, 0.25]).unwrap();
        let p = Element::central(&a, &[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        let ea = extend(&a, &p, &tol()).unwrap();
        let e = EnergyForm::from_laplacian(&stddev_laplacian(&ea, &tol()).unwrap());
        let copies = independent_copies_cdc(&a, &p).unwrap();
        let mut s = Sampler::new(3);
        for _ in 0..10 {
            let x = s.self_adjoint(&a);
            let sd = stddev_seminorm(ea.state(), &x);
            assert!((e.seminorm(&x) - sd).abs() < 1e-10);
            assert!((copies.eval(&x, &x).tau().re - sd * sd).abs() < 1e-10);
            let one = Element::identity(&a);
            assert!(copies.eval(&one, &x).max_abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_weights() {
        let a = Algebra::new(vec![2], vec![0.5]).unwrap();
        let noncentral = Element::unit(&a, 0, 0, 0).scale_re(2.0);
        assert!(matches!(
            extend(&a, &noncentral, &tol()),
            Err(Error::InvalidState(_))
        ));
        let b = Algebra::new(vec![1, 1], vec![0.5, 0.5]).unwrap();
        let zero_part = Element::from_values(&b, &[2.0, 0.0]).unwrap();
        assert!(extend(&b, &zero_part, &tol()).is_err());
        let unnormalized = Element::from_values(&b, &[1.0, 2.0]).unwrap();
        assert!(extend(&b, &unnormalized, &tol()).is_err());
    }
}
