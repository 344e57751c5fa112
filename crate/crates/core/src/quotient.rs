//! Quotients of energy forms by central projections. Writing `A = B ⊕ C` with
//! `B = pA` and `Δ = [[R, J*], [J, S]]`, the quotient Laplacian is the Schur
//! complement `Δ^B = R − J* S⁻¹ J`.

use std::sync::Arc;

use nalgebra::DVector;

use crate::energy::{
    cdc_from_dirichlet_form, complete_markov_check, involution_defect, leibniz_check,
    leibniz_samples, EnergyForm, Laplacian,
};
use crate::linalg::{hermitian_eigenvalues, max_abs};
use crate::sampling::Sampler;
use crate::{
    Algebra, CMatrix, Check, Element, Error, RMatrix, Result, SuperOperator, Tolerances, Witness,
    C64,
};

const FIBER_SAMPLES: usize = 20;

#[derive(Debug, Clone)]
pub struct QuotientData {
    projection: Element,
    keep: Vec<usize>,
    algebra_b: Arc<Algebra>,
    b_idx: Vec<usize>,
    c_idx: Vec<usize>,
    r: CMatrix,
    j: CMatrix,
    s: CMatrix,
    s_inv: CMatrix,
    ambient: Laplacian,
}

#[derive(Debug, Clone)]
pub struct QuotientReport {
    /// Ambient form is real, Markov at `n = 1, 2`, and a CdC energy form.
    pub preconditions: Vec<Check>,
    pub fiber_infimum: Check,
    pub completed_square: Check,
    pub monotonicity: Check,
    pub cdc: Check,
    pub markov: Vec<Check>,
    pub leibniz: Check,
}

impl QuotientReport {
    pub fn checks(&self) -> Vec<&Check> {
        let mut out: Vec<&Check> = self.preconditions.iter().collect();
        out.extend([
            &self.fiber_infimum,
            &self.completed_square,
            &self.monotonicity,
            &self.cdc,
        ]);
        out.extend(self.markov.iter());
        out.push(&self.leibniz);
        out
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed)
    }
}

/// The central projection `Σ_{i ∈ keep} 1_i`.
pub fn projection_from_blocks(algebra: &Arc<Algebra>, keep: &[usize]) -> Result<Element> {
    if let Some(&b) = keep.iter().find(|&&b| b >= algebra.block_count()) {
        return Err(Error::InvalidProjection(format!("block {b} out of range")));
    }
    let flags: Vec<C64> = (0..algebra.block_count())
        .map(|b| C64::new(if keep.contains(&b) { 1.0 } else { 0.0 }, 0.0))
        .collect();
    Ok(Element::central(algebra, &flags))
}

/// Blocks on which a central projection is the identity.
fn projection_blocks(p: &Element, tol: f64) -> Result<Vec<usize>> {
    let alg = p.algebra();
    if !p.is_self_adjoint(tol) || (p * p).max_abs_diff(p) > tol {
        return Err(Error::InvalidProjection(
            "p is not a self-adjoint idempotent".into(),
        ));
    }
    for i in 0..alg.dim() {
        let e = Element::basis(alg, i);
        if p.commutator(&e).max_abs() > tol {
            return Err(Error::InvalidProjection("p is not central".into()));
        }
    }
    let mut keep = Vec::new();
    for b in 0..alg.block_count() {
        let blk = p.block(b);
        let id = CMatrix::identity(blk.nrows(), blk.ncols());
        if max_abs(&(blk - &id)) <= tol {
            keep.push(b);
        } else if max_abs(blk) > tol {
            return Err(Error::InvalidProjection(format!(
                "p is not a block unit on block {b}"
            )));
        }
    }
    if keep.is_empty() || keep.len() == alg.block_count() {
        return Err(Error::InvalidProjection("p must be neither 0 nor 1".into()));
    }
    Ok(keep)
}

fn submatrix(m: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), cols.len(), |i, k| m[(rows[i], cols[k])])
}

/// Splits the orthonormal-basis matrix of `Δ` along `L²(pA) ⊕ L²((1 − p)A)`.
/// The ambient form must be real and `S` invertible.
pub fn split(lap: &Laplacian, p: &Element, tol: &Tolerances) -> Result<QuotientData> {
    let alg = lap.algebra();
    if p.algebra().as_ref() != alg.as_ref() {
        return Err(Error::AlgebraMismatch);
    }
    let keep = projection_blocks(p, 1e-10)?;
    let scale = 1.0 + lap.max_eigenvalue();
    let inv = involution_defect(lap.superop());
    if inv > tol.eq * scale {
        return Err(Error::InvalidArgument(format!(
            "quotients need a real energy form (involution defect {inv:.3e})"
        )));
    }
    let (b_idx, c_idx): (Vec<usize>, Vec<usize>) =
        (0..alg.dim()).partition(|&i| keep.contains(&alg.basis_label(i).0));
    let m = lap.matrix();
    let r = submatrix(m, &b_idx, &b_idx);
    let j = submatrix(m, &c_idx, &b_idx);
    let s = submatrix(m, &c_idx, &c_idx);
    let smin = hermitian_eigenvalues(&s)[0];
    if smin <= tol.rank * scale {
        return Err(Error::Singular(format!(
            "S has eigenvalue {smin:.3e}; the complement carries a disconnected part"
        )));
    }
    let s_inv = s
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular("S is not invertible".into()))?;
    Ok(QuotientData {
        projection: p.clone(),
        algebra_b: alg.sub_blocks(&keep)?,
        keep,
        b_idx,
        c_idx,
        r,
        j,
        s,
        s_inv,
        ambient: lap.clone(),
    })
}

impl QuotientData {
    pub fn projection(&self) -> &Element {
        &self.projection
    }

    /// Blocks of the ambient algebra forming `B`.
    pub fn kept_blocks(&self) -> &[usize] {
        &self.keep
    }

    pub fn algebra_b(&self) -> &Arc<Algebra> {
        &self.algebra_b
    }

    pub fn r(&self) -> &CMatrix {
        &self.r
    }

    pub fn j(&self) -> &CMatrix {
        &self.j
    }

    pub fn s(&self) -> &CMatrix {
        &self.s
    }

    pub fn ambient(&self) -> &Laplacian {
        &self.ambient
    }

    /// Restriction of an element of `A` to `B`.
    pub fn compress(&self, a: &Element) -> Element {
        let c = a.onb_coords();
        let v: Vec<C64> = self.b_idx.iter().map(|&i| c[i]).collect();
        Element::from_onb_coords(&self.algebra_b, &v)
    }

    fn check_b(&self, b: &Element) -> Result<DVector<C64>> {
        if b.algebra().as_ref() != self.algebra_b.as_ref() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(b.onb_coords())
    }

    fn assemble(&self, bv: &DVector<C64>, cv: &DVector<C64>) -> Element {
        let alg = self.ambient.algebra();
        let mut full = vec![C64::new(0.0, 0.0); alg.dim()];
        for (k, &i) in self.b_idx.iter().enumerate() {
            full[i] = bv[k];
        }
        for (k, &i) in self.c_idx.iter().enumerate() {
            full[i] = cv[k];
        }
        Element::from_onb_coords(alg, &full)
    }

    /// The energy-minimizing lift `b ⊕ (−S⁻¹ J b)`.
    pub fn fiber_minimizer(&self, b: &Element) -> Result<Element> {
        let bv = self.check_b(b)?;
        let cv = -(&self.s_inv * (&self.j * &bv));
        Ok(self.assemble(&bv, &cv))
    }

    /// `E(b ⊕ c, b ⊕ c)` for the ambient form.
    fn ambient_energy(&self, a: &Element) -> f64 {
        let v = a.onb_coords();
        v.dotc(&(self.ambient.matrix() * &v)).re
    }
}

/// `Δ^B = R − J* S⁻¹ J`.
pub fn schur_quotient(qd: &QuotientData, tol: &Tolerances) -> Result<Laplacian> {
    let m = &qd.r - qd.j.adjoint() * &qd.s_inv * &qd.j;
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    Laplacian::from_superop(SuperOperator::from_matrix(&qd.algebra_b, m)?, tol)
}

/// `c_xy = −E^B(δ_x, δ_y)` for a quotient of a commutative algebra.
pub fn effective_conductances(lap: &Laplacian) -> Result<RMatrix> {
    let alg = lap.algebra();
    if !alg.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let g = EnergyForm::from_laplacian(lap);
    let n = alg.dim();
    Ok(RMatrix::from_fn(n, n, |x, y| {
        if x == y {
            0.0
        } else {
            -g.gram()[(x, y)].re
        }
    }))
}

/// Fiber infimum, completed square and monotonicity cross-checks, and the
/// closure properties of the quotient: it is again a CdC energy form that is
/// Markov at `n = 1, 2` and Leibniz.
pub fn quotient_checks(qd: &QuotientData, seed: u64, tol: &Tolerances) -> Result<QuotientReport> {
    let ambient_e = EnergyForm::from_laplacian(&qd.ambient);
    let slack = tol.eq;
    let mut preconditions = vec![
        match cdc_from_dirichlet_form(&ambient_e, false, seed, tol) {
            Ok(_) => Check::new("ambient_cdc", true, 0.0),
            Err(e) => Check::new("ambient_cdc", false, f64::NAN)
                .with_witness(Witness::Note(e.to_string())),
        },
    ];
    for mut c in complete_markov_check(&ambient_e, seed, FIBER_SAMPLES, slack) {
        c.name = format!("ambient_{}", c.name);
        preconditions.push(c);
    }

    let lap_b = schur_quotient(qd, tol)?;
    let e_b = EnergyForm::from_laplacian(&lap_b);
    let mut s = Sampler::new(seed);
    let alg_b = qd.algebra_b.clone();
    let alg = qd.ambient.algebra().clone();

    let mut fiber = 0.0f64;
    let mut square = 0.0f64;
    for _ in 0..FIBER_SAMPLES {
        let b = s.element(&alg_b);
        let lift = qd.fiber_minimizer(&b)?;
        let lb = e_b.seminorm(&b);
        let la = qd.ambient_energy(&lift).max(0.0).sqrt();
        fiber = fiber.max((lb - la).abs() / (1.0 + lb));
        let bv = b.onb_coords();
        let eps = DVector::from_iterator(qd.c_idx.len(), (0..qd.c_idx.len()).map(|_| s.complex()));
        let cv = -(&qd.s_inv * (&qd.j * &bv)) + &eps;
        let perturbed = qd.assemble(&bv, &cv);
        let want = e_b.eval(&b, &b).re + eps.dotc(&(&qd.s * &eps)).re;
        let got = qd.ambient_energy(&perturbed);
        square = square.max((got - want).abs() / (1.0 + want.abs()));
    }
    let fiber_infimum = Check::within("fiber_infimum", fiber, tol.eq);
    let completed_square = Check::within("completed_square", square, tol.eq);

    let mut mono = 0.0f64;
    for _ in 0..FIBER_SAMPLES {
        let a = s.element(&alg);
        let lb = e_b.seminorm(&qd.compress(&a));
        let la = qd.ambient_energy(&a).max(0.0).sqrt();
        mono = mono.max(lb - la - slack * (1.0 + la));
    }
    let monotonicity = Check::new("monotonicity", mono <= 0.0, mono.max(0.0));

    let cdc = match cdc_from_dirichlet_form(&e_b, false, seed, tol) {
        Ok(_) => Check::new("quotient_cdc", true, 0.0),
        Err(e) => {
            Check::new("quotient_cdc", false, f64::NAN).with_witness(Witness::Note(e.to_string()))
        }
    };
    let markov = complete_markov_check(&e_b, seed, FIBER_SAMPLES, slack)
        .into_iter()
        .map(|mut c| {
            c.name = format!("quotient_{}", c.name);
            c
        })
        .collect();
    let mut leibniz = leibniz_check(&e_b, &leibniz_samples(&alg_b, seed, FIBER_SAMPLES), slack);
    leibniz.name = "quotient_leibniz".into();
    Ok(QuotientReport {
        preconditions,
        fiber_infimum,
        completed_square,
        monotonicity,
        cdc,
        markov,
        leibniz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdc::{commutator_cdc, is_cdc};
    use crate::energy::{energy_form, gamma_delta, laplacian};
    use crate::network::ResistanceNetwork;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn k3() -> ResistanceNetwork {
        ResistanceNetwork::new(RMatrix::from_fn(
            3,
            3,
            |i, j| if i == j { 0.0 } else { 1.0 },
        ))
        .unwrap()
    }

    fn cm(rows: usize, cols: usize, v: &[f64]) -> CMatrix {
        CMatrix::from_row_slice(
            rows,
            cols,
            &v.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>(),
        )
    }

    #[test]
    fn k3_split_and_schur() {
        let net = k3();
        let lap = net.laplacian(&tol()).unwrap();
        let p = projection_from_blocks(net.algebra(), &[0, 1]).unwrap();
        let qd = split(&lap, &p, &tol()).unwrap();
        assert!(max_abs(&(qd.r() - cm(2, 2, &[2.0, -1.0, -1.0, 2.0]))) < 1e-15);
        assert!(max_abs(&(qd.j() - cm(1, 2, &[-1.0, -1.0]))) < 1e-15);
        assert!(max_abs(&(qd.s() - cm(1, 1, &[2.0]))) < 1e-15);
        let q = schur_quotient(&qd, &tol()).unwrap();
        assert!(max_abs(&(q.matrix() - cm(2, 2, &[1.5, -1.5, -1.5, 1.5]))) < 1e-12);
        assert_eq!(q.kernel_dim(), 1);
        let c = effective_conductances(&q).unwrap();
        assert!((c[(0, 1)] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn k3_fiber_minimizer() {
        let net = k3();
        let lap = net.laplacian(&tol()).unwrap();
        let qd = split(
            &lap,
            &projection_from_blocks(net.algebra(), &[0, 1]).unwrap(),
            &tol(),
        )
        .unwrap();
        let b = Element::from_values(qd.algebra_b(), &[1.0, 0.0]).unwrap();
        let a = qd.fiber_minimizer(&b).unwrap().real_values();
        for (x, y) in a.iter().zip([1.0, 0.0, 0.5]) {
            assert!((x - y).abs() < 1e-14);
        }
        let one = qd
            .fiber_minimizer(&Element::identity(qd.algebra_b()))
            .unwrap();
        assert!(one.max_abs_diff(&Element::identity(net.algebra())) < 1e-14);
    }

    #[test]
    fn invalid_projections() {
        let net = k3();
        let lap = net.laplacian(&tol()).unwrap();
        let a = net.algebra();
        assert!(split(&lap, &Element::identity(a), &tol()).is_err());
        assert!(split(&lap, &Element::zero(a), &tol()).is_err());
        let half = Element::from_values(a, &[0.5, 1.0, 0.0]).unwrap();
        assert!(split(&lap, &half, &tol()).is_err());
        let m = Algebra::matrix(2);
        let v = Element::unit(&m, 0, 0, 1);
        let lap = laplacian(
            &energy_form(
                &commutator_cdc(&[v.clone(), v.adjoint()]).unwrap(),
                &tol(),
                false,
            )
            .unwrap(),
            &tol(),
        )
        .unwrap();
        assert!(split(&lap, &Element::unit(&m, 0, 0, 0), &tol()).is_err());
    }

    #[test]
    fn disconnected_complement_is_singular() {
        let c = RMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let net = ResistanceNetwork::new(c).unwrap();
        let lap = net.laplacian(&tol()).unwrap();
        let p = projection_from_blocks(net.algebra(), &[0, 1]).unwrap();
        assert!(matches!(split(&lap, &p, &tol()), Err(Error::Singular(_))));
    }

    #[test]
    fn direct_sum_complement_is_rejected() {
        // Δ = Δ_B ⊕ Δ_C forces Δ_C(1_C) = 0, so S is never invertible here.
        let c = RMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, 2.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0,
            ],
        );
        let net = ResistanceNetwork::new(c).unwrap();
        let lap = net.laplacian(&tol()).unwrap();
        let p = projection_from_blocks(net.algebra(), &[0, 1]).unwrap();
        assert!(matches!(split(&lap, &p, &tol()), Err(Error::Singular(_))));
    }

    #[test]
    fn network_quotients_are_networks_and_pass_checks() {
        let mut s = Sampler::new(17);
        let net = ResistanceNetwork::new(s.connected_conductances(5, 0.5)).unwrap();
        let lap = net.laplacian(&tol()).unwrap();
        let qd = split(
            &lap,
            &projection_from_blocks(net.algebra(), &[0, 1, 2, 3]).unwrap(),
            &tol(),
        )
        .unwrap();
        let q = schur_quotient(&qd, &tol()).unwrap();
        let c = effective_conductances(&q).unwrap();
        assert!(c.iter().all(|&v| v >= -1e-10));
        let rep = quotient_checks(&qd, 1, &tol()).unwrap();
        for c in rep.checks() {
            assert!(c.passed, "{c:?}");
        }
        let qd2 = split(
            &q,
            &projection_from_blocks(q.algebra(), &[0, 2]).unwrap(),
            &tol(),
        )
        .unwrap();
        let rep2 = quotient_checks(&qd2, 2, &tol()).unwrap();
        assert!(rep2.passed());
        let q2 = schur_quotient(&qd2, &tol()).unwrap();
        let g = gamma_delta(&q2, &tol()).unwrap();
        assert!(is_cdc(&g, &tol()).is_cdc());
        // Resistance between kept nodes is preserved by the quotient.
        let r = net.resistance_distance(0, 2).unwrap();
        let c2 = effective_conductances(&q2).unwrap();
        assert!((1.0 / c2[(0, 1)] - r).abs() < 1e-10);
    }

    #[test]
    fn quantum_quotient_passes_checks() {
        let a = Algebra::new(vec![2, 1], vec![1.0, 1.0]).unwrap();
        let d = cm(3, 3, &[0.0, 1.0, 0.5, 1.0, 0.3, 1.0, 0.5, 1.0, -0.2]);
        let form = crate::cdc::spectral_triple_cdc(&d, &a, 1e-9).unwrap();
        let e = energy_form(&form, &tol(), false).unwrap();
        let lap = laplacian(&e, &tol()).unwrap();
        let qd = split(&lap, &projection_from_blocks(&a, &[0]).unwrap(), &tol()).unwrap();
        let rep = quotient_checks(&qd, 4, &tol()).unwrap();
        for c in rep.checks() {
            assert!(c.passed, "{c:?}");
        }
    }
}
