use super::CdCForm;
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues};
use crate::sampling::Sampler;
use crate::{CMatrix, Check, Element, Error, Result, SuperOperator, Tolerances, Witness, C64};

/// Outcome of [`is_cdc`]: one check per defining property.
#[derive(Debug, Clone)]
pub struct CdCReport {
    pub symmetric: Check,
    pub unit_annihilating: Check,
    pub star_representation: Check,
    pub completely_positive: Check,
}

impl CdCReport {
    pub fn is_cdc(&self) -> bool {
        self.checks().iter().all(|c| c.passed)
    }

    pub fn checks(&self) -> [&Check; 4] {
        [
            &self.symmetric,
            &self.unit_annihilating,
            &self.star_representation,
            &self.completely_positive,
        ]
    }

    pub fn into_checks(self) -> Vec<Check> {
        vec![
            self.symmetric,
            self.unit_annihilating,
            self.star_representation,
            self.completely_positive,
        ]
    }

    /// Names of the failed properties.
    pub fn failures(&self) -> Vec<String> {
        self.checks()
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.clone())
            .collect()
    }
}

/// Checks symmetry, unit annihilation and the star-representation identity
/// on basis pairs and triples, plus complete positivity.
pub fn is_cdc(form: &CdCForm, tol: &Tolerances) -> CdCReport {
    let alg = form.algebra();
    let d = alg.dim();
    let slack = tol.eq * (1.0 + form.max_abs());

    let mut worst = (0.0, 0, 0);
    for i in 0..d {
        for j in 0..d {
            let r = form.entry(j, i).max_abs_diff(&form.entry(i, j).adjoint());
            if r > worst.0 {
                worst = (r, i, j);
            }
        }
    }
    let symmetric = Check::within("symmetric", worst.0, slack)
        .witness_if_failed(|| Witness::Indices(vec![worst.1, worst.2]));

    let one = Element::identity(alg);
    let mut unit = (0.0, 0);
    for j in 0..d {
        let r = form.eval(&one, &Element::basis(alg, j)).max_abs();
        if r > unit.0 {
            unit = (r, j);
        }
    }
    let unit_annihilating = Check::within("unit_annihilating", unit.0, slack)
        .witness_if_failed(|| Witness::Indices(vec![unit.1]));

    let basis: Vec<Element> = (0..d).map(|i| Element::basis(alg, i)).collect();
    let zero = Element::zero(alg);
    let mut star = (0.0, [0usize; 3]);
    for a in 0..d {
        let a_s = alg.basis_adjoint(a);
        for b in 0..d {
            let lhs_1 = |c: usize| {
                alg.basis_product(a, b)
                    .map_or(&zero, |ab| form.entry(ab, c))
            };
            for c in 0..d {
                let t2 = alg
                    .basis_product(a_s, c)
                    .map_or(&zero, |asc| form.entry(b, asc));
                let lhs = lhs_1(c) - t2;
                let rhs = &(&basis[alg.basis_adjoint(b)] * form.entry(a, c))
                    - &(form.entry(b, a_s) * &basis[c]);
                let r = lhs.max_abs_diff(&rhs);
                if r > star.0 {
                    star = (r, [a, b, c]);
                }
            }
        }
    }
    let star_representation = Check::within("star_representation", star.0, slack)
        .witness_if_failed(|| Witness::Indices(star.1.to_vec()));

    CdCReport {
        symmetric,
        unit_annihilating,
        star_representation,
        completely_positive: complete_positivity(form, tol),
    }
}

/// Positivity of `[Γ(e_i, e_j)]_{ij}` in `M_d(A)`, one Hermitian matrix of size
/// `d n_k` per block. Expanding arbitrary tuples over the basis folds the
/// scalar coefficients into the algebra coefficients, so this is equivalent
/// to complete positivity.
pub fn complete_positivity(form: &CdCForm, tol: &Tolerances) -> Check {
    let alg = form.algebra();
    let d = alg.dim();
    let mut worst: Option<(f64, Vec<C64>)> = None;
    let mut residual = 0.0f64;
    let mut passed = true;
    for (k, &nk) in alg.blocks().iter().enumerate() {
        let size = d * nk;
        let mut big = CMatrix::zeros(size, size);
        for i in 0..d {
            for j in 0..d {
                let g = form.entry(i, j).block(k);
                big.view_mut((i * nk, j * nk), (nk, nk)).copy_from(g);
            }
        }
        let (vals, vecs) = hermitian_eigen(&big);
        let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let lo = vals[0];
        residual = residual.max(-lo);
        if lo < -tol.pos * (1.0 + top) {
            passed = false;
            if worst.as_ref().is_none_or(|w| lo < w.0) {
                worst = Some((lo, vecs.column(0).iter().copied().collect()));
            }
        }
    }
    let check = Check::new("completely_positive", passed, residual.max(0.0));
    match worst {
        Some((_, v)) => check.with_witness(Witness::Vector(v)),
        None => check,
    }
}

/// Conditional complete negativity of `N`, checked from the definition:
/// `Σ b_j* N(a_j* a_k) b_k ≤ 0` whenever `Σ a_j b_j = 0`.
///
/// The family `a = (e_1, …, e_d, 1)` is handled exhaustively: in the
/// block-diagonal representation on `H`, the vectors `(b_j ξ)_j` with
/// `Σ a_j b_j = 0` fill the subspace `{η : Σ a_j η_j = 0}` of `H^{d+1}`,
/// which is parametrized by `η_{d+1} = −Σ e_j η_j`, and the operator matrix
/// `[N(a_j* a_k)]` must be negative on it. Random tuples completed by
/// `a_{n+1} = 1`, `b_{n+1} = −Σ a_j b_j` are evaluated on top.
pub fn ccn_check(n: &SuperOperator, seed: u64, tol: &Tolerances) -> Result<Check> {
    let alg = n.algebra();
    let one = Element::identity(alg);
    let n1 = n.apply(&one).max_abs();
    if n1 > tol.eq * (1.0 + n.max_abs()) {
        return Err(Error::UnitNotAnnihilated(n1));
    }
    let d = alg.dim();
    let h = alg.hilbert_dim();
    let images: Vec<CMatrix> = (0..d)
        .map(|i| n.apply(&Element::basis(alg, i)).embed())
        .collect();
    let n_of = |j: usize, k: usize| -> CMatrix {
        match (j < d, k < d) {
            (true, true) => alg
                .basis_product(alg.basis_adjoint(j), k)
                .map_or_else(|| CMatrix::zeros(h, h), |m| images[m].clone()),
            (true, false) => images[alg.basis_adjoint(j)].clone(),
            (false, true) => images[k].clone(),
            (false, false) => n.apply(&one).embed(),
        }
    };
    let m = d + 1;
    let mut x = CMatrix::zeros(m * h, m * h);
    for j in 0..m {
        for k in 0..m {
            x.view_mut((j * h, k * h), (h, h)).copy_from(&n_of(j, k));
        }
    }
    let mut t = CMatrix::zeros(m * h, d * h);
    for j in 0..d {
        t.view_mut((j * h, j * h), (h, h))
            .copy_from(&CMatrix::identity(h, h));
        let ej = Element::basis(alg, j).embed();
        t.view_mut((d * h, j * h), (h, h)).copy_from(&(-ej));
    }
    let q = t.adjoint() * &x * &t;
    let (vals, vecs) = hermitian_eigen(&q);
    let top = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let hi = *vals.last().unwrap_or(&0.0);
    let mut residual = hi.max(0.0);
    let mut passed = hi <= tol.pos * (1.0 + top);
    let mut witness =
        (!passed).then(|| Witness::Vector(vecs.column(vecs.ncols() - 1).iter().copied().collect()));

    let mut s = Sampler::new(seed);
    for _ in 0..8 {
        let mut a: Vec<Element> = (0..3).map(|_| s.element(alg)).collect();
        let mut b: Vec<Element> = (0..3).map(|_| s.element(alg)).collect();
        let sum = a
            .iter()
            .zip(&b)
            .fold(Element::zero(alg), |acc, (x, y)| &acc + &(x * y));
        a.push(one.clone());
        b.push(-&sum);
        let mut total = Element::zero(alg);
        let mut size = 0.0;
        for j in 0..a.len() {
            for k in 0..a.len() {
                let term = &(&b[j].adjoint() * &n.apply(&(&a[j].adjoint() * &a[k]))) * &b[k];
                size += term.operator_norm();
                total = &total + &term;
            }
        }
        let top = *hermitian_eigenvalues(&total.embed()).last().unwrap_or(&0.0);
        residual = residual.max(top);
        if top > tol.pos * (1.0 + size) {
            passed = false;
            witness.get_or_insert_with(|| Witness::Elements(a.into_iter().chain(b).collect()));
        }
    }
    let check = Check::new("conditionally_completely_negative", passed, residual);
    Ok(match witness {
        Some(w) if !passed => check.with_witness(w),
        _ => check,
    })
}
