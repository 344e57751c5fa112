//! Energy forms `E(a, b) = τ(Γ(a, b))`, the Laplace operator `Δ` with
//! `⟨a, Δb⟩_τ = E(a, b)`, and the checks built on them.

mod dirichlet;
mod laplacian;
mod markov;
mod reality;
mod semigroup;

use std::sync::Arc;

pub use dirichlet::cdc_from_dirichlet_form;
pub use laplacian::{connectedness, gamma_delta, laplacian, Laplacian};
pub use markov::{
    complete_markov_check, default_battery, leibniz_check, leibniz_samples, markov_check,
    markov_samples, BatteryFn,
};
pub use reality::{
    balance_identity_residual, detailed_balance_residual, energy_reality, involution_defect,
    reality_checks, RealityReport,
};
pub use semigroup::{heat_map, resolvent, resolvent_check, HeatMap};

use crate::algebra::entries;
use crate::cdc::{is_cdc, CdCForm};
use crate::linalg::{hermitian_defect, spectrum_bounds};
use crate::{Algebra, CMatrix, Element, Error, Result, Tolerances, C64};

#[derive(Debug, Clone)]
pub struct EnergyForm {
    algebra: Arc<Algebra>,
    gram: CMatrix,
    provenance: Option<CdCForm>,
}

/// `E = τ ∘ Γ`. Refuses forms that fail [`is_cdc`] unless `force` is set.
pub fn energy_form(form: &CdCForm, tol: &Tolerances, force: bool) -> Result<EnergyForm> {
    if !force {
        let rep = is_cdc(form, tol);
        if !rep.is_cdc() {
            return Err(Error::NotCdc(rep.failures().join(", ")));
        }
    }
    let alg = form.algebra();
    let d = alg.dim();
    let gram = CMatrix::from_fn(d, d, |i, j| form.entry(i, j).tau());
    Ok(EnergyForm {
        algebra: alg.clone(),
        gram,
        provenance: Some(form.clone()),
    })
}

/// `L_{E_n}(A) = (Σ_jk E(a_jk, a_jk))^{1/2}` for `A ∈ M_n(A)`.
pub fn energy_seminorm(e: &EnergyForm, x: &Element, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if x.algebra().blocks() != e.algebra.amplify(n).blocks() {
        return Err(Error::Shape(format!(
            "element does not live in M_{n} of the form's algebra"
        )));
    }
    if n == 1 {
        return Ok(e.seminorm(x));
    }
    let total: f64 = entries(x, &e.algebra, n)
        .iter()
        .map(|a| e.eval(a, a).re)
        .sum();
    Ok(total.max(0.0).sqrt())
}

impl EnergyForm {
    /// A form given by its values on the canonical basis. It must be Hermitian,
    /// positive semidefinite and vanish on the unit.
    pub fn from_gram(algebra: &Arc<Algebra>, gram: CMatrix, tol: &Tolerances) -> Result<Self> {
        let d = algebra.dim();
        if gram.nrows() != d || gram.ncols() != d {
            return Err(Error::Shape(format!("energy gram must be {d}x{d}")));
        }
        let e = EnergyForm {
            algebra: algebra.clone(),
            gram,
            provenance: None,
        };
        let onb = e.onb_matrix();
        let scale = 1.0 + crate::linalg::max_abs(&onb);
        let defect = hermitian_defect(&onb);
        if defect > tol.eq * scale {
            return Err(Error::NotHermitian(defect));
        }
        let (lo, top) = spectrum_bounds(&onb);
        if lo < -tol.pos * (1.0 + top) {
            return Err(Error::InvalidArgument(format!(
                "energy form is not positive (eigenvalue {lo:.3e})"
            )));
        }
        let one = Element::identity(algebra);
        let u = (0..d)
            .map(|j| e.eval(&one, &Element::basis(algebra, j)).norm())
            .fold(0.0, f64::max);
        if u > tol.eq * scale {
            return Err(Error::UnitNotAnnihilated(u));
        }
        Ok(e)
    }

    /// The form `E(a, b) = ⟨a, Δb⟩_τ`.
    pub fn from_laplacian(lap: &Laplacian) -> Self {
        let alg = lap.algebra();
        let m = lap.superop().matrix();
        let d = alg.dim();
        let gram = CMatrix::from_fn(d, d, |i, j| {
            m[(i, j)] * (alg.basis_weight(i) * alg.basis_weight(j)).sqrt()
        });
        EnergyForm {
            algebra: alg.clone(),
            gram,
            provenance: None,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    /// `E(e_i, e_j)` on the canonical basis.
    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    pub fn provenance(&self) -> Option<&CdCForm> {
        self.provenance.as_ref()
    }

    pub fn eval(&self, a: &Element, b: &Element) -> C64 {
        let (ca, cb) = (a.coords(), b.coords());
        let mut acc = C64::new(0.0, 0.0);
        for (i, za) in ca.iter().enumerate() {
            if za.norm_sqr() == 0.0 {
                continue;
            }
            let row: C64 = cb
                .iter()
                .enumerate()
                .map(|(j, zb)| self.gram[(i, j)] * zb)
                .sum();
            acc += za.conj() * row;
        }
        acc
    }

    /// `L_E(a) = E(a, a)^{1/2}`.
    pub fn seminorm(&self, a: &Element) -> f64 {
        self.eval(a, a).re.max(0.0).sqrt()
    }

    /// Matrix of the form in the orthonormal basis `e_i / √w_i`.
    pub fn onb_matrix(&self) -> CMatrix {
        let alg = &self.algebra;
        let d = alg.dim();
        CMatrix::from_fn(d, d, |i, j| {
            self.gram[(i, j)] / (alg.basis_weight(i) * alg.basis_weight(j)).sqrt()
        })
    }

    /// `E_n(A, B) = Σ_jk E(a_jk, b_jk)` on `M_n(A)`.
    pub fn amplify(&self, n: usize) -> EnergyForm {
        let base = &self.algebra;
        let big = base.amplify(n);
        let dd = big.dim();
        let label = |idx: usize| {
            let (b, r, c) = big.basis_label(idx);
            let m = base.blocks()[b];
            (r / m, c / m, base.basis_index(b, r % m, c % m))
        };
        let labels: Vec<_> = (0..dd).map(label).collect();
        let gram = CMatrix::from_fn(dd, dd, |i, l| {
            let (p, j, alpha) = labels[i];
            let (q, k, beta) = labels[l];
            if p == q && j == k {
                self.gram[(alpha, beta)]
            } else {
                C64::new(0.0, 0.0)
            }
        });
        EnergyForm {
            algebra: big,
            gram,
            provenance: None,
        }
    }

    /// `t · E`.
    pub fn scaled(&self, t: f64) -> EnergyForm {
        EnergyForm {
            algebra: self.algebra.clone(),
            gram: self.gram.scale(t),
            provenance: None,
        }
    }
}
