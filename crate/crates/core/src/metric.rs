//! The energy metric `ρ_E(μ, ν) = ⟨μ − ν, Δ⁻¹(μ − ν)⟩_τ^{1/2}` on states, its
//! dual formulation and the affine embedding of the state space into a
//! Hilbert space.

use std::sync::Arc;

use nalgebra::DVector;

use crate::energy::{EnergyForm, Laplacian};
use crate::linalg::{hermitian_eigen, hermitian_pinv};
use crate::{Algebra, CMatrix, Element, Error, Result, C64};

const STATE_TOL: f64 = 1e-10;
/// Relative residual above which `μ − ν` counts as outside the range of `Δ`.
const RANGE_TOL: f64 = 1e-8;

/// A state `μ(a) = τ(ρ a)` given by its density `ρ ≥ 0`, `τ(ρ) = 1`.
#[derive(Debug, Clone)]
pub struct State {
    density: Element,
}

impl State {
    pub fn new(density: Element) -> Result<Self> {
        if !density.is_positive(STATE_TOL) {
            return Err(Error::InvalidState("density is not positive".into()));
        }
        let t = density.tau();
        if (t - C64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "density has trace {:.6} instead of 1",
                t.re
            )));
        }
        Ok(State { density })
    }

    /// The state with density `1 / τ(1)`.
    pub fn tracial(algebra: &Arc<Algebra>) -> Self {
        let d = Element::identity(algebra).scale_re(1.0 / algebra.tau_unit());
        State { density: d }
    }

    /// Point evaluation `δ_x` on a commutative algebra.
    pub fn point(algebra: &Arc<Algebra>, x: usize) -> Result<Self> {
        if !algebra.is_commutative() {
            return Err(Error::NotCommutative);
        }
        if x >= algebra.dim() {
            return Err(Error::InvalidArgument(format!("no point {x}")));
        }
        let d = Element::basis(algebra, x).scale_re(1.0 / algebra.weights()[x]);
        Ok(State { density: d })
    }

    /// The vector state `a ↦ ⟨ξ, a ξ⟩` for a unit vector in block `block`.
    pub fn vector(algebra: &Arc<Algebra>, block: usize, xi: &[C64]) -> Result<Self> {
        let n = *algebra
            .blocks()
            .get(block)
            .ok_or_else(|| Error::InvalidArgument(format!("no block {block}")))?;
        if xi.len() != n {
            return Err(Error::Shape(format!("vector must have length {n}")));
        }
        let v = DVector::from_column_slice(xi);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v = v / C64::new(norm, 0.0);
        let w = algebra.weights()[block];
        let mut blocks: Vec<CMatrix> = algebra
            .blocks()
            .iter()
            .map(|&m| CMatrix::zeros(m, m))
            .collect();
        blocks[block] = (&v * v.adjoint()) / C64::new(w, 0.0);
        State::new(Element::from_blocks(algebra, blocks)?)
    }

    /// Convex combination `Σ t_i μ_i`.
    pub fn mixture(states: &[State], weights: &[f64]) -> Result<Self> {
        if states.is_empty() || states.len() != weights.len() {
            return Err(Error::InvalidArgument(
                "mixture needs one weight per state".into(),
            ));
        }
        let mut d = Element::zero(states[0].algebra());
        for (s, &t) in states.iter().zip(weights) {
            if !s.density.same_algebra(&d) {
                return Err(Error::AlgebraMismatch);
            }
            d = &d + &s.density.scale_re(t);
        }
        State::new(d)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.density.algebra()
    }

    pub fn density(&self) -> &Element {
        &self.density
    }

    /// `μ(a) = τ(ρ a)`.
    pub fn eval(&self, a: &Element) -> C64 {
        (&self.density * a).tau()
    }
}

fn difference(mu: &State, nu: &State, alg: &Arc<Algebra>) -> Result<DVector<C64>> {
    if mu.algebra().as_ref() != alg.as_ref() || nu.algebra().as_ref() != alg.as_ref() {
        return Err(Error::AlgebraMismatch);
    }
    Ok((mu.density() - nu.density()).onb_coords())
}

/// `h_λ = Δ⁺λ`, failing when `λ` is not in the range of `Δ`.
fn potential_of(lap: &Laplacian, lambda: &DVector<C64>) -> Result<DVector<C64>> {
    let h = lap.pseudo_inverse() * lambda;
    let back = lap.matrix() * &h;
    let residual = (&back - lambda).norm();
    if residual > RANGE_TOL * (1.0 + lambda.norm()) {
        return Err(Error::Disconnected(format!(
            "states differ outside the range of the Laplacian (residual {residual:.3e})"
        )));
    }
    Ok(h)
}

/// `ρ_E(μ, ν) = ⟨μ − ν, Δ⁺(μ − ν)⟩^{1/2}`. Returns [`Error::Disconnected`]
/// when `μ − ν` is not in the range of `Δ`, i.e. the distance is infinite.
pub fn energy_metric(lap: &Laplacian, mu: &State, nu: &State) -> Result<f64> {
    let lambda = difference(mu, nu, lap.algebra())?;
    let h = potential_of(lap, &lambda)?;
    Ok(lambda.dotc(&h).re.max(0.0).sqrt())
}

/// `ρ_E(μ, ν) = L_E(h)` where `h` represents `μ − ν` through `E` on the
/// trace-zero part of `A`. Solves the Riesz equation directly from the form,
/// without going through the Laplacian.
pub fn dual_metric(e: &EnergyForm, mu: &State, nu: &State) -> Result<f64> {
    let alg = e.algebra();
    let lambda = difference(mu, nu, alg)?;
    let d = alg.dim();
    let unit = Element::identity(alg).onb_coords();
    let unit = &unit / C64::new(unit.norm(), 0.0);
    let proj = CMatrix::identity(d, d) - &unit * unit.adjoint();
    let (vals, vecs) = hermitian_eigen(&proj);
    let keep: Vec<usize> = (0..d).filter(|&k| vals[k] > 0.5).collect();
    let q = CMatrix::from_fn(d, keep.len(), |i, k| vecs[(i, keep[k])]);
    let g = e.onb_matrix();
    let gq = q.adjoint() * &g * &q;
    let rhs = q.adjoint() * &lambda;
    let y = hermitian_pinv(&gq, 1e-12) * &rhs;
    let residual = (&gq * &y - &rhs).norm();
    if residual > RANGE_TOL * (1.0 + rhs.norm()) {
        return Err(Error::Disconnected(format!(
            "no Riesz representative (residual {residual:.3e})"
        )));
    }
    let h = Element::from_onb_coords(alg, (&q * y).as_slice());
    Ok(e.seminorm(&h))
}

/// Coordinates of `σ(μ) = h_{μ − base}` in an orthonormal basis of `(Ã, E)`:
/// `c_k = λ_k^{1/2} ⟨u_k, h⟩` over the nonzero eigenpairs of `Δ`. Euclidean
/// distances between embeddings are energy distances.
pub fn embed_state(lap: &Laplacian, mu: &State, base: &State) -> Result<Vec<C64>> {
    let lambda = difference(mu, base, lap.algebra())?;
    let h = potential_of(lap, &lambda)?;
    let cut = lap.zero_cut();
    let u = lap.eigenvectors();
    Ok(lap
        .eigenvalues()
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > cut)
        .map(|(k, &l)| u.column(k).dotc(&h) * l.sqrt())
        .collect())
}

/// All pairwise energy distances; `None` marks an infinite distance.
pub fn distance_matrix(lap: &Laplacian, states: &[State]) -> Result<Vec<Vec<Option<f64>>>> {
    let n = states.len();
    let mut out = vec![vec![Some(0.0); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = match energy_metric(lap, &states[i], &states[j]) {
                Ok(v) => Some(v),
                Err(Error::Disconnected(_)) => None,
                Err(e) => return Err(e),
            };
            out[i][j] = d;
            out[j][i] = d;
        }
    }
    Ok(out)
}

/// Euclidean distance between two embedding vectors.
pub fn embedding_distance(x: &[C64], y: &[C64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
