//! The Hodge–Dirac operator of a CdC. `L²(Ω, τ)` is built from the kernel of
//! the multiplication map `m: A ⊗ A → A`, with the inner product
//! `⟨a ⊗ b, c ⊗ d⟩ = τ(b* Γ(a, c) d)` and its null space divided out.
//! `∂a = a ⊗ 1 − 1 ⊗ a` and `D = [[0, ∂*], [∂, 0]]` on `L²(A, τ) ⊕ L²(Ω, τ)`.

use std::sync::Arc;

use nalgebra::DVector;

use crate::cdc::{is_cdc, network_cdc, CdCForm};
use crate::linalg::{hermitian_defect, hermitian_eigen, max_abs, spectral_norm};
use crate::network::ResistanceNetwork;
use crate::sampling::Sampler;
use crate::{Algebra, CMatrix, Check, Element, Error, Result, SuperOperator, Tolerances, C64};

const NULL_CUT: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct BimoduleSpace {
    algebra: Arc<Algebra>,
    form: CdCForm,
    /// Orthonormal basis of `ker m` in tensor coordinates `(i, j) ↦ i·d + j`.
    kernel: CMatrix,
    gram: CMatrix,
    rank: usize,
    /// Kernel coordinates to orthonormal coordinates of `L²(Ω, τ)`.
    w: CMatrix,
    null: CMatrix,
    dmatrix: CMatrix,
    left: Vec<CMatrix>,
    right: Vec<CMatrix>,
}

#[derive(Debug, Clone)]
pub struct DiracOperator {
    space: BimoduleSpace,
    matrix: CMatrix,
}

#[derive(Debug, Clone)]
pub struct DiracReport {
    pub dim_omega: usize,
    /// `max |∂*∂ − Δ|` in the orthonormal basis.
    pub delta_factorization_residual: f64,
    /// Largest gap between `‖[D, a]‖` and the `Γ` formula over the samples.
    pub norm_formula_residual: f64,
    pub leibniz_residual: f64,
    pub null_invariance_residual: f64,
    pub star_residual: f64,
    pub checks: Vec<Check>,
}

impl DiracReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone)]
pub struct StarReport {
    pub is_star: bool,
    pub parallelogram_holds: bool,
    /// Largest relative parallelogram defect observed.
    pub max_defect: f64,
    pub witness: Option<(Element, Element)>,
}

impl StarReport {
    /// The two flags agree, as they must for connected symmetric networks.
    pub fn consistent(&self) -> bool {
        self.is_star == self.parallelogram_holds
    }
}

fn tensor_index(d: usize, i: usize, j: usize) -> usize {
    i * d + j
}

/// Orthonormal basis of `ker m` from the eigenvectors of `MᴴM`. The rows of
/// `M` have disjoint supports, so its nonzero singular values are at least 1.
fn multiplication_kernel(alg: &Algebra) -> CMatrix {
    let d = alg.dim();
    let mut m = CMatrix::zeros(d, d * d);
    for i in 0..d {
        for j in 0..d {
            if let Some(k) = alg.basis_product(i, j) {
                m[(k, tensor_index(d, i, j))] = C64::new(1.0, 0.0);
            }
        }
    }
    let (vals, vecs) = hermitian_eigen(&(m.adjoint() * &m));
    let keep: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] < 0.5).collect();
    CMatrix::from_fn(d * d, keep.len(), |r, c| vecs[(r, keep[c])])
}

/// `T[(i, j), (k, l)] = τ(e_j* Γ(e_i, e_k) e_l)`.
fn tensor_gram(form: &CdCForm) -> CMatrix {
    let alg = form.algebra();
    let d = alg.dim();
    let mut t = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for k in 0..d {
            let g = form.entry(i, k);
            for j in 0..d {
                let (b, p, q) = alg.basis_label(j);
                let w = alg.weights()[b];
                let n = alg.blocks()[b];
                for r in 0..n {
                    let l = alg.basis_index(b, r, q);
                    t[(tensor_index(d, i, j), tensor_index(d, k, l))] = g.block(b)[(p, r)] * w;
                }
            }
        }
    }
    t
}

/// Tensor-coordinate matrix of `x ⊗ y ↦ (e_m x) ⊗ y` or `x ⊗ (y e_m)`.
fn action_matrix(alg: &Algebra, m: usize, left: bool) -> CMatrix {
    let d = alg.dim();
    let mut p = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let target = if left {
                alg.basis_product(m, i).map(|i2| tensor_index(d, i2, j))
            } else {
                alg.basis_product(j, m).map(|j2| tensor_index(d, i, j2))
            };
            if let Some(t) = target {
                p[(t, tensor_index(d, i, j))] = C64::new(1.0, 0.0);
            }
        }
    }
    p
}

/// Builds `L²(Ω, τ)`, `∂` and the bimodule actions for a CdC.
pub fn build_bimodule(form: &CdCForm, tol: &Tolerances) -> Result<BimoduleSpace> {
    let rep = is_cdc(form, tol);
    if !rep.is_cdc() {
        return Err(Error::NotCdc(rep.failures().join(", ")));
    }
    let alg = form.algebra().clone();
    let d = alg.dim();
    let kernel = multiplication_kernel(&alg);
    let gram = {
        let g = kernel.adjoint() * tensor_gram(form) * &kernel;
        (&g + g.adjoint()) * C64::new(0.5, 0.0)
    };
    let (vals, vecs) = hermitian_eigen(&gram);
    let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(&lo) = vals.first() {
        if lo < -tol.pos * top.max(1.0) {
            return Err(Error::NotCdc(format!(
                "bimodule inner product has eigenvalue {lo:.3e}"
            )));
        }
    }
    let cut = NULL_CUT * top;
    let (pos, nul): (Vec<usize>, Vec<usize>) =
        (0..vals.len()).partition(|&k| top > 0.0 && vals[k] > cut);
    let rank = pos.len();
    let k_dim = kernel.ncols();
    let w = CMatrix::from_fn(rank, k_dim, |r, c| {
        vecs[(c, pos[r])].conj() * vals[pos[r]].sqrt()
    });
    let w_pinv = CMatrix::from_fn(k_dim, rank, |c, r| vecs[(c, pos[r])] / vals[pos[r]].sqrt());
    let null = CMatrix::from_fn(k_dim, nul.len(), |c, r| vecs[(c, nul[r])]);

    let units = alg.unit_indices();
    let mut partial = CMatrix::zeros(rank, d);
    for m in 0..d {
        let mut v = DVector::<C64>::zeros(d * d);
        for &u in &units {
            v[tensor_index(d, m, u)] += C64::new(1.0, 0.0);
            v[tensor_index(d, u, m)] -= C64::new(1.0, 0.0);
        }
        let col = &w * (kernel.adjoint() * v) / C64::new(alg.basis_weight(m).sqrt(), 0.0);
        partial.set_column(m, &col);
    }
    let descend = |p: &CMatrix| kernel.adjoint() * p * &kernel;
    let left: Vec<CMatrix> = (0..d)
        .map(|m| &w * descend(&action_matrix(&alg, m, true)) * &w_pinv)
        .collect();
    let right: Vec<CMatrix> = (0..d)
        .map(|m| &w * descend(&action_matrix(&alg, m, false)) * &w_pinv)
        .collect();
    Ok(BimoduleSpace {
        algebra: alg,
        form: form.clone(),
        kernel,
        gram,
        rank,
        w,
        null,
        dmatrix: partial,
        left,
        right,
    })
}

impl BimoduleSpace {
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn form(&self) -> &CdCForm {
        &self.form
    }

    /// `d² − d`.
    pub fn ambient_dim(&self) -> usize {
        self.kernel.ncols()
    }

    /// Inner product on `ker m` in its orthonormal coordinates.
    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    /// `dim L²(Ω, τ)`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `∂` as an `r × d` matrix between orthonormal bases.
    pub fn dmatrix(&self) -> &CMatrix {
        &self.dmatrix
    }

    pub fn partial(&self, a: &Element) -> DVector<C64> {
        &self.dmatrix * a.onb_coords()
    }

    fn combine(&self, mats: &[CMatrix], a: &Element) -> CMatrix {
        let mut out = CMatrix::zeros(self.rank, self.rank);
        for (m, z) in a.coords().iter().enumerate() {
            if z.norm_sqr() > 0.0 {
                out += &mats[m] * *z;
            }
        }
        out
    }

    /// Left action of `a` on `L²(Ω, τ)`.
    pub fn left_action(&self, a: &Element) -> CMatrix {
        self.combine(&self.left, a)
    }

    /// Right action of `a` on `L²(Ω, τ)`.
    pub fn right_action(&self, a: &Element) -> CMatrix {
        self.combine(&self.right, a)
    }

    /// How far the null space of the inner product is from being a
    /// sub-bimodule, relative to the inner product's scale.
    pub fn null_invariance_residual(&self) -> f64 {
        if self.null.ncols() == 0 {
            return 0.0;
        }
        let scale = 1.0 + spectral_norm(&self.gram).sqrt();
        let alg = &self.algebra;
        (0..alg.dim())
            .flat_map(|m| [true, false].map(|l| (m, l)))
            .map(|(m, l)| {
                let p = self.kernel.adjoint() * action_matrix(alg, m, l) * &self.kernel;
                max_abs(&(&self.w * p * &self.null))
            })
            .fold(0.0, f64::max)
            / scale
    }

    /// `max_m |π(e_m*) − π(e_m)*|` for the left action.
    pub fn star_residual(&self) -> f64 {
        let alg = &self.algebra;
        (0..alg.dim())
            .map(|m| max_abs(&(&self.left[alg.basis_adjoint(m)] - self.left[m].adjoint())))
            .fold(0.0, f64::max)
    }

    /// `max |∂*∂ − Δ|` where `Δ` is the Laplacian of `τ ∘ Γ`.
    pub fn factorization_residual(&self) -> f64 {
        let alg = &self.algebra;
        let d = alg.dim();
        let lap = CMatrix::from_fn(d, d, |i, j| {
            self.form.entry(i, j).tau() / (alg.basis_weight(i) * alg.basis_weight(j)).sqrt()
        });
        max_abs(&(self.dmatrix.adjoint() * &self.dmatrix - lap))
    }

    /// `max ‖∂(ab) − (∂a)b − a(∂b)‖` over the pairs.
    pub fn leibniz_residual(&self, pairs: &[(Element, Element)]) -> f64 {
        pairs
            .iter()
            .map(|(a, b)| {
                let lhs = self.partial(&(a * b));
                let rhs =
                    self.right_action(b) * self.partial(a) + self.left_action(a) * self.partial(b);
                (lhs - rhs).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// `D = [[0, ∂*], [∂, 0]]` with `π(a) = (left multiplication) ⊕ (left action)`.
pub fn dirac(space: &BimoduleSpace) -> DiracOperator {
    let d = space.algebra.dim();
    let r = space.rank;
    let mut m = CMatrix::zeros(d + r, d + r);
    m.view_mut((0, d), (d, r))
        .copy_from(&space.dmatrix.adjoint());
    m.view_mut((d, 0), (r, d)).copy_from(&space.dmatrix);
    DiracOperator {
        space: space.clone(),
        matrix: m,
    }
}

impl DiracOperator {
    pub fn space(&self) -> &BimoduleSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// The representation of `a` on `L²(A, τ) ⊕ L²(Ω, τ)`.
    pub fn pi(&self, a: &Element) -> CMatrix {
        let d = self.space.algebra.dim();
        let r = self.space.rank;
        let mut m = CMatrix::zeros(d + r, d + r);
        m.view_mut((0, 0), (d, d))
            .copy_from(SuperOperator::left_mul(a).matrix());
        m.view_mut((d, d), (r, r))
            .copy_from(&self.space.left_action(a));
        m
    }

    /// The grading, `+1` on `L²(A, τ)` and `−1` on `L²(Ω, τ)`.
    pub fn grading(&self) -> CMatrix {
        let d = self.space.algebra.dim();
        CMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i != j {
                C64::new(0.0, 0.0)
            } else if i < d {
                C64::new(1.0, 0.0)
            } else {
                C64::new(-1.0, 0.0)
            }
        })
    }

    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.matrix)
    }
}

/// `‖[D, π(a)]‖`.
pub fn dirac_seminorm(op: &DiracOperator, a: &Element) -> f64 {
    let p = op.pi(a);
    spectral_norm(&(&op.matrix * &p - &p * &op.matrix))
}

/// `max(‖Γ(a, a)‖, ‖Γ(a*, a*)‖)^{1/2}`.
pub fn norm_formula(form: &CdCForm, a: &Element) -> f64 {
    let s = a.adjoint();
    form.eval(a, a)
        .operator_norm()
        .max(form.eval(&s, &s).operator_norm())
        .sqrt()
}

/// Builds the Dirac operator and checks `∂*∂ = Δ`, the norm formula and the
/// Leibniz identity on seeded elements, plus the bimodule invariants.
pub fn dirac_report(
    form: &CdCForm,
    seed: u64,
    samples: usize,
    tol: &Tolerances,
) -> Result<DiracReport> {
    let space = build_bimodule(form, tol)?;
    let op = dirac(&space);
    let alg = form.algebra();
    let mut s = Sampler::new(seed);
    let elems: Vec<Element> = (0..samples).map(|_| s.element(alg)).collect();
    let pairs: Vec<(Element, Element)> = (0..samples)
        .map(|_| (s.element(alg), s.element(alg)))
        .collect();

    let fact = space.factorization_residual();
    let norm = elems
        .iter()
        .map(|a| {
            let f = norm_formula(form, a);
            (dirac_seminorm(&op, a) - f).abs() / (1.0 + f)
        })
        .fold(0.0, f64::max);
    let leib = space.leibniz_residual(&pairs);
    let null = space.null_invariance_residual();
    let star = space.star_residual();
    let scale = 1.0 + form.max_abs();
    let checks = vec![
        Check::within("delta_factorization", fact, tol.eq * scale),
        Check::within("norm_formula", norm, 1e-8),
        Check::within("leibniz_identity", leib, tol.eq * scale * 10.0),
        Check::within("null_space_invariance", null, tol.eq),
        Check::within("star_representation", star, tol.eq * scale),
        Check::within("dirac_hermitian", op.hermitian_defect(), 0.0),
    ];
    Ok(DiracReport {
        dim_omega: space.rank(),
        delta_factorization_residual: fact,
        norm_formula_residual: norm,
        leibniz_residual: leib,
        null_invariance_residual: null,
        star_residual: star,
        checks,
    })
}

/// True when some node `t` is linked to every other node and no other links exist.
pub fn is_star(net: &ResistanceNetwork) -> bool {
    let n = net.size();
    let c = net.conductances();
    (0..n).any(|t| {
        (0..n).all(|x| (0..n).all(|y| x == y || ((c[(x, y)] != 0.0) == (x == t || y == t))))
    })
}

/// Tests the parallelogram law for `L(f)² = ‖[D, f]‖²` of the scale-1
/// network CdC on `f = δ_p, g = δ_q` over all pairs and on seeded random pairs.
pub fn star_graph_check(
    net: &ResistanceNetwork,
    seed: u64,
    tol: &Tolerances,
) -> Result<StarReport> {
    if !net.is_connected() {
        return Err(Error::Disconnected(
            "star check needs a connected network".into(),
        ));
    }
    let alg = net.algebra();
    let form = network_cdc(alg, net.conductances(), 1.0, false)?;
    let op = dirac(&build_bimodule(&form, tol)?);
    let l2 = |f: &Element| dirac_seminorm(&op, f).powi(2);
    let n = net.size();
    let mut pairs = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            pairs.push((Element::basis(alg, p), Element::basis(alg, q)));
        }
    }
    let mut s = Sampler::new(seed);
    for _ in 0..10 {
        let f: Vec<f64> = (0..n).map(|_| s.uniform(-1.0, 1.0)).collect();
        let g: Vec<f64> = (0..n).map(|_| s.uniform(-1.0, 1.0)).collect();
        pairs.push((
            Element::from_values(alg, &f)?,
            Element::from_values(alg, &g)?,
        ));
    }
    let mut worst = (0.0f64, None);
    for (f, g) in &pairs {
        let lhs = l2(&(f + g)) + l2(&(f - g));
        let rhs = 2.0 * (l2(f) + l2(g));
        let defect = (lhs - rhs).abs() / (1.0 + rhs);
        if defect > worst.0 {
            worst = (defect, Some((f.clone(), g.clone())));
        }
    }
    let holds = worst.0 <= 1e-8;
    Ok(StarReport {
        is_star: is_star(net),
        parallelogram_holds: holds,
        max_defect: worst.0,
        witness: if holds { None } else { worst.1 },
    })
}
