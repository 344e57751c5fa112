//! Classical resistance networks on `C(X)` with the counting measure. The
//! energy form uses scale `1/2`, so `E(f, f) = Σ_{x<y} c_xy |f(x) − f(y)|²`
//! and resistance distance is physical effective resistance.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::cdc::{network_cdc, CdCForm};
use crate::energy::{energy_form, EnergyForm, Laplacian};
use crate::linalg::{hermitian_eigenvalues, hermitian_pinv, to_complex};
use crate::metric::{embed_state, embedding_distance, energy_metric, State};
use crate::sampling::Sampler;
use crate::{
    functional_calculus, Algebra, Check, Element, Error, PiecewiseLinear, RMatrix, Result,
    SuperOperator, Tolerances, Witness, C64,
};

const GRID_STEPS: usize = 10;

#[derive(Debug, Clone)]
pub struct ResistanceNetwork {
    algebra: Arc<Algebra>,
    c: RMatrix,
    allow_negative: bool,
}

#[derive(Debug, Clone)]
pub struct MetricReport {
    pub triangle: Check,
    pub square_relation: Check,
    pub acute_angles_pure: Check,
    pub mixture_counterexample: Option<MixtureWitness>,
}

/// Three mixtures of point masses on `nodes` violating the triangle
/// inequality for `ρ_E²`: `ρ_E²(x, z) − ρ_E²(x, y) − ρ_E²(y, z) = violation`.
#[derive(Debug, Clone)]
pub struct MixtureWitness {
    pub nodes: [usize; 3],
    /// Mixture weights over `nodes` for `x`, `y`, `z`.
    pub weights: [[f64; 3]; 3],
    pub violation: f64,
}

#[derive(Debug, Clone)]
pub struct MaximumPrincipleReport {
    /// `Δf = 0` on `Y`.
    pub harmonic: Check,
    /// If `f` attains `m = max_{Ȳ} f` on connected `Y`, then `f ≡ m` on `Ȳ`.
    pub principle: Check,
    pub max: f64,
    pub argmax: Vec<usize>,
    pub attained_inside: bool,
    pub y_connected: bool,
}

/// `f = δ_x − r δ_y` with `E(f⁺, f⁺) > E(f, f)`.
#[derive(Debug, Clone)]
pub struct MarkovViolation {
    pub x: usize,
    pub y: usize,
    pub r: f64,
    pub f: Element,
    pub function: PiecewiseLinear,
    pub energy_before: f64,
    pub energy_after: f64,
    pub violation: f64,
}

impl MarkovViolation {
    pub fn witness(&self) -> Witness {
        Witness::Markov {
            element: self.f.clone(),
            function: self.function.to_string(),
            lhs: self.energy_after.max(0.0).sqrt(),
            rhs: self.energy_before.max(0.0).sqrt(),
        }
    }
}

fn validate(c: &RMatrix, allow_negative: bool) -> Result<()> {
    if c.nrows() != c.ncols() || c.nrows() == 0 {
        return Err(Error::Conductance(format!(
            "matrix is {}x{}, expected nonempty square",
            c.nrows(),
            c.ncols()
        )));
    }
    let n = c.nrows();
    for x in 0..n {
        if c[(x, x)] != 0.0 {
            return Err(Error::Conductance(format!(
                "c[{x}][{x}] = {} is not zero",
                c[(x, x)]
            )));
        }
        for y in 0..n {
            let v = c[(x, y)];
            if !v.is_finite() {
                return Err(Error::Conductance(format!("c[{x}][{y}] is not finite")));
            }
            if v != c[(y, x)] {
                return Err(Error::Conductance(format!("c[{x}][{y}] != c[{y}][{x}]")));
            }
            if v < 0.0 && !allow_negative {
                return Err(Error::Conductance(format!("c[{x}][{y}] = {v} is negative")));
            }
        }
    }
    Ok(())
}

impl ResistanceNetwork {
    /// Strict constructor: `c` must be symmetric with zero diagonal and
    /// nonnegative entries.
    pub fn new(c: RMatrix) -> Result<Self> {
        validate(&c, false)?;
        Ok(Self::build(c, false))
    }

    /// Replaces `c` by `(c + cᵀ)/2`. The flag reports whether `c` was asymmetric.
    pub fn symmetrized(c: RMatrix) -> Result<(Self, bool)> {
        if c.nrows() != c.ncols() {
            return Err(Error::Conductance(
                "conductance matrix is not square".into(),
            ));
        }
        let sym = (&c + c.transpose()) * 0.5;
        let changed = sym != c;
        Ok((Self::new(sym)?, changed))
    }

    /// Symmetric conductances that may be negative; the resulting form is not
    /// Markov. Used to exhibit Markov violations.
    pub fn with_negative(c: RMatrix) -> Result<Self> {
        validate(&c, true)?;
        Ok(Self::build(c, true))
    }

    fn build(c: RMatrix, allow_negative: bool) -> Self {
        ResistanceNetwork {
            algebra: Algebra::commutative(c.nrows()),
            c,
            allow_negative,
        }
    }

    pub fn size(&self) -> usize {
        self.c.nrows()
    }

    pub fn conductances(&self) -> &RMatrix {
        &self.c
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn allows_negative(&self) -> bool {
        self.allow_negative
    }

    /// `ĉ(x) = Σ_y c_xy`.
    pub fn degree(&self, x: usize) -> f64 {
        self.c.row(x).sum()
    }

    /// The network CdC at scale `1/2`.
    pub fn cdc(&self) -> Result<CdCForm> {
        network_cdc(&self.algebra, &self.c, 0.5, self.allow_negative)
    }

    pub fn energy_form(&self, tol: &Tolerances) -> Result<EnergyForm> {
        energy_form(&self.cdc()?, tol, self.allow_negative)
    }

    /// `Δ = C − T` with `(Tf)(x) = Σ_y c_xy f(y)` and `C` multiplication by `ĉ`.
    pub fn laplacian(&self, tol: &Tolerances) -> Result<Laplacian> {
        let n = self.size();
        let m = RMatrix::from_fn(n, n, |x, y| {
            if x == y {
                self.degree(x)
            } else {
                -self.c[(x, y)]
            }
        });
        Laplacian::from_superop(
            SuperOperator::from_matrix(&self.algebra, to_complex(&m))?,
            tol,
        )
    }

    /// Connectivity of the graph with an edge wherever `c_xy ≠ 0`.
    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for (y, flag) in seen.iter_mut().enumerate() {
                    if !*flag && self.c[(x, y)] != 0.0 {
                        *flag = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn check_node(&self, p: usize) -> Result<()> {
        if p >= self.size() {
            return Err(Error::InvalidArgument(format!(
                "node {p} out of range for {} nodes",
                self.size()
            )));
        }
        Ok(())
    }

    /// `h_pq`: the trace-zero solution of `Δh = δ_p − δ_q`.
    pub fn potential(&self, p: usize, q: usize) -> Result<Element> {
        self.check_node(p)?;
        self.check_node(q)?;
        if p == q {
            return Err(Error::InvalidArgument("potential needs p != q".into()));
        }
        if !self.is_connected() {
            return Err(Error::Disconnected(format!(
                "network has {} components",
                self.components().len()
            )));
        }
        let lap = self.laplacian(&Tolerances::default())?;
        let mut rhs = vec![0.0; self.size()];
        rhs[p] = 1.0;
        rhs[q] = -1.0;
        let h = lap.pseudo_inverse()
            * nalgebra::DVector::from_iterator(rhs.len(), rhs.iter().map(|&v| C64::new(v, 0.0)));
        let vals: Vec<f64> = h.iter().map(|z| z.re).collect();
        Element::from_values(&self.algebra, &vals)
    }

    /// `ρ_r(p, q) = h_pq(p) − h_pq(q)`.
    pub fn resistance_distance(&self, p: usize, q: usize) -> Result<f64> {
        self.check_node(p)?;
        self.check_node(q)?;
        if p == q {
            return Ok(0.0);
        }
        let h = self.potential(p, q)?.real_values();
        Ok(h[p] - h[q])
    }

    /// All pairwise resistances; `None` between different components.
    pub fn resistance_matrix(&self) -> Result<Vec<Vec<Option<f64>>>> {
        let n = self.size();
        let comps = self.components();
        let comp_of = |x: usize| comps.iter().position(|c| c.contains(&x)).unwrap();
        let lap = self.laplacian(&Tolerances::default())?;
        let g = lap.pseudo_inverse();
        let mut out = vec![vec![Some(0.0); n]; n];
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    out[p][q] = (comp_of(p) == comp_of(q))
                        .then(|| (g[(p, p)] + g[(q, q)] - g[(p, q)] - g[(q, p)]).re);
                }
            }
        }
        Ok(out)
    }

    fn point_states(&self) -> Vec<State> {
        (0..self.size())
            .map(|x| State::point(&self.algebra, x).expect("commutative"))
            .collect()
    }

    /// Triangle inequality for `ρ_r`, `ρ_r = ρ_E²`, acute angles between pure
    /// states in the Hilbert embedding, and a grid search over mixtures of
    /// three seeded nodes for a triangle violation of `ρ_E²`.
    pub fn metric_checks(&self, seed: u64, tol: &Tolerances) -> Result<MetricReport> {
        if !self.is_connected() {
            return Err(Error::Disconnected(
                "metric checks need a connected network".into(),
            ));
        }
        let n = self.size();
        let lap = self.laplacian(tol)?;
        let rho: Vec<Vec<f64>> = (0..n)
            .map(|p| (0..n).map(|q| self.resistance_distance(p, q)).collect())
            .collect::<Result<_>>()?;

        let mut tri = (0.0f64, vec![]);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let excess = rho[x][z] - rho[x][y] - rho[y][z];
                    if excess > tri.0 {
                        tri = (excess, vec![x, y, z]);
                    }
                }
            }
        }
        let triangle = Check::within("triangle", tri.0, 1e-10)
            .witness_if_failed(|| Witness::Indices(tri.1.clone()));

        let pts = self.point_states();
        let mut sq = (0.0f64, vec![]);
        for p in 0..n {
            for q in p + 1..n {
                let d = energy_metric(&lap, &pts[p], &pts[q])?;
                let r = (d * d - rho[p][q]).abs() / (1.0 + rho[p][q]);
                if r > sq.0 {
                    sq = (r, vec![p, q]);
                }
            }
        }
        let square_relation = Check::within("square_relation", sq.0, 1e-10)
            .witness_if_failed(|| Witness::Indices(sq.1.clone()));

        let emb: Vec<Vec<C64>> = pts
            .iter()
            .map(|s| embed_state(&lap, s, &pts[0]))
            .collect::<Result<_>>()?;
        let mut acute = (0.0f64, vec![]);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let inner: f64 = (0..emb[y].len())
                        .map(|k| ((emb[x][k] - emb[y][k]).conj() * (emb[z][k] - emb[y][k])).re)
                        .sum();
                    if -inner > acute.0 {
                        acute = (-inner, vec![x, y, z]);
                    }
                }
            }
        }
        let acute_angles_pure = Check::within("acute_angles_pure", acute.0, 1e-10)
            .witness_if_failed(|| Witness::Indices(acute.1.clone()));

        let mixture_counterexample = if n >= 3 {
            self.mixture_search(&lap, seed, tol)?
        } else {
            None
        };
        Ok(MetricReport {
            triangle,
            square_relation,
            acute_angles_pure,
            mixture_counterexample,
        })
    }

    fn mixture_search(
        &self,
        lap: &Laplacian,
        seed: u64,
        tol: &Tolerances,
    ) -> Result<Option<MixtureWitness>> {
        let n = self.size();
        let nodes = if n == 3 {
            [0, 1, 2]
        } else {
            let mut s = Sampler::new(seed);
            let mut pick: Vec<usize> = Vec::new();
            while pick.len() < 3 {
                let x = s.index(n);
                if !pick.contains(&x) {
                    pick.push(x);
                }
            }
            pick.sort_unstable();
            [pick[0], pick[1], pick[2]]
        };
        let pts = self.point_states();
        let corners = [
            pts[nodes[0]].clone(),
            pts[nodes[1]].clone(),
            pts[nodes[2]].clone(),
        ];
        let mut grid = Vec::new();
        for i in 0..=GRID_STEPS {
            for j in 0..=GRID_STEPS - i {
                let k = GRID_STEPS - i - j;
                let s = GRID_STEPS as f64;
                grid.push([i as f64 / s, j as f64 / s, k as f64 / s]);
            }
        }
        let base = &corners[0];
        let emb: Vec<Vec<C64>> = grid
            .iter()
            .map(|w| embed_state(lap, &State::mixture(&corners, w)?, base))
            .collect::<Result<_>>()?;
        let m = grid.len();
        let d2: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| embedding_distance(&emb[i], &emb[j]).powi(2))
                    .collect()
            })
            .collect();
        let mut best = (0.0f64, [0usize; 3]);
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    let v = d2[x][z] - d2[x][y] - d2[y][z];
                    if v > best.0 {
                        best = (v, [x, y, z]);
                    }
                }
            }
        }
        Ok((best.0 > tol.eq).then(|| MixtureWitness {
            nodes,
            weights: [grid[best.1[0]], grid[best.1[1]], grid[best.1[2]]],
            violation: best.0,
        }))
    }

    /// Checks harmonicity of `f` on `Y` and the maximum principle on `Ȳ`,
    /// `Y` together with its neighbours.
    pub fn maximum_principle_check(
        &self,
        f: &Element,
        y: &[usize],
        tol: &Tolerances,
    ) -> Result<MaximumPrincipleReport> {
        if f.algebra().as_ref() != self.algebra.as_ref() {
            return Err(Error::AlgebraMismatch);
        }
        if f.values().iter().any(|z| z.im.abs() > tol.eq) {
            return Err(Error::InvalidArgument("f must be real-valued".into()));
        }
        if y.is_empty() {
            return Err(Error::InvalidArgument("Y must be nonempty".into()));
        }
        for &p in y {
            self.check_node(p)?;
        }
        let n = self.size();
        let fv = f.real_values();
        let lap = self.laplacian(tol)?;
        let df = lap.apply(f).real_values();
        let scale = 1.0 + fv.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let (hres, hnode) = y
            .iter()
            .map(|&p| (df[p].abs(), p))
            .fold((0.0, y[0]), |a, b| if b.0 > a.0 { b } else { a });
        let harmonic = Check::within("harmonic_on_y", hres, tol.eq * scale)
            .witness_if_failed(|| Witness::Indices(vec![hnode]));

        let mut closure: Vec<usize> = y.to_vec();
        for &p in y {
            for q in 0..n {
                if self.c[(p, q)] != 0.0 && !closure.contains(&q) {
                    closure.push(q);
                }
            }
        }
        closure.sort_unstable();
        let max = closure
            .iter()
            .map(|&p| fv[p])
            .fold(f64::NEG_INFINITY, f64::max);
        let close = |v: f64| (v - max).abs() <= tol.eq * scale;
        let argmax: Vec<usize> = closure.iter().copied().filter(|&p| close(fv[p])).collect();
        let attained_inside = y.iter().any(|&p| close(fv[p]));
        let y_connected = self.induced_connected(y);
        let spread = closure
            .iter()
            .map(|&p| (fv[p] - max).abs())
            .fold(0.0, f64::max);
        let principle = if harmonic.passed && attained_inside && y_connected {
            Check::within("maximum_principle", spread, tol.eq * scale)
        } else {
            Check::new("maximum_principle", true, 0.0)
        };
        Ok(MaximumPrincipleReport {
            harmonic,
            principle,
            max,
            argmax,
            attained_inside,
            y_connected,
        })
    }

    fn induced_connected(&self, y: &[usize]) -> bool {
        let mut seen = vec![y[0]];
        let mut queue = VecDeque::from([y[0]]);
        while let Some(x) = queue.pop_front() {
            for &z in y {
                if !seen.contains(&z) && self.c[(x, z)] != 0.0 {
                    seen.push(z);
                    queue.push_back(z);
                }
            }
        }
        seen.len() == y.iter().collect::<std::collections::BTreeSet<_>>().len()
    }

    /// Where `h_pq` attains its extremes, with a check of
    /// `h_pq(q) ≤ h_pq(x) ≤ h_pq(p)`.
    pub fn potential_extrema(&self, p: usize, q: usize) -> Result<(usize, usize, Check)> {
        let h = self.potential(p, q)?.real_values();
        let argmax = (0..h.len()).fold(p, |b, x| if h[x] > h[b] + 1e-12 { x } else { b });
        let argmin = (0..h.len()).fold(q, |b, x| if h[x] < h[b] - 1e-12 { x } else { b });
        let excess = h
            .iter()
            .map(|&v| (v - h[p]).max(h[q] - v))
            .fold(0.0, f64::max);
        let check = Check::within("potential_extrema", excess, 1e-10)
            .witness_if_failed(|| Witness::Indices(vec![argmax, argmin]));
        Ok((argmax, argmin, check))
    }

    /// For the most negative `c_xy`, the function `f = δ_x − r δ_y` with
    /// `r = −c_xy / ĉ(y)`, whose positive part `δ_x` has strictly larger
    /// energy. `None` when all conductances are nonnegative.
    pub fn markov_violation_witness(&self, tol: &Tolerances) -> Result<Option<MarkovViolation>> {
        let n = self.size();
        let lap_m = RMatrix::from_fn(n, n, |x, y| {
            if x == y {
                self.degree(x)
            } else {
                -self.c[(x, y)]
            }
        });
        let eig = hermitian_eigenvalues(&to_complex(&lap_m));
        let top = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if eig[0] < -tol.pos * (1.0 + top) {
            return Err(Error::InvalidArgument(format!(
                "energy form is not nonnegative (eigenvalue {:.3e})",
                eig[0]
            )));
        }
        let mut worst = (0.0f64, 0, 0);
        for x in 0..n {
            for y in 0..n {
                if x != y && self.c[(x, y)] < worst.0 {
                    worst = (self.c[(x, y)], x, y);
                }
            }
        }
        if worst.0 >= 0.0 {
            return Ok(None);
        }
        let (cxy, x, y) = worst;
        let cy = self.degree(y);
        let r = if cy > 0.0 { -cxy / cy } else { 1.0 };
        let mut vals = vec![0.0; n];
        vals[x] = 1.0;
        vals[y] = -r;
        let f = Element::from_values(&self.algebra, &vals)?;
        let function = PiecewiseLinear::positive_part();
        let (ff, _) = functional_calculus(&f, &function, tol.eq)?;
        let energy = |v: &Element| -> f64 {
            let vv = v.real_values();
            let mut acc = 0.0;
            for a in 0..n {
                for b in a + 1..n {
                    acc += self.c[(a, b)] * (vv[a] - vv[b]).powi(2);
                }
            }
            acc
        };
        let (before, after) = (energy(&f), energy(&ff));
        Ok(Some(MarkovViolation {
            x,
            y,
            r,
            f,
            function,
            energy_before: before,
            energy_after: after,
            violation: after - before,
        }))
    }

    /// Pseudo-inverse of the Laplacian as a real matrix.
    pub fn green_matrix(&self) -> Result<RMatrix> {
        let lap = self.laplacian(&Tolerances::default())?;
        let g = hermitian_pinv(lap.matrix(), 1e-10);
        Ok(g.map(|z| z.re))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::laplacian;

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

    fn path3() -> ResistanceNetwork {
        ResistanceNetwork::new(RMatrix::from_row_slice(
            3,
            3,
            &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0],
        ))
        .unwrap()
    }

    #[test]
    fn k3_laplacian_and_energy_route_agree() {
        let net = k3();
        let lap = net.laplacian(&tol()).unwrap();
        let want =
            RMatrix::from_row_slice(3, 3, &[2.0, -1.0, -1.0, -1.0, 2.0, -1.0, -1.0, -1.0, 2.0]);
        assert!(crate::linalg::max_abs(&(lap.matrix() - to_complex(&want))) < 1e-15);
        let via = laplacian(&net.energy_form(&tol()).unwrap(), &tol()).unwrap();
        assert!(lap.max_abs_diff(&via) < 1e-14);
        assert!(lap.apply(&Element::identity(net.algebra())).max_abs() < 1e-15);
    }

    #[test]
    fn k3_potential_and_resistance() {
        let net = k3();
        let h = net.potential(0, 1).unwrap().real_values();
        for (a, b) in h.iter().zip([1.0 / 3.0, -1.0 / 3.0, 0.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        let h10 = net.potential(1, 0).unwrap().real_values();
        assert!(h.iter().zip(&h10).all(|(a, b)| (a + b).abs() < 1e-14));
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            assert!((net.resistance_distance(p, q).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        }
        assert_eq!(net.resistance_distance(1, 1).unwrap(), 0.0);
        assert!(net.potential(1, 1).is_err());
    }

    #[test]
    fn two_node_closed_forms() {
        let c = 4.0;
        let net = ResistanceNetwork::new(RMatrix::from_row_slice(2, 2, &[0.0, c, c, 0.0])).unwrap();
        let h = net.potential(0, 1).unwrap().real_values();
        assert!((h[0] - 0.5 / c).abs() < 1e-14 && (h[1] + 0.5 / c).abs() < 1e-14);
        assert!((net.resistance_distance(0, 1).unwrap() - 1.0 / c).abs() < 1e-14);
    }

    #[test]
    fn path_is_additive() {
        let net = path3();
        let r = |p, q| net.resistance_distance(p, q).unwrap();
        assert!((r(0, 2) - 2.0).abs() < 1e-12);
        assert!((r(0, 2) - r(0, 1) - r(1, 2)).abs() < 1e-12);
        let rep = net.metric_checks(0, &tol()).unwrap();
        assert!(rep.triangle.passed && rep.square_relation.passed && rep.acute_angles_pure.passed);
    }

    #[test]
    fn k3_metric_checks_and_mixture_witness() {
        let rep = k3().metric_checks(0, &tol()).unwrap();
        assert!(rep.triangle.passed && rep.square_relation.passed && rep.acute_angles_pure.passed);
        let w = rep.mixture_counterexample.expect("witness on K3");
        // δ_1, the midpoint, δ_2 already gives 2/3 − 1/6 − 1/6.
        assert!(w.violation >= 1.0 / 3.0 - 1e-12);
    }

    #[test]
    fn resistance_matches_green_function_oracle() {
        let mut s = Sampler::new(21);
        for n in 3..8 {
            let net = ResistanceNetwork::new(s.connected_conductances(n, 0.4)).unwrap();
            let g = net.green_matrix().unwrap();
            let m = net.resistance_matrix().unwrap();
            for p in 0..n {
                for q in 0..n {
                    let want = g[(p, p)] + g[(q, q)] - 2.0 * g[(p, q)];
                    let got = net.resistance_distance(p, q).unwrap();
                    assert!((got - want).abs() < 1e-10);
                    assert!((m[p][q].unwrap() - want).abs() < 1e-10);
                }
            }
            let lap = net.laplacian(&tol()).unwrap();
            let h = net.potential(0, n - 1).unwrap();
            let dh = lap.apply(&h).real_values();
            for (x, v) in dh.iter().enumerate() {
                let want = if x == 0 {
                    1.0
                } else if x == n - 1 {
                    -1.0
                } else {
                    0.0
                };
                assert!((v - want).abs() < 1e-10);
            }
            let (mx, mn, chk) = net.potential_extrema(0, n - 1).unwrap();
            assert!(chk.passed);
            assert_eq!((mx, mn), (0, n - 1));
        }
    }

    #[test]
    fn connectivity_agrees_with_kernel() {
        let mut s = Sampler::new(3);
        for _ in 0..20 {
            let net = ResistanceNetwork::new(s.conductances(6, 0.25, 0.5, 1.5)).unwrap();
            let lap = net.laplacian(&tol()).unwrap();
            assert_eq!(net.components().len(), lap.kernel_dim());
        }
        let split = ResistanceNetwork::new(RMatrix::from_row_slice(
            3,
            3,
            &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        ))
        .unwrap();
        assert!(matches!(
            split.resistance_distance(0, 2),
            Err(Error::Disconnected(_))
        ));
        assert_eq!(split.resistance_matrix().unwrap()[0][2], None);
    }

    #[test]
    fn construction_rules() {
        let asym = RMatrix::from_row_slice(2, 2, &[0.0, 1.0, 3.0, 0.0]);
        assert!(ResistanceNetwork::new(asym.clone()).is_err());
        let (net, changed) = ResistanceNetwork::symmetrized(asym).unwrap();
        assert!(changed);
        assert_eq!(net.conductances()[(0, 1)], 2.0);
        let neg = RMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        assert!(ResistanceNetwork::new(neg.clone()).is_err());
        assert!(ResistanceNetwork::with_negative(neg).is_ok());
        let diag = RMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 0.0]);
        assert!(ResistanceNetwork::new(diag).is_err());
    }

    #[test]
    fn maximum_principle() {
        let net = k3();
        let one = Element::identity(net.algebra());
        let rep = net.maximum_principle_check(&one, &[0, 1], &tol()).unwrap();
        assert!(rep.harmonic.passed && rep.principle.passed);
        let h = net.potential(0, 1).unwrap();
        let rep = net.maximum_principle_check(&h, &[2], &tol()).unwrap();
        assert!(rep.harmonic.passed);
        assert_eq!(rep.argmax, vec![0]);
        assert!(!rep.attained_inside);
        let f = Element::from_values(net.algebra(), &[1.0, 0.0, 0.0]).unwrap();
        let rep = net.maximum_principle_check(&f, &[0], &tol()).unwrap();
        assert!(!rep.harmonic.passed);
    }

    #[test]
    fn markov_violation_from_negative_conductance() {
        let c = RMatrix::from_row_slice(3, 3, &[0.0, -0.1, 1.0, -0.1, 0.0, 1.0, 1.0, 1.0, 0.0]);
        let net = ResistanceNetwork::with_negative(c).unwrap();
        let w = net
            .markov_violation_witness(&tol())
            .unwrap()
            .expect("witness");
        assert_eq!((w.x, w.y), (0, 1));
        assert!(w.r > 0.0 && w.r < 0.2);
        let predicted = -2.0 * w.r * (-0.1) - w.r * w.r * net.degree(1);
        assert!((w.violation - predicted).abs() < 1e-12);
        assert!((w.violation - 0.01 / 0.9).abs() < 1e-12);
        assert!(k3().markov_violation_witness(&tol()).unwrap().is_none());
        let bad = RMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        let net = ResistanceNetwork::with_negative(bad).unwrap();
        assert!(net.markov_violation_witness(&tol()).is_err());
    }
}
