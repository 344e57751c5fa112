use std::fmt;

use super::Element;
use crate::linalg::{hermitian_eigen, hermitian_part};
use crate::{CMatrix, Error, Result, C64};

/// A continuous piecewise-linear function `ℝ → ℝ`: linear interpolation
/// between sorted knots, extended linearly with the given end slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
    left_slope: f64,
    right_slope: f64,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<(f64, f64)>, left_slope: f64, right_slope: f64) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidArgument("need at least one knot".into()));
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidArgument(
                "knots must have strictly increasing abscissae".into(),
            ));
        }
        Ok(PiecewiseLinear {
            knots,
            left_slope,
            right_slope,
        })
    }

    pub fn identity() -> Self {
        PiecewiseLinear::affine(1.0, 0.0)
    }

    /// `t ↦ slope·t + intercept`.
    pub fn affine(slope: f64, intercept: f64) -> Self {
        PiecewiseLinear::new(vec![(0.0, intercept)], slope, slope).unwrap()
    }

    /// `max(t, 0)`.
    pub fn positive_part() -> Self {
        PiecewiseLinear::new(vec![(0.0, 0.0)], 0.0, 1.0).unwrap()
    }

    /// `min(t, r)`.
    pub fn clamp_above(r: f64) -> Self {
        PiecewiseLinear::new(vec![(r, r)], 1.0, 0.0).unwrap()
    }

    /// `|t|`.
    pub fn abs() -> Self {
        PiecewiseLinear::new(vec![(0.0, 0.0)], -1.0, 1.0).unwrap()
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (x0, y0) = self.knots[0];
        if x <= x0 {
            return y0 + self.left_slope * (x - x0);
        }
        let (xl, yl) = *self.knots.last().unwrap();
        if x >= xl {
            return yl + self.right_slope * (x - xl);
        }
        let k = self.knots.partition_point(|&(kx, _)| kx <= x) - 1;
        let ((xa, ya), (xb, yb)) = (self.knots[k], self.knots[k + 1]);
        ya + (yb - ya) * (x - xa) / (xb - xa)
    }

    /// Segments as `(start, end, slope)`, with infinite ends.
    fn segments(&self) -> Vec<(f64, f64, f64)> {
        let mut out = vec![(f64::NEG_INFINITY, self.knots[0].0, self.left_slope)];
        for w in self.knots.windows(2) {
            out.push((w[0].0, w[1].0, (w[1].1 - w[0].1) / (w[1].0 - w[0].0)));
        }
        out.push((
            self.knots.last().unwrap().0,
            f64::INFINITY,
            self.right_slope,
        ));
        out
    }

    /// Lipschitz constant on `[lo, hi]`: the largest slope magnitude among
    /// segments overlapping the interval. Zero on a single point.
    pub fn lipschitz_on(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        self.segments()
            .into_iter()
            .filter(|&(s0, s1, _)| s0 < hi && s1 > lo)
            .map(|(_, _, m)| m.abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for PiecewiseLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pl[slope {}", self.left_slope)?;
        for (x, y) in &self.knots {
            write!(f, "; ({x}, {y})")?;
        }
        write!(f, "; slope {}]", self.right_slope)
    }
}

/// `F(a)` for self-adjoint `a`, together with `Lip(F)` on the convex hull of
/// the spectrum of `a`.
pub fn functional_calculus(a: &Element, f: &PiecewiseLinear, tol: f64) -> Result<(Element, f64)> {
    let defect = a.self_adjoint_defect();
    if defect > tol * (1.0 + a.operator_norm()) {
        return Err(Error::NotSelfAdjoint(defect));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let blocks: Vec<CMatrix> = a
        .blocks()
        .iter()
        .map(|m| {
            let (vals, vecs) = hermitian_eigen(&hermitian_part(m));
            for &v in &vals {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                vals.len(),
                vals.iter().map(|&v| C64::new(f.eval(v), 0.0)),
            ));
            &vecs * d * vecs.adjoint()
        })
        .collect();
    let fa = Element::from_blocks(a.algebra(), blocks)?;
    Ok((fa, f.lipschitz_on(lo, hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::sampling::Sampler;

    #[test]
    fn eval_and_lipschitz() {
        let f = PiecewiseLinear::new(vec![(0.0, 0.0), (1.0, 2.0), (3.0, 2.0)], 0.5, -1.0).unwrap();
        assert_eq!(f.eval(-2.0), -1.0);
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(2.0), 2.0);
        assert_eq!(f.eval(4.0), 1.0);
        assert_eq!(f.lipschitz_on(1.5, 2.5), 0.0);
        assert_eq!(f.lipschitz_on(-1.0, 0.5), 2.0);
        assert_eq!(f.lipschitz_on(2.0, 10.0), 1.0);
        assert_eq!(f.lipschitz_on(0.3, 0.3), 0.0);
        assert!(PiecewiseLinear::new(vec![(1.0, 0.0), (1.0, 1.0)], 0.0, 0.0).is_err());
    }

    #[test]
    fn identity_returns_input() {
        let a = Algebra::new(vec![2, 1], vec![1.0, 1.0]).unwrap();
        let x = Sampler::new(4).self_adjoint(&a);
        let (fx, lip) = functional_calculus(&x, &PiecewiseLinear::identity(), 1e-9).unwrap();
        assert!(fx.max_abs_diff(&x) < 1e-12);
        assert_eq!(lip, 1.0);
    }

    #[test]
    fn clamp_on_diagonal() {
        let a = Algebra::commutative(2);
        let x = Element::from_values(&a, &[2.0, 0.0]).unwrap();
        let (fx, lip) = functional_calculus(&x, &PiecewiseLinear::clamp_above(1.0), 1e-9).unwrap();
        assert_eq!(fx.real_values(), vec![1.0, 0.0]);
        assert_eq!(lip, 1.0);
    }

    #[test]
    fn abs_of_flip_is_identity() {
        let a = Algebra::matrix(2);
        let x = &Element::unit(&a, 0, 0, 1) + &Element::unit(&a, 0, 1, 0);
        let (fx, _) = functional_calculus(&x, &PiecewiseLinear::abs(), 1e-9).unwrap();
        assert!(fx.max_abs_diff(&Element::identity(&a)) < 1e-12);
    }

    #[test]
    fn rejects_non_self_adjoint() {
        let a = Algebra::matrix(2);
        let x = Element::unit(&a, 0, 0, 1);
        assert!(matches!(
            functional_calculus(&x, &PiecewiseLinear::abs(), 1e-9),
            Err(Error::NotSelfAdjoint(_))
        ));
    }

    #[test]
    fn polynomial_values_are_multiplicative() {
        // interpolating t² at the eigenvalues must reproduce x·x
        let a = Algebra::matrix(3);
        let mut s = Sampler::new(6);
        let x = s.self_adjoint(&a);
        let spec = x.spectrum();
        let knots: Vec<(f64, f64)> = spec.iter().map(|&v| (v, v * v)).collect();
        let sq = PiecewiseLinear::new(knots, 0.0, 0.0).unwrap();
        let (fx, _) = functional_calculus(&x, &sq, 1e-9).unwrap();
        assert!(fx.max_abs_diff(&(&x * &x)) < 1e-9);
    }
}
