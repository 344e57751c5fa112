use std::sync::Arc;

use super::EnergyForm;
use crate::sampling::Sampler;
use crate::{functional_calculus, Algebra, Check, Element, PiecewiseLinear, Witness};

/// Test functions for the Markov inequality.
#[derive(Debug, Clone)]
pub enum BatteryFn {
    /// `max(t, 0)`.
    PositivePart,
    /// `min(t, ‖a‖)`, depending on the sample `a`.
    ClampAtNorm,
    /// `|t|`.
    Abs,
    Fixed(PiecewiseLinear),
}

impl BatteryFn {
    pub fn resolve(&self, a: &Element) -> PiecewiseLinear {
        match self {
            BatteryFn::PositivePart => PiecewiseLinear::positive_part(),
            BatteryFn::ClampAtNorm => PiecewiseLinear::clamp_above(a.operator_norm()),
            BatteryFn::Abs => PiecewiseLinear::abs(),
            BatteryFn::Fixed(f) => f.clone(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            BatteryFn::PositivePart => "max(t,0)".into(),
            BatteryFn::ClampAtNorm => "min(t,|a|)".into(),
            BatteryFn::Abs => "|t|".into(),
            BatteryFn::Fixed(f) => f.to_string(),
        }
    }
}

/// `max(t,0)`, `min(t, ‖a‖)`, `|t|` and one seeded three-knot function.
pub fn default_battery(seed: u64) -> Vec<BatteryFn> {
    let mut s = Sampler::new(seed);
    let mut xs: Vec<f64> = (0..3).map(|_| s.uniform(-1.5, 1.5)).collect();
    xs.sort_by(f64::total_cmp);
    let knots = xs.into_iter().map(|x| (x, s.uniform(-1.0, 1.0))).collect();
    let pl = PiecewiseLinear::new(knots, s.uniform(-2.0, 2.0), s.uniform(-2.0, 2.0))
        .expect("distinct random knots");
    vec![
        BatteryFn::PositivePart,
        BatteryFn::ClampAtNorm,
        BatteryFn::Abs,
        BatteryFn::Fixed(pl),
    ]
}

/// Self-adjoint test elements: `P − rQ` for pairs of diagonal matrix units and
/// a few `r ∈ (0, 1)` (on `C(X)` these are the functions `δ_x − r δ_y`), plus
/// `count` seeded random self-adjoint elements.
pub fn markov_samples(algebra: &Arc<Algebra>, seed: u64, count: usize) -> Vec<Element> {
    let units: Vec<Element> = algebra
        .unit_indices()
        .into_iter()
        .map(|i| Element::basis(algebra, i))
        .collect();
    let mut out = Vec::new();
    for (i, p) in units.iter().enumerate() {
        for (j, q) in units.iter().enumerate() {
            if i == j {
                continue;
            }
            for r in [0.01, 0.05, 0.1, 0.25, 0.5] {
                out.push(p - &q.scale_re(r));
            }
        }
    }
    let mut s = Sampler::new(seed);
    out.extend((0..count).map(|_| s.self_adjoint(algebra)));
    out
}

/// Checks `L(F(a)) ≤ Lip(F)|_{hull σ(a)} · L(a)` for every sample and battery
/// function, with absolute slack `slack · max(1, rhs)`. Non-self-adjoint
/// samples are skipped.
pub fn markov_check(
    e: &EnergyForm,
    battery: &[BatteryFn],
    samples: &[Element],
    slack: f64,
) -> Check {
    let mut residual = 0.0f64;
    let mut witness = None;
    for a in samples {
        let la = e.seminorm(a);
        for f in battery {
            let pl = f.resolve(a);
            let Ok((fa, lip)) = functional_calculus(a, &pl, 1e-9) else {
                continue;
            };
            let lhs = e.seminorm(&fa);
            let rhs = lip * la;
            let excess = lhs - rhs;
            if excess > residual {
                residual = excess;
            }
            if excess > slack * rhs.max(1.0) && witness.is_none() {
                witness = Some(Witness::Markov {
                    element: a.clone(),
                    function: f.name(),
                    lhs,
                    rhs,
                });
            }
        }
    }
    let check = Check::new("markov", witness.is_none(), residual);
    match witness {
        Some(w) => check.with_witness(w),
        None => check,
    }
}

/// [`markov_check`] on `E` and on `E_2` over `M_2(A)`, with the default battery
/// and [`markov_samples`] on each.
pub fn complete_markov_check(e: &EnergyForm, seed: u64, count: usize, slack: f64) -> Vec<Check> {
    let battery = default_battery(seed);
    let mut out = Vec::new();
    for n in [1usize, 2] {
        let en = if n == 1 { e.clone() } else { e.amplify(n) };
        let samples = markov_samples(en.algebra(), seed.wrapping_add(n as u64), count);
        let mut c = markov_check(&en, &battery, &samples, slack);
        c.name = format!("markov_n{n}");
        out.push(c);
    }
    out
}

/// Seeded pairs for [`leibniz_check`]: random elements plus the unit.
pub fn leibniz_samples(algebra: &Arc<Algebra>, seed: u64, count: usize) -> Vec<(Element, Element)> {
    let mut s = Sampler::new(seed);
    let one = Element::identity(algebra);
    let mut out = vec![(one.clone(), one)];
    out.extend((0..count).map(|_| (s.element(algebra), s.element(algebra))));
    out
}

/// Checks `L(ab) ≤ L(a)‖b‖ + ‖a‖L(b)`.
pub fn leibniz_check(e: &EnergyForm, pairs: &[(Element, Element)], slack: f64) -> Check {
    let mut residual = 0.0f64;
    let mut witness = None;
    for (a, b) in pairs {
        let lhs = e.seminorm(&(a * b));
        let rhs = e.seminorm(a) * b.operator_norm() + a.operator_norm() * e.seminorm(b);
        let excess = lhs - rhs;
        residual = residual.max(excess);
        if excess > slack * rhs.max(1.0) && witness.is_none() {
            witness = Some(Witness::Elements(vec![a.clone(), b.clone()]));
        }
    }
    let check = Check::new("leibniz", witness.is_none(), residual);
    match witness {
        Some(w) => check.with_witness(w),
        None => check,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdc::{commutator_cdc, network_cdc};
    use crate::energy::energy_form;
    use crate::{RMatrix, Tolerances};

    fn two_point() -> EnergyForm {
        let a = Algebra::commutative(2);
        let c = RMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        energy_form(
            &network_cdc(&a, &c, 0.5, false).unwrap(),
            &Tolerances::default(),
            false,
        )
        .unwrap()
    }

    #[test]
    fn affine_maps_give_equality() {
        let e = two_point();
        let a = e.algebra().clone();
        let f = Element::from_values(&a, &[0.7, -0.2]).unwrap();
        let (g, lip) = functional_calculus(&f, &PiecewiseLinear::affine(1.0, 3.0), 1e-9).unwrap();
        assert_eq!(lip, 1.0);
        assert!((e.seminorm(&g) - e.seminorm(&f)).abs() < 1e-12);
    }

    #[test]
    fn clamp_on_two_points() {
        let e = two_point();
        let a = e.algebra().clone();
        let f = Element::from_values(&a, &[2.0, 0.0]).unwrap();
        let (g, lip) = functional_calculus(&f, &PiecewiseLinear::clamp_above(1.0), 1e-9).unwrap();
        assert!((e.seminorm(&g) - 1.0).abs() < 1e-12);
        assert!((lip * e.seminorm(&f) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn negative_conductance_is_caught() {
        let a = Algebra::commutative(3);
        let c = RMatrix::from_row_slice(3, 3, &[0.0, -0.1, 1.0, -0.1, 0.0, 1.0, 1.0, 1.0, 0.0]);
        let e = energy_form(
            &network_cdc(&a, &c, 0.5, true).unwrap(),
            &Tolerances::default(),
            true,
        )
        .unwrap();
        let check = markov_check(&e, &default_battery(0), &markov_samples(&a, 0, 5), 1e-9);
        assert!(!check.passed);
        assert!(matches!(check.witness, Some(Witness::Markov { .. })));
    }

    #[test]
    fn lindblad_form_is_completely_markov_and_leibniz() {
        let a = Algebra::matrix(2);
        let mut s = Sampler::new(12);
        let g = commutator_cdc(&[s.element(&a)]).unwrap();
        let e = energy_form(&g, &Tolerances::default(), false).unwrap();
        for c in complete_markov_check(&e, 3, 10, 1e-9) {
            assert!(c.passed, "{} residual {}", c.name, c.residual);
        }
        assert!(leibniz_check(&e, &leibniz_samples(&a, 4, 20), 1e-9).passed);
    }

    #[test]
    fn k3_leibniz() {
        let a = Algebra::commutative(3);
        let c = RMatrix::from_row_slice(3, 3, &[0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0]);
        let e = energy_form(
            &network_cdc(&a, &c, 0.5, false).unwrap(),
            &Tolerances::default(),
            false,
        )
        .unwrap();
        assert!(leibniz_check(&e, &leibniz_samples(&a, 5, 20), 1e-9).passed);
    }
}
