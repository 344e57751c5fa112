use super::{complete_markov_check, energy_reality, gamma_delta, laplacian, EnergyForm};
use crate::cdc::{is_cdc, CdCForm};
use crate::{Check, Element, Error, Result, Tolerances, Witness};

const MARKOV_SAMPLES: usize = 20;

/// Reconstructs the real CdC form `Γ_Δ` whose trace is `E`. With `checks`
/// set, `E` must pass the complete Markov check at `n = 1, 2`; a failing check
/// is returned inside [`Error::Rejected`] with its witness.
pub fn cdc_from_dirichlet_form(
    e: &EnergyForm,
    checks: bool,
    seed: u64,
    tol: &Tolerances,
) -> Result<CdCForm> {
    let real = energy_reality(e, tol);
    if !real.passed {
        return Err(Error::Rejected(Box::new(real)));
    }
    if checks {
        for c in complete_markov_check(e, seed, MARKOV_SAMPLES, tol.eq) {
            if !c.passed {
                return Err(Error::Rejected(Box::new(c)));
            }
        }
    }
    let lap = laplacian(e, tol)?;
    let gamma = gamma_delta(&lap, tol)?;

    let alg = e.algebra();
    let d = alg.dim();
    let scale = 1.0 + crate::linalg::max_abs(e.gram());
    let mut worst = (0.0, 0, 0);
    for i in 0..d {
        for j in 0..d {
            let r = (gamma.entry(i, j).tau() - e.gram()[(i, j)]).norm();
            if r > worst.0 {
                worst = (r, i, j);
            }
        }
    }
    let trace =
        Check::within("trace_reconstruction", worst.0, tol.eq * scale).witness_if_failed(|| {
            Witness::Elements(vec![
                Element::basis(alg, worst.1),
                Element::basis(alg, worst.2),
            ])
        });
    if !trace.passed {
        return Err(Error::Rejected(Box::new(trace)));
    }
    let rep = is_cdc(&gamma, tol);
    if !rep.is_cdc() {
        return Err(Error::NotCdc(rep.failures().join(", ")));
    }
    Ok(gamma)
}
