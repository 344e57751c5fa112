use std::sync::Arc;

use super::{is_cdc, CdCForm};
use crate::{Algebra, Element, Error, RMatrix, Result, Tolerances, C64};

fn check_conductances(c: &RMatrix, allow_negative: bool) -> Result<()> {
    if c.nrows() != c.ncols() {
        return Err(Error::Conductance(format!(
            "matrix is {}x{}, expected square",
            c.nrows(),
            c.ncols()
        )));
    }
    for x in 0..c.nrows() {
        if c[(x, x)] != 0.0 {
            return Err(Error::Conductance(format!(
                "c[{x}][{x}] = {} is not zero",
                c[(x, x)]
            )));
        }
        for y in 0..c.ncols() {
            if !c[(x, y)].is_finite() {
                return Err(Error::Conductance(format!("c[{x}][{y}] is not finite")));
            }
            if c[(x, y)] < 0.0 && !allow_negative {
                return Err(Error::Conductance(format!(
                    "c[{x}][{y}] = {} is negative",
                    c[(x, y)]
                )));
            }
        }
    }
    Ok(())
}

/// The CdC of a resistance network on `C(X)`:
/// `Γ(f, g)(y) = scale · Σ_{x≠y} (f̄(x) − f̄(y)) (g(x) − g(y)) c_xy`.
///
/// Negative conductances are refused unless `allow_negative` is set.
pub fn network_cdc(
    algebra: &Arc<Algebra>,
    c: &RMatrix,
    scale: f64,
    allow_negative: bool,
) -> Result<CdCForm> {
    if !algebra.is_commutative() {
        return Err(Error::NotCommutative);
    }
    check_conductances(c, allow_negative)?;
    let n = algebra.dim();
    if c.nrows() != n {
        return Err(Error::Shape(format!(
            "conductances are {}x{} but the algebra has {n} points",
            c.nrows(),
            c.ncols()
        )));
    }
    Ok(CdCForm::from_fn(algebra, scale, |f, g| {
        let (fv, gv) = (f.values(), g.values());
        let vals: Vec<C64> = (0..n)
            .map(|y| {
                let mut acc = C64::new(0.0, 0.0);
                for x in (0..n).filter(|&x| x != y) {
                    acc += (fv[x] - fv[y]).conj() * (gv[x] - gv[y]) * c[(x, y)];
                }
                acc * scale
            })
            .collect();
        Element::from_coords(algebra, &vals)
    }))
}

/// Reads `c_py = Γ(δ_p, δ_p)(y) / scale` off a CdC on a commutative algebra.
pub fn conductances_from_cdc(form: &CdCForm, tol: &Tolerances) -> Result<RMatrix> {
    let alg = form.algebra();
    if !alg.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let report = is_cdc(form, tol);
    if !report.is_cdc() {
        return Err(Error::NotCdc(report.failures().join(", ")));
    }
    if form.scale() == 0.0 {
        return Err(Error::InvalidArgument("form has scale 0".into()));
    }
    let n = alg.dim();
    Ok(RMatrix::from_fn(n, n, |p, y| {
        if p == y {
            0.0
        } else {
            form.entry(p, p).values()[y].re / form.scale()
        }
    }))
}
