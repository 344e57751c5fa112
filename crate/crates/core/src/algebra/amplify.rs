//! `M_n(A)` realized as the algebra with blocks `n·n_i`. An element `X` with
//! entries `x_pq ∈ A` has, in block `i`, the entry `(x_pq)_i[r, s]` at row
//! `p n_i + r`, column `q n_i + s`.

use std::sync::Arc;

use super::{Algebra, Element};
use crate::{CMatrix, C64};

/// The `n × n` entries of `x ∈ M_n(base)`, row-major.
pub fn entries(x: &Element, base: &Arc<Algebra>, n: usize) -> Vec<Element> {
    assert_eq!(
        x.algebra().blocks(),
        base.amplify(n).blocks(),
        "element is not in M_n of the base algebra"
    );
    let mut out = Vec::with_capacity(n * n);
    for p in 0..n {
        for q in 0..n {
            let blocks = base
                .blocks()
                .iter()
                .enumerate()
                .map(|(i, &m)| x.block(i).view((p * m, q * m), (m, m)).into_owned())
                .collect();
            out.push(Element::from_blocks(base, blocks).expect("block shapes"));
        }
    }
    out
}

/// Inverse of [`entries`].
pub fn from_entries(base: &Arc<Algebra>, n: usize, ents: &[Element]) -> Element {
    assert_eq!(ents.len(), n * n, "need n² entries");
    let big = base.amplify(n);
    let blocks = base
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let mut b = CMatrix::zeros(n * m, n * m);
            for p in 0..n {
                for q in 0..n {
                    b.view_mut((p * m, q * m), (m, m))
                        .copy_from(ents[p * n + q].block(i));
                }
            }
            b
        })
        .collect();
    Element::from_blocks(&big, blocks).expect("block shapes")
}

/// `V ⊕ W ∈ M_{m+n}(A)` for `V ∈ M_m(A)`, `W ∈ M_n(A)`.
pub fn amplified_direct_sum(
    base: &Arc<Algebra>,
    v: &Element,
    m: usize,
    w: &Element,
    n: usize,
) -> Element {
    let ev = entries(v, base, m);
    let ew = entries(w, base, n);
    let k = m + n;
    let mut ents = vec![Element::zero(base); k * k];
    for p in 0..m {
        for q in 0..m {
            ents[p * k + q] = ev[p * m + q].clone();
        }
    }
    for p in 0..n {
        for q in 0..n {
            ents[(m + p) * k + m + q] = ew[p * n + q].clone();
        }
    }
    from_entries(base, k, &ents)
}

/// `α V β ∈ M_n(A)` for `V ∈ M_m(A)` and scalar matrices `α ∈ M_{n,m}(ℂ)`,
/// `β ∈ M_{m,n}(ℂ)`.
pub fn scalar_sandwich(base: &Arc<Algebra>, alpha: &CMatrix, v: &Element, beta: &CMatrix) -> Element {
    let (n, m) = alpha.shape();
    assert_eq!(beta.shape(), (m, n), "beta must be the transpose shape of alpha");
    let ev = entries(v, base, m);
    let mut ents = Vec::with_capacity(n * n);
    for p in 0..n {
        for q in 0..n {
            let mut acc = Element::zero(base);
            for r in 0..m {
                for s in 0..m {
                    let z: C64 = alpha[(p, r)] * beta[(s, q)];
                    if z != C64::new(0.0, 0.0) {
                        acc = &acc + &ev[r * m + s].scale(z);
                    }
                }
            }
            ents.push(acc);
        }
    }
    from_entries(base, n, &ents)
}
