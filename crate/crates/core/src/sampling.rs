//! Seeded random inputs for the randomized checks. Every checker that samples
//! takes an explicit seed, so runs are reproducible.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Algebra, CMatrix, Element, RMatrix, C64};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    /// Real and imaginary parts uniform in `[-1, 1)`.
    pub fn complex(&mut self) -> C64 {
        C64::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0))
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.complex())
    }

    pub fn element(&mut self, algebra: &Arc<Algebra>) -> Element {
        let c: Vec<C64> = (0..algebra.dim()).map(|_| self.complex()).collect();
        Element::from_coords(algebra, &c)
    }

    pub fn self_adjoint(&mut self, algebra: &Arc<Algebra>) -> Element {
        let x = self.element(algebra);
        (&x + &x.adjoint()).scale_re(0.5)
    }

    /// `x* x` for a random `x`.
    pub fn positive(&mut self, algebra: &Arc<Algebra>) -> Element {
        let x = self.element(algebra);
        &x.adjoint() * &x
    }

    /// A random faithful density: positive with `τ(ρ) = 1`.
    pub fn density(&mut self, algebra: &Arc<Algebra>) -> Element {
        let p = self.positive(algebra);
        let t = p.tau().re;
        p.scale_re(1.0 / t)
    }

    /// Symmetric conductances in `[lo, hi)`, zero diagonal; each edge present
    /// with probability `density`.
    pub fn conductances(&mut self, n: usize, density: f64, lo: f64, hi: f64) -> RMatrix {
        let mut c = RMatrix::zeros(n, n);
        for x in 0..n {
            for y in x + 1..n {
                if self.coin(density) {
                    let v = self.uniform(lo, hi);
                    c[(x, y)] = v;
                    c[(y, x)] = v;
                }
            }
        }
        c
    }

    /// Random connected symmetric conductances: a random spanning tree plus
    /// extra edges with probability `density`.
    pub fn connected_conductances(&mut self, n: usize, density: f64) -> RMatrix {
        let mut c = self.conductances(n, density, 0.1, 2.0);
        for y in 1..n {
            let x = self.index(y);
            if c[(x, y)] == 0.0 {
                let v = self.uniform(0.1, 2.0);
                c[(x, y)] = v;
                c[(y, x)] = v;
            }
        }
        c
    }
}
