use crate::{Element, C64};

/// Counterexample data attached to a failed check.
#[derive(Debug, Clone)]
pub enum Witness {
    /// Algebra elements, e.g. the pair or triple of basis elements where an identity breaks.
    Elements(Vec<Element>),
    /// Basis indices, used when the offending inputs are basis elements.
    Indices(Vec<usize>),
    /// An eigenvector belonging to a negative eigenvalue.
    Vector(Vec<C64>),
    /// A Markov inequality failure: `lhs = L(F(a))` exceeded `rhs = Lip(F) L(a)`.
    Markov {
        element: Element,
        function: String,
        lhs: f64,
        rhs: f64,
    },
    /// A triple of states (given by their density elements) and the offending value.
    States(Vec<Element>),
    Note(String),
}

/// Outcome of one numerical verification. `residual` is the largest violation
/// or discrepancy observed.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub witness: Option<Witness>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, residual: f64) -> Self {
        Check {
            name: name.into(),
            passed,
            residual,
            witness: None,
        }
    }

    /// Passes when `residual <= tol`.
    pub fn within(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check::new(name, residual <= tol, residual)
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    /// Attach a witness only when the check failed.
    pub fn witness_if_failed(self, witness: impl FnOnce() -> Witness) -> Self {
        if self.passed {
            self
        } else {
            self.with_witness(witness())
        }
    }
}
