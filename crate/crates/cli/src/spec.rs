//! Problem files: parsing and validation. Every problem found is collected
//! into a [`SpecError`] rather than stopping at the first.

use std::fmt;
use std::sync::Arc;

use nca_core::algebra::SuperOperator;
use nca_core::cdc::{
    commutator_cdc, gamma_from_generator, group_action_cdc, lindblad_generator, network_cdc,
    spectral_triple_cdc, validate_automorphism,
};
use nca_core::linalg::hermitian_defect;
use nca_core::quotient::projection_from_blocks;
use nca_core::{
    Algebra, CMatrix, CdCForm, Element, RMatrix, ResistanceNetwork, State, Tolerances, C64,
};
use serde_json::Value;

/// One diagnostic: the offending field (a JSON path) and what is wrong with it.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub struct SpecError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, d) in self.diagnostics.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl SpecError {
    pub fn single(field: impl Into<String>, message: impl Into<String>) -> Self {
        SpecError {
            diagnostics: vec![Diagnostic {
                field: field.into(),
                message: message.into(),
            }],
        }
    }
}

#[derive(Debug, Clone)]
pub enum Automorphism {
    Unitary(Element),
    Permutation(Vec<usize>),
    Superop(CMatrix),
}

#[derive(Debug, Clone)]
pub enum Generator {
    Lindblad(Vec<Element>),
    Matrix(CMatrix),
    Network {
        c: RMatrix,
        symmetrized: bool,
        has_negative: bool,
    },
    Group {
        autos: Vec<Automorphism>,
        weights: Vec<f64>,
    },
    SpectralTriple(CMatrix),
}

impl Generator {
    pub fn kind(&self) -> &'static str {
        match self {
            Generator::Lindblad(_) => "lindblad",
            Generator::Matrix(_) => "matrix",
            Generator::Network { .. } => "network",
            Generator::Group { .. } => "group",
            Generator::SpectralTriple(_) => "spectral_triple",
        }
    }
}

#[derive(Debug, Clone)]
pub enum ProjectionSpec {
    Element(Element),
    KeepBlocks(Vec<usize>),
}

/// A validated problem file.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub algebra: Arc<Algebra>,
    pub generator: Generator,
    pub states: Option<Vec<State>>,
    pub projection: Option<ProjectionSpec>,
    pub weight_element: Option<Element>,
    pub times: Option<Vec<f64>>,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    /// Non-fatal remarks, e.g. that an asymmetric conductance matrix was symmetrized.
    pub warnings: Vec<String>,
}

const TOP_KEYS: [&str; 11] = [
    "algebra",
    "generator",
    "nodes",
    "c",
    "states",
    "projection",
    "keep_blocks",
    "weight_element",
    "times",
    "tolerances",
    "seed",
];

struct Parser {
    diags: Vec<Diagnostic>,
}

impl Parser {
    fn err(&mut self, field: &str, message: impl Into<String>) {
        self.diags.push(Diagnostic {
            field: field.to_string(),
            message: message.into(),
        });
    }

    fn number(&mut self, v: &Value, field: &str) -> Option<f64> {
        match v.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.err(field, "expected a finite number");
                None
            }
        }
    }

    fn index(&mut self, v: &Value, field: &str) -> Option<usize> {
        match v.as_u64() {
            Some(i) => Some(i as usize),
            None => {
                self.err(field, "expected a nonnegative integer");
                None
            }
        }
    }

    fn array<'a>(&mut self, v: &'a Value, field: &str) -> Option<&'a Vec<Value>> {
        let a = v.as_array();
        if a.is_none() {
            self.err(field, "expected an array");
        }
        a
    }

    fn numbers(&mut self, v: &Value, field: &str) -> Option<Vec<f64>> {
        let items = self.array(v, field)?;
        let out: Vec<Option<f64>> = items
            .iter()
            .enumerate()
            .map(|(k, x)| self.number(x, &format!("{field}[{k}]")))
            .collect();
        out.into_iter().collect()
    }

    fn indices(&mut self, v: &Value, field: &str) -> Option<Vec<usize>> {
        let items = self.array(v, field)?;
        let out: Vec<Option<usize>> = items
            .iter()
            .enumerate()
            .map(|(k, x)| self.index(x, &format!("{field}[{k}]")))
            .collect();
        out.into_iter().collect()
    }

    /// A number or an `[re, im]` pair.
    fn complex(&mut self, v: &Value, field: &str) -> Option<C64> {
        if let Some(x) = v.as_f64() {
            return Some(C64::new(x, 0.0));
        }
        match v.as_array().map(|a| a.as_slice()) {
            Some([re, im]) => match (re.as_f64(), im.as_f64()) {
                (Some(re), Some(im)) => Some(C64::new(re, im)),
                _ => {
                    self.err(field, "complex entries must be numbers or [re, im] pairs");
                    None
                }
            },
            _ => {
                self.err(field, "complex entries must be numbers or [re, im] pairs");
                None
            }
        }
    }

    /// A rectangular 2-D array; `shape` pins the dimensions when given.
    fn cmatrix(&mut self, v: &Value, field: &str, shape: Option<(usize, usize)>) -> Option<CMatrix> {
        let rows = self.array(v, field)?;
        let nrows = rows.len();
        let ncols = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
        if let Some((r, c)) = shape {
            if nrows != r || ncols != c {
                self.err(field, format!("expected a {r}x{c} matrix, got {nrows}x{ncols}"));
                return None;
            }
        }
        let mut data = Vec::with_capacity(nrows * ncols);
        let mut ok = true;
        for (i, row) in rows.iter().enumerate() {
            let Some(row) = self.array(row, &format!("{field}[{i}]")) else {
                ok = false;
                continue;
            };
            if row.len() != ncols {
                self.err(&format!("{field}[{i}]"), format!("row has {} entries, expected {ncols}", row.len()));
                ok = false;
                continue;
            }
            for (j, x) in row.iter().enumerate() {
                match self.complex(x, &format!("{field}[{i}][{j}]")) {
                    Some(z) => data.push(z),
                    None => ok = false,
                }
            }
        }
        ok.then(|| CMatrix::from_row_slice(nrows, ncols, &data))
    }

    fn rmatrix(&mut self, v: &Value, field: &str) -> Option<RMatrix> {
        let m = self.cmatrix(v, field, None)?;
        if m.nrows() != m.ncols() {
            self.err(field, format!("expected a square matrix, got {}x{}", m.nrows(), m.ncols()));
            return None;
        }
        if m.iter().any(|z| z.im != 0.0) {
            self.err(field, "conductances must be real");
            return None;
        }
        Some(m.map(|z| z.re))
    }

    fn element(&mut self, v: &Value, alg: &Arc<Algebra>, field: &str) -> Option<Element> {
        let blocks = self.array(v, field)?;
        if blocks.len() != alg.block_count() {
            self.err(
                field,
                format!("expected {} blocks, got {}", alg.block_count(), blocks.len()),
            );
            return None;
        }
        let mats: Vec<Option<CMatrix>> = blocks
            .iter()
            .zip(alg.blocks())
            .enumerate()
            .map(|(k, (b, &n))| self.cmatrix(b, &format!("{field}[{k}]"), Some((n, n))))
            .collect();
        let mats: Option<Vec<CMatrix>> = mats.into_iter().collect();
        match Element::from_blocks(alg, mats?) {
            Ok(e) => Some(e),
            Err(e) => {
                self.err(field, e.to_string());
                None
            }
        }
    }

    fn algebra(&mut self, v: &Value) -> Option<Arc<Algebra>> {
        let Some(obj) = v.as_object() else {
            self.err("algebra", "expected an object {\"blocks\": [...], \"trace_weights\": [...]}");
            return None;
        };
        for key in obj.keys() {
            if key != "blocks" && key != "trace_weights" {
                self.err(&format!("algebra.{key}"), "unknown field");
            }
        }
        let blocks = match obj.get("blocks") {
            Some(b) => self.indices(b, "algebra.blocks"),
            None => {
                self.err("algebra.blocks", "required");
                None
            }
        };
        let weights = obj
            .get("trace_weights")
            .map(|w| self.numbers(w, "algebra.trace_weights"));
        let blocks = blocks?;
        let weights = match weights {
            None => vec![1.0; blocks.len()],
            Some(w) => w?,
        };
        if weights.len() != blocks.len() {
            self.err(
                "algebra.blocks/algebra.trace_weights",
                format!(
                    "algebra.blocks has {} entries but algebra.trace_weights has {}",
                    blocks.len(),
                    weights.len()
                ),
            );
            return None;
        }
        match Algebra::new(blocks, weights) {
            Ok(a) => Some(a),
            Err(e) => {
                self.err("algebra", e.to_string());
                None
            }
        }
    }

    fn network(&mut self, c: &Value, field: &str, warnings: &mut Vec<String>) -> Option<Generator> {
        let c = self.rmatrix(c, field)?;
        let n = c.nrows();
        let mut ok = true;
        for x in 0..n {
            if c[(x, x)] != 0.0 {
                self.err(&format!("{field}[{x}][{x}]"), "diagonal conductances must be zero");
                ok = false;
            }
        }
        if !ok {
            return None;
        }
        let sym = (&c + c.transpose()) * 0.5;
        let symmetrized = sym != c;
        if symmetrized {
            warnings.push(format!("{field} is not symmetric; using (c + cᵀ)/2"));
        }
        let has_negative = sym.iter().any(|&v| v < 0.0);
        Some(Generator::Network {
            c: sym,
            symmetrized,
            has_negative,
        })
    }

    fn automorphism(&mut self, v: &Value, alg: &Arc<Algebra>, field: &str) -> Option<Automorphism> {
        let obj = v.as_object().filter(|o| o.len() == 1);
        let Some((key, body)) = obj.and_then(|o| o.iter().next()) else {
            self.err(field, "expected one of {\"unitary\": Element}, {\"permutation\": [...]}, {\"superop\": [[...]]}");
            return None;
        };
        let sub = format!("{field}.{key}");
        let auto = match key.as_str() {
            "unitary" => Automorphism::Unitary(self.element(body, alg, &sub)?),
            "permutation" => {
                let p = self.indices(body, &sub)?;
                let k = alg.block_count();
                let mut seen = vec![false; k];
                let valid = p.len() == k
                    && p.iter().all(|&i| i < k && !std::mem::replace(&mut seen[i], true));
                if !valid {
                    self.err(&sub, format!("expected a permutation of 0..{k}"));
                    return None;
                }
                if let Some(i) = (0..k).find(|&i| alg.blocks()[i] != alg.blocks()[p[i]]) {
                    self.err(&sub, format!("blocks {i} and {} have different sizes", p[i]));
                    return None;
                }
                Automorphism::Permutation(p)
            }
            "superop" => {
                let d = alg.dim();
                Automorphism::Superop(self.cmatrix(body, &sub, Some((d, d)))?)
            }
            other => {
                self.err(field, format!("unknown automorphism encoding `{other}`"));
                return None;
            }
        };
        if let Err(e) = validate_automorphism(&auto_superop(&auto, alg), 1e-9) {
            self.err(field, e.to_string());
            return None;
        }
        Some(auto)
    }

    fn generator(
        &mut self,
        v: &Value,
        alg: Option<&Arc<Algebra>>,
        warnings: &mut Vec<String>,
    ) -> Option<Generator> {
        let Some(obj) = v.as_object() else {
            self.err("generator", "expected an object with a \"kind\" field");
            return None;
        };
        let kind = match obj.get("kind").and_then(Value::as_str) {
            Some(k) => k,
            None => {
                self.err("generator.kind", "required: one of lindblad, matrix, network, group, spectral_triple");
                return None;
            }
        };
        let allowed: &[&str] = match kind {
            "lindblad" => &["kind", "vs"],
            "matrix" => &["kind", "superop"],
            "network" => &["kind", "c"],
            "group" => &["kind", "autos", "weights"],
            "spectral_triple" => &["kind", "D"],
            other => {
                self.err("generator.kind", format!("unknown kind `{other}`"));
                return None;
            }
        };
        for key in obj.keys().filter(|k| !allowed.contains(&k.as_str())) {
            self.err(&format!("generator.{key}"), format!("not a field of kind `{kind}`"));
        }
        let mut missing = false;
        for key in &allowed[1..] {
            if !obj.contains_key(*key) {
                self.err(&format!("generator.{key}"), format!("required for kind `{kind}`"));
                missing = true;
            }
        }
        if missing {
            return None;
        }
        if kind == "network" {
            return self.network(&obj["c"], "generator.c", warnings);
        }
        let alg = alg?;
        match kind {
            "lindblad" => {
                let vs = self.array(&obj["vs"], "generator.vs")?;
                if vs.is_empty() {
                    self.err("generator.vs", "needs at least one element");
                    return None;
                }
                let els: Vec<Option<Element>> = vs
                    .iter()
                    .enumerate()
                    .map(|(k, v)| self.element(v, alg, &format!("generator.vs[{k}]")))
                    .collect();
                Some(Generator::Lindblad(els.into_iter().collect::<Option<_>>()?))
            }
            "matrix" => {
                let d = alg.dim();
                Some(Generator::Matrix(self.cmatrix(&obj["superop"], "generator.superop", Some((d, d)))?))
            }
            "group" => {
                let autos = self.array(&obj["autos"], "generator.autos")?;
                let weights = self.numbers(&obj["weights"], "generator.weights");
                let autos: Vec<Option<Automorphism>> = autos
                    .iter()
                    .enumerate()
                    .map(|(k, a)| self.automorphism(a, alg, &format!("generator.autos[{k}]")))
                    .collect();
                let weights = weights?;
                if autos.is_empty() {
                    self.err("generator.autos", "needs at least one automorphism");
                }
                if weights.len() != autos.len() {
                    self.err(
                        "generator.autos/generator.weights",
                        format!("{} automorphisms but {} weights", autos.len(), weights.len()),
                    );
                }
                if let Some(k) = weights.iter().position(|&w| w < 0.0) {
                    self.err(&format!("generator.weights[{k}]"), "weights must be nonnegative");
                }
                let autos: Vec<Automorphism> = autos.into_iter().collect::<Option<_>>()?;
                (!autos.is_empty() && weights.len() == autos.len() && weights.iter().all(|&w| w >= 0.0))
                    .then_some(Generator::Group { autos, weights })
            }
            "spectral_triple" => {
                let n = alg.hilbert_dim();
                let d = self.cmatrix(&obj["D"], "generator.D", Some((n, n)))?;
                let defect = hermitian_defect(&d);
                if defect > 1e-12 * (1.0 + d.iter().map(|z| z.norm()).fold(0.0, f64::max)) {
                    self.err("generator.D", format!("D must be Hermitian (defect {defect:.3e})"));
                    return None;
                }
                Some(Generator::SpectralTriple(d))
            }
            _ => unreachable!(),
        }
    }

    fn state(&mut self, v: &Value, alg: &Arc<Algebra>, field: &str) -> Option<State> {
        let obj = v.as_object();
        if let Some(d) = obj.and_then(|o| o.get("density")) {
            let e = self.element(d, alg, &format!("{field}.density"))?;
            return match State::new(e) {
                Ok(s) => Some(s),
                Err(e) => {
                    self.err(&format!("{field}.density"), e.to_string());
                    None
                }
            };
        }
        if let Some(p) = obj.and_then(|o| o.get("point")) {
            let x = self.index(p, &format!("{field}.point"))?;
            return match State::point(alg, x) {
                Ok(s) => Some(s),
                Err(e) => {
                    self.err(&format!("{field}.point"), e.to_string());
                    None
                }
            };
        }
        self.err(field, "expected {\"density\": Element} or {\"point\": index}");
        None
    }

    fn tolerances(&mut self, v: &Value) -> Tolerances {
        let mut tol = Tolerances::default();
        let Some(obj) = v.as_object() else {
            self.err("tolerances", "expected an object with pos, rank, eq");
            return tol;
        };
        for (key, val) in obj {
            let field = format!("tolerances.{key}");
            let slot = match key.as_str() {
                "pos" => &mut tol.pos,
                "rank" => &mut tol.rank,
                "eq" => &mut tol.eq,
                _ => {
                    self.err(&field, "unknown tolerance");
                    continue;
                }
            };
            if let Some(x) = self.number(val, &field) {
                if x < 0.0 {
                    self.err(&field, "must be nonnegative");
                } else {
                    *slot = x;
                }
            }
        }
        tol
    }
}

/// The automorphism as a superoperator on `alg`.
pub fn auto_superop(auto: &Automorphism, alg: &Arc<Algebra>) -> SuperOperator {
    match auto {
        Automorphism::Unitary(u) => {
            let us = u.adjoint();
            SuperOperator::from_fn(alg, |a| &(u * a) * &us)
        }
        Automorphism::Permutation(p) => SuperOperator::from_fn(alg, |a| {
            let blocks = p.iter().map(|&i| a.block(i).clone()).collect();
            Element::from_blocks(alg, blocks).expect("block sizes checked during parsing")
        }),
        Automorphism::Superop(m) => superop_from_units(alg, m),
    }
}

/// A superoperator given in the matrix-unit basis: column `k` holds the
/// coordinates of the image of the `k`-th unit.
pub fn superop_from_units(alg: &Arc<Algebra>, m: &CMatrix) -> SuperOperator {
    SuperOperator::from_fn(alg, |a| {
        let x = a.coords();
        let y: Vec<C64> = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|k| m[(i, k)] * x[k]).sum())
            .collect();
        Element::from_coords(alg, &y)
    })
}

impl ProblemSpec {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let root: Value = serde_json::from_str(text).map_err(|e| {
            SpecError::single(
                format!("line {}, column {}", e.line(), e.column()),
                format!("malformed JSON: {e}"),
            )
        })?;
        let Some(obj) = root.as_object() else {
            return Err(SpecError::single("$", "problem spec must be a JSON object"));
        };
        let mut p = Parser { diags: Vec::new() };
        let mut warnings = Vec::new();
        for key in obj.keys().filter(|k| !TOP_KEYS.contains(&k.as_str())) {
            p.err(key, "unknown field");
        }

        let shorthand = obj.contains_key("c") || obj.contains_key("nodes");
        if shorthand && obj.contains_key("generator") {
            p.err("generator/c", "give either a generator or the {\"nodes\", \"c\"} network shorthand, not both");
        }
        let mut algebra = obj.get("algebra").and_then(|a| p.algebra(a));
        let generator = if shorthand {
            match obj.get("c") {
                Some(c) => p.network(c, "c", &mut warnings),
                None => {
                    p.err("c", "required by the network shorthand");
                    None
                }
            }
        } else {
            match obj.get("generator") {
                Some(g) => p.generator(g, algebra.as_ref(), &mut warnings),
                None => {
                    p.err("generator", "required");
                    None
                }
            }
        };
        if let Some(Generator::Network { c, .. }) = &generator {
            let n = c.nrows();
            if let Some(nodes) = obj.get("nodes").and_then(|v| p.index(v, "nodes")) {
                if nodes != n {
                    p.err("nodes/c", format!("nodes is {nodes} but c is {n}x{n}"));
                }
            }
            match &algebra {
                None if !obj.contains_key("algebra") => algebra = Some(Algebra::commutative(n)),
                Some(a) if !a.is_commutative() || a.dim() != n => p.err(
                    "algebra/c",
                    format!("a network on {n} nodes needs a commutative algebra with {n} points"),
                ),
                _ => {}
            }
        } else if generator.is_some() && !obj.contains_key("algebra") {
            p.err("algebra", "required");
        }

        let states = obj.get("states").zip(algebra.as_ref()).and_then(|(v, alg)| {
            let items = p.array(v, "states")?;
            let out: Vec<Option<State>> = items
                .iter()
                .enumerate()
                .map(|(k, s)| p.state(s, alg, &format!("states[{k}]")))
                .collect();
            out.into_iter().collect::<Option<Vec<_>>>()
        });
        if obj.contains_key("projection") && obj.contains_key("keep_blocks") {
            p.err("projection/keep_blocks", "give only one of the two");
        }
        let projection = match (obj.get("projection"), obj.get("keep_blocks"), algebra.as_ref()) {
            (Some(v), _, Some(alg)) => p.element(v, alg, "projection").map(ProjectionSpec::Element),
            (None, Some(v), Some(alg)) => p.indices(v, "keep_blocks").and_then(|keep| {
                match projection_from_blocks(alg, &keep) {
                    Ok(_) => Some(ProjectionSpec::KeepBlocks(keep)),
                    Err(e) => {
                        p.err("keep_blocks", e.to_string());
                        None
                    }
                }
            }),
            _ => None,
        };
        let weight_element = obj
            .get("weight_element")
            .zip(algebra.as_ref())
            .and_then(|(v, alg)| p.element(v, alg, "weight_element"));
        let times = obj.get("times").and_then(|v| p.numbers(v, "times"));
        if let Some(k) = times.as_ref().and_then(|t| t.iter().position(|&t| t < 0.0)) {
            p.err(&format!("times[{k}]"), "times must be nonnegative");
        }
        let tolerances = obj.get("tolerances").map_or_else(Tolerances::default, |v| p.tolerances(v));
        let seed = obj.get("seed").and_then(|v| p.index(v, "seed")).map(|s| s as u64);

        if !p.diags.is_empty() {
            return Err(SpecError { diagnostics: p.diags });
        }
        Ok(ProblemSpec {
            algebra: algebra.expect("algebra is set when there are no diagnostics"),
            generator: generator.expect("generator is set when there are no diagnostics"),
            states,
            projection,
            weight_element,
            times,
            tolerances,
            seed,
            warnings,
        })
    }

    /// The CdC form of the generator, or why it could not be built.
    pub fn cdc(&self) -> nca_core::Result<CdCForm> {
        let alg = &self.algebra;
        match &self.generator {
            Generator::Lindblad(vs) => commutator_cdc(vs),
            Generator::Matrix(m) => gamma_from_generator(&superop_from_units(alg, m), 1.0, self.tolerances.eq),
            Generator::Network { c, has_negative, .. } => network_cdc(alg, c, 0.5, *has_negative),
            Generator::Group { autos, weights } => {
                let ops: Vec<SuperOperator> = autos.iter().map(|a| auto_superop(a, alg)).collect();
                group_action_cdc(&ops, weights, 1e-9)
            }
            Generator::SpectralTriple(d) => spectral_triple_cdc(d, alg, self.tolerances.eq),
        }
    }

    /// The generator `N` whose `Γ_N` is the form, where one is available.
    pub fn generator_superop(&self) -> Option<SuperOperator> {
        let alg = &self.algebra;
        match &self.generator {
            Generator::Lindblad(vs) => Some(
                vs.iter()
                    .fold(SuperOperator::zero(alg), |acc, v| acc.add(&lindblad_generator(v))),
            ),
            Generator::Matrix(m) => Some(superop_from_units(alg, m)),
            Generator::Network { c, .. } => {
                let n = c.nrows();
                Some(SuperOperator::from_fn(alg, |f| {
                    let v = f.values();
                    let out: Vec<C64> = (0..n)
                        .map(|x| (0..n).map(|y| (v[x] - v[y]) * c[(x, y)]).sum())
                        .collect();
                    Element::from_coords(alg, &out)
                }))
            }
            Generator::Group { autos, weights } => Some(autos.iter().zip(weights).fold(
                SuperOperator::zero(alg),
                |acc, (a, &w)| {
                    let n = SuperOperator::identity(alg).sub(&auto_superop(a, alg));
                    acc.add(&n.scale(C64::new(w, 0.0)))
                },
            )),
            Generator::SpectralTriple(_) => None,
        }
    }

    /// The scale making `Γ_N` of [`Self::generator_superop`] equal [`Self::cdc`].
    pub fn generator_scale(&self) -> f64 {
        match self.generator {
            Generator::Network { .. } => 0.5,
            _ => 1.0,
        }
    }

    /// A [`ResistanceNetwork`] when the generator is a network on counting measure.
    pub fn network(&self) -> Option<ResistanceNetwork> {
        match &self.generator {
            Generator::Network { c, has_negative, .. }
                if self.algebra.weights().iter().all(|&w| w == 1.0) =>
            {
                if *has_negative {
                    ResistanceNetwork::with_negative(c.clone()).ok()
                } else {
                    ResistanceNetwork::new(c.clone()).ok()
                }
            }
            _ => None,
        }
    }
}
