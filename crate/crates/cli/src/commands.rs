//! Command dispatch: each command runs one or more verification suites
//! against a parsed problem.

use nca_core::cdc::{ccn_check, complete_positivity, is_cdc};
use nca_core::dirac::{dirac_report, star_graph_check};
use nca_core::energy::{
    complete_markov_check, energy_form, gamma_delta, heat_map, laplacian, leibniz_check,
    leibniz_samples, reality_checks, resolvent_check,
};
use nca_core::metric::distance_matrix;
use nca_core::quotient::{effective_conductances, projection_from_blocks, quotient_checks, schur_quotient, split};
use nca_core::stddev::stddev_report;
use nca_core::{
    CdCForm, Check, Element, EnergyForm, Error, Laplacian, State, Tolerances, Witness, C64,
};

use crate::json::{self, Json};
use crate::report::Report;
use crate::spec::{ProblemSpec, ProjectionSpec, SpecError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    CheckCdc,
    Laplacian,
    Heat,
    Metric,
    Resistance,
    Quotient,
    Dirac,
    Stddev,
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckCdc => "check-cdc",
            Command::Laplacian => "laplacian",
            Command::Heat => "heat",
            Command::Metric => "metric",
            Command::Resistance => "resistance",
            Command::Quotient => "quotient",
            Command::Dirac => "dirac",
            Command::Stddev => "stddev",
            Command::All => "all",
        }
    }
}

/// Command-line overrides of the spec's optional fields.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub seed: Option<u64>,
    pub tol_pos: Option<f64>,
    pub tol_rank: Option<f64>,
    pub tol_eq: Option<f64>,
    pub times: Option<Vec<f64>>,
    pub pairs: Option<Vec<(usize, usize)>>,
}

pub const DEFAULT_TIMES: [f64; 4] = [0.0, 0.1, 1.0, 10.0];
const SAMPLES: usize = 20;

type Suite = fn(&mut Ctx) -> nca_core::Result<Json>;

/// Parses `"0:1,1:2"`.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>, String> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (p, q) = item
                .split_once(':')
                .ok_or_else(|| format!("`{item}` is not of the form p:q"))?;
            let p = p.trim().parse().map_err(|_| format!("bad index in `{item}`"))?;
            let q = q.trim().parse().map_err(|_| format!("bad index in `{item}`"))?;
            Ok((p, q))
        })
        .collect()
}

/// Parses `"0,0.1,1"`.
pub fn parse_times(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|t| match t.trim().parse::<f64>() {
            Ok(x) if x.is_finite() && x >= 0.0 => Ok(x),
            _ => Err(format!("`{t}` is not a nonnegative time")),
        })
        .collect()
}

struct Ctx<'a> {
    spec: &'a ProblemSpec,
    flags: &'a Flags,
    seed: u64,
    tol: Tolerances,
    report: Report,
}

/// Errors that stem from the input rather than from a failed property.
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidAlgebra(_)
            | Error::AlgebraMismatch
            | Error::Shape(_)
            | Error::NotSelfAdjoint(_)
            | Error::NotHermitian(_)
            | Error::NotCommutative
            | Error::Conductance(_)
            | Error::NotAutomorphism(_)
            | Error::InvalidProjection(_)
            | Error::InvalidState(_)
    )
}

fn renamed(mut c: Check, name: String) -> Check {
    c.name = name;
    c
}

impl Ctx<'_> {
    fn run(&mut self, suite: &str, f: Suite) -> Result<(), SpecError> {
        match f(self) {
            Ok(results) => {
                self.report.results.push((suite.to_string(), results));
                Ok(())
            }
            Err(e) if is_input_error(&e) => Err(SpecError::single(suite, e.to_string())),
            Err(e) => {
                let check = Check::new("completed", false, f64::NAN).with_witness(Witness::Note(e.to_string()));
                self.report.push(suite, check);
                Ok(())
            }
        }
    }

    fn push(&mut self, suite: &str, c: Check) {
        self.report.push(suite, c);
    }

    fn form(&self) -> nca_core::Result<CdCForm> {
        self.spec.cdc()
    }

    /// The energy form and Laplacian. Networks with negative conductances
    /// bypass the CdC test so that their Markov failure can be exhibited.
    fn energy(&self) -> nca_core::Result<(EnergyForm, Laplacian)> {
        let e = match self.spec.network() {
            Some(net) => net.energy_form(&self.tol)?,
            None => energy_form(&self.form()?, &self.tol, false)?,
        };
        let lap = laplacian(&e, &self.tol)?;
        Ok((e, lap))
    }

    fn times(&self) -> Vec<f64> {
        self.flags
            .times
            .clone()
            .or_else(|| self.spec.times.clone())
            .unwrap_or_else(|| DEFAULT_TIMES.to_vec())
    }

    fn states(&self) -> nca_core::Result<Vec<State>> {
        if let Some(s) = &self.spec.states {
            return Ok(s.clone());
        }
        let alg = &self.spec.algebra;
        if alg.is_commutative() {
            return (0..alg.dim()).map(|x| State::point(alg, x)).collect();
        }
        let mut out = vec![State::tracial(alg)];
        for (b, &n) in alg.blocks().iter().enumerate() {
            let mut xi = vec![C64::new(0.0, 0.0); n];
            xi[0] = C64::new(1.0, 0.0);
            out.push(State::vector(alg, b, &xi)?);
        }
        Ok(out)
    }

    fn check_pairs(&self, n: usize, what: &str) -> Result<Option<Vec<(usize, usize)>>, SpecError> {
        let Some(pairs) = &self.flags.pairs else {
            return Ok(None);
        };
        match pairs.iter().find(|(p, q)| *p >= n || *q >= n) {
            Some((p, q)) => Err(SpecError::single(
                "--pairs",
                format!("pair {p}:{q} is out of range for {n} {what}"),
            )),
            None => Ok(Some(pairs.clone())),
        }
    }
}

fn cdc_suite(ctx: &mut Ctx) -> nca_core::Result<Json> {
    let form = ctx.form()?;
    let rep = is_cdc(&form, &ctx.tol);
    let verdict = rep.is_cdc();
    for c in rep.into_checks() {
        ctx.push("cdc", c);
    }
    let mut out = Json::obj()
        .with("kind", ctx.spec.generator.kind())
        .with("dim", ctx.spec.algebra.dim())
        .with("is_cdc", verdict);
    if let Some(n) = ctx.spec.generator_superop() {
        let ccn = ccn_check(&n, ctx.seed, &ctx.tol)?;
        let cp = complete_positivity(&form, &ctx.tol);
        let agree = Check::new("ccn_matches_cp", ccn.passed == cp.passed, 0.0);
        out.push("conditionally_completely_negative", ccn.passed);
        ctx.push("cdc", ccn);
        ctx.push("cdc", agree);
    }
    let real = reality_checks(&form, &ctx.tol);
    out.push("tau_real", real.tau_real.passed);
    out.push("tau_real_residual", real.tau_real.residual);
    out.push("tau_balanced", real.tau_balanced.passed);
    out.push("tau_balanced_residual", real.tau_balanced.residual);
    Ok(out)
}

fn laplacian_suite(ctx: &mut Ctx) -> nca_core::Result<Json> {
    let (e, lap) = ctx.energy()?;
    let top = lap.max_eigenvalue().abs();
    let one = Element::identity(lap.algebra());
    ctx.push("laplacian", Check::within("unit_in_kernel", lap.apply(&one).max_abs(), ctx.tol.eq * (1.0 + top)));
    let low = lap.eigenvalues().first().copied().unwrap_or(0.0);
    ctx.push("laplacian", Check::new("positive_semidefinite", low >= -ctx.tol.pos * (1.0 + top), (-low).max(0.0)));
    for c in complete_markov_check(&e, ctx.seed, SAMPLES, ctx.tol.eq) {
        ctx.push("laplacian", c);
    }
    for n in [1usize, 2] {
        let en = if n == 1 { e.clone() } else { e.amplify(n) };
        let pairs = leibniz_samples(en.algebra(), ctx.seed.wrapping_add(n as u64), SAMPLES);
        ctx.push("laplacian", renamed(leibniz_check(&en, &pairs, ctx.tol.eq), format!("leibniz_n{n}")));
    }
    if let Some(net) = ctx.spec.network().filter(|n| n.allows_negative()) {
        let check = match net.markov_violation_witness(&ctx.tol)? {
            Some(v) => Check::new("markov_witness", false, v.violation).with_witness(v.witness()),
            None => Check::new("markov_witness", true, 0.0),
        };
        ctx.push("laplacian", check);
    }
    let mut out = Json::obj()
        .with("matrix_onb", json::cmatrix(lap.matrix()))
        .with("eigenvalues", lap.eigenvalues().to_vec())
        .with("kernel_dim", lap.kernel_dim())
        .with("connected", lap.kernel_dim() == 1);
    if let Some(form) = e.provenance().filter(|f| is_cdc(f, &ctx.tol).is_cdc()) {
        let gap = gamma_delta(&lap, &ctx.tol)?.max_abs_diff(form);
        out.push("gamma_equals_gamma_delta", gap <= ctx.tol.eq * (1.0 + form.max_abs()));
        out.push("gamma_delta_residual", gap);
    }
    Ok(out)
}

fn heat_suite(ctx: &mut Ctx) -> nca_core::Result<Json> {
    let (_, lap) = ctx.energy()?;
    let times = ctx.times();
    let mut choi = Vec::new();
    for &t in &times {
        let hm = heat_map(&lap, t, &ctx.tol)?;
        choi.push(hm.cp.residual);
        ctx.push("heat", renamed(hm.unital, format!("heat_t{t}_unital")));
        ctx.push("heat", renamed(hm.cp, format!("heat_t{t}_cp")));
    }
    for c in resolvent_check(&lap, &times, ctx.seed, &ctx.tol)? {
        ctx.push("heat", c);
    }
    Ok(Json::obj().with("times", times).with("choi_defect", choi))
}

fn triangle_excess(d: &[Vec<Option<f64>>]) -> (f64, Option<[usize; 3]>) {
    let n = d.len();
    let mut worst = (0.0f64, None);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if let (Some(xz), Some(xy), Some(yz)) = (d[x][z], d[x][y], d[y][z]) {
                    let excess = xz - xy - yz;
                    if excess > worst.0 {
                        worst = (excess, Some([x, y, z]));
                    }
                }
            }
        }
    }
    worst
}

fn disconnected_pairs(d: &[Vec<Option<f64>>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, row) in d.iter().enumerate() {
        for (j, v) in row.iter().enumerate().skip(i + 1) {
            if v.is_none() {
                out.push((i, j));
            }
        }
    }
    out
}

fn distance_checks(ctx: &mut Ctx, suite: &str, d: &[Vec<Option<f64>>]) {
    let scale = 1.0 + d.iter().flatten().flatten().fold(0.0f64, |m, v| m.max(*v));
    let gaps = disconnected_pairs(d);
    let mut c = Check::new("connected", gaps.is_empty(), gaps.len() as f64);
    if let Some(&(i, j)) = gaps.first() {
        c = c.with_witness(Witness::Indices(vec![i, j]));
    }
    ctx.push(suite, c);
    let mut asym = 0.0f64;
    for (i, row) in d.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if let (Some(a), Some(b)) = (v, d[j][i]) {
                asym = asym.max((a - b).abs());
            }
        }
    }
    ctx.push(suite, Check::within("symmetric", asym, 1e-12 * scale));
    let (excess, triple) = triangle_excess(d);
    let mut c = Check::within("triangle", excess.max(0.0), 1e-9 * scale);
    if let (false, Some(t)) = (c.passed, triple) {
        c = c.with_witness(Witness::Indices(t.to_vec()));
    }
    ctx.push(suite, c);
}

fn metric_suite(ctx: &mut Ctx) -> nca_core::Result<Json> {
    let (_, lap) = ctx.energy()?;
    let states = ctx.states()?;
    let d = distance_matrix(&lap, &states)?;
    distance_checks(ctx, "metric", &d);
    let mut out = Json::obj().with("states", states.len()).with("energy", json::distances(&d));
    if let Some(pairs) = &ctx.flags.pairs {
        let rows: Vec<Json> = pairs
            .iter()
            .map(|&(p, q)| {
                Json::obj()
                    .with("p", p)
                    .with("q", q)
                    .with("energy", d[p][q].map_or(Json::Str("disconnected".into()), Json::Num))
            })
            .collect();
        out.push("pairs", Json::Arr(rows));
    }
    let net = ctx.spec.network().filter(|n| !n.allows_negative() && n.is_connected());
    if let Some(net) = net.filter(|n| n.size() >= 2) {
        let rep = net.metric_checks(ctx.seed, &ctx.tol)?;
        ctx.push("metric", renamed(rep.triangle, "resistance_triangle".into()));
        ctx.push("metric", rep.square_relation);
        ctx.push("metric", rep.acute_angles_pure);
        let mixture = rep.mixture_counterexample.map_or(Json::Null, |w| {
            Json::obj()
                .with("nodes", w.nodes.to_vec())
                .with("weights", w.weights.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
                .with("violation", w.violation)
        });
        out.push("squared_metric_mixture_violation", mixture);
    }
    Ok(out)
}

fn resistance_suite(ctx: &mut Ctx) -> nca_core::Result<Json> {
    let net = ctx.spec.network().expect("checked before dispatch");
    let r = net.resistance_matrix()?;
    let energy: Vec<Vec<Option<f64>>> = r
        .iter()
        .map(|row| row.iter().map(|v| v.map(|x| x.max(0.0).sqrt())).collect())
        .collect();
    distance_checks(ctx, "resistance", &r);
    if !net.allows_negative() {
        let (_, lap) = ctx.energy()?;
        let points: Vec<State> = (0..net.size()).map(|x| State::point(net.algebra(), x)).collect::<nca_core::Result<_>>()?;
        let d = distance_matrix(&lap, &points)?;
        let mut gap = 0.0f64;
        for (rr, dr) in r.iter().zip(&d) {
            for (a, b) in rr.iter().zip(dr) {
                match (a, b) {
                    (Some(a), Some(b)) => gap = gap.max((a - b * b).abs()),
                    (None, None) => {}
                    _ => gap = f64::INFINITY,
                }
            }
        }
        ctx.push("resistance", Check::within("energy_squared_is_resistance", gap, 1e-9));
    } else {
        let check = match net.markov_violation_witness(&ctx.tol)? {
            Some(v) => Check::new("markov_witness", false, v.violation).with_witness(v.witness()),
            None => Check::new("markov_witness", true, 0.0),
        };
        ctx.push("resistance", check);
    }
    let mut out = Json::obj()
        .with("resistance", json::distances(&r))
        .with("energy", json::distances(&energy));
    if let Some(pairs) = &ctx.flags.pairs {
        let sentinel = |v: Option<f64>| v.map_or(Json::Str("disconnected".into()), Json::Num);
        let rows: Vec<Json> = pairs
            .iter()
            .map(|&(p, q)| {
                Json::obj()
                    .with("p", p)
                    .with("q", q)
                    .with("resistance", sentinel(r[p][q]))
                    .with("energy", sentinel(energy[p][q]))
            })
            .collect();
        out.push("pairs", Json::Arr(rows));
    }
    Ok(out)
}

fn quotient_suite(ctx: &mut Ctx) -> nca_core::Result<Json> {
    let (_, lap) = ctx.energy()?;
    let p = match ctx.spec.projection.as_ref().expect("checked before dispatch") {
        ProjectionSpec::Element(p) => p.clone(),
        ProjectionSpec::KeepBlocks(keep) => projection_from_blocks(&ctx.spec.algebra, keep)?,
    };
    let qd = split(&lap, &p, &ctx.tol)?;
    for c in quotient_checks(&qd, ctx.seed, &ctx.tol)?.checks() {
        ctx.push("quotient", c.clone());
    }
    let q = schur_quotient(&qd, &ctx.tol)?;
    let mut out = Json::obj()
        .with("kept_blocks", qd.kept_blocks().to_vec())
        .with("laplacian_onb", json::cmatrix(q.matrix()));
    if q.algebra().is_commutative() {
        out.push("effective_conductances", json::rmatrix(&effective_conductances(&q)?));
    }
    Ok(out)
}

fn dirac_suite(ctx: &mut Ctx) -> nca_core::Result<Json> {
    let form = ctx.form()?;
    let rep = dirac_report(&form, ctx.seed, SAMPLES, &ctx.tol)?;
    for c in &rep.checks {
        ctx.push("dirac", c.clone());
    }
    let mut out = Json::obj()
        .with("dim_omega", rep.dim_omega)
        .with("delta_factorization_residual", rep.delta_factorization_residual)
        .with("norm_formula_residual", rep.norm_formula_residual)
        .with("leibniz_residual", rep.leibniz_residual);
    if let Some(net) = ctx.spec.network().filter(|n| !n.allows_negative() && n.size() >= 2 && n.is_connected()) {
        let star = star_graph_check(&net, ctx.seed, &ctx.tol)?;
        let mut c = Check::new("parallelogram_iff_star", star.consistent(), star.max_defect);
        if let (false, Some(w)) = (c.passed, &star.witness) {
            c = c.with_witness(Witness::Elements(vec![w.0.clone(), w.1.clone()]));
        }
        ctx.push("dirac", c);
        out.push("is_star", star.is_star);
        out.push("parallelogram_holds", star.parallelogram_holds);
        out.push("parallelogram_defect", star.max_defect);
    }
    Ok(out)
}

fn stddev_suite(ctx: &mut Ctx) -> nca_core::Result<Json> {
    let alg = &ctx.spec.algebra;
    let p = ctx.spec.weight_element.clone().unwrap_or_else(|| {
        Element::identity(alg).scale_re(1.0 / alg.tau_unit())
    });
    let rep = stddev_report(alg, &p, ctx.seed, &ctx.tol)?;
    for c in rep.checks() {
        ctx.push("stddev", c.clone());
    }
    Ok(Json::obj()
        .with("weight_element", json::element(&p))
        .with("schur_vs_closed_form", rep.schur_vs_closed_form.residual)
        .with("copies_vs_closed_form", rep.copies_vs_closed_form.residual)
        .with("copies_vs_gamma_delta", rep.copies_vs_gamma_delta.residual))
}

/// Runs `cmd` on `spec`. Missing fields and inputs the suites reject as
/// malformed come back as [`SpecError`]; failed properties are report entries.
pub fn run_command(cmd: Command, spec: &ProblemSpec, flags: &Flags) -> Result<Report, SpecError> {
    let mut tol = spec.tolerances;
    tol.pos = flags.tol_pos.unwrap_or(tol.pos);
    tol.rank = flags.tol_rank.unwrap_or(tol.rank);
    tol.eq = flags.tol_eq.unwrap_or(tol.eq);
    let seed = flags.seed.or(spec.seed).unwrap_or(0);
    let mut ctx = Ctx {
        spec,
        flags,
        seed,
        tol,
        report: Report::new(cmd.name(), seed, tol),
    };

    let mut missing = Vec::new();
    if matches!(cmd, Command::Resistance) && spec.network().is_none() {
        missing.push(crate::spec::Diagnostic {
            field: "generator".into(),
            message: "resistance needs a network generator on counting measure".into(),
        });
    }
    if matches!(cmd, Command::Quotient) && spec.projection.is_none() {
        missing.push(crate::spec::Diagnostic {
            field: "projection/keep_blocks".into(),
            message: "quotient needs a projection or keep_blocks".into(),
        });
    }
    if !missing.is_empty() {
        return Err(SpecError { diagnostics: missing });
    }
    if matches!(cmd, Command::Metric | Command::All) {
        let n = ctx.states().map_err(|e| SpecError::single("states", e.to_string()))?.len();
        ctx.check_pairs(n, "states")?;
    }
    if matches!(cmd, Command::Resistance) {
        ctx.check_pairs(spec.algebra.dim(), "nodes")?;
    }

    let suites: Vec<(&str, Suite)> = match cmd {
        Command::CheckCdc => vec![("cdc", cdc_suite)],
        Command::Laplacian => vec![("laplacian", laplacian_suite)],
        Command::Heat => vec![("heat", heat_suite)],
        Command::Metric => vec![("metric", metric_suite)],
        Command::Resistance => vec![("resistance", resistance_suite)],
        Command::Quotient => vec![("quotient", quotient_suite)],
        Command::Dirac => vec![("dirac", dirac_suite)],
        Command::Stddev => vec![("stddev", stddev_suite)],
        Command::All => {
            let mut v: Vec<(&str, Suite)> = vec![
                ("cdc", cdc_suite),
                ("laplacian", laplacian_suite),
                ("heat", heat_suite),
                ("metric", metric_suite),
            ];
            if spec.network().is_some() {
                v.push(("resistance", resistance_suite));
            }
            if spec.projection.is_some() {
                v.push(("quotient", quotient_suite));
            }
            v.push(("dirac", dirac_suite));
            v.push(("stddev", stddev_suite));
            v
        }
    };
    for (name, f) in suites {
        ctx.run(name, f)?;
    }
    Ok(ctx.report)
}
