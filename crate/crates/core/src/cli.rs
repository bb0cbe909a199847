//! Command-line front end.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::compact_algebra::{build_compact_form, dump_constants, CompactAlgebra, ConstantEntry};
use crate::error::{Error, ParseError, Result};
use crate::exterior::Form;
use crate::hermitian::HermitianStructure;
use crate::linalg::Mat;
use crate::report::{ser_qmat, surd_rows};
use crate::root_data::{build_root_system, killing_gram, CartanSpec, RootSystem};
use crate::scalar::{Surd, Q};
use crate::so9::{fixture_algebra, verify_family, verify_structure_equations, FamilyReport, So9GoldenData, StructureReport};
use crate::solvers::{solve_cyt, solve_skt, solve_skt_cyt, CytSolution, MetricFamily, NewtonOptions, RigidityOptions, RigidityReport};

pub const THREADS_ENV: &str = "SAMELSON_THREADS";
pub const DEFAULT_SEED: u64 = 20_160_510;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Positive roots and Killing Gram matrix.
    Roots,
    /// Structure constants of the compact form with Jacobi and Killing checks.
    Algebra,
    /// SKT, CYT and Bismut-flat verdicts for a metric.
    Check,
    /// Exact SKT family.
    SolveSkt,
    /// CYT equations on a slice.
    SolveCyt,
    /// Combined SKT and CYT system from random starts.
    Rigidity,
    /// SO(9) structure equations and SKT family.
    So9Verify,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "samelson", version, about = "Invariant Hermitian metrics on compact Lie groups")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Cartan type (`B4`, `A2xA2`) or a JSON file `{"factors": [...]}`.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Metric JSON file.
    #[arg(long, global = true)]
    pub metric: Option<PathBuf>,
    /// Report path (JSON).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    pub restarts: usize,
    /// Newton residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig { command, group: None, metric: None, out: None, seed: DEFAULT_SEED, restarts: 100, tol: 1e-12 }
    }
}

/// Human summary, JSON report and overall verdict of one run.
#[derive(Debug)]
pub struct Outcome {
    pub ok: bool,
    pub summary: String,
    pub report: Value,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse(ParseError::Schema { path: path.into(), message: message.into() })
}

pub fn parse_group(arg: &str) -> Result<CartanSpec> {
    let text = if Path::new(arg).is_file() { std::fs::read_to_string(arg)? } else { arg.to_string() };
    Ok(text.parse()?)
}

fn exact(v: &Value, path: &str) -> Result<Surd> {
    match v {
        Value::String(s) => s.parse().map_err(|e: ParseError| schema(path, e.to_string())),
        Value::Number(n) => n
            .as_i64()
            .map(Surd::int)
            .ok_or_else(|| schema(path, "numbers must be integers; write fractions as \"p/q\"")),
        _ => Err(schema(path, "expected an exact number")),
    }
}

fn matrix(v: &Value, path: &str, r: usize) -> Result<Mat<Surd>> {
    let rows = v.as_array().ok_or_else(|| schema(path, "expected an array of rows"))?;
    if rows.len() != r {
        return Err(schema(path, format!("expected {r} rows")));
    }
    let mut m = Mat::zeros(r, r);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| schema(format!("{path}[{i}]"), "expected an array"))?;
        if row.len() != r {
            return Err(schema(format!("{path}[{i}]"), format!("expected {r} entries")));
        }
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = exact(x, &format!("{path}[{i}][{j}]"))?;
        }
    }
    Ok(m)
}

/// Metric document: `{"torus_J": [[…]], "Lambda_t": [[…]], "lambda": {"0": "2", …}, "fixed": [0, 1]}`.
/// `torus_J` defaults to the Gram–Schmidt structure of the torus metric, `Lambda_t` to the
/// identity; `lambda` keys are positive-root indices and missing roots default to 1.
pub fn parse_metric(text: &str, alg: &CompactAlgebra<Surd>) -> Result<(HermitianStructure<Surd>, Option<Vec<usize>>)> {
    let doc: Value = serde_json::from_str(text).map_err(|e| schema("$", e.to_string()))?;
    let obj = doc.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    for key in obj.keys() {
        if !["torus_J", "Lambda_t", "lambda", "fixed"].contains(&key.as_str()) {
            return Err(schema(format!("$.{key}"), "unknown field"));
        }
    }
    let r = alg.rank;
    let lambda_t = match obj.get("Lambda_t") {
        Some(v) => matrix(v, "$.Lambda_t", r)?,
        None => Mat::identity(r),
    };
    let mut lambda = vec![Surd::int(1); alg.p()];
    if let Some(v) = obj.get("lambda") {
        let m = v.as_object().ok_or_else(|| schema("$.lambda", "expected an object keyed by root index"))?;
        for (k, x) in m {
            let path = format!("$.lambda.{k}");
            let a: usize = k.parse().map_err(|_| schema(&path, "key must be a root index"))?;
            if a >= alg.p() {
                return Err(schema(&path, format!("root index out of range (p = {})", alg.p())));
            }
            lambda[a] = exact(x, &path)?;
        }
    }
    let torus_j = match obj.get("torus_J") {
        Some(v) => matrix(v, "$.torus_J", r)?,
        None => {
            let g = HermitianStructure { torus_j: Mat::identity(r), lambda_t: lambda_t.clone(), lambda: lambda.clone() }
                .torus_metric(alg);
            crate::hermitian::default_torus_j(&g)?
        }
    };
    let fixed = match obj.get("fixed") {
        Some(v) => Some(
            v.as_array()
                .ok_or_else(|| schema("$.fixed", "expected an array of root indices"))?
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    x.as_u64().map(|u| u as usize).ok_or_else(|| schema(format!("$.fixed[{i}]"), "expected a root index"))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let h = HermitianStructure { torus_j, lambda_t, lambda };
    h.validate(alg)?;
    Ok((h, fixed))
}

fn load_group(cfg: &RunConfig) -> Result<(RootSystem, CompactAlgebra<Surd>)> {
    let g = cfg.group.as_deref().ok_or_else(|| schema("--group", "required for this command"))?;
    let rs = build_root_system(&parse_group(g)?)?;
    let alg = build_compact_form(&rs)?;
    Ok((rs, alg))
}

fn load_metric(cfg: &RunConfig, alg: &CompactAlgebra<Surd>) -> Result<(HermitianStructure<Surd>, Option<Vec<usize>>)> {
    match &cfg.metric {
        Some(p) => parse_metric(&std::fs::read_to_string(p)?, alg),
        None => Ok((HermitianStructure::bi_invariant(alg)?, None)),
    }
}

fn term_label(alg: &CompactAlgebra<Surd>, f: &Form<Surd>) -> Option<String> {
    f.first_nonzero().map(|(idx, c)| {
        let names: Vec<&str> = idx.iter().map(|&i| alg.labels[i].as_str()).collect();
        format!("({}) = {c}", names.join(", "))
    })
}

#[derive(Serialize)]
struct Verdict {
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<String>,
}

#[derive(Serialize)]
struct CheckReport {
    group: String,
    lambda: Vec<String>,
    lambda_t: Vec<Vec<String>>,
    torus_j: Vec<Vec<String>>,
    skt: Verdict,
    cyt: Verdict,
    bismut_flat: Verdict,
}

#[derive(Serialize)]
struct RootsReport<'a> {
    group: String,
    rank: usize,
    positive_roots: &'a [Vec<i64>],
    #[serde(serialize_with = "ser_qmat")]
    gram: Vec<Vec<Q>>,
}

#[derive(Serialize)]
struct AlgebraReport {
    group: String,
    dim: usize,
    labels: Vec<String>,
    jacobi: bool,
    killing_invariant: bool,
    killing_negative_definite: bool,
    #[serde(serialize_with = "ser_qmat")]
    gram: Vec<Vec<Q>>,
    constants: Vec<ConstantEntry>,
}

#[derive(Serialize)]
struct SktReport {
    family: MetricFamily,
    samples: Vec<Vec<String>>,
    samples_pluriclosed: Vec<bool>,
}

#[derive(Serialize)]
struct So9Report {
    structure: StructureReport,
    family: FamilyReport,
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let mut s = String::new();
    let (ok, report) = match cfg.command {
        Command::Roots => {
            let g = cfg.group.as_deref().ok_or_else(|| schema("--group", "required for this command"))?;
            let rs = build_root_system(&parse_group(g)?)?;
            let _ = writeln!(s, "{}: rank {}, {} positive roots", rs.spec, rs.rank, rs.p());
            for (a, x) in rs.positive_roots.iter().enumerate() {
                let _ = writeln!(s, "  [{a}] {x:?}");
            }
            let rep = RootsReport { group: rs.spec.to_string(), rank: rs.rank, positive_roots: &rs.positive_roots, gram: rs.gram.clone() };
            (true, to_value(&rep)?)
        }
        Command::Algebra => {
            let (rs, alg) = load_group(cfg)?;
            let jacobi = alg.check_jacobi().is_ok();
            let killing_invariant = alg.check_invariance().is_ok();
            let negdef = alg.killing_negative_definite();
            let gram = killing_gram(&rs.spec)?;
            let _ = writeln!(s, "{}: dim {}", rs.spec, alg.dim());
            let _ = writeln!(s, "  Jacobi: {}", yes(jacobi));
            let _ = writeln!(s, "  Killing form invariant: {}", yes(killing_invariant));
            let _ = writeln!(s, "  Killing form negative definite: {}", yes(negdef));
            let _ = writeln!(s, "  Gram from adjoint traces equals root data: yes");
            let rep = AlgebraReport {
                group: rs.spec.to_string(),
                dim: alg.dim(),
                labels: alg.labels.clone(),
                jacobi,
                killing_invariant,
                killing_negative_definite: negdef,
                gram,
                constants: dump_constants(&alg),
            };
            (jacobi && killing_invariant && negdef, to_value(&rep)?)
        }
        Command::Check => {
            let (rs, alg) = load_group(cfg)?;
            let (h, _) = load_metric(cfg, &alg)?;
            let ddc = h.ddc(&alg)?;
            let rho = h.bismut_ricci(&alg)?;
            let curv = h.bismut_curvature(&alg)?;
            let verdict = |holds: bool, violation: Option<String>| Verdict { holds, violation: if holds { None } else { violation } };
            let skt = verdict(ddc.is_zero(), term_label(&alg, &ddc).map(|t| format!("ddcF{t}")));
            let cyt = verdict(rho.is_zero(), term_label(&alg, &rho).map(|t| format!("rho_B{t}")));
            let flat = verdict(
                curv.is_flat(),
                curv.entries.iter().next().map(|((i, j, k, l), v)| {
                    format!("R({}, {}){} has {} component {v}", alg.labels[*i], alg.labels[*j], alg.labels[*k], alg.labels[*l])
                }),
            );
            for (name, v) in [("SKT", &skt), ("CYT", &cyt), ("Bismut-flat", &flat)] {
                let _ = write!(s, "{name}: {}", yes(v.holds));
                if let Some(w) = &v.violation {
                    let _ = write!(s, "  [{w}]");
                }
                s.push('\n');
            }
            let ok = skt.holds && cyt.holds && flat.holds;
            let rep = CheckReport {
                group: rs.spec.to_string(),
                lambda: h.lambda.iter().map(ToString::to_string).collect(),
                lambda_t: surd_rows(&h.lambda_t),
                torus_j: surd_rows(&h.torus_j),
                skt,
                cyt,
                bismut_flat: flat,
            };
            (ok, to_value(&rep)?)
        }
        Command::SolveSkt => {
            let (rs, alg) = load_group(cfg)?;
            let family = solve_skt(&rs, &alg)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut samples = vec![family.base.clone()];
            samples.extend(family.sample(&mut rng, 3));
            let checks: Vec<bool> = samples.iter().map(|t| family.verify_point(&alg, t)).collect::<Result<_>>()?;
            let _ = writeln!(s, "{}: SKT family of dimension {} ({} scale classes)", family.group, family.dimension(), family.scale_classes.len());
            let _ = writeln!(s, "  parameters: {}", family.parameters.join(", "));
            let _ = writeln!(s, "  ddcF = 0 at base point and {} samples: {}", samples.len() - 1, yes(checks.iter().all(|&c| c)));
            let rep = SktReport {
                samples: samples.iter().map(|t| t.iter().map(crate::scalar::fmt_q).collect()).collect(),
                samples_pluriclosed: checks.clone(),
                family,
            };
            (checks.iter().all(|&c| c), to_value(&rep)?)
        }
        Command::SolveCyt => {
            let (_, alg) = load_group(cfg)?;
            let (h, fixed) = load_metric(cfg, &alg)?;
            let sol: CytSolution = solve_cyt(&alg, &h, fixed, NewtonOptions { tol: cfg.tol, ..Default::default() })?;
            let _ = writeln!(s, "CYT solution after {} Newton steps, residual {:.3e}", sol.iterations, sol.residual);
            let _ = writeln!(s, "  fixed roots: {:?}", sol.fixed);
            for (a, l) in sol.lambda.iter().enumerate() {
                let _ = writeln!(s, "  lambda[{a}] = {l}");
            }
            match &sol.certified {
                Some(q) => {
                    let q: Vec<String> = q.iter().map(crate::scalar::fmt_q).collect();
                    let _ = writeln!(s, "  exact: rho_B = 0 at ({})", q.join(", "));
                }
                None => {
                    let _ = writeln!(s, "  no rational point certified; max |rho_B| = {:.3e}", sol.ricci_max);
                }
            }
            (sol.ricci_max <= 1e-10, to_value(&sol)?)
        }
        Command::Rigidity => {
            let (rs, alg) = load_group(cfg)?;
            let opts = RigidityOptions {
                restarts: cfg.restarts,
                seed: cfg.seed,
                newton: NewtonOptions { tol: cfg.tol, ..Default::default() },
                ..Default::default()
            };
            let rep: RigidityReport = solve_skt_cyt(&rs, &alg, opts)?;
            let _ = writeln!(s, "{}: {}/{} restarts converged", rep.group, rep.converged, opts.restarts);
            let _ = writeln!(s, "  distinct solutions: {}", rep.solutions.len());
            if rep.counterexamples.is_empty() {
                let _ = writeln!(s, "  unique solution N = 0 (bi-invariant): {}", yes(rep.unique_bi_invariant));
            } else {
                let _ = writeln!(s, "  COUNTEREXAMPLES: {:?}", rep.counterexamples);
            }
            let _ = writeln!(s, "  Bismut flat at N = 0: {}", rep.bismut_flat_at_origin.map_or("skipped", yes));
            let _ = writeln!(s, "  min eigenvalue of L over {} samples: {:.6e}", opts.l_samples, rep.l_min_eigenvalue);
            let ok = rep.unique_bi_invariant && rep.origin_exact && rep.bismut_flat_at_origin != Some(false) && rep.l_min_eigenvalue > 0.0;
            (ok, to_value(&rep)?)
        }
        Command::So9Verify => {
            let data = So9GoldenData::load()?;
            let rs = build_root_system(&"B4".parse()?)?;
            let alg = build_compact_form(&rs)?;
            let fixture = fixture_algebra(&data)?;
            let structure = verify_structure_equations(&data, &fixture, &alg)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let family = verify_family(&data, &rs, &alg, &fixture, &mut rng)?;
            let _ = writeln!(
                s,
                "structure equations: {}/{} verbatim, {}/{} with the recorded errata",
                structure.verbatim_pass, structure.total, structure.corrected_pass, structure.total
            );
            for e in structure.equations.iter().filter(|e| !e.verbatim) {
                for t in &e.inadmissible {
                    let _ = writeln!(s, "  d phi{} term {}: {} ^ {}: {}", e.k, t.term + 1, t.left, t.right, t.reason);
                }
            }
            let _ = writeln!(s, "matrix algebra isomorphic to the abstract B4 build: {}", yes(structure.isomorphic));
            let _ = writeln!(
                s,
                "SKT family: dimension {}, {}/{} determined coefficients, {}/{} free coefficients",
                family.dimension, family.determined_pass, family.determined_total, family.free_pass, family.free_total
            );
            let _ = writeln!(s, "  b = 1 gives F_0: {}", yes(family.bi_invariant_recovered));
            let _ = writeln!(s, "  ddcF = 0 at {} random points: {}", family.ddc_zero.len(), yes(family.ddc_zero.iter().all(|&x| x)));
            let _ = writeln!(s, "  exactness witness: verbatim {}, corrected {}", yes(family.witness_verbatim), yes(family.witness_corrected));
            let ok = structure.corrected_pass == structure.total
                && structure.corrected_admissible
                && structure.equations.iter().all(|e| e.verbatim || !e.inadmissible.is_empty())
                && structure.isomorphic
                && family.dimension == 5
                && family.determined_pass == family.determined_total
                && family.free_pass == family.free_total
                && family.bi_invariant_recovered
                && family.ddc_zero.iter().all(|&x| x);
            (ok, to_value(&So9Report { structure, family })?)
        }
    };
    Ok(Outcome { ok, summary: s, report })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Run, write the report if requested, and return the process exit code.
pub fn main_with(cfg: &RunConfig) -> i32 {
    match run(cfg) {
        Ok(out) => {
            print!("{}", out.summary);
            if let Some(path) = &cfg.out {
                let text = serde_json::to_string_pretty(&out.report).expect("serializable") + "\n";
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: {}: {e}", path.display());
                    return 2;
                }
            }
            i32::from(!out.ok)
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
