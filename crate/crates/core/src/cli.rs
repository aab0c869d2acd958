//! Command-line front end, instance and report documents, and the comparison harness.
//!
//! Instance documents are JSON:
//!
//! ```json
//! { "family": "bp", "A": [[2, 1]], "y": [2], "x_star": [1, 0], "g": { "kind": "l1" } }
//! ```
//!
//! Exit codes: 0 unique, 1 not unique, 2 not optimal, 3 undetermined,
//! 4 input or feasibility error, 5 solver failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::certify::{certify, Certificate, ConditionStatus, MethodChoice, Verdict};
use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::model::{Branch, Family, Loss, PaConstraint, Polyhedron, ProblemInstance, Tolerances};
use crate::oracle::generate::{generate, GenSpec};
use crate::oracle::{oracle, OracleResult};
use crate::pa::{stack, PaFunction};

pub const EXIT_UNIQUE: i32 = 0;
pub const EXIT_NOT_UNIQUE: i32 = 1;
pub const EXIT_NOT_OPTIMAL: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;
pub const EXIT_INPUT: i32 = 4;
pub const EXIT_SOLVER: i32 = 5;

pub fn exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Unique => EXIT_UNIQUE,
        Verdict::NotUnique => EXIT_NOT_UNIQUE,
        Verdict::NotOptimal => EXIT_NOT_OPTIMAL,
        Verdict::Undetermined => EXIT_UNDETERMINED,
    }
}

pub fn error_code(err: &Error) -> i32 {
    match err {
        Error::Solver(_) => EXIT_SOLVER,
        _ => EXIT_INPUT,
    }
}

/// Objective or constraint descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GDesc {
    L1 {},
    CompositeL1 {
        #[serde(rename = "E")]
        e: Vec<Vec<f64>>,
    },
    Explicit {
        #[serde(rename = "P")]
        p: Vec<Vec<f64>>,
        gamma: Vec<f64>,
    },
    Stack {
        parts: Vec<StackPart>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackPart {
    pub weight: f64,
    #[serde(rename = "E")]
    pub e: Vec<Vec<f64>>,
}

/// Loss descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FDesc {
    Quadratic {},
    Pa {
        #[serde(rename = "P")]
        p: Vec<Vec<f64>>,
        gamma: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintDesc {
    pub g: GDesc,
    pub eta: f64,
}

/// Tolerance overrides; unset fields fall through to flags and defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_active: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_rank: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_strict: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_eq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_face: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            tol_active: self.tol_active.unwrap_or(base.tol_active),
            tol_rank: self.tol_rank.unwrap_or(base.tol_rank),
            tol_strict: self.tol_strict.unwrap_or(base.tol_strict),
            tol_eq: self.tol_eq.unwrap_or(base.tol_eq),
            tol_face: self.tol_face.unwrap_or(base.tol_face),
        }
    }
}

/// On-disk instance plus candidate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub family: Family,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<f64>>,
    pub x_star: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<GDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<FDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<Vec<ConstraintDesc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
}

fn matrix(name: &str, rows: &[Vec<f64>], cols: usize) -> Result<Matrix> {
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(Error::Input(format!("{name}: row {} has {} entries, expected {cols}", i + 1, r.len())));
    }
    Matrix::from_rows(rows, cols)
}

fn width(name: &str, rows: &[Vec<f64>]) -> Result<usize> {
    rows.first().map(Vec::len).ok_or_else(|| Error::Input(format!("{name} must have at least one row")))
}

impl GDesc {
    pub fn build(&self, n: usize) -> Result<PaFunction> {
        match self {
            GDesc::L1 {} => Ok(PaFunction::l1(n)),
            GDesc::CompositeL1 { e } => PaFunction::composite_l1(matrix("E", e, n)?),
            GDesc::Explicit { p, gamma } => PaFunction::explicit(matrix("P", p, n)?, gamma.clone()),
            GDesc::Stack { parts } => {
                let mats: Vec<(f64, Matrix)> =
                    parts.iter().map(|s| Ok((s.weight, matrix("E", &s.e, n)?))).collect::<Result<_>>()?;
                let refs: Vec<(f64, &Matrix)> = mats.iter().map(|(w, m)| (*w, m)).collect();
                stack(&refs)
            }
        }
    }

    pub fn describe(g: &PaFunction) -> GDesc {
        match g {
            PaFunction::CompositeL1 { map } if map.is_identity() => GDesc::L1 {},
            PaFunction::CompositeL1 { map } => GDesc::CompositeL1 { e: map.to_rows() },
            PaFunction::Explicit { generators, offsets } => GDesc::Explicit { p: generators.to_rows(), gamma: offsets.clone() },
        }
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Input(msg) => Error::Input(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance documents always serialize")
    }

    /// Builds the instance; the candidate is `x_star`.
    pub fn instance(&self) -> Result<ProblemInstance> {
        let n = self.x_star.len();
        if n == 0 {
            return Err(Error::Input("x_star must be nonempty".into()));
        }
        let a = match &self.a {
            Some(rows) => matrix("A", rows, n)?,
            None => Matrix::zeros(0, n),
        };
        let y = self.y.clone().unwrap_or_default();
        let polyhedron = match (&self.c, &self.d) {
            (Some(c), Some(d)) => Polyhedron::new(matrix("C", c, n)?, d.clone())?,
            (None, None) => Polyhedron::whole_space(n),
            _ => return Err(Error::Input("C and d must be given together".into())),
        };
        let objective = || -> Result<PaFunction> {
            self.g.as_ref().ok_or_else(|| Error::Input(format!("family {} needs `g`", self.family)))?.build(n)
        };
        let loss = || -> Result<Loss> {
            match &self.f {
                None | Some(FDesc::Quadratic {}) => Ok(Loss::Quadratic),
                Some(FDesc::Pa { p, gamma }) => {
                    Ok(Loss::Pa(PaFunction::explicit(matrix("f.P", p, width("f.P", p)?)?, gamma.clone())?))
                }
            }
        };
        let unexpected = |field: &str, present: bool| -> Result<()> {
            if present {
                Err(Error::Input(format!("field `{field}` does not apply to family {}", self.family)))
            } else {
                Ok(())
            }
        };
        let inst = match self.family {
            Family::Bp => {
                unexpected("f", self.f.is_some())?;
                unexpected("epsilon", self.epsilon.is_some())?;
                unexpected("constraints", self.constraints.is_some())?;
                ProblemInstance::BpLike { objective: objective()?, a, y, polyhedron }
            }
            Family::Lasso => {
                unexpected("epsilon", self.epsilon.is_some())?;
                unexpected("constraints", self.constraints.is_some())?;
                ProblemInstance::LassoLike { loss: loss()?, a, y, objective: objective()?, polyhedron }
            }
            Family::Bpdn1 => {
                unexpected("constraints", self.constraints.is_some())?;
                let radius = self.epsilon.ok_or_else(|| Error::Input("family bpdn1 needs `epsilon`".into()))?;
                ProblemInstance::Bpdn1 { objective: objective()?, loss: loss()?, a, y, radius, polyhedron }
            }
            Family::Bpdn2 => {
                unexpected("g", self.g.is_some())?;
                unexpected("epsilon", self.epsilon.is_some())?;
                let descs = self.constraints.as_ref().ok_or_else(|| Error::Input("family bpdn2 needs `constraints`".into()))?;
                let constraints =
                    descs.iter().map(|c| Ok(PaConstraint { g: c.g.build(n)?, bound: c.eta })).collect::<Result<_>>()?;
                ProblemInstance::Bpdn2 { loss: loss()?, a, y, constraints, polyhedron }
            }
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Document for an instance and candidate. Custom smooth losses have no file form.
    pub fn from_instance(inst: &ProblemInstance, x_star: &[f64]) -> Result<Self> {
        let f = match inst.loss() {
            None => None,
            Some(Loss::Quadratic) => Some(FDesc::Quadratic {}),
            Some(Loss::Pa(g)) => match g.to_explicit()? {
                PaFunction::Explicit { generators, offsets } => Some(FDesc::Pa { p: generators.to_rows(), gamma: offsets }),
                PaFunction::CompositeL1 { .. } => unreachable!("to_explicit returns explicit pieces"),
            },
            Some(Loss::Smooth(s)) => return Err(Error::Unsupported(format!("loss `{}` has no file representation", s.name))),
        };
        let poly = inst.polyhedron();
        let (c, d) = if poly.nrows() == 0 { (None, None) } else { (Some(poly.lhs.to_rows()), Some(poly.rhs.clone())) };
        let a = inst.a();
        let (a, y) = if a.nrows() == 0 { (None, None) } else { (Some(a.to_rows()), Some(inst.y().to_vec())) };
        let mut file = InstanceFile {
            family: inst.family(),
            a,
            y,
            c,
            d,
            x_star: x_star.to_vec(),
            g: None,
            f,
            epsilon: None,
            constraints: None,
            tolerances: None,
        };
        match inst {
            ProblemInstance::BpLike { objective, .. } | ProblemInstance::LassoLike { objective, .. } => {
                file.g = Some(GDesc::describe(objective))
            }
            ProblemInstance::Bpdn1 { objective, radius, .. } => {
                file.g = Some(GDesc::describe(objective));
                file.epsilon = Some(*radius);
            }
            ProblemInstance::Bpdn2 { constraints, .. } => {
                file.constraints =
                    Some(constraints.iter().map(|c| ConstraintDesc { g: GDesc::describe(&c.g), eta: c.bound }).collect())
            }
        }
        Ok(file)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    Certify,
    Oracle,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timings {
    pub total_ms: f64,
}

/// Output of `certify` and `oracle`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub kind: ReportKind,
    pub verdict: Verdict,
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    /// One certificate, or two when both encodings were requested.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleResult>,
    pub tolerances: Tolerances,
    pub timings: Timings,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verdict: {:?}", self.verdict);
        let _ = write!(out, "family: {}", self.family);
        if let Some(b) = self.branch {
            let _ = write!(out, " ({b:?})");
        }
        out.push('\n');
        for cert in &self.certificates {
            let _ = writeln!(out, "method: {:?} -> {:?}", cert.method, cert.verdict);
            if !cert.active_rows.is_empty() {
                let _ = writeln!(out, "  active rows: {:?}", cert.active_rows);
            }
            if !cert.tight_constraints.is_empty() {
                let _ = writeln!(out, "  tight constraints: {:?}", cert.tight_constraints);
            }
            for c in &cert.conditions {
                let margin = c.margin.map(|m| format!(" margin={m:.3e}")).unwrap_or_default();
                let rank = c.rank.map(|r| format!(" rank={}/{}", r.rank, r.columns)).unwrap_or_default();
                let _ = writeln!(out, "  {:<28} {:<10}{rank}{margin}  {}", c.name, format!("{:?}", c.status), c.detail);
            }
            for note in &cert.notes {
                let _ = writeln!(out, "  note: {note}");
            }
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(out, "oracle: {:?}{}  {}", o.verdict, if o.borderline { " (borderline)" } else { "" }, o.detail);
            if let Some(v) = o.opt_value {
                let _ = writeln!(out, "  optimal value: {v}");
            }
            if let Some(p) = &o.second_point {
                let _ = writeln!(out, "  second point: {p:?}");
            }
            if let Some(p) = &o.better_point {
                let _ = writeln!(out, "  better point: {p:?}");
            }
            let _ = writeln!(out, "  max span: {:.3e}", o.max_span);
        }
        let t = &self.tolerances;
        let _ = writeln!(
            out,
            "tolerances: active={:e} rank={:e} strict={:e} eq={:e} face={:e}",
            t.tol_active, t.tol_rank, t.tol_strict, t.tol_eq, t.tol_face
        );
        let _ = writeln!(out, "time: {:.3} ms", self.timings.total_ms);
        out
    }
}

#[derive(Parser, Debug)]
#[command(name = "uniqcert", version, about = "Certify unique optimality for piecewise-affine problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the rank and dual conditions on an instance file.
    Certify(CertifyArgs),
    /// Decide uniqueness by direct linear programming.
    Oracle(OracleArgs),
    /// Compare the certifier with the oracle on a file or generated instances.
    Compare(CompareArgs),
    /// Write a generated instance file.
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodFlag {
    Auto,
    Generic,
    L1,
    Both,
}

#[derive(Args, Debug, Clone, Default)]
pub struct TolFlags {
    #[arg(long)]
    pub tol_active: Option<f64>,
    #[arg(long)]
    pub tol_rank: Option<f64>,
    #[arg(long)]
    pub tol_strict: Option<f64>,
    #[arg(long)]
    pub tol_face: Option<f64>,
}

impl TolFlags {
    fn overrides(&self) -> ToleranceOverrides {
        ToleranceOverrides {
            tol_active: self.tol_active,
            tol_rank: self.tol_rank,
            tol_strict: self.tol_strict,
            tol_eq: None,
            tol_face: self.tol_face,
        }
    }
}

#[derive(Args, Debug, Clone, Copy, Default)]
#[group(multiple = false)]
pub struct FormatFlags {
    /// Emit the report as JSON (default).
    #[arg(long)]
    pub json: bool,
    /// Emit a human-readable summary.
    #[arg(long)]
    pub text: bool,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodFlag,
    #[command(flatten)]
    pub tols: TolFlags,
    #[command(flatten)]
    pub format: FormatFlags,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    pub path: PathBuf,
    #[command(flatten)]
    pub tols: TolFlags,
    #[command(flatten)]
    pub format: FormatFlags,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Instance file; omit when using `--gen`.
    pub path: Option<PathBuf>,
    /// Generator settings as comma-separated `key=value` pairs.
    #[arg(long, conflicts_with = "path")]
    pub gen: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Base seed; instance `i` uses `seed + i`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub tols: TolFlags,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// `key=value` pairs, e.g. `family=lasso seed=3`.
    #[arg(required = true)]
    pub spec: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn load_with_tolerances(path: &Path, flags: &TolFlags) -> Result<(ProblemInstance, Vec<f64>, Tolerances)> {
    let file = InstanceFile::load(path)?;
    let inst = file.instance()?;
    let tols = file.tolerances.unwrap_or_default().apply(flags.overrides().apply(Tolerances::default()));
    Ok((inst, file.x_star, tols))
}

fn render(report: &Report, format: FormatFlags) -> String {
    if format.text {
        report.to_text()
    } else {
        report.to_json()
    }
}

/// Certifies the candidate in an instance file.
pub fn cmd_certify(args: &CertifyArgs) -> Result<(i32, Report)> {
    let start = Instant::now();
    let (inst, x, tols) = load_with_tolerances(&args.path, &args.tols)?;
    let choice = |m| certify(&inst, &x, &tols, m);
    let certificates = match args.method {
        MethodFlag::Auto => vec![choice(MethodChoice::Auto)?],
        MethodFlag::Generic => vec![choice(MethodChoice::Generic)?],
        MethodFlag::L1 => vec![choice(MethodChoice::L1)?],
        MethodFlag::Both => vec![choice(MethodChoice::Generic)?, choice(MethodChoice::L1)?],
    };
    let first = certificates[0].verdict;
    let verdict = if certificates.iter().all(|c| c.verdict == first) { first } else { Verdict::Undetermined };
    let report = Report {
        kind: ReportKind::Certify,
        verdict,
        family: inst.family(),
        branch: certificates[0].branch,
        certificates,
        oracle: None,
        tolerances: tols,
        timings: Timings { total_ms: start.elapsed().as_secs_f64() * 1e3 },
    };
    Ok((exit_code(verdict), report))
}

/// Runs the brute-force oracle on an instance file.
pub fn cmd_oracle(args: &OracleArgs) -> Result<(i32, Report)> {
    let start = Instant::now();
    let (inst, x, tols) = load_with_tolerances(&args.path, &args.tols)?;
    let res = oracle(&inst, &x, &tols)?;
    let branch = match &inst {
        ProblemInstance::Bpdn1 { .. } => crate::model::check_feasibility(&inst, &x, &tols)?.branch,
        _ => None,
    };
    let report = Report {
        kind: ReportKind::Oracle,
        verdict: res.verdict,
        family: inst.family(),
        branch,
        certificates: vec![],
        oracle: Some(res),
        tolerances: tols,
        timings: Timings { total_ms: start.elapsed().as_secs_f64() * 1e3 },
    };
    Ok((exit_code(report.verdict), report))
}

/// Outcome of one certifier-versus-oracle comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub certifier: Option<Verdict>,
    pub oracle: Option<Verdict>,
    pub oracle_borderline: bool,
    /// `None` when either side is undetermined or borderline.
    pub agree: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Certifies and runs the oracle on one instance.
pub fn compare_one(inst: &ProblemInstance, x: &[f64], tols: &Tolerances) -> (Comparison, Option<Certificate>, Option<OracleResult>) {
    let cert = certify(inst, x, tols, MethodChoice::Auto);
    let orc = oracle(inst, x, tols);
    let mut cmp = Comparison {
        index: 0,
        seed: None,
        certifier: cert.as_ref().ok().map(|c| c.verdict),
        oracle: orc.as_ref().ok().map(|o| o.verdict),
        oracle_borderline: orc.as_ref().map(|o| o.borderline).unwrap_or(false),
        agree: None,
        error: None,
    };
    let errors: Vec<String> =
        [cert.as_ref().err().map(|e| format!("certifier: {e}")), orc.as_ref().err().map(|e| format!("oracle: {e}"))]
            .into_iter()
            .flatten()
            .collect();
    if !errors.is_empty() {
        cmp.error = Some(errors.join("; "));
    }
    if let (Some(c), Some(o)) = (cmp.certifier, cmp.oracle) {
        if c != Verdict::Undetermined && !cmp.oracle_borderline {
            cmp.agree = Some(c == o);
        }
    }
    (cmp, cert.ok(), orc.ok())
}

/// Runs comparisons and returns the exit code with a printable summary.
pub fn cmd_compare(args: &CompareArgs) -> Result<(i32, String)> {
    let mut rows = Vec::new();
    let mut dumps = Vec::new();
    let flag_tols = args.tols.overrides().apply(Tolerances::default());
    let mut record = |mut cmp: Comparison, idx: usize, file: Option<InstanceFile>, cert: Option<Certificate>, orc: Option<OracleResult>| {
        cmp.index = idx;
        if cmp.agree == Some(false) || cmp.error.is_some() {
            dumps.push(serde_json::json!({ "index": idx, "instance": file, "certificate": cert, "oracle": orc, "error": cmp.error }));
        }
        rows.push(cmp);
    };
    match (&args.path, &args.gen) {
        (Some(path), _) => {
            let file = InstanceFile::load(path)?;
            let inst = file.instance()?;
            let tols = file.tolerances.unwrap_or_default().apply(flag_tols);
            let (cmp, cert, orc) = compare_one(&inst, &file.x_star, &tols);
            record(cmp, 0, Some(file), cert, orc);
        }
        (None, Some(spec)) => {
            let base = GenSpec::parse(spec)?;
            let seed0 = args.seed.unwrap_or(base.seed);
            for i in 0..args.count {
                let spec = GenSpec { seed: seed0.wrapping_add(i as u64), ..base.clone() };
                let g = generate(&spec)?;
                let (mut cmp, cert, orc) = compare_one(&g.instance, &g.x_star, &flag_tols);
                cmp.seed = Some(spec.seed);
                record(cmp, i, InstanceFile::from_instance(&g.instance, &g.x_star).ok(), cert, orc);
            }
        }
        (None, None) => return Err(Error::Input("compare needs an instance file or --gen".into())),
    }
    let agreed = rows.iter().filter(|r| r.agree == Some(true)).count();
    let disagreed = rows.iter().filter(|r| r.agree == Some(false)).count();
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    let skipped = rows.len() - agreed - disagreed - rows.iter().filter(|r| r.agree.is_none() && r.error.is_some()).count();
    let mut out = String::new();
    let _ = writeln!(out, "{:>5} {:>8} {:<13} {:<13} {}", "index", "seed", "certifier", "oracle", "agree");
    for r in &rows {
        let v = |x: Option<Verdict>| x.map(|v| format!("{v:?}")).unwrap_or_else(|| "error".into());
        let agree = match (r.agree, &r.error) {
            (Some(true), _) => "yes",
            (Some(false), _) => "NO",
            (None, Some(_)) => "error",
            (None, None) => "skipped",
        };
        let seed = r.seed.map(|s| s.to_string()).unwrap_or_else(|| "-".into());
        let border = if r.oracle_borderline { "*" } else { "" };
        let _ = writeln!(out, "{:>5} {:>8} {:<13} {:<13} {agree}", r.index, seed, v(r.certifier), format!("{}{border}", v(r.oracle)));
    }
    let decided = agreed + disagreed;
    let _ = writeln!(out, "agreement: {agreed}/{decided} decided, {skipped} skipped, {errors} errors, {} total", rows.len());
    for d in &dumps {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(d).expect("dump serializes"));
    }
    let code = if disagreed > 0 {
        EXIT_NOT_UNIQUE
    } else if rows.iter().any(|r| r.error.as_deref().is_some_and(|e| e.contains("solver failure"))) {
        EXIT_SOLVER
    } else if errors > 0 {
        EXIT_INPUT
    } else {
        0
    };
    Ok((code, out))
}

/// Generates an instance document; identical specs produce identical bytes.
pub fn cmd_gen(args: &GenArgs) -> Result<String> {
    let mut spec = GenSpec::parse(&args.spec.join(","))?;
    if let Some(s) = args.seed {
        spec.seed = s;
    }
    let g = generate(&spec)?;
    let text = InstanceFile::from_instance(&g.instance, &g.x_star)?.to_json() + "\n";
    if let Some(path) = &args.out {
        std::fs::write(path, &text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

/// Parses arguments and runs a command; returns the exit code and the text to print.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            return (code, e.to_string());
        }
    };
    let outcome = match &cli.command {
        Command::Certify(a) => cmd_certify(a).map(|(c, r)| (c, render(&r, a.format))),
        Command::Oracle(a) => cmd_oracle(a).map(|(c, r)| (c, render(&r, a.format))),
        Command::Compare(a) => cmd_compare(a),
        Command::Gen(a) => cmd_gen(a).map(|t| (0, if a.out.is_some() { String::new() } else { t })),
    };
    match outcome {
        Ok(r) => r,
        Err(e) => (error_code(&e), format!("error: {e}\n")),
    }
}

/// Entry point for the binary.
pub fn run_from_env() -> i32 {
    let (code, text) = run(std::env::args_os());
    if code == EXIT_INPUT || code == EXIT_SOLVER {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    code
}

/// Whether every holding condition in the report carries a witness that re-substitutes.
pub fn witnesses_check(report: &Report) -> bool {
    report.certificates.iter().all(|c| {
        c.audit().iter().all(|(_, a)| a.ok)
            && c.conditions.iter().all(|cond| cond.status != ConditionStatus::Holds || cond.rank.is_some() || cond.system.is_some())
    })
}
