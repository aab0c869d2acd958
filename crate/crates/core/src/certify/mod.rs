//! Uniqueness certificates.
//!
//! Each family reduces to a handful of conditions evaluated in a fixed order:
//! optimality systems first (a failure there ends the evaluation with
//! [`Verdict::NotOptimal`]), then kernel rank conditions, then strict dual systems.
//! A candidate is certified [`Verdict::Unique`] exactly when every required condition
//! holds. Any borderline strict system without a definite failure gives
//! [`Verdict::Undetermined`].
//!
//! The objective's local behaviour is encoded either through its active pieces
//! ([`Method::Generic`]) or, for composite ℓ₁ norms, through the support
//! decomposition ([`Method::L1`]), which avoids the `2^k` expansion.

mod encode;
pub mod system;

use serde::{Deserialize, Serialize};

use crate::dense::IndexSet;
use crate::error::{Error, Result};
use crate::model::{check_feasibility, Branch, Family, ProblemInstance, Tolerances};
use crate::pa::PaFunction;
use crate::reductions;

use encode::{Ctx, DualSpec, Local, Mode};
pub use system::{AuditOutcome, BlockRecord, BlockSign, SystemRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Unique,
    NotUnique,
    NotOptimal,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionStatus {
    Holds,
    Fails,
    Borderline,
}

/// How a condition enters the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionRole {
    /// Failure means the candidate is not a minimizer.
    Optimality,
    /// Required for uniqueness.
    Uniqueness,
    /// Reported only; selects which other conditions apply.
    Informational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankDetail {
    pub rank: usize,
    pub columns: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub name: String,
    pub role: ConditionRole,
    pub status: ConditionStatus,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<RankDetail>,
    /// Optimal margin of the strictly positive block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    /// The linear system and, when it holds, its witness.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemRecord>,
}

/// Which encoding of the objective's local behaviour was used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Explicit active pieces.
    Generic,
    /// Explicit active pieces with normalized strictly positive weights.
    GenericNormalized,
    /// Support decomposition of a composite ℓ₁ norm.
    L1,
    /// Support decomposition of the plain ℓ₁ norm, restricted to the support.
    L1Identity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    pub method: Method,
    /// Active polyhedron rows, 1-based.
    pub active_rows: Vec<usize>,
    /// Tight piecewise-affine constraints, 1-based.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tight_constraints: Vec<usize>,
    pub conditions: Vec<ConditionResult>,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn condition(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.name == name)
    }

    /// Re-checks every stored witness of a holding condition.
    pub fn audit(&self) -> Vec<(String, AuditOutcome)> {
        self.conditions
            .iter()
            .filter(|c| c.status == ConditionStatus::Holds)
            .filter_map(|c| c.system.as_ref().map(|s| (c.name.clone(), s.audit(self.tolerances.tol_strict))))
            .collect()
    }
}

/// Requested encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    /// Support decomposition for composite ℓ₁ norms, active pieces otherwise.
    #[default]
    Auto,
    /// Active pieces; composite ℓ₁ norms are expanded.
    Generic,
    /// Support decomposition; explicit objectives are rejected.
    L1,
}

/// Weighting of the tight-constraint blocks in the strict system for norm-constrained
/// problems with several tight constraints.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConstraintWeights {
    /// Each block's weights are only required to be positive.
    #[default]
    Unnormalized,
    /// Each block's weights are positive and sum to one.
    PerBlock,
}

/// Encoding of the boundary dual condition for loss-constrained problems.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BoundaryDual {
    /// Loss gradient scaled by a strictly positive factor, subgradient normalized.
    #[default]
    Scaled,
    /// Loss gradient fixed, subgradient weights merely nonnegative.
    Unnormalized,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CertifyOptions {
    pub tolerances: Tolerances,
    pub method: MethodChoice,
    /// Use normalized strictly positive piece weights in the basis-pursuit strict system.
    pub normalized: bool,
    pub constraint_weights: ConstraintWeights,
    pub boundary_dual: BoundaryDual,
}

impl CertifyOptions {
    pub fn new(tolerances: Tolerances, method: MethodChoice) -> Self {
        CertifyOptions { tolerances, method, ..Default::default() }
    }
}

/// Certifies `x` with default encodings.
pub fn certify(inst: &ProblemInstance, x: &[f64], tols: &Tolerances, method: MethodChoice) -> Result<Certificate> {
    certify_with(inst, x, &CertifyOptions::new(*tols, method))
}

/// Certifies `x`. Fails with [`Error::Infeasible`] when `x` is not feasible.
pub fn certify_with(inst: &ProblemInstance, x: &[f64], opts: &CertifyOptions) -> Result<Certificate> {
    let tols = opts.tolerances;
    let report = check_feasibility(inst, x, &tols)?;
    if !report.feasible {
        return Err(Error::Infeasible(Box::new(report)));
    }
    if let Some(crate::model::Loss::Pa(_)) = inst.loss() {
        let (reduced, trace) = reductions::reduce_pa_loss(inst)?;
        let mut cert = certify_with(&reduced, x, opts)?;
        cert.family = inst.family();
        cert.notes.push(format!("reduced to a loss-free problem: {}", trace.description));
        return Ok(cert);
    }
    let (alpha, c_alpha) = inst.polyhedron().active_rows(x, tols.tol_active)?;
    let ctx = Ctx { n: inst.dim(), a: inst.a(), c_alpha, tols };
    let mut cert = match inst {
        ProblemInstance::BpLike { objective, .. } => {
            let local = Local::at(objective, x, opts)?;
            let (method, conditions) = bp_conditions(&ctx, &local, true, "bp", opts.normalized, None)?;
            finish(inst.family(), None, method, conditions, &tols)
        }
        ProblemInstance::LassoLike { objective, .. } => {
            let local = Local::at(objective, x, opts)?;
            let h = inst.smooth_gradient(x)?;
            let (method, conditions) = bp_conditions(&ctx, &local, true, "lasso", opts.normalized, Some(&h))?;
            finish(inst.family(), None, method, conditions, &tols)
        }
        ProblemInstance::Bpdn1 { objective, .. } => {
            let local = Local::at(objective, x, opts)?;
            let branch = report.branch.unwrap_or(Branch::Boundary);
            let (method, conditions) = match branch {
                Branch::Interior => bp_conditions(&ctx, &local, false, "bpdn1", opts.normalized, None)?,
                Branch::Boundary => {
                    let h = inst.smooth_gradient(x)?;
                    bpdn1_boundary(&ctx, &local, &h, opts)?
                }
            };
            finish(inst.family(), Some(branch), method, conditions, &tols)
        }
        ProblemInstance::Bpdn2 { constraints, .. } => {
            let tight = &report.tight_constraints;
            let locals: Vec<Local> =
                tight.iter().map(|i| Local::at(&constraints[i].g, x, opts)).collect::<Result<_>>()?;
            let h = inst.smooth_gradient(x)?;
            let (method, conditions) = bpdn2_conditions(&ctx, &locals, tight, &h, opts)?;
            let branch = if tight.is_empty() { Branch::Interior } else { Branch::Boundary };
            let mut c = finish(inst.family(), Some(branch), method, conditions, &tols);
            c.tight_constraints = tight.one_based();
            c
        }
    };
    cert.active_rows = alpha.one_based();
    Ok(cert)
}

/// Runs both encodings on a composite ℓ₁ objective.
pub fn certify_both(inst: &ProblemInstance, x: &[f64], tols: &Tolerances) -> Result<(Certificate, Certificate)> {
    let generic = certify(inst, x, tols, MethodChoice::Generic)?;
    let l1 = certify(inst, x, tols, MethodChoice::L1)?;
    Ok((generic, l1))
}

fn finish(family: Family, branch: Option<Branch>, method: Method, conditions: Vec<ConditionResult>, tols: &Tolerances) -> Certificate {
    Certificate {
        verdict: verdict(&conditions),
        family,
        branch,
        method,
        active_rows: vec![],
        tight_constraints: vec![],
        conditions,
        tolerances: *tols,
        notes: vec![],
    }
}

/// Combines condition statuses into a verdict.
pub fn verdict(conditions: &[ConditionResult]) -> Verdict {
    let failing = |role: ConditionRole| conditions.iter().any(|c| c.role == role && c.status == ConditionStatus::Fails);
    if failing(ConditionRole::Optimality) {
        return Verdict::NotOptimal;
    }
    if failing(ConditionRole::Uniqueness) {
        return Verdict::NotUnique;
    }
    let borderline = conditions.iter().any(|c| c.role != ConditionRole::Informational && c.status == ConditionStatus::Borderline);
    if borderline {
        Verdict::Undetermined
    } else {
        Verdict::Unique
    }
}

/// Optimality (if `gradient` is given or the problem has no loss), kernel and strict
/// conditions for the basis-pursuit structure at `x`.
fn bp_conditions(
    ctx: &Ctx<'_>,
    local: &Local,
    with_measurements: bool,
    prefix: &str,
    normalized: bool,
    gradient: Option<&[f64]>,
) -> Result<(Method, Vec<ConditionResult>)> {
    let mut conds = Vec::new();
    let opt = DualSpec {
        constant: gradient,
        measurements: with_measurements && gradient.is_none(),
        active_rows: BlockSign::Nonnegative,
        terms: vec![(local, Mode::Hull, String::new())],
        ..DualSpec::default()
    };
    if with_measurements || gradient.is_some() {
        let c = ctx.system_condition(&format!("{prefix}.optimality"), ConditionRole::Optimality, &opt)?;
        let failed = c.status == ConditionStatus::Fails;
        conds.push(c);
        if failed {
            return Ok((local.method(false), conds));
        }
    }
    conds.push(ctx.bp_rank(&format!("{prefix}.kernel"), local, with_measurements)?);
    let normalized = normalized && matches!(local, Local::Pieces(_));
    conds.push(ctx.bp_strict(&format!("{prefix}.strict_dual"), local, with_measurements, normalized)?);
    Ok((local.method(normalized), conds))
}

fn bpdn1_boundary(ctx: &Ctx<'_>, local: &Local, h: &[f64], opts: &CertifyOptions) -> Result<(Method, Vec<ConditionResult>)> {
    let mut conds = Vec::new();
    conds.push(ctx.bp_rank("bpdn1.kernel", local, true)?);
    conds.push(ctx.bp_strict("bpdn1.strict_dual", local, true, false)?);
    let cone = DualSpec { constant: Some(h), active_rows: BlockSign::Nonnegative, ..DualSpec::default() };
    let mut empty = ctx.system_condition("bpdn1.descent_cone_empty", ConditionRole::Informational, &cone)?;
    empty.detail = if empty.status == ConditionStatus::Holds {
        "no feasible direction decreases the loss; the boundary dual condition is vacuous".into()
    } else {
        "some feasible direction decreases the loss".into()
    };
    let cone_empty = empty.status == ConditionStatus::Holds;
    conds.push(empty);
    if cone_empty {
        conds.push(ConditionResult {
            name: "bpdn1.boundary_dual".into(),
            role: ConditionRole::Uniqueness,
            status: ConditionStatus::Holds,
            detail: "vacuous: the loss descent cone is empty".into(),
            rank: None,
            margin: None,
            system: None,
        });
    } else {
        let spec = match opts.boundary_dual {
            BoundaryDual::Scaled => DualSpec {
                scaled: Some(h),
                active_rows: BlockSign::Nonnegative,
                terms: vec![(local, Mode::Hull, String::new())],
                ..DualSpec::default()
            },
            BoundaryDual::Unnormalized => DualSpec {
                constant: Some(h),
                active_rows: BlockSign::Nonnegative,
                terms: vec![(local, Mode::Cone, String::new())],
                ..DualSpec::default()
            },
        };
        conds.push(ctx.system_condition("bpdn1.boundary_dual", ConditionRole::Uniqueness, &spec)?);
    }
    Ok((local.method(false), conds))
}

fn bpdn2_conditions(
    ctx: &Ctx<'_>,
    locals: &[Local],
    tight: &IndexSet,
    h: &[f64],
    opts: &CertifyOptions,
) -> Result<(Method, Vec<ConditionResult>)> {
    let label = |i: usize| format!("[{}]", i + 1);
    let terms = |mode: Mode| -> Vec<(&Local, Mode, String)> {
        locals.iter().zip(tight.iter()).map(|(l, i)| (l, mode, label(i))).collect()
    };
    let method = if locals.iter().any(|l| matches!(l, Local::L1 { .. })) { Method::L1 } else { Method::Generic };
    let mut conds = Vec::new();
    let opt = DualSpec { constant: Some(h), active_rows: BlockSign::Nonnegative, terms: terms(Mode::Cone), ..DualSpec::default() };
    let c = ctx.system_condition("bpdn2.optimality", ConditionRole::Optimality, &opt)?;
    let failed = c.status == ConditionStatus::Fails;
    conds.push(c);
    if failed {
        return Ok((method, conds));
    }
    conds.push(ctx.stacked_rank("bpdn2.kernel", locals)?);
    let mode = match opts.constraint_weights {
        ConstraintWeights::Unnormalized => Mode::StrictCone,
        ConstraintWeights::PerBlock => Mode::StrictHull { capped: false },
    };
    let strict = DualSpec { measurements: true, active_rows: BlockSign::Positive, terms: terms(mode), ..DualSpec::default() };
    conds.push(ctx.system_condition("bpdn2.strict_dual", ConditionRole::Uniqueness, &strict)?);
    Ok((method, conds))
}

/// The objective of a basis-pursuit-type instance, if any.
pub fn objective_of(inst: &ProblemInstance) -> Option<&PaFunction> {
    match inst {
        ProblemInstance::BpLike { objective, .. }
        | ProblemInstance::LassoLike { objective, .. }
        | ProblemInstance::Bpdn1 { objective, .. } => Some(objective),
        ProblemInstance::Bpdn2 { .. } => None,
    }
}

