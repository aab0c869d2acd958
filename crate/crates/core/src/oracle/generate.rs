//! Seeded random instances with planted candidates.
//!
//! Data are small integers so that active sets and rank decisions are unambiguous.
//! Smooth families are built around their optimality conditions: a candidate and
//! its active structure are planted first, a loss gradient `q` satisfying the
//! stationarity system is found by linear programming, and `y = Ax* - q/2` then makes
//! `q` the gradient of `‖Ax - y‖²` at the candidate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::model::{Branch, Family, Loss, PaConstraint, Polyhedron, ProblemInstance};
use crate::pa::{LocalModel, PaFunction, DEFAULT_TOL_ACTIVE};
use crate::simplex::{Cmp, LpBuilder, LpOutcome, Sense};

use super::{bp_solve, BpSolution};

/// Resampling attempts before generation gives up.
pub const MAX_ATTEMPTS: usize = 1000;
const GRADIENT_BOX: f64 = 4.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    L1,
    Composite,
    Explicit,
    /// A per-instance random choice among the other kinds.
    #[default]
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GenSpec {
    pub family: Family,
    /// Number of unknowns.
    pub n: usize,
    /// Number of measurements.
    pub m: usize,
    /// Number of polyhedron rows.
    pub p: usize,
    /// Rows of the composite ℓ₁ map.
    pub k: usize,
    /// Number of piecewise-affine constraints (norm-constrained family).
    pub constraints: usize,
    /// Integer data are drawn from `-range..=range`.
    pub range: i32,
    pub objective: ObjectiveKind,
    /// Loss-constrained family only; random when unset.
    pub branch: Option<Branch>,
    pub seed: u64,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec { family: Family::Bp, n: 4, m: 2, p: 2, k: 3, constraints: 1, range: 3, objective: ObjectiveKind::Mixed, branch: None, seed: 0 }
    }
}

impl GenSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        GenSpec { family, seed, ..Default::default() }
    }

    /// Parses `key=value` pairs separated by commas, e.g. `family=bp,n=5,seed=3`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = GenSpec::default();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| Error::Input(format!("expected key=value, got `{part}`")))?;
            let bad = |_| Error::Input(format!("invalid value `{value}` for `{key}`"));
            match key {
                "family" => {
                    spec.family = serde_json::from_value(serde_json::Value::String(value.into())).map_err(|_| Error::Input(format!("unknown family `{value}`")))?
                }
                "n" => spec.n = value.parse().map_err(bad)?,
                "m" => spec.m = value.parse().map_err(bad)?,
                "p" => spec.p = value.parse().map_err(bad)?,
                "k" => spec.k = value.parse().map_err(bad)?,
                "constraints" => spec.constraints = value.parse().map_err(bad)?,
                "range" => spec.range = value.parse().map_err(bad)?,
                "seed" => spec.seed = value.parse().map_err(bad)?,
                "objective" => {
                    spec.objective = serde_json::from_value(serde_json::Value::String(value.into())).map_err(|_| Error::Input(format!("unknown objective kind `{value}`")))?
                }
                "branch" => {
                    spec.branch = Some(serde_json::from_value(serde_json::Value::String(value.into())).map_err(|_| Error::Input(format!("unknown branch `{value}`")))?)
                }
                _ => return Err(Error::Input(format!("unknown generator key `{key}`"))),
            }
        }
        Ok(spec)
    }
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub instance: ProblemInstance,
    pub x_star: Vec<f64>,
    pub attempts: usize,
}

/// Generates an instance and candidate; identical specs give identical output.
pub fn generate(spec: &GenSpec) -> Result<Generated> {
    if spec.n == 0 || spec.range <= 0 {
        return Err(Error::Input("generator needs n ≥ 1 and a positive range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for attempt in 1..=MAX_ATTEMPTS {
        let out = match spec.family {
            Family::Bp => gen_bp(&mut rng, spec)?,
            Family::Lasso => gen_lasso(&mut rng, spec)?,
            Family::Bpdn1 => gen_bpdn1(&mut rng, spec)?,
            Family::Bpdn2 => gen_bpdn2(&mut rng, spec)?,
        };
        if let Some((instance, x_star)) = out {
            return Ok(Generated { instance, x_star, attempts: attempt });
        }
    }
    Err(Error::Generation(format!("no valid {} instance after {MAX_ATTEMPTS} attempts", spec.family)))
}

fn int(rng: &mut ChaCha8Rng, r: i32) -> f64 {
    rng.gen_range(-r..=r) as f64
}

fn int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, r: i32) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| int(rng, r))
}

fn sparse_point(rng: &mut ChaCha8Rng, n: usize, r: i32) -> Vec<f64> {
    (0..n).map(|_| if rng.gen_bool(0.5) { 0.0 } else { int(rng, r) }).collect()
}

fn random_objective(rng: &mut ChaCha8Rng, spec: &GenSpec, n: usize) -> Result<PaFunction> {
    let kind = match spec.objective {
        ObjectiveKind::Mixed => [ObjectiveKind::L1, ObjectiveKind::Composite, ObjectiveKind::Explicit][rng.gen_range(0..3)],
        k => k,
    };
    match kind {
        ObjectiveKind::L1 | ObjectiveKind::Mixed => Ok(PaFunction::l1(n)),
        ObjectiveKind::Composite => PaFunction::composite_l1(int_matrix(rng, spec.k.max(1), n, spec.range)),
        ObjectiveKind::Explicit => {
            let pieces = rng.gen_range(2..=4);
            let p = int_matrix(rng, pieces, n, spec.range);
            let g = (0..pieces).map(|_| int(rng, spec.range)).collect();
            PaFunction::explicit(p, g)
        }
    }
}

/// Polyhedron through `x`: random rows, a random subset of them tight.
fn polyhedron_through(rng: &mut ChaCha8Rng, p: usize, x: &[f64], r: i32) -> Result<Polyhedron> {
    let c = int_matrix(rng, p, x.len(), r);
    let cx = c.mul_vec(x)?;
    let d = cx.iter().map(|v| v - [0.0, 0.0, 1.0, 2.0][rng.gen_range(0..4)]).collect();
    Polyhedron::new(c, d)
}

fn clean(x: Vec<f64>) -> Vec<f64> {
    x.into_iter().map(|v| if v.abs() < 1e-12 { 0.0 } else { v }).collect()
}

fn gen_bp(rng: &mut ChaCha8Rng, spec: &GenSpec) -> Result<Option<(ProblemInstance, Vec<f64>)>> {
    let n = spec.n;
    let a = int_matrix(rng, spec.m, n, spec.range);
    let x0 = sparse_point(rng, n, spec.range);
    let y = if spec.m == 0 { vec![] } else { a.mul_vec(&x0)? };
    let polyhedron = polyhedron_through(rng, spec.p, &x0, spec.range)?;
    let objective = random_objective(rng, spec, n)?;
    let inst = ProblemInstance::BpLike { objective, a, y, polyhedron };
    Ok(match bp_solve(&inst)? {
        BpSolution::Optimal { x, .. } => Some((inst, clean(x))),
        _ => None,
    })
}

/// How a subgradient term enters the gradient-finding program.
#[derive(Clone, Copy)]
enum Weighting {
    /// An element of the subdifferential.
    Hull,
    /// A nonnegative multiple of one.
    Cone,
}

/// Finds `q` with `Aᵀq - C_αᵀu + Σ terms = 0`, `u ≥ 0`, averaging a few vertex
/// solutions with random objectives.
fn stationary_gradient(
    rng: &mut ChaCha8Rng,
    a: &Matrix,
    c_alpha: &Matrix,
    terms: &[(LocalModel, Weighting)],
) -> Result<Option<Vec<f64>>> {
    let n = a.ncols();
    let m = a.nrows();
    let mut lp = LpBuilder::new();
    let q = lp.vars(m, -GRADIENT_BOX, GRADIENT_BOX);
    let u = lp.vars(c_alpha.nrows(), 0.0, f64::INFINITY);
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut rhs = vec![0.0; n];
    for (k, row) in rows.iter_mut().enumerate() {
        for j in 0..m {
            row.push((q + j, a[(j, k)]));
        }
        for r in 0..c_alpha.nrows() {
            row.push((u + r, -c_alpha[(r, k)]));
        }
    }
    for (model, weighting) in terms {
        match (model, weighting) {
            (LocalModel::Pieces(w), wt) => {
                let lam = lp.vars(w.nrows(), 0.0, f64::INFINITY);
                for (k, row) in rows.iter_mut().enumerate() {
                    for i in 0..w.nrows() {
                        row.push((lam + i, w[(i, k)]));
                    }
                }
                if let Weighting::Hull = wt {
                    lp.row((0..w.nrows()).map(|i| (lam + i, 1.0)).collect(), Cmp::Eq, 1.0);
                }
            }
            (LocalModel::L1(act), Weighting::Hull) => {
                let coef = lp.vars(act.off_rows.nrows(), -1.0, 1.0);
                for (k, row) in rows.iter_mut().enumerate() {
                    rhs[k] -= act.subgradient_base[k];
                    for i in 0..act.off_rows.nrows() {
                        row.push((coef + i, act.off_rows[(i, k)]));
                    }
                }
            }
            (LocalModel::L1(act), Weighting::Cone) => {
                let mu = lp.var(0.0, f64::INFINITY);
                let coef = lp.vars(act.off_rows.nrows(), f64::NEG_INFINITY, f64::INFINITY);
                for (k, row) in rows.iter_mut().enumerate() {
                    row.push((mu, act.subgradient_base[k]));
                    for i in 0..act.off_rows.nrows() {
                        row.push((coef + i, act.off_rows[(i, k)]));
                    }
                }
                for i in 0..act.off_rows.nrows() {
                    lp.row(vec![(coef + i, 1.0), (mu, -1.0)], Cmp::Le, 0.0);
                    lp.row(vec![(coef + i, 1.0), (mu, 1.0)], Cmp::Ge, 0.0);
                }
            }
        }
    }
    for (row, b) in rows.into_iter().zip(rhs) {
        lp.row(row.into_iter().filter(|e| e.1 != 0.0).collect(), Cmp::Eq, b);
    }
    let mut sum = vec![0.0; m];
    const DRAWS: usize = 3;
    for _ in 0..DRAWS {
        lp.clear_objective();
        for j in 0..m {
            lp.set_objective(q + j, rng.gen_range(-1.0..1.0));
        }
        match lp.solve(Sense::Maximize)? {
            LpOutcome::Optimal { x, .. } => {
                for j in 0..m {
                    sum[j] += x[q + j] / DRAWS as f64;
                }
            }
            _ => return Ok(None),
        }
    }
    Ok(Some(sum))
}

/// Planted candidate, measurement matrix and polyhedron shared by the smooth families.
fn planted(rng: &mut ChaCha8Rng, spec: &GenSpec) -> Result<(Vec<f64>, Matrix, Polyhedron, Matrix)> {
    let n = spec.n;
    let x = sparse_point(rng, n, spec.range);
    let a = int_matrix(rng, spec.m.max(1), n, spec.range);
    let poly = polyhedron_through(rng, spec.p, &x, spec.range)?;
    let (_, c_alpha) = poly.active_rows(&x, DEFAULT_TOL_ACTIVE)?;
    Ok((x, a, poly, c_alpha))
}

fn measurements_for(a: &Matrix, x: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    Ok(a.mul_vec(x)?.iter().zip(q).map(|(ax, qi)| ax - qi / 2.0).collect())
}

fn gen_lasso(rng: &mut ChaCha8Rng, spec: &GenSpec) -> Result<Option<(ProblemInstance, Vec<f64>)>> {
    let (x, a, polyhedron, c_alpha) = planted(rng, spec)?;
    let objective = random_objective(rng, spec, spec.n)?;
    let model = objective.local(&x, DEFAULT_TOL_ACTIVE)?;
    let Some(q) = stationary_gradient(rng, &a, &c_alpha, &[(model, Weighting::Hull)])? else {
        return Ok(None);
    };
    let y = measurements_for(&a, &x, &q)?;
    Ok(Some((ProblemInstance::LassoLike { loss: Loss::Quadratic, a, y, objective, polyhedron }, x)))
}

fn gen_bpdn1(rng: &mut ChaCha8Rng, spec: &GenSpec) -> Result<Option<(ProblemInstance, Vec<f64>)>> {
    let branch = spec.branch.unwrap_or(if rng.gen_bool(0.5) { Branch::Interior } else { Branch::Boundary });
    let planted_optimum = rng.gen_bool(0.75);
    let (mut x, a, polyhedron, c_alpha) = planted(rng, spec)?;
    let objective = random_objective(rng, spec, spec.n)?;
    let loss = Loss::Quadratic;
    match branch {
        Branch::Interior => {
            if planted_optimum {
                let local = ProblemInstance::BpLike {
                    objective: objective.clone(),
                    a: Matrix::zeros(0, spec.n),
                    y: vec![],
                    polyhedron: polyhedron.clone(),
                };
                match bp_solve(&local)? {
                    BpSolution::Optimal { x: opt, .. } => x = clean(opt),
                    _ => return Ok(None),
                }
            }
            let y: Vec<f64> = (0..a.nrows()).map(|_| int(rng, spec.range)).collect();
            let r: Vec<f64> = a.mul_vec(&x)?.iter().zip(&y).map(|(p, q)| p - q).collect();
            let radius = loss.value(&r)? + 1.0;
            Ok(Some((ProblemInstance::Bpdn1 { objective, loss, a, y, radius, polyhedron }, x)))
        }
        Branch::Boundary => {
            let q = if planted_optimum {
                let model = objective.local(&x, DEFAULT_TOL_ACTIVE)?;
                match stationary_gradient(rng, &a, &c_alpha, &[(model, Weighting::Hull)])? {
                    Some(q) => q,
                    None => return Ok(None),
                }
            } else {
                (0..a.nrows()).map(|_| int(rng, spec.range)).collect()
            };
            if q.iter().all(|v| v.abs() < 1e-6) {
                return Ok(None);
            }
            let y = measurements_for(&a, &x, &q)?;
            let r: Vec<f64> = a.mul_vec(&x)?.iter().zip(&y).map(|(p, q)| p - q).collect();
            let radius = loss.value(&r)?;
            Ok(Some((ProblemInstance::Bpdn1 { objective, loss, a, y, radius, polyhedron }, x)))
        }
    }
}

fn gen_bpdn2(rng: &mut ChaCha8Rng, spec: &GenSpec) -> Result<Option<(ProblemInstance, Vec<f64>)>> {
    let (x, a, polyhedron, c_alpha) = planted(rng, spec)?;
    let count = spec.constraints.max(1);
    let mut constraints = Vec::with_capacity(count);
    let mut terms = Vec::new();
    for _ in 0..count {
        let g = random_objective(rng, spec, spec.n)?;
        let gx = g.eval(&x)?;
        let tight = rng.gen_bool(0.75);
        if tight {
            terms.push((g.local(&x, DEFAULT_TOL_ACTIVE)?, Weighting::Cone));
        }
        constraints.push(PaConstraint { g, bound: if tight { gx } else { gx + 1.0 } });
    }
    let Some(q) = stationary_gradient(rng, &a, &c_alpha, &terms)? else {
        return Ok(None);
    };
    let y = measurements_for(&a, &x, &q)?;
    Ok(Some((ProblemInstance::Bpdn2 { loss: Loss::Quadratic, a, y, constraints, polyhedron }, x)))
}

/// Random nondecreasing vector with plateaus and a run of zeros.
pub fn monotone_candidate(rng: &mut impl Rng, n: usize, range: i32) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-range..=range) as f64).collect();
    x.sort_by(f64::total_cmp);
    x
}
