//! Brute-force uniqueness checks that do not use the certifier's dual conditions.
//!
//! The oracle works on the primal side only. It computes the optimal value with an
//! epigraph linear program, then maximizes and minimizes every coordinate over the
//! near-optimal face intersected with a box around the candidate. The solution set is
//! convex, so it is a single point exactly when every coordinate span vanishes inside
//! that box.

pub mod generate;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certify::Verdict;
use crate::dense::{dot, norm_inf, Matrix};
use crate::error::{Error, Result};
use crate::model::{check_feasibility, Branch, Loss, Polyhedron, ProblemInstance, Tolerances};
use crate::pa::{LocalModel, PaFunction};
use crate::reductions::{pin_measurements, reduce_pa_loss};
use crate::simplex::{Cmp, LpBuilder, LpOutcome, Sense};

/// Half-width of the box around the candidate in which the solution set is probed.
pub const PROBE_RADIUS: f64 = 1.0;
/// Relative slack added to optimal levels so the face is not numerically empty.
const LEVEL_SLACK: f64 = 1e-11;
/// Number of sampled feasible directions in the first-order screen.
pub const SCREEN_DIRECTIONS: usize = 200;
const SCREEN_SEED: u64 = 0x5eed_0c1e;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub verdict: Verdict,
    /// Optimal value, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opt_value: Option<f64>,
    /// A different optimal point (for `NotUnique`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_point: Option<Vec<f64>>,
    /// A feasible point with a strictly smaller objective (for `NotOptimal`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub better_point: Option<Vec<f64>>,
    /// Largest coordinate span found while probing.
    pub max_span: f64,
    /// Coordinate spans of the probed set.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spans: Vec<f64>,
    /// Set when the decision sits within an order of magnitude of its threshold.
    pub borderline: bool,
    pub detail: String,
}

impl OracleResult {
    fn new(verdict: Verdict, detail: impl Into<String>) -> Self {
        OracleResult {
            verdict,
            opt_value: None,
            second_point: None,
            better_point: None,
            max_span: 0.0,
            spans: vec![],
            borderline: false,
            detail: detail.into(),
        }
    }
}

/// A polyhedral region in `x`, possibly lifted by auxiliary variables.
struct Region {
    lp: LpBuilder,
    n: usize,
}

impl Region {
    fn new(n: usize) -> Self {
        let mut lp = LpBuilder::new();
        lp.vars(n, f64::NEG_INFINITY, f64::INFINITY);
        Region { lp, n }
    }

    fn boxed(n: usize, center: &[f64], radius: f64) -> Self {
        let mut lp = LpBuilder::new();
        for c in center.iter().take(n) {
            lp.var(c - radius, c + radius);
        }
        Region { lp, n }
    }

    fn rows(&mut self, m: &Matrix, cmp: Cmp, rhs: &[f64]) {
        for (r, b) in m.rows_iter().zip(rhs) {
            let coeffs = r.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, v)| (j, *v)).collect();
            self.lp.row(coeffs, cmp, *b);
        }
    }

    fn polyhedron(&mut self, p: &Polyhedron) {
        self.rows(&p.lhs, Cmp::Ge, &p.rhs);
    }

    fn equalities(&mut self, a: &Matrix, y: &[f64]) {
        self.rows(a, Cmp::Eq, y);
    }

    /// `Σ sₖ` with `sₖ ≥ |(Ex)ₖ|`; returns the coefficients of the sum.
    fn lift_abs(&mut self, e: &Matrix) -> Vec<(usize, f64)> {
        let first = self.lp.vars(e.nrows(), 0.0, f64::INFINITY);
        for (k, r) in e.rows_iter().enumerate() {
            for sign in [1.0, -1.0] {
                let mut coeffs: Vec<(usize, f64)> = r.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, v)| (j, sign * v)).collect();
                coeffs.push((first + k, 1.0));
                self.lp.row(coeffs, Cmp::Ge, 0.0);
            }
        }
        (first..first + e.nrows()).map(|j| (j, 1.0)).collect()
    }

    /// `g(x) ≤ level`.
    fn level(&mut self, g: &PaFunction, level: f64) {
        match g {
            PaFunction::Explicit { generators, offsets } => {
                let rhs: Vec<f64> = offsets.iter().map(|o| level - o).collect();
                self.rows(generators, Cmp::Le, &rhs);
            }
            PaFunction::CompositeL1 { map } => {
                let sum = self.lift_abs(map);
                self.lp.row(sum, Cmp::Le, level);
            }
        }
    }

    /// Adds `t ≥ g(x)` and returns `t`.
    fn epigraph(&mut self, g: &PaFunction) -> usize {
        let t = self.lp.var(f64::NEG_INFINITY, f64::INFINITY);
        match g {
            PaFunction::Explicit { generators, offsets } => {
                for (r, o) in generators.rows_iter().zip(offsets) {
                    let mut coeffs: Vec<(usize, f64)> = r.iter().enumerate().map(|(j, v)| (j, -v)).collect();
                    coeffs.push((t, 1.0));
                    self.lp.row(coeffs, Cmp::Ge, *o);
                }
            }
            PaFunction::CompositeL1 { map } => {
                let mut sum = self.lift_abs(map);
                sum.push((t, -1.0));
                self.lp.row(sum, Cmp::Le, 0.0);
            }
        }
        t
    }

    /// `model(x) ≤ rhs` for a local model of a piecewise-affine function.
    fn local_model(&mut self, model: &LocalModel, rhs: f64) {
        match model {
            LocalModel::Pieces(w) => self.rows(w, Cmp::Le, &vec![rhs; w.nrows()]),
            LocalModel::L1(act) => {
                let mut coeffs = self.lift_abs(&act.off_rows);
                coeffs.extend(act.subgradient_base.iter().copied().enumerate());
                self.lp.row(coeffs, Cmp::Le, rhs);
            }
        }
    }

    fn optimize(&mut self, objective: &[(usize, f64)], sense: Sense) -> Result<LpOutcome> {
        self.lp.clear_objective();
        for &(j, c) in objective {
            self.lp.set_objective(j, c);
        }
        self.lp.solve(sense)
    }

    /// Minimizes and maximizes each coordinate. Returns per-coordinate spans and the
    /// extreme points found.
    fn probe(&mut self) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let mut spans = Vec::with_capacity(self.n);
        let mut points = Vec::with_capacity(2 * self.n);
        for i in 0..self.n {
            let mut ends = [0.0; 2];
            for (k, sense) in [Sense::Minimize, Sense::Maximize].into_iter().enumerate() {
                match self.optimize(&[(i, 1.0)], sense)? {
                    LpOutcome::Optimal { x, .. } => {
                        ends[k] = x[i];
                        points.push(x[..self.n].to_vec());
                    }
                    LpOutcome::Infeasible => return Err(Error::Solver("probe region is empty".into())),
                    LpOutcome::Unbounded => return Err(Error::Solver("probe region is unbounded".into())),
                }
            }
            spans.push(ends[1] - ends[0]);
        }
        Ok((spans, points))
    }
}

/// Optimal point and value of a basis-pursuit-type instance.
#[derive(Clone, Debug, PartialEq)]
pub enum BpSolution {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

/// Solves `min g(x) s.t. Ax = y, x ∈ P` through its epigraph.
pub fn bp_solve(inst: &ProblemInstance) -> Result<BpSolution> {
    bp_solve_in(inst, None)
}

fn bp_solve_in(inst: &ProblemInstance, bounds: Option<(&[f64], f64)>) -> Result<BpSolution> {
    let ProblemInstance::BpLike { objective, a, y, polyhedron } = inst else {
        return Err(Error::Unsupported("bp_solve needs a basis-pursuit instance".into()));
    };
    inst.validate()?;
    let n = inst.dim();
    let mut r = match bounds {
        Some((c, rad)) => Region::boxed(n, c, rad),
        None => Region::new(n),
    };
    r.equalities(a, y);
    r.polyhedron(polyhedron);
    let t = r.epigraph(objective);
    Ok(match r.optimize(&[(t, 1.0)], Sense::Minimize)? {
        LpOutcome::Optimal { x, .. } => {
            let x = x[..n].to_vec();
            let value = objective.eval(&x)?;
            BpSolution::Optimal { x, value }
        }
        LpOutcome::Infeasible => BpSolution::Infeasible,
        LpOutcome::Unbounded => BpSolution::Unbounded,
    })
}

fn spans_verdict(
    mut res: OracleResult,
    spans: Vec<f64>,
    points: Vec<Vec<f64>>,
    x: &[f64],
    tols: &Tolerances,
) -> (OracleResult, Option<Vec<f64>>) {
    let max_span = spans.iter().copied().fold(0.0, f64::max);
    res.max_span = max_span;
    res.spans = spans;
    if max_span <= tols.tol_face {
        res.verdict = Verdict::Unique;
        res.detail = format!("solution set spans at most {max_span:.3e} in every coordinate");
        return (res, None);
    }
    let far = points
        .into_iter()
        .max_by(|p, q| dist_inf(p, x).total_cmp(&dist_inf(q, x)))
        .expect("probe returns points when spans are positive");
    res.verdict = Verdict::NotUnique;
    res.detail = format!("solution set spans {max_span:.3e} in some coordinate");
    (res, Some(far))
}

fn dist_inf(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

/// Decides uniqueness of `x` for a basis-pursuit-type instance by probing its optimal face.
pub fn bp_unique(inst: &ProblemInstance, x: &[f64], tols: &Tolerances) -> Result<OracleResult> {
    let ProblemInstance::BpLike { objective, a, y, polyhedron } = inst else {
        return Err(Error::Unsupported("bp_unique needs a basis-pursuit instance".into()));
    };
    let report = check_feasibility(inst, x, tols)?;
    if !report.feasible {
        return Err(Error::Infeasible(Box::new(report)));
    }
    let gx = objective.eval(x)?;
    let (xopt, value) = match bp_solve(inst)? {
        BpSolution::Optimal { x, value } => (x, value),
        BpSolution::Infeasible => return Err(Error::Solver("feasible candidate but infeasible program".into())),
        BpSolution::Unbounded => match bp_solve_in(inst, Some((x, PROBE_RADIUS)))? {
            BpSolution::Optimal { x: better, value } if value < gx => {
                let mut res = OracleResult::new(Verdict::NotOptimal, "objective is unbounded below");
                res.better_point = Some(better);
                return Ok(res);
            }
            _ => return Err(Error::Solver("unbounded program without a better nearby point".into())),
        },
    };
    let scale = value.abs().max(1.0);
    let gap = gx - value;
    let mut res = OracleResult::new(Verdict::Unique, "");
    res.opt_value = Some(value);
    if gap > tols.tol_face * scale {
        res.verdict = Verdict::NotOptimal;
        res.detail = format!("candidate value exceeds the optimum by {gap:.3e}");
        res.better_point = Some(xopt);
        return Ok(res);
    }
    res.borderline = gap > 1e-9 * scale;
    let level = gx.max(value) + LEVEL_SLACK * scale;
    let mut r = Region::boxed(inst.dim(), x, PROBE_RADIUS);
    r.equalities(a, y);
    r.polyhedron(polyhedron);
    r.level(objective, level);
    let (spans, points) = r.probe()?;
    let (mut res, far) = spans_verdict(res, spans, points, x, tols);
    if let Some(p) = far {
        let ok = check_feasibility(inst, &p, tols)?.feasible && objective.eval(&p)? <= value + tols.tol_face * scale;
        res.borderline |= !ok || dist_inf(&p, x) <= 10.0 * tols.tol_face;
        res.second_point = Some(p);
    }
    Ok(res)
}

/// Feasible directions at `x`: polyhedron rows that are active, plus optional
/// `model(v) ≤ 0` constraints. The region is the unit box in `v`.
fn direction_region(n: usize, c_alpha: &Matrix, models: &[LocalModel], a_kernel: Option<&Matrix>) -> Region {
    let mut r = Region::boxed(n, &vec![0.0; n], 1.0);
    r.rows(c_alpha, Cmp::Ge, &vec![0.0; c_alpha.nrows()]);
    for m in models {
        r.local_model(m, 0.0);
    }
    if let Some(a) = a_kernel {
        r.equalities(a, &vec![0.0; a.nrows()]);
    }
    r
}

/// Walks along `v` until a feasible point with a smaller objective appears.
fn improve_along(inst: &ProblemInstance, x: &[f64], v: &[f64], tols: &Tolerances) -> Result<Option<Vec<f64>>> {
    let fx = inst.objective_value(x)?;
    let strict = Tolerances { tol_eq: 0.0, ..*tols };
    let mut tau = 1.0;
    for _ in 0..60 {
        let p: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + tau * b).collect();
        if check_feasibility(inst, &p, &strict)?.feasible && inst.objective_value(&p)? < fx - 1e-12 * fx.abs().max(1.0) {
            return Ok(Some(p));
        }
        tau *= 0.5;
    }
    Ok(None)
}

/// First-order screen: samples feasible directions and reports one along which the
/// objective's directional derivative is negative.
fn descent_screen(
    n: usize,
    derivative: &dyn Fn(&[f64]) -> Result<f64>,
    feasible: &dyn Fn(&[f64]) -> Result<bool>,
    region: &mut Region,
    steepest: &[(usize, f64)],
    gradient_scale: f64,
) -> Result<Option<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SCREEN_SEED);
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    if let LpOutcome::Optimal { x, .. } = region.optimize(steepest, Sense::Minimize)? {
        candidates.push(x[..n].to_vec());
    }
    for k in 0..SCREEN_DIRECTIONS {
        if k % 2 == 0 {
            let c: Vec<(usize, f64)> = (0..n).map(|j| (j, rng.gen_range(-1.0..1.0))).collect();
            if let LpOutcome::Optimal { x, .. } = region.optimize(&c, Sense::Minimize)? {
                candidates.push(x[..n].to_vec());
            }
        } else {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if feasible(&v)? {
                candidates.push(v);
            }
        }
    }
    for v in candidates {
        let scale = norm_inf(&v);
        if scale < 1e-9 {
            continue;
        }
        let v: Vec<f64> = v.iter().map(|e| e / scale).collect();
        if derivative(&v)? < -1e-9 * gradient_scale {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Oracle for the smooth penalized and norm-constrained families.
pub fn smooth_oracle(inst: &ProblemInstance, x: &[f64], tols: &Tolerances) -> Result<OracleResult> {
    let report = check_feasibility(inst, x, tols)?;
    if !report.feasible {
        return Err(Error::Infeasible(Box::new(report)));
    }
    let n = inst.dim();
    let (_, c_alpha) = inst.polyhedron().active_rows(x, tols.tol_active)?;
    let h = inst.smooth_gradient(x)?;
    match inst {
        ProblemInstance::LassoLike { objective, .. } => {
            let model = objective.local(x, tols.tol_active)?;
            let mut region = direction_region(n, &c_alpha, &[], None);
            let t = region.epigraph_model(&model);
            let mut steepest: Vec<(usize, f64)> = h.iter().copied().enumerate().collect();
            steepest.push((t, 1.0));
            let derivative = |v: &[f64]| Ok(dot(&h, v) + model.eval(v)?);
            let feasible = |v: &[f64]| Ok(c_alpha.mul_vec(v)?.iter().all(|s| *s >= 0.0));
            if let Some(v) = descent_screen(n, &derivative, &feasible, &mut region, &steepest, 1.0 + norm_inf(&h))? {
                return Ok(not_optimal(inst, x, &v, tols)?);
            }
            let reduced = pin_measurements(inst, x)?;
            let mut res = bp_unique(&reduced, x, tols)?;
            res.opt_value = Some(inst.objective_value(x)?);
            if res.verdict == Verdict::NotOptimal {
                res.detail = "a point with the same measurements has a smaller penalty".into();
            }
            Ok(res)
        }
        ProblemInstance::Bpdn2 { a, constraints, polyhedron, .. } => {
            let models: Vec<LocalModel> = report
                .tight_constraints
                .iter()
                .map(|i| constraints[i].g.local(x, tols.tol_active))
                .collect::<Result<_>>()?;
            let mut region = direction_region(n, &c_alpha, &models, None);
            let steepest: Vec<(usize, f64)> = h.iter().copied().enumerate().collect();
            let derivative = |v: &[f64]| Ok(dot(&h, v));
            let feasible = |v: &[f64]| {
                let mut ok = c_alpha.mul_vec(v)?.iter().all(|s| *s >= 0.0);
                for m in &models {
                    ok &= m.eval(v)? <= 0.0;
                }
                Ok(ok)
            };
            if let Some(v) = descent_screen(n, &derivative, &feasible, &mut region, &steepest, 1.0 + norm_inf(&h))? {
                return Ok(not_optimal(inst, x, &v, tols)?);
            }
            let ax = if a.nrows() == 0 { vec![] } else { a.mul_vec(x)? };
            let mut r = Region::boxed(n, x, PROBE_RADIUS);
            r.equalities(a, &ax);
            r.polyhedron(polyhedron);
            for c in constraints {
                r.level(&c.g, c.bound + LEVEL_SLACK * c.bound.abs().max(1.0));
            }
            let (spans, points) = r.probe()?;
            let mut res = OracleResult::new(Verdict::Unique, "");
            res.opt_value = Some(inst.objective_value(x)?);
            let (mut res, far) = spans_verdict(res, spans, points, x, tols);
            if let Some(p) = far {
                res.borderline |= !check_feasibility(inst, &p, tols)?.feasible || dist_inf(&p, x) <= 10.0 * tols.tol_face;
                res.second_point = Some(p);
            }
            Ok(res)
        }
        _ => Err(Error::Unsupported("smooth_oracle handles penalized and norm-constrained instances".into())),
    }
}

impl Region {
    /// Adds `t ≥ model(v)` and returns `t`.
    fn epigraph_model(&mut self, model: &LocalModel) -> usize {
        let t = self.lp.var(f64::NEG_INFINITY, f64::INFINITY);
        match model {
            LocalModel::Pieces(w) => {
                for r in w.rows_iter() {
                    let mut coeffs: Vec<(usize, f64)> = r.iter().enumerate().map(|(j, v)| (j, -v)).collect();
                    coeffs.push((t, 1.0));
                    self.lp.row(coeffs, Cmp::Ge, 0.0);
                }
            }
            LocalModel::L1(act) => {
                let mut coeffs: Vec<(usize, f64)> = self.lift_abs(&act.off_rows).into_iter().map(|(j, v)| (j, -v)).collect();
                coeffs.extend(act.subgradient_base.iter().map(|v| -v).enumerate());
                coeffs.push((t, 1.0));
                self.lp.row(coeffs, Cmp::Ge, 0.0);
            }
        }
        t
    }
}

fn not_optimal(inst: &ProblemInstance, x: &[f64], v: &[f64], tols: &Tolerances) -> Result<OracleResult> {
    let mut res = OracleResult::new(Verdict::NotOptimal, "a feasible direction decreases the objective");
    res.better_point = improve_along(inst, x, v, tols)?;
    res.borderline = res.better_point.is_none();
    Ok(res)
}

/// Oracle for the loss-constrained family.
pub fn bpdn1_oracle(inst: &ProblemInstance, x: &[f64], tols: &Tolerances) -> Result<OracleResult> {
    let ProblemInstance::Bpdn1 { objective, a, polyhedron, .. } = inst else {
        return Err(Error::Unsupported("bpdn1_oracle needs a loss-constrained instance".into()));
    };
    let report = check_feasibility(inst, x, tols)?;
    if !report.feasible {
        return Err(Error::Infeasible(Box::new(report)));
    }
    let n = inst.dim();
    let gx = objective.eval(x)?;
    let (alpha, c_alpha) = polyhedron.active_rows(x, tols.tol_active)?;
    let mut res = OracleResult::new(Verdict::Unique, "");
    res.opt_value = Some(gx);
    if report.branch == Some(Branch::Interior) {
        let slack = polyhedron.slack(x)?;
        let radius = (0..polyhedron.nrows())
            .filter(|i| !alpha.contains(*i))
            .filter_map(|i| {
                let w = norm_inf(polyhedron.lhs.row(i));
                (w > 0.0).then(|| slack[i] / (2.0 * w))
            })
            .fold(PROBE_RADIUS, f64::min);
        let mut r = Region::boxed(n, x, radius);
        r.polyhedron(polyhedron);
        r.level(objective, gx + LEVEL_SLACK * gx.abs().max(1.0));
        let (spans, points) = r.probe()?;
        let (mut res, far) = spans_verdict(res, spans, points, x, tols);
        if let Some(p) = far {
            let p = shrink_into_loss_ball(inst, x, &p, tols)?;
            match p {
                Some(p) => {
                    res.borderline |= dist_inf(&p, x) <= 10.0 * tols.tol_face;
                    res.second_point = Some(p);
                }
                None => res.borderline = true,
            }
        }
        return Ok(res);
    }
    let model = objective.local(x, tols.tol_active)?;
    let h = inst.smooth_gradient(x)?;
    let a_kernel = if a.nrows() > 0 { Some(a) } else { None };
    let mut flat = direction_region(n, &c_alpha, std::slice::from_ref(&model), a_kernel);
    let (spans, points) = flat.probe()?;
    let max_span = spans.iter().copied().fold(0.0, f64::max);
    res.max_span = max_span;
    res.spans = spans;
    let mut direction = None;
    if max_span > tols.tol_face {
        res.detail = "a direction keeps the residual and does not increase the objective".into();
        direction = points.into_iter().max_by(|p, q| norm_inf(p).total_cmp(&norm_inf(q)));
    } else {
        let mut cone = direction_region(n, &c_alpha, std::slice::from_ref(&model), None);
        let steepest: Vec<(usize, f64)> = h.iter().copied().enumerate().collect();
        if let LpOutcome::Optimal { x: v, value } = cone.optimize(&steepest, Sense::Minimize)? {
            if value < -1e-9 * norm_inf(&h).max(1.0) {
                res.detail = "a direction decreases the loss without increasing the objective".into();
                direction = Some(v[..n].to_vec());
            }
        }
    }
    let Some(v) = direction else {
        res.detail = "no alternative direction at the boundary".into();
        return Ok(res);
    };
    res.verdict = Verdict::NotUnique;
    let mut tau = 1.0;
    for _ in 0..60 {
        let p: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a + tau * b).collect();
        let ok = check_feasibility(inst, &p, &Tolerances { tol_eq: 1e-12, ..*tols })?.feasible
            && objective.eval(&p)? <= gx + 1e-12 * gx.abs().max(1.0);
        if ok {
            res.borderline = dist_inf(&p, x) <= 10.0 * tols.tol_face;
            res.second_point = Some(p);
            return Ok(res);
        }
        tau *= 0.5;
    }
    res.borderline = true;
    Ok(res)
}

/// Moves `p` toward `x` until the loss constraint holds.
fn shrink_into_loss_ball(inst: &ProblemInstance, x: &[f64], p: &[f64], tols: &Tolerances) -> Result<Option<Vec<f64>>> {
    let mut s = 1.0;
    for _ in 0..60 {
        let q: Vec<f64> = x.iter().zip(p).map(|(a, b)| a + s * (b - a)).collect();
        if check_feasibility(inst, &q, tols)?.feasible {
            return Ok(Some(q));
        }
        s *= 0.5;
    }
    Ok(None)
}

/// Routes an instance to the matching oracle.
pub fn oracle(inst: &ProblemInstance, x: &[f64], tols: &Tolerances) -> Result<OracleResult> {
    if let Some(Loss::Pa(_)) = inst.loss() {
        let report = check_feasibility(inst, x, tols)?;
        if !report.feasible {
            return Err(Error::Infeasible(Box::new(report)));
        }
        let (reduced, _) = reduce_pa_loss(inst)?;
        return bp_unique(&reduced, x, tols);
    }
    match inst {
        ProblemInstance::BpLike { .. } => bp_unique(inst, x, tols),
        ProblemInstance::LassoLike { .. } | ProblemInstance::Bpdn2 { .. } => smooth_oracle(inst, x, tols),
        ProblemInstance::Bpdn1 { .. } => bpdn1_oracle(inst, x, tols),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(a: &[Vec<f64>], y: &[f64], n: usize) -> ProblemInstance {
        ProblemInstance::BpLike {
            objective: PaFunction::l1(n),
            a: Matrix::from_rows(a, n).unwrap(),
            y: y.to_vec(),
            polyhedron: Polyhedron::whole_space(n),
        }
    }

    #[test]
    fn segment_of_minimizers() {
        let inst = bp(&[vec![1.0, 1.0]], &[1.0], 2);
        let res = bp_unique(&inst, &[1.0, 0.0], &Tolerances::default()).unwrap();
        assert_eq!(res.verdict, Verdict::NotUnique);
        let p = res.second_point.unwrap();
        assert!((p[0] + p[1] - 1.0).abs() < 1e-9 && p[0] >= -1e-9 && p[1] >= -1e-9);
    }

    #[test]
    fn unique_and_not_optimal() {
        let inst = bp(&[vec![1.0, 2.0]], &[2.0], 2);
        assert_eq!(bp_unique(&inst, &[0.0, 1.0], &Tolerances::default()).unwrap().verdict, Verdict::Unique);
        let res = bp_unique(&inst, &[2.0, 0.0], &Tolerances::default()).unwrap();
        assert_eq!(res.verdict, Verdict::NotOptimal);
        assert_eq!(res.opt_value, Some(1.0));
    }

    #[test]
    fn solve_reports_unbounded() {
        let g = PaFunction::explicit(Matrix::from_nested(&[vec![1.0, 0.0]]).unwrap(), vec![0.0]).unwrap();
        let inst = ProblemInstance::BpLike { objective: g, a: Matrix::zeros(0, 2), y: vec![], polyhedron: Polyhedron::whole_space(2) };
        assert_eq!(bp_solve(&inst).unwrap(), BpSolution::Unbounded);
        assert_eq!(bp_unique(&inst, &[0.0, 0.0], &Tolerances::default()).unwrap().verdict, Verdict::NotOptimal);
    }
}
