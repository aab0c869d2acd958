//! Problem families, tolerances and candidate feasibility.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dense::{dot, norm_inf, IndexSet, Matrix, DEFAULT_TOL_RANK};
use crate::error::{dim_err, Error, Result};
use crate::pa::{PaFunction, DEFAULT_TOL_ACTIVE};
use crate::simplex::DEFAULT_TOL_STRICT;

/// Numerical tolerances shared by the certifier and the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Active pieces and active polyhedron rows.
    pub tol_active: f64,
    /// Relative singular-value threshold for rank decisions.
    pub tol_rank: f64,
    /// Smallest accepted margin of a strictly positive block.
    pub tol_strict: f64,
    /// Feasibility slack for equalities and inequalities.
    pub tol_eq: f64,
    /// Oracle threshold on solution-set extent.
    pub tol_face: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_active: DEFAULT_TOL_ACTIVE,
            tol_rank: DEFAULT_TOL_RANK,
            tol_strict: DEFAULT_TOL_STRICT,
            tol_eq: 1e-8,
            tol_face: 1e-7,
        }
    }
}

/// `{x : Cx ≥ d}`. Zero rows means all of `Rⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyhedron {
    pub lhs: Matrix,
    pub rhs: Vec<f64>,
}

impl Polyhedron {
    pub fn new(lhs: Matrix, rhs: Vec<f64>) -> Result<Self> {
        if lhs.nrows() != rhs.len() {
            return dim_err(format!("polyhedron has {} rows but {} right-hand sides", lhs.nrows(), rhs.len()));
        }
        Ok(Polyhedron { lhs, rhs })
    }

    pub fn whole_space(n: usize) -> Self {
        Polyhedron { lhs: Matrix::zeros(0, n), rhs: vec![] }
    }

    pub fn nrows(&self) -> usize {
        self.rhs.len()
    }

    pub fn dim(&self) -> usize {
        self.lhs.ncols()
    }

    /// `Cx - d`.
    pub fn slack(&self, x: &[f64]) -> Result<Vec<f64>> {
        let cx = self.lhs.mul_vec(x)?;
        Ok(cx.iter().zip(&self.rhs).map(|(a, b)| a - b).collect())
    }

    /// Rows with `|(Cx - d)ᵢ| ≤ tol`.
    pub fn active_constraints(&self, x: &[f64], tol: f64) -> Result<IndexSet> {
        Ok(self.slack(x)?.iter().enumerate().filter(|(_, s)| s.abs() <= tol).map(|(i, _)| i).collect())
    }

    /// Rows of `C` at the active set.
    pub fn active_rows(&self, x: &[f64], tol: f64) -> Result<(IndexSet, Matrix)> {
        let alpha = self.active_constraints(x, tol)?;
        let rows = self.lhs.select_rows(&alpha)?;
        Ok((alpha, rows))
    }

    /// Appends rows.
    pub fn with_rows(&self, lhs: &Matrix, rhs: &[f64]) -> Result<Polyhedron> {
        let n = self.dim();
        let c = Matrix::vstack(&[&self.lhs, lhs], n)?;
        let mut d = self.rhs.clone();
        d.extend_from_slice(rhs);
        Polyhedron::new(c, d)
    }
}

type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type VectorFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A user-supplied differentiable strictly convex loss.
#[derive(Clone)]
pub struct SmoothLoss {
    pub name: String,
    pub value: ScalarFn,
    pub gradient: VectorFn,
}

impl fmt::Debug for SmoothLoss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmoothLoss({})", self.name)
    }
}

/// Loss applied to the residual `Ax - y`.
#[derive(Clone, Debug)]
pub enum Loss {
    /// `‖z‖²`
    Quadratic,
    Smooth(SmoothLoss),
    /// A piecewise-affine loss; handled by reduction to a problem without a loss.
    Pa(PaFunction),
}

impl Loss {
    pub fn value(&self, z: &[f64]) -> Result<f64> {
        match self {
            Loss::Quadratic => Ok(dot(z, z)),
            Loss::Smooth(s) => Ok((s.value)(z)),
            Loss::Pa(p) => p.eval(z),
        }
    }

    pub fn gradient(&self, z: &[f64]) -> Result<Vec<f64>> {
        match self {
            Loss::Quadratic => Ok(z.iter().map(|v| 2.0 * v).collect()),
            Loss::Smooth(s) => {
                let g = (s.gradient)(z);
                if g.len() != z.len() {
                    return dim_err(format!("loss gradient has length {}, expected {}", g.len(), z.len()));
                }
                Ok(g)
            }
            Loss::Pa(_) => Err(Error::Unsupported("piecewise-affine losses have no gradient".into())),
        }
    }

    pub fn is_smooth(&self) -> bool {
        !matches!(self, Loss::Pa(_))
    }
}

/// `g(x) ≤ bound`.
#[derive(Clone, Debug)]
pub struct PaConstraint {
    pub g: PaFunction,
    pub bound: f64,
}

/// The four problem families.
#[derive(Clone, Debug)]
pub enum ProblemInstance {
    /// `min g(x)  s.t. Ax = y, x ∈ P`
    BpLike { objective: PaFunction, a: Matrix, y: Vec<f64>, polyhedron: Polyhedron },
    /// `min f(Ax - y) + g(x)  s.t. x ∈ P`
    LassoLike { loss: Loss, a: Matrix, y: Vec<f64>, objective: PaFunction, polyhedron: Polyhedron },
    /// `min g(x)  s.t. f(Ax - y) ≤ radius, x ∈ P`
    Bpdn1 { objective: PaFunction, loss: Loss, a: Matrix, y: Vec<f64>, radius: f64, polyhedron: Polyhedron },
    /// `min f(Ax - y)  s.t. gᵢ(x) ≤ ηᵢ, x ∈ P`
    Bpdn2 { loss: Loss, a: Matrix, y: Vec<f64>, constraints: Vec<PaConstraint>, polyhedron: Polyhedron },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Bp,
    Lasso,
    Bpdn1,
    Bpdn2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Bp => "bp",
            Family::Lasso => "lasso",
            Family::Bpdn1 => "bpdn1",
            Family::Bpdn2 => "bpdn2",
        })
    }
}

impl ProblemInstance {
    pub fn family(&self) -> Family {
        match self {
            ProblemInstance::BpLike { .. } => Family::Bp,
            ProblemInstance::LassoLike { .. } => Family::Lasso,
            ProblemInstance::Bpdn1 { .. } => Family::Bpdn1,
            ProblemInstance::Bpdn2 { .. } => Family::Bpdn2,
        }
    }

    pub fn a(&self) -> &Matrix {
        match self {
            ProblemInstance::BpLike { a, .. }
            | ProblemInstance::LassoLike { a, .. }
            | ProblemInstance::Bpdn1 { a, .. }
            | ProblemInstance::Bpdn2 { a, .. } => a,
        }
    }

    pub fn y(&self) -> &[f64] {
        match self {
            ProblemInstance::BpLike { y, .. }
            | ProblemInstance::LassoLike { y, .. }
            | ProblemInstance::Bpdn1 { y, .. }
            | ProblemInstance::Bpdn2 { y, .. } => y,
        }
    }

    pub fn polyhedron(&self) -> &Polyhedron {
        match self {
            ProblemInstance::BpLike { polyhedron, .. }
            | ProblemInstance::LassoLike { polyhedron, .. }
            | ProblemInstance::Bpdn1 { polyhedron, .. }
            | ProblemInstance::Bpdn2 { polyhedron, .. } => polyhedron,
        }
    }

    pub fn loss(&self) -> Option<&Loss> {
        match self {
            ProblemInstance::BpLike { .. } => None,
            ProblemInstance::LassoLike { loss, .. } | ProblemInstance::Bpdn1 { loss, .. } | ProblemInstance::Bpdn2 { loss, .. } => {
                Some(loss)
            }
        }
    }

    /// Number of unknowns.
    pub fn dim(&self) -> usize {
        self.polyhedron().dim()
    }

    /// Checks that all dimensions agree and data are finite.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let a = self.a();
        if a.nrows() > 0 && a.ncols() != n {
            return dim_err(format!("measurement matrix has {} columns, polyhedron has {n}", a.ncols()));
        }
        if a.nrows() != self.y().len() {
            return dim_err(format!("measurement matrix has {} rows but y has {} entries", a.nrows(), self.y().len()));
        }
        let finite = a.is_finite()
            && self.y().iter().all(|v| v.is_finite())
            && self.polyhedron().lhs.is_finite()
            && self.polyhedron().rhs.iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::Input("instance data must be finite".into()));
        }
        let check_g = |g: &PaFunction, what: &str| {
            if g.dim() != n {
                return dim_err(format!("{what} acts on R^{}, expected R^{n}", g.dim()));
            }
            Ok(())
        };
        let check_loss = |l: &Loss| match l {
            Loss::Pa(p) if p.dim() != a.nrows() => dim_err(format!("loss acts on R^{}, expected R^{}", p.dim(), a.nrows())),
            _ => Ok(()),
        };
        match self {
            ProblemInstance::BpLike { objective, .. } => check_g(objective, "objective"),
            ProblemInstance::LassoLike { loss, objective, .. } => {
                check_loss(loss)?;
                check_g(objective, "objective")
            }
            ProblemInstance::Bpdn1 { objective, loss, radius, .. } => {
                check_loss(loss)?;
                if !radius.is_finite() {
                    return Err(Error::Input("constraint radius must be finite".into()));
                }
                check_g(objective, "objective")
            }
            ProblemInstance::Bpdn2 { loss, constraints, .. } => {
                check_loss(loss)?;
                if constraints.is_empty() {
                    return Err(Error::Input("at least one piecewise-affine constraint is required".into()));
                }
                for (i, c) in constraints.iter().enumerate() {
                    check_g(&c.g, &format!("constraint {i}"))?;
                    if !c.bound.is_finite() {
                        return Err(Error::Input(format!("constraint {i} has a non-finite bound")));
                    }
                }
                Ok(())
            }
        }
    }

    /// `Ax - y`.
    pub fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        let a = self.a();
        if a.nrows() == 0 {
            return Ok(vec![]);
        }
        let ax = a.mul_vec(x)?;
        Ok(ax.iter().zip(self.y()).map(|(p, q)| p - q).collect())
    }

    /// Objective value at `x` (feasibility is not checked).
    pub fn objective_value(&self, x: &[f64]) -> Result<f64> {
        match self {
            ProblemInstance::BpLike { objective, .. } | ProblemInstance::Bpdn1 { objective, .. } => objective.eval(x),
            ProblemInstance::LassoLike { loss, objective, .. } => Ok(loss.value(&self.residual(x)?)? + objective.eval(x)?),
            ProblemInstance::Bpdn2 { loss, .. } => loss.value(&self.residual(x)?),
        }
    }

    /// `Aᵀ ∇f(Ax - y)` for the smooth families.
    pub fn smooth_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let loss = self.loss().ok_or_else(|| Error::Unsupported("family has no loss".into()))?;
        let grad = loss.gradient(&self.residual(x)?)?;
        if self.a().nrows() == 0 {
            return Ok(vec![0.0; self.dim()]);
        }
        self.a().tr_mul_vec(&grad)
    }
}

/// Which kind of optimality structure applies at the candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// No loss or norm constraint is tight.
    Interior,
    /// The loss constraint (or some piecewise-affine constraint) is tight.
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: String,
    pub amount: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
    pub branch: Option<Branch>,
    /// Tight piecewise-affine constraints (0-based).
    pub tight_constraints: IndexSet,
}

impl FeasibilityReport {
    pub fn summary(&self) -> String {
        if self.feasible {
            return "feasible".into();
        }
        self.violations.iter().map(|v| format!("{} violated by {:.3e}", v.constraint, v.amount)).collect::<Vec<_>>().join("; ")
    }
}

/// Checks `x` against every constraint of the instance and classifies the branch.
///
/// A loss constraint within `tol_active` of its radius counts as tight.
pub fn check_feasibility(inst: &ProblemInstance, x: &[f64], tols: &Tolerances) -> Result<FeasibilityReport> {
    inst.validate()?;
    if x.len() != inst.dim() {
        return dim_err(format!("candidate has length {}, expected {}", x.len(), inst.dim()));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("candidate has non-finite entries".into()));
    }
    let mut violations = Vec::new();
    let p = inst.polyhedron();
    for (i, s) in p.slack(x)?.iter().enumerate() {
        let scale = 1.0 + p.rhs[i].abs();
        if *s < -tols.tol_eq * scale {
            violations.push(Violation { constraint: format!("polyhedron row {}", i + 1), amount: -s });
        }
    }
    let mut branch = None;
    let mut tight = IndexSet::empty();
    match inst {
        ProblemInstance::BpLike { y, .. } => {
            let r = inst.residual(x)?;
            let err = norm_inf(&r);
            if err > tols.tol_eq * (1.0 + norm_inf(y)) {
                violations.push(Violation { constraint: "equality Ax = y".into(), amount: err });
            }
        }
        ProblemInstance::LassoLike { .. } => {}
        ProblemInstance::Bpdn1 { loss, radius, .. } => {
            let v = loss.value(&inst.residual(x)?)?;
            let scale = 1.0 + radius.abs();
            if v > radius + tols.tol_eq * scale {
                violations.push(Violation { constraint: "loss radius".into(), amount: v - radius });
            }
            branch = Some(if v >= radius - tols.tol_active * scale { Branch::Boundary } else { Branch::Interior });
        }
        ProblemInstance::Bpdn2 { constraints, .. } => {
            let mut t = Vec::new();
            for (i, c) in constraints.iter().enumerate() {
                let v = c.g.eval(x)?;
                let scale = 1.0 + c.bound.abs();
                if v > c.bound + tols.tol_eq * scale {
                    violations.push(Violation { constraint: format!("constraint {}", i + 1), amount: v - c.bound });
                }
                if v >= c.bound - tols.tol_active * scale {
                    t.push(i);
                }
            }
            tight = IndexSet::new(t);
            branch = Some(if tight.is_empty() { Branch::Interior } else { Branch::Boundary });
        }
    }
    Ok(FeasibilityReport { feasible: violations.is_empty(), violations, branch, tight_constraints: tight })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipse_candidate_is_interior() {
        let inst = ProblemInstance::Bpdn1 {
            objective: PaFunction::l1(2),
            loss: Loss::Quadratic,
            a: Matrix::diag(&[1.0 / 3.0, 0.25]),
            y: vec![0.0, 0.0],
            radius: 1.0,
            polyhedron: Polyhedron::new(Matrix::from_nested(&[vec![1.0, 1.0]]).unwrap(), vec![2.0]).unwrap(),
        };
        let rep = check_feasibility(&inst, &[1.0, 1.0], &Tolerances::default()).unwrap();
        assert!(rep.feasible);
        assert_eq!(rep.branch, Some(Branch::Interior));
        assert_eq!(inst.polyhedron().active_constraints(&[1.0, 1.0], 1e-8).unwrap().as_slice(), &[0]);
        let rep = check_feasibility(&inst, &[0.0, 0.0], &Tolerances::default()).unwrap();
        assert!(!rep.feasible);
    }

    #[test]
    fn pa_loss_has_no_gradient() {
        let loss = Loss::Pa(PaFunction::l1(1));
        assert!(matches!(loss.gradient(&[1.0]), Err(Error::Unsupported(_))));
        assert_eq!(Loss::Quadratic.gradient(&[1.5, -1.0]).unwrap(), vec![3.0, -2.0]);
    }

    #[test]
    fn tight_constraints() {
        let inst = ProblemInstance::Bpdn2 {
            loss: Loss::Quadratic,
            a: Matrix::from_nested(&[vec![1.0, 1.0]]).unwrap(),
            y: vec![2.0],
            constraints: vec![PaConstraint { g: PaFunction::l1(2), bound: 1.0 }],
            polyhedron: Polyhedron::new(Matrix::from_nested(&[vec![-1.0, -1.0]]).unwrap(), vec![0.0]).unwrap(),
        };
        let rep = check_feasibility(&inst, &[0.5, -0.5], &Tolerances::default()).unwrap();
        assert_eq!(rep.tight_constraints.as_slice(), &[0]);
        let rep = check_feasibility(&inst, &[0.0, 0.0], &Tolerances::default()).unwrap();
        assert!(rep.tight_constraints.is_empty());
        assert_eq!(rep.branch, Some(Branch::Interior));
    }
}
