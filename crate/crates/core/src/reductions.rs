//! Rewritings between problem families and presets for common structured problems.
//!
//! A piecewise-affine loss can always be folded into the objective or the
//! polyhedron, giving a loss-free instance with the same solution set. Smooth losses
//! are pinned instead: every minimizer shares the value of `Ax`, so the solution set
//! is the solution set of the basis-pursuit problem with `y = Ax*`.

use crate::dense::{dot, full_column_rank, IndexSet, Matrix};
use crate::error::{Error, Result};
use crate::model::{Loss, Polyhedron, ProblemInstance};
use crate::pa::{stack, PaFunction};

/// Largest number of pieces a reduction may create.
pub const MAX_REDUCED_PIECES: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionTrace {
    pub description: String,
    pub pieces: usize,
    pub added_rows: usize,
}

/// The basis-pursuit problem whose solution set matches the smooth problem's
/// solution set when `x` is optimal: `min g` (or `f(A·-y)` held fixed) subject to
/// `Ax = Ax*` and the original constraints.
pub fn pin_measurements(inst: &ProblemInstance, x: &[f64]) -> Result<ProblemInstance> {
    let a = inst.a().clone();
    let y = if a.nrows() == 0 { vec![] } else { a.mul_vec(x)? };
    match inst {
        ProblemInstance::LassoLike { objective, polyhedron, .. } | ProblemInstance::Bpdn1 { objective, polyhedron, .. } => {
            Ok(ProblemInstance::BpLike { objective: objective.clone(), a, y, polyhedron: polyhedron.clone() })
        }
        ProblemInstance::BpLike { .. } => Ok(inst.clone()),
        ProblemInstance::Bpdn2 { .. } => Err(Error::Unsupported("norm-constrained problems have no objective to pin".into())),
    }
}

fn explicit_parts(g: &PaFunction) -> Result<(Matrix, Vec<f64>)> {
    match g.to_explicit()? {
        PaFunction::Explicit { generators, offsets } => Ok((generators, offsets)),
        PaFunction::CompositeL1 { .. } => unreachable!("to_explicit returns an explicit function"),
    }
}

/// Pieces of `x ↦ f(Ax - y)` for a piecewise-affine loss `f`: `(Aᵀq, δ - qᵀy)`.
fn loss_pieces(loss: &PaFunction, a: &Matrix, y: &[f64]) -> Result<(Matrix, Vec<f64>)> {
    let (q, delta) = explicit_parts(loss)?;
    let n = a.ncols();
    let mut gens = Matrix::zeros(q.nrows(), n);
    let mut offs = Vec::with_capacity(q.nrows());
    for (j, qj) in q.rows_iter().enumerate() {
        let atq = if a.nrows() == 0 { vec![0.0; n] } else { a.tr_mul_vec(qj)? };
        for (k, v) in atq.iter().enumerate() {
            gens[(j, k)] = *v;
        }
        offs.push(delta[j] - dot(qj, y));
    }
    Ok((gens, offs))
}

fn pa_loss(inst: &ProblemInstance) -> Result<&PaFunction> {
    match inst.loss() {
        Some(Loss::Pa(p)) => Ok(p),
        _ => Err(Error::Unsupported("reduction needs a piecewise-affine loss".into())),
    }
}

/// `min f(Ax - y) + g(x)` with both functions piecewise affine, as `min g̃(x)` over the
/// same polyhedron with pieces `(Aᵀqⱼ + pᵢ, δⱼ - qⱼᵀy + γᵢ)`.
pub fn pa_loss_lasso_to_bp(inst: &ProblemInstance) -> Result<(ProblemInstance, ReductionTrace)> {
    let ProblemInstance::LassoLike { objective, a, y, polyhedron, .. } = inst else {
        return Err(Error::Unsupported("expected a penalized instance".into()));
    };
    let (lg, lo) = loss_pieces(pa_loss(inst)?, a, y)?;
    let (pg, po) = explicit_parts(objective)?;
    let count = lg.nrows() * pg.nrows();
    if count > MAX_REDUCED_PIECES {
        return Err(Error::Size(format!("reduction would create {count} pieces")));
    }
    let n = inst.dim();
    let mut gens = Matrix::zeros(count, n);
    let mut offs = Vec::with_capacity(count);
    for j in 0..lg.nrows() {
        for i in 0..pg.nrows() {
            let r = j * pg.nrows() + i;
            for k in 0..n {
                gens[(r, k)] = lg[(j, k)] + pg[(i, k)];
            }
            offs.push(lo[j] + po[i]);
        }
    }
    let reduced = ProblemInstance::BpLike {
        objective: PaFunction::explicit(gens, offs)?,
        a: Matrix::zeros(0, n),
        y: vec![],
        polyhedron: polyhedron.clone(),
    };
    let trace = ReductionTrace { description: format!("loss and penalty merged into {count} pieces"), pieces: count, added_rows: 0 };
    Ok((reduced, trace))
}

/// `min g(x) s.t. f(Ax - y) ≤ ε` with `f` piecewise affine, as `min g(x)` over the
/// polyhedron extended by rows `-qⱼᵀA x ≥ -(ε + qⱼᵀy - δⱼ)`.
pub fn pa_loss_bpdn1_to_bp(inst: &ProblemInstance) -> Result<(ProblemInstance, ReductionTrace)> {
    let ProblemInstance::Bpdn1 { objective, a, y, radius, polyhedron, .. } = inst else {
        return Err(Error::Unsupported("expected a loss-constrained instance".into()));
    };
    let (lg, lo) = loss_pieces(pa_loss(inst)?, a, y)?;
    let rows = lg.nrows();
    let rhs: Vec<f64> = lo.iter().map(|o| o - radius).collect();
    let poly = polyhedron.with_rows(&lg.scaled(-1.0), &rhs)?;
    let n = inst.dim();
    let reduced = ProblemInstance::BpLike { objective: objective.clone(), a: Matrix::zeros(0, n), y: vec![], polyhedron: poly };
    let trace = ReductionTrace { description: format!("loss constraint became {rows} polyhedron rows"), pieces: 0, added_rows: rows };
    Ok((reduced, trace))
}

/// `min f(Ax - y) s.t. gᵢ(x) ≤ ηᵢ` with `f` piecewise affine, as `min f(A·-y)` over the
/// polyhedron extended by one row per piece of each `gᵢ`.
pub fn pa_loss_bpdn2_to_bp(inst: &ProblemInstance) -> Result<(ProblemInstance, ReductionTrace)> {
    let ProblemInstance::Bpdn2 { a, y, constraints, polyhedron, .. } = inst else {
        return Err(Error::Unsupported("expected a norm-constrained instance".into()));
    };
    let (lg, lo) = loss_pieces(pa_loss(inst)?, a, y)?;
    let mut poly = polyhedron.clone();
    let mut added = 0;
    for c in constraints {
        let (p, g) = explicit_parts(&c.g)?;
        added += p.nrows();
        if added > MAX_REDUCED_PIECES {
            return Err(Error::Size(format!("reduction would create more than {MAX_REDUCED_PIECES} rows")));
        }
        let rhs: Vec<f64> = g.iter().map(|gi| gi - c.bound).collect();
        poly = poly.with_rows(&p.scaled(-1.0), &rhs)?;
    }
    let n = inst.dim();
    let pieces = lg.nrows();
    let reduced = ProblemInstance::BpLike { objective: PaFunction::explicit(lg, lo)?, a: Matrix::zeros(0, n), y: vec![], polyhedron: poly };
    let trace = ReductionTrace {
        description: format!("loss became a {pieces}-piece objective and constraints became {added} polyhedron rows"),
        pieces,
        added_rows: added,
    };
    Ok((reduced, trace))
}

/// Dispatches to the reduction matching the instance family.
pub fn reduce_pa_loss(inst: &ProblemInstance) -> Result<(ProblemInstance, ReductionTrace)> {
    match inst {
        ProblemInstance::LassoLike { .. } => pa_loss_lasso_to_bp(inst),
        ProblemInstance::Bpdn1 { .. } => pa_loss_bpdn1_to_bp(inst),
        ProblemInstance::Bpdn2 { .. } => pa_loss_bpdn2_to_bp(inst),
        ProblemInstance::BpLike { .. } => Err(Error::Unsupported("instance has no loss".into())),
    }
}

/// The Dantzig selector `min ‖x‖₁ s.t. ‖Aᵀ(Ax - y)‖∞ ≤ ε` as a polyhedral instance.
pub fn dantzig(a: &Matrix, y: &[f64], eps: f64) -> Result<ProblemInstance> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::Input(format!("Dantzig radius {eps} must be finite and nonnegative")));
    }
    let gram = a.transpose().matmul(a)?;
    let aty = a.tr_mul_vec(y)?;
    let n = a.ncols();
    let c = Matrix::vstack(&[&gram, &gram.scaled(-1.0)], n)?;
    let mut d: Vec<f64> = aty.iter().map(|v| v - eps).collect();
    d.extend(aty.iter().map(|v| -v - eps));
    Ok(ProblemInstance::BpLike { objective: PaFunction::l1(n), a: Matrix::zeros(0, n), y: vec![], polyhedron: Polyhedron::new(c, d)? })
}

/// `{x ≥ 0}`.
pub fn nonneg_polyhedron(n: usize) -> Polyhedron {
    Polyhedron { lhs: Matrix::identity(n), rhs: vec![0.0; n] }
}

/// `{x₁ ≤ x₂ ≤ … ≤ xₙ}`.
pub fn monotone_polyhedron(n: usize) -> Polyhedron {
    let d = d1_matrix(n);
    let rows = d.nrows();
    Polyhedron { lhs: d, rhs: vec![0.0; rows] }
}

/// First-difference matrix: row `i` is `x_{i+1} - x_i`.
pub fn d1_matrix(n: usize) -> Matrix {
    let rows = n.saturating_sub(1);
    Matrix::from_fn(rows, n, |i, j| {
        if j == i {
            -1.0
        } else if j == i + 1 {
            1.0
        } else {
            0.0
        }
    })
}

/// `λ₁‖x‖₁ + λ₂‖D₁x‖₁`.
pub fn fused_lasso_objective(n: usize, lambda1: f64, lambda2: f64) -> Result<PaFunction> {
    stack(&[(lambda1, &Matrix::identity(n)), (lambda2, &d1_matrix(n))])
}

/// Column-merged rank test for nondecreasing candidates.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneRank {
    pub holds: bool,
    /// Maximal runs of equal nonzero entries, each of length at least two.
    pub plateaus: Vec<IndexSet>,
    pub matrix: Matrix,
}

/// Kernel test for `min ‖x‖₁ s.t. Ax = y, x nondecreasing` at `x`.
///
/// On the support, the active ordering rows force a direction to be constant on each
/// plateau, so the test keeps the columns of non-plateau support entries and one summed
/// column per plateau.
pub fn monotone_rank_condition(a: &Matrix, x: &[f64], tol_active: f64, tol_rank: f64) -> Result<MonotoneRank> {
    let n = x.len();
    if a.ncols() != n {
        return Err(Error::Dimension(format!("{} columns for a candidate of length {n}", a.ncols())));
    }
    if x.windows(2).any(|w| w[1] < w[0] - tol_active) {
        return Err(Error::Input("candidate is not nondecreasing".into()));
    }
    let nonzero = |i: usize| x[i].abs() > tol_active;
    let mut plateaus = Vec::new();
    let mut singles = Vec::new();
    let mut i = 0;
    while i < n {
        if !nonzero(i) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && nonzero(j + 1) && (x[j + 1] - x[j]).abs() <= tol_active {
            j += 1;
        }
        if j > i {
            plateaus.push(IndexSet::new((i..=j).collect()));
        } else {
            singles.push(i);
        }
        i = j + 1;
    }
    let mut cols: Vec<Vec<f64>> = singles.iter().map(|&j| a.column(j)).collect();
    for p in &plateaus {
        let mut c = vec![0.0; a.nrows()];
        for j in p.iter() {
            for (ci, v) in c.iter_mut().zip(a.column(j)) {
                *ci += v;
            }
        }
        cols.push(c);
    }
    let matrix = Matrix::from_fn(a.nrows(), cols.len(), |r, k| cols[k][r]);
    let holds = full_column_rank(&matrix, tol_rank)?;
    Ok(MonotoneRank { holds, plateaus, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d1_shape() {
        let d = d1_matrix(3);
        assert_eq!(d.to_rows(), vec![vec![-1.0, 1.0, 0.0], vec![0.0, -1.0, 1.0]]);
        assert_eq!(d1_matrix(1).nrows(), 0);
    }

    #[test]
    fn dantzig_box() {
        let inst = dantzig(&Matrix::identity(2), &[1.0, 0.0], 0.5).unwrap();
        let p = inst.polyhedron();
        assert_eq!(p.rhs, vec![0.5, -0.5, -1.5, -0.5]);
    }

    #[test]
    fn plateau_merges_columns() {
        let a = Matrix::from_nested(&[vec![1.0, 2.0, 0.0, 1.0], vec![0.0, 1.0, 1.0, 1.0]]).unwrap();
        let r = monotone_rank_condition(&a, &[0.0, 0.0, 2.0, 2.0], 1e-8, 1e-10).unwrap();
        assert_eq!(r.plateaus, vec![IndexSet::new(vec![2, 3])]);
        assert_eq!(r.matrix.to_rows(), vec![vec![1.0], vec![2.0]]);
        assert!(r.holds);
        assert!(monotone_rank_condition(&a, &[1.0, 0.0, 0.0, 0.0], 1e-8, 1e-10).is_err());
    }

    #[test]
    fn fused_objective_value() {
        let g = fused_lasso_objective(3, 1.0, 2.0).unwrap();
        assert_eq!(g.eval(&[1.0, 1.0, -1.0]).unwrap(), 3.0 + 4.0);
    }
}
