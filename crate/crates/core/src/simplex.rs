//! Dense two-phase simplex and the linear feasibility systems built on it.
//!
//! [`solve`] handles equality constraints plus per-variable bounds, where either bound
//! may be infinite. Internally every variable is shifted, reflected or split so the
//! tableau only sees nonnegative columns. Bland's rule picks pivots, so degenerate
//! problems terminate.
//!
//! [`strict_system_feasible`] decides whether a linear system has a solution with a
//! designated block of unknowns strictly positive. It maximizes the smallest entry of
//! that block, capped at 1.

use serde::{Deserialize, Serialize};

use crate::dense::{norm_inf, Matrix};
use crate::error::{dim_err, Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-9;

/// Default margin below which a strictly positive block is considered degenerate.
pub const DEFAULT_TOL_STRICT: f64 = 1e-7;
/// Optimal margins at or below this are treated as exactly zero.
const MARGIN_ZERO: f64 = 1e-11;
/// Largest acceptable residual for a reported witness.
pub const WITNESS_RESIDUAL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// `optimize objective·x  s.t.  eq_lhs·x = eq_rhs,  lower ≤ x ≤ upper`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub eq_lhs: Matrix,
    pub eq_rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<(&[f64], f64)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, *value)),
            _ => None,
        }
    }
}

/// How an original variable maps onto nonnegative tableau columns.
#[derive(Clone, Copy)]
enum VarMap {
    /// `x = base + col`
    Shift { col: usize, base: f64 },
    /// `x = base - col`
    Reflect { col: usize, base: f64 },
    /// `x = pos - neg`
    Split { pos: usize, neg: usize },
}

struct StandardForm {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: Vec<f64>,
    maps: Vec<VarMap>,
    ncols: usize,
}

fn standardize(lp: &LinearProgram) -> Result<StandardForm> {
    let n = lp.objective.len();
    if lp.lower.len() != n || lp.upper.len() != n || lp.eq_lhs.ncols() != n && lp.eq_lhs.nrows() > 0 {
        return dim_err("linear program: objective, bounds and constraint widths differ");
    }
    if lp.eq_lhs.nrows() != lp.eq_rhs.len() {
        return dim_err("linear program: constraint rows and right-hand side differ");
    }
    if !lp.eq_lhs.is_finite() || lp.eq_rhs.iter().chain(&lp.objective).any(|x| !x.is_finite()) {
        return Err(Error::Input("linear program has non-finite data".into()));
    }
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0;
    let mut bound_rows: Vec<(usize, f64)> = Vec::new();
    for j in 0..n {
        let (l, u) = (lp.lower[j], lp.upper[j]);
        if l.is_nan() || u.is_nan() || l == f64::INFINITY || u == f64::NEG_INFINITY {
            return Err(Error::Input(format!("variable {j} has invalid bounds [{l}, {u}]")));
        }
        if l > u {
            return Err(Error::Input(format!("variable {j} has empty bounds [{l}, {u}]")));
        }
        if l.is_finite() {
            maps.push(VarMap::Shift { col: ncols, base: l });
            if u.is_finite() {
                bound_rows.push((ncols, u - l));
            }
            ncols += 1;
        } else if u.is_finite() {
            maps.push(VarMap::Reflect { col: ncols, base: u });
            ncols += 1;
        } else {
            maps.push(VarMap::Split { pos: ncols, neg: ncols + 1 });
            ncols += 2;
        }
    }
    let n_bound_slack = bound_rows.len();
    let total = ncols + n_bound_slack;
    let sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    let mut c = vec![0.0; total];
    for (j, m) in maps.iter().enumerate() {
        let cj = sign * lp.objective[j];
        match *m {
            VarMap::Shift { col, .. } => c[col] += cj,
            VarMap::Reflect { col, .. } => c[col] -= cj,
            VarMap::Split { pos, neg } => {
                c[pos] += cj;
                c[neg] -= cj;
            }
        }
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..lp.eq_lhs.nrows() {
        let mut row = vec![0.0; total];
        let mut rhs = lp.eq_rhs[i];
        for (j, m) in maps.iter().enumerate() {
            let aij = lp.eq_lhs[(i, j)];
            if aij == 0.0 {
                continue;
            }
            match *m {
                VarMap::Shift { col, base } => {
                    row[col] += aij;
                    rhs -= aij * base;
                }
                VarMap::Reflect { col, base } => {
                    row[col] -= aij;
                    rhs -= aij * base;
                }
                VarMap::Split { pos, neg } => {
                    row[pos] += aij;
                    row[neg] -= aij;
                }
            }
        }
        a.push(row);
        b.push(rhs);
    }
    for (k, (col, width)) in bound_rows.into_iter().enumerate() {
        let mut row = vec![0.0; total];
        row[col] = 1.0;
        row[ncols + k] = 1.0;
        a.push(row);
        b.push(width);
    }
    Ok(StandardForm { a, b, c, maps, ncols: total })
}

/// Dense simplex tableau over `[structural | artificial | rhs]`.
struct Tableau {
    m: usize,
    width: usize,
    t: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    n_struct: usize,
    iterations: usize,
    cap: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width - 1)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.t[r * w + c];
        for j in 0..w {
            self.t[r * w + j] /= p;
        }
        let prow: Vec<f64> = self.t[r * w..(r + 1) * w].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * w + c];
            if f != 0.0 {
                for j in 0..w {
                    self.t[i * w + j] -= f * prow[j];
                }
                self.t[i * w + c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for j in 0..w {
                self.obj[j] -= f * prow[j];
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    fn run(&mut self, allowed: usize) -> Result<Phase> {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j] < -COST_TOL) else {
                return Ok(Phase::Optimal);
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, c);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i).max(0.0) / a;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                            if ratio < br && !tie || tie && self.basis[i] < self.basis[bi] {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = best else {
                return Ok(Phase::Unbounded);
            };
            self.iterations += 1;
            if self.iterations > self.cap {
                return Err(Error::Solver(format!("simplex exceeded {} iterations", self.cap)));
            }
            self.pivot(r, c);
        }
    }
}

/// Solves a linear program with the two-phase simplex method.
///
/// Returns `Err(Error::Solver)` if the iteration cap is hit; that is never reported as
/// infeasibility.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    let sf = standardize(lp)?;
    let m = sf.a.len();
    let n = sf.ncols;
    let width = n + m + 1;
    let mut t = vec![0.0; m * width];
    for i in 0..m {
        let s = if sf.b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i * width + j] = s * sf.a[i][j];
        }
        t[i * width + n + i] = 1.0;
        t[i * width + width - 1] = s * sf.b[i];
    }
    let mut obj = vec![0.0; width];
    for i in 0..m {
        for j in 0..n {
            obj[j] -= t[i * width + j];
        }
        obj[width - 1] -= t[i * width + width - 1];
    }
    let mut tab = Tableau {
        m,
        width,
        t,
        obj,
        basis: (n..n + m).collect(),
        n_struct: n,
        iterations: 0,
        cap: 50 * (n + m).max(1),
    };
    tab.run(n)?;
    let scale = 1.0 + norm_inf(&sf.b);
    let infeas: f64 = (0..m).filter(|&i| tab.basis[i] >= n).map(|i| tab.rhs(i).abs()).sum();
    if infeas > PHASE1_TOL * scale {
        return Ok(LpOutcome::Infeasible);
    }
    for r in 0..m {
        if tab.basis[r] < n {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            let a = tab.at(r, j).abs();
            if a > PIVOT_TOL && best.map_or(true, |(_, b)| a > b) {
                best = Some((j, a));
            }
        }
        if let Some((j, _)) = best {
            tab.pivot(r, j);
        }
    }
    let mut obj = vec![0.0; width];
    obj[..n].copy_from_slice(&sf.c);
    for r in 0..m {
        let cb = if tab.basis[r] < n { sf.c[tab.basis[r]] } else { 0.0 };
        if cb != 0.0 {
            for j in 0..width {
                obj[j] -= cb * tab.at(r, j);
            }
        }
    }
    tab.obj = obj;
    if let Phase::Unbounded = tab.run(n)? {
        return Ok(LpOutcome::Unbounded);
    }
    let z = basic_solution(&tab, &sf);
    let mut x = vec![0.0; lp.objective.len()];
    for (j, map) in sf.maps.iter().enumerate() {
        x[j] = match *map {
            VarMap::Shift { col, base } => base + z[col],
            VarMap::Reflect { col, base } => base - z[col],
            VarMap::Split { pos, neg } => z[pos] - z[neg],
        };
    }
    let value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpOutcome::Optimal { x, value })
}

/// Reads the basic solution, re-solving the basis system against the original data to
/// shed accumulated pivoting error.
fn basic_solution(tab: &Tableau, sf: &StandardForm) -> Vec<f64> {
    let n = tab.n_struct;
    let m = tab.m;
    let mut z = vec![0.0; n];
    for r in 0..m {
        if tab.basis[r] < n {
            z[tab.basis[r]] = tab.rhs(r).max(0.0);
        }
    }
    if m == 0 {
        return z;
    }
    let bmat = nalgebra::DMatrix::from_fn(m, m, |i, k| {
        let col = tab.basis[k];
        if col < n {
            sf.a[i][col]
        } else if col - n == i {
            1.0
        } else {
            0.0
        }
    });
    let rhs = nalgebra::DVector::from_column_slice(&sf.b);
    let Some(sol) = bmat.lu().solve(&rhs) else {
        return z;
    };
    let mut refined = vec![0.0; n];
    for r in 0..m {
        let col = tab.basis[r];
        if col < n {
            if sol[r] < -1e-7 || !sol[r].is_finite() {
                return z;
            }
            refined[col] = sol[r].max(0.0);
        } else if sol[r].abs() > 1e-7 {
            return z;
        }
    }
    refined
}

/// Row relation for [`LpBuilder`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

/// Incremental construction of linear programs with inequality rows.
#[derive(Clone, Debug, Default)]
pub struct LpBuilder {
    lower: Vec<f64>,
    upper: Vec<f64>,
    objective: Vec<f64>,
    rows: Vec<(Vec<(usize, f64)>, Cmp, f64)>,
}

impl LpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(&mut self, lower: f64, upper: f64) -> usize {
        self.lower.push(lower);
        self.upper.push(upper);
        self.objective.push(0.0);
        self.lower.len() - 1
    }

    /// Adds `n` variables with identical bounds and returns the first index.
    pub fn vars(&mut self, n: usize, lower: f64, upper: f64) -> usize {
        let first = self.lower.len();
        for _ in 0..n {
            self.var(lower, upper);
        }
        first
    }

    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }

    pub fn set_objective(&mut self, var: usize, coeff: f64) {
        self.objective[var] = coeff;
    }

    pub fn clear_objective(&mut self) {
        self.objective.iter_mut().for_each(|c| *c = 0.0);
    }

    pub fn row(&mut self, coeffs: Vec<(usize, f64)>, cmp: Cmp, rhs: f64) {
        self.rows.push((coeffs, cmp, rhs));
    }

    /// The program over the declared variables followed by one slack per inequality.
    pub fn build(&self, sense: Sense) -> LinearProgram {
        let n = self.lower.len();
        let n_slack = self.rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        let total = n + n_slack;
        let mut eq = Matrix::zeros(self.rows.len(), total);
        let mut rhs = Vec::with_capacity(self.rows.len());
        let mut slack = n;
        for (i, (coeffs, cmp, b)) in self.rows.iter().enumerate() {
            for &(j, a) in coeffs {
                eq[(i, j)] += a;
            }
            match cmp {
                Cmp::Le => {
                    eq[(i, slack)] = 1.0;
                    slack += 1;
                }
                Cmp::Ge => {
                    eq[(i, slack)] = -1.0;
                    slack += 1;
                }
                Cmp::Eq => {}
            }
            rhs.push(*b);
        }
        let mut lower = self.lower.clone();
        let mut upper = self.upper.clone();
        let mut objective = self.objective.clone();
        lower.resize(total, 0.0);
        upper.resize(total, f64::INFINITY);
        objective.resize(total, 0.0);
        LinearProgram { sense, objective, eq_lhs: eq, eq_rhs: rhs, lower, upper }
    }

    /// Solves and truncates the solution to the declared variables.
    pub fn solve(&self, sense: Sense) -> Result<LpOutcome> {
        let n = self.lower.len();
        Ok(match solve(&self.build(sense))? {
            LpOutcome::Optimal { mut x, value } => {
                x.truncate(n);
                LpOutcome::Optimal { x, value }
            }
            other => other,
        })
    }
}

/// `zhat + free·w + nonneg·w' + strict·w'' = 0` with `w' ≥ 0` and `w'' > 0`.
///
/// Any block may have zero columns; all blocks share the row count of `zhat`.
#[derive(Clone, Debug)]
pub struct StrictSystem {
    pub zhat: Vec<f64>,
    pub free: Matrix,
    pub nonneg: Matrix,
    pub strict: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrictStatus {
    Feasible,
    Infeasible,
    Borderline,
}

#[derive(Clone, Debug)]
pub struct StrictOutcome {
    pub status: StrictStatus,
    /// Optimal margin of the strict block, when that block is nonempty and the program feasible.
    pub margin: Option<f64>,
    pub free: Vec<f64>,
    pub nonneg: Vec<f64>,
    pub strict: Vec<f64>,
    pub residual: f64,
}

impl StrictSystem {
    pub fn new(zhat: Vec<f64>, free: Matrix, nonneg: Matrix, strict: Matrix) -> Result<Self> {
        let n = zhat.len();
        for (name, m) in [("free", &free), ("nonnegative", &nonneg), ("strict", &strict)] {
            if m.nrows() != n && !(m.ncols() == 0) {
                return dim_err(format!("{name} block has {} rows, expected {n}", m.nrows()));
            }
        }
        let fix = |m: Matrix| if m.ncols() == 0 { Matrix::zeros(n, 0) } else { m };
        Ok(StrictSystem { zhat, free: fix(free), nonneg: fix(nonneg), strict: fix(strict) })
    }

    /// Max-norm of `zhat + free·w + nonneg·w' + strict·w''`.
    pub fn residual(&self, free: &[f64], nonneg: &[f64], strict: &[f64]) -> Result<f64> {
        let mut r = self.zhat.clone();
        for (m, v) in [(&self.free, free), (&self.nonneg, nonneg), (&self.strict, strict)] {
            for (ri, mi) in r.iter_mut().zip(m.mul_vec(v)?) {
                *ri += mi;
            }
        }
        Ok(norm_inf(&r))
    }
}

/// Decides strict feasibility by maximizing `ε ∈ [0, 1]` subject to `w'' ≥ ε·1`.
///
/// `Feasible` needs `ε* ≥ tol_strict` and a witness residual within
/// [`WITNESS_RESIDUAL`]; an infeasible program or `ε* = 0` gives `Infeasible`; anything
/// in between is `Borderline`. With an empty strict block this is plain feasibility.
pub fn strict_system_feasible(sys: &StrictSystem, tol_strict: f64) -> Result<StrictOutcome> {
    let (nf, ng, nh) = (sys.free.ncols(), sys.nonneg.ncols(), sys.strict.ncols());
    let rows = sys.zhat.len();
    let mut b = LpBuilder::new();
    let wf = b.vars(nf, f64::NEG_INFINITY, f64::INFINITY);
    let wg = b.vars(ng, 0.0, f64::INFINITY);
    let wt = b.vars(nh, 0.0, f64::INFINITY);
    let eps = if nh > 0 { Some(b.var(0.0, 1.0)) } else { None };
    for i in 0..rows {
        let mut coeffs = Vec::new();
        for j in 0..nf {
            coeffs.push((wf + j, sys.free[(i, j)]));
        }
        for j in 0..ng {
            coeffs.push((wg + j, sys.nonneg[(i, j)]));
        }
        let mut hsum = 0.0;
        for j in 0..nh {
            coeffs.push((wt + j, sys.strict[(i, j)]));
            hsum += sys.strict[(i, j)];
        }
        if let Some(e) = eps {
            coeffs.push((e, hsum));
        }
        coeffs.retain(|c| c.1 != 0.0);
        b.row(coeffs, Cmp::Eq, -sys.zhat[i]);
    }
    if let Some(e) = eps {
        b.set_objective(e, 1.0);
    }
    let infeasible = || StrictOutcome {
        status: StrictStatus::Infeasible,
        margin: None,
        free: vec![],
        nonneg: vec![],
        strict: vec![],
        residual: f64::INFINITY,
    };
    let (x, _) = match b.solve(Sense::Maximize)? {
        LpOutcome::Optimal { x, value } => (x, value),
        LpOutcome::Infeasible => return Ok(infeasible()),
        LpOutcome::Unbounded => return Err(Error::Solver("strict-feasibility program reported unbounded".into())),
    };
    let free = x[wf..wf + nf].to_vec();
    let nonneg = x[wg..wg + ng].to_vec();
    let margin = eps.map(|e| x[e]);
    let strict: Vec<f64> = (0..nh).map(|j| x[wt + j] + margin.unwrap_or(0.0)).collect();
    let residual = sys.residual(&free, &nonneg, &strict)?;
    let status = match margin {
        Some(m) if m <= MARGIN_ZERO => StrictStatus::Infeasible,
        Some(m) if m < tol_strict => StrictStatus::Borderline,
        _ if residual > WITNESS_RESIDUAL * (1.0 + norm_inf(&sys.zhat)) => StrictStatus::Borderline,
        _ => StrictStatus::Feasible,
    };
    if status == StrictStatus::Infeasible {
        return Ok(StrictOutcome { margin, ..infeasible() });
    }
    Ok(StrictOutcome { status, margin, free, nonneg, strict, residual })
}

#[derive(Clone, Debug)]
pub struct NonnegOutcome {
    pub feasible: bool,
    pub free: Vec<f64>,
    pub nonneg: Vec<f64>,
    pub residual: f64,
}

/// Phase-one feasibility of `zhat + free·w + nonneg·w' = 0` with `w' ≥ 0`.
pub fn nonneg_system_feasible(zhat: &[f64], free: &Matrix, nonneg: &Matrix) -> Result<NonnegOutcome> {
    let sys = StrictSystem::new(zhat.to_vec(), free.clone(), nonneg.clone(), Matrix::zeros(zhat.len(), 0))?;
    let out = strict_system_feasible(&sys, DEFAULT_TOL_STRICT)?;
    Ok(NonnegOutcome {
        feasible: out.status == StrictStatus::Feasible,
        free: out.free,
        nonneg: out.nonneg,
        residual: out.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(sense: Sense, c: &[f64], a: &[&[f64]], b: &[f64], lo: &[f64], hi: &[f64]) -> LinearProgram {
        let rows: Vec<Vec<f64>> = a.iter().map(|r| r.to_vec()).collect();
        LinearProgram {
            sense,
            objective: c.to_vec(),
            eq_lhs: Matrix::from_rows(&rows, c.len()).unwrap(),
            eq_rhs: b.to_vec(),
            lower: lo.to_vec(),
            upper: hi.to_vec(),
        }
    }

    const INF: f64 = f64::INFINITY;

    #[test]
    fn bounded_maximization() {
        let p = lp(Sense::Maximize, &[1.0, 1.0], &[&[1.0, 2.0]], &[4.0], &[0.0, 0.0], &[3.0, INF]);
        let (x, v) = solve(&p).unwrap().optimal().map(|(x, v)| (x.to_vec(), v)).unwrap();
        assert!((v - 3.5).abs() < 1e-12, "{x:?}");
        assert!((x[0] - 3.0).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn free_and_reflected_variables() {
        let p = lp(Sense::Minimize, &[1.0, -1.0], &[&[1.0, 1.0]], &[1.0], &[-INF, -INF], &[INF, 2.0]);
        let (x, v) = solve(&p).unwrap().optimal().map(|(x, v)| (x.to_vec(), v)).unwrap();
        assert!((v + 3.0).abs() < 1e-12, "{x:?}");
    }

    #[test]
    fn infeasible_and_unbounded() {
        let p = lp(Sense::Minimize, &[1.0], &[&[1.0], &[1.0]], &[1.0, 2.0], &[0.0], &[INF]);
        assert_eq!(solve(&p).unwrap(), LpOutcome::Infeasible);
        let p = lp(Sense::Maximize, &[1.0, 0.0], &[&[1.0, -1.0]], &[0.0], &[0.0, 0.0], &[INF, INF]);
        assert_eq!(solve(&p).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let p = lp(Sense::Maximize, &[1.0, 2.0], &[&[1.0, 1.0], &[2.0, 2.0]], &[1.0, 2.0], &[0.0, 0.0], &[INF, INF]);
        let (_, v) = solve(&p).unwrap().optimal().map(|(x, v)| (x.to_vec(), v)).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn no_constraints() {
        let p = lp(Sense::Minimize, &[1.0, -1.0], &[], &[], &[0.0, -2.0], &[1.0, 5.0]);
        let (x, v) = solve(&p).unwrap().optimal().map(|(x, v)| (x.to_vec(), v)).unwrap();
        assert_eq!(x, vec![0.0, 5.0]);
        assert_eq!(v, -5.0);
    }

    #[test]
    fn strict_system_basic_cases() {
        let sys = StrictSystem::new(vec![0.0], Matrix::zeros(1, 0), Matrix::zeros(1, 0), Matrix::from_nested(&[vec![1.0, -1.0]]).unwrap()).unwrap();
        let out = strict_system_feasible(&sys, DEFAULT_TOL_STRICT).unwrap();
        assert_eq!(out.status, StrictStatus::Feasible);
        assert!(out.strict.iter().all(|&w| w >= DEFAULT_TOL_STRICT));
        let sys = StrictSystem::new(vec![0.0], Matrix::zeros(1, 0), Matrix::zeros(1, 0), Matrix::from_nested(&[vec![1.0, 1.0]]).unwrap()).unwrap();
        assert_eq!(strict_system_feasible(&sys, DEFAULT_TOL_STRICT).unwrap().status, StrictStatus::Infeasible);
        // w'' = 1e-9 is the only solution: positive but below the margin.
        let sys = StrictSystem::new(vec![-1e-9], Matrix::zeros(1, 0), Matrix::zeros(1, 0), Matrix::identity(1)).unwrap();
        assert_eq!(strict_system_feasible(&sys, DEFAULT_TOL_STRICT).unwrap().status, StrictStatus::Borderline);
    }

    #[test]
    fn nonneg_system() {
        let g = Matrix::from_nested(&[vec![1.0], vec![1.0]]).unwrap();
        assert!(nonneg_system_feasible(&[-2.0, -2.0], &Matrix::zeros(2, 0), &g).unwrap().feasible);
        assert!(!nonneg_system_feasible(&[2.0, 2.0], &Matrix::zeros(2, 0), &g).unwrap().feasible);
        assert!(!nonneg_system_feasible(&[-2.0, -1.0], &Matrix::zeros(2, 0), &g).unwrap().feasible);
    }
}
