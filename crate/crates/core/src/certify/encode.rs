//! Assembly of the rank matrices and dual systems used by the certifier.
//!
//! All dual systems share one layout: the first `n` rows are the stationarity rows
//!
//! ```text
//! θ·h + h₀ + Aᵀu − C_αᵀv + Σ (subgradient terms) = 0,
//! ```
//!
//! and each subgradient term may append its own normalization or box rows.

use crate::dense::{full_column_rank, rank, IndexSet, Matrix, Sel};
use crate::error::{Error, Result};
use crate::model::Tolerances;
use crate::pa::{active_l1, explicit_w_from_l1, L1Active, PaFunction};
use crate::simplex::StrictStatus;

use super::system::{solve_record, BlockSign, SystemBuilder};
use super::{CertifyOptions, ConditionResult, ConditionRole, ConditionStatus, Method, MethodChoice, RankDetail};

/// Local description of a piecewise-affine function at the candidate.
#[derive(Clone, Debug)]
pub(crate) enum Local {
    /// Active generators, one per row.
    Pieces(Matrix),
    L1 { act: L1Active, identity: bool },
}

impl Local {
    pub fn at(g: &PaFunction, x: &[f64], opts: &CertifyOptions) -> Result<Local> {
        let tol = opts.tolerances.tol_active;
        match (g, opts.method) {
            (PaFunction::Explicit { .. }, MethodChoice::L1) => {
                Err(Error::Unsupported("the l1 method needs a composite l1 objective".into()))
            }
            (PaFunction::Explicit { .. }, _) => Ok(Local::Pieces(crate::pa::active_explicit(g, x, tol)?.pieces)),
            (PaFunction::CompositeL1 { map }, MethodChoice::Generic) => {
                Ok(Local::Pieces(explicit_w_from_l1(&active_l1(map, x, tol)?)?))
            }
            (PaFunction::CompositeL1 { map }, _) => Ok(Local::L1 { act: active_l1(map, x, tol)?, identity: map.is_identity() }),
        }
    }

    pub fn method(&self, normalized: bool) -> Method {
        match self {
            Local::Pieces(_) if normalized => Method::GenericNormalized,
            Local::Pieces(_) => Method::Generic,
            Local::L1 { identity: true, .. } => Method::L1Identity,
            Local::L1 { .. } => Method::L1,
        }
    }
}

/// How a subgradient term enters a dual system.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Mode {
    /// An element of the subdifferential.
    Hull,
    /// A relative-interior element of the subdifferential. With `capped`, each explicit
    /// weight is additionally kept strictly below one when there are at least two.
    StrictHull { capped: bool },
    /// A nonnegative multiple of a subdifferential element.
    Cone,
    /// A positive multiple of a relative-interior element.
    StrictCone,
}

impl Mode {
    fn weight_sign(self) -> BlockSign {
        match self {
            Mode::Hull | Mode::Cone => BlockSign::Nonnegative,
            Mode::StrictHull { .. } | Mode::StrictCone => BlockSign::Positive,
        }
    }
}

pub(crate) struct DualSpec<'a> {
    /// Constant added to the stationarity rows.
    pub constant: Option<&'a [f64]>,
    /// Vector scaled by a strictly positive unknown.
    pub scaled: Option<&'a [f64]>,
    /// Include a free multiplier for the measurement equations.
    pub measurements: bool,
    /// Sign of the active-row multipliers.
    pub active_rows: BlockSign,
    pub terms: Vec<(&'a Local, Mode, String)>,
}

impl Default for DualSpec<'_> {
    fn default() -> Self {
        DualSpec { constant: None, scaled: None, measurements: false, active_rows: BlockSign::Nonnegative, terms: vec![] }
    }
}

pub(crate) struct Ctx<'a> {
    pub n: usize,
    pub a: &'a Matrix,
    pub c_alpha: Matrix,
    pub tols: Tolerances,
}

fn add_term(b: &mut SystemBuilder, local: &Local, mode: Mode, suffix: &str, stationarity: &[usize]) {
    let sign = mode.weight_sign();
    match local {
        Local::Pieces(w) => {
            let blk = b.block(format!("piece_weights{suffix}"), sign);
            b.push_rows_as_columns(blk, w, stationarity, 1.0);
            if let Mode::Hull | Mode::StrictHull { .. } = mode {
                let r = b.add_row(-1.0);
                for col in 0..w.nrows() {
                    b.add_entry(blk, col, r, 1.0);
                }
            }
            if let Mode::StrictHull { capped: true } = mode {
                if w.nrows() >= 2 {
                    let gap = b.block(format!("weight_gap{suffix}"), BlockSign::Positive);
                    for col in 0..w.nrows() {
                        let r = b.add_row(-1.0);
                        b.add_entry(blk, col, r, 1.0);
                        b.push_column(gap, vec![(r, 1.0)]);
                    }
                }
            }
        }
        Local::L1 { act, .. } => {
            let scaled = matches!(mode, Mode::Cone | Mode::StrictCone);
            let scale = if scaled {
                let blk = b.block(format!("scale{suffix}"), sign);
                let entries = act.subgradient_base.iter().zip(stationarity).map(|(v, &r)| (r, *v)).collect();
                b.push_column(blk, entries);
                Some(blk)
            } else {
                for (v, &r) in act.subgradient_base.iter().zip(stationarity) {
                    b.add_constant(r, *v);
                }
                None
            };
            let coeffs = b.block(format!("offsupport_coeffs{suffix}"), BlockSign::Free);
            let upper = b.block(format!("upper_gap{suffix}"), sign);
            let lower = b.block(format!("lower_gap{suffix}"), sign);
            for row in act.off_rows.rows_iter() {
                let (up, lo) = if scaled { (b.add_row(0.0), b.add_row(0.0)) } else { (b.add_row(-1.0), b.add_row(1.0)) };
                let mut entries: Vec<(usize, f64)> = row.iter().zip(stationarity).map(|(v, &r)| (r, *v)).collect();
                entries.push((up, 1.0));
                entries.push((lo, 1.0));
                b.push_column(coeffs, entries);
                b.push_column(upper, vec![(up, 1.0)]);
                b.push_column(lower, vec![(lo, -1.0)]);
                if let Some(s) = scale {
                    b.add_entry(s, 0, up, -1.0);
                    b.add_entry(s, 0, lo, 1.0);
                }
            }
        }
    }
}

impl Ctx<'_> {
    fn build(&self, spec: &DualSpec<'_>) -> SystemBuilder {
        let zhat = spec.constant.map_or_else(|| vec![0.0; self.n], <[f64]>::to_vec);
        let mut b = SystemBuilder::new(zhat);
        let rows: Vec<usize> = (0..self.n).collect();
        if let Some(h) = spec.scaled {
            let blk = b.block("loss_scale", BlockSign::Positive);
            b.push_column(blk, h.iter().copied().enumerate().collect());
        }
        if spec.measurements && self.a.nrows() > 0 {
            let blk = b.block("measurement_multiplier", BlockSign::Free);
            b.push_rows_as_columns(blk, self.a, &rows, 1.0);
        }
        if self.c_alpha.nrows() > 0 {
            let blk = b.block("active_row_multiplier", spec.active_rows);
            b.push_rows_as_columns(blk, &self.c_alpha, &rows, -1.0);
        }
        for (local, mode, suffix) in &spec.terms {
            add_term(&mut b, local, *mode, suffix, &rows);
        }
        b
    }

    pub fn system_condition(&self, name: &str, role: ConditionRole, spec: &DualSpec<'_>) -> Result<ConditionResult> {
        self.solve_condition(name, role, self.build(spec))
    }

    fn solve_condition(&self, name: &str, role: ConditionRole, b: SystemBuilder) -> Result<ConditionResult> {
        let solved = solve_record(b.finish(), self.tols.tol_strict)?;
        let (status, detail) = match solved.status {
            StrictStatus::Feasible => (ConditionStatus::Holds, "witness found".to_string()),
            StrictStatus::Infeasible => (ConditionStatus::Fails, "system has no solution".to_string()),
            StrictStatus::Borderline => (
                ConditionStatus::Borderline,
                format!("positive margin {:.3e} is below tol_strict", solved.margin.unwrap_or(0.0)),
            ),
        };
        Ok(ConditionResult { name: name.into(), role, status, detail, rank: None, margin: solved.margin, system: Some(solved.record) })
    }

    fn rank_condition(&self, name: &str, m: &Matrix) -> Result<ConditionResult> {
        let r = rank(m, self.tols.tol_rank)?;
        let holds = full_column_rank(m, self.tols.tol_rank)?;
        let cols = m.ncols();
        Ok(ConditionResult {
            name: name.into(),
            role: ConditionRole::Uniqueness,
            status: if holds { ConditionStatus::Holds } else { ConditionStatus::Fails },
            detail: format!("rank {r} of {cols} columns"),
            rank: Some(RankDetail { rank: r, columns: cols }),
            margin: None,
            system: None,
        })
    }

    fn measurement_rows(&self, with_measurements: bool) -> Matrix {
        if with_measurements && self.a.nrows() > 0 {
            self.a.clone()
        } else {
            Matrix::zeros(0, self.n)
        }
    }

    /// Full column rank of measurements, active rows and the objective's local kernel rows.
    pub fn bp_rank(&self, name: &str, local: &Local, with_measurements: bool) -> Result<ConditionResult> {
        let a = self.measurement_rows(with_measurements);
        let m = match local {
            Local::Pieces(w) => Matrix::vstack(&[&a, &self.c_alpha, w], self.n)?,
            Local::L1 { act, identity: true } => {
                let s = Sel::Set(&act.support);
                let top = a.submatrix(Sel::All, s)?;
                let bottom = self.c_alpha.submatrix(Sel::All, s)?;
                Matrix::vstack(&[&top, &bottom], act.support.len())?
            }
            Local::L1 { act, .. } => Matrix::vstack(&[&a, &self.c_alpha, &act.off_rows], self.n)?,
        };
        self.rank_condition(name, &m)
    }

    /// Stacked rank for several tight constraints. With two or more composite ℓ₁ blocks
    /// the shared subgradient row of each block is included as well.
    pub fn stacked_rank(&self, name: &str, locals: &[Local]) -> Result<ConditionResult> {
        let mut parts: Vec<Matrix> = vec![self.measurement_rows(true), self.c_alpha.clone()];
        for l in locals {
            match l {
                Local::Pieces(w) => parts.push(w.clone()),
                Local::L1 { act, .. } => {
                    if locals.len() >= 2 {
                        parts.push(Matrix::row_vector(&act.subgradient_base));
                    }
                    parts.push(act.off_rows.clone());
                }
            }
        }
        let refs: Vec<&Matrix> = parts.iter().collect();
        self.rank_condition(name, &Matrix::vstack(&refs, self.n)?)
    }

    /// Strict dual system with positive active-row multipliers and positive weights on
    /// every active piece.
    pub fn bp_strict(&self, name: &str, local: &Local, with_measurements: bool, normalized: bool) -> Result<ConditionResult> {
        if let Local::L1 { act, identity: true } = local {
            let b = self.identity_strict(act, with_measurements);
            return self.solve_condition(name, ConditionRole::Uniqueness, b);
        }
        let mode = match local {
            Local::Pieces(_) if normalized => Mode::StrictHull { capped: true },
            Local::Pieces(_) => Mode::StrictCone,
            Local::L1 { .. } => Mode::StrictHull { capped: false },
        };
        let spec = DualSpec {
            measurements: with_measurements,
            active_rows: BlockSign::Positive,
            terms: vec![(local, mode, String::new())],
            ..DualSpec::default()
        };
        self.system_condition(name, ConditionRole::Uniqueness, &spec)
    }

    /// Support-restricted form for the plain ℓ₁ norm: equality on the support, and a
    /// strict `(-1, 1)` band on each off-support coordinate.
    fn identity_strict(&self, act: &L1Active, with_measurements: bool) -> SystemBuilder {
        let support: &IndexSet = &act.support;
        let mut b = SystemBuilder::new(act.signs.clone());
        let mut band = Vec::new();
        for j in act.off_support.iter() {
            band.push((j, b.add_row(-1.0), b.add_row(1.0)));
        }
        let spread = |b: &mut SystemBuilder, blk: usize, row: &[f64], scale: f64| {
            let mut entries: Vec<(usize, f64)> = support.iter().enumerate().map(|(k, j)| (k, scale * row[j])).collect();
            for &(j, up, lo) in &band {
                entries.push((up, scale * row[j]));
                entries.push((lo, scale * row[j]));
            }
            b.push_column(blk, entries);
        };
        if with_measurements && self.a.nrows() > 0 {
            let blk = b.block("measurement_multiplier", BlockSign::Free);
            for r in self.a.rows_iter() {
                spread(&mut b, blk, r, 1.0);
            }
        }
        if self.c_alpha.nrows() > 0 {
            let blk = b.block("active_row_multiplier", BlockSign::Positive);
            for r in self.c_alpha.rows_iter() {
                spread(&mut b, blk, r, -1.0);
            }
        }
        let upper = b.block("upper_gap", BlockSign::Positive);
        let lower = b.block("lower_gap", BlockSign::Positive);
        for &(_, up, lo) in &band {
            b.push_column(upper, vec![(up, 1.0)]);
            b.push_column(lower, vec![(lo, -1.0)]);
        }
        b
    }
}
