//! Named linear systems and their re-checkable witnesses.
//!
//! Every feasibility-type condition is recorded as `zhat + Σ blockᵢ·valuesᵢ = 0`, where
//! each block is free, nonnegative or strictly positive. The record keeps the full
//! data, so a reader with only the report can recompute the residual and the sign
//! constraints without rebuilding anything from the instance.

use serde::{Deserialize, Serialize};

use crate::dense::{norm_inf, Matrix};
use crate::error::Result;
use crate::simplex::{strict_system_feasible, StrictStatus, StrictSystem, WITNESS_RESIDUAL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockSign {
    Free,
    Nonnegative,
    Positive,
}

/// One block of unknowns: its coefficient columns and, once solved, its values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockRecord {
    pub label: String,
    pub sign: BlockSign,
    /// Coefficient columns, each of the system's row count.
    pub columns: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemRecord {
    pub zhat: Vec<f64>,
    pub blocks: Vec<BlockRecord>,
}

/// Result of re-checking a recorded witness.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditOutcome {
    pub residual: f64,
    pub min_positive: Option<f64>,
    pub min_nonnegative: Option<f64>,
    pub ok: bool,
}

impl SystemRecord {
    pub fn rows(&self) -> usize {
        self.zhat.len()
    }

    pub fn residual(&self) -> f64 {
        let mut r = self.zhat.clone();
        for b in &self.blocks {
            for (col, v) in b.columns.iter().zip(&b.values) {
                for (ri, c) in r.iter_mut().zip(col) {
                    *ri += c * v;
                }
            }
        }
        norm_inf(&r)
    }

    /// Recomputes the residual and sign constraints of the stored witness.
    pub fn audit(&self, tol_strict: f64) -> AuditOutcome {
        let residual = self.residual();
        let min_of = |sign: BlockSign| {
            self.blocks.iter().filter(|b| b.sign == sign).flat_map(|b| b.values.iter().copied()).reduce(f64::min)
        };
        let min_positive = min_of(BlockSign::Positive);
        let min_nonnegative = min_of(BlockSign::Nonnegative);
        let sized = self.blocks.iter().all(|b| b.values.len() == b.columns.len() && b.columns.iter().all(|c| c.len() == self.rows()));
        let ok = sized
            && residual <= WITNESS_RESIDUAL * (1.0 + norm_inf(&self.zhat))
            && min_positive.map_or(true, |m| m >= tol_strict * (1.0 - 1e-9))
            && min_nonnegative.map_or(true, |m| m >= -1e-12);
        AuditOutcome { residual, min_positive, min_nonnegative, ok }
    }

    pub fn block(&self, label: &str) -> Option<&BlockRecord> {
        self.blocks.iter().find(|b| b.label == label)
    }
}

/// Incremental builder: rows carry constants, blocks collect sparse columns.
#[derive(Clone, Debug)]
pub(crate) struct SystemBuilder {
    zhat: Vec<f64>,
    blocks: Vec<(String, BlockSign, Vec<Vec<(usize, f64)>>)>,
}

impl SystemBuilder {
    pub fn new(zhat: Vec<f64>) -> Self {
        SystemBuilder { zhat, blocks: Vec::new() }
    }

    pub fn add_row(&mut self, constant: f64) -> usize {
        self.zhat.push(constant);
        self.zhat.len() - 1
    }

    pub fn add_constant(&mut self, row: usize, v: f64) {
        self.zhat[row] += v;
    }

    pub fn block(&mut self, label: impl Into<String>, sign: BlockSign) -> usize {
        self.blocks.push((label.into(), sign, Vec::new()));
        self.blocks.len() - 1
    }

    pub fn push_column(&mut self, block: usize, entries: Vec<(usize, f64)>) -> usize {
        let cols = &mut self.blocks[block].2;
        cols.push(entries.into_iter().filter(|e| e.1 != 0.0).collect());
        cols.len() - 1
    }

    /// Adds one column per row of `m`, placed on the rows listed in `at`.
    pub fn push_rows_as_columns(&mut self, block: usize, m: &Matrix, at: &[usize], scale: f64) {
        for r in m.rows_iter() {
            let entries = r.iter().zip(at).map(|(v, &row)| (row, scale * v)).collect();
            self.push_column(block, entries);
        }
    }

    pub fn add_entry(&mut self, block: usize, col: usize, row: usize, v: f64) {
        self.blocks[block].2[col].push((row, v));
    }

    pub fn finish(self) -> SystemRecord {
        let rows = self.zhat.len();
        let blocks = self
            .blocks
            .into_iter()
            .map(|(label, sign, cols)| {
                let columns: Vec<Vec<f64>> = cols
                    .iter()
                    .map(|entries| {
                        let mut c = vec![0.0; rows];
                        for &(r, v) in entries {
                            c[r] += v;
                        }
                        c
                    })
                    .collect();
                let values = vec![0.0; columns.len()];
                BlockRecord { label, sign, columns, values }
            })
            .collect();
        SystemRecord { zhat: self.zhat, blocks }
    }
}

/// Outcome of solving a recorded system.
#[derive(Clone, Debug)]
pub(crate) struct Solved {
    pub status: StrictStatus,
    pub margin: Option<f64>,
    pub record: SystemRecord,
}

fn gather(rec: &SystemRecord, sign: BlockSign) -> Matrix {
    let cols: Vec<&Vec<f64>> = rec.blocks.iter().filter(|b| b.sign == sign).flat_map(|b| b.columns.iter()).collect();
    Matrix::from_fn(rec.rows(), cols.len(), |i, j| cols[j][i])
}

/// Solves for a witness with every positive block at least `tol_strict`.
pub(crate) fn solve_record(mut rec: SystemRecord, tol_strict: f64) -> Result<Solved> {
    let sys = StrictSystem::new(
        rec.zhat.clone(),
        gather(&rec, BlockSign::Free),
        gather(&rec, BlockSign::Nonnegative),
        gather(&rec, BlockSign::Positive),
    )?;
    let out = strict_system_feasible(&sys, tol_strict)?;
    if out.status != StrictStatus::Infeasible {
        let mut cursors = [0usize; 3];
        for b in &mut rec.blocks {
            let (src, k) = match b.sign {
                BlockSign::Free => (&out.free, 0),
                BlockSign::Nonnegative => (&out.nonneg, 1),
                BlockSign::Positive => (&out.strict, 2),
            };
            let n = b.columns.len();
            b.values = src[cursors[k]..cursors[k] + n].to_vec();
            cursors[k] += n;
        }
    }
    Ok(Solved { status: out.status, margin: out.margin, record: rec })
}
