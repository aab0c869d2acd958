//! Convex piecewise-affine functions and their local behaviour at a point.
//!
//! A function is either an explicit maximum of affine pieces, `max_i pᵢᵀx + γᵢ`, or a
//! composite ℓ₁ norm `‖Ex‖₁`. The composite form has `2^k` implicit pieces, so it keeps
//! its own active-set description instead of being expanded.

use serde::{Deserialize, Serialize};

use crate::dense::{dot, norm1, IndexSet, Matrix};
use crate::error::{dim_err, Error, Result};

/// Default tolerance for deciding which pieces are active.
pub const DEFAULT_TOL_ACTIVE: f64 = 1e-8;
/// Largest number of off-support rows expanded into explicit sign patterns.
pub const MAX_EXPANDED_ROWS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PaFunction {
    /// `max_i generators[i]·x + offsets[i]`
    Explicit { generators: Matrix, offsets: Vec<f64> },
    /// `‖map·x‖₁`
    CompositeL1 { map: Matrix },
}

impl PaFunction {
    pub fn explicit(generators: Matrix, offsets: Vec<f64>) -> Result<Self> {
        if generators.nrows() == 0 {
            return Err(Error::Input("explicit piecewise-affine function needs at least one piece".into()));
        }
        if generators.nrows() != offsets.len() {
            return dim_err(format!("{} pieces but {} offsets", generators.nrows(), offsets.len()));
        }
        if !generators.is_finite() || offsets.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("piecewise-affine data must be finite".into()));
        }
        Ok(PaFunction::Explicit { generators, offsets })
    }

    pub fn composite_l1(map: Matrix) -> Result<Self> {
        if !map.is_finite() {
            return Err(Error::Input("composite l1 map must be finite".into()));
        }
        Ok(PaFunction::CompositeL1 { map })
    }

    /// The plain ℓ₁ norm on `Rⁿ`.
    pub fn l1(n: usize) -> Self {
        PaFunction::CompositeL1 { map: Matrix::identity(n) }
    }

    /// Dimension of the argument.
    pub fn dim(&self) -> usize {
        match self {
            PaFunction::Explicit { generators, .. } => generators.ncols(),
            PaFunction::CompositeL1 { map } => map.ncols(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return dim_err(format!("point of length {} for a function on R^{}", x.len(), self.dim()));
        }
        Ok(match self {
            PaFunction::Explicit { generators, offsets } => generators
                .rows_iter()
                .zip(offsets)
                .map(|(p, g)| dot(p, x) + g)
                .fold(f64::NEG_INFINITY, f64::max),
            PaFunction::CompositeL1 { map } => map.mul_vec(x)?.iter().map(|v| v.abs()).sum(),
        })
    }

    /// Expands a composite ℓ₁ norm into its `2^k` sign pieces.
    pub fn to_explicit(&self) -> Result<PaFunction> {
        match self {
            PaFunction::Explicit { .. } => Ok(self.clone()),
            PaFunction::CompositeL1 { map } => {
                let k = map.nrows();
                if k > MAX_EXPANDED_ROWS {
                    return Err(Error::Size(format!("expanding {k} rows would create 2^{k} pieces")));
                }
                let act = L1Active {
                    support: IndexSet::empty(),
                    off_support: IndexSet::range(k),
                    signs: vec![],
                    subgradient_base: vec![0.0; map.ncols()],
                    off_rows: map.clone(),
                };
                let p = explicit_w_from_l1(&act)?;
                let n = p.nrows();
                PaFunction::explicit(p, vec![0.0; n])
            }
        }
    }

    /// Local data at `x`: the active pieces, or the ℓ₁ support decomposition.
    pub fn local(&self, x: &[f64], tol_active: f64) -> Result<LocalModel> {
        match self {
            PaFunction::Explicit { .. } => Ok(LocalModel::Pieces(active_explicit(self, x, tol_active)?.pieces)),
            PaFunction::CompositeL1 { map } => Ok(LocalModel::L1(active_l1(map, x, tol_active)?)),
        }
    }
}

/// Active pieces of an explicit function.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitActive {
    pub active: IndexSet,
    /// Generators of the active pieces, one per row.
    pub pieces: Matrix,
}

/// Pieces within `tol_active` of the maximum. Redundant generators are kept.
pub fn active_explicit(g: &PaFunction, x: &[f64], tol_active: f64) -> Result<ExplicitActive> {
    let PaFunction::Explicit { generators, offsets } = g else {
        return Err(Error::Unsupported("active_explicit needs an explicit function".into()));
    };
    let top = g.eval(x)?;
    let active: IndexSet = generators
        .rows_iter()
        .zip(offsets)
        .enumerate()
        .filter(|(_, (p, o))| dot(p, x) + *o >= top - tol_active)
        .map(|(i, _)| i)
        .collect();
    let pieces = generators.select_rows(&active)?;
    Ok(ExplicitActive { active, pieces })
}

/// Support decomposition of `‖E·‖₁` at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct L1Active {
    /// Rows with `|(Ex)ᵢ| > tol`.
    pub support: IndexSet,
    pub off_support: IndexSet,
    /// Signs of `Ex` on the support.
    pub signs: Vec<f64>,
    /// `E_Sᵀ sign(E_S x)`, shared by every active piece.
    pub subgradient_base: Vec<f64>,
    /// Rows of `E` off the support.
    pub off_rows: Matrix,
}

impl L1Active {
    /// The directional derivative `bᵀv + ‖E_{Sᶜ} v‖₁`.
    pub fn local_model(&self, v: &[f64]) -> Result<f64> {
        let off = if self.off_rows.nrows() == 0 { 0.0 } else { norm1(&self.off_rows.mul_vec(v)?) };
        Ok(dot(&self.subgradient_base, v) + off)
    }

    pub fn dim(&self) -> usize {
        self.subgradient_base.len()
    }
}

pub fn active_l1(map: &Matrix, x: &[f64], tol_active: f64) -> Result<L1Active> {
    let ex = map.mul_vec(x)?;
    let support: IndexSet = (0..ex.len()).filter(|&i| ex[i].abs() > tol_active).collect();
    let off_support = support.complement(ex.len());
    let signs: Vec<f64> = support.iter().map(|i| ex[i].signum()).collect();
    let subgradient_base = map.select_rows(&support)?.tr_mul_vec(&signs)?;
    let off_rows = map.select_rows(&off_support)?;
    Ok(L1Active { support, off_support, signs, subgradient_base, off_rows })
}

/// Explicit active generators `b + E_{Sᶜ}ᵀ s` for every sign vector `s`, in
/// lexicographic order with `+1` before `-1`.
pub fn explicit_w_from_l1(act: &L1Active) -> Result<Matrix> {
    let k = act.off_rows.nrows();
    if k > MAX_EXPANDED_ROWS {
        return Err(Error::Size(format!("{k} off-support rows exceed the expansion limit {MAX_EXPANDED_ROWS}")));
    }
    let n = act.dim();
    let mut out = Matrix::zeros(1 << k, n);
    for pattern in 0..(1usize << k) {
        for j in 0..n {
            let mut v = act.subgradient_base[j];
            for r in 0..k {
                let s = if pattern >> (k - 1 - r) & 1 == 0 { 1.0 } else { -1.0 };
                v += s * act.off_rows[(r, j)];
            }
            out[(pattern, j)] = v;
        }
    }
    Ok(out)
}

/// `Σ wᵢ‖Eᵢx‖₁` as a single composite ℓ₁ norm. Weights must be positive.
pub fn stack(parts: &[(f64, &Matrix)]) -> Result<PaFunction> {
    let Some((_, first)) = parts.first() else {
        return Err(Error::Input("stack needs at least one part".into()));
    };
    let n = first.ncols();
    let mut scaled = Vec::with_capacity(parts.len());
    for (w, e) in parts {
        if !(*w > 0.0) || !w.is_finite() {
            return Err(Error::Input(format!("stack weight {w} must be positive")));
        }
        scaled.push(e.scaled(*w));
    }
    let refs: Vec<&Matrix> = scaled.iter().collect();
    PaFunction::composite_l1(Matrix::vstack(&refs, n)?)
}

/// The gauge `max(0, max_i pᵢᵀx)` of the polytope with the given generators.
pub fn gauge_from_generators(generators: &Matrix) -> Result<PaFunction> {
    let n = generators.ncols();
    let p = Matrix::vstack(&[generators, &Matrix::zeros(1, n)], n)?;
    let rows = p.nrows();
    PaFunction::explicit(p, vec![0.0; rows])
}

/// First-order behaviour of a piecewise-affine function around a point.
#[derive(Clone, Debug, PartialEq)]
pub enum LocalModel {
    /// Active generators, one per row; the model is `max_i wᵢᵀv`.
    Pieces(Matrix),
    L1(L1Active),
}

impl LocalModel {
    pub fn eval(&self, v: &[f64]) -> Result<f64> {
        match self {
            LocalModel::Pieces(w) => Ok(w.mul_vec(v)?.into_iter().fold(f64::NEG_INFINITY, f64::max)),
            LocalModel::L1(a) => a.local_model(v),
        }
    }

    /// Active generators as explicit rows.
    pub fn pieces(&self) -> Result<Matrix> {
        match self {
            LocalModel::Pieces(w) => Ok(w.clone()),
            LocalModel::L1(a) => explicit_w_from_l1(a),
        }
    }
}
