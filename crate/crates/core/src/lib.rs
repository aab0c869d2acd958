//! Certificates of unique optimality for convex piecewise-affine problems.
//!
//! Given a problem instance and a feasible candidate `x*`, [`certify`] decides whether
//! `x*` is the unique minimizer by checking a rank condition on the active structure
//! together with a strictly feasible dual system. Every linear system is solved by the
//! built-in dense simplex, and holding conditions carry a witness that can be
//! re-substituted.
//!
//! Four problem families are supported:
//!
//! - basis-pursuit-like: `min g(x)` s.t. `Ax = y`, `x ∈ P`
//! - LASSO-like: `min f(Ax - y) + g(x)` s.t. `x ∈ P`
//! - loss-constrained: `min g(x)` s.t. `f(Ax - y) ≤ ε`, `x ∈ P`
//! - norm-constrained: `min f(Ax - y)` s.t. `gᵢ(x) ≤ ηᵢ`, `x ∈ P`
//!
//! where `g` is convex piecewise affine, `f` is smooth and strictly convex (or piecewise
//! affine, handled by reduction) and `P = {x : Cx ≥ d}`. The [`oracle`] module decides
//! the same question by brute-force linear programming and serves as a cross-check.

pub mod certify;
pub mod cli;
pub mod dense;
pub mod error;
pub mod model;
pub mod oracle;
pub mod pa;
pub mod reductions;
pub mod simplex;

pub use certify::{certify, certify_with, Certificate, CertifyOptions, ConditionStatus, MethodChoice, Verdict};
pub use dense::{IndexSet, Matrix};
pub use error::{Error, Result};
pub use model::{check_feasibility, Branch, Family, Loss, PaConstraint, Polyhedron, ProblemInstance, Tolerances};
pub use oracle::{oracle, OracleResult};
pub use pa::PaFunction;
