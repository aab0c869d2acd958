//! Fused LASSO `‖Ax - y‖² + λ₁‖x‖₁ + λ₂‖D₁x‖₁`, whose objective is a stack of two
//! composite ℓ₁ norms.
//!
//! A stationary candidate is built backwards: pick `x` and a subgradient `s`, make
//! `-s` the first row of `A`, and set `y = Ax - e₁/2` so that `2Aᵀ(Ax - y) = -s`.

use uniqcert::reductions::{d1_matrix, fused_lasso_objective};
use uniqcert::{certify, oracle, Loss, Matrix, MethodChoice, Polyhedron, ProblemInstance, Tolerances};

fn sign_or(v: f64, inside: f64) -> f64 {
    if v.abs() > 1e-12 {
        v.signum()
    } else {
        inside
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, l1, l2) = (6, 1.0, 0.5);
    let objective = fused_lasso_objective(n, l1, l2)?;
    let d1 = d1_matrix(n);
    let tols = Tolerances::default();

    let x = [0.0, 2.0, 2.0, 2.0, 0.0, -1.0];
    let dx = d1.mul_vec(&x)?;
    // 0.3 sits strictly inside [-1, 1]; 1.0 puts the zero entries on the boundary.
    for inside in [0.3, 1.0] {
        let u: Vec<f64> = x.iter().map(|v| sign_or(*v, inside)).collect();
        let t: Vec<f64> = dx.iter().map(|v| sign_or(*v, 0.3)).collect();
        let jump = d1.transpose().mul_vec(&t)?;
        let s: Vec<f64> = (0..n).map(|i| l1 * u[i] + l2 * jump[i]).collect();

        let mut rows = vec![s.iter().map(|v| -v).collect::<Vec<_>>()];
        rows.push(vec![1.0, 0.0, 1.0, 0.0, -1.0, 0.5]);
        rows.push(vec![0.0, 1.0, -1.0, 2.0, 0.0, 1.0]);
        let a = Matrix::from_nested(&rows)?;
        let mut y = a.mul_vec(&x)?;
        y[0] -= 0.5;

        let inst = ProblemInstance::LassoLike {
            loss: Loss::Quadratic,
            a,
            y,
            objective: objective.clone(),
            polyhedron: Polyhedron::whole_space(n),
        };
        let cert = certify(&inst, &x, &tols, MethodChoice::Auto)?;
        let orc = oracle(&inst, &x, &tols)?;
        println!("subgradient on zeros = {inside}: certifier {:?}, oracle {:?}", cert.verdict, orc.verdict);
        for c in &cert.conditions {
            println!("  {:<20} {:?}  {}", c.name, c.status, c.detail);
        }
    }
    Ok(())
}
