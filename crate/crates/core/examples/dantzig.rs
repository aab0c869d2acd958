//! The Dantzig selector `min ‖x‖₁ s.t. ‖Aᵀ(Ax - y)‖∞ ≤ ε` rewritten as basis pursuit
//! over a polyhedron.

use uniqcert::oracle::{bp_solve, BpSolution};
use uniqcert::reductions::dantzig;
use uniqcert::{certify, oracle, Matrix, MethodChoice, Tolerances};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = Matrix::from_nested(&[vec![1.0, 0.3, 0.0], vec![0.2, 1.0, 0.5], vec![0.0, 0.4, 1.0]])?;
    let y = [2.0, 0.5, 0.1];
    let tols = Tolerances::default();

    for eps in [0.1, 0.5, 1.5] {
        let inst = dantzig(&a, &y, eps)?;
        let BpSolution::Optimal { x, value } = bp_solve(&inst)? else {
            println!("ε = {eps}: no optimum");
            continue;
        };
        let cert = certify(&inst, &x, &tols, MethodChoice::Auto)?;
        let orc = oracle(&inst, &x, &tols)?;
        println!(
            "ε = {eps}: x = {:?}, ‖x‖₁ = {value:.4}, certifier {:?}, oracle {:?}",
            x.iter().map(|v| (v * 1e6).round() / 1e6).collect::<Vec<_>>(),
            cert.verdict,
            orc.verdict
        );
    }
    Ok(())
}
