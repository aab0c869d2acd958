//! Basis pursuit: solve `min ‖x‖₁ s.t. Ax = y`, then certify the solution and
//! re-check every recorded witness.
//!
//! ```text
//! cargo run --example bp_certificate
//! ```

use uniqcert::oracle::{bp_solve, BpSolution};
use uniqcert::{certify, Matrix, MethodChoice, PaFunction, Polyhedron, ProblemInstance, Tolerances};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = Matrix::from_nested(&[vec![1.0, 0.5, -1.0, 0.3], vec![0.0, 1.0, 1.0, 2.0]])?;
    let inst = ProblemInstance::BpLike {
        objective: PaFunction::l1(4),
        a,
        y: vec![1.0, 3.0],
        polyhedron: Polyhedron::whole_space(4),
    };

    let BpSolution::Optimal { x, value } = bp_solve(&inst)? else {
        return Err("no optimal solution".into());
    };
    println!("x* = {x:?}, ‖x*‖₁ = {value}");

    let cert = certify(&inst, &x, &Tolerances::default(), MethodChoice::Auto)?;
    println!("verdict: {:?}", cert.verdict);
    for c in &cert.conditions {
        println!("  {:<18} {:?}  {}", c.name, c.status, c.detail);
    }
    for (name, audit) in cert.audit() {
        println!("  audit {name}: residual {:.1e}, ok = {}", audit.residual, audit.ok);
    }
    Ok(())
}
