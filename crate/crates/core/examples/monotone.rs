//! Basis pursuit restricted to nondecreasing vectors. Plateaus of equal entries
//! merge their columns before the rank test.

use uniqcert::oracle::{bp_solve, BpSolution};
use uniqcert::reductions::{monotone_polyhedron, monotone_rank_condition};
use uniqcert::{certify, oracle, Matrix, MethodChoice, PaFunction, ProblemInstance, Tolerances};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = Matrix::from_nested(&[vec![1.0, 1.0, 0.0, 1.0, 2.0], vec![0.0, 1.0, 1.0, 1.0, 0.0]])?;
    let x_planted = [-1.0, 0.0, 0.0, 2.0, 2.0];
    let y = a.mul_vec(&x_planted)?;
    let inst = ProblemInstance::BpLike {
        objective: PaFunction::l1(5),
        a: a.clone(),
        y,
        polyhedron: monotone_polyhedron(5),
    };
    let tols = Tolerances::default();

    let BpSolution::Optimal { x, .. } = bp_solve(&inst)? else {
        return Err("no optimal solution".into());
    };
    let rank = monotone_rank_condition(&a, &x, tols.tol_active, tols.tol_rank)?;
    println!("x* = {:?}", x.iter().map(|v| (v * 1e9).round() / 1e9 + 0.0).collect::<Vec<_>>());
    println!("plateaus {:?}, merged rank test holds: {}", rank.plateaus, rank.holds);

    let cert = certify(&inst, &x, &tols, MethodChoice::Auto)?;
    let orc = oracle(&inst, &x, &tols)?;
    println!("certifier {:?}, oracle {:?}", cert.verdict, orc.verdict);
    Ok(())
}
