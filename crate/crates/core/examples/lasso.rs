//! LASSO with a quadratic loss: the soft-thresholded point is the unique minimizer,
//! and moving it off the threshold is caught as non-optimal.

use uniqcert::{certify, oracle, Loss, Matrix, MethodChoice, PaFunction, Polyhedron, ProblemInstance, Tolerances};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // ‖x - y‖² + ‖x‖₁ is minimized by shrinking each coordinate of y by 1/2.
    let inst = ProblemInstance::LassoLike {
        loss: Loss::Quadratic,
        a: Matrix::identity(2),
        y: vec![3.0, 0.2],
        objective: PaFunction::l1(2),
        polyhedron: Polyhedron::whole_space(2),
    };
    let tols = Tolerances::default();

    for x in [[2.5, 0.0], [2.4, 0.0]] {
        let cert = certify(&inst, &x, &tols, MethodChoice::Auto)?;
        let orc = oracle(&inst, &x, &tols)?;
        println!("x = {x:?}: certifier {:?}, oracle {:?}", cert.verdict, orc.verdict);
        if let Some(p) = orc.better_point {
            println!("  better point {p:?} with value {:.6}", inst.objective_value(&p)?);
        }
    }
    Ok(())
}
