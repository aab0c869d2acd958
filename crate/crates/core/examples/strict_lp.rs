//! Feasibility of `ẑ + Fa + Gb + Hc = 0` with `b ≥ 0` and `c > 0`, decided by the
//! margin LP. An infeasible system comes with no witness.

use uniqcert::simplex::{strict_system_feasible, StrictSystem, DEFAULT_TOL_STRICT};
use uniqcert::Matrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = Matrix::from_nested(&[vec![1.0, -1.0], vec![1.0, 1.0]])?;
    let cases = [("feasible", vec![0.0, -2.0]), ("infeasible", vec![0.0, 1.0])];
    for (label, zhat) in cases {
        let sys = StrictSystem::new(zhat, Matrix::zeros(2, 0), Matrix::zeros(2, 0), h.clone())?;
        let out = strict_system_feasible(&sys, DEFAULT_TOL_STRICT)?;
        println!("{label}: {:?}, margin {:?}, c = {:?}", out.status, out.margin, out.strict);
        if out.strict.len() == 2 {
            println!("  residual {:.1e}", sys.residual(&out.free, &out.nonneg, &out.strict)?);
        }
    }
    Ok(())
}
