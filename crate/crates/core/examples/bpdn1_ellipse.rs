//! `min ‖x‖₁ s.t. ‖Ax - y‖² ≤ ε, x₁ + x₂ ≥ 2` with an elliptic loss ball: the
//! candidate `(1, 1)` is optimal but an edge of the ℓ₁ ball lies inside the
//! feasible set, so it is not unique.

use std::path::Path;

use uniqcert::cli::InstanceFile;
use uniqcert::{certify, check_feasibility, oracle, MethodChoice, Tolerances};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/ellipse.json");
    let file = InstanceFile::load(&path)?;
    let inst = file.instance()?;
    let x = file.x_star.clone();
    let tols = Tolerances::default();

    let feas = check_feasibility(&inst, &x, &tols)?;
    println!("{}: {}, branch {:?}", inst.family(), feas.summary(), feas.branch);

    let cert = certify(&inst, &x, &tols, MethodChoice::Auto)?;
    for c in &cert.conditions {
        println!("  {:<28} {:?}", c.name, c.status);
    }
    let orc = oracle(&inst, &x, &tols)?;
    println!("certifier {:?}, oracle {:?}, second point {:?}", cert.verdict, orc.verdict, orc.second_point);
    Ok(())
}
