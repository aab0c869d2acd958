//! `min ‖Ax - y‖² s.t. ‖x‖₁ ≤ 1, x₁ + x₂ ≤ 0`. Whether the ℓ₁ constraint is tight
//! decides nothing on its own: both candidates below are optimal, and neither is
//! the unique solution.

use std::path::Path;

use uniqcert::cli::InstanceFile;
use uniqcert::{certify, oracle, MethodChoice, Tolerances};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tols = Tolerances::default();
    for name in ["l1_ball.json", "l1_ball_origin.json"] {
        let file = InstanceFile::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name))?;
        let inst = file.instance()?;
        let cert = certify(&inst, &file.x_star, &tols, MethodChoice::Auto)?;
        let orc = oracle(&inst, &file.x_star, &tols)?;
        println!("{name}: x = {:?}", file.x_star);
        println!("  tight constraints {:?}", cert.tight_constraints);
        for c in &cert.conditions {
            println!("  {:<20} {:?}  {}", c.name, c.status, c.detail);
        }
        println!("  oracle {:?}, second point {:?}", orc.verdict, orc.second_point);
    }
    Ok(())
}
