//! Cross-checks the certifier against the LP oracle on generated instances of
//! every family and prints an agreement table.

use uniqcert::oracle::generate::{generate, GenSpec};
use uniqcert::{certify, oracle, Family, MethodChoice, Tolerances, Verdict};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tols = Tolerances::default();
    println!("{:<6} {:>6} {:>6} {:>10} {:>9}", "family", "unique", "not", "undecided", "disagree");
    for family in [Family::Bp, Family::Lasso, Family::Bpdn1, Family::Bpdn2] {
        let (mut unique, mut not, mut undecided, mut disagree) = (0, 0, 0, 0);
        for seed in 0..100 {
            let g = generate(&GenSpec { n: 5, m: 3, p: 2, ..GenSpec::new(family, seed) })?;
            let c = certify(&g.instance, &g.x_star, &tols, MethodChoice::Auto)?.verdict;
            let o = oracle(&g.instance, &g.x_star, &tols)?.verdict;
            match (c, o) {
                (Verdict::Undetermined, _) => undecided += 1,
                (c, o) if c != o => disagree += 1,
                (Verdict::Unique, _) => unique += 1,
                _ => not += 1,
            }
        }
        println!("{:<6} {unique:>6} {not:>6} {undecided:>10} {disagree:>9}", family.to_string());
    }
    Ok(())
}
