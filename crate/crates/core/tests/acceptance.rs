//! Acceptance suite. Each criterion prints one PASS/FAIL line; the test fails if any
//! criterion fails. All tolerances and counts are fixed here.

use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uniqcert::certify::{certify_with, BoundaryDual, CertifyOptions, ConstraintWeights};
use uniqcert::cli::InstanceFile;
use uniqcert::dense::{full_column_rank, IndexSet};
use uniqcert::oracle::generate::{generate, monotone_candidate, GenSpec, ObjectiveKind};
use uniqcert::oracle::{bp_solve, bp_unique, BpSolution};
use uniqcert::reductions::{d1_matrix, dantzig, monotone_polyhedron, monotone_rank_condition};
use uniqcert::simplex::{strict_system_feasible, Cmp, LpBuilder, LpOutcome, Sense, StrictStatus, StrictSystem};
use uniqcert::{
    certify, oracle, Branch, Certificate, ConditionStatus, Family, Matrix, MethodChoice, PaFunction, Polyhedron,
    ProblemInstance, Tolerances, Verdict,
};

const SECOND_POINT_TOL: f64 = 1e-7;
const SPAN_TOL: f64 = 1e-6;
const UNDETERMINED_RATE: f64 = 0.02;
const LP_VALUE_TOL: f64 = 1e-8;
const WITNESS_TOL: f64 = 1e-8;
const NONNEG_TOL: f64 = -1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

struct Suite {
    certificates: Vec<Certificate>,
    results: Vec<(usize, String, bool)>,
}

impl Suite {
    fn run(&mut self, id: usize, name: &str, limit: Option<Duration>, f: impl FnOnce(&mut Vec<Certificate>) -> Outcome) {
        let start = Instant::now();
        let out = f(&mut self.certificates);
        let elapsed = start.elapsed();
        let in_time = limit.map_or(true, |l| elapsed <= l);
        let pass = out.pass && in_time;
        let limit_text = limit.map(|l| format!(" limit {:.0}s", l.as_secs_f64())).unwrap_or_default();
        let line = format!(
            "criterion {id:>2}: {} {name}: {} [{:.2}s{limit_text}]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64()
        );
        let _ = writeln!(std::io::stdout(), "{line}");
        self.results.push((id, name.into(), pass));
    }
}

fn corpus(name: &str) -> (ProblemInstance, Vec<f64>) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    let file = InstanceFile::load(&path).unwrap();
    (file.instance().unwrap(), file.x_star)
}

fn tols() -> Tolerances {
    Tolerances::default()
}

/// Counts of a certifier-versus-oracle run.
#[derive(Default)]
struct Tally {
    total: usize,
    agree: usize,
    disagree: Vec<String>,
    undetermined: usize,
    errors: Vec<String>,
}

impl Tally {
    fn record(&mut self, label: String, inst: &ProblemInstance, x: &[f64], certs: &mut Vec<Certificate>) -> Option<Certificate> {
        self.total += 1;
        let cert = match certify(inst, x, &tols(), MethodChoice::Auto) {
            Ok(c) => c,
            Err(e) => {
                self.errors.push(format!("{label}: certifier {e}"));
                return None;
            }
        };
        let orc = match oracle(inst, x, &tols()) {
            Ok(o) => o,
            Err(e) => {
                self.errors.push(format!("{label}: oracle {e}"));
                return None;
            }
        };
        if cert.verdict == Verdict::Undetermined {
            self.undetermined += 1;
        } else if cert.verdict == orc.verdict {
            self.agree += 1;
        } else {
            self.disagree.push(format!("{label}: certifier {:?} oracle {:?}", cert.verdict, orc.verdict));
        }
        certs.push(cert.clone());
        Some(cert)
    }

    fn decided(&self) -> usize {
        self.total - self.undetermined - self.errors.len()
    }

    fn summary(&self) -> String {
        let mut s = format!("{}/{} agree, {} undetermined, {} errors", self.agree, self.decided(), self.undetermined, self.errors.len());
        if let Some(d) = self.disagree.first().or(self.errors.first()) {
            s += &format!("; first problem: {d}");
        }
        s
    }

    fn clean(&self) -> bool {
        self.disagree.is_empty() && self.errors.is_empty()
    }
}

fn random_spec(rng: &mut ChaCha8Rng, family: Family, seed: u64) -> GenSpec {
    GenSpec {
        family,
        n: rng.gen_range(2..=6),
        m: rng.gen_range(1..=4),
        p: rng.gen_range(0..=4),
        k: rng.gen_range(1..=6),
        constraints: rng.gen_range(1..=2),
        range: rng.gen_range(1..=3),
        objective: ObjectiveKind::Mixed,
        branch: None,
        seed,
    }
}

fn criterion_1(certs: &mut Vec<Certificate>) -> Outcome {
    let (inst, x) = corpus("ellipse.json");
    let cert = certify(&inst, &x, &tols(), MethodChoice::Auto).unwrap();
    let orc = oracle(&inst, &x, &tols()).unwrap();
    let p = orc.second_point.clone().unwrap_or_default();
    let on_set = p.len() == 2 && (p[0] + p[1] - 2.0).abs() <= SECOND_POINT_TOL && p.iter().all(|v| *v >= -SECOND_POINT_TOL);
    let pass = cert.verdict == Verdict::NotUnique && orc.verdict == Verdict::NotUnique && on_set && cert.branch == Some(Branch::Interior);
    certs.push(cert.clone());
    Outcome { pass, detail: format!("certifier {:?}, oracle {:?}, second point {p:?}", cert.verdict, orc.verdict) }
}

fn criterion_2(certs: &mut Vec<Certificate>) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for name in ["l1_ball.json", "l1_ball_origin.json"] {
        let (inst, x) = corpus(name);
        let cert = certify(&inst, &x, &tols(), MethodChoice::Auto).unwrap();
        let orc = oracle(&inst, &x, &tols()).unwrap();
        let span = orc.spans.first().copied().unwrap_or(f64::NAN);
        pass &= cert.verdict == Verdict::NotUnique && orc.verdict == Verdict::NotUnique && (span - 1.0).abs() <= SPAN_TOL;
        detail.push(format!("x*={x:?}: {:?}/{:?} span {span:.9}", cert.verdict, orc.verdict));
        certs.push(cert);
    }
    Outcome { pass, detail: detail.join("; ") }
}

fn criterion_3(certs: &mut Vec<Certificate>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tally = Tally::default();
    for i in 0..500 {
        let spec = random_spec(&mut rng, Family::Bp, 3_000 + i);
        let g = generate(&spec).unwrap();
        tally.record(format!("seed {}", spec.seed), &g.instance, &g.x_star, certs);
    }
    let rate = tally.undetermined as f64 / tally.total as f64;
    Outcome { pass: tally.clean() && rate <= UNDETERMINED_RATE, detail: tally.summary() }
}

fn criterion_4(certs: &mut Vec<Certificate>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut tally = Tally::default();
    let mut optimality_fails = 0;
    for i in 0..300 {
        let spec = random_spec(&mut rng, Family::Lasso, 4_000 + i);
        let g = generate(&spec).unwrap();
        if let Some(cert) = tally.record(format!("seed {}", spec.seed), &g.instance, &g.x_star, certs) {
            if cert.condition("lasso.optimality").map(|c| c.status) != Some(ConditionStatus::Holds) {
                optimality_fails += 1;
            }
        }
    }
    Outcome {
        pass: tally.clean() && optimality_fails == 0,
        detail: format!("{}; optimality fails on {optimality_fails}", tally.summary()),
    }
}

fn criterion_5(certs: &mut Vec<Certificate>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut one = Tally::default();
    let mut wrong_branch = 0;
    for (i, branch) in (0..300).map(|i| (i, if i < 150 { Branch::Interior } else { Branch::Boundary })) {
        let spec = GenSpec { branch: Some(branch), ..random_spec(&mut rng, Family::Bpdn1, 5_000 + i) };
        let g = generate(&spec).unwrap();
        if let Some(cert) = one.record(format!("bpdn1 seed {}", spec.seed), &g.instance, &g.x_star, certs) {
            wrong_branch += usize::from(cert.branch != Some(branch));
        }
    }
    let mut two = Tally::default();
    for i in 0..300 {
        let spec = random_spec(&mut rng, Family::Bpdn2, 5_500 + i);
        let g = generate(&spec).unwrap();
        two.record(format!("bpdn2 seed {}", spec.seed), &g.instance, &g.x_star, certs);
    }
    Outcome {
        pass: one.clean() && two.clean() && wrong_branch == 0,
        detail: format!("loss-constrained {}; norm-constrained {}", one.summary(), two.summary()),
    }
}

fn criterion_6(certs: &mut Vec<Certificate>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = Vec::new();
    let mut verdicts = [0usize; 4];
    for i in 0..200 {
        let spec = random_spec(&mut rng, Family::Bp, 6_000 + i);
        let g = generate(&spec).unwrap();
        let plain = CertifyOptions::new(tols(), MethodChoice::Generic);
        let normalized = CertifyOptions { normalized: true, ..plain };
        let a = certify_with(&g.instance, &g.x_star, &plain).unwrap();
        let b = certify_with(&g.instance, &g.x_star, &normalized).unwrap();
        verdicts[a.verdict as usize] += 1;
        if a.verdict != b.verdict {
            mismatches.push(format!("seed {}: {:?} vs {:?}", spec.seed, a.verdict, b.verdict));
        }
        certs.push(a);
        certs.push(b);
    }
    Outcome {
        pass: mismatches.is_empty(),
        detail: format!("{} mismatches of 200 (verdict counts {verdicts:?}) {}", mismatches.len(), mismatches.first().cloned().unwrap_or_default()),
    }
}

fn criterion_7(certs: &mut Vec<Certificate>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mismatches = Vec::new();
    let mut count = 0;
    let mut max_off = 0;
    let mut seed = 7_000;
    while count < 100 {
        seed += 1;
        let spec = GenSpec { objective: ObjectiveKind::Composite, k: rng.gen_range(1..=10), ..random_spec(&mut rng, Family::Bp, seed) };
        let g = generate(&spec).unwrap();
        let ProblemInstance::BpLike { objective: PaFunction::CompositeL1 { map }, .. } = &g.instance else { unreachable!() };
        let off = map.mul_vec(&g.x_star).unwrap().iter().filter(|v| v.abs() <= tols().tol_active).count();
        if off > 10 {
            continue;
        }
        count += 1;
        max_off = max_off.max(off);
        let l1 = certify(&g.instance, &g.x_star, &tols(), MethodChoice::L1).unwrap();
        let generic = certify(&g.instance, &g.x_star, &tols(), MethodChoice::Generic).unwrap();
        if l1.verdict != generic.verdict {
            mismatches.push(format!("seed {seed}: {:?} vs {:?}", l1.verdict, generic.verdict));
        }
        certs.push(l1);
        certs.push(generic);
    }
    Outcome {
        pass: mismatches.is_empty(),
        detail: format!("{} mismatches of {count}, largest off-support {max_off} {}", mismatches.len(), mismatches.first().cloned().unwrap_or_default()),
    }
}

fn criterion_8(certs: &mut Vec<Certificate>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let t = tols();
    let mut disagreements = Vec::new();
    let mut holds = 0;
    let mut evaluated = 0;
    for i in 0..200 {
        let n = rng.gen_range(2..=8);
        let m = rng.gen_range(1..=n);
        let x = monotone_candidate(&mut rng, n, 2);
        let a = Matrix::from_fn(m, n, |_, _| rng.gen_range(-3..=3) as f64);
        let special = monotone_rank_condition(&a, &x, t.tol_active, t.tol_rank).unwrap().holds;
        let support: IndexSet = (0..n).filter(|&j| x[j].abs() > t.tol_active).collect();
        let poly = monotone_polyhedron(n);
        let (alpha, _) = poly.active_rows(&x, t.tol_active).unwrap();
        let d1 = d1_matrix(n);
        let stacked = Matrix::vstack(
            &[&a.select_cols(&support).unwrap(), &d1.select_rows(&alpha).unwrap().select_cols(&support).unwrap()],
            support.len(),
        )
        .unwrap();
        let direct = full_column_rank(&stacked, t.tol_rank).unwrap();
        let y = a.mul_vec(&x).unwrap();
        let inst = ProblemInstance::BpLike { objective: PaFunction::l1(n), a, y, polyhedron: poly };
        let cert = certify(&inst, &x, &t, MethodChoice::Auto).unwrap();
        // The certifier stops before the kernel test when the candidate is not optimal.
        let engine = cert.condition("bp.kernel").map(|c| c.status == ConditionStatus::Holds);
        evaluated += usize::from(engine.is_some());
        holds += usize::from(special);
        if special != direct || engine.is_some_and(|e| e != special) {
            disagreements.push(format!("case {i} x={x:?}: merged {special}, stacked {direct}, certifier {engine:?}"));
        }
        certs.push(cert);
    }
    Outcome {
        pass: disagreements.is_empty(),
        detail: format!(
            "{} disagreements of 200 ({holds} hold, {evaluated} also checked by the certifier) {}",
            disagreements.len(), disagreements.first().cloned().unwrap_or_default()),
    }
}

fn criterion_9(certs: &mut Vec<Certificate>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut membership_errors = 0;
    let mut tally = Tally::default();
    for i in 0..100 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=4);
        let a = Matrix::from_fn(m, n, |_, _| rng.gen_range(-3..=3) as f64);
        let y: Vec<f64> = (0..m).map(|_| rng.gen_range(-3..=3) as f64).collect();
        let eps = [0.5, 1.0, 2.0, 3.0][rng.gen_range(0..4)];
        let inst = dantzig(&a, &y, eps).unwrap();
        let poly = inst.polyhedron();
        for _ in 0..50 {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let r: Vec<f64> = a.mul_vec(&x).unwrap().iter().zip(&y).map(|(p, q)| p - q).collect();
            let inside = a.tr_mul_vec(&r).unwrap().iter().all(|v| v.abs() <= eps);
            let member = poly.slack(&x).unwrap().iter().all(|s| *s >= 0.0);
            membership_errors += usize::from(inside != member);
        }
        let BpSolution::Optimal { x, .. } = bp_solve(&inst).unwrap() else {
            tally.errors.push(format!("case {i}: no optimum"));
            continue;
        };
        tally.total += 1;
        let cert = certify(&inst, &x, &tols(), MethodChoice::Auto).unwrap();
        let orc = bp_unique(&inst, &x, &tols()).unwrap();
        if cert.verdict == Verdict::Undetermined {
            tally.undetermined += 1;
        } else if cert.verdict == orc.verdict {
            tally.agree += 1;
        } else {
            tally.disagree.push(format!("case {i}: {:?} vs {:?}", cert.verdict, orc.verdict));
        }
        certs.push(cert);
    }
    Outcome {
        pass: membership_errors == 0 && tally.clean(),
        detail: format!("{membership_errors} membership errors in 5000 points; {}", tally.summary()),
    }
}

fn choose(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    for j in start..n {
        current.push(j);
        choose(n, k, j + 1, current, out);
        current.pop();
    }
}

/// Best objective over basic feasible solutions of `M z = b`, `z ≥ 0`.
fn vertex_enumeration(m: &[Vec<f64>], b: &[f64], c: &[f64], maximize: bool) -> Option<f64> {
    // Drop rows dependent on earlier ones; the systems are consistent by construction.
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..m.len() {
        let trial: Vec<usize> = keep.iter().copied().chain([i]).collect();
        let sub = nalgebra::DMatrix::from_fn(trial.len(), c.len(), |r, j| m[trial[r]][j]);
        if sub.rank(1e-9) == trial.len() {
            keep.push(i);
        }
    }
    let m: Vec<Vec<f64>> = keep.iter().map(|&i| m[i].clone()).collect();
    let b: Vec<f64> = keep.iter().map(|&i| b[i]).collect();
    let rows = m.len();
    let cols = c.len();
    let mut subsets = Vec::new();
    choose(cols, rows, 0, &mut Vec::new(), &mut subsets);
    let mut best: Option<f64> = None;
    for s in subsets {
        let basis = nalgebra::DMatrix::from_fn(rows, rows, |i, j| m[i][s[j]]);
        let lu = basis.clone().lu();
        if lu.determinant().abs() < 1e-9 {
            continue;
        }
        let Some(z) = lu.solve(&nalgebra::DVector::from_column_slice(&b)) else { continue };
        if z.iter().any(|v| *v < -1e-9) {
            continue;
        }
        let value: f64 = s.iter().zip(z.iter()).map(|(j, v)| c[*j] * v).sum();
        best = Some(match best {
            None => value,
            Some(b) if maximize => b.max(value),
            Some(b) => b.min(value),
        });
    }
    best
}

fn criterion_10(_: &mut Vec<Certificate>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut lp_errors = Vec::new();
    let mut worst = 0.0f64;
    for case in 0..200 {
        let n = rng.gen_range(1..=8);
        let le_rows = rng.gen_range(0..=2);
        let eq_rows = rng.gen_range(0..=1);
        let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=1) as f64).collect();
        let mut rows: Vec<(Vec<f64>, Cmp, f64)> = Vec::new();
        for _ in 0..le_rows {
            let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-3..=3) as f64).collect();
            let rhs = g.iter().zip(&x0).map(|(a, b)| a * b).sum::<f64>() + rng.gen_range(0..=2) as f64;
            rows.push((g, Cmp::Le, rhs));
        }
        for _ in 0..eq_rows {
            let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-3..=3) as f64).collect();
            let rhs = g.iter().zip(&x0).map(|(a, b)| a * b).sum::<f64>();
            rows.push((g, Cmp::Eq, rhs));
        }
        rows.push((vec![1.0; n], Cmp::Le, x0.iter().sum::<f64>() + rng.gen_range(1..=5) as f64));
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-3..=3) as f64).collect();
        let maximize = rng.gen_bool(0.5);

        let mut lp = LpBuilder::new();
        lp.vars(n, 0.0, f64::INFINITY);
        for (j, cj) in c.iter().enumerate() {
            lp.set_objective(j, *cj);
        }
        for (g, cmp, rhs) in &rows {
            lp.row(g.iter().copied().enumerate().collect(), *cmp, *rhs);
        }
        let sense = if maximize { Sense::Maximize } else { Sense::Minimize };
        let simplex = match lp.solve(sense).unwrap() {
            LpOutcome::Optimal { value, .. } => value,
            other => {
                lp_errors.push(format!("case {case}: {other:?}"));
                continue;
            }
        };

        let slacks: Vec<usize> = rows.iter().enumerate().filter(|(_, r)| r.1 == Cmp::Le).map(|(i, _)| i).collect();
        let width = n + slacks.len();
        let mut std_rows = Vec::new();
        let mut rhs = Vec::new();
        for (i, (g, _, b)) in rows.iter().enumerate() {
            let mut r = g.clone();
            r.resize(width, 0.0);
            if let Some(k) = slacks.iter().position(|s| *s == i) {
                r[n + k] = 1.0;
            }
            std_rows.push(r);
            rhs.push(*b);
        }
        let mut cost = c.clone();
        cost.resize(width, 0.0);
        let Some(brute) = vertex_enumeration(&std_rows, &rhs, &cost, maximize) else {
            lp_errors.push(format!("case {case}: no vertex found"));
            continue;
        };
        let err = (simplex - brute).abs();
        worst = worst.max(err);
        if err > LP_VALUE_TOL * brute.abs().max(1.0) {
            lp_errors.push(format!("case {case}: simplex {simplex} vs vertices {brute}"));
        }
    }

    let mut strict_errors = Vec::new();
    for case in 0..200 {
        let feasible = case < 100;
        let rows = rng.gen_range(2..=5);
        let (nf, ng, nh) = (rng.gen_range(0..=2), rng.gen_range(0..=3), rng.gen_range(1..=3));
        let rand_col = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..rows).map(|_| rng.gen_range(-2.0..2.0)).collect() };
        let (mut f, mut g, mut h): (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>) = (vec![], vec![], vec![]);
        let zhat: Vec<f64>;
        if feasible {
            f = (0..nf).map(|_| rand_col(&mut rng)).collect();
            g = (0..ng).map(|_| rand_col(&mut rng)).collect();
            h = (0..nh).map(|_| rand_col(&mut rng)).collect();
            let mut z = vec![0.0; rows];
            for (cols, lo, hi) in [(&f, -2.0, 2.0), (&g, 0.0, 2.0), (&h, 0.2, 2.0)] {
                for col in cols.iter() {
                    let w: f64 = rng.gen_range(lo..hi);
                    for (zi, ci) in z.iter_mut().zip(col) {
                        *zi -= w * ci;
                    }
                }
            }
            zhat = z;
        } else {
            // A separating vector `s` with sᵀF = 0, sᵀG ≥ 0, sᵀH > 0 and sᵀẑ ≥ 0.
            let s = rand_col(&mut rng);
            let ss: f64 = s.iter().map(|v| v * v).sum();
            let dot = |a: &[f64]| a.iter().zip(&s).map(|(x, y)| x * y).sum::<f64>();
            let project = |mut v: Vec<f64>| {
                let t = dot(&v) / ss;
                v.iter_mut().zip(&s).for_each(|(vi, si)| *vi -= t * si);
                v
            };
            let orient = |mut v: Vec<f64>, strict: bool| {
                let mut d = dot(&v);
                if strict && d.abs() < 0.1 {
                    v.iter_mut().zip(&s).for_each(|(vi, si)| *vi += 0.5 * si);
                    d = dot(&v);
                }
                if d < 0.0 {
                    v.iter_mut().for_each(|vi| *vi = -*vi);
                }
                v
            };
            for _ in 0..nf {
                let c = rand_col(&mut rng);
                f.push(project(c));
            }
            for _ in 0..ng {
                let c = rand_col(&mut rng);
                g.push(orient(c, false));
            }
            for _ in 0..nh {
                let c = rand_col(&mut rng);
                h.push(orient(c, true));
            }
            let z = rand_col(&mut rng);
            zhat = if rng.gen_bool(0.5) { project(z) } else { orient(z, true) };
        }
        let as_matrix = |cols: &Vec<Vec<f64>>| Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i]);
        let sys = StrictSystem::new(zhat, as_matrix(&f), as_matrix(&g), as_matrix(&h)).unwrap();
        let out = strict_system_feasible(&sys, tols().tol_strict).unwrap();
        let expected = if feasible { StrictStatus::Feasible } else { StrictStatus::Infeasible };
        let witness_ok = !feasible
            || (out.residual <= WITNESS_TOL
                && out.strict.iter().all(|v| *v >= tols().tol_strict)
                && out.nonneg.iter().all(|v| *v >= NONNEG_TOL));
        if out.status != expected || !witness_ok {
            strict_errors.push(format!("case {case}: expected {expected:?}, got {:?} margin {:?}", out.status, out.margin));
        }
    }
    Outcome {
        pass: lp_errors.is_empty() && strict_errors.is_empty(),
        detail: format!(
            "{} LP errors of 200 (worst gap {worst:.1e}), {} strict-system errors of 200 {}",
            lp_errors.len(),
            strict_errors.len(),
            lp_errors.first().or(strict_errors.first()).cloned().unwrap_or_default()
        ),
    }
}

fn criterion_11(certs: &mut Vec<Certificate>) -> Outcome {
    let mut checked = 0;
    let mut violations = Vec::new();
    for cert in certs.iter() {
        for cond in cert.conditions.iter().filter(|c| c.status == ConditionStatus::Holds) {
            let Some(sys) = &cond.system else { continue };
            checked += 1;
            let audit = sys.audit(cert.tolerances.tol_strict);
            let ok = audit.ok
                && audit.residual <= WITNESS_TOL
                && audit.min_positive.map_or(true, |m| m >= cert.tolerances.tol_strict * (1.0 - 1e-9))
                && audit.min_nonnegative.map_or(true, |m| m >= NONNEG_TOL);
            if !ok {
                violations.push(format!("{} ({}): {audit:?}", cond.name, cert.family));
            }
        }
    }
    Outcome {
        pass: violations.is_empty() && checked > 0,
        detail: format!("{checked} witnesses from {} certificates, {} violations {}", certs.len(), violations.len(), violations.first().cloned().unwrap_or_default()),
    }
}

#[test]
fn acceptance() {
    let mut suite = Suite { certificates: Vec::new(), results: Vec::new() };
    let secs = |s| Some(Duration::from_secs(s));
    suite.run(1, "ellipse counterexample", secs(1), criterion_1);
    suite.run(2, "l1-ball counterexample", secs(1), criterion_2);
    suite.run(3, "basis pursuit vs oracle, 500 instances", secs(60), criterion_3);
    suite.run(4, "LASSO vs oracle, 300 instances", secs(60), criterion_4);
    suite.run(5, "loss- and norm-constrained vs oracle, 600 instances", secs(120), criterion_5);
    suite.run(6, "plain vs normalized strict systems, 200 instances", None, criterion_6);
    suite.run(7, "support decomposition vs expansion, 100 instances", None, criterion_7);
    suite.run(8, "monotone rank condition, 200 candidates", None, criterion_8);
    suite.run(9, "Dantzig selector reduction, 100 instances", None, criterion_9);
    suite.run(10, "LP core and strict systems", None, criterion_10);
    suite.run(11, "witness audit", None, criterion_11);
    let failed: Vec<_> = suite.results.iter().filter(|r| !r.2).map(|r| format!("{} {}", r.0, r.1)).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn boundary_dual_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..100 {
        let spec = GenSpec { branch: Some(Branch::Boundary), ..random_spec(&mut rng, Family::Bpdn1, 12_000 + i) };
        let g = generate(&spec).unwrap();
        let scaled = CertifyOptions::new(tols(), MethodChoice::Auto);
        let plain = CertifyOptions { boundary_dual: BoundaryDual::Unnormalized, ..scaled };
        let a = certify_with(&g.instance, &g.x_star, &scaled).unwrap();
        let b = certify_with(&g.instance, &g.x_star, &plain).unwrap();
        assert_eq!(a.verdict, b.verdict, "seed {}", spec.seed);
    }
}

/// Per-block normalization only adds constraints to the strict system, so it can turn
/// a unique verdict into a non-unique one but never the reverse.
#[test]
fn per_block_weights_are_stricter() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut differ = 0;
    for i in 0..100 {
        let spec = GenSpec { constraints: 2, ..random_spec(&mut rng, Family::Bpdn2, 13_000 + i) };
        let g = generate(&spec).unwrap();
        let plain = CertifyOptions::new(tols(), MethodChoice::Auto);
        let per_block = CertifyOptions { constraint_weights: ConstraintWeights::PerBlock, ..plain };
        let a = certify_with(&g.instance, &g.x_star, &plain).unwrap();
        let b = certify_with(&g.instance, &g.x_star, &per_block).unwrap();
        if b.verdict == Verdict::Unique {
            assert_eq!(a.verdict, Verdict::Unique, "seed {}", spec.seed);
        }
        differ += usize::from(a.verdict != b.verdict);
    }
    assert!(differ > 0, "expected per-block weights to reject some unique candidates");
}

#[test]
fn whole_space_polyhedron_is_accepted() {
    let inst = ProblemInstance::BpLike {
        objective: PaFunction::l1(2),
        a: Matrix::from_nested(&[vec![2.0, 1.0]]).unwrap(),
        y: vec![2.0],
        polyhedron: Polyhedron::whole_space(2),
    };
    assert_eq!(certify(&inst, &[1.0, 0.0], &tols(), MethodChoice::Auto).unwrap().verdict, Verdict::Unique);
}
