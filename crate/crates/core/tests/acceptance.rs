//! One line per acceptance criterion. Every check feeding a criterion runs in
//! exact mode (residuals must be literally zero) and again in float mode at
//! the default tolerance.

use std::process::ExitCode;

use skewtorsion::scalar::DEFAULT_TOL;
use skewtorsion::verify::{run_criterion, Status};
use skewtorsion::Mode;

const TITLES: [&str; 13] = [
    "stabilizer dimensions (G2 14, Gray 8, 3-(a,d)-Sasaki n=2 13, Sasaki n=3 9)",
    "(KxK)/K family: torsion, curvature and holonomy",
    "canonical holonomy equals span [m,m]_h",
    "Casimir of so(n) is (n-1) Id for n = 3..8",
    "curvature spaces so(3) 6, su(3) 1, so(3)_irr 0",
    "squashed S7: parallel torsion, c = -24, Ricci constants, stabilizer, holonomy, flat auxiliary connection",
    "G2 cross product identities",
    "Gray normalization constants on flag and CP3",
    "transvection algebra of S3xS3",
    "dimension 3: curvature formula and flat case",
    "Sasaki Stiefel manifold: structure, curvature relation, holonomy inclusion",
    "splitting layer: admissibility, submersion identities, decomposability",
    "property suites: Leibniz, commutator law, curvature forms, Bianchi",
];

fn main() -> ExitCode {
    let seed = 0;
    let mut failed = 0;
    for (k, title) in TITLES.iter().enumerate() {
        let crit = k as u8 + 1;
        let exact = run_criterion(crit, Mode::Exact, seed, DEFAULT_TOL);
        let float = run_criterion(crit, Mode::Float, seed, DEFAULT_TOL);
        let bad: Vec<String> = exact
            .checks
            .iter()
            .map(|c| (c, "exact"))
            .chain(float.checks.iter().map(|c| (c, "float")))
            .filter(|(c, _)| c.status == Status::Fail)
            .map(|(c, m)| format!("{} [{m}]: residual {:.3e} {}", c.id, c.residual, c.detail))
            .collect();
        let ok = bad.is_empty() && !exact.checks.is_empty();
        println!(
            "criterion {crit:>2}: {} -- {title} ({} checks, exact + float)",
            if ok { "PASS" } else { "FAIL" },
            exact.checks.len()
        );
        for b in &bad {
            println!("    {b}");
        }
        if !ok {
            failed += 1;
        }
    }
    println!("acceptance: {}/{} criteria passed", TITLES.len() - failed, TITLES.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
