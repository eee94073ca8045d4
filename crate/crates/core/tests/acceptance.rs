//! One line per acceptance criterion for the reference family. Tolerances are
//! fixed inside `gasfold::oracle::checks`; the process exits nonzero if any
//! line fails.

use gasfold::oracle::checks::{self, CheckOutcome, SuiteConfig};
use gasfold::singularity::caustic_point;
use gasfold::{Branch, Family};

fn line(n: usize, c: &CheckOutcome) -> String {
    let budget = c
        .time_limit
        .map(|l| format!(" budget={:.0}s", l.as_secs_f64()))
        .unwrap_or_default();
    let mut s = format!(
        "[{}] {n:>2} {:<18} worst={:.3e} tol={:.0e} time={:.3}s{budget} | {}",
        if c.passed { "PASS" } else { "FAIL" },
        c.id,
        c.worst,
        c.tolerance,
        c.elapsed.as_secs_f64(),
        c.detail
    );
    for (k, v) in &c.metrics {
        s.push_str(&format!(" {k}={v:.6e}"));
    }
    s
}

fn main() {
    let fam = Family::reference();
    let cfg = SuiteConfig::default();
    let outcomes = checks::run_all(&fam, &fam.hm, &cfg);
    assert_eq!(outcomes.len(), 11);
    println!("\nrunning acceptance criteria");
    let mut failed = Vec::new();
    for (i, c) in outcomes.iter().enumerate() {
        println!("{}", line(i + 1, c));
        if !c.passed {
            failed.push(c.id);
        }
    }

    // worked caustic point at rho = 1 on the plus branch
    let p = caustic_point(&fam, 1.0, Branch::Plus).unwrap().unwrap();
    let worked = (p.t - 2.78).abs() < 1e-12 && (p.x + 3.014_666_666_666_667).abs() < 1e-9;
    println!(
        "[{}]  - caustic at rho=1: t={:.12} x={:.12} (expected 2.78, -3.014666666667)",
        if worked { "PASS" } else { "FAIL" },
        p.t,
        p.x
    );
    if !worked {
        failed.push("worked-caustic-point");
    }
    if failed.is_empty() {
        println!(
            "acceptance: all {} criteria and the worked caustic point passed",
            outcomes.len()
        );
    } else {
        eprintln!("acceptance: failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
