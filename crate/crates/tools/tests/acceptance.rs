//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

use jacobi_tools::checks::{run_all, Config};

fn main() {
    let outcomes = run_all(&Config::default(), |o| println!("{o}"), |_| {});
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} passed, {failed} failed", outcomes.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
