//! Runs every theorem suite and prints a summary line per suite.
//!
//! `cargo run --release --example suites -- [TERM_SIZE] [seq|par]`

use std::time::Instant;

use dcc::harness::{run_theorem_suite, SuiteBounds, Theorem};
use dcc::par::Strategy;

fn main() {
    let mut args = std::env::args().skip(1);
    let term_size = args.next().map(|s| s.parse().expect("term size")).unwrap_or(7);
    let strategy: Strategy = args.next().map(|s| s.parse().expect("strategy")).unwrap_or_default();
    let bounds = SuiteBounds { term_size, strategy, budget: 2_000_000_000, ..SuiteBounds::default() };
    for th in Theorem::ALL {
        let t0 = Instant::now();
        match run_theorem_suite(th, &bounds) {
            Ok(r) => {
                println!("{th} {}: {} checked, {} failures, {:.1?}", th.title(), r.checked, r.failures, t0.elapsed());
                for c in r.counterexamples.iter().take(3) {
                    println!("  {} {:?} {}", c.term, c.levels, c.verdict);
                }
            }
            Err(e) => println!("{th}: {e}"),
        }
    }
}
