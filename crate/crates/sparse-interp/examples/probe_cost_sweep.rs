//! A small probe-cost sweep over a (T, D) grid, printing the CSV that the
//! `bench` subcommand would write plus the per-cell summary.
//!
//! Run with: cargo run --release --example probe_cost_sweep

use sparse_interp::bench::{run_sweep, summarize, to_csv, BenchConfig};
use sparse_interp::RingSpec;

fn main() {
    let cfg = BenchConfig::new(
        vec![4, 16],
        vec![1 << 14, 1 << 20],
        5,
        0.05,
        424242,
        RingSpec::prime_field((1 << 61) - 1).unwrap(),
    );
    let records = run_sweep(&cfg);
    print!("{}", to_csv(&records));
    println!();
    print!("{}", summarize(&records));
}
