//! One instance, three algorithms: probe-cost comparison of the recursive
//! interpolation against the Garg-Schost and dense baselines.
//!
//! Run with: cargo run --release --example baseline_comparison

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sparse_interp::{
    dense_interpolate, garg_schost, interpolate, InterpConfig, ProbeLedger, RingSpec, Slp,
    SparsePoly,
};

fn main() {
    let ring = RingSpec::prime_field((1 << 61) - 1).unwrap();
    let (sparsity, degree_bound) = (6u64, 4096u64);
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    let truth = SparsePoly::random(ring, sparsity, degree_bound, &mut rng).unwrap();
    let program = Slp::from_sparse(&truth);
    println!("instance: {truth}\n");
    println!("{:<12} {:>8} {:>12} {:>14}  exact", "algorithm", "probes", "max degree", "total degree");

    let cfg = InterpConfig::new(sparsity, degree_bound, 0.05, ring, 1).unwrap();
    let (recursive_out, ledger) = interpolate(&program, &cfg);
    report("recursive", &ledger, recursive_out == truth);

    let ledger = ProbeLedger::new();
    let mut gs_rng = ChaCha12Rng::seed_from_u64(1);
    let gs_out = garg_schost(&program, sparsity, degree_bound, 0.05, &mut gs_rng, &ledger)
        .expect("baseline succeeds on this instance");
    report("gargschost", &ledger, gs_out == truth);

    let ledger = ProbeLedger::new();
    let dense_out = dense_interpolate(&program, degree_bound, &ledger).unwrap();
    report("dense", &ledger, dense_out == truth);
}

fn report(name: &str, ledger: &ProbeLedger, exact: bool) {
    println!(
        "{name:<12} {:>8} {:>12} {:>14}  {exact}",
        ledger.count(),
        ledger.max_degree(),
        ledger.total_cost()
    );
}
