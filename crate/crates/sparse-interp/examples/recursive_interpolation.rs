//! End-to-end recursive interpolation of a random 20-term polynomial of
//! degree up to 2^30, given only as a straight-line program.
//!
//! Run with: cargo run --release --example recursive_interpolation

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sparse_interp::interp::interpolation_probe_count;
use sparse_interp::{
    interpolate, zero_test, InterpConfig, ProbeLedger, RingSpec, Slp, SparsePoly,
};

fn main() {
    let ring = RingSpec::prime_field((1 << 61) - 1).unwrap();
    let (sparsity, degree_bound) = (20u64, 1u64 << 30);
    let mut rng = ChaCha12Rng::seed_from_u64(2024);
    let truth = SparsePoly::random(ring, sparsity, degree_bound, &mut rng).unwrap();
    let program = Slp::from_sparse(&truth);
    println!(
        "instance: {} terms, degree {}, program length {}",
        truth.sparsity(),
        truth.degree().unwrap(),
        program.len()
    );

    let cfg = InterpConfig::new(sparsity, degree_bound, 0.05, ring, 7).unwrap();
    let (recovered, ledger) = interpolate(&program, &cfg);

    println!("\nrecovered {} terms; exact match: {}", recovered.sparsity(), recovered == truth);
    println!(
        "probes: {} (closed form {}), max degree {}, total degree {}",
        ledger.count(),
        interpolation_probe_count(&cfg),
        ledger.max_degree(),
        ledger.total_cost()
    );

    // A deterministic certificate, independent of the Monte Carlo run.
    let verify_ledger = ProbeLedger::new();
    let certified = zero_test(&program, &recovered, sparsity, degree_bound, &verify_ledger);
    println!(
        "zero test: {} ({} probes of degree up to {})",
        if certified { "equal" } else { "MISMATCH" },
        verify_ledger.count(),
        verify_ledger.max_degree()
    );
}
