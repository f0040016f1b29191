//! Deterministic verification: probing the difference between the program
//! and a candidate modulo z^p - 1 for the first ceil(T log2 D) primes.
//! Agreement on all of them proves equality; any disagreement disproves it.
//!
//! Run with: cargo run --example verify_candidate

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sparse_interp::{zero_test, ProbeLedger, RingSpec, Slp, SparsePoly};

fn main() {
    let ring = RingSpec::prime_field((1 << 61) - 1).unwrap();
    let (sparsity, degree_bound) = (8u64, 10_000u64);
    let mut rng = ChaCha12Rng::seed_from_u64(12);
    let truth = SparsePoly::random(ring, sparsity, degree_bound, &mut rng).unwrap();
    let program = Slp::from_sparse(&truth);

    let ledger = ProbeLedger::new();
    let verdict = zero_test(&program, &truth, sparsity, degree_bound, &ledger);
    println!(
        "exact candidate:   {} ({} probes)",
        if verdict { "accepted" } else { "rejected" },
        ledger.count()
    );

    // Remove one term; a single leftover term survives every reduction,
    // so the very first prime already disagrees.
    let mutated = truth.sub(&SparsePoly::from_terms(
        ring,
        vec![truth.terms()[0].clone()],
    ));
    let ledger = ProbeLedger::new();
    let verdict = zero_test(&program, &mutated, sparsity, degree_bound, &ledger);
    println!(
        "mutated candidate: {} ({} probe{})",
        if verdict { "accepted" } else { "rejected" },
        ledger.count(),
        if ledger.count() == 1 { "" } else { "s" }
    );
}
