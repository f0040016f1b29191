//! Probing a straight-line program in R[z]/(z^l - 1).
//!
//! A degree-l probe evaluates the program with its input bound to z,
//! revealing f mod (z^l - 1). Small orders fold terms together (a
//! collision); larger ones keep them apart.
//!
//! Run with: cargo run --example probe_images

use num_bigint::BigUint;
use num_traits::One;
use sparse_interp::{ProbeLedger, RingSpec, Slp, SparsePoly};

fn main() {
    let ring = RingSpec::prime_field(101).unwrap();
    let f = SparsePoly::from_pairs(ring, &[(3, 1), (33, 1)]);
    let program = Slp::from_sparse(&f);
    println!("f = {f}");
    println!("program: {} instructions\n", program.len());

    let ledger = ProbeLedger::new();
    let input = [BigUint::one()];
    for order in [5u64, 7, 1, 16] {
        let image = program.probe(order, &input, &ledger);
        println!(
            "probe of degree {order:>2}: f mod (z^{order} - 1) = {image}   ({} terms)",
            image.sparsity()
        );
    }

    // 5 folds the two exponents together (33 = 3 mod 5); 7 separates them.
    println!("\nledger: {} probes, max degree {}, total degree {}",
        ledger.count(), ledger.max_degree(), ledger.total_cost());
}
