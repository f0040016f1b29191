//! Multivariate interpolation through Kronecker substitution: pack the
//! exponent vectors in base D+1, interpolate one univariate polynomial,
//! unpack the recovered exponents.
//!
//! Run with: cargo run --example kronecker_multivariate

use num_bigint::BigUint;
use sparse_interp::interp::interpolate_multivariate;
use sparse_interp::{InterpConfig, KroneckerMap, RingSpec, Slp};

fn main() {
    let ring = RingSpec::prime_field(101).unwrap();
    // f(x, y) = 3 x^2 y + 5 y^3 + 7, partial degrees at most 3.
    let terms = vec![
        (vec![BigUint::from(2u32), BigUint::from(1u32)], ring.from_i64(3)),
        (vec![BigUint::from(0u32), BigUint::from(3u32)], ring.from_i64(5)),
        (vec![BigUint::from(0u32), BigUint::from(0u32)], ring.from_i64(7)),
    ];
    let program = Slp::from_sparse_multivariate(ring, 2, &terms);

    let map = KroneckerMap::new(2, 3);
    println!("substitution: x -> z, y -> z^4 (packed degree bound {})", map.univariate_degree_bound());
    for (exponents, coeff) in &terms {
        println!(
            "  {coeff} * x^{} y^{}  packs to exponent {}",
            exponents[0],
            exponents[1],
            map.forward(exponents)
        );
    }

    let cfg = InterpConfig::new(3, 3, 0.05, ring, 8).unwrap();
    let (recovered, ledger) = interpolate_multivariate(&program, &cfg).unwrap();
    println!("\nrecovered with {} probes:", ledger.count());
    let mut recovered = recovered;
    recovered.sort_by(|a, b| a.0.cmp(&b.0));
    for (exponents, coeff) in &recovered {
        println!("  {coeff} * x^{} y^{}", exponents[0], exponents[1]);
    }
    let mut expected = terms;
    expected.sort_by(|a, b| a.0.cmp(&b.0));
    println!("exact match: {}", recovered == expected);
}
