//! Finding an "ok" prime: one that separates most terms of the target.
//!
//! Maximizing the image term count does not minimize collisions -- the
//! polynomial below has a mod-2 image with more terms than its mod-3
//! image, yet more of its terms collide modulo 2. Picking the
//! max-sparsity prime is still within a factor two of the best sampled
//! prime, which is all the halving argument needs.
//!
//! Run with: cargo run --example ok_prime_search

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sparse_interp::interp::{find_ok_prime, ok_prime_search_floor, select_max_sparsity_prime};
use sparse_interp::{PrimeTable, ProbeLedger, RingSpec, Slp, SparsePoly};

fn main() {
    let ring = RingSpec::integers();
    let g = SparsePoly::from_pairs(ring, &[(0, 1), (1, 1), (4, 1), (13, -2)]);
    let program = Slp::from_sparse(&g);
    println!("g = {g}\n");

    for p in [2u64, 3] {
        println!(
            "g mod (z^{p} - 1) = {}   image terms: {}, colliding terms of g: {}",
            g.reduce_mod_cyclic(p),
            g.reduce_mod_cyclic(p).sparsity(),
            g.collision_count(p)
        );
    }

    let ledger = ProbeLedger::new();
    let chosen = select_max_sparsity_prime(
        &program,
        &SparsePoly::zero(ring),
        &[2, 3],
        &[BigUint::one()],
        &ledger,
    );
    println!("\namong candidates {{2, 3}} the max-sparsity rule picks p = {chosen}");

    // The real search samples primes from a range scaled to T_g and D.
    let (t_bound, degree_bound) = (4u64, 8192u64);
    let search_floor = ok_prime_search_floor(t_bound, degree_bound);
    let table = PrimeTable::up_to(2 * search_floor);
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let p = find_ok_prime(
        &program,
        &SparsePoly::zero(ring),
        t_bound,
        degree_bound,
        0.05,
        &[BigUint::one()],
        &table,
        &mut rng,
        &ledger,
    );
    println!(
        "sampling range for T_g = {t_bound}, D = {degree_bound}: [{search_floor}, {}]; chosen ok prime: {p}",
        2 * search_floor
    );
    println!("collisions of g modulo {p}: {}", g.collision_count(p));
}
