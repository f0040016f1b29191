//! Deceptive terms: how exponent reconstruction can fabricate a term, and
//! how the collision filters catch most fabrications.
//!
//! A term of the residual that collides modulo the chosen prime p can
//! leave a plausible-looking trace in every degree-p*q image. If each
//! image shows exactly one term in the residue class with a consistent
//! coefficient, Chinese remaindering assembles an exponent that belongs
//! to no actual term: a deceptive term. It is harmless -- the recursion
//! subtracts it again later -- as long as there are not too many of them.
//!
//! Run with: cargo run --example deceptive_terms

use num_bigint::BigUint;
use num_traits::One;
use sparse_interp::interp::{approximation_from_images, construct_approximation};
use sparse_interp::ring::RingElem;
use sparse_interp::{ModuliSet, ProbeLedger, RingSpec, Slp, SparsePoly};

fn main() {
    let ring = RingSpec::integers();
    let g = SparsePoly::from_pairs(
        ring,
        &[(0, 1), (1, 1), (2, 1), (3, 1), (15, 1), (158, -1), (169, -1)],
    );
    let p = 11u64;
    let moduli = ModuliSet::from_moduli(vec![2, 3, 5, 7]).unwrap();
    println!("g = {g}");
    println!("p = {p}, moduli = {:?}, degree bound 170\n", moduli.moduli());

    // A scripted set of images in which the collision stays hidden: every
    // image shows a single class-4 term, so nothing flags the class.
    let one_term_tail = |tail: u64| -> Vec<(u64, RingElem)> {
        vec![
            (0, ring.one()),
            (1, ring.one()),
            (2, ring.one()),
            (3, ring.one()),
            (tail, ring.from_i64(-1)),
        ]
    };
    let p_image = one_term_tail(4);
    let q_images = vec![
        one_term_tail(15),
        one_term_tail(26),
        one_term_tail(48),
        one_term_tail(15),
    ];
    let assembled = approximation_from_images(ring, 170, p, &moduli, &p_image, &q_images);
    println!("assembled from scripted images: {assembled}");
    println!("  residues 1 (mod 2), 2 (mod 3), 3 (mod 5), 1 (mod 7) lift to 113:");
    println!("  the term -z^113 appears in no actual g -- a deceptive term.\n");

    // Probing the real g, the class-4 terms split apart in the mod-33 and
    // mod-55 images; seeing two class terms in one image is proof of a
    // collision and the class is dropped.
    let program = Slp::from_sparse(&g);
    let ledger = ProbeLedger::new();
    let input = [BigUint::one()];
    for &q in moduli.moduli() {
        let image = program.probe(p * q, &input, &ledger);
        println!("g mod (z^{:>2} - 1) = {image}", p * q);
    }
    let fss = construct_approximation(
        &program,
        &SparsePoly::zero(ring),
        170,
        p,
        &moduli,
        &input,
        &ledger,
    );
    println!("\nassembled from real probes: {fss}");
    println!("  the residual g - f** keeps {} terms", g.sub(&fss).sparsity());
}
