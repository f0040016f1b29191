//! Sparse interpolation of polynomials given only as straight-line
//! programs.
//!
//! The input is a branch-free program computing an unknown sparse
//! polynomial f, plus bounds T on its term count and D on its degree. The
//! only way to look at f is a *probe of degree l*: evaluating the program
//! in R[z]/(z^l - 1), which reveals f mod (z^l - 1) at a cost that grows
//! with l. The main algorithm keeps total probe degree low by settling
//! for "ok" primes that separate most (not all) terms of the current
//! residual, assembling a partial approximation by Chinese remaindering
//! exponent residues, and recursing on the smaller difference.
//!
//! The crate is organized around the runnable examples in `examples/`;
//! each demonstrates one capability end to end. A thin `sparse-interp`
//! binary wraps instance generation, interpolation, verification, and
//! benchmark sweeps.

pub mod bench;
pub mod interp;
pub mod kronecker;
pub mod ledger;
pub mod primes;
pub mod ring;
pub mod slp;
pub mod sparse;

pub use interp::{
    construct_approximation, dense_interpolate, find_ok_prime, garg_schost, interpolate,
    interpolate_multivariate, zero_test, InterpConfig,
};
pub use kronecker::KroneckerMap;
pub use ledger::ProbeLedger;
pub use primes::{ModuliSet, PrimeTable};
pub use ring::{CyclicPoly, RingElem, RingSpec};
pub use slp::Slp;
pub use sparse::SparsePoly;
