//! The interpolation algorithms.
//!
//! The main entry point is [`interpolate`]: a Monte Carlo procedure that
//! repeatedly finds an "ok prime" separating most terms of the residual
//! g = f - f*, assembles an approximation of g from images modulo
//! z^(p*q) - 1 by Chinese remaindering on the exponents, and recurses on
//! the smaller residual with a halved sparsity bound. Baselines: a Monte
//! Carlo variant of the symmetric-polynomial exponent recovery of
//! Garg and Schost, and dense interpolation from degree-1 probes. A
//! deterministic zero test turns any candidate into a certificate.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::kronecker::KroneckerMap;
use crate::ledger::ProbeLedger;
use crate::primes::{first_primes, ModuliSet, PrimeTable};
use crate::ring::{RingElem, RingSpec};
use crate::slp::Slp;
use crate::sparse::SparsePoly;

/// Bounds and knobs for one interpolation run. The sparsity and degree
/// bounds are hard bounds supplied by the caller; all probabilistic
/// guarantees are void if they underestimate the target polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpConfig {
    pub sparsity_bound: u64,
    pub degree_bound: u64,
    /// Failure tolerance: the returned polynomial is wrong with
    /// probability below this. Must lie in (0, 1).
    pub failure_bound: f64,
    pub ring: RingSpec,
    pub seed: u64,
}

impl InterpConfig {
    pub fn new(
        sparsity_bound: u64,
        degree_bound: u64,
        failure_bound: f64,
        ring: RingSpec,
        seed: u64,
    ) -> Result<Self, String> {
        if !(failure_bound > 0.0 && failure_bound < 1.0) {
            return Err(format!("failure tolerance {failure_bound} must lie in (0, 1)"));
        }
        Ok(InterpConfig { sparsity_bound, degree_bound, failure_bound, ring, seed })
    }

    /// Per-level failure tolerance: failure_bound / (ceil(log2 max(T,2)) + 1).
    pub fn step_failure_bound(&self) -> f64 {
        let levels = ceil_log2(self.sparsity_bound.max(2)) as f64;
        self.failure_bound / (levels + 1.0)
    }
}

/// ceil(log2 n) for n >= 1.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n >= 1);
    64 - (n - 1).leading_zeros()
}

/// Number of prime samples needed to miss with probability at most
/// `failure_tolerance` when each sample fails with probability 1/2: the smallest k
/// with 2^-k <= failure_tolerance.
pub fn sample_budget(failure_tolerance: f64) -> usize {
    assert!(failure_tolerance > 0.0 && failure_tolerance < 1.0);
    let mut k = 0usize;
    let mut coverage = 1.0f64;
    while coverage * failure_tolerance < 1.0 {
        k += 1;
        coverage *= 2.0;
        assert!(k <= 64, "failure tolerance too small");
    }
    k
}

/// Lower end of the ok-prime sampling range:
/// max(21, ceil(160/9 * (T_g - 1) * ln D)).
pub fn ok_prime_search_floor(sparsity_bound: u64, degree_bound: u64) -> u64 {
    assert!(sparsity_bound >= 1);
    let d = degree_bound.max(1) as f64;
    let raw = (160.0 / 9.0) * (sparsity_bound - 1) as f64 * d.ln();
    (raw.ceil() as u64).max(21)
}

/// Lower end of the good-prime sampling range for the Garg-Schost
/// baseline: max(21, ceil(5/3 * T * (T - 1) * ln D)).
pub fn good_prime_search_floor(sparsity_bound: u64, degree_bound: u64) -> u64 {
    assert!(sparsity_bound >= 1);
    let d = degree_bound.max(1) as f64;
    let raw = (5.0 / 3.0) * sparsity_bound as f64 * (sparsity_bound - 1) as f64 * d.ln();
    (raw.ceil() as u64).max(21)
}

// ----------------------------------------------------------------------
// Ok-prime search
// ----------------------------------------------------------------------

/// Probe the residual f - approximation at each candidate degree and return the
/// prime whose image has the most terms; later candidates win ties.
pub fn select_max_sparsity_prime(
    s: &Slp,
    approximation: &SparsePoly,
    candidates: &[u64],
    input_exponents: &[BigUint],
    ledger: &ProbeLedger,
) -> u64 {
    let mut max_sparsity = 0usize;
    let mut best = 0u64;
    for &p in candidates {
        let sparsity = s.probe_diff_terms(approximation, p, input_exponents, ledger).len();
        if sparsity >= max_sparsity {
            max_sparsity = sparsity;
            best = p;
        }
    }
    best
}

/// Sample ceil(log2 1/failure_tolerance) primes uniformly from [search_floor, 2 search_floor]
/// with search_floor = max(21, ceil(160/9 (T_g - 1) ln D)), probe the residual at
/// each, and keep the max-sparsity one. With probability at least
/// 1 - failure_tolerance the result is an ok prime: at most 2 * (3 T_g / 16) of the
/// residual's terms collide modulo it.
#[allow(clippy::too_many_arguments)]
pub fn find_ok_prime<R: Rng + ?Sized>(
    s: &Slp,
    approximation: &SparsePoly,
    residual_sparsity_bound: u64,
    degree_bound: u64,
    failure_tolerance: f64,
    input_exponents: &[BigUint],
    table: &PrimeTable,
    rng: &mut R,
    ledger: &ProbeLedger,
) -> u64 {
    assert!(residual_sparsity_bound >= 1);
    let search_floor = ok_prime_search_floor(residual_sparsity_bound, degree_bound);
    let candidates: Vec<u64> = (0..sample_budget(failure_tolerance))
        .map(|_| table.random_prime_in(search_floor, rng))
        .collect();
    select_max_sparsity_prime(s, approximation, &candidates, input_exponents, ledger)
}

// ----------------------------------------------------------------------
// Approximation construction
// ----------------------------------------------------------------------

/// Probe the residual g = f - approximation modulo z^p - 1 and modulo z^(p q) - 1
/// for every modulus q, then assemble candidate terms of g. If p is an ok
/// prime for g with bound T_g, the result misses at most floor(T_g / 2)
/// terms of g (including any deceptive terms it introduces).
pub fn construct_approximation(
    s: &Slp,
    approximation: &SparsePoly,
    degree_bound: u64,
    p: u64,
    moduli: &ModuliSet,
    input_exponents: &[BigUint],
    ledger: &ProbeLedger,
) -> SparsePoly {
    assert!(
        moduli.product() > BigUint::from(degree_bound),
        "moduli product must exceed the degree bound"
    );
    let p_image = s.probe_diff_terms(approximation, p, input_exponents, ledger);
    let q_images: Vec<Vec<(u64, RingElem)>> = moduli
        .moduli()
        .iter()
        .map(|&q| s.probe_diff_terms(approximation, p * q, input_exponents, ledger))
        .collect();
    approximation_from_images(s.ring(), degree_bound, p, moduli, &p_image, &q_images)
}

/// The assembly stage of [`construct_approximation`], operating on already
/// collected images. `p_image` holds the residual's terms modulo z^p - 1;
/// `q_images[i]` holds its terms modulo z^(p * q_i) - 1.
///
/// Each residue class from the degree-p image survives only if every
/// degree-pq image shows exactly one term in the class and all of those
/// terms carry the class coefficient; a class with two terms in any image
/// is a detected collision and is discarded permanently. Surviving classes
/// are lifted by Chinese remaindering on the exponents and kept if the
/// lifted exponent stays within the degree bound.
pub fn approximation_from_images(
    ring: RingSpec,
    degree_bound: u64,
    p: u64,
    moduli: &ModuliSet,
    p_image: &[(u64, RingElem)],
    q_images: &[Vec<(u64, RingElem)>],
) -> SparsePoly {
    assert_eq!(q_images.len(), moduli.moduli().len());

    struct Class {
        coeff: RingElem,
        residues: Vec<Option<u64>>,
        alive: bool,
    }

    let modulus_count = moduli.moduli().len();
    let mut classes: HashMap<u64, Class> = p_image
        .iter()
        .map(|(e_p, c)| {
            (*e_p, Class { coeff: c.clone(), residues: vec![None; modulus_count], alive: true })
        })
        .collect();

    for (qi, image) in q_images.iter().enumerate() {
        let q = moduli.moduli()[qi];
        // Count the class members appearing in this image.
        let mut seen: HashMap<u64, (usize, u64, RingElem)> = HashMap::new();
        for (e, c) in image {
            let class_residue = e % p;
            let entry = seen
                .entry(class_residue)
                .or_insert_with(|| (0, 0, ring.zero()));
            entry.0 += 1;
            entry.1 = e % q;
            entry.2 = c.clone();
        }
        for (class_residue, (count, e_mod_q, coeff)) in seen {
            let Some(class) = classes.get_mut(&class_residue) else {
                continue;
            };
            if !class.alive {
                continue;
            }
            if count >= 2 {
                // Two terms congruent modulo p split apart modulo p*q:
                // a certain collision.
                class.alive = false;
                continue;
            }
            if coeff != class.coeff {
                // A unique class term whose coefficient disagrees with the
                // degree-p image marks a deceptive class.
                class.alive = false;
                continue;
            }
            class.residues[qi] = Some(e_mod_q);
        }
    }

    let mut terms = Vec::new();
    for class in classes.into_values() {
        if !class.alive {
            continue;
        }
        // A class with a nonzero p-image coefficient cannot vanish from a
        // pq-image, so every residue is present for live classes.
        debug_assert!(class.residues.iter().all(Option::is_some));
        if class.residues.iter().any(Option::is_none) {
            continue;
        }
        let residues: Vec<u64> = class.residues.iter().map(|r| r.unwrap()).collect();
        let lifted = crt_lift(&residues, moduli.moduli());
        if lifted <= BigUint::from(degree_bound) {
            terms.push((lifted, class.coeff));
        }
    }
    SparsePoly::from_terms(ring, terms)
}

/// Least nonnegative solution of e = residues[i] (mod moduli[i]) by
/// Garner's incremental reconstruction. The moduli must be pairwise
/// coprime.
pub fn crt_lift(residues: &[u64], moduli: &[u64]) -> BigUint {
    assert_eq!(residues.len(), moduli.len());
    let mut solution = BigUint::zero();
    let mut partial_product = BigUint::one();
    for (&r, &q) in residues.iter().zip(moduli) {
        let base = (&solution % BigUint::from(q)).to_u64().unwrap();
        let m = (&partial_product % BigUint::from(q)).to_u64().unwrap();
        let inv = mod_inverse(m, q).expect("moduli are pairwise coprime");
        let delta = (r + q - base) % q;
        let step = (delta as u128 * inv as u128 % q as u128) as u64;
        solution += &partial_product * BigUint::from(step);
        partial_product *= BigUint::from(q);
    }
    solution
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let quotient = r / new_r;
        (t, new_t) = (new_t, t - quotient * new_t);
        (r, new_r) = (new_r, r - quotient * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(((t % m as i128 + m as i128) % m as i128) as u64)
}

// ----------------------------------------------------------------------
// The recursive interpolation driver
// ----------------------------------------------------------------------

/// Interpolate the univariate polynomial computed by `s`. Returns the
/// recovered polynomial and the probe ledger of the run. With probability
/// at least 1 - failure_bound the result is exact; failures surface only
/// as a wrong answer (use [`zero_test`] for a certificate).
pub fn interpolate(s: &Slp, cfg: &InterpConfig) -> (SparsePoly, ProbeLedger) {
    assert_eq!(s.num_inputs(), 1, "use interpolate_multivariate for several variables");
    interpolate_with_inputs(s, cfg, &[BigUint::one()])
}

/// Interpolation with explicit probe substitutions, as used by the
/// Kronecker path. `cfg.degree_bound` bounds the substituted univariate
/// polynomial's degree.
pub fn interpolate_with_inputs(
    s: &Slp,
    cfg: &InterpConfig,
    input_exponents: &[BigUint],
) -> (SparsePoly, ProbeLedger) {
    assert_eq!(s.ring(), cfg.ring, "config ring differs from the program ring");
    let ledger = ProbeLedger::new();
    let mut approximation = SparsePoly::zero(cfg.ring);
    if cfg.sparsity_bound == 0 {
        return (approximation, ledger);
    }

    let moduli = ModuliSet::for_degree_bound(cfg.degree_bound.max(1));
    let failure_tolerance = cfg.step_failure_bound();
    let initial_floor = ok_prime_search_floor(cfg.sparsity_bound, cfg.degree_bound);
    let table = PrimeTable::up_to(2 * initial_floor);
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);

    let mut residual_bound = cfg.sparsity_bound;
    while residual_bound > 0 {
        let p = find_ok_prime(
            s,
            &approximation,
            residual_bound,
            cfg.degree_bound,
            failure_tolerance,
            input_exponents,
            &table,
            &mut rng,
            &ledger,
        );
        let correction = construct_approximation(
            s,
            &approximation,
            cfg.degree_bound,
            p,
            &moduli,
            input_exponents,
            &ledger,
        );
        approximation = approximation.add(&correction);
        residual_bound /= 2;
    }

    let degree_cap = 2 * initial_floor * moduli.max_modulus();
    assert!(
        ledger.max_degree() <= degree_cap,
        "probe degree {} exceeded the cap {}",
        ledger.max_degree(),
        degree_cap
    );
    (approximation, ledger)
}

/// One term of a multivariate polynomial: exponent vector and coefficient.
pub type MultivariateTerm = (Vec<BigUint>, RingElem);

/// Interpolate an N-variate program through Kronecker substitution with
/// partial degree bound `cfg.degree_bound`. Returns (exponent vector,
/// coefficient) terms of the recovered polynomial.
pub fn interpolate_multivariate(
    s: &Slp,
    cfg: &InterpConfig,
) -> Result<(Vec<MultivariateTerm>, ProbeLedger), String> {
    let map = KroneckerMap::new(s.num_inputs(), cfg.degree_bound);
    let packed_bound = map
        .univariate_degree_bound()
        .to_u64()
        .ok_or("substituted degree bound exceeds the supported word size")?;
    let mut packed_cfg = *cfg;
    packed_cfg.degree_bound = packed_bound;
    let (packed, ledger) = interpolate_with_inputs(s, &packed_cfg, &map.input_exponents());
    let terms = packed
        .terms()
        .iter()
        .map(|(e, c)| (map.inverse(e), c.clone()))
        .collect();
    Ok((terms, ledger))
}

/// Probes issued by [`interpolate`] for given bounds: one level per
/// halving of the sparsity bound, and per level the ok-prime samples plus
/// one degree-p image plus one image per modulus.
pub fn interpolation_probe_count(cfg: &InterpConfig) -> usize {
    if cfg.sparsity_bound == 0 {
        return 0;
    }
    let levels = 64 - cfg.sparsity_bound.leading_zeros() as usize; // floor(log2 T) + 1
    let moduli = ModuliSet::for_degree_bound(cfg.degree_bound.max(1));
    let per_level = sample_budget(cfg.step_failure_bound()) + moduli.moduli().len() + 1;
    levels * per_level
}

// ----------------------------------------------------------------------
// Garg-Schost baseline
// ----------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GargSchostError {
    /// The exponent recovery needs an integral domain of characteristic
    /// zero or above the degree bound.
    UnsupportedRing { modulus: u64, degree_bound: u64 },
    /// Root recovery did not find the declared number of integer roots.
    RootRecovery { expected: usize, found: usize },
    /// A good image lacked a coefficient for a recovered exponent.
    InconsistentImages,
}

impl fmt::Display for GargSchostError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GargSchostError::UnsupportedRing { modulus, degree_bound } => write!(
                f,
                "field modulus {modulus} does not exceed the degree bound {degree_bound}"
            ),
            GargSchostError::RootRecovery { expected, found } => {
                write!(f, "expected {expected} integer roots, found {found}")
            }
            GargSchostError::InconsistentImages => write!(f, "good images disagree"),
        }
    }
}

impl std::error::Error for GargSchostError {}

/// Monte Carlo Garg-Schost interpolation: find a good prime by sampling,
/// collect good primes until their product exceeds the coefficient bound
/// 2^T * D^T, Chinese-remainder the symmetric polynomial with the
/// exponents as roots, and recover the exponents as its integer roots.
pub fn garg_schost<R: Rng + ?Sized>(
    s: &Slp,
    sparsity_bound: u64,
    degree_bound: u64,
    failure_tolerance: f64,
    rng: &mut R,
    ledger: &ProbeLedger,
) -> Result<SparsePoly, GargSchostError> {
    assert!(sparsity_bound >= 1);
    assert_eq!(s.num_inputs(), 1, "the baseline handles univariate programs");
    if let RingSpec::PrimeField { modulus } = s.ring() {
        if modulus <= degree_bound {
            return Err(GargSchostError::UnsupportedRing { modulus, degree_bound });
        }
    }
    let one = [BigUint::one()];
    let search_floor = good_prime_search_floor(sparsity_bound, degree_bound);
    let mut table = PrimeTable::up_to(2 * search_floor);

    // Phase 1: declare the sparsity from the max-sparsity sample.
    let mut images: HashMap<u64, Vec<(u64, RingElem)>> = HashMap::new();
    for _ in 0..sample_budget(failure_tolerance) {
        let p = table.random_prime_in(search_floor, rng);
        images
            .entry(p)
            .or_insert_with(|| s.probe_terms(p, &one, ledger));
    }
    let declared_sparsity = images.values().map(Vec::len).max().unwrap_or(0);
    if declared_sparsity == 0 {
        return Ok(SparsePoly::zero(s.ring()));
    }

    // Phase 2: collect distinct good primes until their product clears the
    // coefficient bound of the symmetric polynomial.
    let coefficient_bound =
        BigUint::from(2u32).pow(sparsity_bound as u32) * BigUint::from(degree_bound.max(1)).pow(sparsity_bound as u32);
    let mut good: Vec<(u64, &Vec<(u64, RingElem)>)> = Vec::new();
    let mut good_primes: Vec<u64> = images
        .iter()
        .filter(|(_, terms)| terms.len() == declared_sparsity)
        .map(|(&p, _)| p)
        .collect();
    good_primes.sort_unstable();
    let mut product: BigUint = good_primes.iter().map(|&p| BigUint::from(p)).product();
    let mut upper = 2 * search_floor;
    while product <= coefficient_bound {
        // Sample new primes; widen the window if the current one runs dry.
        let pool: Vec<u64> = table
            .primes_in(search_floor, upper)
            .iter()
            .copied()
            .filter(|p| !images.contains_key(p))
            .collect();
        if pool.is_empty() {
            upper *= 2;
            table.ensure_bound(upper);
            continue;
        }
        let p = pool[rng.gen_range(0..pool.len())];
        let terms = s.probe_terms(p, &one, ledger);
        let sparsity = terms.len();
        images.insert(p, terms);
        if sparsity == declared_sparsity {
            good_primes.push(p);
            product *= BigUint::from(p);
        }
    }
    for &p in &good_primes {
        good.push((p, &images[&p]));
    }

    // The monic polynomial with the exponents as roots, recovered from
    // its images modulo each good prime.
    let root_poly = symmetric_poly_from_images(declared_sparsity, &good);

    // Exponents are its integer roots.
    let roots = integer_roots(&root_poly, degree_bound).ok_or(GargSchostError::RootRecovery {
        expected: declared_sparsity,
        found: 0,
    })?;
    if roots.len() != declared_sparsity {
        return Err(GargSchostError::RootRecovery {
            expected: declared_sparsity,
            found: roots.len(),
        });
    }

    // Coefficients come straight out of any good image.
    let (p, image) = &good[0];
    let by_position: HashMap<u64, RingElem> =
        image.iter().map(|(k, c)| (*k, c.clone())).collect();
    let mut terms = Vec::with_capacity(roots.len());
    for e in roots {
        let coeff = by_position
            .get(&(e % p))
            .ok_or(GargSchostError::InconsistentImages)?;
        terms.push((BigUint::from(e), coeff.clone()));
    }
    Ok(SparsePoly::from_terms(s.ring(), terms))
}

/// Coefficients of prod_i (y - roots_i) recovered by Chinese remaindering
/// from the root residues modulo each prime, lifted symmetrically.
fn symmetric_poly_from_images(
    sparsity: usize,
    good: &[(u64, &Vec<(u64, RingElem)>)],
) -> Vec<BigInt> {
    // The image positions modulo a good prime are the root residues, so
    // the polynomial's image mod p is prod (y - r) in Z_p[y].
    let mut residues_per_coefficient: Vec<Vec<u64>> = vec![Vec::new(); sparsity + 1];
    let mut primes = Vec::with_capacity(good.len());
    for (p, image) in good {
        let p = *p;
        primes.push(p);
        let mut coeffs: Vec<u64> = vec![1 % p];
        for (root, _) in image.iter() {
            let neg_root = (p - root % p) % p;
            let mut next = vec![0u64; coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] = (next[k + 1] + c) % p;
                next[k] = (next[k] + (c as u128 * neg_root as u128 % p as u128) as u64) % p;
            }
            coeffs = next;
        }
        assert_eq!(coeffs.len(), sparsity + 1, "good image has the declared term count");
        for (k, &c) in coeffs.iter().enumerate() {
            residues_per_coefficient[k].push(c);
        }
    }

    // Lift each coefficient into the symmetric range.
    let modulus: BigUint = primes.iter().map(|&p| BigUint::from(p)).product();
    let half = &modulus / 2u32;
    let mut root_poly: Vec<BigInt> = Vec::with_capacity(sparsity + 1);
    for residues in &residues_per_coefficient {
        let lifted = crt_lift(residues, &primes);
        let signed = if lifted > half {
            BigInt::from(lifted) - BigInt::from(modulus.clone())
        } else {
            BigInt::from(lifted)
        };
        root_poly.push(signed);
    }
    root_poly
}

/// All integer roots of a monic, fully split polynomial with ascending
/// coefficients, found largest-first by integer Newton iteration and
/// deflation. Returns None if the polynomial is not split over the
/// integers with roots in [0, bound].
fn integer_roots(root_poly: &[BigInt], bound: u64) -> Option<Vec<u64>> {
    let mut poly: Vec<BigInt> = root_poly.to_vec();
    let mut roots = Vec::new();
    let mut upper = BigInt::from(bound);
    while poly.len() > 1 {
        let root = largest_root_at_most(&poly, &upper)?;
        poly = deflate(&poly, &root)?;
        let small = root.to_u64()?;
        roots.push(small);
        upper = root;
    }
    roots.reverse();
    Some(roots)
}

/// Largest integer root of a monic split polynomial, at most `upper`.
/// Newton iteration with floor division never undershoots the largest
/// root, so the walk is monotone and exact.
fn largest_root_at_most(poly: &[BigInt], upper: &BigInt) -> Option<BigInt> {
    let mut y = upper.clone();
    if y.is_negative() {
        return None;
    }
    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps > 100_000 {
            return None;
        }
        let value = horner(poly, &y);
        if value.is_zero() {
            return Some(y);
        }
        if value.is_negative() {
            // No integer root between here and the previous iterate.
            return None;
        }
        let slope = horner(&derivative(poly), &y);
        if !slope.is_positive() {
            return None;
        }
        let step = &value / &slope;
        let step = if step.is_zero() { BigInt::one() } else { step };
        y -= step;
        if y.is_negative() {
            return None;
        }
    }
}

fn horner(poly: &[BigInt], at: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in poly.iter().rev() {
        acc = acc * at + c;
    }
    acc
}

fn derivative(poly: &[BigInt]) -> Vec<BigInt> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect()
}

/// Divide a monic polynomial by (y - root); None if the division leaves a
/// remainder.
fn deflate(poly: &[BigInt], root: &BigInt) -> Option<Vec<BigInt>> {
    let degree = poly.len() - 1;
    let mut quotient = vec![BigInt::zero(); degree];
    let mut carry = BigInt::zero();
    for k in (0..degree).rev() {
        carry = &poly[k + 1] + root * &carry;
        quotient[k] = carry.clone();
    }
    let remainder = &poly[0] + root * &carry;
    if remainder.is_zero() {
        Some(quotient)
    } else {
        None
    }
}

// ----------------------------------------------------------------------
// Dense baseline
// ----------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DenseError {
    /// Needs degree_bound + 1 distinct evaluation points in the field.
    UnsupportedRing { degree_bound: u64 },
    NotUnivariate { num_inputs: usize },
}

impl fmt::Display for DenseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DenseError::UnsupportedRing { degree_bound } => write!(
                f,
                "dense interpolation needs a prime field with more than {degree_bound} elements"
            ),
            DenseError::NotUnivariate { num_inputs } => {
                write!(f, "dense interpolation requires one input, got {num_inputs}")
            }
        }
    }
}

impl std::error::Error for DenseError {}

/// Deterministic dense interpolation from degree_bound + 1 point
/// evaluations (each counted as a probe of degree 1), solved by finite
/// differences over the points 0..=degree_bound. Exact whenever the
/// program's polynomial has degree at most the bound.
pub fn dense_interpolate(
    s: &Slp,
    degree_bound: u64,
    ledger: &ProbeLedger,
) -> Result<SparsePoly, DenseError> {
    let q = match s.ring() {
        RingSpec::PrimeField { modulus } if modulus > degree_bound => modulus,
        _ => return Err(DenseError::UnsupportedRing { degree_bound }),
    };
    if s.num_inputs() != 1 {
        return Err(DenseError::NotUnivariate { num_inputs: s.num_inputs() });
    }
    let ring = s.ring();
    let points: Vec<RingElem> = (0..=degree_bound).map(|v| RingElem::Fp(v % q)).collect();
    let values = s.eval_points(&points).expect("univariate checked above");
    for _ in 0..=degree_bound {
        ledger.record(1);
    }

    let mut column: Vec<u64> = values
        .into_iter()
        .map(|v| match v {
            RingElem::Fp(x) => x,
            _ => unreachable!(),
        })
        .collect();
    let n = column.len();

    // Forward differences: after k rounds, column[0] = Delta^k f(0).
    let mut deltas = vec![0u64; n];
    deltas[0] = column[0];
    for (k, delta) in deltas.iter_mut().enumerate().skip(1) {
        for i in 0..n - k {
            column[i] = (column[i + 1] + q - column[i]) % q;
        }
        *delta = column[0];
    }
    let top = match deltas.iter().rposition(|&d| d != 0) {
        Some(k) => k,
        None => return Ok(SparsePoly::zero(ring)),
    };

    // Newton coefficients Delta^k f(0) / k!.
    let mut factorial = vec![1u64; top + 1];
    for k in 1..=top {
        factorial[k] = (factorial[k - 1] as u128 * k as u128 % q as u128) as u64;
    }
    let mut inv_factorial = vec![1u64; top + 1];
    inv_factorial[top] = pow_mod(factorial[top], q - 2, q);
    for k in (1..=top).rev() {
        inv_factorial[k - 1] = (inv_factorial[k] as u128 * k as u128 % q as u128) as u64;
    }

    // Expand sum_k c_k * x(x-1)...(x-k+1) into the monomial basis.
    let mut monomial = vec![0u64; top + 1];
    let mut basis = vec![0u64; top + 2];
    basis[0] = 1;
    let mut basis_len = 1usize;
    for k in 0..=top {
        let c = (deltas[k] as u128 * inv_factorial[k] as u128 % q as u128) as u64;
        if c != 0 {
            for i in 0..basis_len {
                monomial[i] = (monomial[i] as u128 + c as u128 * basis[i] as u128 % q as u128) as u64 % q;
            }
        }
        if k < top {
            // basis *= (x - k)
            let shift = k as u64 % q;
            for i in (0..basis_len).rev() {
                let v = basis[i];
                basis[i + 1] = (basis[i + 1] + v) % q;
                basis[i] = (v as u128 * (q - shift) as u128 % q as u128) as u64;
            }
            basis_len += 1;
        }
    }

    let terms = monomial
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c != 0)
        .map(|(e, c)| (BigUint::from(e), RingElem::Fp(c)))
        .collect();
    Ok(SparsePoly::from_terms(ring, terms))
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

// ----------------------------------------------------------------------
// Deterministic zero test
// ----------------------------------------------------------------------

/// Deterministic equality test between the program's polynomial and an
/// explicit candidate: probe the difference modulo z^p - 1 for the first
/// ceil(T log2 D) primes. `true` is a proof of equality for sparsity
/// bound T and degree bound D over an integral domain; `false` is always
/// a proof of inequality.
pub fn zero_test(
    s: &Slp,
    candidate: &SparsePoly,
    sparsity_bound: u64,
    degree_bound: u64,
    ledger: &ProbeLedger,
) -> bool {
    assert_eq!(s.num_inputs(), 1, "the zero test handles univariate programs");
    let prime_count = (sparsity_bound as f64 * (degree_bound as f64).log2()).ceil() as usize;
    assert!(
        prime_count >= 1,
        "zero test needs T log2 D >= 1 (T = {sparsity_bound}, D = {degree_bound})"
    );
    let one = [BigUint::one()];
    for p in first_primes(prime_count) {
        if !s.probe_diff_terms(candidate, p, &one, ledger).is_empty() {
            return false;
        }
    }
    true
}
