//! Explicit sparse polynomials: sorted (exponent, coefficient) terms with
//! arbitrary-precision exponents, reduction modulo z^l - 1, and the
//! collision-count oracle used by the lemma tests.
//!
//! The interpolation algorithms never look inside a [`SparsePoly`] ground
//! truth; they only see probe images. The collision count exists for tests
//! and verification.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::ring::{CyclicPoly, RingElem, RingSpec};

/// Sparse polynomial over a fixed base ring. Terms are strictly ascending
/// in exponent and never carry a zero coefficient; the empty term list is
/// the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    ring: RingSpec,
    terms: Vec<(BigUint, RingElem)>,
}

impl SparsePoly {
    pub fn zero(ring: RingSpec) -> Self {
        SparsePoly { ring, terms: Vec::new() }
    }

    /// Normalizes: sorts by exponent, merges duplicates, drops zero sums.
    pub fn from_terms(ring: RingSpec, terms: Vec<(BigUint, RingElem)>) -> Self {
        let mut sorted = terms;
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(BigUint, RingElem)> = Vec::with_capacity(sorted.len());
        for (e, c) in sorted {
            match merged.last_mut() {
                Some((last_e, last_c)) if *last_e == e => {
                    *last_c = ring.add(last_c, &c);
                }
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        SparsePoly { ring, terms: merged }
    }

    /// Convenience constructor from (exponent, signed coefficient) pairs.
    pub fn from_pairs(ring: RingSpec, pairs: &[(u64, i64)]) -> Self {
        let terms = pairs
            .iter()
            .map(|&(e, c)| (BigUint::from(e), ring.from_i64(c)))
            .collect();
        SparsePoly::from_terms(ring, terms)
    }

    /// Random instance: `sparsity` distinct exponents up to `degree_bound`
    /// with nonzero coefficients. Deterministic given the generator state.
    pub fn random<R: Rng + ?Sized>(
        ring: RingSpec,
        sparsity: u64,
        degree_bound: u64,
        rng: &mut R,
    ) -> Result<Self, String> {
        if sparsity > 0 && sparsity - 1 > degree_bound {
            return Err(format!(
                "cannot place {sparsity} distinct exponents below degree {degree_bound}"
            ));
        }
        let mut exponent_set = std::collections::HashSet::new();
        while (exponent_set.len() as u64) < sparsity {
            exponent_set.insert(rng.gen_range(0..=degree_bound));
        }
        // Fix the exponent order before drawing coefficients; hash order
        // would make the generator nondeterministic.
        let mut exponents: Vec<u64> = exponent_set.into_iter().collect();
        exponents.sort_unstable();
        let terms = exponents
            .into_iter()
            .map(|e| (BigUint::from(e), ring.random_nonzero(rng)))
            .collect();
        Ok(SparsePoly::from_terms(ring, terms))
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn terms(&self) -> &[(BigUint, RingElem)] {
        &self.terms
    }

    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest exponent, or None for the zero polynomial.
    pub fn degree(&self) -> Option<&BigUint> {
        self.terms.last().map(|(e, _)| e)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ring, other.ring, "polynomials over different rings");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        SparsePoly::from_terms(self.ring, terms)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.ring, other.ring, "polynomials over different rings");
        let mut terms = self.terms.clone();
        terms.extend(
            other
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), self.ring.neg(c))),
        );
        SparsePoly::from_terms(self.ring, terms)
    }

    /// Image in R[z]/(z^order - 1): exponents are reduced modulo the order
    /// and coefficients in the same residue class are summed.
    pub fn reduce_mod_cyclic(&self, order: u64) -> CyclicPoly {
        assert!(order >= 1, "cyclic quotient order must be at least 1");
        let mut image = vec![self.ring.zero(); order as usize];
        let big_order = BigUint::from(order);
        for (e, c) in &self.terms {
            let k = (e % &big_order).to_u64().expect("residue fits u64") as usize;
            image[k] = self.ring.add(&image[k], c);
        }
        CyclicPoly::from_coeffs(self.ring, image)
    }

    /// Number of terms whose exponent residue modulo p is shared with at
    /// least one other term. A test/oracle facility only: the interpolation
    /// algorithms never call this.
    pub fn collision_count(&self, p: u64) -> usize {
        assert!(p >= 1);
        let big_p = BigUint::from(p);
        let mut residues: HashMap<u64, usize> = HashMap::new();
        for (e, _) in &self.terms {
            let r = (e % &big_p).to_u64().expect("residue fits u64");
            *residues.entry(r).or_insert(0) += 1;
        }
        self.terms
            .iter()
            .filter(|(e, _)| residues[&(e % &big_p).to_u64().unwrap()] >= 2)
            .count()
    }

    /// Evaluate at a point of the base ring. Test oracle for the SLP
    /// evaluator; prime fields use Fermat exponent reduction so huge
    /// exponents stay cheap.
    pub fn evaluate(&self, point: &RingElem) -> RingElem {
        match (&self.ring, point) {
            (RingSpec::PrimeField { modulus }, RingElem::Fp(x)) => {
                let q = *modulus;
                let mut acc = 0u64;
                for (e, c) in &self.terms {
                    let coeff = match c {
                        RingElem::Fp(v) => *v,
                        _ => unreachable!(),
                    };
                    let term = if *x == 0 {
                        if e.is_zero() {
                            coeff
                        } else {
                            0
                        }
                    } else {
                        let reduced = (e % BigUint::from(q - 1)).to_u64().unwrap();
                        mulmod(coeff, powmod(*x, reduced, q), q)
                    };
                    acc = (acc + term) % q;
                }
                RingElem::Fp(acc)
            }
            (RingSpec::Integers, RingElem::Int(x)) => {
                let mut acc = num_bigint::BigInt::zero();
                for (e, c) in &self.terms {
                    let coeff = match c {
                        RingElem::Int(v) => v.clone(),
                        _ => unreachable!(),
                    };
                    let exp = e.to_u32().expect("integer-ring evaluation needs small exponents");
                    acc += coeff * x.pow(exp);
                }
                RingElem::Int(acc)
            }
            _ => panic!("evaluation point does not belong to the polynomial's ring"),
        }
    }

    /// Text serialization: one `<coeff> <exponent>` line per term in
    /// ascending exponent order.
    pub fn to_sparse_text(&self) -> String {
        let mut out = String::new();
        for (e, c) in &self.terms {
            out.push_str(&format!("{c} {e}\n"));
        }
        out
    }

    /// Parse the `.sparse` text format. `#` starts a comment; blank lines
    /// are ignored. Coefficients are canonicalized into the ring.
    pub fn parse(text: &str, ring: RingSpec) -> Result<Self, String> {
        let mut terms = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let coeff_text = parts.next().unwrap();
            let exp_text = parts
                .next()
                .ok_or_else(|| format!("line {}: expected `<coeff> <exponent>`", lineno + 1))?;
            if parts.next().is_some() {
                return Err(format!("line {}: trailing tokens", lineno + 1));
            }
            let coeff = ring
                .parse_elem(coeff_text)
                .map_err(|e| format!("line {}: {e}", lineno + 1))?;
            let exponent: BigUint = exp_text
                .parse()
                .map_err(|_| format!("line {}: `{exp_text}` is not a nonnegative integer", lineno + 1))?;
            terms.push((exponent, coeff));
        }
        Ok(SparsePoly::from_terms(ring, terms))
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let coeff = c.to_string();
            let coeff = if first {
                first = false;
                coeff
            } else if let Some(magnitude) = coeff.strip_prefix('-') {
                write!(f, " - ")?;
                magnitude.to_owned()
            } else {
                write!(f, " + ")?;
                coeff
            };
            if e.is_zero() {
                write!(f, "{coeff}")?;
            } else if e.to_u64() == Some(1) {
                write!(f, "{coeff}*z")?;
            } else {
                write!(f, "{coeff}*z^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::PrimeTable;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn zq(q: u64) -> RingSpec {
        RingSpec::prime_field(q).unwrap()
    }

    fn z33_3(ring: RingSpec) -> SparsePoly {
        SparsePoly::from_pairs(ring, &[(3, 1), (33, 1)])
    }

    #[test]
    fn reduction_folds_colliding_exponents() {
        let ring = zq(101);
        let f = z33_3(ring);
        let mod5 = f.reduce_mod_cyclic(5);
        assert_eq!(mod5.sparsity(), 1);
        assert_eq!(*mod5.coeff(3), ring.from_i64(2));
        let mod7 = f.reduce_mod_cyclic(7);
        assert_eq!(mod7.sparsity(), 2);
        assert_eq!(*mod7.coeff(3), ring.one());
        assert_eq!(*mod7.coeff(5), ring.one());
    }

    #[test]
    fn reduction_cancels_opposite_coefficients() {
        // 1 + z + z^4 - 2z^13 mod (z^3 - 1):
        // residues 0,1,1,1 and 1 + 1 - 2 = 0, leaving the constant 1.
        let ring = zq(101);
        let g = SparsePoly::from_pairs(ring, &[(0, 1), (1, 1), (4, 1), (13, -2)]);
        let image = g.reduce_mod_cyclic(3);
        assert_eq!(image.sparsity(), 1);
        assert_eq!(*image.coeff(0), ring.one());
        // ... and mod (z^2 - 1) it is 2 - z.
        let image2 = g.reduce_mod_cyclic(2);
        assert_eq!(*image2.coeff(0), ring.from_i64(2));
        assert_eq!(*image2.coeff(1), ring.from_i64(-1));
    }

    #[test]
    fn collision_count_examples() {
        let ring = zq(101);
        let g = SparsePoly::from_pairs(ring, &[(0, 1), (5, 1), (7, 1), (10, 1)]);
        assert_eq!(g.collision_count(2), 4);
        // Modulo 5 the residue class 0 holds three terms (exponents 0, 5
        // and 10), so three terms collide.
        assert_eq!(g.collision_count(5), 3);
        let single = SparsePoly::from_pairs(ring, &[(12, 9)]);
        for p in 1..40 {
            assert_eq!(single.collision_count(p), 0);
        }
        let g2 = SparsePoly::from_pairs(ring, &[(0, 1), (1, 1), (4, 1), (13, -2)]);
        assert_eq!(g2.collision_count(2), 4);
        assert_eq!(g2.collision_count(3), 3);
    }

    #[test]
    fn add_sub_cancel() {
        let ring = zq(101);
        let f = z33_3(ring);
        assert!(f.sub(&f).is_zero());
        let just3 = SparsePoly::from_pairs(ring, &[(3, 1)]);
        let diff = f.sub(&just3);
        assert_eq!(diff, SparsePoly::from_pairs(ring, &[(33, 1)]));
    }

    #[test]
    fn example_four_difference_has_four_terms() {
        let ring = zq(101);
        let g = SparsePoly::from_pairs(
            ring,
            &[(0, 1), (1, 1), (2, 1), (3, 1), (15, 1), (158, -1), (169, -1)],
        );
        let fss = SparsePoly::from_pairs(ring, &[(0, 1), (1, 1), (2, 1), (3, 1), (113, -1)]);
        let diff = g.sub(&fss);
        assert_eq!(diff.sparsity(), 4);
        assert_eq!(
            diff,
            SparsePoly::from_pairs(ring, &[(15, 1), (113, 1), (158, -1), (169, -1)])
        );
    }

    #[test]
    fn sandwich_between_lost_terms_and_collisions() {
        // t - s <= C(p) <= 2(t - s) for random instances and primes.
        let ring = zq(101);
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let table = PrimeTable::up_to(4000);
        for _ in 0..300 {
            let t = rng.gen_range(1..=64);
            let g = SparsePoly::random(ring, t, 1_000_000, &mut rng).unwrap();
            let p = table.primes()[rng.gen_range(0..table.primes().len())];
            let t = g.sparsity();
            let s = g.reduce_mod_cyclic(p).sparsity();
            let c = g.collision_count(p);
            assert!(t - s <= c, "lower bound failed: t={t} s={s} C={c} p={p}");
            assert!(c <= 2 * (t - s), "upper bound failed: t={t} s={s} C={c} p={p}");
        }
    }

    #[test]
    fn higher_sparsity_image_has_bounded_collisions() {
        // If the p-image keeps at least as many terms as the q-image,
        // then C(p) <= 2 C(q).
        let ring = zq(101);
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let table = PrimeTable::up_to(4000);
        let mut checked = 0;
        while checked < 200 {
            let t = rng.gen_range(2..=48);
            let g = SparsePoly::random(ring, t, 500_000, &mut rng).unwrap();
            let p = table.primes()[rng.gen_range(0..table.primes().len())];
            let q = table.primes()[rng.gen_range(0..table.primes().len())];
            let sp = g.reduce_mod_cyclic(p).sparsity();
            let sq = g.reduce_mod_cyclic(q).sparsity();
            if sp < sq {
                continue;
            }
            assert!(g.collision_count(p) <= 2 * g.collision_count(q));
            checked += 1;
        }
    }

    #[test]
    fn parse_round_trip() {
        let ring = zq(101);
        let text = "# a comment\n1 3\n\n100 33  # inline note\n";
        let f = SparsePoly::parse(text, ring).unwrap();
        assert_eq!(f, SparsePoly::from_pairs(ring, &[(3, 1), (33, -1)]));
        let reparsed = SparsePoly::parse(&f.to_sparse_text(), ring).unwrap();
        assert_eq!(f, reparsed);
    }

    #[test]
    fn parse_rejects_malformed_lines() {
        let ring = zq(101);
        assert!(SparsePoly::parse("3", ring).is_err());
        assert!(SparsePoly::parse("a b", ring).is_err());
        assert!(SparsePoly::parse("1 2 3", ring).is_err());
        assert!(SparsePoly::parse("1 -2", ring).is_err());
    }

    #[test]
    fn evaluate_matches_horner_by_hand() {
        let ring = zq(7);
        let f = SparsePoly::from_pairs(ring, &[(0, 1), (2, 3)]);
        // 1 + 3x^2 at x = 2 is 13 = 6 mod 7.
        assert_eq!(f.evaluate(&ring.from_i64(2)), ring.from_i64(6));
        assert_eq!(f.evaluate(&ring.from_i64(0)), ring.one());
    }

    proptest::proptest! {
        #[test]
        fn serialization_round_trips(seed in proptest::prelude::any::<u64>()) {
            let ring = zq(10_007);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let t = rng.gen_range(0..=30);
            let f = SparsePoly::random(ring, t, 1u64 << 40, &mut rng).unwrap();
            let reparsed = SparsePoly::parse(&f.to_sparse_text(), ring).unwrap();
            proptest::prop_assert_eq!(f, reparsed);
        }

        #[test]
        fn add_then_sub_is_identity(seed in proptest::prelude::any::<u64>()) {
            let ring = zq(997);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let a = SparsePoly::random(ring, rng.gen_range(0..=20), 4096, &mut rng).unwrap();
            let b = SparsePoly::random(ring, rng.gen_range(0..=20), 4096, &mut rng).unwrap();
            proptest::prop_assert_eq!(a.add(&b).sub(&b), a);
        }
    }
}
