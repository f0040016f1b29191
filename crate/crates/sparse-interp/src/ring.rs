//! Base-ring arithmetic and the cyclic quotient ring R[z]/(z^l - 1).
//!
//! Two base rings are supported: Z_q for a word-size prime q, and the
//! arbitrary-precision integers. Every probe result lives in the cyclic
//! ring, represented densely by a coefficient vector of length exactly
//! the quotient order.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::primes::is_prime_u64;

/// Largest admissible prime-field modulus. Keeping q below 2^63 lets sums
/// of two canonical representatives fit in a u64 and products in a u128.
pub const MAX_PRIME_MODULUS: u64 = (1u64 << 63) - 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingError {
    NotPrime(u64),
    ModulusTooLarge(u64),
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::NotPrime(q) => write!(f, "modulus {q} is not prime"),
            RingError::ModulusTooLarge(q) => {
                write!(f, "modulus {q} exceeds the supported word size (< 2^63)")
            }
        }
    }
}

impl std::error::Error for RingError {}

/// The coefficient ring shared by a polynomial, an SLP and its probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingSpec {
    /// Z_q, q prime and below [`MAX_PRIME_MODULUS`].
    PrimeField { modulus: u64 },
    /// The integers with arbitrary-precision arithmetic.
    Integers,
}

impl RingSpec {
    /// Z_q after a deterministic primality check of q.
    pub fn prime_field(modulus: u64) -> Result<Self, RingError> {
        if modulus > MAX_PRIME_MODULUS {
            return Err(RingError::ModulusTooLarge(modulus));
        }
        if !is_prime_u64(modulus) {
            return Err(RingError::NotPrime(modulus));
        }
        Ok(RingSpec::PrimeField { modulus })
    }

    pub fn integers() -> Self {
        RingSpec::Integers
    }

    pub fn zero(&self) -> RingElem {
        match self {
            RingSpec::PrimeField { .. } => RingElem::Fp(0),
            RingSpec::Integers => RingElem::Int(BigInt::zero()),
        }
    }

    pub fn one(&self) -> RingElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> RingElem {
        self.from_bigint(&BigInt::from(v))
    }

    /// Canonicalize an arbitrary integer into the ring.
    pub fn from_bigint(&self, v: &BigInt) -> RingElem {
        match self {
            RingSpec::PrimeField { modulus } => {
                let q = BigInt::from(*modulus);
                let r = v.mod_floor(&q);
                RingElem::Fp(r.to_u64().expect("reduced representative fits u64"))
            }
            RingSpec::Integers => RingElem::Int(v.clone()),
        }
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        match (self, a, b) {
            (RingSpec::PrimeField { modulus }, RingElem::Fp(x), RingElem::Fp(y)) => {
                let s = x + y; // no overflow: both < q <= 2^63 - 1
                RingElem::Fp(if s >= *modulus { s - modulus } else { s })
            }
            (RingSpec::Integers, RingElem::Int(x), RingElem::Int(y)) => RingElem::Int(x + y),
            _ => panic!("ring element does not belong to this ring"),
        }
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        match (self, a, b) {
            (RingSpec::PrimeField { modulus }, RingElem::Fp(x), RingElem::Fp(y)) => {
                RingElem::Fp(if x >= y { x - y } else { x + modulus - y })
            }
            (RingSpec::Integers, RingElem::Int(x), RingElem::Int(y)) => RingElem::Int(x - y),
            _ => panic!("ring element does not belong to this ring"),
        }
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        match (self, a, b) {
            (RingSpec::PrimeField { modulus }, RingElem::Fp(x), RingElem::Fp(y)) => {
                RingElem::Fp(((*x as u128 * *y as u128) % *modulus as u128) as u64)
            }
            (RingSpec::Integers, RingElem::Int(x), RingElem::Int(y)) => RingElem::Int(x * y),
            _ => panic!("ring element does not belong to this ring"),
        }
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        self.sub(&self.zero(), a)
    }

    /// Parse a signed decimal integer and canonicalize it.
    pub fn parse_elem(&self, text: &str) -> Result<RingElem, String> {
        let v: BigInt = text
            .parse()
            .map_err(|_| format!("`{text}` is not a decimal integer"))?;
        Ok(self.from_bigint(&v))
    }

    /// Uniform nonzero element; used by the instance generators.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElem {
        match self {
            RingSpec::PrimeField { modulus } => RingElem::Fp(rng.gen_range(1..*modulus)),
            RingSpec::Integers => {
                let mut v = 0i64;
                while v == 0 {
                    v = rng.gen_range(-999..=999);
                }
                RingElem::Int(BigInt::from(v))
            }
        }
    }
}

/// An element of the base ring, always kept in canonical form:
/// representatives in [0, q) for prime fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingElem {
    Fp(u64),
    Int(BigInt),
}

impl RingElem {
    pub fn is_zero(&self) -> bool {
        match self {
            RingElem::Fp(v) => *v == 0,
            RingElem::Int(v) => v.is_zero(),
        }
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElem::Fp(v) => write!(f, "{v}"),
            RingElem::Int(v) => write!(f, "{v}"),
        }
    }
}

/// Dense element of R[z]/(z^order - 1). The coefficient vector has length
/// exactly `order`; mixing orders or rings in an operation is a contract
/// violation and panics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicPoly {
    ring: RingSpec,
    coeffs: Vec<RingElem>,
}

impl CyclicPoly {
    pub fn zero(ring: RingSpec, order: u64) -> Self {
        assert!(order >= 1, "cyclic quotient order must be at least 1");
        CyclicPoly {
            ring,
            coeffs: vec![ring.zero(); order as usize],
        }
    }

    pub fn from_coeffs(ring: RingSpec, coeffs: Vec<RingElem>) -> Self {
        assert!(!coeffs.is_empty(), "cyclic quotient order must be at least 1");
        CyclicPoly { ring, coeffs }
    }

    /// The monomial c * z^(e mod order).
    pub fn monomial(ring: RingSpec, order: u64, exponent: u64, coeff: RingElem) -> Self {
        let mut p = CyclicPoly::zero(ring, order);
        let idx = (exponent % order) as usize;
        p.coeffs[idx] = coeff;
        p
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn order(&self) -> u64 {
        self.coeffs.len() as u64
    }

    pub fn coeff(&self, k: u64) -> &RingElem {
        &self.coeffs[k as usize]
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.coeffs
    }

    /// Nonzero coefficients as (position, coefficient), ascending.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &RingElem)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u64, c))
    }

    /// Number of nonzero coefficients.
    pub fn sparsity(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RingElem::is_zero)
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(
            self.ring, other.ring,
            "cyclic elements belong to different rings"
        );
        assert_eq!(
            self.coeffs.len(),
            other.coeffs.len(),
            "cyclic elements have different quotient orders"
        );
    }

    pub fn cyclic_add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        CyclicPoly {
            ring: self.ring,
            coeffs,
        }
    }

    pub fn cyclic_sub(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.sub(a, b))
            .collect();
        CyclicPoly {
            ring: self.ring,
            coeffs,
        }
    }

    /// Cyclic convolution: coefficient k of the result is the sum of
    /// a_i * b_j over all i + j = k (mod order). Schoolbook; always exact.
    pub fn cyclic_mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let n = self.coeffs.len();
        let mut out = vec![self.ring.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut k = i + j;
                if k >= n {
                    k -= n;
                }
                out[k] = self.ring.add(&out[k], &self.ring.mul(a, b));
            }
        }
        CyclicPoly {
            ring: self.ring,
            coeffs: out,
        }
    }
}

impl fmt::Display for CyclicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
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
            match k {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}*z")?,
                _ => write!(f, "{coeff}*z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn zq(q: u64) -> RingSpec {
        RingSpec::prime_field(q).unwrap()
    }

    /// Independent oracle: full schoolbook product of degree 2n-2, then
    /// fold coefficient k+n onto k.
    fn schoolbook_then_fold(a: &CyclicPoly, b: &CyclicPoly) -> CyclicPoly {
        let ring = a.ring();
        let n = a.order() as usize;
        let mut wide = vec![ring.zero(); 2 * n - 1];
        for i in 0..n {
            for j in 0..n {
                let prod = ring.mul(a.coeff(i as u64), b.coeff(j as u64));
                wide[i + j] = ring.add(&wide[i + j], &prod);
            }
        }
        let mut folded: Vec<RingElem> = wide[..n].to_vec();
        for (k, c) in wide[n..].iter().enumerate() {
            folded[k] = ring.add(&folded[k], c);
        }
        CyclicPoly::from_coeffs(ring, folded)
    }

    fn random_poly(ring: RingSpec, order: u64, rng: &mut impl Rng) -> CyclicPoly {
        let coeffs = (0..order)
            .map(|_| ring.from_i64(rng.gen_range(-200..200)))
            .collect();
        CyclicPoly::from_coeffs(ring, coeffs)
    }

    #[test]
    fn modulus_must_be_prime() {
        assert!(RingSpec::prime_field(2).is_ok());
        assert!(RingSpec::prime_field(101).is_ok());
        assert_eq!(RingSpec::prime_field(1), Err(RingError::NotPrime(1)));
        assert_eq!(RingSpec::prime_field(91), Err(RingError::NotPrime(91)));
        assert!(matches!(
            RingSpec::prime_field(u64::MAX),
            Err(RingError::ModulusTooLarge(_))
        ));
    }

    #[test]
    fn canonicalizes_negative_constants() {
        let ring = zq(7);
        assert_eq!(ring.from_i64(-1), RingElem::Fp(6));
        assert_eq!(ring.from_i64(-14), RingElem::Fp(0));
        let z = RingSpec::integers();
        assert_eq!(z.from_i64(-14), RingElem::Int(BigInt::from(-14)));
    }

    #[test]
    fn z_times_z_wraps_at_order_two() {
        let ring = zq(101);
        let z = CyclicPoly::monomial(ring, 2, 1, ring.one());
        let prod = z.cyclic_mul(&z);
        assert_eq!(prod, CyclicPoly::monomial(ring, 2, 0, ring.one()));
    }

    #[test]
    fn monomial_product_wraps_at_order_five() {
        let ring = zq(101);
        let a = CyclicPoly::monomial(ring, 5, 3, ring.one());
        let b = CyclicPoly::monomial(ring, 5, 4, ring.one());
        assert_eq!(a.cyclic_mul(&b), CyclicPoly::monomial(ring, 5, 2, ring.one()));
    }

    #[test]
    fn mul_matches_fold_oracle_order_eight() {
        let ring = zq(101);
        let mut rng = rand::rngs::mock::StepRng::new(12345, 0x9e3779b97f4a7c15);
        for _ in 0..20 {
            let a = random_poly(ring, 8, &mut rng);
            let b = random_poly(ring, 8, &mut rng);
            assert_eq!(a.cyclic_mul(&b), schoolbook_then_fold(&a, &b));
        }
    }

    #[test]
    fn additive_identity_and_inverse() {
        let ring = zq(5);
        let mut rng = rand::rngs::mock::StepRng::new(7, 0x9e3779b97f4a7c15);
        let a = random_poly(ring, 3, &mut rng);
        let zero = CyclicPoly::zero(ring, 3);
        assert_eq!(a.cyclic_add(&zero), a);
        assert!(a.cyclic_sub(&a).is_zero());
    }

    #[test]
    fn componentwise_sum_mod_five() {
        // (1 + 2z) + (4 + 4z^2) over Z_5 = 2z + 4z^2
        let ring = zq(5);
        let a = CyclicPoly::from_coeffs(ring, vec![ring.from_i64(1), ring.from_i64(2), ring.zero()]);
        let b = CyclicPoly::from_coeffs(ring, vec![ring.from_i64(4), ring.zero(), ring.from_i64(4)]);
        let sum = a.cyclic_add(&b);
        assert_eq!(
            sum.coeffs(),
            &[ring.zero(), ring.from_i64(2), ring.from_i64(4)]
        );
    }

    #[test]
    fn sparsity_counts_nonzero_coefficients() {
        let ring = zq(13);
        assert_eq!(CyclicPoly::zero(ring, 6).sparsity(), 0);
        let p = CyclicPoly::from_coeffs(
            ring,
            vec![ring.zero(), ring.from_i64(3), ring.zero(), ring.from_i64(1)],
        );
        assert_eq!(p.sparsity(), 2);
    }

    #[test]
    #[should_panic(expected = "different quotient orders")]
    fn mixing_orders_panics() {
        let ring = zq(5);
        let a = CyclicPoly::zero(ring, 3);
        let b = CyclicPoly::zero(ring, 4);
        let _ = a.cyclic_add(&b);
    }

    #[test]
    fn integer_ring_is_exact() {
        let ring = RingSpec::integers();
        let big = ring.parse_elem("123456789012345678901234567890").unwrap();
        let prod = ring.mul(&big, &big);
        assert_eq!(
            prod,
            ring.parse_elem("15241578753238836750495351562536198787501905199875019052100")
                .unwrap()
        );
    }

    proptest! {
        #[test]
        fn ring_axioms_hold_cyclically(
            order in 1u64..16,
            seed in any::<u64>(),
        ) {
            use rand::SeedableRng;
            let ring = zq(97);
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let a = random_poly(ring, order, &mut rng);
            let b = random_poly(ring, order, &mut rng);
            let c = random_poly(ring, order, &mut rng);
            prop_assert_eq!(a.cyclic_mul(&b), b.cyclic_mul(&a));
            prop_assert_eq!(
                a.cyclic_mul(&b.cyclic_mul(&c)),
                a.cyclic_mul(&b).cyclic_mul(&c)
            );
            prop_assert_eq!(
                a.cyclic_mul(&b.cyclic_add(&c)),
                a.cyclic_mul(&b).cyclic_add(&a.cyclic_mul(&c))
            );
        }

        #[test]
        fn every_result_is_canonical(order in 1u64..12, seed in any::<u64>()) {
            use rand::SeedableRng;
            let q = 97u64;
            let ring = zq(q);
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let a = random_poly(ring, order, &mut rng);
            let b = random_poly(ring, order, &mut rng);
            for p in [a.cyclic_add(&b), a.cyclic_sub(&b), a.cyclic_mul(&b)] {
                for c in p.coeffs() {
                    match c {
                        RingElem::Fp(v) => prop_assert!(*v < q),
                        RingElem::Int(_) => prop_assert!(false, "wrong ring"),
                    }
                }
            }
        }

        #[test]
        fn mul_matches_fold_oracle(order in 1u64..24, seed in any::<u64>()) {
            use rand::SeedableRng;
            let ring = zq(101);
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let a = random_poly(ring, order, &mut rng);
            let b = random_poly(ring, order, &mut rng);
            prop_assert_eq!(a.cyclic_mul(&b), schoolbook_then_fold(&a, &b));
        }
    }
}
