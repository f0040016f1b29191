//! Kronecker substitution: packs an N-variate exponent vector with partial
//! degrees at most D into a single exponent in base D+1, so a multivariate
//! interpolation problem becomes a univariate one with the same term count.

use num_bigint::BigUint;
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KroneckerMap {
    num_vars: usize,
    partial_degree_bound: u64,
}

impl KroneckerMap {
    pub fn new(num_vars: usize, partial_degree_bound: u64) -> Self {
        assert!(num_vars >= 1, "need at least one variable");
        KroneckerMap { num_vars, partial_degree_bound }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn partial_degree_bound(&self) -> u64 {
        self.partial_degree_bound
    }

    fn radix(&self) -> BigUint {
        BigUint::from(self.partial_degree_bound) + 1u32
    }

    /// (a_0, ..., a_{N-1}) -> sum of a_j * (D+1)^j. Every component must be
    /// at most the partial degree bound.
    pub fn forward(&self, exponents: &[BigUint]) -> BigUint {
        assert_eq!(exponents.len(), self.num_vars, "wrong exponent vector length");
        let radix = self.radix();
        let mut acc = BigUint::zero();
        let mut weight = BigUint::one();
        for (j, a) in exponents.iter().enumerate() {
            assert!(
                *a <= BigUint::from(self.partial_degree_bound),
                "component {j} exceeds the partial degree bound"
            );
            acc += a * &weight;
            weight *= &radix;
        }
        acc
    }

    /// Base-(D+1) digit extraction; inverse of [`KroneckerMap::forward`].
    pub fn inverse(&self, packed: &BigUint) -> Vec<BigUint> {
        assert!(
            *packed < self.radix().pow(self.num_vars as u32),
            "packed exponent out of range"
        );
        let radix = self.radix();
        let mut rest = packed.clone();
        let mut out = Vec::with_capacity(self.num_vars);
        for _ in 0..self.num_vars {
            out.push(&rest % &radix);
            rest /= &radix;
        }
        out
    }

    /// Degree bound of the packed univariate polynomial: (D+1)^N - 1.
    pub fn univariate_degree_bound(&self) -> BigUint {
        self.radix().pow(self.num_vars as u32) - 1u32
    }

    /// The probe substitution: input j is bound to z^((D+1)^j).
    pub fn input_exponents(&self) -> Vec<BigUint> {
        let radix = self.radix();
        let mut out = Vec::with_capacity(self.num_vars);
        let mut weight = BigUint::one();
        for _ in 0..self.num_vars {
            out.push(weight.clone());
            weight *= &radix;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn packs_x_plus_y_squared() {
        // f(x, y) = x + y^2 with D = 2 becomes z + z^6.
        let map = KroneckerMap::new(2, 2);
        let x = map.forward(&[BigUint::one(), BigUint::zero()]);
        let y2 = map.forward(&[BigUint::zero(), BigUint::from(2u32)]);
        assert_eq!(x, BigUint::one());
        assert_eq!(y2, BigUint::from(6u32));
        assert_eq!(map.univariate_degree_bound(), BigUint::from(8u32));
        assert_eq!(
            map.input_exponents(),
            vec![BigUint::one(), BigUint::from(3u32)]
        );
    }

    #[test]
    fn single_variable_is_identity() {
        let map = KroneckerMap::new(1, 100);
        for e in [0u32, 1, 57, 100] {
            let packed = map.forward(&[BigUint::from(e)]);
            assert_eq!(packed, BigUint::from(e));
            assert_eq!(map.inverse(&packed), vec![BigUint::from(e)]);
        }
    }

    #[test]
    fn round_trips_random_vectors() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=4);
            let d = rng.gen_range(1..=100u64);
            let map = KroneckerMap::new(n, d);
            let vector: Vec<BigUint> =
                (0..n).map(|_| BigUint::from(rng.gen_range(0..=d))).collect();
            assert_eq!(map.inverse(&map.forward(&vector)), vector);
        }
    }

    #[test]
    #[should_panic(expected = "exceeds the partial degree bound")]
    fn rejects_out_of_range_components() {
        let map = KroneckerMap::new(2, 5);
        map.forward(&[BigUint::from(6u32), BigUint::zero()]);
    }
}
