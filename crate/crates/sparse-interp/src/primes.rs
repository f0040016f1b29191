//! Prime sieving, uniform random prime selection from a doubling range,
//! and the pairwise-coprime moduli set used to reconstruct exponents.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::Rng;

/// Deterministic Miller-Rabin, valid for all u64 inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // This witness set is known to be exact for every n < 3.3 * 10^24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// All primes up to a bound, produced by a sieve of Eratosthenes.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    bound: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn up_to(bound: u64) -> Self {
        assert!(bound >= 2, "sieve bound must be at least 2");
        let n = bound as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if composite[i] {
                continue;
            }
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        PrimeTable { bound, primes }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes p with lo <= p <= hi. The table must cover hi.
    pub fn primes_in(&self, lo: u64, hi: u64) -> &[u64] {
        assert!(hi <= self.bound, "prime table covers only up to {}", self.bound);
        let start = self.primes.partition_point(|&p| p < lo);
        let end = self.primes.partition_point(|&p| p <= hi);
        &self.primes[start..end]
    }

    /// Uniform random prime in [range_start, 2*range_start], sampled with replacement
    /// across calls. The table must cover 2*range_start.
    pub fn random_prime_in<R: Rng + ?Sized>(&self, range_start: u64, rng: &mut R) -> u64 {
        assert!(range_start >= 2, "prime sampling range needs range_start >= 2");
        let range = self.primes_in(range_start, 2 * range_start);
        assert!(
            !range.is_empty(),
            "no primes in [{range_start}, {}]",
            2 * range_start
        );
        range[rng.gen_range(0..range.len())]
    }

    /// Grow the table if needed so that it covers `bound`.
    pub fn ensure_bound(&mut self, bound: u64) {
        if bound > self.bound {
            *self = PrimeTable::up_to(bound);
        }
    }
}

/// The first `count` primes, ascending.
pub fn first_primes(count: usize) -> Vec<u64> {
    assert!(count >= 1);
    let mut bound = 32u64.max((count as f64 * ((count as f64).ln().max(1.0) + 2.0)) as u64);
    loop {
        let table = PrimeTable::up_to(bound);
        if table.primes().len() >= count {
            return table.primes()[..count].to_vec();
        }
        bound *= 2;
    }
}

/// Pairwise-coprime moduli: for each prime p <= x, the greatest power of p
/// not exceeding x. Built so that the product exceeds the degree bound it
/// was constructed for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliSet {
    x: u64,
    moduli: Vec<u64>,
}

impl ModuliSet {
    /// Moduli for a degree bound `degree_bound >= 1` using the threshold
    /// x = max(ceil(2 ln degree_bound), 17).
    pub fn for_degree_bound(degree_bound: u64) -> Self {
        assert!(degree_bound >= 1, "degree bound must be at least 1");
        let x = ((2.0 * (degree_bound as f64).ln()).ceil() as u64).max(17);
        let table = PrimeTable::up_to(x);
        let moduli = table
            .primes()
            .iter()
            .map(|&p| {
                let mut q = p;
                while q <= x / p {
                    q *= p;
                }
                q
            })
            .collect();
        let set = ModuliSet { x, moduli };
        debug_assert!(set.product() > BigUint::from(degree_bound));
        set
    }

    /// An explicit moduli set; the entries must be pairwise coprime.
    pub fn from_moduli(moduli: Vec<u64>) -> Result<Self, String> {
        if moduli.is_empty() {
            return Err("moduli set must not be empty".into());
        }
        for (i, &a) in moduli.iter().enumerate() {
            if a < 2 {
                return Err(format!("modulus {a} is smaller than 2"));
            }
            for &b in &moduli[i + 1..] {
                if a.gcd(&b) != 1 {
                    return Err(format!("moduli {a} and {b} are not coprime"));
                }
            }
        }
        let x = *moduli.iter().max().unwrap();
        Ok(ModuliSet { x, moduli })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn max_modulus(&self) -> u64 {
        *self.moduli.iter().max().unwrap()
    }

    pub fn product(&self) -> BigUint {
        self.moduli
            .iter()
            .fold(BigUint::one(), |acc, &q| acc * BigUint::from(q))
    }
}
