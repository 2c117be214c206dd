//! Word-size primes `ℓ ≡ 1 (mod n)` carrying a primitive n-th root of unity,
//! determinants over F_ℓ, and CRT reconstruction of signed integers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{inv_mod, is_prime_u64, mul_mod, pow_mod, prime_divisors};

/// A prime `ℓ ≡ 1 (mod n)` together with a primitive n-th root of unity in F_ℓ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootPrime {
    pub ell: u64,
    pub root: u64,
}

const PRIME_CEILING: u64 = 1 << 62;

fn cache() -> &'static Mutex<HashMap<u64, Arc<Vec<RootPrime>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<RootPrime>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The first `count` primes `ℓ ≡ 1 (mod n)` below 2^62, in decreasing order.
/// Deterministic; results are memoized per `n`.
pub fn root_primes(n: u64, count: usize) -> Arc<Vec<RootPrime>> {
    assert!(n >= 1);
    if let Some(list) = cache().lock().unwrap().get(&n) {
        if list.len() >= count {
            return Arc::clone(list);
        }
    }
    let mut list: Vec<RootPrime> = cache()
        .lock()
        .unwrap()
        .get(&n)
        .map(|l| l.as_ref().clone())
        .unwrap_or_default();
    let mut k = match list.last() {
        Some(last) => (last.ell - 1) / n - 1,
        None => (PRIME_CEILING - 2) / n,
    };
    let divisors = prime_divisors(n);
    while list.len() < count {
        let ell = k * n + 1;
        k -= 1;
        if !is_prime_u64(ell) {
            continue;
        }
        let root = primitive_root_of_unity(ell, n, &divisors);
        list.push(RootPrime { ell, root });
    }
    let list = Arc::new(list);
    cache().lock().unwrap().insert(n, Arc::clone(&list));
    list
}

fn primitive_root_of_unity(ell: u64, n: u64, divisors: &[u64]) -> u64 {
    let cofactor = (ell - 1) / n;
    for x in 2..ell {
        let r = pow_mod(x, cofactor, ell);
        if divisors.iter().all(|&p| pow_mod(r, n / p, ell) != 1) {
            return r;
        }
    }
    unreachable!("F_ℓ* is cyclic of order divisible by n")
}

/// Determinant over F_ℓ by Gaussian elimination; the matrix is consumed.
pub fn det_mod(mut m: Vec<Vec<u64>>, ell: u64) -> u64 {
    let n = m.len();
    // cross-multiplied elimination: each scaled row multiplies the determinant
    // by the pivot, collected in `scale` and divided out once at the end
    let mut det = 1u64;
    let mut scale = 1u64;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| m[r][k] != 0) else {
            return 0;
        };
        if p != k {
            m.swap(p, k);
            det = (ell - det) % ell;
        }
        let pivot = m[k][k];
        det = mul_mod(det, pivot, ell);
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            let f = row[k];
            if f == 0 {
                continue;
            }
            scale = mul_mod(scale, pivot, ell);
            for j in k + 1..n {
                let a = mul_mod(row[j], pivot, ell);
                let b = mul_mod(f, pivot_row[j], ell);
                row[j] = if a >= b { a - b } else { a + ell - b };
            }
        }
    }
    mul_mod(det, inv_mod(scale, ell).expect("pivots are units"), ell)
}

/// Incremental Chinese remaindering of a signed integer.
#[derive(Clone, Debug)]
pub struct CrtAccumulator {
    residue: BigInt,
    modulus: BigInt,
}

impl Default for CrtAccumulator {
    fn default() -> Self {
        CrtAccumulator { residue: BigInt::zero(), modulus: BigInt::one() }
    }
}

impl CrtAccumulator {
    pub fn add(&mut self, r: u64, ell: u64) {
        let cur = crate::arith::big_mod_u64(&self.residue, ell);
        let m_mod = crate::arith::big_mod_u64(&self.modulus, ell);
        let diff = (r + ell - cur) % ell;
        let t = mul_mod(diff, inv_mod(m_mod, ell).expect("coprime moduli"), ell);
        self.residue += &self.modulus * BigInt::from(t);
        self.modulus *= BigInt::from(ell);
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// True once every integer of absolute value at most `bound` is determined.
    pub fn covers(&self, bound: &BigInt) -> bool {
        self.modulus > BigInt::from(2) * bound
    }

    /// The representative in `(-M/2, M/2]`.
    pub fn symmetric(&self) -> BigInt {
        let half = &self.modulus >> 1;
        let r = self.residue.mod_floor(&self.modulus);
        if r > half {
            r - &self.modulus
        } else {
            r
        }
    }
}

/// Reconstructs an integer of absolute value at most `bound` from its residues,
/// pulling primes `≡ 1 (mod n)` until the product exceeds `2·bound`.
/// `residue_at` receives each prime and must return the value modulo it.
pub fn reconstruct<F>(n: u64, bound: &BigInt, mut residue_at: F) -> BigInt
where
    F: FnMut(&RootPrime) -> u64,
{
    let mut acc = CrtAccumulator::default();
    let mut used = 0usize;
    loop {
        let primes = root_primes(n, used + 4);
        while used < primes.len() {
            let rp = &primes[used];
            used += 1;
            acc.add(residue_at(rp), rp.ell);
            if acc.covers(bound) {
                return acc.symmetric();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_primes_are_valid() {
        for n in [1u64, 2, 6, 7, 21, 30] {
            let primes = root_primes(n, 3);
            for rp in primes.iter().take(3) {
                assert!(is_prime_u64(rp.ell));
                assert_eq!((rp.ell - 1) % n, 0);
                assert_eq!(pow_mod(rp.root, n, rp.ell), 1);
                for p in prime_divisors(n) {
                    assert_ne!(pow_mod(rp.root, n / p, rp.ell), 1);
                }
            }
        }
    }

    #[test]
    fn crt_reconstructs_negative_values() {
        let target = BigInt::parse_bytes(b"-123456789012345678901234567890123", 10).unwrap();
        let bound = BigInt::from(10).pow(40);
        let v = reconstruct(5, &bound, |rp| crate::arith::big_mod_u64(&target, rp.ell));
        assert_eq!(v, target);
    }

    #[test]
    fn small_determinant() {
        let ell = 1_000_000_007;
        let m = vec![vec![2, 3], vec![5, 7]];
        assert_eq!(det_mod(m, ell), ell - 1);
        assert_eq!(det_mod(vec![vec![0, 1], vec![1, 0]], ell), ell - 1);
    }
}
