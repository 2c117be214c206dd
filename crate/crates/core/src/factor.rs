//! Factorization of norms. Trial division to a fixed bound, then Miller-Rabin and
//! Brent's variant of Pollard rho under an iteration budget. Whatever cannot be
//! split within the budget is reported as a cofactor, never dropped.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::primes_up_to;

pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;
pub const DEFAULT_RHO_BUDGET: u64 = 200_000;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_DIVISION_BOUND))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Prime factors in increasing order.
    pub primes: Vec<(BigUint, u32)>,
    /// Product of the factors that could not be split within the budget. Composite.
    pub cofactor: Option<BigUint>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }

    /// Product of all reported prime powers and the cofactor.
    pub fn value(&self) -> BigUint {
        let mut acc = self.cofactor.clone().unwrap_or_else(BigUint::one);
        for (p, e) in &self.primes {
            acc *= p.pow(*e);
        }
        acc
    }

    pub fn prime_list(&self) -> Vec<BigUint> {
        self.primes.iter().map(|(p, _)| p.clone()).collect()
    }

    /// `2^3·7^3` style rendering; `1` for the empty product.
    pub fn render(&self) -> String {
        let mut parts: Vec<String> = self
            .primes
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        if let Some(c) = &self.cofactor {
            parts.push(format!("[{c}]"));
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("·")
        }
    }
}

/// Factor `n > 0`. `n = 0` yields an empty factorization with cofactor 0.
pub fn factorize(n: &BigUint, rho_budget: u64) -> Factorization {
    if n.is_zero() {
        return Factorization { primes: Vec::new(), cofactor: Some(BigUint::zero()) };
    }
    let mut rest = n.clone();
    let mut primes: Vec<(BigUint, u32)> = Vec::new();
    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        if BigUint::from(p * p) > rest {
            break;
        }
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            primes.push((BigUint::from(p), e));
        }
    }
    let mut unsplit = Vec::new();
    if !rest.is_one() {
        let mut stack = vec![rest];
        let mut budget = rho_budget;
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if is_probable_prime(&m) {
                push_prime(&mut primes, m);
                continue;
            }
            match pollard_brent(&m, &mut budget) {
                Some(d) => {
                    let other = &m / &d;
                    stack.push(d);
                    stack.push(other);
                }
                None => unsplit.push(m),
            }
        }
    }
    primes.sort();
    let cofactor = if unsplit.is_empty() {
        None
    } else {
        Some(unsplit.into_iter().fold(BigUint::one(), |a, b| a * b))
    };
    Factorization { primes, cofactor }
}

fn push_prime(primes: &mut Vec<(BigUint, u32)>, p: BigUint) {
    if let Some(entry) = primes.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += 1;
    } else {
        primes.push((p, 1));
    }
}

/// Miller-Rabin with the first twenty prime bases. Exact below 3.3·10^24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return crate::arith::is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle-finding rho. Consumes iterations from `budget`.
fn pollard_brent(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    for c in 1u32..50 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 64u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = m.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                if *budget < steps {
                    return None;
                }
                *budget -= steps;
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}
