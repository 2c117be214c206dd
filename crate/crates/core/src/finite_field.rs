//! F_{q^f} realized as F_q[X]/(g), g the smallest irreducible factor of Φ_n mod q.
//! The class of X is then a primitive n-th root of unity ζ.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{big_mod_u64, inv_mod, is_prime_u64, mul_mod, prime_divisors};
use crate::cyclotomic::cyclotomic_poly;
use crate::error::{Error, Result};

/// Smallest `f ≥ 1` with `q^f ≡ 1 (mod n)`.
pub fn mult_order(q: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    crate::arith::mult_order(q, n).ok_or(Error::NotCoprime { k: q as i64, n })
}

/// Element of F_{q^f}: exactly f residues in `[0, q)`, coefficient of X^i at index i.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FFElt {
    coeffs: Vec<u64>,
}

impl FFElt {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

impl fmt::Debug for FFElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FFElt{:?}", self.coeffs)
    }
}

#[derive(Clone, Debug)]
pub struct FiniteFieldCtx {
    q: u64,
    n: u64,
    f: usize,
    /// Monic, low-order coefficient first, length f + 1.
    modulus: Vec<u64>,
    zeta: FFElt,
}

/// Builds F_q(ζ_n). The factor of Φ_n chosen is the smallest when coefficient
/// vectors are compared from the top degree down, so the result is reproducible.
pub fn build_field(n: u64, q: u64) -> Result<FiniteFieldCtx> {
    if !is_prime_u64(q) {
        return Err(Error::NotPrime(q));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n % q == 0 {
        return Err(Error::CharacteristicDividesOrder { q, n });
    }
    let f = mult_order(q, n)? as usize;
    let phi: Vec<u64> = cyclotomic_poly(n).coeffs().iter().map(|c| big_mod_u64(c, q)).collect();
    let mut factors = equal_degree_factors(&phi, f, q);
    factors.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    let modulus = factors.swap_remove(0);
    let zeta = if f == 1 {
        // g = X - r, so X ≡ r
        FFElt { coeffs: vec![(q - modulus[0]) % q] }
    } else {
        let mut c = vec![0; f];
        c[1] = 1;
        FFElt { coeffs: c }
    };
    Ok(FiniteFieldCtx { q, n, f, modulus, zeta })
}

impl FiniteFieldCtx {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zeta(&self) -> &FFElt {
        &self.zeta
    }

    pub fn zero(&self) -> FFElt {
        FFElt { coeffs: vec![0; self.f] }
    }

    pub fn one(&self) -> FFElt {
        self.from_int(1)
    }

    pub fn from_int(&self, c: i64) -> FFElt {
        let mut e = self.zero();
        e.coeffs[0] = c.rem_euclid(self.q as i64) as u64;
        e
    }

    /// Element from a polynomial in X, reduced modulo (q, g).
    pub fn from_poly(&self, p: &[u64]) -> FFElt {
        let p: Vec<u64> = p.iter().map(|c| c % self.q).collect();
        self.pad(poly_rem(&p, &self.modulus, self.q))
    }

    fn pad(&self, mut v: Vec<u64>) -> FFElt {
        v.resize(self.f, 0);
        FFElt { coeffs: v }
    }

    /// `ζ^k` for any integer exponent.
    pub fn zeta_pow(&self, k: i64) -> FFElt {
        self.pow(&self.zeta, k.rem_euclid(self.n as i64) as u64)
    }

    pub fn is_zero(&self, a: &FFElt) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &FFElt) -> bool {
        a.coeffs[0] == 1 % self.q && a.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FFElt, b: &FFElt) -> FFElt {
        let q = self.q;
        FFElt { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| add_mod(x, y, q)).collect() }
    }

    pub fn sub(&self, a: &FFElt, b: &FFElt) -> FFElt {
        let q = self.q;
        FFElt { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| sub_mod(x, y, q)).collect() }
    }

    pub fn neg(&self, a: &FFElt) -> FFElt {
        let q = self.q;
        FFElt { coeffs: a.coeffs.iter().map(|&x| sub_mod(0, x, q)).collect() }
    }

    pub fn mul(&self, a: &FFElt, b: &FFElt) -> FFElt {
        if self.f == 1 {
            return FFElt { coeffs: vec![mul_mod(a.coeffs[0], b.coeffs[0], self.q)] };
        }
        let prod = poly_mul(&a.coeffs, &b.coeffs, self.q);
        self.pad(poly_rem(&prod, &self.modulus, self.q))
    }

    pub fn pow(&self, a: &FFElt, mut e: u64) -> FFElt {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn frobenius(&self, a: &FFElt) -> FFElt {
        self.pow(a, self.q)
    }

    pub fn inv(&self, a: &FFElt) -> Result<FFElt> {
        if self.is_zero(a) {
            return Err(Error::ZeroInverse);
        }
        if self.f == 1 {
            return Ok(FFElt { coeffs: vec![inv_mod(a.coeffs[0], self.q).expect("field")] });
        }
        let inv = poly_inv_mod(&trim(a.coeffs.clone()), &self.modulus, self.q);
        Ok(self.pad(inv))
    }

    /// Determinant by Gaussian elimination; consumes the matrix.
    pub fn det(&self, mut m: Vec<Vec<FFElt>>) -> FFElt {
        let n = m.len();
        let mut det = self.one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !self.is_zero(&m[r][k])) else {
                return self.zero();
            };
            if p != k {
                m.swap(p, k);
                det = self.neg(&det);
            }
            det = self.mul(&det, &m[k][k]);
            let inv = self.inv(&m[k][k]).expect("nonzero pivot");
            for i in k + 1..n {
                if self.is_zero(&m[i][k]) {
                    continue;
                }
                let factor = self.mul(&m[i][k], &inv);
                for j in k..n {
                    let t = self.mul(&factor, &m[k][j]);
                    m[i][j] = self.sub(&m[i][j], &t);
                }
            }
        }
        det
    }

    /// True when ζ has exact multiplicative order n.
    pub fn zeta_is_primitive(&self) -> bool {
        self.is_one(&self.pow(&self.zeta, self.n))
            && prime_divisors(self.n).iter().all(|&p| !self.is_one(&self.pow(&self.zeta, self.n / p)))
    }
}

fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

// Polynomials over F_q as trimmed coefficient vectors, lowest degree first.

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, q), q);
        }
    }
    trim(out)
}

fn poly_sub(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| sub_mod(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0), q))
        .collect();
    trim(out)
}

fn make_monic(a: &[u64], q: u64) -> Vec<u64> {
    let lc = *a.last().expect("nonzero polynomial");
    let inv = inv_mod(lc, q).expect("field");
    a.iter().map(|&c| mul_mod(c, inv, q)).collect()
}

/// Quotient and remainder for an arbitrary nonzero divisor.
fn poly_div_rem(a: &[u64], d: &[u64], q: u64) -> (Vec<u64>, Vec<u64>) {
    let a = trim(a.to_vec());
    let dd = d.len() - 1;
    if a.len() <= dd {
        return (Vec::new(), a);
    }
    let inv = inv_mod(d[dd], q).expect("field");
    let mut rem = a;
    let mut quot = vec![0u64; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = mul_mod(rem[i], inv, q);
        if c == 0 {
            continue;
        }
        for (j, &dj) in d.iter().enumerate() {
            rem[i - dd + j] = sub_mod(rem[i - dd + j], mul_mod(c, dj, q), q);
        }
        quot[i - dd] = c;
    }
    rem.truncate(dd);
    (trim(quot), trim(rem))
}

fn poly_rem(a: &[u64], d: &[u64], q: u64) -> Vec<u64> {
    poly_div_rem(a, d, q).1
}

fn poly_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, q);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        make_monic(&a, q)
    }
}

/// Inverse of `a` modulo the irreducible `g` by the extended Euclidean algorithm.
fn poly_inv_mod(a: &[u64], g: &[u64], q: u64) -> Vec<u64> {
    let (mut r0, mut r1) = (g.to_vec(), trim(a.to_vec()));
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (quot, rem) = poly_div_rem(&r0, &r1, q);
        let s2 = poly_sub(&s0, &poly_mul(&quot, &s1, q), q);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    debug_assert_eq!(r0.len(), 1, "input not invertible");
    let c = inv_mod(r0[0], q).expect("field");
    poly_rem(&s0.iter().map(|&x| mul_mod(x, c, q)).collect::<Vec<_>>(), g, q)
}

fn poly_powmod(a: &[u64], e: &BigUint, g: &[u64], q: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let base = poly_rem(a, g, q);
    for i in (0..e.bits()).rev() {
        acc = poly_rem(&poly_mul(&acc, &acc, q), g, q);
        if e.bit(i) {
            acc = poly_rem(&poly_mul(&acc, &base, q), g, q);
        }
    }
    acc
}

/// Splits a squarefree monic `g` whose irreducible factors all have degree `f`
/// (Cantor–Zassenhaus; the trace map replaces the half-power in characteristic 2).
fn equal_degree_factors(g: &[u64], f: usize, q: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ q ^ ((g.len() as u64) << 32));
    let mut done = Vec::new();
    let mut pending = vec![trim(g.to_vec())];
    let half_exp = (BigUint::from(q).pow(f as u32) - BigUint::one()) >> 1;
    while let Some(h) = pending.pop() {
        let deg = h.len() - 1;
        if deg == f {
            done.push(h);
            continue;
        }
        loop {
            let a: Vec<u64> = trim((0..deg).map(|_| rng.gen_range(0..q)).collect());
            if a.is_empty() {
                continue;
            }
            let t = if q == 2 {
                let mut acc = a.clone();
                let mut pow = a.clone();
                for _ in 1..f {
                    pow = poly_rem(&poly_mul(&pow, &pow, q), &h, q);
                    acc = poly_sub(&acc, &pow, q);
                }
                acc
            } else {
                poly_sub(&poly_powmod(&a, &half_exp, &h, q), &[1], q)
            };
            let d = poly_gcd(&h, &t, q);
            if d.len() > 1 && d.len() < h.len() {
                let (other, rem) = poly_div_rem(&h, &d, q);
                debug_assert!(rem.is_empty());
                pending.push(d);
                pending.push(make_monic(&other, q));
                break;
            }
        }
    }
    done
}

/// Whether the monic `g` divides Φ_n modulo q.
pub fn divides_cyclotomic(g: &[u64], n: u64, q: u64) -> bool {
    let phi: Vec<u64> = cyclotomic_poly(n).coeffs().iter().map(|c| big_mod_u64(c, q)).collect();
    poly_rem(&phi, g, q).is_empty()
}

/// Coset representatives of ⟨q⟩ in (Z/n)^*. The twists `ζ ↦ ζ^k` over these k
/// move the fixed prime above q to every other prime above q exactly once.
pub fn twist_representatives(n: u64, q: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    let mut seen = vec![false; n as usize];
    let mut reps = Vec::new();
    for k in crate::arith::units(n) {
        if seen[k as usize] {
            continue;
        }
        reps.push(k);
        let mut x = k;
        while !seen[x as usize] {
            seen[x as usize] = true;
            x = mul_mod(x, q % n, n);
        }
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicative_orders() {
        assert_eq!(mult_order(2, 7).unwrap(), 3);
        assert_eq!(mult_order(3, 7).unwrap(), 6);
        assert_eq!(mult_order(5, 1).unwrap(), 1);
        assert!(mult_order(3, 6).is_err());
    }

    #[test]
    fn field_for_seven_over_two() {
        let ctx = build_field(7, 2).unwrap();
        assert_eq!(ctx.degree(), 3);
        // X^3 + X + 1 precedes X^3 + X^2 + 1
        assert_eq!(ctx.modulus(), &[1, 1, 0, 1]);
        assert!(divides_cyclotomic(ctx.modulus(), 7, 2));
        assert!(ctx.zeta_is_primitive());
    }

    #[test]
    fn prime_field_roots() {
        let ctx = build_field(6, 7).unwrap();
        assert_eq!(ctx.degree(), 1);
        assert!([3, 5].contains(&ctx.zeta().coeffs()[0]));
        let ctx = build_field(5, 11).unwrap();
        assert!([3, 4, 5, 9].contains(&ctx.zeta().coeffs()[0]));
        assert!(build_field(6, 3).is_err());
    }

    #[test]
    fn built_contexts_are_consistent() {
        for n in 1..=40u64 {
            for q in [2u64, 3, 5, 7, 11, 13, 31, 101] {
                if n % q == 0 {
                    continue;
                }
                let ctx = build_field(n, q).unwrap();
                assert_eq!(ctx.degree() as u64, mult_order(q, n).unwrap());
                assert!(divides_cyclotomic(ctx.modulus(), n, q), "n={n} q={q}");
                assert!(ctx.zeta_is_primitive(), "n={n} q={q}");
                let a = ctx.from_poly(&[3, 1, 4, 1, 5, 9, 2, 6]);
                let mut b = a.clone();
                for _ in 0..ctx.degree() {
                    b = ctx.frobenius(&b);
                }
                assert_eq!(a, b, "Frobenius n={n} q={q}");
                if !ctx.is_zero(&a) {
                    assert!(ctx.is_one(&ctx.mul(&a, &ctx.inv(&a).unwrap())));
                }
            }
        }
    }

    #[test]
    fn inverse_of_zero_fails() {
        let ctx = build_field(7, 2).unwrap();
        assert!(matches!(ctx.inv(&ctx.zero()), Err(Error::ZeroInverse)));
    }

    #[test]
    fn determinants() {
        let ctx = build_field(7, 2).unwrap();
        let id: Vec<Vec<FFElt>> = (0..3)
            .map(|i| (0..3).map(|j| if i == j { ctx.one() } else { ctx.zero() }).collect())
            .collect();
        assert!(ctx.is_one(&ctx.det(id)));
        let a = ctx.zeta_pow(5);
        assert_eq!(ctx.det(vec![vec![a.clone()]]), a);
        // Vandermonde in ζ^0, ζ^1, ζ^3 equals ∏ (x_j - x_i)
        let xs = [0i64, 1, 3].map(|k| ctx.zeta_pow(k));
        let m: Vec<Vec<FFElt>> = (0..3).map(|i| xs.iter().map(|x| ctx.pow(x, i)).collect()).collect();
        let mut expected = ctx.one();
        for i in 0..3 {
            for j in i + 1..3 {
                expected = ctx.mul(&expected, &ctx.sub(&xs[j], &xs[i]));
            }
        }
        let det = ctx.det(m);
        assert!(!ctx.is_zero(&det));
        assert_eq!(det, expected);
    }

    #[test]
    fn twist_cosets() {
        // ⟨2⟩ has index 2 in (Z/7)*
        assert_eq!(twist_representatives(7, 2), vec![1, 3]);
        assert_eq!(twist_representatives(7, 3), vec![1]);
        assert_eq!(twist_representatives(5, 11), vec![1, 2, 3, 4]);
    }
}
