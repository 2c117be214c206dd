//! Exact arithmetic in Z[ω_n]: cyclotomic polynomials, the power-basis normal
//! form, the Galois action `ω ↦ ω^k` and integer norms.

mod poly;
mod resultant;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use poly::CycPoly;
pub use resultant::resultant;

use crate::arith::{big_mod_u64, euler_phi, gcd, is_prime_u64, mul_mod, mult_order, pow_mod, units};
use crate::error::{Error, Result};
use crate::modular;

fn phi_cache() -> &'static RwLock<HashMap<u64, Arc<CycPoly>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<CycPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Φ_n, computed by exact division of `X^n - 1` by Φ_d over the proper divisors d.
pub fn cyclotomic_poly(n: u64) -> Arc<CycPoly> {
    assert!(n >= 1, "cyclotomic_poly requires n >= 1");
    if let Some(p) = phi_cache().read().unwrap().get(&n) {
        return Arc::clone(p);
    }
    let mut acc = CycPoly::x_pow_minus_one(n as usize);
    for d in crate::arith::divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_poly(d);
        let (q, r) = acc.div_rem_monic(&phi_d);
        debug_assert!(r.is_zero());
        acc = q;
    }
    let acc = Arc::new(acc);
    phi_cache().write().unwrap().insert(n, Arc::clone(&acc));
    acc
}

/// Element of Z[ω_n] in the power basis `1, ω, …, ω^(φ(n)-1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycElt {
    order: u64,
    coeffs: Vec<BigInt>,
}

/// Canonical image of `p(ω_n)`: exponents folded modulo n, then the remainder modulo Φ_n.
pub fn reduce(p: &CycPoly, n: u64) -> CycElt {
    assert!(n >= 1);
    let folded = p.fold_mod_x_pow_minus_one(n as usize);
    let (_, r) = folded.div_rem_monic(&cyclotomic_poly(n));
    CycElt::from_remainder(n, r)
}

impl CycElt {
    fn from_remainder(order: u64, r: CycPoly) -> Self {
        let phi = euler_phi(order) as usize;
        let mut coeffs = r.into_coeffs();
        debug_assert!(coeffs.len() <= phi);
        coeffs.resize(phi, BigInt::zero());
        CycElt { order, coeffs }
    }

    /// Builds an element from power-basis coefficients; `coeffs.len()` must be φ(order).
    pub fn from_coeffs(order: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("order must be positive".into()));
        }
        let phi = euler_phi(order) as usize;
        if coeffs.len() != phi {
            return Err(Error::InvalidArgument(format!(
                "expected {phi} coefficients for order {order}, got {}",
                coeffs.len()
            )));
        }
        Ok(CycElt { order, coeffs })
    }

    pub fn zero(order: u64) -> Self {
        CycElt { order, coeffs: vec![BigInt::zero(); euler_phi(order) as usize] }
    }

    pub fn one(order: u64) -> Self {
        Self::from_int(order, BigInt::one())
    }

    pub fn from_int(order: u64, c: BigInt) -> Self {
        let mut e = Self::zero(order);
        e.coeffs[0] = c;
        e
    }

    /// `ω^k`, any integer exponent.
    pub fn root_power(order: u64, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        reduce(&CycPoly::monomial(e), order)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> CycPoly {
        CycPoly::new(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    fn check_order(&self, other: &CycElt) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch { left: self.order, right: other.order });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CycElt) -> Result<CycElt> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycElt { order: self.order, coeffs })
    }

    pub fn checked_sub(&self, other: &CycElt) -> Result<CycElt> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycElt { order: self.order, coeffs })
    }

    pub fn checked_mul(&self, other: &CycElt) -> Result<CycElt> {
        self.check_order(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(CycElt::zero(self.order));
        }
        let prod = &self.to_poly() * &other.to_poly();
        let (_, r) = prod.div_rem_monic(&cyclotomic_poly(self.order));
        Ok(CycElt::from_remainder(self.order, r))
    }

    pub fn scale(&self, c: &BigInt) -> CycElt {
        CycElt { order: self.order, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Coefficient-wise exact division by an integer; `None` if some coefficient is not divisible.
    pub fn div_int_exact(&self, c: &BigInt) -> Option<CycElt> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            let (q, r) = x.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(CycElt { order: self.order, coeffs })
    }

    pub fn pow(&self, mut e: u64) -> CycElt {
        let mut acc = CycElt::one(self.order);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `σ_k`, the automorphism `ω ↦ ω^k`.
    pub fn galois_apply(&self, k: i64) -> Result<CycElt> {
        let n = self.order;
        let kk = k.rem_euclid(n as i64) as u64;
        if gcd(kk, n) != 1 {
            return Err(Error::NotCoprime { k, n });
        }
        let mut out = vec![BigInt::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[((i as u64 * kk) % n) as usize] += c;
        }
        Ok(reduce(&CycPoly::new(out), n))
    }

    /// Product of all Galois conjugates except the identity. `self · rest = N(self)`.
    pub fn conjugate_cofactor(&self) -> CycElt {
        let mut acc = CycElt::one(self.order);
        for k in units(self.order).into_iter().skip(1) {
            acc = &acc * &self.galois_apply(k as i64).expect("unit");
        }
        acc
    }

    /// Exact quotient in Z[ω]; `None` if `d` is zero or does not divide `self`.
    pub fn exact_div(&self, d: &CycElt) -> Option<CycElt> {
        if self.order != d.order || d.is_zero() {
            return None;
        }
        let cof = d.conjugate_cofactor();
        let nd = (d * &cof).coeffs[0].clone();
        (self * &cof).div_int_exact(&nd)
    }

    /// N(α) as the resultant Res(Φ_n, P) of the representing polynomial.
    pub fn norm(&self) -> BigInt {
        let p = self.to_poly();
        if p.is_zero() {
            return BigInt::zero();
        }
        resultant(&cyclotomic_poly(self.order), &p)
    }

    /// N(α) by evaluation at every primitive root modulo primes `≡ 1 (mod n)` and CRT.
    pub fn norm_multimodular(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        let n = self.order;
        let l1: BigInt = self.coeffs.iter().map(|c| c.abs()).sum();
        let bound = l1.pow(euler_phi(n) as u32);
        let exps = units(n);
        modular::reconstruct(n, &bound, |rp| {
            let residues: Vec<u64> = self.coeffs.iter().map(|c| big_mod_u64(c, rp.ell)).collect();
            exps.iter().fold(1u64, |acc, &k| {
                let z = pow_mod(rp.root, k, rp.ell);
                mul_mod(acc, eval_mod(&residues, z, rp.ell), rp.ell)
            })
        })
    }

    /// Value of the representing polynomial at `z` modulo `ell`.
    pub fn eval_mod(&self, z: u64, ell: u64) -> u64 {
        let residues: Vec<u64> = self.coeffs.iter().map(|c| big_mod_u64(c, ell)).collect();
        eval_mod(&residues, z, ell)
    }
}

fn eval_mod(coeffs: &[u64], z: u64, ell: u64) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| (mul_mod(acc, z, ell) + c) % ell)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &CycElt {
            type Output = CycElt;
            /// Panics on order mismatch; use the `checked_` form to get an error instead.
            fn $method(self, rhs: &CycElt) -> CycElt {
                self.$checked(rhs).expect("cyclotomic order mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycElt {
    type Output = CycElt;
    fn neg(self) -> CycElt {
        CycElt { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        poly::write_poly(f, &self.coeffs, "ω")
    }
}

impl fmt::Debug for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElt[{}]({})", self.order, self)
    }
}

/// N(Φ_N(ζ)) over Q(ζ), where ζ = ω_N^p is a primitive (N/p)-th root of unity.
pub fn norm_of_cyclo_at_conjugate(n: u64, p: u64) -> Result<BigInt> {
    if !crate::arith::is_squarefree(n) {
        return Err(Error::NotSquarefree { n });
    }
    if !is_prime_u64(p) || n % p != 0 {
        return Err(Error::NotDivisor { p, n });
    }
    let value = reduce(&cyclotomic_poly(n), n / p);
    Ok(value.norm())
}

/// How a rational prime q decomposes in Z[ω_n]: `q = (Q_1 ⋯ Q_r)^e`, residue degree f.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingData {
    pub n: u64,
    pub q: u64,
    pub e: u64,
    pub f: u64,
    pub r: u64,
}

pub fn splitting_data(n: u64, q: u64) -> Result<SplittingData> {
    if !is_prime_u64(q) {
        return Err(Error::NotPrime(q));
    }
    let mut m = n;
    let mut qa = 1u64;
    while m % q == 0 {
        m /= q;
        qa *= q;
    }
    let e = euler_phi(qa);
    let f = mult_order(q, m).expect("q is coprime to the q-free part");
    let r = euler_phi(m) / f;
    Ok(SplittingData { n, q, e, f, r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn elt(n: u64, c: &[i64]) -> CycElt {
        reduce(&CycPoly::from_i64s(c), n)
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), CycPoly::from_i64s(&[-1, 1]));
        assert_eq!(*cyclotomic_poly(6), CycPoly::from_i64s(&[1, -1, 1]));
        assert_eq!(*cyclotomic_poly(5), CycPoly::from_i64s(&[1, 1, 1, 1, 1]));
    }

    /// Φ_105 computed independently as ∏_{d|105} (X^d - 1)^{μ(105/d)}.
    #[test]
    fn phi_105_has_minus_two() {
        let mobius = |m: u64| -> i32 {
            let f = crate::arith::factor_u64(m);
            if f.iter().any(|&(_, e)| e > 1) {
                0
            } else if f.len() % 2 == 0 {
                1
            } else {
                -1
            }
        };
        let mut num = CycPoly::one();
        let mut den = CycPoly::one();
        for d in crate::arith::divisors(105) {
            match mobius(105 / d) {
                1 => num = &num * &CycPoly::x_pow_minus_one(d as usize),
                -1 => den = &den * &CycPoly::x_pow_minus_one(d as usize),
                _ => {}
            }
        }
        let oracle = num.exact_div(&den).unwrap();
        let phi = cyclotomic_poly(105);
        assert_eq!(*phi, oracle);
        assert_eq!(phi.degree(), Some(48));
        assert!(phi.coeffs().iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn product_of_cyclotomics_is_x_n_minus_one() {
        for n in 1..=200u64 {
            let prod = crate::arith::divisors(n)
                .into_iter()
                .fold(CycPoly::one(), |acc, d| &acc * &cyclotomic_poly(d));
            assert_eq!(prod, CycPoly::x_pow_minus_one(n as usize), "n = {n}");
            assert!(reduce(&cyclotomic_poly(n), n).is_zero(), "n = {n}");
            let phi = cyclotomic_poly(n);
            assert!(phi.is_monic());
            assert_eq!(phi.degree(), Some(euler_phi(n) as usize));
        }
    }

    #[test]
    fn phi_divides_no_smaller_x_k_minus_one() {
        for n in [6u64, 12, 15, 30] {
            let phi = cyclotomic_poly(n);
            for k in 1..n {
                let (_, r) = CycPoly::x_pow_minus_one(k as usize).div_rem_monic(&phi);
                assert!(!r.is_zero(), "Φ_{n} divides X^{k} - 1");
            }
        }
    }

    #[test]
    fn reduce_examples() {
        assert!(elt(6, &[0, 0, 0, 0, 0, 0, 1]).is_one());
        assert_eq!(elt(6, &[0, 0, 0, 1]), CycElt::from_int(6, BigInt::from(-1)));
        assert!(elt(5, &[1, 1, 1, 1, 1]).is_zero());
    }

    #[test]
    fn ring_examples() {
        let w5 = CycElt::root_power(5, 1);
        let w5_4 = CycElt::root_power(5, 4);
        assert!((&w5 * &w5_4).is_one());
        let a = elt(9, &[3, -1, 4, 1, -5]);
        assert!((&a + &(-&a)).is_zero());
        let prod = &elt(6, &[1, -1]) * &elt(6, &[1, 1]);
        assert_eq!(prod, elt(6, &[1, 0, -1]));
        // ω^2 = ω - 1 for Φ_6, so 1 - ω^2 = 2 - ω
        assert_eq!(prod, elt(6, &[2, -1]));
        assert!(matches!(
            CycElt::one(5).checked_add(&CycElt::one(7)),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn galois_examples() {
        let a = elt(12, &[1, 2, -3, 4]);
        assert_eq!(a.galois_apply(1).unwrap(), a);
        let w = CycElt::root_power(12, 1);
        assert_eq!(w.galois_apply(5).unwrap(), CycElt::root_power(12, 5));
        assert!(matches!(a.galois_apply(3), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(CycElt::root_power(2, 1).norm(), BigInt::from(-1));
        for n in 3..40u64 {
            assert_eq!(CycElt::root_power(n, 1).norm(), BigInt::one(), "n = {n}");
        }
        for p in [2u64, 3, 5, 7, 11, 13] {
            assert_eq!(elt(p, &[1, -1]).norm(), BigInt::from(p));
        }
        assert_eq!(elt(6, &[1, -1]).norm(), BigInt::one());
        assert_eq!(elt(6, &[1, 1]).norm(), BigInt::from(3));
        assert_eq!(CycElt::zero(6).norm(), BigInt::zero());
    }

    #[test]
    fn norm_of_cyclotomic_at_conjugate() {
        assert_eq!(norm_of_cyclo_at_conjugate(6, 3).unwrap().abs(), BigInt::from(3));
        assert_eq!(norm_of_cyclo_at_conjugate(6, 2).unwrap().abs(), BigInt::from(4));
        assert_eq!(norm_of_cyclo_at_conjugate(15, 3).unwrap().abs(), BigInt::from(81));
        assert_eq!(norm_of_cyclo_at_conjugate(7, 7).unwrap(), BigInt::from(7));
        for (n, p) in [(30u64, 5u64), (42, 7), (105, 3), (66, 11)] {
            let expected = BigInt::from(p).pow(euler_phi(n / p) as u32);
            assert_eq!(norm_of_cyclo_at_conjugate(n, p).unwrap().abs(), expected);
        }
        assert!(norm_of_cyclo_at_conjugate(12, 2).is_err());
        assert!(norm_of_cyclo_at_conjugate(15, 7).is_err());
    }

    #[test]
    fn exact_division_in_ring() {
        let a = elt(15, &[2, -1, 0, 3, 1]);
        let b = elt(15, &[1, 1, 0, 0, 0, -2]);
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        assert_eq!(CycElt::one(15).exact_div(&CycElt::from_int(15, BigInt::from(2))), None);
    }

    #[test]
    fn splitting_examples() {
        let s = splitting_data(7, 2).unwrap();
        assert_eq!((s.e, s.f, s.r), (1, 3, 2));
        let s = splitting_data(12, 2).unwrap();
        assert_eq!((s.e, s.f, s.r), (2, 2, 1));
        for n in 2..60u64 {
            for q in [2u64, 3, 5, 7, 11] {
                let s = splitting_data(n, q).unwrap();
                assert_eq!(s.e * s.f * s.r, euler_phi(n));
            }
        }
    }

    fn arb_elt() -> impl Strategy<Value = CycElt> {
        (prop::sample::select(vec![3u64, 4, 5, 7, 8, 9, 12, 15]), prop::collection::vec(-4i64..=4, 1..10))
            .prop_map(|(n, c)| elt(n, &c))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(
            n in prop::sample::select(vec![3u64, 5, 6, 7, 10, 12, 15]),
            a in prop::collection::vec(-4i64..=4, 1..8),
            b in prop::collection::vec(-4i64..=4, 1..8),
        ) {
            let a = elt(n, &a);
            let b = elt(n, &b);
            prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        }

        #[test]
        fn norm_invariant_under_galois(a in arb_elt(), k in 1i64..50) {
            let n = a.order() as i64;
            prop_assume!(num_integer::Integer::gcd(&k, &n) == 1);
            prop_assert_eq!(a.galois_apply(k).unwrap().norm(), a.norm());
        }

        #[test]
        fn zero_iff_norm_zero(a in arb_elt()) {
            prop_assert_eq!(a.is_zero(), a.norm().is_zero());
        }

        #[test]
        fn norm_backends_agree(a in arb_elt()) {
            prop_assert_eq!(a.norm(), a.norm_multimodular());
        }
    }
}
