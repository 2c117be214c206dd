//! Minors D_{A,B} = det(ω^{ab})_{a∈A, b∈B} of the Fourier matrix F_N, their norms,
//! residue-class classification, and evaluation in characteristic q.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, euler_phi, gcd, pow_mod, units};
use crate::cyclotomic::CycElt;
use crate::det;
use crate::error::{Error, Result};
use crate::factor::{factorize, Factorization, DEFAULT_RHO_BUDGET};
use crate::finite_field::{FFElt, FiniteFieldCtx};
use crate::modular::{self, det_mod, root_primes};

/// Row set A and column set B of a square submatrix of F_N, both strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MinorSpec {
    order: u64,
    rows: Vec<u64>,
    cols: Vec<u64>,
}

impl MinorSpec {
    pub fn new(order: u64, rows: Vec<u64>, cols: Vec<u64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("order must be positive".into()));
        }
        for (name, set) in [("rows", &rows), ("cols", &cols)] {
            if set.is_empty() {
                return Err(Error::InvalidIndexSet(format!("{name} is empty")));
            }
            if let Some(&x) = set.iter().find(|&&x| x >= order) {
                return Err(Error::InvalidIndexSet(format!("{name} index {x} is outside [0, {order})")));
            }
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidIndexSet(format!("{name} must be strictly increasing")));
            }
        }
        if rows.len() != cols.len() {
            return Err(Error::InvalidIndexSet(format!(
                "|rows| = {} differs from |cols| = {}",
                rows.len(),
                cols.len()
            )));
        }
        Ok(MinorSpec { order, rows, cols })
    }

    /// Sorts both sets first; duplicates are still rejected.
    pub fn from_unsorted(order: u64, mut rows: Vec<u64>, mut cols: Vec<u64>) -> Result<Self> {
        rows.sort_unstable();
        cols.sort_unstable();
        Self::new(order, rows, cols)
    }

    pub fn principal(order: u64, set: Vec<u64>) -> Result<Self> {
        Self::new(order, set.clone(), set)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn cols(&self) -> &[u64] {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn is_principal(&self) -> bool {
        self.rows == self.cols
    }
}

impl fmt::Display for MinorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={} A={} B={}", self.order, fmt_set(&self.rows), fmt_set(&self.cols))
    }
}

/// `{0,1,3}`.
pub fn fmt_set(set: &[u64]) -> String {
    let body: Vec<String> = set.iter().map(u64::to_string).collect();
    format!("{{{}}}", body.join(","))
}

/// Parses `0,1,3` (whitespace tolerated).
pub fn parse_set(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| Error::InvalidIndexSet(format!("not an index: {t:?}"))))
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormBackend {
    Symbolic,
    #[default]
    Multimodular,
}

impl fmt::Display for NormBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormBackend::Symbolic => "symbolic",
            NormBackend::Multimodular => "multimodular",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormReport {
    pub spec: MinorSpec,
    pub norm: BigInt,
    pub factorization: Factorization,
}

impl NormReport {
    /// `2744 = 2^3·7^3`, with a sign when negative.
    pub fn render(&self) -> String {
        if self.norm.is_zero() {
            return "0".into();
        }
        let sign = if self.norm.is_negative() { "-" } else { "" };
        format!("{} = {sign}{}", self.norm, self.factorization.render())
    }
}

/// The submatrix of F_N as exponents `a·b mod N`.
pub fn exponent_matrix(spec: &MinorSpec) -> Vec<Vec<u64>> {
    let n = spec.order;
    spec.rows.iter().map(|&a| spec.cols.iter().map(|&b| (a * b) % n).collect()).collect()
}

/// D_{A,B} exactly, rows and columns in increasing index order.
pub fn fourier_minor(spec: &MinorSpec) -> CycElt {
    let n = spec.order;
    let powers: Vec<CycElt> = (0..n as i64).map(|k| CycElt::root_power(n, k)).collect();
    let m: Vec<Vec<CycElt>> = exponent_matrix(spec)
        .into_iter()
        .map(|row| row.into_iter().map(|e| powers[e as usize].clone()).collect())
        .collect();
    det::det(&m, n)
}

/// `m^⌈m·φ(N)/2⌉`, an upper bound for |N(D_{A,B})| since each conjugate has modulus at most m^{m/2}.
pub fn norm_magnitude_bound(m: usize, order: u64) -> BigInt {
    let e = (m as u64 * euler_phi(order)).div_ceil(2);
    BigInt::from(m).pow(e as u32)
}

/// N(D_{A,B}) by the chosen backend.
pub fn minor_norm_value(spec: &MinorSpec, backend: NormBackend) -> BigInt {
    match backend {
        NormBackend::Symbolic => fourier_minor(spec).norm(),
        NormBackend::Multimodular => {
            let n = spec.order;
            let exps = exponent_matrix(spec);
            let bound = norm_magnitude_bound(spec.size(), n);
            let ks = units(n);
            modular::reconstruct(n, &bound, |rp| {
                ks.iter().fold(1u64, |acc, &k| {
                    let d = det_at_root(&exps, n, pow_mod(rp.root, k, rp.ell), rp.ell);
                    crate::arith::mul_mod(acc, d, rp.ell)
                })
            })
        }
    }
}

fn det_at_root(exps: &[Vec<u64>], n: u64, root: u64, ell: u64) -> u64 {
    let mut powers = Vec::with_capacity(n as usize);
    let mut x = 1u64;
    for _ in 0..n {
        powers.push(x);
        x = crate::arith::mul_mod(x, root, ell);
    }
    let m = exps.iter().map(|row| row.iter().map(|&e| powers[e as usize]).collect()).collect();
    det_mod(m, ell)
}

/// Cheap exact zero test. A nonzero image under one embedding into F_ℓ proves
/// D ≠ 0; otherwise the full norm decides.
pub fn minor_is_zero(spec: &MinorSpec) -> bool {
    let rp = root_primes(spec.order, 1)[0];
    if det_at_root(&exponent_matrix(spec), spec.order, rp.root, rp.ell) != 0 {
        return false;
    }
    minor_norm_value(spec, NormBackend::Multimodular).is_zero()
}

pub fn minor_norm(spec: &MinorSpec) -> NormReport {
    minor_norm_with(spec, NormBackend::Multimodular, DEFAULT_RHO_BUDGET)
}

pub fn minor_norm_with(spec: &MinorSpec, backend: NormBackend, rho_budget: u64) -> NormReport {
    let norm = minor_norm_value(spec, backend);
    let factorization = factorize(&norm.magnitude().clone(), rho_budget);
    NormReport { spec: spec.clone(), norm, factorization }
}

/// Residue-class comparison per divisor d of N.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorClassification {
    pub principal: bool,
    pub d_principal: BTreeMap<u64, bool>,
    /// Smallest multiplier s ∈ Z_d^* with |K_{d,i}| = |L_{d,si}| for all i.
    pub d_galois: BTreeMap<u64, Option<u64>>,
}

fn residue_counts(set: &[u64], d: u64) -> Vec<usize> {
    let mut counts = vec![0usize; d as usize];
    for &x in set {
        counts[(x % d) as usize] += 1;
    }
    counts
}

/// Whether A and B have matching class sizes modulo d.
pub fn is_d_principal(spec: &MinorSpec, d: u64) -> bool {
    residue_counts(&spec.rows, d) == residue_counts(&spec.cols, d)
}

/// Smallest s with |K_{d,i}| = |L_{d,si}|; for d = 1 the answer is 1.
pub fn galois_multiplier(spec: &MinorSpec, d: u64) -> Option<u64> {
    let k = residue_counts(&spec.rows, d);
    let l = residue_counts(&spec.cols, d);
    let candidates = if d == 1 { vec![1] } else { units(d) };
    candidates
        .into_iter()
        .find(|&s| (0..d).all(|i| k[i as usize] == l[((s * i) % d) as usize]))
}

pub fn classify(spec: &MinorSpec) -> MinorClassification {
    let mut d_principal = BTreeMap::new();
    let mut d_galois = BTreeMap::new();
    for d in divisors(spec.order) {
        d_principal.insert(d, is_d_principal(spec, d));
        d_galois.insert(d, galois_multiplier(spec, d));
    }
    MinorClassification { principal: spec.is_principal(), d_principal, d_galois }
}

/// det(ζ^{ab}) over the context's field.
pub fn ff_minor(spec: &MinorSpec, ctx: &FiniteFieldCtx) -> Result<FFElt> {
    ff_minor_twisted(spec, ctx, 1)
}

/// det(ζ^{kab}); as k runs over units this covers every prime above q.
pub fn ff_minor_twisted(spec: &MinorSpec, ctx: &FiniteFieldCtx, k: u64) -> Result<FFElt> {
    if ctx.n() != spec.order {
        return Err(Error::OrderMismatch { left: spec.order, right: ctx.n() });
    }
    if gcd(k, spec.order) != 1 {
        return Err(Error::NotCoprime { k: k as i64, n: spec.order });
    }
    let root = ctx.zeta_pow(k as i64);
    let powers: Vec<FFElt> = (0..spec.order).map(|e| ctx.pow(&root, e)).collect();
    let m = exponent_matrix(spec)
        .into_iter()
        .map(|row| row.into_iter().map(|e| powers[e as usize].clone()).collect())
        .collect();
    Ok(ctx.det(m))
}

/// Primes whose characteristic kills some Galois conjugate of a nonzero minor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingPrimes {
    /// Prime divisors of |N(D)| not dividing N.
    pub unramified: Vec<BigUint>,
    /// Prime divisors of |N(D)| that divide N.
    pub ramified: Vec<u64>,
    /// Composite part left unsplit by the factoring budget, if any.
    pub cofactor: Option<BigUint>,
}

pub fn vanishing_char_primes(spec: &MinorSpec) -> Result<VanishingPrimes> {
    vanishing_char_primes_with(spec, DEFAULT_RHO_BUDGET)
}

pub fn vanishing_char_primes_with(spec: &MinorSpec, rho_budget: u64) -> Result<VanishingPrimes> {
    let report = minor_norm_with(spec, NormBackend::Multimodular, rho_budget);
    if report.norm.is_zero() {
        return Err(Error::InvalidArgument(format!("minor {spec} vanishes over C")));
    }
    let mut unramified = Vec::new();
    let mut ramified = Vec::new();
    for p in report.factorization.prime_list() {
        match p.to_u64() {
            Some(small) if spec.order % small == 0 => ramified.push(small),
            _ => unramified.push(p),
        }
    }
    Ok(VanishingPrimes { unramified, ramified, cofactor: report.factorization.cofactor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{reduce, CycPoly};
    use crate::finite_field::build_field;

    fn spec(n: u64, a: &[u64], b: &[u64]) -> MinorSpec {
        MinorSpec::new(n, a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(MinorSpec::new(5, vec![0, 1], vec![2]).is_err());
        assert!(MinorSpec::new(5, vec![0, 5], vec![1, 2]).is_err());
        assert!(MinorSpec::new(5, vec![1, 0], vec![1, 2]).is_err());
        assert!(MinorSpec::new(5, vec![], vec![]).is_err());
        assert_eq!(MinorSpec::from_unsorted(5, vec![3, 1], vec![0, 4]).unwrap().rows(), &[1, 3]);
        assert_eq!(parse_set("0, 1,3").unwrap(), vec![0, 1, 3]);
        assert!(parse_set("0,x").is_err());
    }

    #[test]
    fn golden_minor_values() {
        // -ω - ω^2 + 3ω^3 - ω^6
        let d = fourier_minor(&spec(7, &[0, 1, 3], &[0, 1, 3]));
        assert_eq!(d, reduce(&CycPoly::from_i64s(&[0, -1, -1, 3, 0, 0, -1]), 7));
        // -2ω - 2
        let d = fourier_minor(&spec(6, &[0, 1, 3], &[0, 1, 3]));
        assert_eq!(d, reduce(&CycPoly::from_i64s(&[-2, -2]), 6));
        for n in 1..10 {
            assert!(fourier_minor(&spec(n, &[0], &[0])).is_one());
        }
    }

    #[test]
    fn golden_norms() {
        let r = minor_norm(&spec(7, &[0, 1, 3], &[0, 1, 3]));
        assert_eq!(r.norm, BigInt::from(2744));
        assert_eq!(r.factorization.render(), "2^3·7^3");
        assert_eq!(r.render(), "2744 = 2^3·7^3");
        assert_eq!(minor_norm(&spec(6, &[0, 1, 3], &[0, 1, 3])).norm, BigInt::from(12));
        for n in 1..12u64 {
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(minor_norm(&spec(n, &[a], &[b])).norm.abs(), BigInt::from(1));
                }
            }
        }
    }

    #[test]
    fn classification_examples() {
        let c = classify(&spec(6, &[0, 1, 3], &[0, 1, 3]));
        assert!(c.principal);
        assert!(c.d_principal.values().all(|&v| v));
        assert!(c.d_galois.values().all(|&s| s == Some(1)));

        assert!(is_d_principal(&spec(6, &[0, 1], &[3, 4]), 3));

        let s = spec(5, &[1, 2], &[2, 4]);
        assert!(!is_d_principal(&s, 5));
        assert_eq!(galois_multiplier(&s, 5), Some(2));
        let c = classify(&s);
        assert_eq!(c.d_galois[&5], Some(2));
        assert_eq!(c.d_galois[&1], Some(1));
    }

    #[test]
    fn characteristic_q_examples() {
        let ctx = build_field(4, 3).unwrap();
        assert!(ctx.is_zero(&ff_minor(&spec(4, &[0, 2], &[0, 2]), &ctx).unwrap()));

        // 2 | 2744, so some twist vanishes over F_8 whichever cubic factor is fixed
        let s = spec(7, &[0, 1, 3], &[0, 1, 3]);
        let ctx = build_field(7, 2).unwrap();
        let vanishing: Vec<u64> = units(7)
            .into_iter()
            .filter(|&k| ctx.is_zero(&ff_minor_twisted(&s, &ctx, k).unwrap()))
            .collect();
        assert!(!vanishing.is_empty());
        assert!(ctx.is_zero(&ff_minor(&s, &ctx).unwrap()));

        for q in [2u64, 3, 11] {
            let ctx = build_field(5, q).unwrap();
            for a in 0..5 {
                assert!(!ctx.is_zero(&ff_minor(&spec(5, &[a], &[3]), &ctx).unwrap()));
            }
        }
        assert!(ff_minor(&s, &build_field(5, 2).unwrap()).is_err());
    }

    #[test]
    fn vanishing_primes_examples() {
        let v = vanishing_char_primes(&spec(7, &[0, 1, 3], &[0, 1, 3])).unwrap();
        assert_eq!(v.unramified, vec![BigUint::from(2u32)]);
        assert_eq!(v.ramified, vec![7]);
        let v = vanishing_char_primes(&spec(6, &[0, 1, 3], &[0, 1, 3])).unwrap();
        assert!(v.unramified.is_empty());
        let v = vanishing_char_primes(&spec(9, &[4], &[7])).unwrap();
        assert!(v.unramified.is_empty() && v.ramified.is_empty());
        assert!(vanishing_char_primes(&spec(4, &[0, 2], &[0, 2])).is_err());
    }

    #[test]
    fn zero_test_agrees_with_symbolic_value() {
        assert!(minor_is_zero(&spec(4, &[0, 2], &[0, 2])));
        assert!(minor_is_zero(&spec(4, &[1, 3], &[1, 3])));
        assert!(!minor_is_zero(&spec(7, &[0, 1, 3], &[0, 1, 3])));
        assert!(fourier_minor(&spec(8, &[0, 4], &[0, 4])).is_zero());
    }

    #[test]
    fn backends_agree_on_examples() {
        for s in [spec(7, &[0, 1, 3], &[0, 2, 5]), spec(12, &[0, 1, 5, 7], &[2, 3, 4, 11]), spec(15, &[0, 3, 5, 6, 10], &[1, 2, 4, 8, 9])] {
            assert_eq!(minor_norm_value(&s, NormBackend::Symbolic), minor_norm_value(&s, NormBackend::Multimodular));
        }
    }
}
