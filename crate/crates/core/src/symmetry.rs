//! Search-space reduction by affine maps `x ↦ ax + b` of Z_N.
//!
//! Index sets are bitmasks (N ≤ 64). For sets of equal size, "A < B" is the
//! lexicographic order of their sorted element lists, which for masks means the
//! lowest bit of `A ^ B` lies in A.
//!
//! Every family is handled with one group: for d | N let
//! `H_d = {(ψ1, ψ2) : ψ1 ≡ ψ2 mod d}` act on pairs by `(A, B) ↦ (ψ1 A, ψ2 B)`.
//! d = N is the simultaneous action on principal pairs, d = 1 the independent
//! action on all pairs. Zero status survives the full independent action, since
//! `D_{a1A+b1, a2B+b2}` is ± a root of unity times `σ_{a1a2}(D_{A,B})`, and H_d
//! preserves class counts modulo d, so each family is a union of H_d-orbits.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{euler_phi, units};
use crate::error::{Error, Result};
use crate::minors::{fmt_set, MinorSpec};

pub type Mask = u64;
pub const MAX_ORDER: u64 = 64;

pub fn to_mask(set: &[u64]) -> Mask {
    set.iter().fold(0, |m, &x| m | (1u64 << x))
}

pub fn from_mask(mut m: Mask) -> Vec<u64> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as u64);
        m &= m - 1;
    }
    out
}

/// Lexicographic order of sorted element lists; meaningful for equal sizes.
pub fn lex_cmp(a: Mask, b: Mask) -> Ordering {
    let x = a ^ b;
    if x == 0 {
        Ordering::Equal
    } else if x & x.wrapping_neg() & a != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn lex_less(a: Mask, b: Mask) -> bool {
    lex_cmp(a, b) == Ordering::Less
}

/// An affine map `x ↦ a·x + b` of Z_N.
pub type Affine = (u64, u64);

/// The affine group of Z_N. For N ≤ 2 it is replaced by the trivial group and no
/// pruning happens.
#[derive(Clone, Debug)]
pub struct AffineGroup {
    n: u64,
    units: Vec<u64>,
    full: Mask,
    trivial: bool,
}

impl AffineGroup {
    pub fn new(n: u64) -> Self {
        assert!((1..=MAX_ORDER).contains(&n), "orders up to {MAX_ORDER} are supported");
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        AffineGroup { n, units: units(n), full, trivial: n <= 2 }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    pub fn order(&self) -> u64 {
        if self.trivial {
            1
        } else {
            self.n * self.units.len() as u64
        }
    }

    pub fn elements(&self) -> Vec<Affine> {
        if self.trivial {
            return vec![(1 % self.n, 0)];
        }
        self.units.iter().flat_map(|&a| (0..self.n).map(move |b| (a, b))).collect()
    }

    pub fn full_mask(&self) -> Mask {
        self.full
    }

    pub fn complement(&self, s: Mask) -> Mask {
        !s & self.full
    }

    fn scale(&self, s: Mask, a: u64) -> Mask {
        let mut out = 0;
        let mut m = s;
        while m != 0 {
            let x = m.trailing_zeros() as u64;
            out |= 1u64 << ((a * x) % self.n);
            m &= m - 1;
        }
        out
    }

    /// `s + b` as a rotation of the N-bit mask.
    fn shift(&self, s: Mask, b: u64) -> Mask {
        let b = b % self.n;
        if b == 0 {
            return s;
        }
        ((s << b) | (s >> (self.n - b))) & self.full
    }

    pub fn apply(&self, (a, b): Affine, s: Mask) -> Mask {
        self.shift(self.scale(s, a), b)
    }

    /// Least image of `s`, a map reaching it, and the number of maps reaching it
    /// (which is the stabilizer order).
    pub fn canonicalize(&self, s: Mask) -> (Mask, Affine, u64) {
        if self.trivial {
            return (s, (1 % self.n, 0), 1);
        }
        let mut best = u64::MAX;
        let mut witness = (1, 0);
        let mut count = 0;
        for &a in &self.units {
            let scaled = self.scale(s, a);
            let mut ts = scaled;
            while ts != 0 {
                let t = ts.trailing_zeros() as u64;
                ts &= ts - 1;
                let b = (self.n - t) % self.n;
                let img = self.shift(scaled, b);
                if best == u64::MAX || lex_less(img, best) {
                    best = img;
                    witness = (a, b);
                    count = 1;
                } else if img == best {
                    count += 1;
                }
            }
        }
        (best, witness, count)
    }

    /// `Some(stabilizer)` when `s` is the least set of its orbit, `None` otherwise.
    /// Aborts at the first smaller image.
    pub fn canonical_stabilizer(&self, s: Mask) -> Option<Vec<Affine>> {
        if self.trivial {
            return Some(vec![(1 % self.n, 0)]);
        }
        if s & 1 == 0 {
            return None;
        }
        let mut stab = Vec::new();
        for &a in &self.units {
            let scaled = self.scale(s, a);
            let mut ts = scaled;
            while ts != 0 {
                let t = ts.trailing_zeros() as u64;
                ts &= ts - 1;
                let b = (self.n - t) % self.n;
                let img = self.shift(scaled, b);
                match lex_cmp(img, s) {
                    Ordering::Less => return None,
                    Ordering::Equal => stab.push((a, b)),
                    Ordering::Greater => {}
                }
            }
        }
        Some(stab)
    }
}

/// Which submatrices a campaign covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// A = B.
    Principal,
    /// Equal class counts modulo d.
    DPrincipal(u64),
    /// Equal class counts modulo N/p for the given prime p | N.
    NPrimePrincipal(u64),
    /// Every pair (A, B) of equal size.
    AllPairs,
}

impl Family {
    /// The modulus d with the family equal to the d-principal pairs.
    pub fn modulus(&self, n: u64) -> u64 {
        match *self {
            Family::Principal => n,
            Family::DPrincipal(d) => d,
            Family::NPrimePrincipal(p) => n / p,
            Family::AllPairs => 1,
        }
    }

    pub fn validate(&self, n: u64) -> Result<()> {
        match *self {
            Family::DPrincipal(d) if d == 0 || n % d != 0 => Err(Error::NotDivisor { p: d, n }),
            Family::NPrimePrincipal(p) if !crate::arith::is_prime_u64(p) || n % p != 0 => {
                Err(Error::NotDivisor { p, n })
            }
            _ => Ok(()),
        }
    }

    pub fn contains(&self, spec: &MinorSpec) -> bool {
        crate::minors::is_d_principal(spec, self.modulus(spec.order()))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Principal => write!(f, "principal"),
            Family::DPrincipal(d) => write!(f, "d-principal(d={d})"),
            Family::NPrimePrincipal(p) => write!(f, "nprime-principal(p={p})"),
            Family::AllPairs => write!(f, "all"),
        }
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_family(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown family {s:?}")))
    }
}

fn parse_family(s: &str) -> Option<Family> {
    let arg = |prefix: &str| s.strip_prefix(prefix)?.strip_suffix(')')?.parse::<u64>().ok();
    match s {
        "principal" => Some(Family::Principal),
        "all" => Some(Family::AllPairs),
        _ => arg("d-principal(d=")
            .map(Family::DPrincipal)
            .or_else(|| arg("nprime-principal(p=").map(Family::NPrimePrincipal)),
    }
}

/// Canonical representative of an orbit with its size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitKey {
    pub order: u64,
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
    pub orbit_size: u64,
}

impl OrbitKey {
    pub fn spec(&self) -> MinorSpec {
        MinorSpec::new(self.order, self.rows.clone(), self.cols.clone()).expect("orbit keys are valid specs")
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    fn masks(&self) -> (Mask, Mask) {
        (to_mask(&self.rows), to_mask(&self.cols))
    }

    /// `{0,1,3}` for principal keys, `{0,1}x{0,3}` otherwise.
    pub fn label(&self) -> String {
        if self.rows == self.cols {
            fmt_set(&self.rows)
        } else {
            format!("{}x{}", fmt_set(&self.rows), fmt_set(&self.cols))
        }
    }
}

impl PartialOrd for OrbitKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrbitKey {
    /// By size, then rows, then columns.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.order, self.rows.len(), &self.rows, &self.cols).cmp(&(other.order, other.rows.len(), &other.rows, &other.cols))
    }
}

/// The affine group of Z_N together with the data of H_d for one family.
#[derive(Clone, Debug)]
pub struct FamilyAction {
    group: AffineGroup,
    family: Family,
    d: u64,
    elements: Vec<Affine>,
    /// |H_d| = |G|·|K_d| with K_d the maps congruent to the identity modulo d.
    h_order: u64,
}

impl FamilyAction {
    pub fn new(n: u64, family: Family) -> Result<Self> {
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidArgument(format!("order must lie in [1, {MAX_ORDER}]")));
        }
        family.validate(n)?;
        let group = AffineGroup::new(n);
        let d = family.modulus(n);
        let h_order = if group.trivial {
            1
        } else {
            let g = group.order();
            g * (g / (d * euler_phi(d)))
        };
        let elements = group.elements();
        Ok(FamilyAction { group, family, d, elements, h_order })
    }

    pub fn group(&self) -> &AffineGroup {
        &self.group
    }

    pub fn family(&self) -> Family {
        self.family
    }

    fn reduce(&self, (a, b): Affine) -> Affine {
        (a % self.d, b % self.d)
    }

    /// Maps ψ2 allowed on the second component once the first is fixed at a set with
    /// stabilizer `stab`: those congruent modulo d to some element of `stab`.
    fn column_maps(&self, stab: &[Affine]) -> Vec<Affine> {
        if self.group.trivial {
            return stab.to_vec();
        }
        let allowed: HashSet<Affine> = stab.iter().map(|&s| self.reduce(s)).collect();
        self.elements.iter().copied().filter(|&e| allowed.contains(&self.reduce(e))).collect()
    }

    /// Canonical sets of size m (least in their G-orbit) with their stabilizers, in order.
    pub fn canonical_rows(&self, m: usize) -> Vec<(Mask, Vec<Affine>)> {
        let n = self.group.n as usize;
        let mut out = Vec::new();
        if m == 0 || m > n {
            return out;
        }
        if self.group.trivial {
            for_each_combination(n, m, |s| out.push((s, vec![(1 % self.group.n, 0)])));
        } else {
            for_each_combination(n - 1, m - 1, |s| {
                let s = (s << 1) | 1;
                if let Some(stab) = self.group.canonical_stabilizer(s) {
                    out.push((s, stab));
                }
            });
        }
        out
    }

    /// All orbits of the family whose canonical row set is `a`, in increasing order.
    pub fn orbits_for_row(&self, a: Mask, stab: &[Affine]) -> Vec<OrbitKey> {
        let n = self.group.n;
        let rows = from_mask(a);
        if self.d == n {
            let size = self.h_order / stab.len() as u64;
            return vec![OrbitKey { order: n, rows: rows.clone(), cols: rows, orbit_size: size }];
        }
        let maps = self.column_maps(stab);
        let mut out = Vec::new();
        for b in compatible_sets(a, n, self.d) {
            if maps.iter().any(|&psi| lex_less(self.group.apply(psi, b), b)) {
                continue;
            }
            let stab_count: u64 = maps
                .iter()
                .filter(|&&psi| self.group.apply(psi, b) == b)
                .map(|&psi| stab.iter().filter(|&&s| self.reduce(s) == self.reduce(psi)).count() as u64)
                .sum();
            out.push(OrbitKey { order: n, rows: rows.clone(), cols: from_mask(b), orbit_size: self.h_order / stab_count });
        }
        out
    }

    /// Canonical key of the orbit of an arbitrary member pair.
    pub fn canonical_pair(&self, a: Mask, b: Mask) -> OrbitKey {
        let (a_star, psi, _) = self.group.canonicalize(a);
        let b1 = self.group.apply(psi, b);
        let stab = self.group.canonical_stabilizer(a_star).expect("canonical by construction");
        let maps = self.column_maps(&stab);
        let b_star = maps
            .iter()
            .map(|&m| self.group.apply(m, b1))
            .min_by(|&x, &y| lex_cmp(x, y))
            .expect("identity is always present");
        let orbits = self.orbits_for_row(a_star, &stab);
        let cols = from_mask(b_star);
        orbits
            .into_iter()
            .find(|k| k.cols == cols)
            .expect("canonical pair is enumerated")
    }

    /// Key of the orbit formed by the complements `(A^c, B^c)`.
    pub fn complement_key(&self, key: &OrbitKey) -> OrbitKey {
        let (a, b) = key.masks();
        self.canonical_pair(self.group.complement(a), self.group.complement(b))
    }
}

/// Sets with the same class counts modulo d as `a`, in increasing order.
fn compatible_sets(a: Mask, n: u64, d: u64) -> Vec<Mask> {
    let mut counts = vec![0usize; d as usize];
    for x in from_mask(a) {
        counts[(x % d) as usize] += 1;
    }
    let per_class = (n / d) as usize;
    let mut out = vec![0u64];
    for (i, &c) in counts.iter().enumerate() {
        let mut picks = Vec::new();
        for_each_combination(per_class, c, |sel| {
            let mut m = 0u64;
            for j in from_mask(sel) {
                m |= 1u64 << (i as u64 + j * d);
            }
            picks.push(m);
        });
        out = out.iter().flat_map(|&base| picks.iter().map(move |&p| base | p)).collect();
    }
    out.sort_by(|&x, &y| lex_cmp(x, y));
    out
}

/// Calls `f` on every k-subset of `{0..n}` as a mask, in lex order.
fn for_each_combination<F: FnMut(Mask)>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(idx.iter().fold(0u64, |m, &i| m | (1u64 << i)));
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            return;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Every orbit of size-m members of the family, in increasing key order.
pub fn enumerate_orbits(n: u64, m: usize, family: Family) -> Result<Vec<OrbitKey>> {
    if m == 0 || m as u64 > n / 2 {
        return Err(Error::InvalidArgument(format!("size {m} outside [1, {}]", n / 2)));
    }
    let action = FamilyAction::new(n, family)?;
    Ok(action
        .canonical_rows(m)
        .into_iter()
        .flat_map(|(a, stab)| action.orbits_for_row(a, &stab))
        .collect())
}

/// Least image of A under the affine group; requires N ≥ 3.
pub fn affine_canonical(n: u64, set: &[u64]) -> Result<OrbitKey> {
    if n < 3 {
        return Err(Error::InvalidArgument("affine canonicalization needs N ≥ 3".into()));
    }
    if n > MAX_ORDER {
        return Err(Error::InvalidArgument(format!("order must be at most {MAX_ORDER}")));
    }
    if set.is_empty() || set.iter().any(|&x| x >= n) {
        return Err(Error::InvalidIndexSet(format!("{} is not a nonempty subset of Z_{n}", fmt_set(set))));
    }
    let group = AffineGroup::new(n);
    let (canon, _, stab) = group.canonicalize(to_mask(set));
    let rows = from_mask(canon);
    Ok(OrbitKey { order: n, rows: rows.clone(), cols: rows, orbit_size: group.order() / stab })
}

/// `(A^C, B^C)` when |A| > ⌊N/2⌋, else the input. Zero status is unchanged.
pub fn complement_reduce(spec: &MinorSpec) -> MinorSpec {
    let n = spec.order();
    if spec.size() as u64 <= n / 2 {
        return spec.clone();
    }
    let comp = |s: &[u64]| (0..n).filter(|x| !s.contains(x)).collect::<Vec<_>>();
    MinorSpec::new(n, comp(spec.rows()), comp(spec.cols())).expect("complements have equal size")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Rows,
    Cols,
}

/// One side is `{a, a+d, …, a+(m−1)d}` and `d·x` is injective on the other side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct APCertificate {
    pub side: Side,
    pub step: u64,
    pub start: u64,
    /// `d·x mod N` for x in the other set; pairwise distinct.
    pub witness: Vec<u64>,
}

fn progression_start(n: u64, set: &[u64], step: u64) -> Option<u64> {
    let target = to_mask(set);
    let m = set.len() as u64;
    set.iter().copied().find(|&a| {
        let mut mask = 0u64;
        for i in 0..m {
            mask |= 1u64 << ((a + i * step) % n);
        }
        mask == target && mask.count_ones() as u64 == m
    })
}

fn scaled_distinct(n: u64, set: &[u64], step: u64) -> Option<Vec<u64>> {
    let w: Vec<u64> = set.iter().map(|&x| (x * step) % n).collect();
    (to_mask(&w).count_ones() as usize == w.len()).then_some(w)
}

/// Certificate with the given side and step, if valid.
pub fn ap_certificate_with(spec: &MinorSpec, side: Side, step: u64) -> Option<APCertificate> {
    let n = spec.order();
    if n > MAX_ORDER || step == 0 || step >= n.max(2) {
        return None;
    }
    let (prog, other) = match side {
        Side::Rows => (spec.rows(), spec.cols()),
        Side::Cols => (spec.cols(), spec.rows()),
    };
    let start = progression_start(n, prog, step)?;
    let witness = scaled_distinct(n, other, step)?;
    Some(APCertificate { side, step, start, witness })
}

/// Smallest step on the rows, then on the columns.
pub fn ap_certificate(spec: &MinorSpec) -> Option<APCertificate> {
    let n = spec.order();
    [Side::Rows, Side::Cols]
        .into_iter()
        .find_map(|side| (1..n.max(2)).find_map(|d| ap_certificate_with(spec, side, d)))
}

/// Re-derives a certificate's claims from scratch.
pub fn check_ap_certificate(spec: &MinorSpec, cert: &APCertificate) -> bool {
    let n = spec.order();
    let (prog, other) = match cert.side {
        Side::Rows => (spec.rows(), spec.cols()),
        Side::Cols => (spec.cols(), spec.rows()),
    };
    let mut generated: Vec<u64> = (0..prog.len() as u64).map(|i| (cert.start + i * cert.step) % n).collect();
    generated.sort_unstable();
    generated.dedup();
    generated == prog
        && other.iter().map(|&x| (x * cert.step) % n).collect::<Vec<_>>() == cert.witness
        && to_mask(&cert.witness).count_ones() as usize == other.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::{minor_is_zero, minor_norm};

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn mask_order_is_list_order() {
        for (a, b) in [(vec![0, 1, 3], vec![0, 2, 3]), (vec![0, 1, 5], vec![0, 1, 3]), (vec![1, 2], vec![0, 5])] {
            assert_eq!(lex_cmp(to_mask(&a), to_mask(&b)), a.cmp(&b));
        }
        assert_eq!(from_mask(to_mask(&[4, 0, 9])), vec![0, 4, 9]);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(affine_canonical(7, &[0, 1, 5]).unwrap(), affine_canonical(7, &[0, 1, 3]).unwrap());
        for n in 3..20 {
            assert_eq!(affine_canonical(n, &[0]).unwrap().rows, vec![0]);
        }
        assert!(affine_canonical(2, &[0]).is_err());
        // every 3-subset of Z_6 with 3 among its differences
        for a in 0..6u64 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    let s = [a, b, c];
                    let has3 = s.iter().any(|&x| s.iter().any(|&y| (x + 6 - y) % 6 == 3));
                    if has3 {
                        assert_eq!(affine_canonical(6, &s).unwrap().rows, vec![0, 1, 3]);
                    }
                }
            }
        }
    }

    #[test]
    fn canonicalization_is_idempotent_and_orbit_constant() {
        for n in 3..=12u64 {
            let g = AffineGroup::new(n);
            for s in 1..(1u64 << n) {
                if s.count_ones() > 4 {
                    continue;
                }
                let (c, psi, _) = g.canonicalize(s);
                assert_eq!(g.apply(psi, s), c);
                assert_eq!(g.canonicalize(c).0, c);
                for e in g.elements().into_iter().step_by(3) {
                    assert_eq!(g.canonicalize(g.apply(e, s)).0, c);
                }
            }
        }
    }

    #[test]
    fn principal_orbits_for_seven() {
        let keys = enumerate_orbits(7, 3, Family::Principal).unwrap();
        let reps: Vec<Vec<u64>> = keys.iter().map(|k| k.rows.clone()).collect();
        assert_eq!(reps, vec![vec![0, 1, 2], vec![0, 1, 3]]);
        assert_eq!(keys.iter().map(|k| k.orbit_size).sum::<u64>(), 35);
        for n in 2..15 {
            let keys = enumerate_orbits(n, 1, Family::Principal).unwrap();
            let expected: Vec<Vec<u64>> = if n <= 2 { (0..n).map(|x| vec![x]).collect() } else { vec![vec![0]] };
            assert_eq!(keys.iter().map(|k| k.rows.clone()).collect::<Vec<_>>(), expected);
        }
    }

    /// Brute-force orbit partition of the family, compared with the enumeration.
    fn check_partition(n: u64, family: Family) {
        let action = FamilyAction::new(n, family).unwrap();
        let g = action.group().clone();
        let d = family.modulus(n);
        for m in 1..=(n / 2) as usize {
            let keys = enumerate_orbits(n, m, family).unwrap();
            let distinct: HashSet<_> = keys.iter().map(|k| (k.rows.clone(), k.cols.clone())).collect();
            assert_eq!(distinct.len(), keys.len());
            let mut sorted = keys.clone();
            sorted.sort();
            assert_eq!(sorted, keys, "n={n} m={m} {family}");

            let mut members = 0u64;
            let sets: Vec<Mask> = (0..(1u64 << n)).filter(|s| s.count_ones() as usize == m).collect();
            let mut seen: HashSet<(Mask, Mask)> = HashSet::new();
            let mut brute_orbits = 0;
            let h: Vec<(Affine, Affine)> = g
                .elements()
                .into_iter()
                .flat_map(|p1| g.elements().into_iter().map(move |p2| (p1, p2)))
                .filter(|&((a1, b1), (a2, b2))| g.is_trivial() || (a1 % d == a2 % d && b1 % d == b2 % d))
                .collect();
            for &a in &sets {
                for &b in &sets {
                    let spec = MinorSpec::new(n, from_mask(a), from_mask(b)).unwrap();
                    if !family.contains(&spec) {
                        continue;
                    }
                    members += 1;
                    if seen.contains(&(a, b)) {
                        continue;
                    }
                    brute_orbits += 1;
                    for &(p1, p2) in &h {
                        seen.insert((g.apply(p1, a), g.apply(p2, b)));
                    }
                    let key = action.canonical_pair(a, b);
                    assert!(keys.contains(&key));
                }
            }
            assert_eq!(brute_orbits, keys.len(), "n={n} m={m} {family}");
            assert_eq!(keys.iter().map(|k| k.orbit_size).sum::<u64>(), members, "n={n} m={m} {family}");
            if family == Family::Principal {
                assert_eq!(members, binom(n, m as u64));
            }
        }
    }

    #[test]
    fn orbit_partitions_match_brute_force() {
        for n in [2u64, 3, 4, 5, 6, 7, 8, 9, 10] {
            check_partition(n, Family::Principal);
            check_partition(n, Family::AllPairs);
            for p in crate::arith::prime_divisors(n) {
                check_partition(n, Family::NPrimePrincipal(p));
            }
        }
        check_partition(12, Family::DPrincipal(4));
    }

    #[test]
    fn principal_pruning_is_sound() {
        for n in 3..=10u64 {
            let g = AffineGroup::new(n);
            for s in 1..(1u64 << n) {
                if s.count_ones() as u64 > n / 2 {
                    continue;
                }
                let (c, _, _) = g.canonicalize(s);
                let z1 = minor_is_zero(&MinorSpec::principal(n, from_mask(s)).unwrap());
                let z2 = minor_is_zero(&MinorSpec::principal(n, from_mask(c)).unwrap());
                assert_eq!(z1, z2, "n={n} s={:?}", from_mask(s));
            }
        }
    }

    #[test]
    fn complements() {
        let s = MinorSpec::new(7, vec![0, 1, 2, 3, 5], vec![1, 2, 3, 4, 6]).unwrap();
        let c = complement_reduce(&s);
        assert_eq!((c.rows(), c.cols()), (&[4u64, 6][..], &[0u64, 5][..]));
        let s = MinorSpec::principal(6, vec![0, 1, 3]).unwrap();
        assert_eq!(complement_reduce(&s), s);
        assert!(minor_is_zero(&MinorSpec::principal(4, vec![0, 2]).unwrap()));
        assert!(minor_is_zero(&MinorSpec::principal(4, vec![1, 3]).unwrap()));
        let action = FamilyAction::new(4, Family::Principal).unwrap();
        let key = affine_canonical(4, &[0, 2]).unwrap();
        assert_eq!(action.complement_key(&key).rows, vec![0, 2]);
    }

    #[test]
    fn ap_examples() {
        let s = MinorSpec::principal(5, vec![0, 1, 4]).unwrap();
        let cert = ap_certificate(&s).unwrap();
        assert!(check_ap_certificate(&s, &cert));
        let step4 = ap_certificate_with(&s, Side::Rows, 4).unwrap();
        assert_eq!(step4.start, 1);
        assert!(check_ap_certificate(&s, &step4));

        let s = MinorSpec::principal(7, vec![0, 1, 3]).unwrap();
        assert!((1..7).all(|d| ap_certificate_with(&s, Side::Rows, d).is_none()));
        assert!(ap_certificate(&s).is_none());

        let s = MinorSpec::principal(6, vec![0, 2, 4]).unwrap();
        let cert = ap_certificate(&s).unwrap();
        assert_eq!(cert.step, 2);
        assert!(check_ap_certificate(&s, &cert));
    }

    #[test]
    fn ap_certificates_are_confirmed_by_norms() {
        for n in [5u64, 6, 7, 10, 12] {
            for m in 1..=(n / 2) as usize {
                for key in enumerate_orbits(n, m, Family::AllPairs).unwrap() {
                    let spec = key.spec();
                    if let Some(cert) = ap_certificate(&spec) {
                        assert!(check_ap_certificate(&spec, &cert));
                        let r = minor_norm(&spec);
                        assert!(!num_traits::Zero::is_zero(&r.norm), "{spec}");
                        for p in r.factorization.prime_list() {
                            assert!(n % u64::try_from(&p).unwrap() == 0, "{spec}: {p}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn family_round_trip() {
        for f in [Family::Principal, Family::AllPairs, Family::DPrincipal(3), Family::NPrimePrincipal(5)] {
            assert_eq!(parse_family(&f.to_string()), Some(f));
        }
    }
}
