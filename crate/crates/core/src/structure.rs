//! Block determinants with nested column prefixes, and the CRT permutations
//! identifying F_{mn} with F_m ⊗ F_n for coprime m, n.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::cyclotomic::CycElt;
use crate::det;
use crate::error::{Error, Result};
use crate::minors::MinorSpec;

/// Block matrix whose (i, j) block is `a_ij · B_ij`, where `B_ij` is the first
/// `M_j` columns of the base block `B_i1` (size `M_i × M_1`).
#[derive(Clone, Debug)]
pub struct BlockSpec {
    order: u64,
    a: Vec<Vec<CycElt>>,
    widths: Vec<usize>,
    base: Vec<Vec<Vec<CycElt>>>,
}

impl BlockSpec {
    /// `order` is the cyclotomic order of all entries; use 1 for integers.
    pub fn new(order: u64, a: Vec<Vec<CycElt>>, widths: Vec<usize>, base: Vec<Vec<Vec<CycElt>>>) -> Result<Self> {
        let n = a.len();
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.into()));
        if n == 0 || a.iter().any(|r| r.len() != n) {
            return bad("scalar matrix must be square and nonempty");
        }
        if widths.len() != n || base.len() != n {
            return bad("need one width and one base block per block row");
        }
        if widths.windows(2).any(|w| w[0] < w[1]) {
            return bad("widths must be weakly decreasing");
        }
        for (i, block) in base.iter().enumerate() {
            if block.len() != widths[i] || block.iter().any(|r| r.len() != widths[0]) {
                return bad("base block i must be M_i × M_1");
            }
        }
        let all_orders_match = a.iter().flatten().chain(base.iter().flatten().flatten()).all(|x| x.order() == order);
        if !all_orders_match {
            return bad("entries must share the declared order");
        }
        Ok(BlockSpec { order, a, widths, base })
    }

    pub fn blocks(&self) -> usize {
        self.a.len()
    }

    /// The full `ΣM_i × ΣM_i` matrix.
    pub fn assemble(&self) -> Vec<Vec<CycElt>> {
        let mut out = Vec::new();
        for (i, block) in self.base.iter().enumerate() {
            for row in block {
                let mut r = Vec::new();
                for (j, &w) in self.widths.iter().enumerate() {
                    r.extend(row[..w].iter().map(|x| &self.a[i][j] * x));
                }
                out.push(r);
            }
        }
        out
    }

    fn leading_minor(&self, k: usize) -> CycElt {
        let sub: Vec<Vec<CycElt>> = self.a[..k].iter().map(|r| r[..k].to_vec()).collect();
        det::det(&sub, self.order)
    }
}

/// `∏_k (det A_k)^{M_k − M_{k+1}} · ∏_i det B_ii` with `M_{n+1} = 0`.
///
/// Block elimination divides by `det A_k / det A_{k−1}` while blocks remain, so a
/// vanishing leading minor there is reported instead of extending the formula.
pub fn block_determinant(spec: &BlockSpec) -> Result<CycElt> {
    let n = spec.blocks();
    let mut acc = CycElt::one(spec.order);
    for k in 1..=n {
        let next = if k < n { spec.widths[k] } else { 0 };
        let dk = spec.leading_minor(k);
        if k < n && next > 0 && dk.is_zero() {
            return Err(Error::ZeroPivot { k });
        }
        acc = &acc * &dk.pow((spec.widths[k - 1] - next) as u64);
    }
    for (i, block) in spec.base.iter().enumerate() {
        let w = spec.widths[i];
        let square: Vec<Vec<CycElt>> = block.iter().map(|r| r[..w].to_vec()).collect();
        acc = &acc * &det::det(&square, spec.order);
    }
    Ok(acc)
}

/// Random integer BlockSpec: entries in `[-5, 5]`, at most `max_blocks` blocks of width ≤ `max_width`.
pub fn random_block_spec<R: Rng>(rng: &mut R, max_blocks: usize, max_width: usize) -> BlockSpec {
    let n = rng.gen_range(1..=max_blocks);
    let entry = |rng: &mut R| CycElt::from_int(1, rng.gen_range(-5i64..=5).into());
    let a: Vec<Vec<CycElt>> = (0..n).map(|_| (0..n).map(|_| entry(rng)).collect()).collect();
    let mut widths: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=max_width)).collect();
    widths.sort_unstable_by(|x, y| y.cmp(x));
    if widths[0] == 0 {
        widths[0] = 1;
    }
    let base = widths
        .iter()
        .map(|&h| (0..h).map(|_| (0..widths[0]).map(|_| entry(rng)).collect()).collect())
        .collect();
    BlockSpec::new(1, a, widths, base).expect("generated spec is well formed")
}

/// ρ sends position `i·n + j` to the residue ≡ i (mod m), ≡ j (mod n);
/// τ multiplies by m + n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtMaps {
    pub m: u64,
    pub n: u64,
    pub rho: Vec<u64>,
    pub tau: Vec<u64>,
}

impl CrtMaps {
    pub fn rho_inverse(&self) -> Vec<u64> {
        invert(&self.rho)
    }

    pub fn tau_inverse(&self) -> Vec<u64> {
        invert(&self.tau)
    }
}

fn invert(perm: &[u64]) -> Vec<u64> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p as usize] = i as u64;
    }
    inv
}

fn check_coprime(m: u64, n: u64) -> Result<()> {
    if m < 2 || n < 2 {
        return Err(Error::InvalidArgument("both factors must be at least 2".into()));
    }
    if gcd(m, n) != 1 {
        return Err(Error::NotCoprime { k: m as i64, n });
    }
    Ok(())
}

pub fn crt_maps(m: u64, n: u64) -> Result<CrtMaps> {
    check_coprime(m, n)?;
    let mn = m * n;
    assert_eq!(gcd(m + n, mn), 1);
    let mut rho = vec![0u64; mn as usize];
    for x in 0..mn {
        rho[((x % m) * n + x % n) as usize] = x;
    }
    let tau = (0..mn).map(|j| ((m + n) * j) % mn).collect();
    Ok(CrtMaps { m, n, rho, tau })
}

/// Entry `(k, ℓ)` of F_m ⊗ F_n inside Z[ω_{mn}], with ζ = ω^n and η = ω^m.
fn kron_entry(m: u64, n: u64, k: u64, l: u64) -> CycElt {
    let (k1, k2, l1, l2) = (k / n, k % n, l / n, l % n);
    let zeta = CycElt::root_power(m * n, (n * ((k1 * l1) % m)) as i64);
    let eta = CycElt::root_power(m * n, (m * ((k2 * l2) % n)) as i64);
    &zeta * &eta
}

/// Entrywise check, in Z[ω_{mn}], that F_{mn} with rows permuted by τ∘ρ and
/// columns by ρ is the Kronecker product F_m ⊗ F_n.
pub fn verify_kron_equivalence(m: u64, n: u64) -> Result<bool> {
    let maps = crt_maps(m, n)?;
    let mn = m * n;
    for k in 0..mn {
        let row = maps.tau[maps.rho[k as usize] as usize];
        for l in 0..mn {
            let col = maps.rho[l as usize];
            let lhs = CycElt::root_power(mn, ((row * col) % mn) as i64);
            if lhs != kron_entry(m, n, k, l) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A minor of F_m ⊗ F_n, rows K and columns L as Kronecker positions `i·n + j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KronMinor {
    pub m: u64,
    pub n: u64,
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
}

impl KronMinor {
    /// Exact determinant of the Kronecker submatrix, rows and columns in increasing position order.
    pub fn value(&self) -> CycElt {
        let mat: Vec<Vec<CycElt>> = self
            .rows
            .iter()
            .map(|&k| self.cols.iter().map(|&l| kron_entry(self.m, self.n, k, l)).collect())
            .collect();
        det::det(&mat, self.m * self.n)
    }

    fn class_counts(&self, set: &[u64], d: u64) -> Vec<usize> {
        let (d1, d2) = (gcd(d, self.m), gcd(d, self.n));
        let mut counts = vec![0usize; (d1 * d2) as usize];
        for &k in set {
            let (k1, k2) = (k / self.n, k % self.n);
            counts[((k1 % d1) * d2 + k2 % d2) as usize] += 1;
        }
        counts
    }

    /// d-principal in Kronecker coordinates: class counts keyed by `(k1 mod d1, k2 mod d2)`.
    pub fn is_d_principal(&self, d: u64) -> bool {
        self.class_counts(&self.rows, d) == self.class_counts(&self.cols, d)
    }

    /// Smallest unit s mod d matching classes `(i1, i2) ↦ (s·i1, s·i2)`.
    pub fn galois_multiplier(&self, d: u64) -> Option<u64> {
        let (d1, d2) = (gcd(d, self.m), gcd(d, self.n));
        let k = self.class_counts(&self.rows, d);
        let l = self.class_counts(&self.cols, d);
        let candidates = if d == 1 { vec![1] } else { crate::arith::units(d) };
        candidates.into_iter().find(|&s| {
            (0..d1).all(|i1| {
                (0..d2).all(|i2| k[(i1 * d2 + i2) as usize] == l[(((s * i1) % d1) * d2 + (s * i2) % d2) as usize])
            })
        })
    }
}

/// Rows and columns pulled back through ρ. The result equals
/// `±σ_{m+n}(D_{A,B})`: the Kronecker rows sit at `τ(A)` in F_{mn}.
pub fn kron_transfer(spec: &MinorSpec, m: u64, n: u64) -> Result<KronMinor> {
    check_coprime(m, n)?;
    if m * n != spec.order() {
        return Err(Error::InvalidArgument(format!("{m}·{n} ≠ {}", spec.order())));
    }
    let inv = crt_maps(m, n)?.rho_inverse();
    let pull = |s: &[u64]| {
        let mut v: Vec<u64> = s.iter().map(|&x| inv[x as usize]).collect();
        v.sort_unstable();
        v
    };
    Ok(KronMinor { m, n, rows: pull(spec.rows()), cols: pull(spec.cols()) })
}

/// Coprime splittings `mn = N` with `2 ≤ m < n`.
pub fn coprime_splits(order: u64) -> Vec<(u64, u64)> {
    (2..order)
        .filter(|&m| order % m == 0 && m < order / m && gcd(m, order / m) == 1)
        .map(|m| (m, order / m))
        .collect()
}
