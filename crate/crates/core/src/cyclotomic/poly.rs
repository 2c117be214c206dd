use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense univariate polynomial over Z. Index `i` holds the coefficient of `X^i`;
/// the zero polynomial is the empty vector and no other value has a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CycPoly {
    coeffs: Vec<BigInt>,
}

impl CycPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CycPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        CycPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `X^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        CycPoly { coeffs }
    }

    /// `X^k - 1`.
    pub fn x_pow_minus_one(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        coeffs[0] -= 1;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// gcd of the coefficients, nonnegative; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides every coefficient by `c`; caller guarantees exactness.
    pub fn div_exact_scalar(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x / c).collect())
    }

    /// Division by a monic polynomial: `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem_monic(&self, d: &CycPoly) -> (CycPoly, CycPoly) {
        assert!(d.is_monic(), "divisor must be monic");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (CycPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = std::mem::take(&mut rem[i]);
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs[..dd].iter().enumerate() {
                if !dj.is_zero() {
                    rem[i - dd + j] -= &c * dj;
                }
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (CycPoly::new(quot), CycPoly::new(rem))
    }

    /// Reduction of exponents modulo `n`, i.e. the remainder modulo `X^n - 1`.
    pub fn fold_mod_x_pow_minus_one(&self, n: usize) -> CycPoly {
        if self.coeffs.len() <= n {
            return self.clone();
        }
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i % n] += c;
        }
        CycPoly::new(out)
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1)·self mod d`.
    pub fn pseudo_rem(&self, d: &CycPoly) -> CycPoly {
        let dd = d.degree().expect("pseudo-division by zero");
        let Some(ds) = self.degree() else {
            return CycPoly::zero();
        };
        if ds < dd {
            return self.clone();
        }
        let lc = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        // exactly deg(self) - deg(d) + 1 multiplications by lc
        for top in (dd..=ds).rev() {
            let c = rem[top].clone();
            for x in rem.iter_mut().take(top + 1) {
                *x *= &lc;
            }
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    rem[top - dd + j] -= &c * dj;
                }
            }
        }
        rem.truncate(dd);
        CycPoly::new(rem)
    }

    /// Exact quotient over Z, or `None` if `d` does not divide `self` in Z[X].
    pub fn exact_div(&self, d: &CycPoly) -> Option<CycPoly> {
        let dd = d.degree()?;
        let Some(ds) = self.degree() else {
            return Some(CycPoly::zero());
        };
        if ds < dd {
            return None;
        }
        let lc = d.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); ds - dd + 1];
        for i in (dd..=ds).rev() {
            let (q, r) = rem[i].div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            if q.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &q * dj;
            }
            quot[i - dd] = q;
        }
        rem.iter().all(|c| c.is_zero()).then(|| CycPoly::new(quot))
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl Add for &CycPoly {
    type Output = CycPoly;
    fn add(self, rhs: &CycPoly) -> CycPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CycPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &CycPoly {
    type Output = CycPoly;
    fn sub(self, rhs: &CycPoly) -> CycPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CycPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &CycPoly {
    type Output = CycPoly;
    fn mul(self, rhs: &CycPoly) -> CycPoly {
        if self.is_zero() || rhs.is_zero() {
            return CycPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        CycPoly::new(out)
    }
}

impl Neg for &CycPoly {
    type Output = CycPoly;
    fn neg(self) -> CycPoly {
        CycPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for CycPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "X")
    }
}

/// Writes `c_0 + c_1 var + ...` skipping zero terms.
pub(crate) fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt], var: &str) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        match i {
            0 => write!(f, "{mag}")?,
            _ => {
                if !mag.is_one() {
                    write!(f, "{mag}·")?;
                }
                if i == 1 {
                    write!(f, "{var}")?;
                } else {
                    write!(f, "{var}^{i}")?;
                }
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}
