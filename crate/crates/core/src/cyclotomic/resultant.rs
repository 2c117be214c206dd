//! Resultants over Z by the subresultant polynomial remainder sequence.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::CycPoly;

/// `Res(a, b)`, with the Sylvester-matrix sign convention (rows of `a` first).
pub fn resultant(a: &CycPoly, b: &CycPoly) -> BigInt {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return BigInt::zero();
    };
    let mut sign = 1i32;
    let (mut a, mut b) = if da < db {
        if da % 2 == 1 && db % 2 == 1 {
            sign = -1;
        }
        (b.clone(), a.clone())
    } else {
        (a.clone(), b.clone())
    };
    let da = a.degree().unwrap();
    let db = b.degree().unwrap();
    if db == 0 {
        let r = b.leading().unwrap().pow(da as u32);
        return if sign < 0 { -r } else { r };
    }

    let ca = a.content();
    let cb = b.content();
    a = a.div_exact_scalar(&ca);
    b = b.div_exact_scalar(&cb);
    let t = ca.pow(db as u32) * cb.pow(da as u32);

    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        if r.is_zero() {
            return BigInt::zero();
        }
        let divisor = &g * h.pow(delta);
        b = r.div_exact_scalar(&divisor);
        g = a.leading().unwrap().clone();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            g.pow(delta) / h.pow(delta - 1)
        };
        if b.degree().unwrap() == 0 {
            let da = a.degree().unwrap() as u32;
            let lb = b.leading().unwrap();
            let res = lb.pow(da) / h.pow(da - 1);
            let out = t * res;
            return if sign < 0 { -out } else { out };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Sylvester determinant by fraction-free elimination; independent of the PRS path.
    fn sylvester_resultant(a: &CycPoly, b: &CycPoly) -> BigInt {
        let (Some(m), Some(n)) = (a.degree(), b.degree()) else {
            return BigInt::zero();
        };
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for i in 0..n {
            for j in 0..=m {
                mat[i][i + j] = a.coeff(m - j);
            }
        }
        for i in 0..m {
            for j in 0..=n {
                mat[n + i][i + j] = b.coeff(n - j);
            }
        }
        bareiss_int(mat)
    }

    fn bareiss_int(mut m: Vec<Vec<BigInt>>) -> BigInt {
        let n = m.len();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * prev
    }

    #[test]
    fn known_values() {
        // Res(X^2 + 1, X - 2) = 5 and Res(X - 1, X + 1) = 2
        let a = CycPoly::from_i64s(&[1, 0, 1]);
        let b = CycPoly::from_i64s(&[-2, 1]);
        assert_eq!(resultant(&a, &b), BigInt::from(5));
        assert_eq!(resultant(&b, &a), BigInt::from(5));
        assert_eq!(
            resultant(&CycPoly::from_i64s(&[-1, 1]), &CycPoly::from_i64s(&[1, 1])),
            BigInt::from(2)
        );
        assert_eq!(resultant(&a, &CycPoly::from_i64s(&[3])), BigInt::from(9));
        assert_eq!(resultant(&a, &CycPoly::zero()), BigInt::zero());
    }

    proptest! {
        #[test]
        fn agrees_with_sylvester_determinant(
            a in prop::collection::vec(-6i64..=6, 1..7),
            b in prop::collection::vec(-6i64..=6, 1..7),
        ) {
            let a = CycPoly::from_i64s(&a);
            let b = CycPoly::from_i64s(&b);
            prop_assert_eq!(resultant(&a, &b), sylvester_resultant(&a, &b));
        }
    }
}
