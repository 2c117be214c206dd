//! Determinants over Z[ω]. Cofactor expansion up to 4×4, fraction-free Bareiss
//! elimination above that. Bareiss divides every entry of a step by the previous
//! pivot b; that quotient is exact, so we multiply by the product of the other
//! conjugates of b once per step and then divide by the integer N(b).

use num_bigint::BigInt;

use crate::cyclotomic::CycElt;

pub const COFACTOR_LIMIT: usize = 4;

/// Determinant of a square matrix over Z[ω_order]. An empty matrix has determinant 1.
pub fn det(m: &[Vec<CycElt>], order: u64) -> CycElt {
    if m.len() <= COFACTOR_LIMIT {
        cofactor(m, order)
    } else {
        bareiss(m.to_vec(), order)
    }
}

/// Laplace expansion along the first row.
pub fn cofactor(m: &[Vec<CycElt>], order: u64) -> CycElt {
    let n = m.len();
    match n {
        0 => CycElt::one(order),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = CycElt::zero(order);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<CycElt>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * &cofactor(&sub, order);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Fraction-free elimination with row pivoting.
pub fn bareiss(mut m: Vec<Vec<CycElt>>, order: u64) -> CycElt {
    let n = m.len();
    if n == 0 {
        return CycElt::one(order);
    }
    let mut negate = false;
    let mut prev: Option<(CycElt, BigInt)> = None;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return CycElt::zero(order);
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = match &prev {
                    None => v,
                    Some((cof, norm)) => (&v * cof).div_int_exact(norm).expect("Bareiss quotient is exact"),
                };
            }
        }
        let pivot = &m[k][k];
        let cof = pivot.conjugate_cofactor();
        let norm = (pivot * &cof).coeffs()[0].clone();
        prev = Some((cof, norm));
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}
