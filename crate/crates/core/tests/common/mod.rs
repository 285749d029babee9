//! Independent oracles, written from the definitions rather than the
//! library's tensor or parameter code.

#![allow(dead_code)]

use filiaut_core::{ExactScalar, FamilyTag, Scalar, SquareMatrix};

/// `e_i e_j` read straight off the family's multiplication rules (1-based);
/// `None` for a zero product.
pub fn family_product(tag: FamilyTag, n: usize, i: usize, j: usize) -> Option<usize> {
    let cap = if tag == FamilyTag::Mu0 { n } else { n - 1 };
    if i + j <= cap {
        return Some(i + j);
    }
    match (tag, i, j) {
        (FamilyTag::Mu12, i, j) if i == n && j == n => Some(n - 1),
        (FamilyTag::Mu13, 1, j) if j == n => Some(n - 1),
        (FamilyTag::Mu14, 1, j) if j == n => Some(n - 1),
        (FamilyTag::Mu14, i, j) if i == n && j == n => Some(n - 1),
        _ => None,
    }
}

pub fn oracle_multiply<S: Scalar>(tag: FamilyTag, n: usize, x: &[S], y: &[S]) -> Vec<S> {
    let mut z = vec![S::zero(); n];
    for i in 1..=n {
        if x[i - 1].is_zero() {
            continue;
        }
        for j in 1..=n {
            if y[j - 1].is_zero() {
                continue;
            }
            if let Some(k) = family_product(tag, n, i, j) {
                z[k - 1] = z[k - 1].clone() + &(x[i - 1].clone() * &y[j - 1]);
            }
        }
    }
    z
}

/// Determinant by Gaussian elimination over an exact field.
pub fn determinant<S: Scalar>(m: &SquareMatrix<S>) -> S {
    let n = m.dim();
    let mut a: Vec<Vec<S>> = m.rows();
    let mut det = S::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return S::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det = det * &a[k][k];
        let inv = a[k][k].recip().unwrap();
        for r in k + 1..n {
            let f = a[r][k].clone() * &inv;
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let v = a[r][c].clone() - &(f.clone() * &a[k][c]);
                a[r][c] = v;
            }
        }
    }
    det
}

/// Invertible and `m(e_i) m(e_j) = m(e_i e_j)` for every basis pair.
pub fn oracle_is_automorphism<S: Scalar>(tag: FamilyTag, n: usize, m: &SquareMatrix<S>) -> bool {
    if m.dim() != n || determinant(m).is_zero() {
        return false;
    }
    let cols: Vec<Vec<S>> = (0..n).map(|j| m.column(j).into_entries()).collect();
    for i in 1..=n {
        for j in 1..=n {
            let lhs = oracle_multiply(tag, n, &cols[i - 1], &cols[j - 1]);
            let rhs = match family_product(tag, n, i, j) {
                Some(k) => cols[k - 1].clone(),
                None => vec![S::zero(); n],
            };
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Sum over every ordered composition of `j` into `i` positive parts of
/// `a_{k_1} ... a_{k_i}`, by explicit enumeration.
pub fn enumerate_composition_sum(a: &[ExactScalar], i: usize, j: usize) -> ExactScalar {
    fn go(a: &[ExactScalar], parts_left: usize, remaining: usize, acc: ExactScalar, out: &mut ExactScalar) {
        if parts_left == 0 {
            if remaining == 0 {
                *out = out.clone() + &acc;
            }
            return;
        }
        for k in 1..=remaining {
            let coef = a.get(k - 1).cloned().unwrap_or_else(ExactScalar::zero);
            if !coef.is_zero() {
                go(a, parts_left - 1, remaining - k, acc.clone() * &coef, out);
            }
        }
    }
    let mut out = ExactScalar::zero();
    go(a, i, j, ExactScalar::one(), &mut out);
    out
}

pub fn filiform_families() -> [FamilyTag; 4] {
    [FamilyTag::Mu11, FamilyTag::Mu12, FamilyTag::Mu13, FamilyTag::Mu14]
}
