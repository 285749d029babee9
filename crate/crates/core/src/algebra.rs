//! The five algebra families as structure-constant tensors, plus the
//! power series `A^i` used to classify them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::scalar::{ExactScalar, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    #[serde(rename = "mu0")]
    Mu0,
    #[serde(rename = "mu11")]
    Mu11,
    #[serde(rename = "mu12")]
    Mu12,
    #[serde(rename = "mu13")]
    Mu13,
    #[serde(rename = "mu14")]
    Mu14,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 5] =
        [FamilyTag::Mu0, FamilyTag::Mu11, FamilyTag::Mu12, FamilyTag::Mu13, FamilyTag::Mu14];

    pub fn min_dim(self) -> usize {
        match self {
            FamilyTag::Mu0 => 2,
            _ => 4,
        }
    }

    pub fn is_filiform(self) -> bool {
        self != FamilyTag::Mu0
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::Mu0 => "mu0",
            FamilyTag::Mu11 => "mu11",
            FamilyTag::Mu12 => "mu12",
            FamilyTag::Mu13 => "mu13",
            FamilyTag::Mu14 => "mu14",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family `{s}` (expected mu0, mu11, mu12, mu13 or mu14)")))
    }
}

/// A family tag together with a dimension that the family admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AlgebraFamily {
    pub tag: FamilyTag,
    pub n: usize,
}

impl AlgebraFamily {
    pub fn new(tag: FamilyTag, n: usize) -> Result<Self> {
        let min = tag.min_dim();
        if n < min {
            return Err(Error::InvalidDimension { family: tag, n, min });
        }
        Ok(AlgebraFamily { tag, n })
    }
}

impl fmt::Display for AlgebraFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n = {})", self.tag, self.n)
    }
}

/// `e_i e_j = sum_k c[i][j][k] e_k`, stored densely with a side list of the
/// nonzero entries for fast products. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    n: usize,
    c: Vec<ExactScalar>,
    nonzero: Vec<(usize, usize, usize, ExactScalar)>,
}

impl StructureConstants {
    pub fn zero(n: usize) -> Self {
        StructureConstants { n, c: vec![ExactScalar::zero(); n * n * n], nonzero: Vec::new() }
    }

    /// Builds a tensor from 0-based `(i, j, k, value)` entries; repeated
    /// positions accumulate.
    pub fn from_entries<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, ExactScalar)>,
    {
        let mut out = Self::zero(n);
        for (i, j, k, v) in entries {
            for idx in [i, j, k] {
                if idx >= n {
                    return Err(Error::DimensionMismatch { expected: n, got: idx + 1 });
                }
            }
            let p = out.pos(i, j, k);
            out.c[p] = out.c[p].clone() + &v;
        }
        out.nonzero = out.collect_nonzero();
        Ok(out)
    }

    fn pos(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    fn collect_nonzero(&self) -> Vec<(usize, usize, usize, ExactScalar)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = &self.c[self.pos(i, j, k)];
                    if !v.is_zero() {
                        out.push((i, j, k, v.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &ExactScalar {
        &self.c[self.pos(i, j, k)]
    }

    /// Nonzero entries in lexicographic `(i, j, k)` order, 0-based.
    pub fn nonzero_entries(&self) -> &[(usize, usize, usize, ExactScalar)] {
        &self.nonzero
    }

    /// `e_i e_j` for 0-based `i`, `j`.
    pub fn basis_product(&self, i: usize, j: usize) -> Vector<ExactScalar> {
        Vector::new((0..self.n).map(|k| self.get(i, j, k).clone()).collect())
    }

    /// Bilinear product `x y`.
    pub fn multiply<S: Scalar>(&self, x: &Vector<S>, y: &Vector<S>) -> Result<Vector<S>> {
        for v in [x, y] {
            if v.len() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
            }
        }
        let mut z = vec![S::zero(); self.n];
        for (i, j, k, c) in &self.nonzero {
            let (xi, yj) = (&x[*i], &y[*j]);
            if xi.is_zero() || yj.is_zero() {
                continue;
            }
            let mut term = xi.clone() * yj;
            if !is_one(c) {
                term = term * &S::from_exact(c);
            }
            z[*k] = z[*k].clone() + &term;
        }
        Ok(Vector::new(z))
    }

    /// First basis triple (1-based) with `(e_i e_j) e_k != e_i (e_j e_k)`.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        let products: Vec<Vector<ExactScalar>> =
            (0..n * n).map(|p| self.basis_product(p / n, p % n)).collect();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ek = Vector::basis(n, k + 1);
                    let ei = Vector::basis(n, i + 1);
                    let left = self.multiply(&products[i * n + j], &ek).expect("dimensions agree");
                    let right = self.multiply(&ei, &products[j * n + k]).expect("dimensions agree");
                    if left != right {
                        return Some((i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        None
    }

    pub fn is_associative(&self) -> bool {
        self.associativity_violation().is_none()
    }
}

fn is_one(c: &ExactScalar) -> bool {
    c.is_one()
}

/// Multiplication table of the given family.
pub fn make_algebra(family: AlgebraFamily) -> StructureConstants {
    let AlgebraFamily { tag, n } = family;
    let one = ExactScalar::one;
    // e_i e_j = e_{i+j} up to the family's cap (1-based)
    let cap = if tag == FamilyTag::Mu0 { n } else { n - 1 };
    let mut entries = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i + j <= cap {
                entries.push((i - 1, j - 1, i + j - 1, one()));
            }
        }
    }
    let (first, last, below) = (0, n - 1, n - 2);
    match tag {
        FamilyTag::Mu0 | FamilyTag::Mu11 => {}
        FamilyTag::Mu12 => entries.push((last, last, below, one())),
        FamilyTag::Mu13 => entries.push((first, last, below, one())),
        FamilyTag::Mu14 => {
            entries.push((first, last, below, one()));
            entries.push((last, last, below, one()));
        }
    }
    StructureConstants::from_entries(n, entries).expect("family indices are in range")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerSeriesProfile {
    /// `dim A^1, dim A^2, ...`, ending with the first 0.
    pub dims: Vec<usize>,
    pub nilindex: usize,
}

/// Dimensions of `A^1 ⊇ A^2 ⊇ ...` using `A^{i+1} = sum_k A^k A^{i+1-k}`.
pub fn power_profile(alg: &StructureConstants) -> Result<PowerSeriesProfile> {
    let n = alg.dim();
    // bases[i] spans A^{i+1}, in reduced row-echelon form
    let mut bases: Vec<Vec<Vector<ExactScalar>>> = vec![(1..=n).map(|k| Vector::basis(n, k)).collect()];
    let mut dims = vec![n];
    while *dims.last().unwrap() != 0 {
        if dims.len() > n {
            return Err(Error::NotNilpotent { dims });
        }
        let i = bases.len(); // computing A^{i+1}
        let mut spanning = Vec::new();
        for k in 1..=i {
            for u in &bases[k - 1] {
                for v in &bases[i - k] {
                    let w = alg.multiply(u, v)?;
                    if !w.is_zero() {
                        spanning.push(w);
                    }
                }
            }
        }
        let basis = linalg::row_basis(spanning);
        dims.push(basis.len());
        bases.push(basis);
    }
    let nilindex = dims.len();
    Ok(PowerSeriesProfile { dims, nilindex })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    NullFiliform,
    Filiform,
    Neither,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::NullFiliform => "null-filiform",
            Classification::Filiform => "filiform",
            Classification::Neither => "neither",
        })
    }
}

pub fn classify_profile(alg: &StructureConstants) -> Classification {
    let n = alg.dim();
    let Ok(profile) = power_profile(alg) else {
        return Classification::Neither;
    };
    let dim = |i: usize| profile.dims.get(i - 1).copied().unwrap_or(0);
    if n >= 1 && (1..=n + 1).all(|i| dim(i) == n + 1 - i) {
        Classification::NullFiliform
    } else if n >= 2 && (2..=n).all(|i| dim(i) == n - i) {
        Classification::Filiform
    } else {
        Classification::Neither
    }
}

/// JSON description of an algebra: a named family or an explicit table of
/// nonzero structure constants with 1-based indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSpec {
    Family { family: FamilyTag, n: usize },
    Custom { custom: bool, n: usize, table: Vec<(usize, usize, usize, ExactScalar)> },
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<StructureConstants> {
        match self {
            AlgebraSpec::Family { family, n } => Ok(make_algebra(AlgebraFamily::new(*family, *n)?)),
            AlgebraSpec::Custom { custom, n, table } => {
                if !custom {
                    return Err(Error::Parse("custom algebra must set \"custom\": true".into()));
                }
                let mut entries = Vec::with_capacity(table.len());
                for (i, j, k, v) in table {
                    if [i, j, k].iter().any(|&&x| x == 0 || x > *n) {
                        return Err(Error::Parse(format!("table index ({i}, {j}, {k}) outside 1..={n}")));
                    }
                    entries.push((i - 1, j - 1, k - 1, v.clone()));
                }
                StructureConstants::from_entries(*n, entries)
            }
        }
    }
}
