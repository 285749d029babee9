//! Closed-form automorphism groups of the five families and the brute-force
//! multiplicativity oracle that checks them.
//!
//! Every automorphism is determined by `phi(e_1) = sum a_k e_k`: column `i`
//! (for `i` below the last filiform column) holds the coefficients of
//! `P^i` with `P = sum a_k t^k`, truncated at degree `n` (`mu0`) or `n - 1`
//! (filiform). The filiform families add a correction in column 2 and a
//! family-specific last column.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraFamily, FamilyTag, StructureConstants};
use crate::error::{Error, Result};
use crate::linalg::{SquareMatrix, Vector};
use crate::scalar::{ExactScalar, Scalar};

/// Parameters of one automorphism.
///
/// * `b_nm1`: coefficient of `e_{n-1}` in `phi(e_n)`; filiform families only.
/// * `b_n`: coefficient of `e_n` in `phi(e_n)`. Free (nonzero) for `mu11`.
///   For `mu12` it may carry the radical `r` with `r^2 = a_1^{n-1}` directly,
///   which covers the branch that no rational `sqrt_a1` reaches.
/// * `sqrt_a1`: `mu12` only; `s` with `s^2 = a_1`, giving `r = s^{n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutoParams<S> {
    pub family: FamilyTag,
    pub n: usize,
    pub a: Vec<S>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_nm1: Option<S>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_n: Option<S>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sqrt_a1: Option<S>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

impl<S: Scalar> AutoParams<S> {
    pub fn identity(family: AlgebraFamily) -> Self {
        let n = family.n;
        let mut a = vec![S::zero(); n];
        a[0] = S::one();
        let filiform = family.tag.is_filiform();
        AutoParams {
            family: family.tag,
            n,
            a,
            b_nm1: filiform.then(S::zero),
            b_n: (family.tag == FamilyTag::Mu11).then(S::one),
            sqrt_a1: (family.tag == FamilyTag::Mu12).then(S::one),
        }
    }

    pub fn algebra_family(&self) -> Result<AlgebraFamily> {
        AlgebraFamily::new(self.family, self.n)
    }

    pub fn a1(&self) -> &S {
        &self.a[0]
    }

    /// Checks the family's parameter constraints (mode-aware equality).
    pub fn validate(&self) -> Result<()> {
        let n = self.algebra_family()?.n;
        if self.a.len() != n {
            return Err(invalid(format!("expected {n} values in `a`, got {}", self.a.len())));
        }
        if self.a1().is_zero() {
            return Err(invalid("a_1 must be nonzero"));
        }
        let tag = self.family;
        let forbid = |field: &Option<S>, name: &str| match field {
            Some(_) => Err(invalid(format!("`{name}` is not a parameter of {tag}"))),
            None => Ok(()),
        };
        if tag.is_filiform() {
            if self.b_nm1.is_none() {
                return Err(invalid("`b_nm1` is required"));
            }
        } else {
            forbid(&self.b_nm1, "b_nm1")?;
        }
        match tag {
            FamilyTag::Mu0 => {
                forbid(&self.b_n, "b_n")?;
                forbid(&self.sqrt_a1, "sqrt_a1")?;
            }
            FamilyTag::Mu11 => {
                forbid(&self.sqrt_a1, "sqrt_a1")?;
                match &self.b_n {
                    None => return Err(invalid("`b_n` is required")),
                    Some(b) if b.is_zero() => return Err(invalid("b_n must be nonzero")),
                    Some(_) => {}
                }
            }
            FamilyTag::Mu12 => {
                let target = self.a1().pow(n as u32 - 1);
                match (&self.sqrt_a1, &self.b_n) {
                    (None, None) => return Err(invalid("one of `sqrt_a1` or `b_n` is required")),
                    (Some(s), _) if !s.pow(2).close_to(self.a1()) => {
                        return Err(invalid(format!("sqrt_a1^2 = {} but a_1 = {}", s.pow(2), self.a1())))
                    }
                    (Some(s), Some(r)) if !s.pow(n as u32 - 1).close_to(r) => {
                        return Err(invalid("b_n disagrees with sqrt_a1^(n-1)"))
                    }
                    (None, Some(r)) if !r.pow(2).close_to(&target) => {
                        return Err(invalid(format!("b_n^2 = {} but a_1^(n-1) = {target}", r.pow(2))))
                    }
                    _ => {}
                }
            }
            FamilyTag::Mu13 => {
                forbid(&self.b_n, "b_n")?;
                forbid(&self.sqrt_a1, "sqrt_a1")?;
            }
            FamilyTag::Mu14 => {
                forbid(&self.b_n, "b_n")?;
                forbid(&self.sqrt_a1, "sqrt_a1")?;
                if !self.a1().close_to(&S::one()) {
                    return Err(invalid("a_1 must equal 1"));
                }
            }
        }
        Ok(())
    }

    /// The `mu12` radical `r = sqrt(a_1^{n-1})` on the chosen branch.
    pub fn radical(&self) -> Option<S> {
        match (&self.sqrt_a1, &self.b_n) {
            (Some(s), _) => Some(s.pow(self.n as u32 - 1)),
            (None, Some(r)) => Some(r.clone()),
            _ => None,
        }
    }
}

/// `powers[i][j]` = coefficient of `t^j` in `(sum_k a_k t^k)^i`, for
/// `0 <= i <= max_power` and `0 <= j <= cap`.
fn truncated_powers<S: Scalar>(a: &[S], cap: usize, max_power: usize) -> Vec<Vec<S>> {
    let mut p = vec![S::zero(); cap + 1];
    for (k, v) in a.iter().enumerate() {
        if k + 1 <= cap {
            p[k + 1] = v.clone();
        }
    }
    let mut out = Vec::with_capacity(max_power + 1);
    let mut cur = vec![S::zero(); cap + 1];
    cur[0] = S::one();
    out.push(cur.clone());
    for _ in 0..max_power {
        let mut next = vec![S::zero(); cap + 1];
        for (d1, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for d2 in 1..=cap - d1 {
                if !p[d2].is_zero() {
                    next[d1 + d2] = next[d1 + d2].clone() + &(c.clone() * &p[d2]);
                }
            }
        }
        cur = next;
        out.push(cur.clone());
    }
    out
}

/// Sum over ordered `i`-tuples of positive integers adding up to `j` of
/// `a_{k_1} ... a_{k_i}` (1-based `i`, `j`, `a`).
pub fn composition_sum<S: Scalar>(a: &[S], i: usize, j: usize) -> S {
    assert!(i >= 1 && i <= j, "need 1 <= i <= j");
    truncated_powers(a, j, i)[i][j].clone()
}

/// Matrix of the automorphism described by `p`.
pub fn build_automorphism<S: Scalar>(p: &AutoParams<S>) -> Result<SquareMatrix<S>> {
    p.validate()?;
    let n = p.n;
    let tag = p.family;
    let filiform = tag.is_filiform();
    let cap = if filiform { n - 1 } else { n };
    let last_power = if filiform { n - 1 } else { n };
    let powers = truncated_powers(&p.a, cap, last_power);

    let mut m = SquareMatrix::zeros(n);
    for (row, v) in p.a.iter().enumerate() {
        m.set(row, 0, v.clone());
    }
    for i in 2..=last_power {
        for j in i..=cap {
            m.set(j - 1, i - 1, powers[i][j].clone());
        }
    }
    if !filiform {
        return Ok(m);
    }

    let a1 = p.a1().clone();
    let an = p.a[n - 1].clone();
    let (nm2, nm1, last) = (n - 3, n - 2, n - 1); // 0-based rows of e_{n-2}, e_{n-1}, e_n
    let extra = match tag {
        FamilyTag::Mu12 => Some(an.clone() * &an),
        FamilyTag::Mu13 => Some(a1.clone() * &an),
        FamilyTag::Mu14 => Some(a1.clone() * &an + &(an.clone() * &an)),
        _ => None,
    };
    if let Some(extra) = extra {
        let v = m.get(nm1, 1).clone() + &extra;
        m.set(nm1, 1, v);
    }

    let b_nm1 = p.b_nm1.clone().expect("validated");
    m.set(nm1, last, b_nm1);
    match tag {
        FamilyTag::Mu11 => m.set(last, last, p.b_n.clone().expect("validated")),
        FamilyTag::Mu12 => {
            // -a_n sqrt(a_1^{n-3}) = -a_n r / a_1 on the same branch as r
            let r = p.radical().expect("validated");
            let low = match &p.sqrt_a1 {
                Some(s) => s.pow(n as u32 - 3),
                None => r.checked_div(&a1).expect("a_1 is nonzero"),
            };
            m.set(nm2, last, -(an * &low));
            m.set(last, last, r);
        }
        FamilyTag::Mu13 => m.set(last, last, a1.pow(n as u32 - 2)),
        FamilyTag::Mu14 => {
            m.set(nm2, last, -an);
            m.set(last, last, S::one());
        }
        FamilyTag::Mu0 => unreachable!(),
    }
    Ok(m)
}

/// Why a matrix is not an automorphism; positions are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AutFailure {
    DimensionMismatch { expected: usize, got: usize },
    Singular,
    /// `phi(e_i) phi(e_j) != phi(e_i e_j)` at coordinate `coordinate`.
    Product { i: usize, j: usize, coordinate: usize, product: String, image: String },
}

impl std::fmt::Display for AutFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AutFailure::DimensionMismatch { expected, got } => {
                write!(f, "matrix is {got}x{got}, algebra has dimension {expected}")
            }
            AutFailure::Singular => f.write_str("matrix is singular"),
            AutFailure::Product { i, j, coordinate, product, image } => write!(
                f,
                "pair ({i}, {j}): phi(e{i})phi(e{j}) has e{coordinate}-coordinate {product}, phi(e{i}e{j}) has {image}"
            ),
        }
    }
}

/// Brute-force oracle: invertible, and multiplicative on every basis pair.
pub fn is_automorphism<S: Scalar>(alg: &StructureConstants, m: &SquareMatrix<S>) -> Result<(), AutFailure> {
    let n = alg.dim();
    if m.dim() != n {
        return Err(AutFailure::DimensionMismatch { expected: n, got: m.dim() });
    }
    if !S::is_invertible(m) {
        return Err(AutFailure::Singular);
    }
    let cols: Vec<Vector<S>> = (0..n).map(|j| m.column(j)).collect();
    // phi(e_i e_j) = sum_k c_ijk phi(e_k), accumulated from the sparse table
    let mut images: Vec<Vec<S>> = vec![vec![S::zero(); n]; n * n];
    for (i, j, k, c) in alg.nonzero_entries() {
        let c = S::from_exact(c);
        let slot = &mut images[i * n + j];
        for (r, v) in cols[*k].iter().enumerate() {
            if !v.is_zero() {
                slot[r] = slot[r].clone() + &(v.clone() * &c);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let product = alg.multiply(&cols[i], &cols[j]).expect("dimensions agree");
            let image = Vector::new(std::mem::take(&mut images[i * n + j]));
            if let Some(k) = product.first_mismatch(&image) {
                return Err(AutFailure::Product {
                    i: i + 1,
                    j: j + 1,
                    coordinate: k,
                    product: product[k - 1].to_string(),
                    image: image[k - 1].to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Matrix of `phi_1 ∘ phi_2`.
pub fn compose<S: Scalar>(m1: &SquareMatrix<S>, m2: &SquareMatrix<S>) -> Result<SquareMatrix<S>> {
    m1.matmul(m2)
}

/// Reads the parameters back off a matrix and rebuilds it to confirm the
/// matrix lies in the family. For `mu12` the result is canonical: `sqrt_a1`
/// when some square root of `a_1` in this scalar mode reproduces the radical
/// (the first such root, i.e. the non-negative one in exact mode), `b_n`
/// otherwise.
pub fn recover_params<S: Scalar>(family: AlgebraFamily, m: &SquareMatrix<S>) -> Result<AutoParams<S>> {
    let n = family.n;
    if m.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.dim() });
    }
    let tag = family.tag;
    let mut p = AutoParams {
        family: tag,
        n,
        a: m.column(0).into_entries(),
        b_nm1: None,
        b_n: None,
        sqrt_a1: None,
    };
    if p.a1().is_zero() {
        return Err(mismatch(tag, m, 0, 0, "nonzero".into()));
    }
    if tag.is_filiform() {
        p.b_nm1 = Some(m.get(n - 2, n - 1).clone());
    }
    let r = m.get(n - 1, n - 1).clone();
    match tag {
        FamilyTag::Mu11 => p.b_n = Some(r),
        FamilyTag::Mu12 => {
            let s = p.a1().square_roots().into_iter().find(|s| s.pow(n as u32 - 1).close_to(&r));
            match s {
                Some(s) => p.sqrt_a1 = Some(s),
                None => p.b_n = Some(r),
            }
        }
        _ => {}
    }
    if let Err(e) = p.validate() {
        // a_1 = 1 for mu14, radicals for mu12: report where the matrix disagrees
        let expected = match tag {
            FamilyTag::Mu14 => (0, 0, "1".to_string()),
            FamilyTag::Mu12 | FamilyTag::Mu11 => (n - 1, n - 1, e.to_string()),
            _ => return Err(e),
        };
        return Err(mismatch(tag, m, expected.0, expected.1, expected.2));
    }
    let rebuilt = build_automorphism(&p)?;
    if let Some((row, col)) = m.first_mismatch(&rebuilt) {
        return Err(mismatch(tag, m, row - 1, col - 1, rebuilt.get(row - 1, col - 1).to_string()));
    }
    Ok(p)
}

fn mismatch<S: Scalar>(family: FamilyTag, m: &SquareMatrix<S>, row: usize, col: usize, expected: String) -> Error {
    Error::NotInFamily { family, row: row + 1, col: col + 1, found: m.get(row, col).to_string(), expected }
}

/// Small random rational `p/q` with `|p| <= 6`, `1 <= q <= 4`.
pub(crate) fn small_rational(rng: &mut impl Rng) -> ExactScalar {
    ExactScalar::new(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub(crate) fn small_nonzero_rational(rng: &mut impl Rng) -> ExactScalar {
    loop {
        let v = small_rational(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Deterministic random parameters satisfying the family's constraints.
pub fn random_automorphism(family: AlgebraFamily, seed: u64) -> AutoParams<ExactScalar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = family.n;
    let tag = family.tag;
    let mut p = AutoParams::<ExactScalar>::identity(family);
    match tag {
        FamilyTag::Mu14 => {}
        FamilyTag::Mu12 => {
            let mut s = small_nonzero_rational(&mut rng);
            // for odd n both signs of s give the same matrix; keep the canonical one
            if n % 2 == 1 {
                s = s.abs();
            }
            p.a[0] = s.pow(2);
            p.sqrt_a1 = Some(s);
        }
        _ => p.a[0] = small_nonzero_rational(&mut rng),
    }
    for v in p.a.iter_mut().skip(1) {
        *v = small_rational(&mut rng);
    }
    if tag.is_filiform() {
        p.b_nm1 = Some(small_rational(&mut rng));
    }
    if tag == FamilyTag::Mu11 {
        p.b_n = Some(small_nonzero_rational(&mut rng));
    }
    debug_assert!(p.validate().is_ok());
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::scalar::ApproxScalar;

    fn q(p: i64) -> ExactScalar {
        ExactScalar::from(p)
    }

    fn qs(xs: &[i64]) -> Vec<ExactScalar> {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn fam(tag: FamilyTag, n: usize) -> AlgebraFamily {
        AlgebraFamily::new(tag, n).unwrap()
    }

    fn params(tag: FamilyTag, a: &[i64]) -> AutoParams<ExactScalar> {
        AutoParams { family: tag, n: a.len(), a: qs(a), b_nm1: None, b_n: None, sqrt_a1: None }
    }

    fn columns(m: &SquareMatrix<ExactScalar>) -> Vec<Vec<ExactScalar>> {
        (0..m.dim()).map(|j| m.column(j).into_entries()).collect()
    }

    #[test]
    fn composition_sum_examples() {
        assert_eq!(composition_sum(&qs(&[1, 1, 0, 0]), 2, 3), q(2));
        assert_eq!(composition_sum(&qs(&[3, 5, 7, 1]), 4, 4), q(81));
        assert_eq!(composition_sum(&qs(&[2, 3, 5]), 2, 4), q(29));
    }

    #[test]
    fn mu0_identity_and_shift() {
        let id = build_automorphism(&params(FamilyTag::Mu0, &[1, 0, 0])).unwrap();
        assert_eq!(id, SquareMatrix::identity(3));
        let m = build_automorphism(&params(FamilyTag::Mu0, &[1, 1, 0])).unwrap();
        assert_eq!(columns(&m), vec![qs(&[1, 1, 0]), qs(&[0, 1, 2]), qs(&[0, 0, 1])]);
    }

    #[test]
    fn mu11_last_column() {
        let mut p = params(FamilyTag::Mu11, &[1, 0, 0, 0, 0]);
        p.b_nm1 = Some(q(7));
        p.b_n = Some(q(2));
        let m = build_automorphism(&p).unwrap();
        let mut expected = SquareMatrix::identity(5);
        expected.set(3, 4, q(7));
        expected.set(4, 4, q(2));
        assert_eq!(m, expected);
    }

    #[test]
    fn mu12_example_passes_oracle() {
        let mut p = params(FamilyTag::Mu12, &[4, 1, 0, 0, 1]);
        p.sqrt_a1 = Some(q(2));
        p.b_nm1 = Some(q(3));
        let m = build_automorphism(&p).unwrap();
        assert_eq!(is_automorphism(&make_algebra(fam(FamilyTag::Mu12, 5)), &m), Ok(()));
        // -a_5 * 2^2 at (3, 5), 2^4 at (5, 5)
        assert_eq!(*m.get(2, 4), q(-4));
        assert_eq!(*m.get(4, 4), q(16));
    }

    #[test]
    fn oracle_reports_first_pair() {
        let alg = make_algebra(fam(FamilyTag::Mu0, 3));
        let d = SquareMatrix::diagonal(qs(&[1, 2, 1]));
        let err = is_automorphism(&alg, &d).unwrap_err();
        assert!(matches!(err, AutFailure::Product { i: 1, j: 1, coordinate: 2, .. }), "{err:?}");
        assert_eq!(is_automorphism(&alg, &SquareMatrix::<ExactScalar>::zeros(3)), Err(AutFailure::Singular));
        assert_eq!(
            is_automorphism(&alg, &SquareMatrix::<ExactScalar>::identity(4)),
            Err(AutFailure::DimensionMismatch { expected: 3, got: 4 })
        );
    }

    #[test]
    fn identity_passes_everywhere() {
        for tag in FamilyTag::ALL {
            let f = fam(tag, 6);
            let id = SquareMatrix::<ExactScalar>::identity(6);
            assert_eq!(is_automorphism(&make_algebra(f), &id), Ok(()));
            assert_eq!(build_automorphism(&AutoParams::<ExactScalar>::identity(f)).unwrap(), id);
        }
    }

    #[test]
    fn invariant_violations() {
        let mut p = params(FamilyTag::Mu14, &[2, 0, 0, 0]);
        p.b_nm1 = Some(q(0));
        assert!(build_automorphism(&p).is_err());
        let mut p = params(FamilyTag::Mu11, &[1, 0, 0, 0]);
        p.b_nm1 = Some(q(0));
        p.b_n = Some(q(0));
        assert!(build_automorphism(&p).is_err());
        let mut p = params(FamilyTag::Mu12, &[3, 0, 0, 0]);
        p.b_nm1 = Some(q(0));
        p.sqrt_a1 = Some(q(2));
        assert!(build_automorphism(&p).is_err());
        assert!(build_automorphism(&params(FamilyTag::Mu0, &[0, 1, 0])).is_err());
    }

    #[test]
    fn recover_identity_and_round_trip() {
        let id = SquareMatrix::<ExactScalar>::identity(4);
        assert_eq!(recover_params(fam(FamilyTag::Mu0, 4), &id).unwrap().a, qs(&[1, 0, 0, 0]));
        let p = params(FamilyTag::Mu0, &[1, 1, 0]);
        let m = build_automorphism(&p).unwrap();
        assert_eq!(recover_params(fam(FamilyTag::Mu0, 3), &m).unwrap(), p);
    }

    #[test]
    fn recover_rejects_outsiders() {
        let d = SquareMatrix::diagonal(qs(&[1, 2, 1]));
        let err = recover_params(fam(FamilyTag::Mu0, 3), &d).unwrap_err();
        assert!(matches!(err, Error::NotInFamily { row: 2, col: 2, .. }), "{err:?}");
        let mut m = SquareMatrix::<ExactScalar>::identity(5);
        m.set(0, 0, q(2));
        assert!(matches!(
            recover_params(fam(FamilyTag::Mu14, 5), &m),
            Err(Error::NotInFamily { row: 1, col: 1, .. })
        ));
    }

    #[test]
    fn mu12_negative_branch_uses_b_n() {
        // n = 5, a_1 = 4: r = -16 is a valid radical that no sqrt_a1 produces
        let f = fam(FamilyTag::Mu12, 5);
        let mut p = params(FamilyTag::Mu12, &[4, 1, 0, 0, 2]);
        p.b_nm1 = Some(q(1));
        p.b_n = Some(q(-16));
        let m = build_automorphism(&p).unwrap();
        assert_eq!(is_automorphism(&make_algebra(f), &m), Ok(()));
        assert_eq!(recover_params(f, &m).unwrap(), p);
        // a_1 = 2 leaves Q entirely: only the b_n form is exact
        let mut p = params(FamilyTag::Mu12, &[2, 0, 0, 0, 0]);
        p.b_nm1 = Some(q(0));
        p.b_n = Some(q(4));
        let m = build_automorphism(&p).unwrap();
        assert_eq!(is_automorphism(&make_algebra(f), &m), Ok(()));
    }

    #[test]
    fn random_is_deterministic_and_valid() {
        let f = fam(FamilyTag::Mu0, 4);
        assert_eq!(random_automorphism(f, 7), random_automorphism(f, 7));
        for seed in 0..20 {
            let p = random_automorphism(fam(FamilyTag::Mu14, 5), seed);
            assert_eq!(p.a[0], q(1));
            let p = random_automorphism(fam(FamilyTag::Mu12, 6), seed);
            assert_eq!(p.sqrt_a1.clone().unwrap().pow(2), p.a[0]);
        }
    }

    #[test]
    fn approx_build_matches_exact() {
        let f = fam(FamilyTag::Mu13, 6);
        let p = random_automorphism(f, 3);
        let exact = build_automorphism(&p).unwrap();
        let pa = AutoParams {
            family: p.family,
            n: p.n,
            a: p.a.iter().map(ApproxScalar::from_exact).collect(),
            b_nm1: p.b_nm1.as_ref().map(ApproxScalar::from_exact),
            b_n: None,
            sqrt_a1: None,
        };
        let approx = build_automorphism(&pa).unwrap();
        assert!(approx.close_to(&exact.to_mode()));
        assert_eq!(is_automorphism(&make_algebra(f), &approx), Ok(()));
    }

    #[test]
    fn params_json_shape() {
        let mut p = params(FamilyTag::Mu12, &[4, 1, 0, 0]);
        p.b_nm1 = Some(ExactScalar::new(1, 2));
        p.sqrt_a1 = Some(q(-2));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"family":"mu12","n":4,"a":["4","1","0","0"],"b_nm1":"1/2","sqrt_a1":"-2"}"#);
        assert_eq!(serde_json::from_str::<AutoParams<ExactScalar>>(&s).unwrap(), p);
    }
}
