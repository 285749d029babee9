//! 2-local automorphisms, represented extensionally as a finite map
//! `x -> Delta(x)`.
//!
//! `Delta(e_1)` fixes every `a_k`; for the filiform families `Delta(e_n)`
//! fixes the last column. The reconstructed automorphism must then agree with
//! `Delta` on every sample.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraFamily, FamilyTag};
use crate::automorphism::{build_automorphism, AutoParams};
use crate::linalg::{SquareMatrix, Vector};
use crate::scalar::Scalar;
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSample<S> {
    pub x: Vec<S>,
    pub fx: Vec<S>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointMap<S> {
    pub family: FamilyTag,
    pub n: usize,
    pub samples: Vec<PointSample<S>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Error)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TwoLocalError {
    #[error("{0}")]
    Invalid(String),
    #[error("point map has no sample at {point}")]
    MissingPoint { point: String },
    #[error("sample {index} has length {got}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
    #[error("Delta({point}) coordinate {coordinate} is {found}, but every automorphism agreeing on e1 has {expected}")]
    Inconsistent { point: String, coordinate: usize, found: String, expected: String },
    #[error("sample {index}: Delta(x) coordinate {coordinate} is {found}, the recovered automorphism gives {expected}")]
    SampleMismatch { index: usize, coordinate: usize, found: String, expected: String },
}

impl<S: Scalar> PointMap<S> {
    /// Samples `Delta = m` at the given points.
    pub fn from_matrix(family: AlgebraFamily, m: &SquareMatrix<S>, points: &[Vector<S>]) -> Self {
        let samples = points
            .iter()
            .map(|x| PointSample {
                x: x.entries().to_vec(),
                fx: m.mat_vec(x).expect("points match the matrix dimension").into_entries(),
            })
            .collect();
        PointMap { family: family.tag, n: family.n, samples }
    }

    pub fn algebra_family(&self) -> Result<AlgebraFamily, TwoLocalError> {
        AlgebraFamily::new(self.family, self.n).map_err(|e| TwoLocalError::Invalid(e.to_string()))
    }

    /// Every vector has length `n`; `e_1` (and `e_n` for filiform
    /// families) are sampled.
    pub fn validate(&self) -> Result<(), TwoLocalError> {
        let family = self.algebra_family()?;
        for (index, s) in self.samples.iter().enumerate() {
            for v in [&s.x, &s.fx] {
                if v.len() != self.n {
                    return Err(TwoLocalError::DimensionMismatch { index, expected: self.n, got: v.len() });
                }
            }
        }
        self.image_of_basis(1)?;
        if family.tag.is_filiform() {
            self.image_of_basis(self.n)?;
        }
        Ok(())
    }

    /// `Delta(e_k)` for 1-based `k`.
    pub fn image_of_basis(&self, k: usize) -> Result<Vector<S>, TwoLocalError> {
        let e = Vector::<S>::basis(self.n, k);
        self.image_of(&e).ok_or(TwoLocalError::MissingPoint { point: format!("e{k}") })
    }

    pub fn image_of(&self, x: &Vector<S>) -> Option<Vector<S>> {
        self.samples.iter().find(|s| s.x == x.entries()).map(|s| Vector::new(s.fx.clone()))
    }
}

fn inconsistent<S: Scalar>(point: &str, coordinate: usize, found: &S, expected: impl ToString) -> TwoLocalError {
    TwoLocalError::Inconsistent {
        point: point.to_string(),
        coordinate,
        found: found.to_string(),
        expected: expected.to_string(),
    }
}

/// The automorphism determined by `Delta(e_1)` (and `Delta(e_n)`).
pub fn recover_global<S: Scalar>(pm: &PointMap<S>) -> Result<SquareMatrix<S>, TwoLocalError> {
    pm.validate()?;
    let family = pm.algebra_family()?;
    let AlgebraFamily { tag, n } = family;
    let a = pm.image_of_basis(1)?.into_entries();
    if a[0].is_zero() {
        return Err(inconsistent("e1", 1, &a[0], "a nonzero value"));
    }
    if tag == FamilyTag::Mu14 && !a[0].close_to(&S::one()) {
        return Err(inconsistent("e1", 1, &a[0], 1));
    }
    let mut p = AutoParams { family: tag, n, a, b_nm1: None, b_n: None, sqrt_a1: None };
    let last = if tag.is_filiform() { Some(pm.image_of_basis(n)?) } else { None };
    if let Some(v) = &last {
        p.b_nm1 = Some(v[n - 2].clone());
        let corner = v[n - 1].clone();
        match tag {
            FamilyTag::Mu11 => {
                if corner.is_zero() {
                    return Err(inconsistent(&format!("e{n}"), n, &corner, "a nonzero value"));
                }
                p.b_n = Some(corner);
            }
            FamilyTag::Mu12 => {
                let target = p.a1().pow(n as u32 - 1);
                if !corner.pow(2).close_to(&target) {
                    return Err(inconsistent(&format!("e{n}"), n, &corner, format!("a square root of {target}")));
                }
                // the branch of sqrt(a_1^{n-3}) follows from coordinate n
                match p.a1().square_roots().into_iter().find(|s| s.pow(n as u32 - 1).close_to(&corner)) {
                    Some(s) => p.sqrt_a1 = Some(s),
                    None => p.b_n = Some(corner),
                }
            }
            _ => {}
        }
    }
    let m = build_automorphism(&p).map_err(|e| TwoLocalError::Invalid(e.to_string()))?;
    if let Some(v) = &last {
        let expected = m.column(n - 1);
        if let Some(k) = v.first_mismatch(&expected) {
            return Err(inconsistent(&format!("e{n}"), k, &v[k - 1], &expected[k - 1]));
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoLocalVerdict<S> {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<SquareMatrix<S>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<TwoLocalError>,
}

impl<S> TwoLocalVerdict<S> {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn check_sample<S: Scalar>(m: &SquareMatrix<S>, index: usize, s: &PointSample<S>) -> Result<(), TwoLocalError> {
    let expected = m.mat_vec(&Vector::new(s.x.clone())).map_err(|e| TwoLocalError::Invalid(e.to_string()))?;
    let found = Vector::new(s.fx.clone());
    match found.first_mismatch(&expected) {
        None => Ok(()),
        Some(k) => Err(TwoLocalError::SampleMismatch {
            index,
            coordinate: k,
            found: found[k - 1].to_string(),
            expected: expected[k - 1].to_string(),
        }),
    }
}

/// Passes iff the recovered automorphism reproduces every sample.
pub fn verify_2local<S: Scalar>(pm: &PointMap<S>) -> TwoLocalVerdict<S> {
    let m = match recover_global(pm) {
        Ok(m) => m,
        Err(e) => return TwoLocalVerdict { verdict: Verdict::Fail, matrix: None, failure: Some(e) },
    };
    let failure = pm.samples.iter().enumerate().find_map(|(i, s)| check_sample(&m, i, s).err());
    TwoLocalVerdict { verdict: Verdict::from_bool(failure.is_none()), matrix: Some(m), failure }
}

/// Whether one automorphism (the recovered one) agrees with `Delta` at both
/// `x` and `y`, which must be sampled points.
pub fn pair_witness_check<S: Scalar>(pm: &PointMap<S>, x: &Vector<S>, y: &Vector<S>) -> Result<(), TwoLocalError> {
    let m = recover_global(pm)?;
    for v in [x, y] {
        let index = pm
            .samples
            .iter()
            .position(|s| s.x == v.entries())
            .ok_or_else(|| TwoLocalError::MissingPoint { point: format!("{:?}", v.entries()) })?;
        check_sample(&m, index, &pm.samples[index])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::random_automorphism;
    use crate::local::{counterexample, sample_points};
    use crate::scalar::ExactScalar;

    fn q(p: i64) -> ExactScalar {
        ExactScalar::from(p)
    }

    fn fam(tag: FamilyTag, n: usize) -> AlgebraFamily {
        AlgebraFamily::new(tag, n).unwrap()
    }

    fn basis_points(n: usize) -> Vec<Vector<ExactScalar>> {
        vec![Vector::basis(n, 1), Vector::basis(n, n)]
    }

    #[test]
    fn mu0_round_trip() {
        let f = fam(FamilyTag::Mu0, 5);
        let m = build_automorphism(&random_automorphism(f, 2)).unwrap();
        let pm = PointMap::from_matrix(f, &m, &sample_points(5, 12, 1));
        assert_eq!(recover_global(&pm).unwrap(), m);
        assert!(verify_2local(&pm).passed());
    }

    #[test]
    fn identity_map() {
        for tag in FamilyTag::ALL {
            let f = fam(tag, 5);
            let id = SquareMatrix::<ExactScalar>::identity(5);
            let pm = PointMap::from_matrix(f, &id, &basis_points(5));
            assert_eq!(recover_global(&pm).unwrap(), id);
        }
    }

    #[test]
    fn mu13_corner_inconsistency() {
        let f = fam(FamilyTag::Mu13, 5);
        let mut m = SquareMatrix::<ExactScalar>::identity(5);
        m.set(4, 4, q(3));
        let pm = PointMap::from_matrix(f, &m, &basis_points(5));
        let err = recover_global(&pm).unwrap_err();
        assert!(matches!(err, TwoLocalError::Inconsistent { coordinate: 5, .. }), "{err:?}");
    }

    #[test]
    fn mu12_checks_both_radicals() {
        let f = fam(FamilyTag::Mu12, 5);
        let mut p = AutoParams::<ExactScalar>::identity(f);
        p.a = vec![q(4), q(0), q(1), q(0), q(1)];
        p.sqrt_a1 = Some(q(2));
        let m = build_automorphism(&p).unwrap();
        let pm = PointMap::from_matrix(f, &m, &basis_points(5));
        assert_eq!(recover_global(&pm).unwrap(), m);
        // wrong coordinate n-2 in Delta(e_n)
        let mut bad = pm.clone();
        bad.samples[1].fx[2] = q(0);
        assert!(matches!(recover_global(&bad), Err(TwoLocalError::Inconsistent { coordinate: 3, .. })));
        // coordinate n not a square root of a_1^{n-1}
        let mut bad = pm.clone();
        bad.samples[1].fx[4] = q(5);
        assert!(matches!(recover_global(&bad), Err(TwoLocalError::Inconsistent { coordinate: 5, .. })));
    }

    #[test]
    fn perturbed_sample_is_named() {
        let f = fam(FamilyTag::Mu0, 4);
        let m = build_automorphism(&random_automorphism(f, 8)).unwrap();
        let mut pm = PointMap::from_matrix(f, &m, &sample_points(4, 10, 3));
        pm.samples[6].fx[1] = pm.samples[6].fx[1].clone() + &q(1);
        let v = verify_2local(&pm);
        assert!(!v.passed());
        assert!(matches!(v.failure, Some(TwoLocalError::SampleMismatch { index: 6, coordinate: 2, .. })));
    }

    #[test]
    fn local_counterexample_is_not_2local() {
        let f = fam(FamilyTag::Mu0, 3);
        let pm = PointMap::from_matrix(f, &counterexample(f), &[Vector::basis(3, 1), Vector::basis(3, 2)]);
        assert_eq!(recover_global(&pm).unwrap(), SquareMatrix::identity(3));
        let v = verify_2local(&pm);
        assert!(matches!(v.failure, Some(TwoLocalError::SampleMismatch { index: 1, .. })));
    }

    #[test]
    fn pair_checks() {
        let f = fam(FamilyTag::Mu11, 5);
        let m = build_automorphism(&random_automorphism(f, 4)).unwrap();
        let pts = vec![Vector::basis(5, 1), Vector::basis(5, 5), Vector::basis(5, 2)];
        let mut pm = PointMap::from_matrix(f, &m, &pts);
        assert_eq!(pair_witness_check(&pm, &pts[0], &pts[2]), Ok(()));
        pm.samples[2].fx[3] = pm.samples[2].fx[3].clone() + &q(1);
        assert!(pair_witness_check(&pm, &pts[0], &pts[1]).is_ok());
        assert!(matches!(
            pair_witness_check(&pm, &pts[0], &pts[2]),
            Err(TwoLocalError::SampleMismatch { index: 2, .. })
        ));
    }

    #[test]
    fn missing_points() {
        let f = fam(FamilyTag::Mu12, 4);
        let id = SquareMatrix::<ExactScalar>::identity(4);
        let pm = PointMap::from_matrix(f, &id, &[Vector::basis(4, 1)]);
        assert_eq!(recover_global(&pm), Err(TwoLocalError::MissingPoint { point: "e4".into() }));
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"family":"mu0","n":2,"samples":[{"x":["1","0"],"fx":["2","1/3"]}]}"#;
        let pm: PointMap<ExactScalar> = serde_json::from_str(s).unwrap();
        assert_eq!(serde_json::to_string(&pm).unwrap(), s);
        let m = recover_global(&pm).unwrap();
        assert_eq!(m.column(1).into_entries(), vec![q(0), q(4)]);
    }
}
