//! Automorphisms, local automorphisms and 2-local automorphisms of the
//! null-filiform associative algebra `mu0` and the four filiform
//! associative algebras `mu11`..`mu14`, with exact verification.

use serde::Serialize;

pub mod algebra;
pub mod automorphism;
pub mod error;
pub mod linalg;
pub mod local;
pub mod quadratic;
pub mod scalar;
pub mod twolocal;

pub use algebra::{
    classify_profile, make_algebra, power_profile, AlgebraFamily, AlgebraSpec, Classification, FamilyTag,
    PowerSeriesProfile, StructureConstants,
};
pub use error::{Error, Result};
pub use linalg::{SquareMatrix, Vector};
pub use quadratic::QuadScalar;
pub use scalar::{nth_roots, ApproxScalar, ExactScalar, Mode, RootSet, Scalar, APPROX_TOL};
pub use automorphism::{
    build_automorphism, compose, composition_sum, is_automorphism, random_automorphism, recover_params, AutFailure,
    AutoParams,
};
pub use local::{
    counterexample, is_local_automorphism, matches_local_shape, sample_points, shape_discrepancy_report,
    solve_witness, verify_witnesses, LocalShape, LocalVerdict, ShapeDiscrepancyReport, ShapeVariant, ShapeViolation,
    WitnessError, WitnessParams, WitnessReport,
};
pub use twolocal::{
    pair_witness_check, recover_global, verify_2local, PointMap, PointSample, TwoLocalError, TwoLocalVerdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}
