mod common;

use common::{enumerate_composition_sum, oracle_is_automorphism};
use filiaut_core::{
    build_automorphism, composition_sum, is_automorphism, make_algebra, matches_local_shape, random_automorphism,
    recover_global, recover_params, solve_witness, verify_2local, AlgebraFamily, ExactScalar, FamilyTag, LocalShape,
    Mode, PointMap, QuadScalar, Scalar, ShapeVariant, Vector, WitnessParams,
};
use proptest::prelude::*;
use proptest::sample::select;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = ExactScalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ExactScalar::new(p, q))
}

/// A family together with a dimension it admits, n in 4..=6 (mu0 from 2).
fn family() -> impl Strategy<Value = AlgebraFamily> {
    (select(FamilyTag::ALL.to_vec()), 2usize..=6)
        .prop_filter_map("dimension below family minimum", |(tag, n)| AlgebraFamily::new(tag, n).ok())
}

fn point(n: usize) -> impl Strategy<Value = Vector<ExactScalar>> {
    prop::collection::vec(rational(), n).prop_filter_map("zero vector", |v| {
        let x = Vector::new(v);
        (!x.is_zero()).then_some(x)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_sum_matches_enumeration(a in prop::collection::vec(rational(), 8), j in 1usize..=8, i in 1usize..=8) {
        prop_assume!(i <= j);
        prop_assert_eq!(composition_sum(&a, i, j), enumerate_composition_sum(&a, i, j));
    }

    #[test]
    fn generated_automorphisms_pass_both_checkers(f in family(), seed in any::<u64>()) {
        let p = random_automorphism(f, seed);
        let m = build_automorphism(&p).unwrap();
        prop_assert!(is_automorphism(&make_algebra(f), &m).is_ok());
        prop_assert!(oracle_is_automorphism(f.tag, f.n, &m));
        prop_assert_eq!(recover_params(f, &m).unwrap(), p);
        if f.n >= 4 {
            prop_assert!(matches_local_shape(f, &m).is_ok());
        }
    }

    #[test]
    fn mu12_both_square_root_branches(n in 4usize..=7, seed in any::<u64>()) {
        let f = AlgebraFamily::new(FamilyTag::Mu12, n).unwrap();
        let mut p = random_automorphism(f, seed);
        let s = p.sqrt_a1.clone().expect("generated mu12 params carry sqrt_a1");
        p.sqrt_a1 = Some(-s);
        let m = build_automorphism(&p).unwrap();
        prop_assert!(oracle_is_automorphism(FamilyTag::Mu12, n, &m));
    }

    #[test]
    fn perturbing_a_cross_check_image_is_detected(
        f in family().prop_filter("filiform needs n >= 4", |f| f.n >= 4),
        seed in any::<u64>(),
        extra in prop::collection::vec(point(6), 1..4),
        which in any::<prop::sample::Index>(),
        delta in point(6),
    ) {
        let n = f.n;
        let m = build_automorphism(&random_automorphism(f, seed)).unwrap();
        let mut points = vec![Vector::basis(n, 1), Vector::basis(n, n)];
        let base = points.clone();
        points.extend(
            extra.iter().map(|x| Vector::new(x.entries()[..n].to_vec())).filter(|x| !x.is_zero() && !base.contains(x)),
        );
        // the basis images alone pin a (different) automorphism; perturb a cross-check point
        prop_assume!(points.len() > 2);
        let pm = PointMap::from_matrix(f, &m, &points);
        prop_assert!(verify_2local(&pm).passed());
        prop_assert_eq!(recover_global(&pm).unwrap(), m);

        let delta = &delta.entries()[..n];
        prop_assume!(delta.iter().any(|d| !d.is_zero()));
        let mut bad = pm.clone();
        let idx = 2 + which.index(bad.samples.len() - 2);
        for (v, d) in bad.samples[idx].fx.iter_mut().zip(delta) {
            *v = v.clone() + d;
        }
        prop_assert!(!verify_2local(&bad).passed());
    }

    #[test]
    fn mu0_reconstruction_reads_only_e1(n in 2usize..=7, seed in any::<u64>(), junk in prop::collection::vec(point(7), 1..4)) {
        let f = AlgebraFamily::new(FamilyTag::Mu0, n).unwrap();
        let m = build_automorphism(&random_automorphism(f, seed)).unwrap();
        let alone = PointMap::from_matrix(f, &m, &[Vector::basis(n, 1)]);
        prop_assert_eq!(recover_global(&alone), Ok(m.clone()));
        // arbitrary images at other points do not move the reconstruction
        let mut noisy = alone.clone();
        for j in &junk {
            let x = Vector::new(j.entries()[..n].to_vec());
            if x.is_zero() || x == Vector::basis(n, 1) {
                continue;
            }
            let fx: Vec<ExactScalar> = j.entries().iter().rev().take(n).cloned().collect();
            noisy.samples.push(filiaut_core::PointSample { x: x.into_entries(), fx });
        }
        prop_assert_eq!(recover_global(&noisy), Ok(m));
    }

    #[test]
    fn witnesses_are_automorphisms_and_respect_the_branch(
        f in family().prop_filter("filiform needs n >= 4", |f| f.n >= 4),
        seed in any::<u64>(),
        x in point(6),
        mode in select(vec![Mode::Exact, Mode::Approx]),
    ) {
        let n = f.n;
        let x = Vector::new(x.entries()[..n].to_vec());
        prop_assume!(!x.is_zero());
        let phi = LocalShape::new(f, ShapeVariant::Derived).random_member(&mut ChaCha8Rng::seed_from_u64(seed));
        let r = solve_witness(f, &phi, &x, mode).unwrap();
        let m = x.leading_index().unwrap();
        prop_assert_eq!(r.branch, m);
        let d = phi.get(m - 1, m - 1).clone();
        // a_1^m = b_mm wherever row m is not absorbed by a last-column unknown
        let pure_row = !f.tag.is_filiform() || m == 1 || (x[n - 1].is_zero() && m < n);
        let alg = make_algebra(f);
        match &r.params {
            WitnessParams::Exact(p) => {
                prop_assert_eq!(r.residual, 0.0);
                prop_assert!(oracle_is_automorphism(f.tag, n, &build_automorphism(p).unwrap()));
                if pure_row {
                    prop_assert_eq!(p.a1().pow(m as u32), d);
                }
            }
            WitnessParams::Quadratic(p) => {
                prop_assert_eq!(r.residual, 0.0);
                prop_assert!(oracle_is_automorphism(f.tag, n, &build_automorphism(p).unwrap()));
                if pure_row {
                    prop_assert_eq!(p.a1().pow(m as u32), QuadScalar::rational(&d));
                }
            }
            WitnessParams::Approx(p) => {
                prop_assert!(r.residual <= 1e-9);
                prop_assert!(is_automorphism(&alg, &build_automorphism(p).unwrap()).is_ok());
                if pure_row {
                    prop_assert!(p.a1().pow(m as u32).close_to(&d.to_approx()));
                }
            }
        }
    }
}
