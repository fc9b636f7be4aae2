use std::f64::consts::{FRAC_PI_2, PI};

use cdmid::geometry::{
    estimate_mgf_lipschitz, hausdorff_distance, mgf_inner_bound, mgf_outer_bound, within_fattening, FiniteSetSample,
    RadialSample, Side, StarSetApprox,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn point_set(dim: usize) -> impl Strategy<Value = FiniteSetSample<f64>> {
    prop::collection::vec(prop::collection::vec(-10.0..10.0f64, dim), 1..8)
        .prop_map(|pts| FiniteSetSample::new(pts.into_iter().map(DVector::from_vec).collect()).unwrap())
}

fn unit(theta: f64) -> DVector<f64> {
    DVector::from_vec(vec![theta.cos(), theta.sin()])
}

/// Radial function of the origin-centered ellipse with semi-axes `a`, `b`.
fn ellipse_mgf(a: f64, b: f64, theta: f64) -> f64 {
    1.0 / ((theta.cos() / a).powi(2) + (theta.sin() / b).powi(2)).sqrt()
}

/// Lipschitz constant of the ellipse MGF with respect to the chord between
/// unit directions, from a dense scan of the angular derivative.
fn ellipse_lipschitz(a: f64, b: f64) -> f64 {
    let n = 20_000;
    let step = 2.0 * PI / n as f64;
    let max_slope = (0..n)
        .map(|k| {
            let t = k as f64 * step;
            (ellipse_mgf(a, b, t + step) - ellipse_mgf(a, b, t)).abs() / step
        })
        .fold(0.0, f64::max);
    // Angle difference is at most pi/2 times the chord length.
    max_slope * FRAC_PI_2 * 1.01
}

#[derive(Debug, Clone)]
struct EllipseCase {
    a: f64,
    b: f64,
    members: Vec<(f64, f64)>,
    outsiders: Vec<(f64, f64)>,
    queries: Vec<f64>,
}

fn ellipse_case() -> impl Strategy<Value = EllipseCase> {
    (
        1.0..3.0f64,
        1.0..3.0f64,
        prop::collection::vec((0.0..2.0 * PI, 0.05..1.0f64), 1..12),
        prop::collection::vec((0.0..2.0 * PI, 1.0..2.0f64), 1..12),
        prop::collection::vec(0.0..2.0 * PI, 20),
    )
        .prop_map(|(a, b, members, outsiders, queries)| EllipseCase {
            a,
            b,
            members,
            outsiders,
            queries,
        })
}

fn approx_from(case: &EllipseCase, side: Side, witnesses: &[(f64, f64)]) -> StarSetApprox<f64> {
    let l = ellipse_lipschitz(case.a, case.b);
    StarSetApprox::with_samples(
        DVector::zeros(2),
        l,
        side,
        witnesses
            .iter()
            .map(|&(t, s)| RadialSample::new(unit(t), s * ellipse_mgf(case.a, case.b, t)).unwrap()),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hausdorff_is_a_metric(a in point_set(2), b in point_set(2), c in point_set(2)) {
        let ab = hausdorff_distance(&a, &b).unwrap();
        let ba = hausdorff_distance(&b, &a).unwrap();
        let bc = hausdorff_distance(&b, &c).unwrap();
        let ac = hausdorff_distance(&a, &c).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        prop_assert!(ac <= ab + bc + 1e-12);
    }

    #[test]
    fn fattening_matches_hausdorff(a in point_set(3), b in point_set(3), rho in 0.0..40.0f64) {
        let d = hausdorff_distance(&a, &b).unwrap();
        prop_assume!((rho - d).abs() > 1e-12);
        prop_assert_eq!(within_fattening(&a, &b, rho).unwrap(), rho >= d);
    }

    #[test]
    fn ellipse_bounds_sandwich_the_true_mgf(case in ellipse_case()) {
        let inner = approx_from(&case, Side::Inner, &case.members);
        let outer = approx_from(&case, Side::Outer, &case.outsiders);
        for &t in &case.queries {
            let truth = ellipse_mgf(case.a, case.b, t);
            let lo = mgf_inner_bound(&inner, &unit(t)).unwrap();
            let hi = mgf_outer_bound(&outer, &unit(t)).unwrap();
            prop_assert!(lo <= truth + 1e-12, "inner {lo} > true {truth}");
            prop_assert!(truth <= hi + 1e-12, "true {truth} > outer {hi}");
        }
    }

    #[test]
    fn bounds_refine_monotonically(case in ellipse_case(), extra in (0.0..2.0 * PI, 0.05..1.0f64), far in (0.0..2.0 * PI, 1.0..2.0f64)) {
        let inner = approx_from(&case, Side::Inner, &case.members);
        let outer = approx_from(&case, Side::Outer, &case.outsiders);
        let mut members = case.members.clone();
        members.push(extra);
        let mut outsiders = case.outsiders.clone();
        outsiders.push(far);
        let inner2 = approx_from(&case, Side::Inner, &members);
        let outer2 = approx_from(&case, Side::Outer, &outsiders);
        for &t in &case.queries {
            let d = unit(t);
            prop_assert!(mgf_inner_bound(&inner2, &d).unwrap() >= mgf_inner_bound(&inner, &d).unwrap());
            prop_assert!(mgf_outer_bound(&outer2, &d).unwrap() <= mgf_outer_bound(&outer, &d).unwrap());
        }
    }

    #[test]
    fn affine_image_of_a_box_keeps_a_bounded_mgf_constant(
        entries in prop::collection::vec(-1.0..1.0f64, 4),
        shift in prop::collection::vec(-5.0..5.0f64, 2),
    ) {
        let a = DMatrix::identity(2, 2) * 2.0 + DMatrix::from_vec(2, 2, entries);
        let b = DVector::from_vec(shift);
        let sv = a.clone().svd(false, false).singular_values;
        let (s_max, s_min) = (sv.max(), sv.min());
        prop_assume!(s_min > 0.2);
        // The image contains a ball of radius s_min and lies in one of
        // radius sqrt(2) s_max about the mapped center.
        let (r_in, r_out) = (s_min, 2f64.sqrt() * s_max);
        let bound = FRAC_PI_2 * r_out * (r_out * r_out - r_in * r_in).max(0.0).sqrt() / r_in;
        let center = b.clone();
        for level in [8usize, 16, 32, 64, 128] {
            let samples: Vec<RadialSample<f64>> = (0..level)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / level as f64;
                    let d = unit(t);
                    // Boundary point of [-1, 1]^2 along d.
                    let on_box = &d / d.amax();
                    RadialSample::about(&center, &(&a * on_box + &b)).unwrap()
                })
                .collect();
            let est = estimate_mgf_lipschitz(&samples).unwrap();
            prop_assert!(est.is_finite());
            prop_assert!(est <= bound * (1.0 + 1e-9), "level {level}: {est} > {bound}");
        }
    }
}
