use cdmid::degradation::{heat_example_cdm, IdentityCdm};
use cdmid::linalg::least_squares;
use cdmid::simulation::{integrate, ControlAffine, HeatSystem, InputSignal, IntegrationOptions, SamplingSchedule};
use nalgebra::DVector;
use proptest::prelude::*;

fn profile(sys: &HeatSystem<f64>, a: f64, b: f64, k: f64) -> DVector<f64> {
    let n = sys.grid_points();
    let h = sys.spacing();
    let mut x = DVector::zeros(n + 1);
    for i in 0..n {
        let s = i as f64 * h;
        x[i] = a + b * (k * std::f64::consts::PI * s).cos() + 0.3 * s * s;
    }
    x[n] = 0.4;
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn heat_is_conserved_without_input(a in 0.0..2.0f64, b in -1.0..1.0f64, k in 1.0..4.0f64) {
        let sys = HeatSystem::new(0.1, 101, 0.05).unwrap();
        let x0 = profile(&sys, a, b, k);
        let total0 = sys.grid_integral(&x0);
        let schedule = SamplingSchedule::new(4.0, 0.0, 0, 2.0).unwrap();
        let zero = |_t: f64| DVector::zeros(2);
        let samples = integrate(&sys, &IdentityCdm { dim: 2 }, &x0, &zero, &schedule, &IntegrationOptions::default()).unwrap();
        for s in &samples {
            let drift = (sys.grid_integral(&s.state) - total0).abs();
            prop_assert!(drift <= 1e-8 * s.time, "drift {drift} at t = {}", s.time);
        }
    }
}

#[test]
fn observed_velocities_lie_in_the_input_range() {
    let sys = HeatSystem::new(0.1, 101, 0.05).unwrap();
    let cdm = heat_example_cdm::<f64>();
    let signal = InputSignal::heat_example();
    let schedule = SamplingSchedule::new(20.0, 0.01, 7, 1.0).unwrap();
    let samples = integrate(
        &sys,
        &cdm,
        &sys.initial_state(0.0, 0.0),
        &|t| signal.eval(t),
        &schedule,
        &IntegrationOptions::default(),
    )
    .unwrap();
    assert_eq!(samples.len(), 20);
    for s in &samples {
        let g = sys.input_map(&s.state);
        let rhs = &s.velocity - sys.drift(&s.state);
        let v = least_squares(&g, &rhs).unwrap();
        let residual = (&g * v - rhs).norm();
        assert!(residual < 1e-10, "residual {residual} at t = {}", s.time);
    }
}
