use halfspace::numerics::QuadConfig;
use halfspace::ode::{profile_on_grid, series_value};
use halfspace::*;
use proptest::prelude::*;

fn gamma(v: f64) -> GammaParam {
    GammaParam::new(v).unwrap()
}

fn closed_form(t: f64) -> f64 {
    (t * t + 2.0 * t).sqrt()
}

#[test]
fn quadrature_and_shooting_agree_on_normalized_gamma3() {
    let spec = ProfileSpec::from_slope(gamma(3.0), 1.0).unwrap();
    assert!((spec.energy - 0.5).abs() < 1e-15);
    let quad = profile_build(&spec, 100.0, 1000).unwrap();
    let shot = shooting_integrate(&spec, 100.0, 1000, &ShootingConfig::default()).unwrap();
    assert_eq!(quad.grid, shot.profile.grid);
    for i in 1..quad.grid.len() {
        let exact = closed_form(quad.grid[i]);
        assert!((quad.values[i] - exact).abs() <= 1e-10 * exact);
        assert!((shot.profile.values[i] - exact).abs() <= 1e-8 * exact);
    }
    quad.check_shape(1e-12).unwrap();
    shot.profile.check_shape(1e-10).unwrap();
}

#[test]
fn profiles_lie_above_the_power_branch() {
    for gv in [1.5, 2.0, 4.0] {
        let g = gamma(gv);
        let spec = ProfileSpec::from_energy(g, 1.0).unwrap();
        let p = profile_build(&spec, 20.0, 200).unwrap();
        for (t, v) in p.grid.iter().zip(&p.values).skip(1) {
            assert!(*v >= explicit_solution_eval(g, *t).unwrap() * (1.0 - 1e-12));
        }
    }
}

#[test]
fn asymptotic_slope_and_decay_rate() {
    let spec = ProfileSpec::from_slope(gamma(3.0), 2.0).unwrap();
    let p = profile_build(&spec, 400.0, 800).unwrap();
    let est = asymptote_estimate(&p).unwrap();
    assert!((est.slope_inf - 2.0).abs() < 1e-6, "{}", est.slope_inf);
    assert!((est.rate + 2.0).abs() < 0.1, "{}", est.rate);
}

#[test]
fn near_origin_coefficient_is_universal() {
    for gv in [2.0, 3.0, 5.0] {
        let a = power_coefficient(gamma(gv)).unwrap();
        for e in [0.0, 0.5, 2.0] {
            let spec = ProfileSpec::from_energy(gamma(gv), e).unwrap();
            let t = 1e-6;
            let v = series_value(&spec, t).unwrap();
            let ratio = v / t.powf(2.0 / (gv + 1.0));
            assert!(
                (ratio - a).abs() <= 1e-4 * a,
                "gamma {gv}, E {e}: {ratio} vs {a}"
            );
        }
    }
}

#[test]
fn scaling_maps_normalized_profile_onto_family() {
    let g = gamma(3.0);
    let base = profile_build(&ProfileSpec::from_slope(g, 1.0).unwrap(), 50.0, 300).unwrap();
    for lambda in [0.5, 2.0, 4.0] {
        let target = ProfileSpec::from_lambda(g, lambda).unwrap();
        let scaled = scaling_apply(&target, &base).unwrap();
        let direct = profile_on_grid(&target, &scaled.grid, &QuadConfig::default()).unwrap();
        for (a, b) in scaled.values.iter().zip(&direct.values).skip(1) {
            assert!((a - b).abs() <= 1e-10 * b);
        }
        assert!((target.slope_inf - lambda.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn nonexistence_regime_is_refused() {
    for gv in [0.3, 1.0] {
        let g = gamma(gv);
        assert_eq!(regime_classify(g), Regime::NonexistenceGammaLe1);
        assert!(matches!(
            ProfileSpec::from_energy(g, 1.0),
            Err(Error::Regime(_))
        ));
        assert!(power_coefficient(g).is_err());
    }
    assert_eq!(regime_classify(gamma(1.0001)), Regime::ExistenceGammaGt1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shooting_conserves_energy(gv in 1.05f64..6.0, e in 0.0f64..10.0) {
        let spec = ProfileSpec::from_energy(gamma(gv), e).unwrap();
        let out = shooting_integrate(&spec, 20.0, 200, &ShootingConfig::default()).unwrap();
        prop_assert!(out.profile.energy_drift <= 1e-8, "drift {}", out.profile.energy_drift);
    }

    #[test]
    fn profiles_are_increasing_and_concave(gv in 1.2f64..5.0, e in 0.0f64..5.0) {
        let spec = ProfileSpec::from_energy(gamma(gv), e).unwrap();
        let p = profile_build(&spec, 10.0, 120).unwrap();
        prop_assert!(p.values.windows(2).all(|w| w[1] > w[0]));
        prop_assert!(p.slopes.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
    }

    #[test]
    fn rescaling_composes(l1 in 0.2f64..5.0, l2 in 0.2f64..5.0) {
        let base = profile_build(&ProfileSpec::from_slope(gamma(2.5), 1.0).unwrap(), 10.0, 40).unwrap();
        let two_step = rescale(&rescale(&base, l1).unwrap(), l2).unwrap();
        let one_step = rescale(&base, l1 * l2).unwrap();
        for (a, b) in two_step.values.iter().zip(&one_step.values) {
            prop_assert!((a - b).abs() <= 1e-13 * b.abs().max(1e-300));
        }
    }
}
