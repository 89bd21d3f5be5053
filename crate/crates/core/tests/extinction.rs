use halfspace::ode::extinction_integrate;
use halfspace::*;
use proptest::prelude::*;

fn gamma(v: f64) -> GammaParam {
    GammaParam::new(v).unwrap()
}

fn certificate(gv: f64, u0: f64, du0: f64) -> ExtinctionCertificate {
    match extinction_detect(gamma(gv), 0.0, u0, du0).unwrap() {
        ExtinctionOutcome::Extinct(c) => c,
        ExtinctionOutcome::Global(g) => panic!("unexpected global branch {g:?}"),
    }
}

#[test]
fn closed_form_extinction_times() {
    let c = certificate(1.0, 1.0, 0.0);
    assert!((c.extinction_time - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-9);
    let c = certificate(0.5, 1.0, 0.0);
    assert!((c.extinction_time - 4.0 / 3.0).abs() < 1e-9);
    // γ = 3 from (1, −1) runs down the power branch: u = √(1 − 2t).
    let c = certificate(3.0, 1.0, -1.0);
    assert!((c.extinction_time - 0.5).abs() < 1e-10);
}

#[test]
fn ascending_start_reports_turning_point() {
    let c = certificate(0.5, 1.0, 1.0);
    let (t_turn, u_max) = c.turning_point.unwrap();
    assert!(t_turn > 0.0 && t_turn < c.extinction_time);
    // E = ½ + 2 = 2·√u_max
    assert!((u_max - 1.5625).abs() < 1e-12);
}

#[test]
fn global_branch_for_existence_regime() {
    match extinction_detect(gamma(3.0), 0.0, 1.0, 1.0).unwrap() {
        ExtinctionOutcome::Global(report) => {
            assert!((report.energy - 0.0).abs() < 1e-15);
            assert!(report.spec.is_power_branch());
            assert!((report.profile_origin + 0.5).abs() < 1e-12);
        }
        other => panic!("expected global branch, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn every_nonexistence_trajectory_dies(gv in 0.05f64..=1.0, u0 in 0.01f64..10.0, du0 in -5.0f64..5.0) {
        let c = certificate(gv, u0, du0);
        prop_assert!(c.extinction_time.is_finite() && c.extinction_time > 0.0);
        let integrated = extinction_integrate(gamma(gv), 0.0, u0, du0, 1e4).unwrap().unwrap();
        let scale = c.extinction_time.max(1.0);
        prop_assert!((integrated.extinction_time - c.extinction_time).abs() <= 1e-5 * scale,
            "quadrature {} vs integration {}", c.extinction_time, integrated.extinction_time);
    }
}
