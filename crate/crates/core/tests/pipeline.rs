//! End-to-end checks of the spectra and the steady state against
//! independent references.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;

use polaron_qhm::floquet::MachineParams;
use polaron_qhm::{bath, kms, oracle, polaron, thermo, BathLabel, BathMode, BathSpec, LineSpectrum, Numerics};

const N: usize = 1 << 14;

fn taus() -> Vec<f64> {
    (-8..=8).map(|k| k as f64).collect()
}

fn two_mode(label: BathLabel, f: [f64; 2], g: [f64; 2], xi: f64, beta: f64) -> BathSpec {
    let modes = f.iter().zip(g).map(|(&f, g)| BathMode::real(f, g).unwrap()).collect();
    BathSpec::new(label, modes, xi, beta).unwrap()
}

/// Largest relative deviation over lines above `1e-12` of the total.
fn worst_deviation(s: &LineSpectrum, fft: &oracle::SampledSpectrum) -> f64 {
    let floor = 1e-12 * s.total_weight();
    s.lines()
        .iter()
        .filter(|l| l.weight > floor)
        .map(|l| (fft.area_near(l.frequency) - l.weight).abs() / l.weight)
        .fold(0.0, f64::max)
}

#[test]
fn two_mode_spectra_match_tilted_fft() {
    let cold = two_mode(BathLabel::Cold, [0.5, 1.0], [0.6, 0.4], 0.7, 2.0);
    let hot = BathSpec::single(BathLabel::Hot, 1.5, 0.3, 0.5, 0.4).unwrap();
    let n = Numerics::default();
    let rabi = 0.3;
    let g1 = polaron::spectrum_g1(&cold, rabi, &n).unwrap();
    let (g2, _) = polaron::spectrum_g2(&cold, &hot, &n).unwrap();
    let period = 4.0 * PI;
    let f1 = oracle::tilted_spectrum_oracle(|z| polaron::transformed_correlation_1_at(&cold, rabi, z), period, N, &taus()).unwrap();
    let f2 = oracle::tilted_spectrum_oracle(|z| polaron::transformed_correlation_2_at(&cold, &hot, z), period, N, &taus()).unwrap();
    // products lighter than 1e-18 of the heaviest line are pruned, which
    // shows up as ~1e-8 relative error on the faintest tail lines
    assert!(worst_deviation(&g1, &f1) < 1e-6, "{}", worst_deviation(&g1, &f1));
    assert!(worst_deviation(&g2, &f2) < 1e-6, "{}", worst_deviation(&g2, &f2));
}

#[test]
fn weak_spectrum_matches_fft_of_correlation() {
    let hot = two_mode(BathLabel::Hot, [0.5, 1.5], [0.2, 0.1], 1.0, 0.7);
    let s = bath::weak_spectrum(&hot, 1e-2, 1e-9).unwrap();
    let fft = oracle::tilted_spectrum_oracle(|z| bath::weak_correlation_at(&hot, z), 4.0 * PI, N, &[0.0]).unwrap();
    assert_eq!(s.len(), 4);
    assert!(worst_deviation(&s, &fft) < 1e-10);
}

#[test]
fn multimode_g2_obeys_generalized_kms() {
    let cold = two_mode(BathLabel::Cold, [0.37, 0.8], [0.3, 0.2], 1.2, 5.0);
    let hot = two_mode(BathLabel::Hot, [1.0, 1.3], [0.1, 0.15], 0.8, 0.5);
    let n = Numerics::default();
    let (g2, d) = polaron::spectrum_g2(&cold, &hot, &n).unwrap();
    let r = kms::generalized_kms_check(&g2, &d, cold.beta(), hot.beta(), n.merge_tol);
    assert!(r.lines.pairs_checked > 10);
    assert!(r.max_violation() < 1e-9, "{r:?}");
    let g1 = polaron::spectrum_g1(&cold, 0.1, &n).unwrap();
    let k1 = kms::check_kms_g1(&g1, cold.beta(), n.merge_tol);
    assert!(k1.max_violation < 1e-9, "{k1:?}");
}

#[test]
fn undriven_qubit_relaxes_to_local_gibbs_state() {
    let cold = BathSpec::single(BathLabel::Cold, 0.4, 0.2, 0.5, 4.0).unwrap();
    let hot = BathSpec::single(BathLabel::Hot, 1.0, 0.1, 0.3, 1.0).unwrap();
    let p = MachineParams::new(1.0, 0.6, 0.0, cold, hot).unwrap();
    let sol = thermo::solve(&p, &Numerics::for_omega0(1.0).with_eta(1e-6)).unwrap();
    let rho = &sol.steady.rho;
    let ratio = rho[(0, 0)].re / rho[(1, 1)].re;
    assert_relative_eq!(ratio, (-sol.report.beta_eff).exp(), max_relative = 1e-6);
    assert!(sol.currents.power.abs() < 1e-12);
}

#[test]
fn weakly_driven_currents_follow_closed_forms() {
    let (omega0, omega_l) = (1.0, 0.6);
    let delta = omega0 - omega_l;
    let cold = BathSpec::single(BathLabel::Cold, delta, 0.3, 0.5, 14.0 / delta).unwrap();
    let hot = BathSpec::single(BathLabel::Hot, omega0, 0.1, 0.1, 6.0).unwrap();
    let a = polaron::franck_condon_a(&cold);
    let p = MachineParams::new(omega0, omega_l, 0.005 * delta / a, cold, hot).unwrap();
    let sol = thermo::solve(&p, &Numerics::for_omega0(omega0).with_eta(2e-3 * delta)).unwrap();
    let closed = thermo::analytic_weak_driving(&p, sol.g1_at_delta(), sol.g2_at_omega0(), sol.report.beta_eff).unwrap();
    assert_relative_eq!(sol.currents.power, closed.power, max_relative = 0.01);
    assert_relative_eq!(sol.currents.j1, closed.j1, max_relative = 0.01);
    assert_relative_eq!(sol.currents.j2, closed.j2, max_relative = 0.01);
}

fn machine(xi_c: f64, xi_h: f64, beta_c: f64, beta_h: f64, rabi: f64, omega_l: f64) -> MachineParams {
    let cold = BathSpec::single(BathLabel::Cold, 0.4, 0.2, xi_c, beta_c).unwrap();
    let hot = BathSpec::single(BathLabel::Hot, 1.0, 0.1, xi_h, beta_h).unwrap();
    MachineParams::new(1.0, omega_l, rabi, cold, hot).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn steady_state_is_a_valid_density_matrix(
        xi_c in 0.05f64..2.0,
        xi_h in 0.05f64..2.0,
        beta_c in 1.0f64..20.0,
        beta_h in 0.1f64..1.0,
        rabi in 0.001f64..0.3,
        omega_l in 0.3f64..0.9,
    ) {
        let p = machine(xi_c, xi_h, beta_c, beta_h, rabi, omega_l);
        let sol = thermo::solve(&p, &Numerics::for_omega0(1.0)).unwrap();
        prop_assert!(sol.steady.residual <= 1e-10);
        prop_assert!(sol.steady.trace_error < 1e-12);
        prop_assert!(sol.steady.min_eigenvalue >= -1e-12);
        let c = sol.currents;
        prop_assert!((c.power + c.j1 + c.j2).abs() <= 1e-12 * c.flux_scale.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn g1_sum_rule_and_kms_hold(
        xi in 0.01f64..3.0,
        f2 in 0.2f64..2.0,
        g2 in 0.0f64..0.5,
        beta in 0.1f64..30.0,
        rabi in 0.01f64..1.0,
    ) {
        let cold = two_mode(BathLabel::Cold, [0.5, f2], [0.3, g2], xi, beta);
        let n = Numerics::default();
        let g1 = polaron::spectrum_g1(&cold, rabi, &n).unwrap();
        let a = polaron::franck_condon_a(&cold);
        let expected = 2.0 * PI * 0.25 * rabi * rabi * (1.0 - a * a);
        prop_assert!((g1.total_weight() - expected).abs() <= 1e-9 * expected);
        prop_assert!(kms::check_kms_g1(&g1, beta, n.merge_tol).max_violation <= 1e-9);
    }
}
