//! Decay exponents against brute-force sums and analytic limits.

use proptest::prelude::*;

use xidd_core::oracle::required_fock_dim;
use xidd_core::{
    coherence_ratio, free_decay_baseline, gamma_exponents, BathSpec, ChiConvention, FilterBank, KernelOptions,
    ModeSpec, QuadratureOptions, ScheduleSpec, Scheme,
};

const DEFAULT_T: f64 = 3.1118;

fn default_bath() -> BathSpec {
    BathSpec::ohmic(0.25, 100.0, 150.0).unwrap()
}

/// Uniform midpoint sum of `1/2 I coth |chi_m|^2` written out from the
/// bath formula, not the library's weight function.
fn midpoint_gamma(scheme: Scheme, t: f64, panels: usize) -> Vec<f64> {
    let bath = default_bath();
    let s = ScheduleSpec::new(scheme, 6, 50, t).build().unwrap();
    let bank = FilterBank::new(&s, ChiConvention::Toggling);
    let h = bath.cutoff / panels as f64;
    let mut sums = [0.0; 5];
    for p in 0..panels {
        let w = (p as f64 + 0.5) * h;
        let density = bath.alpha / 4.0 * w * (-w / bath.cutoff).exp();
        let coth = 1.0 / (w / (2.0 * bath.temperature)).tanh();
        let chis = bank.evaluate(w).chi;
        for (acc, c) in sums.iter_mut().zip(&chis) {
            *acc += 0.5 * density * coth * c.norm_sqr();
        }
    }
    sums.iter().map(|s| s * h).collect()
}

#[test]
fn adaptive_matches_million_panel_midpoint_sum() {
    for scheme in [Scheme::Pdd, Scheme::Udd] {
        let s = ScheduleSpec::new(scheme, 6, 50, DEFAULT_T).build().unwrap();
        let adaptive = gamma_exponents(&s, &default_bath(), &KernelOptions::default()).unwrap();
        let brute = midpoint_gamma(scheme, DEFAULT_T, 1_000_000);
        for (m, (a, b)) in adaptive.gamma.iter().zip(&brute).enumerate() {
            let rel = (a - b).abs() / b.abs();
            println!(
                "{scheme} Gamma_{} adaptive {a:.12e} midpoint {b:.12e} rel {rel:.2e}",
                m + 1
            );
            assert!(rel <= 1e-6, "{scheme} m={}", m + 1);
        }
    }
}

#[test]
fn extra_refinement_is_stable() {
    for scheme in [Scheme::Pdd, Scheme::Udd] {
        let s = ScheduleSpec::new(scheme, 6, 50, DEFAULT_T).build().unwrap();
        let base = gamma_exponents(&s, &default_bath(), &KernelOptions::default()).unwrap();
        let opts = KernelOptions {
            quadrature: QuadratureOptions {
                extra_refinement: 1,
                ..Default::default()
            },
            ..Default::default()
        };
        let deeper = gamma_exponents(&s, &default_bath(), &opts).unwrap();
        assert!(deeper.quadrature_points > base.quadrature_points);
        for (a, b) in base.gamma.iter().zip(&deeper.gamma) {
            assert!((a - b).abs() <= 1e-6 * b.abs(), "{scheme}: {a} vs {b}");
        }
    }
}

#[test]
fn short_time_and_zero_coupling() {
    let opts = KernelOptions::default();
    for scheme in [Scheme::Pdd, Scheme::Udd] {
        let s = ScheduleSpec::new(scheme, 6, 50, 1e-6).build().unwrap();
        let p = coherence_ratio(&s, &default_bath(), &opts).unwrap();
        assert!((1.0 - p).abs() <= 1e-9);
        let s = ScheduleSpec::new(scheme, 6, 50, DEFAULT_T).build().unwrap();
        assert_eq!(
            coherence_ratio(&s, &default_bath().with_alpha(0.0), &opts).unwrap(),
            1.0
        );
    }
}

#[test]
fn unpulsed_decay_matches_single_mode_formula() {
    // -ln|rho01| = 1/2 |j|^2 c^2 |xi(w, T)|^2 coth(w / 2T'), with c the
    // difference of sigma_z eigenvalues on levels 1 and 0
    let (t, temp) = (1.7, 0.8);
    for (transition, c) in [(0usize, 2.0f64), (1, 1.0)] {
        let (omega, j) = (1.2, 0.15);
        let d = required_fock_dim(omega, temp, 1e-12);
        let modes = [ModeSpec::new(transition, omega, j, d)];
        let got = free_decay_baseline(t, &modes, temp, 3).unwrap();
        let xi2 = 4.0 * (omega * t / 2.0).sin().powi(2) / (omega * omega);
        let want = 0.5 * j * j * c * c * xi2 / (omega / (2.0 * temp)).tanh();
        assert!(
            (got - want).abs() <= 1e-9 * want,
            "transition {transition}: {got} vs {want}"
        );
    }
    assert_eq!(
        free_decay_baseline(0.0, &[ModeSpec::new(0, 1.0, 0.1, 8)], 1.0, 2).unwrap(),
        0.0
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coherence_is_a_probability_and_scales_with_alpha(
        n in 2usize..7,
        cycles in 1usize..6,
        t in 0.05f64..4.0,
        alpha in 0.01f64..1.0,
        c in 0.25f64..3.0,
        udd in any::<bool>(),
    ) {
        let scheme = if udd { Scheme::Udd } else { Scheme::Pdd };
        let s = ScheduleSpec::new(scheme, n, cycles, t).build().unwrap();
        let bath = default_bath().with_alpha(alpha);
        let opts = KernelOptions::default();
        let g = gamma_exponents(&s, &bath, &opts).unwrap();
        prop_assert!(g.gamma.iter().all(|x| x.is_finite() && *x >= 0.0));
        // large exponents underflow to P = 0, which is still a probability
        let p = g.coherence();
        prop_assert!((0.0..=1.0).contains(&p));
        let scaled = gamma_exponents(&s, &bath.with_alpha(c * alpha), &opts).unwrap();
        prop_assert!((scaled.total() - c * g.total()).abs() <= 1e-12 * c * g.total());
        if p > 1e-300 {
            let want = p.powf(c);
            prop_assert!((scaled.coherence() - want).abs() <= 1e-9 * want);
        }
    }
}

#[test]
fn unpulsed_regression_fixture() {
    // one mode with the parameters of the smallest calibration case
    let got = free_decay_baseline(2.0, &[ModeSpec::new(0, 1.0, 0.1, 25)], 1.0, 2).unwrap();
    assert!((got - 1.2257903122739976e-1).abs() <= 1e-12, "{got:.17e}");
}
