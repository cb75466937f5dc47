//! Decay exponents and coherence ratio for an Ohmic bath.
//!
//! `Gamma_m = 1/2 * int_0^{w_c} I(w) coth(w / 2T') |chi_m(w)|^2 dw` and
//! `P(T) = exp(-sum_m Gamma_m)`. The integral stops at the cutoff.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::bath::BathSpec;
use crate::error::{argument, Error, Result};
use crate::filter::{ChiConvention, FilterBank};
use crate::quadrature::{integrate, QuadratureOptions};
use crate::schedule::{PulseSchedule, ScheduleSpec, Scheme};

#[derive(Clone, Debug, PartialEq)]
pub struct DecayExponents {
    /// `Gamma_1..Gamma_(n-1)`.
    pub gamma: Vec<f64>,
    /// Total integrand evaluations.
    pub quadrature_points: usize,
    pub estimated_relative_error: f64,
}

impl DecayExponents {
    pub fn total(&self) -> f64 {
        self.gamma.iter().sum()
    }

    pub fn coherence(&self) -> f64 {
        (-self.total()).exp()
    }
}

/// Quadrature settings plus the filter convention.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KernelOptions {
    pub quadrature: QuadratureOptions,
    pub convention: ChiConvention,
}

impl KernelOptions {
    pub fn with_tolerance(rel_tol: f64) -> Self {
        Self {
            quadrature: QuadratureOptions {
                rel_tol,
                ..Default::default()
            },
            ..Default::default()
        }
    }
}

/// Initial partition: at most half a period of `e^{i w T}` per panel.
fn initial_panels(schedule: &PulseSchedule, cutoff: f64) -> usize {
    let by_phase = (cutoff * schedule.total_time() / PI).ceil();
    (by_phase as usize).clamp(16, 100_000)
}

/// The integrand `1/2 I(w) coth(w/2T') |chi_m(w)|^2` without the factor `alpha`.
pub struct UnitIntegrand<'a> {
    bank: FilterBank,
    bath: &'a BathSpec,
    scratch: Vec<C64>,
}

impl<'a> UnitIntegrand<'a> {
    pub fn new(schedule: &PulseSchedule, bath: &'a BathSpec, convention: ChiConvention) -> Self {
        Self {
            bank: FilterBank::new(schedule, convention),
            bath,
            scratch: vec![C64::new(0.0, 0.0); schedule.n()],
        }
    }

    pub fn eval(&mut self, omega: f64, out: &mut [f64]) {
        self.bank.chi_norms_into(omega, &mut self.scratch, out);
        let weight = 0.5 * self.bath.unit_thermal_weight(omega);
        out.iter_mut().for_each(|v| *v *= weight);
    }
}

pub fn gamma_exponents(schedule: &PulseSchedule, bath: &BathSpec, opts: &KernelOptions) -> Result<DecayExponents> {
    bath.validate()?;
    let dim = schedule.n() - 1;
    if bath.alpha == 0.0 {
        return Ok(DecayExponents {
            gamma: vec![0.0; dim],
            quadrature_points: 0,
            estimated_relative_error: 0.0,
        });
    }
    let mut integrand = UnitIntegrand::new(schedule, bath, opts.convention);
    let result = integrate(
        |w, out| integrand.eval(w, out),
        0.0,
        bath.cutoff,
        dim,
        initial_panels(schedule, bath.cutoff),
        &opts.quadrature,
    )?;
    let estimated_relative_error = result.floored_relative_error(opts.quadrature.floor_fraction);
    Ok(DecayExponents {
        gamma: result.values.iter().map(|g| bath.alpha * g).collect(),
        quadrature_points: result.evaluations,
        estimated_relative_error,
    })
}

/// `P(T) = exp(-sum_m Gamma_m)`.
pub fn coherence_ratio(schedule: &PulseSchedule, bath: &BathSpec, opts: &KernelOptions) -> Result<f64> {
    Ok(gamma_exponents(schedule, bath, opts)?.coherence())
}

/// `P` at total time `t` for the schedule family described by `template`.
/// `t = 0` returns the analytic value 1.
pub fn coherence_at(template: &ScheduleSpec, t: f64, bath: &BathSpec, opts: &KernelOptions) -> Result<f64> {
    if t == 0.0 {
        bath.validate()?;
        return Ok(1.0);
    }
    let schedule = template.with_total_time(t).build()?;
    coherence_ratio(&schedule, bath, opts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceCurve {
    pub scheme: Scheme,
    pub bath: BathSpec,
    pub n: usize,
    pub cycles: usize,
    /// `(T, P(T))` in increasing `T`.
    pub samples: Vec<(f64, f64)>,
}

/// Checks that `grid` is non-empty, finite, non-negative and strictly increasing.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(argument("t_grid", "at least one time point is required"));
    }
    let mut prev = f64::NEG_INFINITY;
    for &t in grid {
        if !(t.is_finite() && t >= 0.0) {
            return Err(argument("t_grid", format!("time {t} must be finite and >= 0")));
        }
        if t <= prev {
            return Err(argument(
                "t_grid",
                format!("times must increase strictly ({prev} then {t})"),
            ));
        }
        prev = t;
    }
    Ok(())
}

/// Error annotated with the time point that produced it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("at T = {time}: {source}")]
pub struct PointError {
    pub time: f64,
    #[source]
    pub source: Error,
}

/// Rebuilds the schedule at every `T` of `grid` and evaluates `P(T)`.
pub fn sweep_curve(
    template: &ScheduleSpec,
    bath: &BathSpec,
    grid: &[f64],
    opts: &KernelOptions,
) -> std::result::Result<CoherenceCurve, PointError> {
    validate_grid(grid).map_err(|source| PointError { time: f64::NAN, source })?;
    let samples = grid
        .iter()
        .map(|&t| {
            coherence_at(template, t, bath, opts)
                .map(|p| (t, p))
                .map_err(|source| PointError { time: t, source })
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(CoherenceCurve {
        scheme: template.scheme,
        bath: *bath,
        n: template.n,
        cycles: template.cycles,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_bath() -> BathSpec {
        BathSpec::ohmic(0.25, 100.0, 150.0).unwrap()
    }

    #[test]
    fn zero_coupling_gives_unit_coherence() {
        let s = ScheduleSpec::new(Scheme::Udd, 6, 50, 3.0).build().unwrap();
        let bath = default_bath().with_alpha(0.0);
        let g = gamma_exponents(&s, &bath, &KernelOptions::default()).unwrap();
        assert_eq!(g.gamma, vec![0.0; 5]);
        assert_eq!(coherence_ratio(&s, &bath, &KernelOptions::default()).unwrap(), 1.0);
    }

    #[test]
    fn short_time_limit() {
        let s = ScheduleSpec::new(Scheme::Pdd, 6, 50, 1e-6).build().unwrap();
        let p = coherence_ratio(&s, &default_bath(), &KernelOptions::default()).unwrap();
        assert!((1.0 - p).abs() < 1e-9, "{p}");
        let g = gamma_exponents(&s, &default_bath(), &KernelOptions::default()).unwrap();
        assert!(g.estimated_relative_error <= 1e-6);
    }

    #[test]
    fn exponents_are_nonnegative_and_converged() {
        let s = ScheduleSpec::new(Scheme::Udd, 4, 3, 2.0).build().unwrap();
        let g = gamma_exponents(&s, &default_bath(), &KernelOptions::default()).unwrap();
        assert_eq!(g.gamma.len(), 3);
        assert!(g.gamma.iter().all(|&x| x >= 0.0));
        assert!(g.estimated_relative_error <= 1e-6);
        assert!(g.quadrature_points > 0);
    }

    #[test]
    fn alpha_scales_exponents_exactly() {
        let s = ScheduleSpec::new(Scheme::Udd, 3, 4, 1.5).build().unwrap();
        let a = gamma_exponents(&s, &default_bath(), &KernelOptions::default()).unwrap();
        let b = gamma_exponents(&s, &default_bath().with_alpha(0.5), &KernelOptions::default()).unwrap();
        for (x, y) in a.gamma.iter().zip(&b.gamma) {
            assert!((2.0 * x - y).abs() <= 1e-15 * y.abs());
        }
    }

    #[test]
    fn sweep_single_point_and_zero_time() {
        let template = ScheduleSpec::new(Scheme::Pdd, 2, 1, 1.0);
        let curve = sweep_curve(&template, &default_bath(), &[0.5], &KernelOptions::default()).unwrap();
        assert_eq!(curve.samples.len(), 1);
        let curve = sweep_curve(&template, &default_bath(), &[0.0, 0.1], &KernelOptions::default()).unwrap();
        assert_eq!(curve.samples[0], (0.0, 1.0));
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let template = ScheduleSpec::new(Scheme::Pdd, 2, 1, 1.0);
        let bath = default_bath();
        let opts = KernelOptions::default();
        assert!(sweep_curve(&template, &bath, &[], &opts).is_err());
        assert!(sweep_curve(&template, &bath, &[0.2, 0.1], &opts).is_err());
        assert!(sweep_curve(&template, &bath, &[-1.0], &opts).is_err());
    }

    #[test]
    fn point_errors_carry_time() {
        let template = ScheduleSpec::new(Scheme::Pdd, 2, 1, 1.0);
        let opts = KernelOptions {
            quadrature: QuadratureOptions {
                rel_tol: 1e-12,
                max_intervals: 16,
                ..Default::default()
            },
            ..Default::default()
        };
        let err = sweep_curve(&template, &default_bath(), &[0.0, 5.0], &opts).unwrap_err();
        assert_eq!(err.time, 5.0);
        assert!(matches!(err.source, Error::Convergence { .. }));
    }
}
