//! Coupling-reduced filter functions of a pulse schedule.
//!
//! `eta_l(w)` accumulates the phase `(1 - e^{i w dt}) / w` of every
//! segment that sits at position `l` inside its cycle, each multiplied by
//! `e^{i w t_start}`. The exponent filters `chi_m` are three-term
//! combinations of the `eta_l`.
//!
//! In the toggling frame segment `l` sees `sigma_z(i)` with its diagonal
//! shifted by `l-1`, so transition `i` is weighted by the cyclic pattern
//! `+1, -2, +1` on segments `i, i+1, i+2` (indices mod n, `eta_0 = eta_n`).
//! Exponent `m` is assigned to transition `0` for `m = 1`, `1` for `m = 2`
//! and `n - m + 1` for `m >= 3`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{argument, Error, Result};
use crate::schedule::PulseSchedule;

/// `(1 - e^{i w dt}) / w`, with the `w -> 0` limit `-i dt`.
pub fn xi_kernel(omega: f64, dt: f64) -> Result<C64> {
    if dt < 0.0 || !dt.is_finite() {
        return Err(argument("dt", format!("duration must be >= 0, got {dt}")));
    }
    if omega < 0.0 || !omega.is_finite() {
        return Err(argument("omega", format!("frequency must be >= 0, got {omega}")));
    }
    Ok(xi_unchecked(omega, dt))
}

#[inline]
pub(crate) fn xi_unchecked(omega: f64, dt: f64) -> C64 {
    if omega == 0.0 {
        return C64::new(0.0, -dt);
    }
    // 1 - e^{ix} = 2 sin^2(x/2) - i sin x, without cancellation at small x
    let (s, c) = (0.5 * omega * dt).sin_cos();
    C64::new(2.0 * s * s, -2.0 * s * c) / omega
}

/// Which three-term pattern to use for the second exponent filter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ChiConvention {
    /// `chi_2 = -2 eta_2 + eta_1 + eta_3`, the pattern the toggling frame
    /// produces for transition 1. Checked against the Fock-space oracle.
    #[default]
    Toggling,
    /// `chi_2 = -2 eta_2 + eta_1 + eta_(n-1)`. Agrees with `Toggling` only
    /// for n = 4 (and trivially n = 2, which has no `chi_2`).
    Literal,
    /// Sign-flipped centre weight (`+2`). A deliberately wrong kernel used
    /// as a negative control for the oracle check.
    FlippedCenter,
}

impl ChiConvention {
    pub fn name(self) -> &'static str {
        match self {
            ChiConvention::Toggling => "toggling",
            ChiConvention::Literal => "literal",
            ChiConvention::FlippedCenter => "flipped-center",
        }
    }
}

impl fmt::Display for ChiConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChiConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "toggling" => Ok(Self::Toggling),
            "literal" => Ok(Self::Literal),
            "flipped-center" => Ok(Self::FlippedCenter),
            other => Err(argument("chi_convention", format!("unknown convention `{other}`"))),
        }
    }
}

/// Transition index (0-based) whose bath feeds exponent `m` (1-based).
pub fn transition_for_exponent(m: usize, n: usize) -> Result<usize> {
    check_exponent(m, n)?;
    Ok(match m {
        1 => 0,
        2 => 1,
        _ => n - m + 1,
    })
}

/// Inverse of [`transition_for_exponent`].
pub fn exponent_for_transition(i: usize, n: usize) -> Result<usize> {
    if n < 2 || i + 2 > n {
        return Err(Error::LevelIndex { n, k: i });
    }
    Ok(match i {
        0 => 1,
        1 => 2,
        _ => n - i + 1,
    })
}

fn check_exponent(m: usize, n: usize) -> Result<()> {
    if m == 0 || m + 1 > n {
        return Err(Error::Index {
            what: "exponent index m",
            index: m,
            max: n.saturating_sub(1),
        });
    }
    Ok(())
}

/// 1-based `(a, b, c)` such that `chi_m = -2 eta_a + eta_b + eta_c`.
pub fn chi_pattern(m: usize, n: usize, convention: ChiConvention) -> Result<(usize, usize, usize)> {
    check_exponent(m, n)?;
    let pat = match (m, convention) {
        (1, _) => (1, 2, n),
        (2, ChiConvention::Literal) => (2, 1, n - 1),
        // n = 3 wraps eta_3 to itself; for n >= 3 this is the transition-1 pattern
        (2, _) => (2, 1, 3),
        (m, _) => (n - m + 2, n - m + 1, n - m + 3),
    };
    Ok(pat)
}

fn combine(etas: &[C64], pat: (usize, usize, usize), convention: ChiConvention) -> C64 {
    let center = if convention == ChiConvention::FlippedCenter {
        2.0
    } else {
        -2.0
    };
    etas[pat.0 - 1] * center + etas[pat.1 - 1] + etas[pat.2 - 1]
}

/// Precomputed view of a schedule for repeated frequency evaluations.
#[derive(Clone, Debug)]
pub struct FilterBank {
    n: usize,
    durations: Vec<f64>,
    starts: Vec<f64>,
    patterns: Vec<(usize, usize, usize)>,
    convention: ChiConvention,
}

impl FilterBank {
    pub fn new(schedule: &PulseSchedule, convention: ChiConvention) -> Self {
        let n = schedule.n();
        let patterns = (1..n)
            .map(|m| chi_pattern(m, n, convention).expect("m in range"))
            .collect();
        Self {
            n,
            durations: schedule.segments().to_vec(),
            starts: schedule.segment_starts().to_vec(),
            patterns,
            convention,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn convention(&self) -> ChiConvention {
        self.convention
    }

    /// Writes `eta_1..eta_n` into `out`.
    pub fn etas_into(&self, omega: f64, out: &mut [C64]) {
        debug_assert_eq!(out.len(), self.n);
        out.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        for (k, (&dt, &start)) in self.durations.iter().zip(&self.starts).enumerate() {
            let xi = xi_unchecked(omega, dt);
            let (s, c) = (omega * start).sin_cos();
            out[k % self.n] += xi * C64::new(c, s);
        }
    }

    /// Writes `|chi_1|^2..|chi_(n-1)|^2` into `out`, using `scratch` (length n)
    /// for the etas.
    pub fn chi_norms_into(&self, omega: f64, scratch: &mut [C64], out: &mut [f64]) {
        self.etas_into(omega, scratch);
        for (o, &pat) in out.iter_mut().zip(&self.patterns) {
            *o = combine(scratch, pat, self.convention).norm_sqr();
        }
    }

    pub fn evaluate(&self, omega: f64) -> FilterEvaluation {
        let mut eta = vec![C64::new(0.0, 0.0); self.n];
        self.etas_into(omega, &mut eta);
        let chi = self
            .patterns
            .iter()
            .map(|&pat| combine(&eta, pat, self.convention))
            .collect();
        FilterEvaluation { omega, eta, chi }
    }
}

/// `eta_1..eta_n` and `chi_1..chi_(n-1)` at one frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterEvaluation {
    pub omega: f64,
    pub eta: Vec<C64>,
    pub chi: Vec<C64>,
}

fn check_omega(omega: f64) -> Result<()> {
    if omega < 0.0 || !omega.is_finite() {
        return Err(argument("omega", format!("frequency must be >= 0, got {omega}")));
    }
    Ok(())
}

/// `eta_l(omega)` for 1-based segment position `l`.
pub fn eta(l: usize, omega: f64, schedule: &PulseSchedule) -> Result<C64> {
    let n = schedule.n();
    if l == 0 || l > n {
        return Err(Error::Index {
            what: "segment position l",
            index: l,
            max: n,
        });
    }
    check_omega(omega)?;
    let durations = schedule.segments();
    let starts = schedule.segment_starts();
    Ok((l - 1..durations.len())
        .step_by(n)
        .map(|k| {
            let (s, c) = (omega * starts[k]).sin_cos();
            xi_unchecked(omega, durations[k]) * C64::new(c, s)
        })
        .sum())
}

/// `chi_m(omega)` for 1-based exponent index `m` under `convention`.
pub fn chi(m: usize, omega: f64, schedule: &PulseSchedule, convention: ChiConvention) -> Result<C64> {
    let n = schedule.n();
    let pat = chi_pattern(m, n, convention)?;
    check_omega(omega)?;
    let etas = (1..=n).map(|l| eta(l, omega, schedule)).collect::<Result<Vec<_>>>()?;
    Ok(combine(&etas, pat, convention))
}

pub fn evaluate_filters(omega: f64, schedule: &PulseSchedule, convention: ChiConvention) -> Result<FilterEvaluation> {
    check_omega(omega)?;
    Ok(FilterBank::new(schedule, convention).evaluate(omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{ScheduleSpec, Scheme};
    use std::f64::consts::PI;

    fn sched(scheme: Scheme, n: usize, cycles: usize, t: f64) -> PulseSchedule {
        ScheduleSpec::new(scheme, n, cycles, t).build().unwrap()
    }

    #[test]
    fn xi_kernel_examples() {
        assert_eq!(xi_kernel(3.7, 0.0).unwrap(), C64::new(0.0, 0.0));
        assert_eq!(xi_kernel(0.0, 2.5).unwrap(), C64::new(0.0, -2.5));
        let w = 1.7;
        let z = xi_kernel(w, PI / w).unwrap();
        assert!((z - C64::new(2.0 / w, 0.0)).norm() < 1e-15);
        assert!(xi_kernel(1.0, -1.0).is_err());
        assert!(xi_kernel(-1.0, 1.0).is_err());
    }

    #[test]
    fn xi_kernel_matches_naive_form_away_from_zero() {
        for &(w, dt) in &[(0.3, 2.0), (10.0, 0.77), (99.0, 3.1)] {
            let naive = (C64::new(1.0, 0.0) - C64::new(0.0, w * dt).exp()) / w;
            assert!((xi_kernel(w, dt).unwrap() - naive).norm() < 1e-14);
        }
    }

    #[test]
    fn eta_single_cycle_first_segment_is_bare_kernel() {
        let s = sched(Scheme::Udd, 3, 1, 2.0);
        let w = 0.9;
        assert_eq!(eta(1, w, &s).unwrap(), xi_kernel(w, s.segment(1, 1)).unwrap());
    }

    #[test]
    fn eta_at_zero_frequency_sums_durations() {
        let s = sched(Scheme::Udd, 4, 3, 5.0);
        for l in 1..=4 {
            let total: f64 = (1..=3).map(|j| s.segment(j, l)).sum();
            let z = eta(l, 0.0, &s).unwrap();
            assert!(z.re == 0.0 && (z.im + total).abs() < 1e-14);
        }
    }

    #[test]
    fn eta_and_chi_index_errors() {
        let s = sched(Scheme::Pdd, 3, 1, 1.0);
        assert!(matches!(eta(0, 1.0, &s), Err(Error::Index { .. })));
        assert!(matches!(eta(4, 1.0, &s), Err(Error::Index { .. })));
        assert!(matches!(
            chi(3, 1.0, &s, ChiConvention::Toggling),
            Err(Error::Index { .. })
        ));
        let s2 = sched(Scheme::Pdd, 2, 1, 1.0);
        assert!(chi(1, 1.0, &s2, ChiConvention::Toggling).is_ok());
        assert!(chi(2, 1.0, &s2, ChiConvention::Toggling).is_err());
    }

    #[test]
    fn two_level_chi_is_twice_eta_difference() {
        let s = sched(Scheme::Udd, 2, 3, 1.3);
        let w = 4.2;
        let want = (eta(2, w, &s).unwrap() - eta(1, w, &s).unwrap()) * 2.0;
        assert!((chi(1, w, &s, ChiConvention::Toggling).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn pdd_chi_vanishes_at_zero_frequency() {
        let s = sched(Scheme::Pdd, 6, 5, 3.0);
        for m in 1..6 {
            assert!(chi(m, 0.0, &s, ChiConvention::Toggling).unwrap().norm() < 1e-14);
        }
    }

    #[test]
    fn patterns() {
        use ChiConvention::*;
        assert_eq!(chi_pattern(1, 6, Toggling).unwrap(), (1, 2, 6));
        assert_eq!(chi_pattern(2, 6, Toggling).unwrap(), (2, 1, 3));
        assert_eq!(chi_pattern(2, 6, Literal).unwrap(), (2, 1, 5));
        assert_eq!(chi_pattern(3, 6, Toggling).unwrap(), (5, 4, 6));
        assert_eq!(chi_pattern(5, 6, Literal).unwrap(), (3, 2, 4));
        // both conventions coincide at n = 4
        assert_eq!(
            chi_pattern(2, 4, Literal).unwrap(),
            chi_pattern(2, 4, Toggling).unwrap()
        );
    }

    #[test]
    fn exponent_transition_mapping_is_a_bijection() {
        for n in 2..=9 {
            let mut seen = vec![false; n - 1];
            for m in 1..n {
                let i = transition_for_exponent(m, n).unwrap();
                assert!(!seen[i]);
                seen[i] = true;
                assert_eq!(exponent_for_transition(i, n).unwrap(), m);
                // centre of the pattern sits on segment i+1
                assert_eq!(chi_pattern(m, n, ChiConvention::Toggling).unwrap().0, i + 1);
            }
        }
    }

    #[test]
    fn bank_matches_free_functions() {
        let s = sched(Scheme::Udd, 5, 4, 2.2);
        let bank = FilterBank::new(&s, ChiConvention::Toggling);
        let ev = bank.evaluate(3.3);
        for l in 1..=5 {
            assert!((ev.eta[l - 1] - eta(l, 3.3, &s).unwrap()).norm() < 1e-14);
        }
        for m in 1..5 {
            assert!((ev.chi[m - 1] - chi(m, 3.3, &s, ChiConvention::Toggling).unwrap()).norm() < 1e-13);
        }
    }

    #[test]
    fn convention_parsing() {
        assert_eq!("literal".parse::<ChiConvention>().unwrap(), ChiConvention::Literal);
        assert!("other".parse::<ChiConvention>().is_err());
    }
}
