//! Brute-force Fock-space check of the filter-function decay.
//!
//! The atom and a handful of truncated bosonic modes are evolved together
//! as one dense density matrix. Between pulses the bath is kept in the
//! Schroedinger picture, where each segment's Hamiltonian
//! `sum_k w_k a_k^dag a_k + sum_i sigma_z(i) (j_k a_k^dag + j_k^* a_k)` is
//! time independent and can be exponentiated exactly. The bath frame
//! rotation relating this to the interaction picture acts on the bath
//! alone, so the reduced atom state is the same in both pictures. Pulses
//! are instantaneous unitaries on the atom. Nothing here uses filter
//! functions; [`discrete_gamma`] is the analytic prediction it is compared
//! against.
//!
//! The joint density matrix is stored atom-major: row `a * B + b` for atom
//! level `a` and bath basis state `b`, with mode 0 the slowest bath index.

use ndarray::{s, Array2};
use num_complex::Complex64 as C64;

use crate::bath::thermal_coth;
use crate::error::{argument, Error, Result};
use crate::filter::{exponent_for_transition, ChiConvention, FilterBank};
use crate::linalg::{expm, kron, max_abs, Operator};
use crate::operator::{sigma_z, BBGroup};
use crate::schedule::{PulseSchedule, ScheduleSpec, Scheme};

/// Largest joint Hilbert-space dimension the oracle will build.
pub const MAX_JOINT_DIM: usize = 2000;
/// Largest Boltzmann weight allowed beyond the Fock truncation.
pub const TAIL_LIMIT: f64 = 1e-10;
/// Allowed change of a segment propagator when its step is halved.
pub const SUBSTEP_LIMIT: f64 = 1e-10;

/// One bosonic mode coupled to transition `transition` (`|i> <-> |i+1>`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeSpec {
    pub transition: usize,
    pub omega: f64,
    pub coupling: C64,
    pub fock_dim: usize,
}

impl ModeSpec {
    pub fn new(transition: usize, omega: f64, coupling: f64, fock_dim: usize) -> Self {
        Self {
            transition,
            omega,
            coupling: C64::new(coupling, 0.0),
            fock_dim,
        }
    }

    pub fn with_fock_dim(self, fock_dim: usize) -> Self {
        Self { fock_dim, ..self }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(argument(
                "omega",
                format!("mode frequency must be > 0, got {}", self.omega),
            ));
        }
        if self.fock_dim < 2 {
            return Err(argument("fock_dim", format!("must be >= 2, got {}", self.fock_dim)));
        }
        if self.transition + 2 > n {
            return Err(Error::LevelIndex { n, k: self.transition });
        }
        Ok(())
    }
}

/// Smallest truncation whose Boltzmann tail `e^{-w d / T'}` is below `tail`.
pub fn required_fock_dim(omega: f64, temperature: f64, tail: f64) -> usize {
    let d = (1.0 / tail).ln() * temperature / omega;
    (d.floor() as usize + 1).max(2)
}

/// Diagonal Boltzmann state `~ e^{-w n / T'}` on the truncated space.
pub fn thermal_state(mode: &ModeSpec, temperature: f64) -> Result<Array2<C64>> {
    if !(mode.omega.is_finite() && mode.omega > 0.0) {
        return Err(argument(
            "omega",
            format!("mode frequency must be > 0, got {}", mode.omega),
        ));
    }
    if !(temperature.is_finite() && temperature >= 0.0) {
        return Err(argument("temperature", format!("must be >= 0, got {temperature}")));
    }
    let d = mode.fock_dim;
    let ratio = if temperature == 0.0 {
        0.0
    } else {
        (-mode.omega / temperature).exp()
    };
    let tail = ratio.powi(d as i32);
    if tail >= TAIL_LIMIT {
        return Err(Error::Truncation {
            omega: mode.omega,
            tail,
            limit: TAIL_LIMIT,
            suggested: required_fock_dim(mode.omega, temperature, TAIL_LIMIT),
        });
    }
    let weights: Vec<f64> = (0..d).map(|k| ratio.powi(k as i32)).collect();
    let norm: f64 = weights.iter().sum();
    let mut rho = Array2::zeros((d, d));
    for (k, w) in weights.iter().enumerate() {
        rho[[k, k]] = C64::new(w / norm, 0.0);
    }
    Ok(rho)
}

/// Density matrix of atom plus modes.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    atom_dim: usize,
    bath_dim: usize,
    rho: Array2<C64>,
}

impl JointState {
    pub fn product(atom: &Operator, bath: &Array2<C64>) -> Self {
        Self {
            atom_dim: atom.dim(),
            bath_dim: bath.nrows(),
            rho: kron(atom.as_array(), bath),
        }
    }

    pub fn atom_dim(&self) -> usize {
        self.atom_dim
    }

    pub fn bath_dim(&self) -> usize {
        self.bath_dim
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.rho
    }

    pub fn trace(&self) -> C64 {
        self.rho.diag().sum()
    }

    /// `max |rho - rho^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.rho.t().mapv(|z| z.conj());
        max_abs(&(&self.rho - &adj))
    }

    /// Positive semidefinite up to `tol`: `rho + tol I` admits a Cholesky
    /// factorisation.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        let d = self.rho.nrows();
        let mut l: Array2<C64> = Array2::zeros((d, d));
        for j in 0..d {
            let mut diag = self.rho[[j, j]].re + tol;
            for k in 0..j {
                diag -= l[[j, k]].norm_sqr();
            }
            if diag <= 0.0 {
                return false;
            }
            let ljj = diag.sqrt();
            l[[j, j]] = C64::new(ljj, 0.0);
            for i in j + 1..d {
                let mut acc = self.rho[[i, j]];
                for k in 0..j {
                    acc -= l[[i, k]] * l[[j, k]].conj();
                }
                l[[i, j]] = acc / ljj;
            }
        }
        true
    }

    /// Partial trace over the bath.
    pub fn reduced_atom(&self) -> Operator {
        let (n, b) = (self.atom_dim, self.bath_dim);
        let mut out = Operator::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let block = self.rho.slice(s![r * b..(r + 1) * b, c * b..(c + 1) * b]);
                out.set(r, c, block.diag().sum());
            }
        }
        out
    }

    /// Reduced element `rho_S^{ab}`.
    pub fn atom_element(&self, a: usize, b: usize) -> C64 {
        let bd = self.bath_dim;
        self.rho
            .slice(s![a * bd..(a + 1) * bd, b * bd..(b + 1) * bd])
            .diag()
            .sum()
    }

    /// `rho -> diag(U_a) rho diag(U_b)^dagger` for a block-diagonal unitary.
    fn apply_block_diagonal(&mut self, blocks: &[Array2<C64>]) {
        let b = self.bath_dim;
        let adjoints: Vec<Array2<C64>> = blocks.iter().map(|u| u.t().mapv(|z| z.conj())).collect();
        for (r, left) in blocks.iter().enumerate() {
            for (c, right) in adjoints.iter().enumerate() {
                let range = s![r * b..(r + 1) * b, c * b..(c + 1) * b];
                let updated = left.dot(&self.rho.slice(range)).dot(right);
                self.rho.slice_mut(range).assign(&updated);
            }
        }
    }

    /// `rho -> (P x I) rho (P x I)^dagger` for an atom unitary `P`.
    fn apply_atom_unitary(&mut self, pulse: &Operator) {
        let (n, b) = (self.atom_dim, self.bath_dim);
        let zero = C64::new(0.0, 0.0);
        let mut left: Array2<C64> = Array2::zeros(self.rho.dim());
        for r in 0..n {
            for k in 0..n {
                let p = pulse.get(r, k);
                if p == zero {
                    continue;
                }
                let src = self.rho.slice(s![k * b..(k + 1) * b, ..]).mapv(|z| z * p);
                let mut dst = left.slice_mut(s![r * b..(r + 1) * b, ..]);
                dst += &src;
            }
        }
        let mut out: Array2<C64> = Array2::zeros(self.rho.dim());
        for c in 0..n {
            for k in 0..n {
                let p = pulse.get(c, k).conj();
                if p == zero {
                    continue;
                }
                let src = left.slice(s![.., k * b..(k + 1) * b]).mapv(|z| z * p);
                let mut dst = out.slice_mut(s![.., c * b..(c + 1) * b]);
                dst += &src;
            }
        }
        self.rho = out;
    }
}

fn mode_hamiltonian(mode: &ModeSpec, sign: f64) -> Array2<C64> {
    let d = mode.fock_dim;
    let mut h = Array2::zeros((d, d));
    for k in 0..d {
        h[[k, k]] = C64::new(mode.omega * k as f64, 0.0);
    }
    // a^dag |k> = sqrt(k+1) |k+1>
    for k in 0..d - 1 {
        let amp = ((k + 1) as f64).sqrt() * sign;
        h[[k + 1, k]] += mode.coupling * amp;
        h[[k, k + 1]] += mode.coupling.conj() * amp;
    }
    h
}

/// Bath propagators `U_a(dt)` for every atom level `a`.
fn segment_propagators(modes: &[ModeSpec], couplings: &[Vec<f64>], dt: f64) -> Result<Vec<Array2<C64>>> {
    let minus_i = C64::new(0.0, -1.0);
    couplings
        .iter()
        .map(|signs| {
            let mut u: Array2<C64> = Array2::eye(1);
            for (mode, &sign) in modes.iter().zip(signs) {
                let h = mode_hamiltonian(mode, sign);
                let full = expm(&(&h * (minus_i * dt)))?;
                let half = expm(&(&h * (minus_i * (0.5 * dt))))?;
                let deviation = max_abs(&(&full - &half.dot(&half)));
                if deviation > SUBSTEP_LIMIT {
                    return Err(Error::SubstepConvergence {
                        deviation,
                        limit: SUBSTEP_LIMIT,
                    });
                }
                u = kron(&u, &full);
            }
            Ok(u)
        })
        .collect()
}

fn validate_modes(n: usize, modes: &[ModeSpec]) -> Result<usize> {
    if modes.is_empty() {
        return Err(argument("modes", "at least one bath mode is required"));
    }
    for m in modes {
        m.validate(n)?;
    }
    let bath_dim: usize = modes.iter().map(|m| m.fock_dim).product();
    if n * bath_dim > MAX_JOINT_DIM {
        return Err(Error::Dimension(format!(
            "joint dimension {} exceeds the oracle cap {MAX_JOINT_DIM}",
            n * bath_dim
        )));
    }
    Ok(bath_dim)
}

/// Evolves `initial_atom (x) thermal bath` through the pulsed schedule and
/// returns the joint state at `T`.
pub fn evolve_pulsed(
    n: usize,
    modes: &[ModeSpec],
    temperature: f64,
    schedule: &PulseSchedule,
    group: &BBGroup,
    initial_atom: &Operator,
) -> Result<JointState> {
    validate_modes(n, modes)?;
    if schedule.n() != n || group.dim() != n || initial_atom.dim() != n {
        return Err(Error::Dimension(format!(
            "atom dimension mismatch: n={n}, schedule {}, group {}, state {}",
            schedule.n(),
            group.dim(),
            initial_atom.dim()
        )));
    }
    if initial_atom.get(0, 1).norm() == 0.0 {
        return Err(argument("initial_atom", "rho^01 must be nonzero"));
    }

    let mut bath: Array2<C64> = Array2::eye(1);
    for m in modes {
        bath = kron(&bath, &thermal_state(m, temperature)?);
    }
    let mut state = JointState::product(initial_atom, &bath);

    // couplings[a][k]: diagonal entry of sigma_z(transition_k) on level a
    let sz: Vec<Operator> = (0..n - 1).map(|i| sigma_z(n, i)).collect::<Result<_>>()?;
    let couplings: Vec<Vec<f64>> = (0..n)
        .map(|a| modes.iter().map(|m| sz[m.transition].get(a, a).re).collect())
        .collect();

    let pulses: Vec<Operator> = (1..=n).map(|l| group.pulse_after_segment(l)).collect();
    for (k, &dt) in schedule.segments().iter().enumerate() {
        let props = segment_propagators(modes, &couplings, dt)?;
        state.apply_block_diagonal(&props);
        state.apply_atom_unitary(&pulses[k % n]);
    }
    Ok(state)
}

/// `sum over modes of 1/2 |j|^2 coth(w/2T') |chi_m(w)|^2`, where `m` is the
/// exponent fed by the mode's transition.
pub fn discrete_gamma(
    modes: &[ModeSpec],
    temperature: f64,
    schedule: &PulseSchedule,
    convention: ChiConvention,
) -> Result<f64> {
    let n = schedule.n();
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(argument("temperature", format!("must be > 0, got {temperature}")));
    }
    let bank = FilterBank::new(schedule, convention);
    let mut total = 0.0;
    for mode in modes {
        mode.validate(n)?;
        let m = exponent_for_transition(mode.transition, n)?;
        let chi = bank.evaluate(mode.omega).chi[m - 1];
        total += 0.5 * mode.coupling.norm_sqr() * chi.norm_sqr() * thermal_coth(mode.omega, temperature);
    }
    Ok(total)
}

fn plus_state(n: usize) -> Operator {
    let mut rho = Operator::zeros(n);
    for a in 0..2 {
        for b in 0..2 {
            rho.set(a, b, C64::new(0.5, 0.0));
        }
    }
    rho
}

/// Unpulsed decay exponent `-ln(|rho^01(T)| / |rho^01(0)|)` over `[0, T]`.
pub fn free_decay_baseline(total_time: f64, modes: &[ModeSpec], temperature: f64, n: usize) -> Result<f64> {
    if total_time == 0.0 {
        validate_modes(n, modes)?;
        return Ok(0.0);
    }
    let schedule = ScheduleSpec::new(Scheme::Pdd, n, 1, total_time).build()?;
    let group = BBGroup::identity(n)?;
    let initial = plus_state(n);
    let state = evolve_pulsed(n, modes, temperature, &schedule, &group, &initial)?;
    Ok(-(state.atom_element(0, 1).norm() / initial.get(0, 1).norm()).ln())
}

/// One oracle-vs-formula comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationCase {
    pub name: &'static str,
    pub scheme: Scheme,
    pub n: usize,
    pub cycles: usize,
    pub total_time: f64,
    pub temperature: f64,
    pub modes: Vec<ModeSpec>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationOutcome {
    pub name: &'static str,
    /// `-ln |rho^01(T) / rho^01(0)|` from the Fock evolution.
    pub observed_exponent: f64,
    /// `discrete_gamma` under the chosen convention.
    pub predicted_exponent: f64,
    /// `|P_observed / P_predicted - 1|`.
    pub relative_deviation: f64,
    /// Phase of `rho^01(T) / rho^01(0)`.
    pub phase: f64,
    pub passed: bool,
}

/// Relative tolerance of the oracle comparison.
pub const ORACLE_TOL: f64 = 1e-6;

impl CalibrationCase {
    pub fn schedule(&self) -> Result<PulseSchedule> {
        ScheduleSpec::new(self.scheme, self.n, self.cycles, self.total_time).build()
    }

    pub fn with_fock_dims(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut case = self.clone();
        for m in &mut case.modes {
            m.fock_dim = f(m.fock_dim);
        }
        case
    }

    /// The same case restricted to mode `k`.
    pub fn single_mode(&self, k: usize) -> Self {
        Self {
            modes: vec![self.modes[k]],
            ..self.clone()
        }
    }

    /// Change of `rho^01(T) / rho^01(0)` when every `fock_dim` is doubled.
    ///
    /// When the doubled joint space exceeds [`MAX_JOINT_DIM`] each mode is
    /// doubled in a single-mode run instead and the changes are summed; the
    /// modes enter the coherence as independent factors of modulus <= 1, so
    /// the sum bounds the joint change.
    pub fn fock_doubling_deviation(&self) -> Result<f64> {
        let doubled = self.with_fock_dims(|d| 2 * d);
        let joint: usize = self.n * doubled.modes.iter().map(|m| m.fock_dim).product::<usize>();
        if joint <= MAX_JOINT_DIM {
            return Ok((doubled.evolve()? - self.evolve()?).norm());
        }
        (0..self.modes.len())
            .map(|k| {
                let single = self.single_mode(k);
                Ok((single.with_fock_dims(|d| 2 * d).evolve()? - single.evolve()?).norm())
            })
            .sum()
    }

    /// Coherence ratio `rho^01(T) / rho^01(0)` from the Fock evolution.
    pub fn evolve(&self) -> Result<C64> {
        let schedule = self.schedule()?;
        let group = BBGroup::build(self.n)?;
        let initial = plus_state(self.n);
        let state = evolve_pulsed(self.n, &self.modes, self.temperature, &schedule, &group, &initial)?;
        Ok(state.atom_element(0, 1) / initial.get(0, 1))
    }

    pub fn run(&self, convention: ChiConvention) -> Result<CalibrationOutcome> {
        let ratio = self.evolve()?;
        let predicted = discrete_gamma(&self.modes, self.temperature, &self.schedule()?, convention)?;
        let observed = -ratio.norm().ln();
        let relative_deviation = (ratio.norm() / (-predicted).exp() - 1.0).abs();
        Ok(CalibrationOutcome {
            name: self.name,
            observed_exponent: observed,
            predicted_exponent: predicted,
            relative_deviation,
            phase: ratio.arg(),
            passed: relative_deviation <= ORACLE_TOL,
        })
    }
}

/// Weak-coupling cases over n in {2, 3}, N in {1, 2}, one or two modes per
/// transition, plus an uncoupled control. Every case satisfies
/// `|j| T <= 0.5` and keeps the joint space under [`MAX_JOINT_DIM`].
pub fn calibration_suite() -> Vec<CalibrationCase> {
    vec![
        CalibrationCase {
            name: "n2-N1-pdd-one-mode",
            scheme: Scheme::Pdd,
            n: 2,
            cycles: 1,
            total_time: 2.0,
            temperature: 1.0,
            modes: vec![ModeSpec::new(0, 1.0, 0.1, 25)],
        },
        CalibrationCase {
            name: "n2-N2-udd-two-modes",
            scheme: Scheme::Udd,
            n: 2,
            cycles: 2,
            total_time: 3.0,
            temperature: 0.5,
            modes: vec![ModeSpec::new(0, 0.8, 0.12, 16), ModeSpec::new(0, 2.3, 0.08, 10)],
        },
        CalibrationCase {
            name: "n3-N1-udd-one-mode-each",
            scheme: Scheme::Udd,
            n: 3,
            cycles: 1,
            total_time: 2.5,
            temperature: 0.6,
            modes: vec![ModeSpec::new(0, 1.1, 0.1, 16), ModeSpec::new(1, 0.9, 0.15, 18)],
        },
        CalibrationCase {
            name: "n3-N2-pdd-transition1",
            scheme: Scheme::Pdd,
            n: 3,
            cycles: 2,
            total_time: 2.0,
            temperature: 0.5,
            modes: vec![ModeSpec::new(1, 1.3, 0.2, 12), ModeSpec::new(1, 0.6, 0.1, 22)],
        },
        CalibrationCase {
            name: "n3-N2-udd-mixed",
            scheme: Scheme::Udd,
            n: 3,
            cycles: 2,
            total_time: 3.0,
            temperature: 0.4,
            modes: vec![
                ModeSpec::new(0, 1.4, 0.1, 7),
                ModeSpec::new(0, 2.0, 0.06, 6),
                ModeSpec::new(1, 1.0, 0.1, 10),
            ],
        },
        CalibrationCase {
            name: "n3-N2-uncoupled",
            scheme: Scheme::Udd,
            n: 3,
            cycles: 2,
            total_time: 1.5,
            temperature: 0.5,
            modes: vec![ModeSpec::new(0, 1.0, 0.0, 12), ModeSpec::new(1, 1.5, 0.0, 8)],
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_state_examples() {
        let cold = thermal_state(&ModeSpec::new(0, 1.0, 0.1, 4), 0.0).unwrap();
        assert_eq!(cold[[0, 0]], C64::new(1.0, 0.0));
        assert_eq!(cold[[1, 1]], C64::new(0.0, 0.0));

        let mode = ModeSpec::new(0, 2f64.ln(), 0.1, 40);
        let rho = thermal_state(&mode, 1.0).unwrap();
        let norm = 1.0 - 0.5f64.powi(40);
        for k in 0..5 {
            let want = 0.5f64.powi(k as i32 + 1) / norm;
            assert!((rho[[k, k]].re - want).abs() < 1e-15);
        }
        assert!((rho.diag().sum().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn truncation_error_suggests_dimension() {
        let d = required_fock_dim(100.0, 150.0, TAIL_LIMIT);
        // smallest d with e^{-100 d / 150} < 1e-10
        assert_eq!(d, 35);
        assert!((-100.0f64 * 35.0 / 150.0).exp() < 1e-10);
        assert!((-100.0f64 * 34.0 / 150.0).exp() >= 1e-10);
        let err = thermal_state(&ModeSpec::new(0, 100.0, 0.1, 20), 150.0).unwrap_err();
        assert!(matches!(err, Error::Truncation { suggested: 35, .. }));
        assert!(thermal_state(&ModeSpec::new(0, 100.0, 0.1, 35), 150.0).is_ok());
    }

    #[test]
    fn mode_validation() {
        assert!(ModeSpec::new(2, 1.0, 0.1, 5).validate(3).is_err());
        assert!(ModeSpec::new(0, 0.0, 0.1, 5).validate(3).is_err());
        assert!(ModeSpec::new(0, 1.0, 0.1, 1).validate(3).is_err());
        let schedule = ScheduleSpec::new(Scheme::Pdd, 3, 1, 1.0).build().unwrap();
        let group = BBGroup::build(3).unwrap();
        let big = vec![ModeSpec::new(0, 1.0, 0.1, 30); 2];
        assert!(matches!(
            evolve_pulsed(3, &big, 1.0, &schedule, &group, &plus_state(3)),
            Err(Error::Dimension(_))
        ));
        assert!(evolve_pulsed(3, &[], 1.0, &schedule, &group, &plus_state(3)).is_err());
    }

    #[test]
    fn uncoupled_evolution_preserves_coherence() {
        let schedule = ScheduleSpec::new(Scheme::Udd, 3, 2, 1.7).build().unwrap();
        let group = BBGroup::build(3).unwrap();
        let modes = [ModeSpec::new(1, 1.0, 0.0, 12)];
        let state = evolve_pulsed(3, &modes, 0.5, &schedule, &group, &plus_state(3)).unwrap();
        assert!((state.atom_element(0, 1).norm() - 0.5).abs() < 1e-13);
    }

    #[test]
    fn short_schedule_does_not_decay() {
        let schedule = ScheduleSpec::new(Scheme::Pdd, 2, 1, 1e-7).build().unwrap();
        let group = BBGroup::build(2).unwrap();
        let modes = [ModeSpec::new(0, 1.0, 0.1, 25)];
        let state = evolve_pulsed(2, &modes, 1.0, &schedule, &group, &plus_state(2)).unwrap();
        assert!((state.atom_element(0, 1).norm() / 0.5 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn evolution_preserves_state_invariants() {
        let case = &calibration_suite()[2];
        let schedule = case.schedule().unwrap();
        let group = BBGroup::build(3).unwrap();
        let state = evolve_pulsed(3, &case.modes, case.temperature, &schedule, &group, &plus_state(3)).unwrap();
        assert!((state.trace() - C64::new(1.0, 0.0)).norm() < 1e-10);
        assert!(state.hermiticity_defect() < 1e-12);
        assert!(state.is_positive_semidefinite(1e-10));
        let reduced = state.reduced_atom();
        assert!((reduced.trace() - C64::new(1.0, 0.0)).norm() < 1e-10);
        assert_eq!(reduced.get(0, 1), state.atom_element(0, 1));
    }

    #[test]
    fn discrete_gamma_scaling_and_zero() {
        let schedule = ScheduleSpec::new(Scheme::Pdd, 2, 1, 2.0).build().unwrap();
        let zero = [ModeSpec::new(0, 1.0, 0.0, 25)];
        assert_eq!(
            discrete_gamma(&zero, 1.0, &schedule, ChiConvention::Toggling).unwrap(),
            0.0
        );
        let one = [ModeSpec::new(0, 1.0, 0.1, 25)];
        let two = [ModeSpec::new(0, 1.0, 0.2, 25)];
        let g1 = discrete_gamma(&one, 1.0, &schedule, ChiConvention::Toggling).unwrap();
        let g2 = discrete_gamma(&two, 1.0, &schedule, ChiConvention::Toggling).unwrap();
        assert!((g2 / g1 - 4.0).abs() < 1e-14);
    }

    #[test]
    fn free_decay_limits() {
        let zero = [ModeSpec::new(0, 1.0, 0.0, 25)];
        assert!(free_decay_baseline(2.0, &zero, 1.0, 2).unwrap().abs() < 1e-14);
        let one = [ModeSpec::new(0, 1.0, 0.1, 25)];
        assert_eq!(free_decay_baseline(0.0, &one, 1.0, 2).unwrap(), 0.0);
    }

    #[test]
    fn two_level_calibration_case_matches_formula() {
        let out = calibration_suite()[0].run(ChiConvention::Toggling).unwrap();
        assert!(out.passed, "{out:?}");
        assert!(out.observed_exponent > 0.0);
    }
}
