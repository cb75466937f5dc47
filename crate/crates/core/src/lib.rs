//! Bang-bang dynamical decoupling of ladder-type (Xi) n-level atoms under
//! pure dephasing.
//!
//! * [`operator`]: transition operators, the decoupling group and its
//!   group-average check.
//! * [`schedule`]: periodic and Uhrig pulse timings and their per-cycle
//!   segment decomposition.
//! * [`filter`], [`bath`], [`decay`]: filter functions, the Ohmic bath and
//!   the coherence ratio `P(T)`.
//! * [`oracle`]: a dense Fock-space evolution used to validate the decay
//!   formula on small systems.

pub mod bath;
pub mod decay;
pub mod error;
pub mod filter;
pub mod linalg;
pub mod operator;
pub mod oracle;
pub mod quadrature;
pub mod schedule;

pub use bath::{ohmic_density, BathSpec};
pub use decay::{
    coherence_at, coherence_ratio, gamma_exponents, sweep_curve, CoherenceCurve, DecayExponents, KernelOptions,
    PointError,
};
pub use error::{Error, Result};
pub use filter::{chi, eta, xi_kernel, ChiConvention, FilterBank, FilterEvaluation};
pub use linalg::Operator;
pub use operator::{
    build_bb_group, exp_pi_half_x, group_average, sigma_x, sigma_z, verify_decoupling, BBGroup, DecouplingReport,
};
pub use oracle::{
    calibration_suite, discrete_gamma, evolve_pulsed, free_decay_baseline, thermal_state, CalibrationCase,
    CalibrationOutcome, JointState, ModeSpec,
};
pub use quadrature::QuadratureOptions;
pub use schedule::{build_schedule, pdd_fractions, pulse_count, udd_fractions, PulseSchedule, ScheduleSpec, Scheme};

pub use num_complex::Complex64 as C64;
