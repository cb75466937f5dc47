//! Fixtures shared by the benchmarks.

pub use xidd_core::{BathSpec, ChiConvention, FilterBank, KernelOptions, PulseSchedule, ScheduleSpec, Scheme};

/// Upper end of the default curve.
pub const DEFAULT_T: f64 = 3.1118;

pub fn default_bath() -> BathSpec {
    BathSpec::ohmic(0.25, 100.0, 150.0).expect("valid default bath")
}

pub fn default_schedule(scheme: Scheme, t: f64) -> PulseSchedule {
    ScheduleSpec::new(scheme, 6, 50, t)
        .build()
        .expect("valid default schedule")
}
