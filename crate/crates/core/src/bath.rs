//! Ohmic bosonic bath in natural units (hbar = k_B = 1).

use crate::error::{argument, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathSpec {
    /// Dimensionless coupling strength.
    pub alpha: f64,
    /// Spectral exponent. Only `r = 1` is supported.
    pub r: f64,
    /// Cutoff frequency; also the upper limit of the frequency integral.
    pub cutoff: f64,
    /// Temperature in frequency units.
    pub temperature: f64,
}

impl BathSpec {
    pub fn ohmic(alpha: f64, cutoff: f64, temperature: f64) -> Result<Self> {
        let bath = Self {
            alpha,
            r: 1.0,
            cutoff,
            temperature,
        };
        bath.validate()?;
        Ok(bath)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(argument(
                "alpha",
                format!("must be finite and >= 0, got {}", self.alpha),
            ));
        }
        if self.r != 1.0 {
            return Err(argument(
                "r",
                format!("only the Ohmic exponent r = 1 is supported, got {}", self.r),
            ));
        }
        if !(self.cutoff.is_finite() && self.cutoff > 0.0) {
            return Err(argument(
                "cutoff",
                format!("must be finite and > 0, got {}", self.cutoff),
            ));
        }
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(argument(
                "temperature",
                format!("must be finite and > 0, got {}", self.temperature),
            ));
        }
        Ok(())
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }

    /// `I(w) = (alpha/4) w e^{-w/w_c}`.
    pub fn density(&self, omega: f64) -> f64 {
        ohmic_density(omega, self)
    }

    /// `I(w) coth(w / 2T') / alpha`, with the `w = 0` limit `T'/2`.
    ///
    /// Kept free of `alpha` so exponents scale with it exactly.
    pub(crate) fn unit_thermal_weight(&self, omega: f64) -> f64 {
        if omega == 0.0 {
            return 0.5 * self.temperature;
        }
        0.25 * omega * (-omega / self.cutoff).exp() / (omega / (2.0 * self.temperature)).tanh()
    }

    /// `I(w) coth(w / 2T')`.
    pub fn thermal_weight(&self, omega: f64) -> f64 {
        self.alpha * self.unit_thermal_weight(omega)
    }
}

pub fn ohmic_density(omega: f64, bath: &BathSpec) -> f64 {
    0.25 * bath.alpha * omega * (-omega / bath.cutoff).exp()
}

/// `coth(w / 2T')` for a single discrete mode.
pub fn thermal_coth(omega: f64, temperature: f64) -> f64 {
    1.0 / (omega / (2.0 * temperature)).tanh()
}
