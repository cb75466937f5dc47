//! Pulse timing for periodic (PDD) and Uhrig (UDD) sequences.
//!
//! A run of `N` cycles on an n-level atom has `n*N` pulse instants. The last
//! one sits at `T`, the other `M = n*N - 1` fall inside `(0, T)` at
//! fractions `delta_1 < ... < delta_M`. With `delta_0 = 0` and
//! `delta_(nN) = 1`, segment `i` of cycle `j` (both 1-based) has length
//! `(delta_m - delta_(m-1)) * T` where `m = (j-1)*n + i`.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{argument, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Pdd,
    Udd,
    Custom,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Pdd => "pdd",
            Scheme::Udd => "udd",
            Scheme::Custom => "custom",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pdd" => Ok(Scheme::Pdd),
            "udd" => Ok(Scheme::Udd),
            "custom" => Ok(Scheme::Custom),
            other => Err(argument("scheme", format!("unknown scheme `{other}`"))),
        }
    }
}

/// `M = n*N - 1`.
pub fn pulse_count(n: usize, cycles: usize) -> Result<usize> {
    if n < 2 {
        return Err(argument("n", format!("atom dimension must be >= 2, got {n}")));
    }
    if cycles < 1 {
        return Err(argument("cycles", "cycle count must be >= 1"));
    }
    Ok(n * cycles - 1)
}

/// `delta_i = i / (M+1)`.
pub fn pdd_fractions(m: usize) -> Result<Vec<f64>> {
    if m < 1 {
        return Err(argument("M", "pulse count must be >= 1"));
    }
    let denom = (m + 1) as f64;
    Ok((1..=m).map(|i| i as f64 / denom).collect())
}

/// `delta_i = sin^2(i pi / (2M+2))`.
pub fn udd_fractions(m: usize) -> Result<Vec<f64>> {
    if m < 1 {
        return Err(argument("M", "pulse count must be >= 1"));
    }
    let denom = (2 * m + 2) as f64;
    Ok((1..=m).map(|i| (i as f64 * PI / denom).sin().powi(2)).collect())
}

/// Checks that `fractions` is a valid interior pulse list of length `expected`.
pub fn validate_fractions(fractions: &[f64], expected: usize) -> Result<()> {
    if fractions.len() != expected {
        return Err(Error::Fractions {
            index: fractions.len().min(expected),
            reason: format!("expected {expected} fractions, got {}", fractions.len()),
        });
    }
    let mut prev = 0.0;
    for (k, &d) in fractions.iter().enumerate() {
        let index = k + 1;
        if !d.is_finite() || d <= 0.0 || d >= 1.0 {
            return Err(Error::Fractions {
                index,
                reason: format!("{d} is not inside (0, 1)"),
            });
        }
        if d <= prev {
            return Err(Error::Fractions {
                index,
                reason: format!("{d} does not exceed previous value {prev}"),
            });
        }
        prev = d;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleSpec {
    pub scheme: Scheme,
    pub n: usize,
    pub cycles: usize,
    pub total_time: f64,
    pub custom_fractions: Option<Vec<f64>>,
}

impl ScheduleSpec {
    pub fn new(scheme: Scheme, n: usize, cycles: usize, total_time: f64) -> Self {
        Self {
            scheme,
            n,
            cycles,
            total_time,
            custom_fractions: None,
        }
    }

    pub fn custom(n: usize, cycles: usize, total_time: f64, fractions: Vec<f64>) -> Self {
        Self {
            scheme: Scheme::Custom,
            n,
            cycles,
            total_time,
            custom_fractions: Some(fractions),
        }
    }

    pub fn with_total_time(&self, total_time: f64) -> Self {
        Self {
            total_time,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = pulse_count(self.n, self.cycles)?;
        if !(self.total_time.is_finite() && self.total_time > 0.0) {
            return Err(argument(
                "total_time",
                format!("must be finite and > 0, got {}", self.total_time),
            ));
        }
        match (self.scheme, &self.custom_fractions) {
            (Scheme::Custom, Some(f)) => validate_fractions(f, m),
            (Scheme::Custom, None) => Err(argument(
                "custom_fractions",
                "custom scheme needs an explicit fraction list",
            )),
            (_, Some(_)) => Err(argument(
                "custom_fractions",
                "fractions are only accepted for the custom scheme",
            )),
            _ => Ok(()),
        }
    }

    pub fn build(&self) -> Result<PulseSchedule> {
        build_schedule(self)
    }
}

/// A realised pulse schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseSchedule {
    spec: ScheduleSpec,
    fractions: Vec<f64>,
    // row-major N x n
    segments: Vec<f64>,
    // start time of every segment, delta_(m-1) * T
    starts: Vec<f64>,
    cycle_lengths: Vec<f64>,
}

pub fn build_schedule(spec: &ScheduleSpec) -> Result<PulseSchedule> {
    spec.validate()?;
    let m = pulse_count(spec.n, spec.cycles)?;
    let fractions = match spec.scheme {
        Scheme::Pdd => pdd_fractions(m)?,
        Scheme::Udd => udd_fractions(m)?,
        Scheme::Custom => spec.custom_fractions.clone().expect("validated"),
    };
    let t = spec.total_time;
    let mut bounds = Vec::with_capacity(m + 2);
    bounds.push(0.0);
    bounds.extend_from_slice(&fractions);
    bounds.push(1.0);

    let segments: Vec<f64> = bounds.windows(2).map(|w| (w[1] - w[0]) * t).collect();
    let starts: Vec<f64> = bounds[..bounds.len() - 1].iter().map(|d| d * t).collect();
    let cycle_lengths = segments.chunks(spec.n).map(|c| c.iter().sum()).collect();
    Ok(PulseSchedule {
        spec: spec.clone(),
        fractions,
        segments,
        starts,
        cycle_lengths,
    })
}

impl PulseSchedule {
    pub fn spec(&self) -> &ScheduleSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn cycles(&self) -> usize {
        self.spec.cycles
    }

    pub fn total_time(&self) -> f64 {
        self.spec.total_time
    }

    pub fn pulse_count(&self) -> usize {
        self.fractions.len()
    }

    /// Interior fractions `delta_1..delta_M`.
    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    /// All segment lengths in time order.
    pub fn segments(&self) -> &[f64] {
        &self.segments
    }

    /// Segment start times in time order.
    pub fn segment_starts(&self) -> &[f64] {
        &self.starts
    }

    /// `Delta t_j(i)` with 1-based `j` (cycle) and `i` (segment).
    pub fn segment(&self, j: usize, i: usize) -> f64 {
        self.segments[self.position(j, i) - 1]
    }

    /// Fraction index `m = (j-1)*n + i`.
    pub fn position(&self, j: usize, i: usize) -> usize {
        assert!((1..=self.spec.cycles).contains(&j), "cycle {j} out of range");
        assert!((1..=self.spec.n).contains(&i), "segment {i} out of range");
        (j - 1) * self.spec.n + i
    }

    /// `T_(c,j)` for `j = 1..=N`.
    pub fn cycle_lengths(&self) -> &[f64] {
        &self.cycle_lengths
    }

    /// One fraction per line with 17 significant digits.
    pub fn fractions_listing(&self) -> String {
        let mut out = String::with_capacity(self.fractions.len() * 24);
        for d in &self.fractions {
            let _ = writeln!(out, "{d:.16e}");
        }
        out
    }
}

/// Parses a fraction listing (one value per line, blank lines and `#`
/// comments ignored).
pub fn parse_fractions(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .map(|(k, line)| (k, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty())
        .map(|(k, line)| {
            line.parse::<f64>().map_err(|e| Error::Fractions {
                index: k + 1,
                reason: format!("line {}: {e}", k + 1),
            })
        })
        .collect()
}
