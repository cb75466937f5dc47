//! Coherence curves and their CSV form.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;
use xidd_core::schedule::parse_fractions;
use xidd_core::{coherence_at, KernelOptions, ScheduleSpec, Scheme};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

/// One column per scheme, rows in grid order.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveTable {
    pub times: Vec<f64>,
    pub schemes: Vec<Scheme>,
    /// `values[k][s]` is `P` at `times[k]` for `schemes[s]`.
    pub values: Vec<Vec<f64>>,
}

impl CurveTable {
    pub fn header(&self) -> String {
        let mut h = String::from("T");
        for s in &self.schemes {
            write!(h, ",P_{}", s.name()).unwrap();
        }
        h
    }

    pub fn column(&self, scheme: Scheme) -> Option<Vec<f64>> {
        let idx = self.schemes.iter().position(|&s| s == scheme)?;
        Some(self.values.iter().map(|row| row[idx]).collect())
    }

    /// Header plus one line per time; 17 significant digits, `\n` endings.
    pub fn to_csv(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for (t, row) in self.times.iter().zip(&self.values) {
            write!(out, "{}", format_value(*t)).unwrap();
            for v in row {
                write!(out, ",{}", format_value(*v)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Scientific notation with 17 significant digits, enough to round-trip binary64.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Parses a table written by [`CurveTable::to_csv`].
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::validation("csv", "missing header"))?
        .split(',')
        .map(str::to_string)
        .collect::<Vec<_>>();
    let rows = lines
        .enumerate()
        .map(|(i, line)| {
            line.split(',')
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| CliError::validation("csv", format!("row {}: {e}", i + 1)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((header, rows))
}

fn templates(config: &RunConfig) -> Result<Vec<ScheduleSpec>> {
    config
        .scheme
        .schemes()
        .into_iter()
        .map(|scheme| {
            let spec = if scheme == Scheme::Custom {
                let path = config.custom_fractions_path.as_ref().expect("validated");
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                ScheduleSpec::custom(config.n, config.cycles, config.t_max, parse_fractions(&text)?)
            } else {
                ScheduleSpec::new(scheme, config.n, config.cycles, config.t_max)
            };
            spec.validate()?;
            Ok(spec)
        })
        .collect()
}

/// Evaluates every `(T, scheme)` cell. With `threads != 1` the cells are
/// spread over a rayon pool; each cell is computed independently, so the
/// numbers do not depend on the thread count.
pub fn compute_curve(config: &RunConfig) -> Result<CurveTable> {
    config.validate()?;
    let bath = config.bath()?;
    let opts = KernelOptions {
        quadrature: config.quadrature(),
        ..Default::default()
    };
    let specs = templates(config)?;
    let times = config.time_grid();
    let cells: Vec<(usize, usize)> = (0..times.len())
        .flat_map(|k| (0..specs.len()).map(move |s| (k, s)))
        .collect();
    let eval = |&(k, s): &(usize, usize)| coherence_at(&specs[s], times[k], &bath, &opts);

    let results: Vec<_> = if config.threads == 1 {
        cells.iter().map(eval).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| CliError::validation("threads", e.to_string()))?;
        pool.install(|| cells.par_iter().map(eval).collect())
    };

    let mut failures = String::new();
    let mut values = vec![vec![f64::NAN; specs.len()]; times.len()];
    for (&(k, s), r) in cells.iter().zip(results) {
        match r {
            Ok(p) => values[k][s] = p,
            Err(e) => writeln!(failures, "  T = {} ({}): {e}", format_value(times[k]), specs[s].scheme).unwrap(),
        }
    }
    if !failures.is_empty() {
        return Err(CliError::Convergence(format!(
            "curve evaluation failed:\n{}",
            failures.trim_end()
        )));
    }
    Ok(CurveTable {
        times,
        schemes: specs.iter().map(|s| s.scheme).collect(),
        values,
    })
}

/// Writes `contents` through a temporary file in the destination directory,
/// so a failed write never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| CliError::io(path, e))?;
    tmp.flush().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SchemeChoice;

    fn small() -> RunConfig {
        RunConfig {
            n: 3,
            cycles: 2,
            t_max: 1.0,
            t_points: 4,
            threads: 1,
            ..RunConfig::default()
        }
    }

    #[test]
    fn header_and_round_trip() {
        let table = compute_curve(&small()).unwrap();
        assert_eq!(table.header(), "T,P_pdd,P_udd");
        let csv = table.to_csv();
        assert!(csv.ends_with('\n') && !csv.contains(",\n"));
        let (header, rows) = parse_csv(&csv).unwrap();
        assert_eq!(header, vec!["T", "P_pdd", "P_udd"]);
        for (row, (t, vals)) in rows.iter().zip(table.times.iter().zip(&table.values)) {
            assert_eq!(row[0].to_bits(), t.to_bits());
            assert_eq!(row[1].to_bits(), vals[0].to_bits());
            assert_eq!(row[2].to_bits(), vals[1].to_bits());
        }
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_value(0.1), "1.0000000000000001e-1");
        assert_eq!(format_value(1.0), "1.0000000000000000e0");
        assert_eq!(format_value(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn zero_coupling_is_flat() {
        let c = RunConfig { alpha: 0.0, ..small() };
        let table = compute_curve(&c).unwrap();
        assert!(table.values.iter().flatten().all(|&p| p == 1.0));
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let a = compute_curve(&small()).unwrap();
        let b = compute_curve(&RunConfig { threads: 3, ..small() }).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn single_scheme_column() {
        let c = RunConfig {
            scheme: SchemeChoice::Udd,
            t_points: 1,
            ..small()
        };
        let table = compute_curve(&c).unwrap();
        assert_eq!(table.header(), "T,P_udd");
        assert_eq!(table.values.len(), 1);
        assert!(table.column(Scheme::Pdd).is_none());
    }
}
