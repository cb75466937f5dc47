//! Subcommand bodies. Each writes its report to `out` and returns the exit
//! status; errors carry their own status via [`CliError::exit_code`].

use std::io::Write;
use std::path::Path;

use xidd_core::operator::ALGEBRA_TOL;
use xidd_core::oracle::ORACLE_TOL;
use xidd_core::{calibration_suite, verify_decoupling, ChiConvention, ScheduleSpec, Scheme};

use crate::config::RunConfig;
use crate::curve::{compute_curve, write_atomic, CurveTable};
use crate::error::{exit, CliError, Result};

fn io_out(e: std::io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

/// Residual table for the group-averaged `sigma_z` of every transition.
pub fn verify_group(n: usize, out: &mut dyn Write) -> Result<u8> {
    let report = verify_decoupling(n)?;
    writeln!(out, "transition  max|avg sigma_z|").map_err(io_out)?;
    for (i, r) in report.residuals.iter().enumerate() {
        writeln!(out, "{:>10}  {r:.3e}", format!("{}-{}", i, i + 1)).map_err(io_out)?;
    }
    let status = if report.passed() { "PASS" } else { "FAIL" };
    writeln!(
        out,
        "{status}: worst {:.3e} (tolerance {:.0e})",
        report.worst(),
        ALGEBRA_TOL
    )
    .map_err(io_out)?;
    Ok(if report.passed() { exit::OK } else { exit::CHECK_FAILED })
}

/// Pulse fractions, one per line, after a comment header. The body can be
/// fed back as a custom fraction file.
pub fn schedule(
    scheme: Scheme,
    n: usize,
    cycles: usize,
    total_time: f64,
    dest: Option<&Path>,
    out: &mut dyn Write,
) -> Result<u8> {
    if scheme == Scheme::Custom {
        return Err(CliError::validation(
            "scheme",
            "schedule listing supports pdd and udd only",
        ));
    }
    let s = ScheduleSpec::new(scheme, n, cycles, total_time).build()?;
    let text = format!(
        "# scheme={scheme} n={n} cycles={cycles} total_time={total_time:e} pulses={}\n{}",
        s.pulse_count(),
        s.fractions_listing()
    );
    match dest {
        Some(path) => {
            write_atomic(path, &text)?;
            writeln!(out, "wrote {} pulse fractions to {}", s.pulse_count(), path.display()).map_err(io_out)?;
        }
        None => out.write_all(text.as_bytes()).map_err(io_out)?,
    }
    Ok(exit::OK)
}

/// Computes the curve and writes it to `config.output_path`.
pub fn curve(config: &RunConfig, out: &mut dyn Write) -> Result<(u8, CurveTable)> {
    let table = compute_curve(config)?;
    write_atomic(&config.output_path, &table.to_csv())?;
    writeln!(
        out,
        "wrote {} rows ({}) to {}",
        table.times.len(),
        table.header(),
        config.output_path.display()
    )
    .map_err(io_out)?;
    Ok((exit::OK, table))
}

/// Runs the Fock-space calibration suite against the closed-form exponent.
pub fn oracle_check(convention: ChiConvention, out: &mut dyn Write) -> Result<u8> {
    writeln!(out, "chi convention: {convention}").map_err(io_out)?;
    writeln!(
        out,
        "{:<28} {:>20} {:>20} {:>10} {:>9}  status",
        "case", "observed exponent", "predicted exponent", "rel dev", "phase"
    )
    .map_err(io_out)?;
    let mut worst: Option<(f64, &'static str)> = None;
    let mut failed = 0;
    for case in calibration_suite() {
        let o = case.run(convention)?;
        writeln!(
            out,
            "{:<28} {:>20.12e} {:>20.12e} {:>10.2e} {:>+9.5}  {}",
            o.name,
            o.observed_exponent,
            o.predicted_exponent,
            o.relative_deviation,
            o.phase,
            if o.passed { "ok" } else { "FAIL" }
        )
        .map_err(io_out)?;
        if !o.passed {
            failed += 1;
        }
        if worst.is_none_or(|(d, _)| o.relative_deviation > d) {
            worst = Some((o.relative_deviation, o.name));
        }
    }
    let (dev, name) = worst.unwrap_or((0.0, "-"));
    if failed == 0 {
        writeln!(
            out,
            "PASS: worst deviation {dev:.2e} ({name}), tolerance {ORACLE_TOL:.0e}"
        )
        .map_err(io_out)?;
        Ok(exit::OK)
    } else {
        writeln!(
            out,
            "FAIL: {failed} case(s) outside {ORACLE_TOL:.0e}; worst deviation {dev:.2e} ({name})"
        )
        .map_err(io_out)?;
        Ok(exit::CHECK_FAILED)
    }
}
