//! The six subcommands. Each resolves its configuration (file plus flags),
//! computes through `wavepacket-core`, and writes deterministic artifacts
//! into the output directory.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use wavepacket_core::observables::{
    continuity_residual, current, density, measure, sample, CurrentMethod,
};
use wavepacket_core::propagator::oracle_compare;
use wavepacket_core::states::{closed_form_moments, eval};
use wavepacket_core::streamlines::{
    default_seeds, handedness, polylines_to_csv, polylines_to_svg, trace,
};
use wavepacket_core::{
    fmt_g17, FieldWarning, Grid2D, Mode, MomentReport, ObservableReport, PhysicalParams,
};

use crate::config::{CommonFlags, Format};
use crate::output::{grid_csv, pgm_bytes, section_csv, write_atomic};
use crate::CliError;

/// Mode suite mirroring the oracle acceptance set.
fn default_check_modes() -> Vec<Mode> {
    vec![
        Mode::HermiteGauss { mu: 0, nu: 0 },
        Mode::HermiteGauss { mu: 1, nu: 0 },
        Mode::HermiteGauss { mu: 1, nu: 1 },
        Mode::HermiteGauss { mu: 2, nu: 1 },
        Mode::LaguerreGauss { ell: 0 },
        Mode::LaguerreGauss { ell: 1 },
        Mode::LaguerreGauss { ell: -1 },
        Mode::LaguerreGauss { ell: 2 },
    ]
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))
}

fn report_warnings(context: &str, warnings: &[FieldWarning]) {
    for w in warnings {
        eprintln!("warning [{context}]: {w}");
    }
}

fn frame_name(prefix: &str, index: usize, ext: &str) -> String {
    format!("{prefix}_{index:03}.{ext}")
}

pub fn run_eval(flags: &CommonFlags, x: f64, y: f64) -> Result<(), CliError> {
    let config = flags.resolve()?;
    let params = config.physical_params()?;
    let mode = config.mode()?;
    let t = config.times_or(vec![0.0])?.first().copied().unwrap_or(0.0);
    let v = eval(mode, &params, x, y, t);
    println!(
        "{} {} {} {}",
        fmt_g17(v.re),
        fmt_g17(v.im),
        fmt_g17(v.norm()),
        fmt_g17(v.arg())
    );
    Ok(())
}

#[derive(Serialize)]
struct RelativeErrors {
    r2: f64,
    p2: f64,
    energy: f64,
    lz: f64,
}

#[derive(Serialize)]
struct ObservablesEntry {
    measured: ObservableReport,
    closed_form: MomentReport,
    rel_err: RelativeErrors,
}

fn rel_err(measured: f64, closed: f64, floor: f64) -> f64 {
    (measured - closed).abs() / closed.abs().max(floor)
}

pub fn run_observables(flags: &CommonFlags) -> Result<(), CliError> {
    let config = flags.resolve()?;
    let params = config.physical_params()?;
    let mode = config.mode()?;
    let grid = config.grid(&params, 8.0)?;
    let t0 = params.time_scale();
    let times = config.times_or(vec![0.0, t0, 2.0 * t0])?;
    let dt = 1e-3 * t0;

    let mut entries = Vec::new();
    for &t in &times {
        let field = sample(mode, &params, &grid, t).map_err(CliError::from_core)?;
        report_warnings(&format!("observables t={t}"), &field.warnings);
        let mut measured = measure(&field);
        let (_, residual_l2) =
            continuity_residual(mode, &params, &grid, t, dt).map_err(CliError::from_core)?;
        measured.continuity_residual_l2 = Some(residual_l2);
        let closed = closed_form_moments(mode, &params, t);
        let rel = RelativeErrors {
            r2: rel_err(measured.r2, closed.r2, f64::MIN_POSITIVE),
            p2: rel_err(measured.p2, closed.p2, f64::MIN_POSITIVE),
            energy: rel_err(measured.energy, closed.energy, f64::MIN_POSITIVE),
            // Absolute in units of hbar once the closed form vanishes.
            lz: rel_err(measured.lz, closed.lz, params.hbar),
        };
        entries.push(ObservablesEntry { measured, closed_form: closed, rel_err: rel });
    }

    let mut csv = format!(
        "# mode={mode} mass={} hbar={} waist={} t0={} continuity_dt={}\n",
        fmt_g17(params.mass),
        fmt_g17(params.hbar),
        fmt_g17(params.waist),
        fmt_g17(t0),
        fmt_g17(dt),
    );
    csv.push_str(ObservableReport::CSV_HEADER);
    csv.push_str(
        ",r2_closed,p2_closed,energy_closed,lz_closed,r2_rel_err,p2_rel_err,energy_rel_err,lz_rel_err\n",
    );
    for e in &entries {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            e.measured.to_csv_row(),
            fmt_g17(e.closed_form.r2),
            fmt_g17(e.closed_form.p2),
            fmt_g17(e.closed_form.energy),
            fmt_g17(e.closed_form.lz),
            fmt_g17(e.rel_err.r2),
            fmt_g17(e.rel_err.p2),
            fmt_g17(e.rel_err.energy),
            fmt_g17(e.rel_err.lz),
        );
    }
    print!("{csv}");

    let out = config.output_dir();
    let formats = config.formats();
    ensure_dir(&out)?;
    if formats.contains(&Format::Csv) {
        write_atomic(&out.join("observables.csv"), csv.as_bytes())?;
    }
    if formats.contains(&Format::Json) {
        let json = serde_json::to_string_pretty(&entries)
            .map_err(|e| CliError::Io(e.to_string()))?;
        write_atomic(&out.join("observables.json"), format!("{json}\n").as_bytes())?;
    }
    Ok(())
}

pub fn run_propagate_check(flags: &CommonFlags) -> Result<(), CliError> {
    let config = flags.resolve()?;
    let params = config.physical_params()?;
    let grid = config.grid(&params, 10.0)?;
    let t0 = params.time_scale();
    let times = config.times_or(vec![0.5 * t0, t0, 2.0 * t0])?;
    let threshold = config.threshold();
    let modes = if config.mode.is_some() {
        vec![config.mode()?]
    } else {
        default_check_modes()
    };

    let mut csv = String::from("mode,time,rel_l2_error,status,warnings\n");
    let mut failures = 0usize;
    for mode in &modes {
        for &t in &times {
            let cmp = oracle_compare(*mode, &params, &grid, t).map_err(CliError::from_core)?;
            let ok = cmp.rel_l2_error <= threshold;
            if !ok {
                failures += 1;
            }
            let status = if ok { "ok" } else { "fail" };
            println!(
                "{mode} t={} rel_l2_error={} {status}",
                fmt_g17(t),
                fmt_g17(cmp.rel_l2_error)
            );
            report_warnings(&format!("propagate-check {mode} t={t}"), &cmp.warnings);
            let warning_text = cmp
                .warnings
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            let _ = writeln!(
                csv,
                "{mode},{},{},{status},{warning_text}",
                fmt_g17(t),
                fmt_g17(cmp.rel_l2_error)
            );
        }
    }

    if config.formats().contains(&Format::Csv) {
        let out = config.output_dir();
        ensure_dir(&out)?;
        write_atomic(&out.join("propagate_check.csv"), csv.as_bytes())?;
    }
    if failures > 0 {
        return Err(CliError::Threshold(format!(
            "{failures} oracle comparison(s) exceeded the threshold {threshold:e}"
        )));
    }
    println!("all {} comparisons within {threshold:e}", modes.len() * times.len());
    Ok(())
}

fn snapshot_comments(mode: Mode, params: &PhysicalParams, grid: &Grid2D, t: f64) -> Vec<String> {
    vec![format!(
        "mode={mode} time={} n={} half_width={}",
        fmt_g17(t),
        grid.nx(),
        fmt_g17(grid.half_width())
    ), format!(
        "mass={} hbar={} waist={}",
        fmt_g17(params.mass),
        fmt_g17(params.hbar),
        fmt_g17(params.waist)
    )]
}

pub fn run_snapshot(flags: &CommonFlags) -> Result<(), CliError> {
    let config = flags.resolve()?;
    let params = config.physical_params()?;
    let mode = config.mode()?;
    let grid = config.grid(&params, 8.0)?;
    let t0 = params.time_scale();
    let times = config.times_or(vec![-2.0 * t0, 0.0, 2.0 * t0])?;
    let out = config.output_dir();
    let formats = config.formats();
    ensure_dir(&out)?;

    for (k, &t) in times.iter().enumerate() {
        let field = sample(mode, &params, &grid, t).map_err(CliError::from_core)?;
        report_warnings(&format!("snapshot t={t}"), &field.warnings);
        let rho = density(&field);
        if formats.contains(&Format::Csv) {
            let csv = grid_csv(&rho, &snapshot_comments(mode, &params, &grid, t));
            let path = out.join(frame_name("snapshot", k, "csv"));
            write_atomic(&path, csv.as_bytes())?;
            println!("wrote {}", path.display());
        }
        if formats.contains(&Format::Pgm) {
            let path = out.join(frame_name("snapshot", k, "pgm"));
            write_atomic(&path, &pgm_bytes(&rho))?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

pub fn run_section(flags: &CommonFlags) -> Result<(), CliError> {
    let config = flags.resolve()?;
    let params = config.physical_params()?;
    let mode = config.mode()?;
    let grid = config.grid(&params, 8.0)?;
    let t0 = params.time_scale();
    let times = config.times_or(linspace(-2.0 * t0, 2.0 * t0, config.section_samples()))?;
    let xs = grid.xs();

    let rows: Vec<(f64, Vec<f64>)> = times
        .iter()
        .map(|&t| {
            (
                t,
                xs.iter()
                    .map(|&x| eval(mode, &params, x, 0.0, t).norm_sqr())
                    .collect(),
            )
        })
        .collect();
    let comments = vec![format!(
        "mode={mode} section y=0 n={} half_width={} mass={} hbar={} waist={}",
        grid.nx(),
        fmt_g17(grid.half_width()),
        fmt_g17(params.mass),
        fmt_g17(params.hbar),
        fmt_g17(params.waist)
    )];
    let csv = section_csv(&xs, &rows, &comments);

    if config.formats().contains(&Format::Csv) {
        let out = config.output_dir();
        ensure_dir(&out)?;
        let path = out.join("section.csv");
        write_atomic(&path, csv.as_bytes())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn run_streamlines(flags: &CommonFlags) -> Result<(), CliError> {
    let config = flags.resolve()?;
    let params = config.physical_params()?;
    let mode = config.mode()?;
    let grid = config.grid(&params, 8.0)?;
    let t0 = params.time_scale();
    let times = config.times_or(vec![-2.0 * t0, 0.0, 2.0 * t0])?;
    let step = config.streamline_step(&params);
    if !(step.is_finite() && step > 0.0) {
        return Err(CliError::Invariant(format!(
            "streamline_step must be positive, got {step}"
        )));
    }
    let max_steps = config.streamline_max_steps();
    let out = config.output_dir();
    let formats = config.formats();
    ensure_dir(&out)?;

    for (k, &t) in times.iter().enumerate() {
        let field = sample(mode, &params, &grid, t).map_err(CliError::from_core)?;
        report_warnings(&format!("streamlines t={t}"), &field.warnings);
        let j = current(&field, CurrentMethod::AnalyticGradient);
        let tau = t / t0;
        let ring = params.waist * ((1.0 + tau * tau) / 2.0).sqrt();
        let sense = handedness(&j, ring);
        let traces: Vec<_> = default_seeds(&params, t)
            .into_iter()
            .map(|seed| trace(&j, t, seed, step, max_steps))
            .collect();
        let live = traces.iter().filter(|tr| !tr.points.is_empty()).count();

        let mut csv = format!(
            "# mode={mode} time={} handedness={sense:+} step={} max_steps={max_steps}\n",
            fmt_g17(t),
            fmt_g17(step)
        );
        if live == 0 {
            csv.push_str("# stagnation: current vanishes at every seed\n");
            println!("streamlines t={t}: stagnant current, no traces");
        }
        csv.push_str(&polylines_to_csv(&traces));

        if formats.contains(&Format::Csv) {
            let path = out.join(frame_name("streamlines", k, "csv"));
            write_atomic(&path, csv.as_bytes())?;
            println!("wrote {}", path.display());
        }
        if formats.contains(&Format::Svg) {
            let path = out.join(frame_name("streamlines", k, "svg"));
            write_atomic(&path, polylines_to_svg(&traces, &grid).as_bytes())?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::linspace;

    #[test]
    fn linspace_includes_endpoints_and_center() {
        let v = linspace(-1.0, 1.0, 129);
        assert_eq!(v.len(), 129);
        assert_eq!(v[0], -1.0);
        assert_eq!(v[128], 1.0);
        assert_eq!(v[64], 0.0);
        assert_eq!(linspace(2.0, 3.0, 1), vec![2.0]);
    }
}
