//! CSV and JSON artifacts. Floats in CSV are written with 17 significant
//! digits (`{:.16e}`), which round-trips every `f64`.

use std::io::{self, BufRead, Write};

use peakeq_core::noise::BoundSweepRow;
use peakeq_core::special::{BoundaryPoint, RegionSample};
use peakeq_core::equal_roots::{PeakCurvePoint, Table1Row};
use peakeq_core::{DifferenceEquation, Trajectory};
use serde::Serialize;

use crate::{CliError, Result};

/// Tolerance of the load-time recurrence check.
pub const RESIDUAL_TOL: f64 = 1e-12;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn join_instants(ks: &[usize]) -> String {
    ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(";")
}

pub fn write_trajectory<W: Write>(mut w: W, traj: &Trajectory) -> io::Result<()> {
    writeln!(w, "k,x_k")?;
    for (k, x) in traj.samples().iter().enumerate() {
        writeln!(w, "{k},{}", fmt_f64(*x))?;
    }
    Ok(())
}

/// `k,x_k,v_k`; `v_k` is empty for `k < n`.
pub fn write_noisy_trajectory<W: Write>(mut w: W, traj: &Trajectory, noise: &[f64], n: usize) -> io::Result<()> {
    writeln!(w, "k,x_k,v_k")?;
    for (k, x) in traj.samples().iter().enumerate() {
        let v = if k < n { String::new() } else { fmt_f64(noise[k - n]) };
        writeln!(w, "{k},{},{v}", fmt_f64(*x))?;
    }
    Ok(())
}

/// Samples and, for three-column files, the forcing `v_n, v_{n+1}, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedTrajectory {
    pub samples: Vec<f64>,
    pub forcing: Option<Vec<f64>>,
}

fn csv_err(line: usize, detail: impl Into<String>) -> CliError {
    CliError::Csv {
        line,
        detail: detail.into(),
    }
}

fn parse_field(s: &str, line: usize) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|e| csv_err(line, format!("`{s}`: {e}")))
}

pub fn read_trajectory<R: BufRead>(r: R) -> Result<LoadedTrajectory> {
    let mut lines = r.lines().enumerate();
    let header = match lines.next() {
        Some((_, l)) => l.map_err(|e| csv_err(1, e.to_string()))?,
        None => return Err(csv_err(1, "empty file")),
    };
    let noisy = match header.trim() {
        "k,x_k" => false,
        "k,x_k,v_k" => true,
        other => return Err(csv_err(1, format!("unexpected header `{other}`"))),
    };
    let mut samples = Vec::new();
    let mut forcing = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let line = line.map_err(|e| csv_err(line_no, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != if noisy { 3 } else { 2 } {
            return Err(csv_err(line_no, "wrong number of fields"));
        }
        let k: usize = fields[0].trim().parse().map_err(|e| csv_err(line_no, format!("index: {e}")))?;
        if k != samples.len() {
            return Err(csv_err(line_no, format!("expected k = {}, found {k}", samples.len())));
        }
        samples.push(parse_field(fields[1], line_no)?);
        if noisy && !fields[2].trim().is_empty() {
            forcing.push(parse_field(fields[2], line_no)?);
        }
    }
    Ok(LoadedTrajectory {
        samples,
        forcing: noisy.then_some(forcing),
    })
}

/// Re-reads a written trajectory and checks it against the recurrence.
pub fn validate_loaded(eq: &DifferenceEquation, loaded: &LoadedTrajectory) -> Result<f64> {
    let n = eq.order();
    if let Some(v) = &loaded.forcing {
        if v.len() + n != loaded.samples.len() {
            return Err(csv_err(0, "forcing column does not cover k ≥ n"));
        }
    }
    let traj = Trajectory::from_samples(loaded.samples.clone());
    let r = traj.max_residual(eq, loaded.forcing.as_deref());
    if r > RESIDUAL_TOL {
        return Err(CliError::Residual(r));
    }
    Ok(r)
}

pub fn write_table1<W: Write>(mut w: W, rows: &[Table1Row]) -> io::Result<()> {
    writeln!(w, "n,beta_n,alpha_n,K_beta,K_alpha")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.n,
            fmt_f64(r.beta_n),
            fmt_f64(r.alpha_n),
            join_instants(&r.k_beta),
            join_instants(&r.k_alpha)
        )?;
    }
    Ok(())
}

pub fn write_peak_curve<W: Write>(mut w: W, points: &[PeakCurvePoint]) -> io::Result<()> {
    writeln!(w, "k,alpha,beta")?;
    for p in points {
        writeln!(w, "{},{},{}", p.k, fmt_f64(p.alpha), fmt_f64(p.beta))?;
    }
    Ok(())
}

pub fn write_sweep<W: Write>(mut w: W, rows: &[BoundSweepRow]) -> io::Result<()> {
    writeln!(w, "t,box_lp_max,convolution_bound,tail_bound")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{}",
            r.t,
            fmt_f64(r.box_lp_max),
            fmt_f64(r.convolution_bound),
            fmt_f64(r.tail_bound)
        )?;
    }
    Ok(())
}

/// Box-LP sweep for an equation without equal-root closed forms; the bound
/// columns stay empty.
pub fn write_lp_sweep<W: Write>(mut w: W, rows: &[(usize, f64)]) -> io::Result<()> {
    writeln!(w, "t,box_lp_max,convolution_bound,tail_bound")?;
    for (t, v) in rows {
        writeln!(w, "{t},{},,", fmt_f64(*v))?;
    }
    Ok(())
}

pub fn write_boundary<W: Write>(mut w: W, points: &[BoundaryPoint]) -> io::Result<()> {
    writeln!(w, "omega,a,b")?;
    for p in points {
        writeln!(w, "{},{},{}", fmt_f64(p.omega), fmt_f64(p.a), fmt_f64(p.b))?;
    }
    Ok(())
}

pub fn write_regions<W: Write>(mut w: W, samples: &[RegionSample]) -> io::Result<()> {
    writeln!(w, "a,b,in_S,in_C,in_P")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(s.a),
            fmt_f64(s.b),
            u8::from(s.in_stability),
            u8::from(s.in_cohn),
            u8::from(s.in_peak_domain)
        )?;
    }
    Ok(())
}

/// Pretty JSON followed by a newline.
pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)
}
