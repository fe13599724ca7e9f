//! Batch engine: evaluates (α, c0, Dt) grids through the evolution and the
//! three criteria, with CSV and plot-data emission and extraction of the
//! parameter region where the reduction criterion signals distillability.
//!
//! Grid points are independent; a sweep evaluates them on a worker pool and
//! gathers records in grid order, so the output is a pure function of the
//! configuration regardless of worker count. `ENTLAB_WORKERS` caps the pool.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{classify, evaluate, reduction_report, ClassificationLabel};
use crate::error::{Error, Result};
use crate::evolution::{Evolver, HamiltonianVariant};
use crate::states::{aux_qubit, horodecki_state, HorodeckiFamily};
use crate::tol;

/// Evenly spaced grid over [min, max] with `steps` points (`steps = 1`
/// pins the single point `min`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridRange {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        let r = Self { min, max, steps };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 1 {
            return Err(Error::Config("range needs at least one step".into()));
        }
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Config(format!(
                "range bounds must be finite, got {}:{}",
                self.min, self.max
            )));
        }
        if self.min > self.max {
            return Err(Error::Config(format!(
                "range minimum {} exceeds maximum {}",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn value(&self, index: usize) -> f64 {
        if self.steps == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * index as f64 / (self.steps - 1) as f64
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(|i| self.value(i))
    }
}

impl std::str::FromStr for GridRange {
    type Err = Error;

    /// Parses `min:max:steps`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!(
                "range '{s}' must have the form min:max:steps"
            )));
        }
        let min: f64 = parts[0]
            .parse()
            .map_err(|_| Error::Config(format!("bad range minimum '{}'", parts[0])))?;
        let max: f64 = parts[1]
            .parse()
            .map_err(|_| Error::Config(format!("bad range maximum '{}'", parts[1])))?;
        let steps: usize = parts[2]
            .parse()
            .map_err(|_| Error::Config(format!("bad range step count '{}'", parts[2])))?;
        GridRange::new(min, max, steps)
    }
}

impl std::fmt::Display for GridRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.steps)
    }
}

/// Full description of one sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub family: HorodeckiFamily,
    pub alpha_range: GridRange,
    pub c0_values: Vec<f64>,
    pub dt_range: GridRange,
    pub variant: HamiltonianVariant,
    pub allow_out_of_domain: bool,
    /// Destination for the CSV; consumed by the CLI, ignored by `run_sweep`.
    pub output_path: Option<PathBuf>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.alpha_range.validate()?;
        self.dt_range.validate()?;
        if self.c0_values.is_empty() {
            return Err(Error::Config("at least one c0 value is required".into()));
        }
        for &c0 in &self.c0_values {
            if !(0.0..=1.0).contains(&c0) {
                return Err(Error::Config(format!("c0 = {c0} outside [0, 1]")));
            }
        }
        if !self.allow_out_of_domain {
            let (lo, hi) = self.family.domain();
            let amin = self.alpha_range.min;
            let amax = self.alpha_range.max;
            let inside = match self.family {
                HorodeckiFamily::State1 => amin >= lo && amax <= hi,
                HorodeckiFamily::State2 => amin > lo && amax < hi,
            };
            if !inside {
                return Err(Error::Config(format!(
                    "alpha range {amin}:{amax} leaves the family-{} domain ({lo}, {hi}); \
                     pass the out-of-domain override to sweep it anyway",
                    self.family
                )));
            }
        }
        Ok(())
    }
}

/// One grid point's readings.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub family: HorodeckiFamily,
    pub alpha: f64,
    pub c0: f64,
    pub dt: f64,
    pub negativity: f64,
    pub realignment: f64,
    pub red_min_a: f64,
    pub red_min_b: f64,
    pub label: ClassificationLabel,
    pub out_of_domain: bool,
}

impl SweepRecord {
    pub fn label_text(&self) -> String {
        if self.out_of_domain {
            format!("OutOfDomain:{}", self.label)
        } else {
            self.label.to_string()
        }
    }

    pub fn reduction_min(&self) -> f64 {
        self.red_min_a.min(self.red_min_b)
    }
}

/// Worker count: explicit override, then `ENTLAB_WORKERS`, then available
/// parallelism.
fn worker_count(override_workers: Option<usize>) -> Result<usize> {
    if let Some(n) = override_workers {
        if n == 0 {
            return Err(Error::Config("worker count must be positive".into()));
        }
        return Ok(n);
    }
    match std::env::var("ENTLAB_WORKERS") {
        Ok(text) => match text.parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Config(format!(
                "ENTLAB_WORKERS must be a positive integer, got '{text}'"
            ))),
        },
        Err(_) => Ok(std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)),
    }
}

/// Runs the grid with the default worker policy.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    run_sweep_with_workers(config, None)
}

/// Runs the grid on an explicit number of workers. Records come back sorted
/// lexicographically by (c0, alpha, dt); two runs of the same configuration
/// produce identical records whatever the worker count.
pub fn run_sweep_with_workers(
    config: &SweepConfig,
    workers: Option<usize>,
) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let workers = worker_count(workers)?;

    let mut c0s = config.c0_values.clone();
    c0s.sort_by(f64::total_cmp);

    // shared read-only inputs: states per alpha, qubits per c0, propagators per dt
    let evolver = Evolver::new(config.variant)?;
    let states: Vec<_> = config
        .alpha_range
        .values()
        .map(|alpha| {
            horodecki_state(config.family, alpha, config.allow_out_of_domain).map_err(|e| {
                point_error(config.family, alpha, f64::NAN, f64::NAN, e)
            })
        })
        .collect::<Result<_>>()?;
    let qubits: Vec<_> = c0s
        .iter()
        .map(|&c0| aux_qubit(Complex64::new(c0, 0.0)))
        .collect::<Result<_>>()?;
    let propagators: Vec<_> = config
        .dt_range
        .values()
        .map(|dt| evolver.propagator(dt))
        .collect::<Result<_>>()?;

    let na = config.alpha_range.steps;
    let nt = config.dt_range.steps;
    let total = c0s.len() * na * nt;
    let indices: Vec<usize> = (0..total).collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("could not build worker pool: {e}")))?;

    let qubit_states = &qubits;
    let alpha_states = &states;
    let props = &propagators;
    let records: Vec<SweepRecord> = pool.install(|| {
        indices
            .par_iter()
            .map(|&idx| {
                let ic = idx / (na * nt);
                let ia = (idx / nt) % na;
                let it = idx % nt;
                let alpha = config.alpha_range.value(ia);
                let c0 = c0s[ic];
                let dt = config.dt_range.value(it);
                evaluate_point(
                    config,
                    &alpha_states[ia],
                    &qubit_states[ic],
                    &props[it],
                    alpha,
                    c0,
                    dt,
                )
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(records)
}

fn point_error(family: HorodeckiFamily, alpha: f64, c0: f64, dt: f64, source: Error) -> Error {
    Error::SweepPoint {
        family,
        alpha,
        c0,
        dt,
        source: Box::new(source),
    }
}

fn evaluate_point(
    config: &SweepConfig,
    state: &crate::tensor::DensityMatrix,
    qubit: &crate::states::PureQubitState,
    propagator: &crate::linalg::ComplexMatrix,
    alpha: f64,
    c0: f64,
    dt: f64,
) -> Result<SweepRecord> {
    let wrap = |e: Error| point_error(config.family, alpha, c0, dt, e);
    let evolved = Evolver::evolve_with_propagator(propagator, state, qubit).map_err(wrap)?;
    let crit = evaluate(&evolved).map_err(wrap)?;
    let red = reduction_report(&evolved).map_err(wrap)?;
    Ok(SweepRecord {
        family: config.family,
        alpha,
        c0,
        dt,
        negativity: crit.negativity,
        realignment: crit.realignment,
        red_min_a: red.min_eig_side_a,
        red_min_b: red.min_eig_side_b,
        label: classify(crit.negativity, crit.realignment),
        out_of_domain: !config.family.domain_contains(alpha),
    })
}

/// Bounding box of the grid points violating the reduction criterion.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegionBounds {
    pub dt_lo: f64,
    pub dt_hi: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
}

/// Grid point inside the violating region.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WitnessPoint {
    pub alpha: f64,
    pub dt: f64,
    pub min_eig: f64,
}

/// Where the reduction criterion signals distillability. `bounds` is `None`
/// exactly when no grid point violates; an empty region is a result, not an
/// error.
#[derive(Debug, Clone, Serialize)]
pub struct RegionReport {
    pub family: HorodeckiFamily,
    pub c0: f64,
    pub bounds: Option<RegionBounds>,
    /// Up to ten grid points with the most negative eigenvalues.
    pub witnesses: Vec<WitnessPoint>,
}

/// Extracts the distillability region from the records of a single
/// (family, c0) sweep.
pub fn find_negative_region(records: &[SweepRecord]) -> Result<RegionReport> {
    let first = records
        .first()
        .ok_or_else(|| Error::Config("no records to analyze".into()))?;
    if records
        .iter()
        .any(|r| r.family != first.family || r.c0 != first.c0)
    {
        return Err(Error::Config(
            "region extraction expects records from a single (family, c0) sweep".into(),
        ));
    }

    let mut violating: Vec<&SweepRecord> = records
        .iter()
        .filter(|r| r.reduction_min() < -tol::REDUCTION_TOL)
        .collect();

    let bounds = if violating.is_empty() {
        None
    } else {
        let fold = |init: (f64, f64, f64, f64), r: &SweepRecord| {
            (
                init.0.min(r.dt),
                init.1.max(r.dt),
                init.2.min(r.alpha),
                init.3.max(r.alpha),
            )
        };
        let (dt_lo, dt_hi, alpha_lo, alpha_hi) = violating.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
            |acc, r| fold(acc, r),
        );
        Some(RegionBounds { dt_lo, dt_hi, alpha_lo, alpha_hi })
    };

    violating.sort_by(|a, b| {
        a.reduction_min()
            .total_cmp(&b.reduction_min())
            .then(a.alpha.total_cmp(&b.alpha))
            .then(a.dt.total_cmp(&b.dt))
    });
    let witnesses = violating
        .iter()
        .take(10)
        .map(|r| WitnessPoint {
            alpha: r.alpha,
            dt: r.dt,
            min_eig: r.reduction_min(),
        })
        .collect();

    Ok(RegionReport {
        family: first.family,
        c0: first.c0,
        bounds,
        witnesses,
    })
}

// CSV schema: family,alpha,c0,dt,negativity,realignment,red_min_a,red_min_b,label
// Header mandatory, UTF-8, LF line endings, numbers with 17 significant digits.

const CSV_HEADER: &str = "family,alpha,c0,dt,negativity,realignment,red_min_a,red_min_b,label";

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes records in the fixed CSV schema; byte-deterministic for identical
/// inputs.
pub fn emit_csv(records: &[SweepRecord], out: &mut dyn Write) -> Result<()> {
    let mut buf = String::with_capacity(records.len() * 160 + CSV_HEADER.len() + 1);
    buf.push_str(CSV_HEADER);
    buf.push('\n');
    for r in records {
        buf.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.family,
            fmt_f64(r.alpha),
            fmt_f64(r.c0),
            fmt_f64(r.dt),
            fmt_f64(r.negativity),
            fmt_f64(r.realignment),
            fmt_f64(r.red_min_a),
            fmt_f64(r.red_min_b),
            r.label_text(),
        ));
    }
    out.write_all(buf.as_bytes())?;
    Ok(())
}

/// Parses CSV produced by [`emit_csv`]; exact round trip of every value.
pub fn parse_csv(reader: &mut dyn BufRead) -> Result<Vec<SweepRecord>> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::CsvParse { line: 1, message: "empty input".into() })??;
    if header.trim_end() != CSV_HEADER {
        return Err(Error::CsvParse {
            line: 1,
            message: format!("unexpected header '{header}'"),
        });
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(Error::CsvParse {
                line: lineno,
                message: format!("expected 9 fields, got {}", fields.len()),
            });
        }
        let parse_f = |s: &str, name: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| Error::CsvParse {
                line: lineno,
                message: format!("bad {name} value '{s}'"),
            })
        };
        let family: HorodeckiFamily = fields[0].parse().map_err(|_| Error::CsvParse {
            line: lineno,
            message: format!("bad family '{}'", fields[0]),
        })?;
        let (label_text, out_of_domain) = match fields[8].strip_prefix("OutOfDomain:") {
            Some(rest) => (rest, true),
            None => (fields[8], false),
        };
        let label: ClassificationLabel = label_text.parse().map_err(|_| Error::CsvParse {
            line: lineno,
            message: format!("bad label '{}'", fields[8]),
        })?;
        records.push(SweepRecord {
            family,
            alpha: parse_f(fields[1], "alpha")?,
            c0: parse_f(fields[2], "c0")?,
            dt: parse_f(fields[3], "dt")?,
            negativity: parse_f(fields[4], "negativity")?,
            realignment: parse_f(fields[5], "realignment")?,
            red_min_a: parse_f(fields[6], "red_min_a")?,
            red_min_b: parse_f(fields[7], "red_min_b")?,
            label,
            out_of_domain,
        });
    }
    Ok(records)
}

/// Which variable runs along the x axis of emitted curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotAxis {
    /// One curve file per (c0, Dt) pair, α on the x axis.
    Alpha,
    /// One curve file per (c0, α) pair, Dt on the x axis.
    Dt,
    /// One surface file per c0: rows of (Dt, α, min reduction eigenvalue),
    /// blocked by Dt for contour extraction.
    Grid,
}

impl std::str::FromStr for PlotAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "alpha" => Ok(PlotAxis::Alpha),
            "dt" => Ok(PlotAxis::Dt),
            "grid" => Ok(PlotAxis::Grid),
            other => Err(Error::Config(format!(
                "unknown plot axis '{other}', expected alpha, dt, or grid"
            ))),
        }
    }
}

fn plot_fmt(v: f64) -> String {
    format!("{v:.9e}")
}

/// Writes whitespace-separated plot data plus a gnuplot script; returns the
/// written paths. Contents are byte-deterministic for identical records.
pub fn emit_plot_data(
    records: &[SweepRecord],
    axis: PlotAxis,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(Error::Config("no records to plot".into()));
    }
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    match axis {
        PlotAxis::Alpha | PlotAxis::Dt => {
            // group records by the parameters held fixed along a curve
            let key = |r: &SweepRecord| -> (f64, f64) {
                match axis {
                    PlotAxis::Alpha => (r.c0, r.dt),
                    _ => (r.c0, r.alpha),
                }
            };
            let mut keys: Vec<(f64, f64)> = records.iter().map(key).collect();
            keys.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
            keys.dedup();

            let mut script = String::from(
                "# gnuplot script: negativity and realignment curves\n\
                 set grid\nset key outside\n",
            );
            script.push_str(match axis {
                PlotAxis::Alpha => "set xlabel \"alpha\"\n",
                _ => "set xlabel \"Dt\"\n",
            });
            script.push_str("set ylabel \"criterion value\"\nplot \\\n");

            let mut plot_lines = Vec::new();
            for (ci, k) in keys.iter().enumerate() {
                let name = format!("curve_{ci:03}.dat");
                let path = out_dir.join(&name);
                let mut body = String::from("# x negativity realignment reduction_min\n");
                let mut rows: Vec<&SweepRecord> =
                    records.iter().filter(|r| key(r) == *k).collect();
                rows.sort_by(|a, b| match axis {
                    PlotAxis::Alpha => a.alpha.total_cmp(&b.alpha),
                    _ => a.dt.total_cmp(&b.dt),
                });
                for r in rows {
                    let x = match axis {
                        PlotAxis::Alpha => r.alpha,
                        _ => r.dt,
                    };
                    body.push_str(&format!(
                        "{} {} {} {}\n",
                        plot_fmt(x),
                        plot_fmt(r.negativity),
                        plot_fmt(r.realignment),
                        plot_fmt(r.reduction_min())
                    ));
                }
                std::fs::write(&path, body)?;
                let fixed = match axis {
                    PlotAxis::Alpha => format!("c0={}, Dt={}", k.0, k.1),
                    _ => format!("c0={}, alpha={}", k.0, k.1),
                };
                plot_lines.push(format!(
                    "  \"{name}\" using 1:2 with lines title \"N ({fixed})\", \\\n  \"{name}\" using 1:3 with lines title \"R ({fixed})\""
                ));
                written.push(path);
            }
            script.push_str(&plot_lines.join(", \\\n"));
            script.push('\n');
            let sp = out_dir.join("plot.gp");
            std::fs::write(&sp, script)?;
            written.push(sp);
        }
        PlotAxis::Grid => {
            let mut c0s: Vec<f64> = records.iter().map(|r| r.c0).collect();
            c0s.sort_by(f64::total_cmp);
            c0s.dedup();
            let mut script = String::from(
                "# gnuplot script: reduction-criterion surface for contour extraction\n\
                 set xlabel \"Dt\"\nset ylabel \"alpha\"\nset contour base\n\
                 set cntrparam levels discrete 0\nset view map\n",
            );
            for (ci, &c0) in c0s.iter().enumerate() {
                let name = format!("surface_{ci:03}.dat");
                let path = out_dir.join(&name);
                let mut rows: Vec<&SweepRecord> =
                    records.iter().filter(|r| r.c0 == c0).collect();
                rows.sort_by(|a, b| a.dt.total_cmp(&b.dt).then(a.alpha.total_cmp(&b.alpha)));
                let mut body = String::from("# dt alpha reduction_min\n");
                let mut last_dt = f64::NAN;
                for r in rows {
                    if !last_dt.is_nan() && r.dt != last_dt {
                        body.push('\n'); // gnuplot block separator per dt scan line
                    }
                    last_dt = r.dt;
                    body.push_str(&format!(
                        "{} {} {}\n",
                        plot_fmt(r.dt),
                        plot_fmt(r.alpha),
                        plot_fmt(r.reduction_min())
                    ));
                }
                std::fs::write(&path, body)?;
                script.push_str(&format!(
                    "splot \"{name}\" using 1:2:3 with pm3d title \"min reduction eigenvalue (c0={c0})\"\n"
                ));
                written.push(path);
            }
            let sp = out_dir.join("contour.gp");
            std::fs::write(&sp, script)?;
            written.push(sp);
        }
    }
    Ok(written)
}
