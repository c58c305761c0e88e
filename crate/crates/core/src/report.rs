//! End-to-end runs driven by a [`RunConfig`] and their CSV, JSON and SVG renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::atlas::{classify_excitation, grid_points, settle, AttractorSample, Classification, Trial};
use crate::config::{RunConfig, LES_TRANSIENT, SWEEP_TRANSIENT};
use crate::error::{Error, Result};
use crate::flow::advance;
use crate::lyap::{
    finite_time_les, kaplan_yorke_from, sweep_max_dimension, FtLeSpectrum, KyDimension, KySource, SweepPoint,
};
use crate::systems::{Kind, SystemSpec};

/// Formats with 15 significant digits, shortest form, no locale.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn exponent_columns(kind: Kind, n: usize) -> Vec<String> {
    (1..=n)
        .map(|i| match kind {
            Kind::Flow => format!("LE{i}"),
            Kind::Map => format!("LE{i}_per_iteration"),
        })
        .collect()
}

fn horizon_column(kind: Kind) -> &'static str {
    match kind {
        Kind::Flow => "t",
        Kind::Map => "iterations",
    }
}

fn ky_cells(ky: &KyDimension) -> [String; 3] {
    [ky.j.to_string(), fmt_sig(ky.s), fmt_sig(ky.d)]
}

/// Exponents along one orbit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LesReport {
    pub system: SystemSpec,
    pub kind: Kind,
    pub seed: Vec<f64>,
    pub transient: f64,
    pub seg_len: f64,
    pub n_factors: usize,
    pub sweeps: usize,
    pub spectrum: FtLeSpectrum,
    pub ky: KyDimension,
}

impl LesReport {
    pub fn csv(&self) -> String {
        let kind = self.kind;
        let mut header = vec![horizon_column(kind).to_string()];
        header.extend(exponent_columns(kind, self.spectrum.les.len()));
        header.extend(["j", "s", "d"].map(String::from));
        let mut row = vec![fmt_sig(self.spectrum.t)];
        row.extend(self.spectrum.les.iter().map(|&v| fmt_sig(v)));
        row.extend(ky_cells(&self.ky));
        format!("{}\n{}\n", header.join(","), row.join(","))
    }
}

fn skip_transient(spec: &SystemSpec, seed: &[f64], transient: f64, cfg: &RunConfig) -> Result<Vec<f64>> {
    if transient == 0.0 {
        return Ok(seed.to_vec());
    }
    if spec.kind() == Kind::Map && transient.fract() != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "map transients are whole iterations, got {transient}"
        )));
    }
    advance(spec, seed, transient, &cfg.integrator()?)
}

pub fn run_les(cfg: &RunConfig) -> Result<LesReport> {
    cfg.validate()?;
    let spec = cfg.spec()?;
    let seed = cfg.seed_for(&spec)?;
    let transient = cfg.transient.unwrap_or(LES_TRANSIENT);
    let start = skip_transient(&spec, &seed, transient, cfg)?;
    let seg_len = cfg.seg_len_for(spec.kind());
    let spectrum = finite_time_les(&spec, &start, seg_len, cfg.n_factors, cfg.sweeps, &cfg.integrator()?)?;
    let ky = kaplan_yorke_from(&spectrum.les, KySource::FiniteTimeLes)?;
    Ok(LesReport {
        kind: spec.kind(),
        system: spec,
        seed,
        transient,
        seg_len,
        n_factors: cfg.n_factors,
        sweeps: cfg.sweeps,
        spectrum,
        ky,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub index: usize,
    pub error: String,
}

/// Attractor sample, its classification and the grid maximum of the dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub system: SystemSpec,
    pub kind: Kind,
    pub seed: Vec<f64>,
    pub transient: f64,
    pub sample_size: usize,
    pub classification: Classification,
    pub trials: Vec<Trial>,
    pub epsilon_scale: Option<f64>,
    pub seg_len: f64,
    pub n_factors: usize,
    pub sweeps: usize,
    pub best: SweepPoint,
    pub points: Vec<SweepPoint>,
    pub failures: Vec<PointFailure>,
}

impl SweepOutcome {
    pub fn max_dimension(&self) -> f64 {
        self.best.ky.d
    }

    /// One row per grid point.
    pub fn csv(&self) -> String {
        let n = self.system.dim();
        let mut header = vec!["index".to_string(), horizon_column(self.kind).to_string()];
        header.extend((1..=n).map(|i| format!("u{i}")));
        header.extend(exponent_columns(self.kind, n));
        header.extend(["j", "s", "d"].map(String::from));
        let mut out = header.join(",");
        out.push('\n');
        for p in &self.points {
            let mut row = vec![p.index.to_string(), fmt_sig(p.spectrum.t)];
            row.extend(p.spectrum.u0.iter().map(|&v| fmt_sig(v)));
            row.extend(p.spectrum.les.iter().map(|&v| fmt_sig(v)));
            row.extend(ky_cells(&p.ky));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Settles onto an attractor, classifies it, and sweeps the grid.
///
/// Returns the sample alongside the outcome for plotting.
pub fn run_sweep(cfg: &RunConfig) -> Result<(SweepOutcome, AttractorSample)> {
    cfg.validate()?;
    let spec = cfg.spec()?;
    let seed = cfg.seed_for(&spec)?;
    let icfg = cfg.integrator()?;
    let transient = cfg.transient.unwrap_or(SWEEP_TRANSIENT);
    let settled = settle(&spec, &seed, transient, cfg.t_sample, cfg.sample_every, &icfg, &cfg.settle_options())?;
    let sample = match &settled.classification {
        Classification::Unbounded { reason } => return Err(Error::NoAttractor(format!("orbit is unbounded: {reason}"))),
        Classification::ConvergedToEquilibrium { equilibrium } => {
            return Err(Error::NoAttractor(format!("orbit converged to equilibrium {equilibrium}")))
        }
        _ => match spec.kind() {
            Kind::Flow => classify_excitation(&spec, &settled, &cfg.excitation_options(), &icfg)?,
            Kind::Map => settled,
        },
    };
    let grid = grid_points(&sample, cfg.grid)?;
    let seg_len = cfg.seg_len_for(spec.kind());
    let report = sweep_max_dimension(&spec, &grid, seg_len, cfg.n_factors, cfg.sweeps, &icfg)?;
    let outcome = SweepOutcome {
        kind: spec.kind(),
        system: spec,
        seed,
        transient,
        sample_size: sample.points.len(),
        classification: sample.classification.clone(),
        trials: sample.trials.clone(),
        epsilon_scale: sample.epsilon_scale,
        seg_len,
        n_factors: cfg.n_factors,
        sweeps: cfg.sweeps,
        best: report.best,
        points: report.points,
        failures: report
            .failures
            .into_iter()
            .map(|(index, e)| PointFailure {
                index,
                error: e.to_string(),
            })
            .collect(),
    };
    Ok((outcome, sample))
}

const SVG_SIZE: f64 = 640.0;
const SVG_MARGIN: f64 = 48.0;

/// Static scatter of two coordinates of `points`, axes scaled to the data.
pub fn svg_scatter(points: &[Vec<f64>], axes: [usize; 2], title: &str) -> String {
    let [ax, ay] = axes;
    let range = |k: usize| {
        let (lo, hi) = points
            .iter()
            .map(|p| p[k])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if lo.is_finite() && hi > lo {
            (lo, hi)
        } else {
            let c = if lo.is_finite() { lo } else { 0.0 };
            (c - 1.0, c + 1.0)
        }
    };
    let (x0, x1) = range(ax);
    let (y0, y1) = range(ay);
    let span = SVG_SIZE - 2.0 * SVG_MARGIN;
    let px = |v: f64| SVG_MARGIN + (v - x0) / (x1 - x0) * span;
    let py = |v: f64| SVG_SIZE - SVG_MARGIN - (v - y0) / (y1 - y0) * span;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        SVG_SIZE / 2.0,
        xml_escape(title)
    );
    let _ = writeln!(
        s,
        r##"<rect x="{SVG_MARGIN}" y="{SVG_MARGIN}" width="{span}" height="{span}" fill="none" stroke="#444"/>"##
    );
    for (label, lo, hi, x, y, anchor) in [
        (format!("u{}", ax + 1), x0, x1, SVG_SIZE / 2.0, SVG_SIZE - 12.0, "middle"),
        (format!("u{}", ay + 1), y0, y1, 12.0, SVG_SIZE / 2.0, "start"),
    ] {
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{label} [{}, {}]</text>"#,
            fmt_short(lo),
            fmt_short(hi)
        );
    }
    let _ = writeln!(s, r##"<g fill="#1f5fa8" fill-opacity="0.5">"##);
    for p in points {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="0.8"/>"#, px(p[ax]), py(p[ay]));
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn fmt_short(v: f64) -> String {
    format!("{v:.4}")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Default coordinate pair: (x, z) in three dimensions, (x, y) in two.
pub fn default_projection(dim: usize) -> [usize; 2] {
    if dim >= 3 {
        [0, 2]
    } else {
        [0, 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::SystemId;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(0.1), "0.1");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_sig(2.0 / 3.0 * 1e-7), "6.66666666666667e-8");
        assert_eq!(fmt_sig(123456.789), "123456.789");
        assert_eq!(fmt_sig(1e20), "1e20");
        assert_eq!(fmt_sig(std::f64::consts::PI), "3.14159265358979");
        for x in [1.2345678901234567e-3, 9.87654321e12, -4.4e-9, 0.9061938024368232] {
            let back: f64 = fmt_sig(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-14, "{x}");
        }
    }

    fn small(system: SystemId) -> RunConfig {
        RunConfig {
            system,
            n_factors: 200,
            ..RunConfig::default()
        }
    }

    #[test]
    fn les_csv_layout_for_flows_and_maps() {
        let flow = run_les(&small(SystemId::Lorenz)).unwrap();
        let csv = flow.csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,LE1,LE2,LE3,j,s,d"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 7);
        assert_eq!(row[0], "20");
        assert!(lines.next().is_none());

        let map = run_les(&small(SystemId::Henon)).unwrap();
        assert!(map
            .csv()
            .starts_with("iterations,LE1_per_iteration,LE2_per_iteration,j,s,d\n"));
        assert_eq!(map.spectrum.t, 200.0);
    }

    #[test]
    fn identical_configs_give_identical_output() {
        let cfg = small(SystemId::Lorenz);
        let a = run_les(&cfg).unwrap();
        let b = run_les(&cfg).unwrap();
        assert_eq!(a.csv(), b.csv());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn les_report_round_trips_through_json() {
        let r = run_les(&small(SystemId::Henon)).unwrap();
        let back: LesReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn transient_moves_the_start() {
        let cfg = RunConfig {
            transient: Some(5.0),
            ..small(SystemId::Lorenz)
        };
        let r = run_les(&cfg).unwrap();
        assert_eq!(r.seed, vec![1.0, 1.0, 1.0]);
        assert_ne!(r.spectrum.u0, r.seed);
        let bad = RunConfig {
            transient: Some(2.5),
            ..small(SystemId::Henon)
        };
        assert!(run_les(&bad).is_err());
    }

    #[test]
    fn sweep_on_a_stable_system_reports_no_attractor() {
        let cfg = RunConfig {
            params: [("r".to_string(), 0.5)].into(),
            transient: Some(100.0),
            t_sample: 20.0,
            sample_every: 0.1,
            ..small(SystemId::Lorenz)
        };
        let err = run_sweep(&cfg).unwrap_err();
        assert!(matches!(err, Error::NoAttractor(_)));
        assert!(!err.is_input_error());
    }

    #[test]
    fn henon_sweep_table_and_round_trip() {
        let cfg = RunConfig {
            transient: Some(100.0),
            t_sample: 2000.0,
            sample_every: 1.0,
            grid: 5,
            ..small(SystemId::Henon)
        };
        let (out, sample) = run_sweep(&cfg).unwrap();
        assert_eq!(out.points.len(), 5);
        assert_eq!(out.classification, Classification::Pending);
        assert_eq!(sample.points.len(), out.sample_size);
        let csv = out.csv();
        assert!(csv.starts_with("index,iterations,u1,u2,LE1_per_iteration,LE2_per_iteration,j,s,d\n"));
        assert_eq!(csv.lines().count(), 6);
        assert!(out.points.iter().all(|p| p.ky.d <= out.max_dimension()));
        let back: SweepOutcome = serde_json::from_str(&serde_json::to_string(&out).unwrap()).unwrap();
        assert_eq!(back, out);
    }

    #[test]
    fn svg_has_one_marker_per_point() {
        let pts = vec![vec![0.0, 1.0, 2.0], vec![1.0, -1.0, 3.0], vec![0.5, 0.0, 2.5]];
        let svg = svg_scatter(&pts, [0, 2], "a < b");
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("a &lt; b"));
        // degenerate axis still yields finite coordinates
        let flat = svg_scatter(&[vec![1.0, 1.0]], [0, 1], "");
        assert!(!flat.contains("NaN"));
    }
}
