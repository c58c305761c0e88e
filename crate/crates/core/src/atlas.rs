//! Locating attractors and deciding whether they are self-excited (reachable
//! from a small neighborhood of some equilibrium) or hidden.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{orbit, IntegratorConfig};
use crate::smallmat::eigen_general;
use crate::systems::{Equilibrium, Kind, SystemSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    /// Settled but not yet tested against equilibrium neighborhoods.
    Pending,
    SelfExcited { equilibria: Vec<String> },
    Hidden,
    ConvergedToEquilibrium { equilibrium: String },
    Unbounded { reason: String },
}

/// Outcome of one perturbed start near an equilibrium.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub equilibrium: String,
    pub start: Vec<f64>,
    pub excites: bool,
    /// Upper estimate of the one-sided distance from the trial cloud to the sample, capped at the threshold.
    pub distance: Option<f64>,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttractorSample {
    pub seed: Vec<f64>,
    pub transient: f64,
    pub points: Vec<Vec<f64>>,
    pub classification: Classification,
    #[serde(default)]
    pub trials: Vec<Trial>,
    /// Perturbation radius scale used by the trials.
    #[serde(default)]
    pub epsilon_scale: Option<f64>,
}

impl AttractorSample {
    pub fn is_bounded(&self) -> bool {
        !matches!(self.classification, Classification::Unbounded { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SettleOptions {
    pub divergence_bound: f64,
    pub eps_eq: f64,
}

impl Default for SettleOptions {
    fn default() -> Self {
        Self {
            divergence_bound: 1e6,
            eps_eq: 1e-6,
        }
    }
}

fn norm(u: &[f64]) -> f64 {
    u.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

enum Run {
    Points(Vec<Vec<f64>>),
    Escaped(String),
}

/// Integrates `transient`, discards it, then samples `t_sample` at `sample_every`.
fn run(
    spec: &SystemSpec,
    seed: &[f64],
    transient: f64,
    t_sample: f64,
    sample_every: f64,
    cfg: &IntegratorConfig,
    bound: f64,
) -> Result<Run> {
    let escaped = |pts: &[(f64, Vec<f64>)]| {
        pts.iter()
            .find(|(_, u)| !(norm(u) <= bound))
            .map(|(t, _)| format!("norm exceeded {bound:e} at t = {t}"))
    };
    let start = if transient > 0.0 {
        match orbit(spec, seed, transient, sample_every.min(transient), cfg) {
            Ok(pre) => {
                if let Some(msg) = escaped(&pre) {
                    return Ok(Run::Escaped(msg));
                }
                pre.last().expect("nonempty").1.clone()
            }
            Err(e @ Error::InvalidArgument(_)) | Err(e @ Error::DimensionMismatch { .. }) => {
                return Err(e)
            }
            Err(e) => return Ok(Run::Escaped(e.to_string())),
        }
    } else {
        seed.to_vec()
    };
    match orbit(spec, &start, t_sample, sample_every, cfg) {
        Ok(samples) => {
            if let Some(msg) = escaped(&samples) {
                return Ok(Run::Escaped(msg));
            }
            Ok(Run::Points(samples.into_iter().map(|(_, u)| u).collect()))
        }
        Err(e @ Error::InvalidArgument(_)) => Err(e),
        Err(e) => Ok(Run::Escaped(e.to_string())),
    }
}

/// Equilibrium that the tail of `points` stays close to, if any.
fn settled_at<'a>(spec: &SystemSpec, eqs: &'a [Equilibrium], points: &[Vec<f64>], eps: f64) -> Option<&'a Equilibrium> {
    let tail = &points[points.len() - points.len().div_ceil(4)..];
    let end = points.last()?;
    eqs.iter().find(|e| {
        tail.iter().all(|u| dist(u, &e.coordinates) <= eps)
            && spec.equilibrium_residual(end).is_ok_and(|r| r <= 10.0 * eps)
    })
}

/// Runs from `seed` past a transient and samples the orbit.
///
/// The result is `Unbounded` when the norm passes the divergence bound or the
/// integrator fails, `ConvergedToEquilibrium` when the last quarter of the
/// samples stays within `eps_eq` of an equilibrium, and `Pending` otherwise.
pub fn settle(
    spec: &SystemSpec,
    seed: &[f64],
    transient: f64,
    t_sample: f64,
    sample_every: f64,
    cfg: &IntegratorConfig,
    opts: &SettleOptions,
) -> Result<AttractorSample> {
    if !(transient >= 0.0 && t_sample > 0.0) {
        return Err(Error::InvalidArgument(
            "transient must be >= 0 and t_sample > 0".into(),
        ));
    }
    if seed.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: seed.len(),
        });
    }
    let (points, classification) =
        match run(spec, seed, transient, t_sample, sample_every, cfg, opts.divergence_bound)? {
            Run::Escaped(reason) => (Vec::new(), Classification::Unbounded { reason }),
            Run::Points(points) => {
                let eqs = spec.equilibria();
                let c = match settled_at(spec, &eqs, &points, opts.eps_eq) {
                    Some(e) => Classification::ConvergedToEquilibrium {
                        equilibrium: e.label.clone(),
                    },
                    None => Classification::Pending,
                };
                (points, c)
            }
        };
    Ok(AttractorSample {
        seed: seed.to_vec(),
        transient,
        points,
        classification,
        trials: Vec::new(),
        epsilon_scale: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcitationOptions {
    /// Perturbation radius is `epsilon_scale · (1 + ‖equilibrium‖)`.
    pub epsilon_scale: f64,
    pub trials: usize,
    pub delta_attr: f64,
    pub trial_transient: f64,
    pub trial_window: f64,
    pub sample_every: f64,
}

impl Default for ExcitationOptions {
    fn default() -> Self {
        Self {
            epsilon_scale: 1e-3,
            trials: 8,
            delta_attr: 1.0,
            trial_transient: 500.0,
            trial_window: 50.0,
            sample_every: 0.05,
        }
    }
}

/// Unit directions for perturbing around an equilibrium: up to half from the
/// unstable eigenvectors (real and imaginary parts, both signs), the rest
/// along the coordinate axes.
pub fn perturbation_directions(spec: &SystemSpec, eq: &Equilibrium, count: usize) -> Vec<Vec<f64>> {
    let n = spec.dim();
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    if let Ok(j) = spec.jacobian(&eq.coordinates) {
        for lambda in eigen_general(&j) {
            let unstable = match spec.kind() {
                Kind::Flow => lambda.re > 0.0,
                Kind::Map => lambda.norm() > 1.0,
            };
            if !unstable || lambda.im < 0.0 {
                continue;
            }
            for part in unstable_vectors(&j, lambda) {
                for sign in [1.0, -1.0] {
                    if dirs.len() < count / 2 {
                        dirs.push(part.iter().map(|v| sign * v).collect());
                    }
                }
            }
        }
    }
    let mut axis = 0;
    while dirs.len() < count {
        let mut e = vec![0.0; n];
        e[(axis / 2) % n] = if axis % 2 == 0 { 1.0 } else { -1.0 };
        dirs.push(e);
        axis += 1;
    }
    dirs
}

/// Unit real vectors spanning the eigenspace of `lambda`, from the null space of `J − λI`.
fn unstable_vectors(j: &crate::smallmat::SquareMatrix, lambda: num_complex::Complex64) -> Vec<Vec<f64>> {
    use num_complex::Complex64;
    let n = j.dim();
    // Gaussian elimination with full pivoting on the complex matrix J − λI.
    let mut m: Vec<Vec<Complex64>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| Complex64::new(j[(r, c)], 0.0) - if r == c { lambda } else { Complex64::new(0.0, 0.0) })
                .collect()
        })
        .collect();
    let scale = j.max_abs().max(1.0);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm())) else {
            break;
        };
        if m[p][col].norm() <= 1e-9 * scale {
            continue;
        }
        m.swap(row, p);
        for r in 0..n {
            if r != row {
                let f = m[r][col] / m[row][col];
                for c in 0..n {
                    let v = m[row][c];
                    m[r][c] -= f * v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let Some(free) = (0..n).find(|c| !pivots.contains(c)) else {
        return Vec::new();
    };
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[free] = Complex64::new(1.0, 0.0);
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[r][free] / m[r][pc];
    }
    let unit = |w: Vec<f64>| {
        let l = norm(&w);
        (l > 0.0).then(|| w.into_iter().map(|x| x / l).collect::<Vec<f64>>())
    };
    let mut out: Vec<Vec<f64>> = Vec::new();
    out.extend(unit(v.iter().map(|z| z.re).collect()));
    if lambda.im != 0.0 {
        out.extend(unit(v.iter().map(|z| z.im).collect()));
    }
    out
}

/// One-sided distance check: every trial point has a sample point within `delta`.
fn within_reach(trial: &[Vec<f64>], sample: &[Vec<f64>], delta: f64) -> (bool, f64) {
    let mut worst: f64 = 0.0;
    for p in trial {
        let mut best = f64::INFINITY;
        for q in sample {
            let d = dist(p, q);
            if d < best {
                best = d;
                if best <= delta * 0.25 {
                    break;
                }
            }
        }
        worst = worst.max(best);
        if worst > delta {
            return (false, delta);
        }
    }
    (true, worst)
}

/// Perturbs every equilibrium and checks whether any trial lands on the sample.
pub fn classify_excitation(
    spec: &SystemSpec,
    sample: &AttractorSample,
    opts: &ExcitationOptions,
    cfg: &IntegratorConfig,
) -> Result<AttractorSample> {
    if !matches!(sample.classification, Classification::Pending) {
        return Err(Error::InvalidArgument(format!(
            "only a bounded non-equilibrium sample can be classified, got {:?}",
            sample.classification
        )));
    }
    if sample.points.is_empty() || opts.trials == 0 {
        return Err(Error::InsufficientPoints {
            needed: 1,
            have: sample.points.len(),
        });
    }
    let eqs = spec.equilibria();
    let mut starts = Vec::new();
    for eq in &eqs {
        let eps = opts.epsilon_scale * (1.0 + norm(&eq.coordinates));
        for d in perturbation_directions(spec, eq, opts.trials) {
            let start: Vec<f64> = eq.coordinates.iter().zip(&d).map(|(c, v)| c + eps * v).collect();
            starts.push((eq.label.clone(), start));
        }
    }
    let trials: Vec<Trial> = starts
        .into_par_iter()
        .map(|(label, start)| {
            let outcome = run(
                spec,
                &start,
                opts.trial_transient,
                opts.trial_window,
                opts.sample_every,
                cfg,
                1e6,
            );
            match outcome {
                Ok(Run::Points(points)) => {
                    let (excites, distance) = within_reach(&points, &sample.points, opts.delta_attr);
                    Trial {
                        equilibrium: label,
                        start,
                        excites,
                        distance: Some(distance),
                        failure: None,
                    }
                }
                Ok(Run::Escaped(reason)) => Trial {
                    equilibrium: label,
                    start,
                    excites: false,
                    distance: None,
                    failure: Some(reason),
                },
                Err(e) => Trial {
                    equilibrium: label,
                    start,
                    excites: false,
                    distance: None,
                    failure: Some(e.to_string()),
                },
            }
        })
        .collect();
    let exciting: Vec<String> = eqs
        .iter()
        .filter(|e| trials.iter().any(|t| t.excites && t.equilibrium == e.label))
        .map(|e| e.label.clone())
        .collect();
    let classification = if exciting.is_empty() {
        Classification::Hidden
    } else {
        Classification::SelfExcited {
            equilibria: exciting,
        }
    };
    Ok(AttractorSample {
        classification,
        trials,
        epsilon_scale: Some(opts.epsilon_scale),
        ..sample.clone()
    })
}

/// `k` points by uniform stride, starting with the first post-transient point.
pub fn grid_points(sample: &AttractorSample, k: usize) -> Result<Vec<Vec<f64>>> {
    let len = sample.points.len();
    if k == 0 || k > len {
        return Err(Error::InsufficientPoints { needed: k.max(1), have: len });
    }
    Ok((0..k).map(|i| sample.points[i * len / k].clone()).collect())
}
