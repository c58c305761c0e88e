//! Run configuration shared by the command-line front end: a flat JSON
//! object whose every field has a default.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::atlas::{ExcitationOptions, SettleOptions};
use crate::error::{Error, Result};
use crate::flow::IntegratorConfig;
use crate::systems::{Kind, SystemId, SystemSpec};

/// Initial point of the hidden attractor of the generalized Lorenz system at
/// σ = 4, r = 700, b = 1, A = 0.0052.
pub const GD_HIDDEN_SEED: [f64; 3] = [-14.551336132013954, -173.86811769236883, 718.92035664071227];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemId,
    pub params: BTreeMap<String, f64>,
    pub seed: Option<Vec<f64>>,
    /// Segment length; whole iterations for maps. Defaults to 0.1 for flows and 1 for maps.
    pub seg_len: Option<f64>,
    pub n_factors: usize,
    pub sweeps: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_step: f64,
    pub max_step: Option<f64>,
    /// Discarded before sampling. Defaults to 0 for `les` and 500 for `sweep`.
    pub transient: Option<f64>,
    pub grid: usize,
    pub t_sample: f64,
    pub sample_every: f64,
    pub epsilon: f64,
    pub trials: usize,
    pub delta_attr: f64,
    pub trial_transient: f64,
    pub trial_window: f64,
    pub divergence_bound: f64,
    pub eps_eq: f64,
    /// Coordinates drawn by the SVG scatter.
    pub projection: Option<[usize; 2]>,
    pub jobs: Option<usize>,
    pub svg: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let settle = SettleOptions::default();
        let excite = ExcitationOptions::default();
        Self {
            system: SystemId::Lorenz,
            params: BTreeMap::new(),
            seed: None,
            seg_len: None,
            n_factors: 10_000,
            sweeps: 3,
            rel_tol: 1e-8,
            abs_tol: 1e-8,
            initial_step: 1e-9,
            max_step: None,
            transient: None,
            grid: 50,
            t_sample: 500.0,
            sample_every: 0.01,
            epsilon: excite.epsilon_scale,
            trials: excite.trials,
            delta_attr: excite.delta_attr,
            trial_transient: excite.trial_transient,
            trial_window: excite.trial_window,
            divergence_bound: settle.divergence_bound,
            eps_eq: settle.eps_eq,
            projection: None,
            jobs: None,
            svg: None,
        }
    }
}

pub const LES_TRANSIENT: f64 = 0.0;
pub const SWEEP_TRANSIENT: f64 = 500.0;

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn spec(&self) -> Result<SystemSpec> {
        SystemSpec::with_overrides(self.system, &self.params)
    }

    pub fn integrator(&self) -> Result<IntegratorConfig> {
        let cfg = IntegratorConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            initial_step: self.initial_step,
            max_step: self.max_step,
            ..IntegratorConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn seg_len_for(&self, kind: Kind) -> f64 {
        self.seg_len.unwrap_or(match kind {
            Kind::Flow => 0.1,
            Kind::Map => 1.0,
        })
    }

    /// The configured seed, or the catalog default for the system.
    pub fn seed_for(&self, spec: &SystemSpec) -> Result<Vec<f64>> {
        let seed = self.seed.clone().unwrap_or_else(|| default_seed(spec));
        if seed.len() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                got: seed.len(),
            });
        }
        if seed.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("seed must be finite".into()));
        }
        Ok(seed)
    }

    pub fn settle_options(&self) -> SettleOptions {
        SettleOptions {
            divergence_bound: self.divergence_bound,
            eps_eq: self.eps_eq,
        }
    }

    pub fn excitation_options(&self) -> ExcitationOptions {
        ExcitationOptions {
            epsilon_scale: self.epsilon,
            trials: self.trials,
            delta_attr: self.delta_attr,
            trial_transient: self.trial_transient,
            trial_window: self.trial_window,
            sample_every: 0.05,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
            }
        };
        for (name, v) in [
            ("t_sample", self.t_sample),
            ("sample_every", self.sample_every),
            ("epsilon", self.epsilon),
            ("delta_attr", self.delta_attr),
            ("trial_window", self.trial_window),
            ("divergence_bound", self.divergence_bound),
            ("eps_eq", self.eps_eq),
        ] {
            positive(name, v)?;
        }
        if let Some(s) = self.seg_len {
            positive("seg_len", s)?;
        }
        if let Some(t) = self.transient {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidArgument(format!("transient must be >= 0, got {t}")));
            }
        }
        if !(self.trial_transient >= 0.0) {
            return Err(Error::InvalidArgument("trial_transient must be >= 0".into()));
        }
        for (name, v) in [
            ("n_factors", self.n_factors),
            ("sweeps", self.sweeps),
            ("grid", self.grid),
            ("trials", self.trials),
        ] {
            if v == 0 {
                return Err(Error::InvalidArgument(format!("{name} must be >= 1")));
            }
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidArgument("jobs must be >= 1".into()));
        }
        self.integrator()?;
        let spec = self.spec()?;
        if let Some([a, b]) = self.projection {
            if a >= spec.dim() || b >= spec.dim() {
                return Err(Error::InvalidArgument(format!(
                    "projection axes must be < {}",
                    spec.dim()
                )));
            }
        }
        self.seed_for(&spec)?;
        Ok(())
    }
}

/// Starting state used when none is configured.
pub fn default_seed(spec: &SystemSpec) -> Vec<f64> {
    match spec.id() {
        SystemId::GeneralizedLorenz => GD_HIDDEN_SEED.to_vec(),
        SystemId::GlukhovskyDolzhansky => {
            // inverse of gd_state_to_generalized_lorenz: (x, y, z) = (X, R − kZ, kY)
            let v = spec.values();
            let (sigma, big_r, a0) = (v[0], v[1], v[2]);
            let k = sigma / (a0 * big_r + 1.0);
            let [x, y, z] = GD_HIDDEN_SEED;
            vec![x, big_r - k * z, k * y]
        }
        SystemId::Henon => vec![0.0, 0.0],
        _ => vec![1.0, 1.0, 1.0],
    }
}
