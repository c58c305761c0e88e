//! Time evolution: an embedded Dormand–Prince 5(4) integrator for flows
//! (optionally carrying the fundamental matrix along), exact iteration for
//! maps, and chaining of per-segment fundamental-matrix factors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smallmat::{SquareMatrix, MAX_DIM};
use crate::systems::{Kind, SystemSpec};

/// Longest extended state: n + n² for n = 4.
const MAX_EXT: usize = MAX_DIM + MAX_DIM * MAX_DIM;

/// Error-control settings of the adaptive integrator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_step: f64,
    /// Upper bound on the step; segment integration additionally caps it at the segment length.
    #[serde(default)]
    pub max_step: Option<f64>,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
}

fn default_max_steps() -> usize {
    50_000_000
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-8,
            initial_step: 1e-9,
            max_step: None,
            max_steps: default_max_steps(),
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.rel_tol) && ok(self.abs_tol) && ok(self.initial_step)) {
            return Err(Error::InvalidArgument(
                "integrator tolerances and initial step must be positive".into(),
            ));
        }
        if let Some(h) = self.max_step {
            if !(h > 0.0) {
                return Err(Error::InvalidArgument("max_step must be positive".into()));
            }
        }
        Ok(())
    }
}

// Dormand–Prince 5(4) tableau; stage times are unused since every system is autonomous.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// error coefficients: 5th-order weights minus embedded 4th-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const ALPHA: f64 = 0.2 - BETA * 0.75;

/// Adaptive DOPRI5 stepper with PI step-size control over a fixed-length state.
struct Dopri<'a, F> {
    rhs: F,
    cfg: &'a IntegratorConfig,
    m: usize,
    /// Suggested next step, carried across calls.
    h: f64,
    err_old: f64,
    steps: usize,
}

impl<'a, F: FnMut(&[f64], &mut [f64])> Dopri<'a, F> {
    fn new(rhs: F, m: usize, cfg: &'a IntegratorConfig) -> Self {
        Self {
            rhs,
            cfg,
            m,
            h: cfg.initial_step,
            err_old: 1e-4,
            steps: 0,
        }
    }

    /// Advances `y` from `t0` to `t1` exactly.
    fn advance(&mut self, y: &mut [f64], t0: f64, t1: f64) -> Result<()> {
        let m = self.m;
        let span = t1 - t0;
        if span <= 0.0 {
            return Ok(());
        }
        let h_max = self.cfg.max_step.unwrap_or(f64::INFINITY).min(span);
        let mut k1 = [0.0; MAX_EXT];
        let mut k2 = [0.0; MAX_EXT];
        let mut k3 = [0.0; MAX_EXT];
        let mut k4 = [0.0; MAX_EXT];
        let mut k5 = [0.0; MAX_EXT];
        let mut k6 = [0.0; MAX_EXT];
        let mut k7 = [0.0; MAX_EXT];
        let mut tmp = [0.0; MAX_EXT];
        let mut y_new = [0.0; MAX_EXT];

        let mut t = t0;
        let mut h = self.h.min(h_max);
        (self.rhs)(&y[..m], &mut k1[..m]);
        let mut last_rejected = false;
        loop {
            if self.steps >= self.cfg.max_steps {
                return Err(Error::TooManySteps { t });
            }
            let remaining = t1 - t;
            // stretch the step rather than leave a sliver below the resolution of t
            let sliver = 64.0 * f64::EPSILON * t1.abs().max(1.0);
            let mut last = false;
            if h >= remaining - sliver {
                h = remaining;
                last = true;
            } else if h <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t });
            }

            for i in 0..m {
                tmp[i] = y[i] + h * A21 * k1[i];
            }
            (self.rhs)(&tmp[..m], &mut k2[..m]);
            for i in 0..m {
                tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
            }
            (self.rhs)(&tmp[..m], &mut k3[..m]);
            for i in 0..m {
                tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            (self.rhs)(&tmp[..m], &mut k4[..m]);
            for i in 0..m {
                tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            (self.rhs)(&tmp[..m], &mut k5[..m]);
            for i in 0..m {
                tmp[i] = y[i]
                    + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            (self.rhs)(&tmp[..m], &mut k6[..m]);
            for i in 0..m {
                y_new[i] = y[i]
                    + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
            }
            (self.rhs)(&y_new[..m], &mut k7[..m]);
            self.steps += 1;

            let mut err = 0.0;
            for i in 0..m {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let sc = self.cfg.abs_tol + self.cfg.rel_tol * y[i].abs().max(y_new[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / m as f64).sqrt();
            if !err.is_finite() {
                if y_new[..m].iter().any(|v| !v.is_finite()) && h <= self.cfg.initial_step {
                    return Err(Error::NonFinite { t });
                }
                h *= FAC_MIN;
                last_rejected = true;
                continue;
            }

            if err <= 1.0 {
                let mut fac = err.powf(ALPHA) * self.err_old.powf(-BETA) / SAFETY;
                fac = fac.clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                let mut h_next = h / fac;
                if last_rejected {
                    h_next = h_next.min(h);
                }
                self.err_old = err.max(1e-4);
                y[..m].copy_from_slice(&y_new[..m]);
                k1[..m].copy_from_slice(&k7[..m]);
                if y[..m].iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite { t: t + h });
                }
                if last {
                    // keep the suggestion from the unclipped controller
                    self.h = h_next.max(h);
                    return Ok(());
                }
                t += h;
                h = h_next.min(h_max);
                last_rejected = false;
            } else {
                let fac = (err.powf(ALPHA) / SAFETY).min(1.0 / FAC_MIN);
                h /= fac;
                last_rejected = true;
            }
        }
    }
}

/// State plus the fundamental matrix relative to the segment start.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedState {
    pub u: Vec<f64>,
    pub phi: SquareMatrix,
}

fn require_flow(spec: &SystemSpec) -> Result<()> {
    if spec.kind() != Kind::Flow {
        return Err(Error::WrongKind {
            expected: "flow",
            got: spec.kind().name(),
        });
    }
    Ok(())
}

fn check_state(spec: &SystemSpec, u0: &[f64]) -> Result<()> {
    if u0.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: u0.len(),
        });
    }
    if u0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { t: 0.0 });
    }
    Ok(())
}

/// Right-hand side of the variational system: u' = f(u), Φ' = J(u)Φ.
fn extended_rhs(spec: &SystemSpec) -> impl FnMut(&[f64], &mut [f64]) + '_ {
    let n = spec.dim();
    move |y: &[f64], dy: &mut [f64]| {
        let u = &y[..n];
        spec.eval(u, &mut dy[..n]);
        let j = spec.jac(u);
        for r in 0..n {
            for c in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += j[(r, k)] * y[n + k * n + c];
                }
                dy[n + r * n + c] = s;
            }
        }
    }
}

/// Integrates state and fundamental matrix (starting at identity) over `dt`.
pub fn integrate_segment(
    spec: &SystemSpec,
    u0: &[f64],
    dt: f64,
    cfg: &IntegratorConfig,
) -> Result<ExtendedState> {
    require_flow(spec)?;
    check_state(spec, u0)?;
    cfg.validate()?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let n = spec.dim();
    let mut y = [0.0; MAX_EXT];
    load_extended(&mut y, u0, n);
    let mut stepper = Dopri::new(extended_rhs(spec), n + n * n, cfg);
    stepper.advance(&mut y, 0.0, dt)?;
    Ok(unload_extended(&y, n))
}

fn load_extended(y: &mut [f64; MAX_EXT], u: &[f64], n: usize) {
    y[..n].copy_from_slice(u);
    for r in 0..n {
        for c in 0..n {
            y[n + r * n + c] = if r == c { 1.0 } else { 0.0 };
        }
    }
}

fn unload_extended(y: &[f64; MAX_EXT], n: usize) -> ExtendedState {
    let phi = SquareMatrix::from_row_slice(n, &y[n..n + n * n]).expect("n*n entries");
    ExtendedState {
        u: y[..n].to_vec(),
        phi,
    }
}

/// Per-segment fundamental-matrix factors along one orbit, oldest first.
///
/// The ordered product `factors[last] ⋯ factors[0]` is the fundamental
/// matrix over the whole horizon.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorSequence {
    pub factors: Vec<SquareMatrix>,
    /// Time per segment for flows, iterations per segment for maps.
    pub seg_len: f64,
    pub origin: Vec<f64>,
    /// State at the end of the last segment.
    pub end: Vec<f64>,
    pub kind: Kind,
}

impl FactorSequence {
    /// Builds a sequence directly from factors (used for synthetic chains).
    pub fn from_factors(factors: Vec<SquareMatrix>, seg_len: f64) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("empty factor sequence".into()));
        }
        let n = factors[0].dim();
        if factors.iter().any(|f| f.dim() != n) {
            return Err(Error::InvalidArgument("factors differ in dimension".into()));
        }
        if factors.iter().any(|f| !f.is_finite()) {
            return Err(Error::InvalidArgument("non-finite factor".into()));
        }
        if !(seg_len > 0.0 && seg_len.is_finite()) {
            return Err(Error::InvalidArgument(format!("seg_len must be positive, got {seg_len}")));
        }
        Ok(Self {
            factors,
            seg_len,
            origin: vec![0.0; n],
            end: vec![0.0; n],
            kind: Kind::Flow,
        })
    }

    pub fn dim(&self) -> usize {
        self.factors[0].dim()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Total horizon `seg_len · n_factors`.
    pub fn horizon(&self) -> f64 {
        self.seg_len * self.factors.len() as f64
    }

    /// Explicit ordered product; overflows for long chaotic horizons.
    pub fn explicit_product(&self) -> SquareMatrix {
        self.factors
            .iter()
            .fold(SquareMatrix::identity(self.dim()), |acc, f| f * &acc)
    }
}

fn map_iterations(seg_len: f64) -> Result<usize> {
    if !(seg_len >= 1.0 && seg_len.fract() == 0.0) {
        return Err(Error::InvalidArgument(format!(
            "map segments are whole iterations >= 1, got {seg_len}"
        )));
    }
    Ok(seg_len as usize)
}

/// Chains `n_factors` segments along the orbit of `u0`, resetting the
/// fundamental matrix to the identity at the start of each.
pub fn factor_sequence(
    spec: &SystemSpec,
    u0: &[f64],
    seg_len: f64,
    n_factors: usize,
    cfg: &IntegratorConfig,
) -> Result<FactorSequence> {
    check_state(spec, u0)?;
    if n_factors == 0 {
        return Err(Error::InvalidArgument("n_factors must be >= 1".into()));
    }
    let n = spec.dim();
    let mut factors = Vec::with_capacity(n_factors);
    let mut u = u0.to_vec();
    match spec.kind() {
        Kind::Flow => {
            cfg.validate()?;
            if !(seg_len > 0.0 && seg_len.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "seg_len must be positive, got {seg_len}"
                )));
            }
            let mut stepper = Dopri::new(extended_rhs(spec), n + n * n, cfg);
            let mut y = [0.0; MAX_EXT];
            for k in 0..n_factors {
                load_extended(&mut y, &u, n);
                let t0 = seg_len * k as f64;
                stepper.advance(&mut y, t0, t0 + seg_len)?;
                let seg = unload_extended(&y, n);
                factors.push(seg.phi);
                u = seg.u;
            }
        }
        Kind::Map => {
            let iters = map_iterations(seg_len)?;
            let mut next = vec![0.0; n];
            for k in 0..n_factors {
                let mut phi = SquareMatrix::identity(n);
                for i in 0..iters {
                    phi = &spec.jac(&u) * &phi;
                    spec.eval(&u, &mut next);
                    std::mem::swap(&mut u, &mut next);
                    if u.iter().any(|v| !v.is_finite()) {
                        return Err(Error::NonFinite {
                            t: (k * iters + i + 1) as f64,
                        });
                    }
                }
                factors.push(phi);
            }
        }
    }
    Ok(FactorSequence {
        factors,
        seg_len,
        origin: u0.to_vec(),
        end: u,
        kind: spec.kind(),
    })
}

/// Advances the state only (no variational part) by `dt`; for maps `dt`
/// is a whole number of iterations.
pub fn advance(spec: &SystemSpec, u0: &[f64], dt: f64, cfg: &IntegratorConfig) -> Result<Vec<f64>> {
    let mut samples = orbit(spec, u0, dt, dt, cfg)?;
    Ok(samples.pop().expect("two samples").1)
}

/// Samples the orbit of `u0` at times 0, `sample_every`, 2·`sample_every`, …,
/// plus the final time `t_total` when it is not a multiple of the cadence.
pub fn orbit(
    spec: &SystemSpec,
    u0: &[f64],
    t_total: f64,
    sample_every: f64,
    cfg: &IntegratorConfig,
) -> Result<Vec<(f64, Vec<f64>)>> {
    check_state(spec, u0)?;
    if !(t_total > 0.0 && t_total.is_finite()) {
        return Err(Error::InvalidArgument(format!("t_total must be positive, got {t_total}")));
    }
    if !(sample_every > 0.0 && sample_every.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sample_every must be positive, got {sample_every}"
        )));
    }
    let n = spec.dim();
    let mut out = vec![(0.0, u0.to_vec())];
    match spec.kind() {
        Kind::Flow => {
            cfg.validate()?;
            let mut stepper = Dopri::new(|y: &[f64], dy: &mut [f64]| spec.eval(y, dy), n, cfg);
            let mut y = [0.0; MAX_EXT];
            y[..n].copy_from_slice(u0);
            let mut t = 0.0;
            let mut k = 1usize;
            loop {
                let target = (k as f64 * sample_every).min(t_total);
                let target = if t_total - target <= 1e-12 * t_total { t_total } else { target };
                stepper.advance(&mut y, t, target)?;
                t = target;
                out.push((t, y[..n].to_vec()));
                if t >= t_total {
                    break;
                }
                k += 1;
            }
        }
        Kind::Map => {
            let total = map_iterations(t_total)?;
            let every = map_iterations(sample_every)?;
            let mut u = u0.to_vec();
            let mut next = vec![0.0; n];
            for i in 1..=total {
                spec.eval(&u, &mut next);
                std::mem::swap(&mut u, &mut next);
                if u.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite { t: i as f64 });
                }
                if i % every == 0 || i == total {
                    out.push((i as f64, u.clone()));
                }
            }
        }
    }
    Ok(out)
}
