//! The acceptance suite: reference values, oracle identities and property
//! checks, each reduced to a single pass/fail line with expected and
//! observed values.

use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::atlas::{classify_excitation, settle, Classification, ExcitationOptions, SettleOptions};
use crate::config::{RunConfig, GD_HIDDEN_SEED};
use crate::error::Result;
use crate::exact::{
    gd_exact, henon_exact, lorenz_exact, shimizu_morioka_exact, yang_exact, yang_gamma_quadratic, Outcome,
};
use crate::flow::{advance, factor_sequence, integrate_segment, FactorSequence, IntegratorConfig};
use crate::lyap::{
    equilibrium_exponents, finite_time_les, kaplan_yorke, kaplan_yorke_at, lce_column_exponents,
    local_dimension_at_equilibrium, product_svd, FtLeSpectrum,
};
use crate::report::{run_sweep, SweepOutcome};
use crate::smallmat::{omega_d, singular_values, SingularSpectrum, SquareMatrix};
use crate::systems::{SystemId, SystemSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub observed: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        format!(
            "[{tag}] {:>2} {:<36} expected: {} | observed: {} ({:.1} s)",
            self.id, self.name, self.expected, self.observed, self.seconds
        )
    }
}

/// Number of sweeps treated as converged on short chains.
pub const CONVERGED_SWEEPS: usize = 1000;

pub const LORENZ_SWEEP_GRID: usize = 50;
pub const LORENZ_SWEEP_FACTORS: usize = 5000;
pub const GD_FACTORS: usize = 10_000;
pub const HENON_ITERATIONS: usize = 100_000;

const CRITERIA: [(u8, &str); 11] = [
    (1, "lorenz exact formula"),
    (2, "equilibrium oracle identity"),
    (3, "lorenz stable equilibrium dimension"),
    (4, "lorenz attractor dimension"),
    (5, "glukhovsky-dolzhansky hidden attractor"),
    (6, "henon map"),
    (7, "shimizu-morioka formula"),
    (8, "yang gamma quadratic"),
    (9, "product svd oracle"),
    (10, "property suites"),
    (11, "self-excitation classification"),
];

struct Check {
    passed: bool,
    expected: String,
    observed: String,
}

impl Check {
    fn new(passed: bool, expected: impl Into<String>, observed: impl Into<String>) -> Self {
        Self {
            passed,
            expected: expected.into(),
            observed: observed.into(),
        }
    }

    fn error(expected: impl Into<String>, e: impl std::fmt::Display) -> Self {
        Self::new(false, expected, format!("error: {e}"))
    }
}

/// Runs shared between criteria, computed once.
pub struct Suite {
    fast: bool,
    lorenz_sweep: OnceLock<std::result::Result<SweepOutcome, String>>,
    gd_run: OnceLock<std::result::Result<FtLeSpectrum, String>>,
    henon_run: OnceLock<std::result::Result<FtLeSpectrum, String>>,
}

impl Suite {
    /// `fast` skips the long Lorenz attractor sweep.
    pub fn new(fast: bool) -> Self {
        Self {
            fast,
            lorenz_sweep: OnceLock::new(),
            gd_run: OnceLock::new(),
            henon_run: OnceLock::new(),
        }
    }

    pub fn ids() -> impl Iterator<Item = u8> {
        CRITERIA.iter().map(|c| c.0)
    }

    pub fn run_all(&self) -> Vec<CriterionResult> {
        Self::ids().map(|id| self.run(id)).collect()
    }

    /// Runs one criterion; panics on an id outside 1..=11.
    pub fn run(&self, id: u8) -> CriterionResult {
        let name = CRITERIA
            .iter()
            .find(|c| c.0 == id)
            .unwrap_or_else(|| panic!("no criterion {id}"))
            .1
            .to_string();
        let start = Instant::now();
        if id == 4 && self.fast {
            return CriterionResult {
                id,
                name,
                status: Status::Skipped,
                expected: "max d = 2.0565 ± 0.02".into(),
                observed: "skipped (--fast)".into(),
                seconds: 0.0,
            };
        }
        let check = match id {
            1 => lorenz_formula_values(),
            2 => equilibrium_oracle_identity(),
            3 => stable_equilibrium_dimension(),
            4 => self.lorenz_attractor_dimension(),
            5 => self.gd_hidden_attractor(),
            6 => self.henon(),
            7 => shimizu_morioka(),
            8 => yang_quadratic(),
            9 => product_svd_oracle(),
            10 => self.property_suites(),
            11 => self_excitation(),
            _ => unreachable!(),
        };
        CriterionResult {
            id,
            name,
            status: if check.passed { Status::Pass } else { Status::Fail },
            expected: check.expected,
            observed: check.observed,
            seconds: start.elapsed().as_secs_f64(),
        }
    }

    fn lorenz_sweep(&self) -> &std::result::Result<SweepOutcome, String> {
        self.lorenz_sweep.get_or_init(|| {
            let cfg = RunConfig {
                system: SystemId::Lorenz,
                n_factors: LORENZ_SWEEP_FACTORS,
                grid: LORENZ_SWEEP_GRID,
                ..RunConfig::default()
            };
            run_sweep(&cfg).map(|(o, _)| o).map_err(|e| e.to_string())
        })
    }

    fn gd_run(&self) -> &std::result::Result<FtLeSpectrum, String> {
        self.gd_run.get_or_init(|| {
            let spec = gd_spec();
            finite_time_les(&spec, &GD_HIDDEN_SEED, 0.1, GD_FACTORS, 3, &IntegratorConfig::default())
                .map_err(|e| e.to_string())
        })
    }

    fn henon_run(&self) -> &std::result::Result<FtLeSpectrum, String> {
        self.henon_run.get_or_init(|| {
            let spec = SystemSpec::henon(1.4, 0.3).expect("valid");
            finite_time_les(&spec, &[0.0, 0.0], 1.0, HENON_ITERATIONS, 3, &IntegratorConfig::default())
                .map_err(|e| e.to_string())
        })
    }

    fn lorenz_attractor_dimension(&self) -> Check {
        let expected = "max d = 2.0565 ± 0.02 (50 points, T = 500)";
        match self.lorenz_sweep() {
            Ok(o) => Check::new(
                (o.max_dimension() - 2.0565).abs() <= 0.02 && o.points.len() == LORENZ_SWEEP_GRID,
                expected,
                format!(
                    "max d = {:.4} at point {} ({} points, T = {})",
                    o.max_dimension(),
                    o.best.index,
                    o.points.len(),
                    o.best.spectrum.t
                ),
            ),
            Err(e) => Check::error(expected, e),
        }
    }

    fn gd_hidden_attractor(&self) -> Check {
        let expected = "exact 2.8917 ± 5e-4; d = 2.1322 ± 0.05; hidden; ΣLE = -6 ± 1e-3";
        let exact = match gd_exact(4.0, 700.0, 1.0, 0.0052) {
            Ok(r) => r,
            Err(e) => return Check::error(expected, e),
        };
        let spectrum = match self.gd_run() {
            Ok(s) => s,
            Err(e) => return Check::error(expected, e),
        };
        let ky = match kaplan_yorke(&spectrum.les) {
            Ok(k) => k,
            Err(e) => return Check::error(expected, e),
        };
        let class = match classify(&gd_spec(), &GD_HIDDEN_SEED) {
            Ok(c) => c,
            Err(e) => return Check::error(expected, e),
        };
        let exact_value = exact.value();
        let ok = exact_value.is_some_and(|v| (v - 2.8917).abs() <= 5e-4)
            && (ky.d - 2.1322).abs() <= 0.05
            && class == Classification::Hidden
            && (spectrum.sum() + 6.0).abs() <= 1e-3;
        Check::new(
            ok,
            expected,
            format!(
                "exact {}; d = {:.4}; {}; ΣLE = {:.6}",
                exact_value.map_or("n/a".to_string(), |v| format!("{v:.4}")),
                ky.d,
                class_name(&class),
                spectrum.sum()
            ),
        )
    }

    fn henon(&self) -> Check {
        let expected = "exact = oracle ± 1e-9; ΣLE over 1e5 iterations = ln 0.3 ± 1e-6";
        let (a, b) = (1.4, 0.3);
        let value = match henon_exact(a, b) {
            Ok(r) => r.value(),
            Err(e) => return Check::error(expected, e),
        };
        let oracle = henon_oracle(a, b);
        let sum = match self.henon_run() {
            Ok(s) => s.sum(),
            Err(e) => return Check::error(expected, e),
        };
        let ok = value.is_some_and(|v| (v - oracle).abs() <= 1e-9) && (sum - b.ln()).abs() <= 1e-6;
        Check::new(
            ok,
            expected,
            format!(
                "exact {} vs oracle {oracle:.10}; ΣLE - ln 0.3 = {:.2e}",
                value.map_or("n/a".to_string(), |v| format!("{v:.10}")),
                sum - b.ln()
            ),
        )
    }

    fn property_suites(&self) -> Check {
        let mut parts = Vec::new();
        let mut ok = true;
        let mut record = |name: &str, passed: bool, detail: String| {
            ok &= passed;
            parts.push(format!("{name} {} ({detail})", if passed { "ok" } else { "FAILED" }));
        };

        let (passed, detail) = horn_inequality();
        record("horn", passed, detail);
        let (passed, detail) = le_lce_bounds();
        record("le<=lce", passed, detail);
        let (passed, detail) = ky_convex_identity();
        record("ky-identity", passed, detail);
        let (passed, detail) = semigroup();
        record("semigroup", passed, detail);
        let (passed, detail) = cocycle();
        record("cocycle", passed, detail);

        let mut gaps = Vec::new();
        if !self.fast {
            match self.lorenz_sweep() {
                Ok(o) => {
                    let g = o
                        .points
                        .iter()
                        .map(|p| max_gap(&p.spectrum))
                        .fold(0.0, f64::max);
                    gaps.push(("lorenz sweep", Ok(g)));
                }
                Err(e) => gaps.push(("lorenz sweep", Err(e.clone()))),
            }
        }
        gaps.push(("gd", self.gd_run().as_ref().map(max_gap).map_err(Clone::clone)));
        gaps.push(("henon", self.henon_run().as_ref().map(max_gap).map_err(Clone::clone)));
        let mut detail = Vec::new();
        let mut bok = true;
        for (name, g) in gaps {
            match g {
                Ok(g) => {
                    bok &= g <= 1e-4;
                    detail.push(format!("{name} {g:.1e}"));
                }
                Err(e) => {
                    bok = false;
                    detail.push(format!("{name} error: {e}"));
                }
            }
        }
        record("benettin", bok, detail.join(", "));

        Check::new(
            ok,
            "horn, LE/LCE bounds, KY identity 1e-12, semigroup 1e-6, cocycle 1e-5, benettin gap 1e-4",
            parts.join("; "),
        )
    }
}

/// Runs the whole suite.
pub fn run_all(fast: bool) -> Vec<CriterionResult> {
    Suite::new(fast).run_all()
}

fn gd_spec() -> SystemSpec {
    SystemSpec::generalized_lorenz(4.0, 700.0, 1.0, 0.0052).expect("valid")
}

fn lorenz(sigma: f64, r: f64, b: f64) -> SystemSpec {
    SystemSpec::lorenz(sigma, r, b).expect("valid")
}

fn class_name(c: &Classification) -> String {
    match c {
        Classification::SelfExcited { equilibria } => format!("self-excited [{}]", equilibria.join(", ")),
        Classification::Hidden => "hidden".into(),
        Classification::Pending => "pending".into(),
        Classification::ConvergedToEquilibrium { equilibrium } => format!("converged to {equilibrium}"),
        Classification::Unbounded { reason } => format!("unbounded: {reason}"),
    }
}

fn classify(spec: &SystemSpec, seed: &[f64]) -> Result<Classification> {
    let cfg = IntegratorConfig::default();
    let run = RunConfig::default();
    let s = settle(spec, seed, 500.0, run.t_sample, run.sample_every, &cfg, &SettleOptions::default())?;
    if s.classification != Classification::Pending {
        return Ok(s.classification);
    }
    Ok(classify_excitation(spec, &s, &ExcitationOptions::default(), &cfg)?.classification)
}

fn max_gap(s: &FtLeSpectrum) -> f64 {
    s.les
        .iter()
        .zip(&s.qr_les)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Lorenz closed form evaluated directly.
fn lorenz_oracle(sigma: f64, r: f64, b: f64) -> f64 {
    let root = ((sigma - 1.0) * (sigma - 1.0) + 4.0 * sigma * r).sqrt();
    3.0 - 2.0 * (sigma + b + 1.0) / (sigma + 1.0 + root)
}

/// Hénon closed form from the saddle fixed point's eigenvalues.
fn henon_oracle(a: f64, b: f64) -> f64 {
    let x = ((b - 1.0) - ((b - 1.0).powi(2) + 4.0 * a).sqrt()) / 2.0;
    // μ² + 2xμ − b = 0
    let disc = (x * x + b).sqrt();
    let mu = [(-x + disc).abs(), (-x - disc).abs()];
    let (big, small) = if mu[0] > mu[1] { (mu[0], mu[1]) } else { (mu[1], mu[0]) };
    1.0 + big.ln() / small.ln().abs()
}

fn lorenz_formula_values() -> Check {
    let expected = "2.4013 ± 5e-4 (r = 28), 2.3727 ± 5e-4 (r = 24.5)";
    let mut values = Vec::new();
    for r in [28.0, 24.5] {
        match lorenz_exact(10.0, r, 8.0 / 3.0) {
            Ok(rep) => values.push(rep.value()),
            Err(e) => return Check::error(expected, e),
        }
    }
    let ok = values[0].is_some_and(|v| (v - 2.4013).abs() <= 5e-4)
        && values[1].is_some_and(|v| (v - 2.3727).abs() <= 5e-4);
    let show = |v: Option<f64>| v.map_or("not a formula outcome".to_string(), |v| format!("{v:.5}"));
    Check::new(ok, expected, format!("{}, {}", show(values[0]), show(values[1])))
}

/// The (σ, r, b) grid: four σ by five r, with b cycling.
pub fn oracle_grid() -> Vec<(f64, f64, f64)> {
    let bs = [1.0, 8.0 / 3.0, 4.0];
    let mut grid = Vec::new();
    for (i, sigma) in [5.0, 10.0, 16.0, 20.0].into_iter().enumerate() {
        for (k, r) in [15.0, 28.0, 45.0, 60.0, 99.96].into_iter().enumerate() {
            grid.push((sigma, r, bs[(i * 5 + k) % 3]));
        }
    }
    grid
}

fn equilibrium_oracle_identity() -> Check {
    let expected = "|d(S0) - formula| <= 1e-9 wherever the formula branch holds";
    let mut worst: f64 = 0.0;
    let mut tested = 0;
    for (sigma, r, b) in oracle_grid() {
        let rep = match lorenz_exact(sigma, r, b) {
            Ok(rep) => rep,
            Err(e) => return Check::error(expected, e),
        };
        if !rep.condition("formula_branch").is_some_and(|c| c.satisfied()) {
            continue;
        }
        let d = match local_dimension_at_equilibrium(&lorenz(sigma, r, b), &[0.0; 3]) {
            Ok(k) => k.d,
            Err(e) => return Check::error(expected, e),
        };
        let oracle = lorenz_oracle(sigma, r, b);
        worst = worst.max((d - oracle).abs()).max((rep.candidate - oracle).abs());
        tested += 1;
    }
    Check::new(
        tested > 0 && worst <= 1e-9,
        expected,
        format!("max deviation {worst:.1e} over {tested} of 20 grid points"),
    )
}

fn stable_equilibrium_dimension() -> Check {
    let expected = "1.9989 ± 1e-3 at S1 and S2 (r = 24.5)";
    let spec = lorenz(10.0, 24.5, 8.0 / 3.0);
    let mut values = Vec::new();
    let mut strict = Vec::new();
    for eq in spec.equilibria().into_iter().filter(|e| e.label != "S0") {
        let exps = match equilibrium_exponents(&spec, &eq.coordinates) {
            Ok(x) => x,
            Err(e) => return Check::error(expected, e),
        };
        // all exponents are negative; the expression is taken at j = n − 1
        match kaplan_yorke_at(&exps, exps.len() - 1) {
            Ok(d) => values.push((eq.label.clone(), d)),
            Err(e) => return Check::error(expected, e),
        }
        strict.push(kaplan_yorke(&exps).map(|k| k.d).unwrap_or(f64::NAN));
    }
    let ok = values.len() == 2 && values.iter().all(|(_, d)| (d - 1.9989).abs() <= 1e-3);
    let shown: Vec<String> = values.iter().map(|(l, d)| format!("{l} {d:.4}")).collect();
    Check::new(
        ok,
        expected,
        format!(
            "{} (sign-rule dimension {})",
            shown.join(", "),
            strict.iter().map(|d| format!("{d}")).collect::<Vec<_>>().join("/")
        ),
    )
}

fn shimizu_morioka() -> Check {
    let expected = "all margins > 0; value = 3 - 2.6/(0.9+√4.81) ± 1e-9";
    let rep = match shimizu_morioka_exact(0.4, 0.9) {
        Ok(r) => r,
        Err(e) => return Check::error(expected, e),
    };
    let oracle = 3.0 - 2.6 / (0.9 + 4.81f64.sqrt());
    let margins: Vec<f64> = rep.conditions.iter().map(|c| c.lhs_minus_rhs).collect();
    let ok = margins.len() == 3
        && margins.iter().all(|&m| m > 0.0)
        && rep.value().is_some_and(|v| (v - oracle).abs() <= 1e-9);
    Check::new(
        ok,
        expected,
        format!(
            "margins {:?}; value {} vs oracle {oracle:.10}",
            margins.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>(),
            rep.value().map_or("n/a".into(), |v| format!("{v:.10}"))
        ),
    )
}

/// Yang γ-condition left-hand side before expansion.
fn yang_gamma_unexpanded(sigma: f64, r: f64, b: f64, g: f64) -> (f64, f64) {
    let k = r * sigma * sigma + b * (sigma + b).powi(2) - 4.0 * sigma * (sigma * r + sigma * b - b * b);
    let t1 = 4.0 * b * r * sigma * sigma * (g + 2.0 * sigma - b).powi(2);
    let t2 = 16.0 * sigma * b * g * k;
    (t1 + t2, t1.abs() + t2.abs())
}

fn yang_quadratic() -> Check {
    let expected = "root residual < 1e-8 relative over 50 samples; formula = direct ± 1e-12";
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_residual: f64 = 0.0;
    let mut worst_formula: f64 = 0.0;
    let mut samples = 0;
    let mut formulas = 0;
    let mut draws = 0;
    while samples < 50 && draws < 100_000 {
        draws += 1;
        let sigma = rng.gen_range(0.5..30.0);
        let b = rng.gen_range(0.1..6.0);
        let r = rng.gen_range(0.1..120.0);
        let quad = yang_gamma_quadratic(sigma, r, b);
        let Some((lo, hi)) = quad.real_roots() else {
            continue;
        };
        samples += 1;
        for g in [lo, hi] {
            let (v, scale) = yang_gamma_unexpanded(sigma, r, b, g);
            worst_residual = worst_residual.max(v.abs() / scale.max(f64::MIN_POSITIVE));
        }
        match yang_exact(sigma, r, b) {
            Ok(rep) => {
                if let Outcome::Formula { value } = rep.outcome {
                    let direct = 3.0 - 2.0 * (sigma + b) / (sigma + (sigma * sigma + 4.0 * sigma * r).sqrt());
                    worst_formula = worst_formula.max((value - direct).abs());
                    formulas += 1;
                }
            }
            Err(e) => return Check::error(expected, e),
        }
    }
    Check::new(
        samples == 50 && worst_residual < 1e-8 && worst_formula <= 1e-12,
        expected,
        format!(
            "{samples} samples, max residual {worst_residual:.1e}; {formulas} formula outcomes, max deviation {worst_formula:.1e}"
        ),
    )
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> SquareMatrix {
    let entries: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SquareMatrix::from_row_slice(n, &entries).expect("square")
}

/// Random matrix with condition number below 50.
fn well_conditioned(rng: &mut ChaCha8Rng, n: usize) -> SquareMatrix {
    loop {
        let m = random_matrix(rng, n);
        let s = singular_values(&m);
        if s.values()[0] / s.values()[n - 1] < 50.0 {
            return m;
        }
    }
}

fn ln_singular_values(m: &SquareMatrix) -> Vec<f64> {
    singular_values(m).values().iter().map(|v| v.ln()).collect()
}

fn product_svd_oracle() -> Check {
    let expected = "Σ ln diag R = ln σ(product) ± 1e-6 on 200 chains";
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let k = rng.gen_range(1..=8);
        let fs: Vec<_> = (0..k).map(|_| well_conditioned(&mut rng, 3)).collect();
        let seq = FactorSequence::from_factors(fs, 1.0).expect("nonempty");
        let res = match product_svd(&seq, CONVERGED_SWEEPS) {
            Ok(r) => r,
            Err(e) => return Check::error(expected, e),
        };
        let mut sums = vec![0.0; 3];
        for diag in &res.r_diagonals {
            for (s, d) in sums.iter_mut().zip(diag) {
                *s += d.ln();
            }
        }
        sums.sort_by(|a, b| b.total_cmp(a));
        let want = ln_singular_values(&seq.explicit_product());
        for (a, b) in sums.iter().zip(&want) {
            worst = worst.max((a - b).abs());
        }
    }
    Check::new(worst <= 1e-6, expected, format!("max deviation {worst:.1e}"))
}

/// ω_d(AB) ≤ ω_d(A)·ω_d(B) on random pairs and a grid of d.
fn horn_inequality() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut violations = 0;
    let mut checks = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=4);
        let a = random_matrix(&mut rng, n);
        let b = random_matrix(&mut rng, n);
        let sa = singular_values(&a);
        let sb = singular_values(&b);
        let sab = singular_values(&(&a * &b));
        for step in 0..=(4 * n) {
            let d = step as f64 / 4.0;
            let lhs = omega_d(&sab, d).expect("d in range");
            let rhs = omega_d(&sa, d).expect("d in range") * omega_d(&sb, d).expect("d in range");
            checks += 1;
            if lhs > rhs * (1.0 + 1e-10) + 1e-300 {
                violations += 1;
            }
        }
    }
    (violations == 0, format!("{violations} violations in {checks}"))
}

/// Column-norm exponents bound the singular-value exponents on short chains:
/// `LE_i ≤ LCE_i + ln(n−i+1)/(2T)`, tail sums, and `LE_n ≤ LCE_n`.
fn le_lce_bounds() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut violations = 0;
    let mut pointwise = 0;
    let mut chains = 0;
    let mut inputs: Vec<FactorSequence> = Vec::new();
    for _ in 0..300 {
        let n = rng.gen_range(2..=4);
        let k = rng.gen_range(1..=6);
        let fs: Vec<_> = (0..k).map(|_| well_conditioned(&mut rng, n)).collect();
        inputs.push(FactorSequence::from_factors(fs, 0.5).expect("nonempty"));
    }
    let cfg = IntegratorConfig::with_tolerances(1e-10, 1e-10);
    for (u0, t) in [([1.0, 1.0, 1.0], 1.0), ([-3.0, 2.0, 25.0], 1.2), ([5.0, 5.0, 20.0], 0.5)] {
        if let Ok(seq) = factor_sequence(&lorenz(10.0, 28.0, 8.0 / 3.0), &u0, t / 10.0, 10, &cfg) {
            inputs.push(seq);
        } else {
            violations += 1;
        }
    }
    for seq in &inputs {
        let (Ok(les), Ok(lce)) = (product_svd(seq, CONVERGED_SWEEPS).map(|r| r.les), lce_column_exponents(seq))
        else {
            violations += 1;
            continue;
        };
        chains += 1;
        let n = les.len();
        let t = seq.horizon();
        for i in 0..n {
            let slack = ((n - i) as f64).ln() / (2.0 * t);
            if les[i] > lce[i] + slack + 1e-9 {
                violations += 1;
            }
            if les[i] > lce[i] + 1e-9 {
                pointwise += 1;
            }
            let tail_le: f64 = les[i..].iter().sum();
            let tail_lce: f64 = lce[i..].iter().sum();
            if tail_le > tail_lce + 1e-9 {
                violations += 1;
            }
        }
        if les[n - 1] > lce[n - 1] + 1e-9 {
            violations += 1;
        }
    }
    (
        violations == 0,
        format!("{violations} violations on {chains} chains; {pointwise} indices exceed the column exponent without slack"),
    )
}

fn ky_convex_identity() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for _ in 0..5000 {
        let n = rng.gen_range(2..=4);
        let mut exps: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        exps.sort_by(|a, b| b.total_cmp(a));
        let Ok(ky) = kaplan_yorke(&exps) else { continue };
        if ky.j == 0 || ky.j == n {
            continue;
        }
        let pj: f64 = exps[..ky.j].iter().sum();
        let pj1 = pj + exps[ky.j];
        worst = worst.max(((1.0 - ky.s) * pj + ky.s * pj1).abs());
        if (ky.d - (ky.j as f64 + ky.s)).abs() > 0.0 {
            worst = f64::INFINITY;
        }
        cases += 1;
    }
    (worst <= 1e-12, format!("max residual {worst:.1e} over {cases} vectors"))
}

fn flow_catalog() -> Vec<(SystemSpec, Vec<f64>)> {
    SystemId::ALL
        .into_iter()
        .map(SystemSpec::default_for)
        .filter(|s| s.kind() == crate::systems::Kind::Flow)
        .map(|s| {
            let seed = crate::config::default_seed(&s);
            (s, seed)
        })
        .collect()
}

/// `φ^{t+s} = φ^t ∘ φ^s` for t, s ≤ 10 at tolerance 1e-12, relative to max(1, ‖u‖∞).
fn semigroup() -> (bool, String) {
    let cfg = IntegratorConfig::with_tolerances(1e-12, 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst: f64 = 0.0;
    for (spec, seed) in flow_catalog() {
        let Ok(start) = advance(&spec, &seed, 50.0, &cfg) else {
            return (false, format!("{} failed to advance", spec.id()));
        };
        for _ in 0..5 {
            let t = rng.gen_range(0.01..10.0);
            let s = rng.gen_range(0.01..10.0);
            let (Ok(direct), Ok(mid)) = (advance(&spec, &start, t + s, &cfg), advance(&spec, &start, s, &cfg)) else {
                return (false, format!("{} failed to advance", spec.id()));
            };
            let Ok(composed) = advance(&spec, &mid, t, &cfg) else {
                return (false, format!("{} failed to advance", spec.id()));
            };
            let scale = direct.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            let err = direct
                .iter()
                .zip(&composed)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst = worst.max(err / scale);
        }
    }
    (worst <= 1e-6, format!("max relative error {worst:.1e}"))
}

/// The chained fundamental matrix equals the single-segment one.
fn cocycle() -> (bool, String) {
    let cfg = IntegratorConfig::with_tolerances(1e-12, 1e-12);
    let mut worst: f64 = 0.0;
    for (spec, seed) in flow_catalog() {
        for total in [0.5, 1.0, 2.0] {
            let (Ok(single), Ok(seq)) = (
                integrate_segment(&spec, &seed, total, &cfg),
                factor_sequence(&spec, &seed, total / 10.0, 10, &cfg),
            ) else {
                return (false, format!("{} failed to integrate", spec.id()));
            };
            let prod = seq.explicit_product();
            let err = prod.sub(&single.phi).max_abs() / single.phi.max_abs();
            worst = worst.max(err);
            let s1: &SingularSpectrum = &singular_values(&single.phi);
            let s2 = singular_values(&prod);
            let top = s1.values()[0];
            for (a, b) in s1.values().iter().zip(s2.values()) {
                if *a > 1e-6 * top {
                    worst = worst.max((a - b).abs() / a);
                }
            }
        }
    }
    (worst <= 1e-5, format!("max relative error {worst:.1e}"))
}

fn self_excitation() -> Check {
    let expected = "r = 28: [S0, S1, S2]; r = 24.5: [S0]; gd: hidden";
    let seed = [1.0, 1.0, 1.0];
    let cases = [
        (lorenz(10.0, 28.0, 8.0 / 3.0), seed.to_vec(), Classification::SelfExcited {
            equilibria: vec!["S0".into(), "S1".into(), "S2".into()],
        }),
        (lorenz(10.0, 24.5, 8.0 / 3.0), seed.to_vec(), Classification::SelfExcited {
            equilibria: vec!["S0".into()],
        }),
        (gd_spec(), GD_HIDDEN_SEED.to_vec(), Classification::Hidden),
    ];
    let mut ok = true;
    let mut seen = Vec::new();
    for (spec, seed, want) in cases {
        match classify(&spec, &seed) {
            Ok(c) => {
                ok &= c == want;
                seen.push(class_name(&c));
            }
            Err(e) => return Check::error(expected, e),
        }
    }
    Check::new(ok, expected, seen.join("; "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_grid_shape() {
        let g = oracle_grid();
        assert_eq!(g.len(), 20);
        assert!(g.iter().any(|p| p.2 == 1.0) && g.iter().any(|p| p.2 == 4.0));
    }

    #[test]
    fn henon_oracle_reference_value() {
        assert!((henon_oracle(1.4, 0.3) - 1.4953).abs() < 1e-4);
    }

    #[test]
    fn instantaneous_criteria_pass() {
        let suite = Suite::new(true);
        for id in [1, 2, 3, 7, 8] {
            let r = suite.run(id);
            assert!(r.passed(), "{}", r.line());
        }
    }

    #[test]
    fn fast_mode_skips_the_lorenz_sweep() {
        let r = Suite::new(true).run(4);
        assert_eq!(r.status, Status::Skipped);
        assert!(r.line().starts_with("[SKIP]"));
    }

    #[test]
    fn results_round_trip_through_json() {
        let r = Suite::new(true).run(1);
        let back: CriterionResult = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
