//! Catalog of benchmark flows and maps with analytic vector fields,
//! Jacobians, equilibria and the coordinate changes that relate them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smallmat::{eigen_general, SquareMatrix};

/// Catalog identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemId {
    Lorenz,
    GlukhovskyDolzhansky,
    GeneralizedLorenz,
    Yang,
    Tigan,
    ShimizuMorioka,
    ShimizuMoriokaTransformed,
    Henon,
}

/// Continuous-time flow or discrete-time map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Flow,
    Map,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Flow => "flow",
            Kind::Map => "map",
        }
    }
}

/// Admissible range of a parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    Positive,
    NonNegative,
    Real,
    /// Open unit interval (0, 1).
    UnitInterval,
}

impl Constraint {
    fn admits(self, v: f64) -> bool {
        v.is_finite()
            && match self {
                Constraint::Positive => v > 0.0,
                Constraint::NonNegative => v >= 0.0,
                Constraint::Real => true,
                Constraint::UnitInterval => v > 0.0 && v < 1.0,
            }
    }

    fn describe(self) -> &'static str {
        match self {
            Constraint::Positive => "must be > 0",
            Constraint::NonNegative => "must be >= 0",
            Constraint::Real => "must be finite",
            Constraint::UnitInterval => "must lie in (0, 1)",
        }
    }
}

/// One entry of a system's parameter schema.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub constraint: Constraint,
    pub default: f64,
}

const fn p(name: &'static str, constraint: Constraint, default: f64) -> ParamSpec {
    ParamSpec {
        name,
        constraint,
        default,
    }
}

use Constraint::{NonNegative, Positive, Real, UnitInterval};

const LORENZ: &[ParamSpec] = &[
    p("sigma", Positive, 10.0),
    p("r", Positive, 28.0),
    p("b", Positive, 8.0 / 3.0),
];
// Defaults map onto generalized_lorenz (sigma=4, r=700, b=1, A=0.0052).
const GD: &[ParamSpec] = &[
    p("sigma", Positive, 4.0),
    p("R", Positive, 252.0),
    // a0 = A / (sigma - A r)^2
    p("a0", Positive, 0.0052 / (0.36 * 0.36)),
];
const GEN_LORENZ: &[ParamSpec] = &[
    p("sigma", Positive, 4.0),
    p("r", Positive, 700.0),
    p("b", Positive, 1.0),
    p("A", NonNegative, 0.0052),
];
const YANG: &[ParamSpec] = &[
    p("sigma", Positive, 10.0),
    p("r", Real, 16.0),
    p("b", Positive, 8.0 / 3.0),
];
const TIGAN: &[ParamSpec] = &[
    p("a", Positive, 10.0),
    p("c", Real, 26.0),
    p("b", Positive, 8.0 / 3.0),
];
const SHIMIZU: &[ParamSpec] = &[p("alpha", Positive, 0.4), p("lambda", Positive, 0.9)];
const HENON: &[ParamSpec] = &[p("a", Positive, 1.4), p("b", UnitInterval, 0.3)];

impl SystemId {
    pub const ALL: [SystemId; 8] = [
        SystemId::Lorenz,
        SystemId::GlukhovskyDolzhansky,
        SystemId::GeneralizedLorenz,
        SystemId::Yang,
        SystemId::Tigan,
        SystemId::ShimizuMorioka,
        SystemId::ShimizuMoriokaTransformed,
        SystemId::Henon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemId::Lorenz => "lorenz",
            SystemId::GlukhovskyDolzhansky => "glukhovsky_dolzhansky",
            SystemId::GeneralizedLorenz => "generalized_lorenz",
            SystemId::Yang => "yang",
            SystemId::Tigan => "tigan",
            SystemId::ShimizuMorioka => "shimizu_morioka",
            SystemId::ShimizuMoriokaTransformed => "shimizu_morioka_transformed",
            SystemId::Henon => "henon",
        }
    }

    pub fn kind(self) -> Kind {
        match self {
            SystemId::Henon => Kind::Map,
            _ => Kind::Flow,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            SystemId::Henon => 2,
            _ => 3,
        }
    }

    pub fn params(self) -> &'static [ParamSpec] {
        match self {
            SystemId::Lorenz => LORENZ,
            SystemId::GlukhovskyDolzhansky => GD,
            SystemId::GeneralizedLorenz => GEN_LORENZ,
            SystemId::Yang => YANG,
            SystemId::Tigan => TIGAN,
            SystemId::ShimizuMorioka | SystemId::ShimizuMoriokaTransformed => SHIMIZU,
            SystemId::Henon => HENON,
        }
    }

    /// Human-readable equations, for listings.
    pub fn equations(self) -> &'static str {
        match self {
            SystemId::Lorenz => "x' = sigma(y-x); y' = r x - y - x z; z' = -b z + x y",
            SystemId::GlukhovskyDolzhansky => {
                "x' = -sigma x + z + a0 y z; y' = R - y - x z; z' = -z + x y"
            }
            SystemId::GeneralizedLorenz => {
                "x' = sigma(y-x) - A y z; y' = r x - y - x z; z' = -b z + x y"
            }
            SystemId::Yang => "x' = sigma(y-x); y' = r x - x z; z' = -b z + x y",
            SystemId::Tigan => "x' = a(y-x); y' = (c-a) x - a x z; z' = -b z + x y",
            SystemId::ShimizuMorioka => "x' = y; y' = x - lambda y - x z; z' = -alpha z + x^2",
            SystemId::ShimizuMoriokaTransformed => {
                "x' = y; y' = x - lambda y - x z + x^3/2; z' = -alpha z + x y + (1 + alpha/2) x^2"
            }
            SystemId::Henon => "(x, y) -> (a + b y - x^2, x)",
        }
    }

    pub fn from_name(name: &str) -> Option<SystemId> {
        SystemId::ALL.into_iter().find(|id| id.name() == name)
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A catalog system with validated parameters.
///
/// Parameters are stored in schema order (see [`SystemId::params`]).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SystemConfig", into = "SystemConfig")]
pub struct SystemSpec {
    id: SystemId,
    values: Vec<f64>,
}

/// Serialized form of a [`SystemSpec`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub system: SystemId,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl TryFrom<SystemConfig> for SystemSpec {
    type Error = Error;
    fn try_from(c: SystemConfig) -> Result<Self> {
        SystemSpec::with_overrides(c.system, &c.params)
    }
}

impl From<SystemSpec> for SystemConfig {
    fn from(s: SystemSpec) -> Self {
        SystemConfig {
            system: s.id,
            params: s.param_map(),
        }
    }
}

impl SystemSpec {
    /// Builds a system from values in schema order.
    pub fn new(id: SystemId, values: &[f64]) -> Result<Self> {
        let schema = id.params();
        if values.len() != schema.len() {
            return Err(Error::DimensionMismatch {
                expected: schema.len(),
                got: values.len(),
            });
        }
        for (spec, &v) in schema.iter().zip(values) {
            if !spec.constraint.admits(v) {
                return Err(Error::InvalidParameter {
                    system: id.name(),
                    name: spec.name.to_string(),
                    reason: format!("{} (got {v})", spec.constraint.describe()),
                });
            }
        }
        Ok(Self {
            id,
            values: values.to_vec(),
        })
    }

    /// Catalog defaults with named overrides; unknown names are rejected.
    pub fn with_overrides(id: SystemId, overrides: &BTreeMap<String, f64>) -> Result<Self> {
        let schema = id.params();
        for name in overrides.keys() {
            if !schema.iter().any(|s| s.name == name) {
                return Err(Error::InvalidParameter {
                    system: id.name(),
                    name: name.clone(),
                    reason: "unknown parameter".into(),
                });
            }
        }
        let values: Vec<f64> = schema
            .iter()
            .map(|s| overrides.get(s.name).copied().unwrap_or(s.default))
            .collect();
        Self::new(id, &values)
    }

    pub fn default_for(id: SystemId) -> Self {
        Self::with_overrides(id, &BTreeMap::new()).expect("catalog defaults are valid")
    }

    pub fn lorenz(sigma: f64, r: f64, b: f64) -> Result<Self> {
        Self::new(SystemId::Lorenz, &[sigma, r, b])
    }

    pub fn glukhovsky_dolzhansky(sigma: f64, big_r: f64, a0: f64) -> Result<Self> {
        Self::new(SystemId::GlukhovskyDolzhansky, &[sigma, big_r, a0])
    }

    pub fn generalized_lorenz(sigma: f64, r: f64, b: f64, a: f64) -> Result<Self> {
        Self::new(SystemId::GeneralizedLorenz, &[sigma, r, b, a])
    }

    pub fn yang(sigma: f64, r: f64, b: f64) -> Result<Self> {
        Self::new(SystemId::Yang, &[sigma, r, b])
    }

    pub fn tigan(a: f64, c: f64, b: f64) -> Result<Self> {
        Self::new(SystemId::Tigan, &[a, c, b])
    }

    pub fn shimizu_morioka(alpha: f64, lambda: f64) -> Result<Self> {
        Self::new(SystemId::ShimizuMorioka, &[alpha, lambda])
    }

    pub fn shimizu_morioka_transformed(alpha: f64, lambda: f64) -> Result<Self> {
        Self::new(SystemId::ShimizuMoriokaTransformed, &[alpha, lambda])
    }

    pub fn henon(a: f64, b: f64) -> Result<Self> {
        Self::new(SystemId::Henon, &[a, b])
    }

    pub fn id(&self) -> SystemId {
        self.id
    }

    pub fn kind(&self) -> Kind {
        self.id.kind()
    }

    pub fn dim(&self) -> usize {
        self.id.dim()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.id
            .params()
            .iter()
            .position(|s| s.name == name)
            .map(|i| self.values[i])
    }

    pub fn param_map(&self) -> BTreeMap<String, f64> {
        self.id
            .params()
            .iter()
            .zip(&self.values)
            .map(|(s, &v)| (s.name.to_string(), v))
            .collect()
    }

    fn check_dim(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: u.len(),
            });
        }
        Ok(())
    }

    /// Vector field for flows, step map for maps.
    pub fn vector_field(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(u)?;
        let mut out = vec![0.0; self.dim()];
        self.eval(u, &mut out);
        Ok(out)
    }

    /// Analytic Jacobian of the vector field (flows) or step map (maps).
    pub fn jacobian(&self, u: &[f64]) -> Result<SquareMatrix> {
        self.check_dim(u)?;
        Ok(self.jac(u))
    }

    /// Unchecked evaluation used by the integrator; `u` and `out` have length `dim()`.
    #[inline]
    pub(crate) fn eval(&self, u: &[f64], out: &mut [f64]) {
        let v = &self.values;
        match self.id {
            SystemId::Lorenz => {
                let (s, r, b) = (v[0], v[1], v[2]);
                out[0] = s * (u[1] - u[0]);
                out[1] = r * u[0] - u[1] - u[0] * u[2];
                out[2] = -b * u[2] + u[0] * u[1];
            }
            SystemId::GlukhovskyDolzhansky => {
                let (s, big_r, a0) = (v[0], v[1], v[2]);
                out[0] = -s * u[0] + u[2] + a0 * u[1] * u[2];
                out[1] = big_r - u[1] - u[0] * u[2];
                out[2] = -u[2] + u[0] * u[1];
            }
            SystemId::GeneralizedLorenz => {
                let (s, r, b, a) = (v[0], v[1], v[2], v[3]);
                out[0] = s * (u[1] - u[0]) - a * u[1] * u[2];
                out[1] = r * u[0] - u[1] - u[0] * u[2];
                out[2] = -b * u[2] + u[0] * u[1];
            }
            SystemId::Yang => {
                let (s, r, b) = (v[0], v[1], v[2]);
                out[0] = s * (u[1] - u[0]);
                out[1] = r * u[0] - u[0] * u[2];
                out[2] = -b * u[2] + u[0] * u[1];
            }
            SystemId::Tigan => {
                let (a, c, b) = (v[0], v[1], v[2]);
                out[0] = a * (u[1] - u[0]);
                out[1] = (c - a) * u[0] - a * u[0] * u[2];
                out[2] = -b * u[2] + u[0] * u[1];
            }
            SystemId::ShimizuMorioka => {
                let (alpha, lambda) = (v[0], v[1]);
                out[0] = u[1];
                out[1] = u[0] - lambda * u[1] - u[0] * u[2];
                out[2] = -alpha * u[2] + u[0] * u[0];
            }
            SystemId::ShimizuMoriokaTransformed => {
                let (alpha, lambda) = (v[0], v[1]);
                let x = u[0];
                out[0] = u[1];
                out[1] = x - lambda * u[1] - x * u[2] + 0.5 * x * x * x;
                out[2] = -alpha * u[2] + x * u[1] + (1.0 + 0.5 * alpha) * x * x;
            }
            SystemId::Henon => {
                let (a, b) = (v[0], v[1]);
                out[0] = a + b * u[1] - u[0] * u[0];
                out[1] = u[0];
            }
        }
    }

    #[inline]
    pub(crate) fn jac(&self, u: &[f64]) -> SquareMatrix {
        let v = &self.values;
        match self.id {
            SystemId::Lorenz => {
                let (s, r, b) = (v[0], v[1], v[2]);
                SquareMatrix::from_rows([
                    [-s, s, 0.0],
                    [r - u[2], -1.0, -u[0]],
                    [u[1], u[0], -b],
                ])
            }
            SystemId::GlukhovskyDolzhansky => {
                let (s, _, a0) = (v[0], v[1], v[2]);
                SquareMatrix::from_rows([
                    [-s, a0 * u[2], 1.0 + a0 * u[1]],
                    [-u[2], -1.0, -u[0]],
                    [u[1], u[0], -1.0],
                ])
            }
            SystemId::GeneralizedLorenz => {
                let (s, r, b, a) = (v[0], v[1], v[2], v[3]);
                SquareMatrix::from_rows([
                    [-s, s - a * u[2], -a * u[1]],
                    [r - u[2], -1.0, -u[0]],
                    [u[1], u[0], -b],
                ])
            }
            SystemId::Yang => {
                let (s, r, b) = (v[0], v[1], v[2]);
                SquareMatrix::from_rows([[-s, s, 0.0], [r - u[2], 0.0, -u[0]], [u[1], u[0], -b]])
            }
            SystemId::Tigan => {
                let (a, c, b) = (v[0], v[1], v[2]);
                SquareMatrix::from_rows([
                    [-a, a, 0.0],
                    [c - a - a * u[2], 0.0, -a * u[0]],
                    [u[1], u[0], -b],
                ])
            }
            SystemId::ShimizuMorioka => {
                let (alpha, lambda) = (v[0], v[1]);
                SquareMatrix::from_rows([
                    [0.0, 1.0, 0.0],
                    [1.0 - u[2], -lambda, -u[0]],
                    [2.0 * u[0], 0.0, -alpha],
                ])
            }
            SystemId::ShimizuMoriokaTransformed => {
                let (alpha, lambda) = (v[0], v[1]);
                let x = u[0];
                SquareMatrix::from_rows([
                    [0.0, 1.0, 0.0],
                    [1.0 - u[2] + 1.5 * x * x, -lambda, -x],
                    [u[1] + (2.0 + alpha) * x, x, -alpha],
                ])
            }
            SystemId::Henon => {
                let b = v[1];
                SquareMatrix::from_rows([[-2.0 * u[0], b], [1.0, 0.0]])
            }
        }
    }

    /// All analytic equilibria (flows) or fixed points (maps).
    pub fn equilibria(&self) -> Vec<Equilibrium> {
        let v = &self.values;
        let origin = vec![0.0; self.dim()];
        let mut pts: Vec<(String, Vec<f64>)> = Vec::new();
        let symmetric_pair = |pts: &mut Vec<(String, Vec<f64>)>, x: f64, y: f64, z: f64| {
            pts.push(("S1".into(), vec![x, y, z]));
            pts.push(("S2".into(), vec![-x, -y, z]));
        };
        match self.id {
            SystemId::Lorenz => {
                let (_, r, b) = (v[0], v[1], v[2]);
                pts.push(("S0".into(), origin));
                if r > 1.0 {
                    let x = (b * (r - 1.0)).sqrt();
                    symmetric_pair(&mut pts, x, x, r - 1.0);
                }
            }
            SystemId::GeneralizedLorenz => {
                let (s, r, b, a) = (v[0], v[1], v[2], v[3]);
                pts.push(("S0".into(), origin));
                // with w = x²: σw² − (σb(r−2) − A r² b)w − σb²(r−1) = 0
                if r > 1.0 {
                    let qa = s;
                    let qb = -(s * b * (r - 2.0) - a * r * r * b);
                    let qc = -s * b * b * (r - 1.0);
                    let w = positive_quadratic_root(qa, qb, qc);
                    if let Some(w) = w {
                        let x = w.sqrt();
                        let y = r * b * x / (b + w);
                        let z = x * y / b;
                        symmetric_pair(&mut pts, x, y, z);
                    }
                }
            }
            SystemId::GlukhovskyDolzhansky => {
                let (s, big_r, a0) = (v[0], v[1], v[2]);
                pts.push(("S0".into(), vec![0.0, big_r, 0.0]));
                // a0 y² + y − σ = 0 for the nontrivial branch
                let y = (-1.0 + (1.0 + 4.0 * a0 * s).sqrt()) / (2.0 * a0);
                let x2 = big_r / y - 1.0;
                if x2 > 0.0 {
                    let x = x2.sqrt();
                    pts.push(("S1".into(), vec![x, y, x * y]));
                    pts.push(("S2".into(), vec![-x, y, -x * y]));
                }
            }
            SystemId::Yang => {
                let (_, r, b) = (v[0], v[1], v[2]);
                pts.push(("S0".into(), origin));
                if r > 0.0 {
                    let x = (b * r).sqrt();
                    symmetric_pair(&mut pts, x, x, r);
                }
            }
            SystemId::Tigan => {
                let (a, c, b) = (v[0], v[1], v[2]);
                pts.push(("S0".into(), origin));
                let z = (c - a) / a;
                if z > 0.0 {
                    let x = (b * z).sqrt();
                    symmetric_pair(&mut pts, x, x, z);
                }
            }
            SystemId::ShimizuMorioka => {
                let alpha = v[0];
                pts.push(("S0".into(), origin));
                symmetric_pair(&mut pts, alpha.sqrt(), 0.0, 1.0);
            }
            SystemId::ShimizuMoriokaTransformed => {
                let alpha = v[0];
                pts.push(("S0".into(), origin));
                symmetric_pair(&mut pts, alpha.sqrt(), 0.0, 1.0 + 0.5 * alpha);
            }
            SystemId::Henon => {
                let (a, b) = (v[0], v[1]);
                let sq = ((b - 1.0).powi(2) + 4.0 * a).sqrt();
                let xp = 0.5 * (b - 1.0 + sq);
                let xm = 0.5 * (b - 1.0 - sq);
                pts.push(("x+".into(), vec![xp, xp]));
                pts.push(("x-".into(), vec![xm, xm]));
            }
        }
        pts.into_iter()
            .map(|(label, coordinates)| {
                let stability = self.classify_point(&coordinates);
                Equilibrium {
                    label,
                    coordinates,
                    stability,
                }
            })
            .collect()
    }

    /// Residual of the equilibrium condition: ‖f(u)‖ for flows, ‖φ(u) − u‖ for maps.
    pub fn equilibrium_residual(&self, u: &[f64]) -> Result<f64> {
        let f = self.vector_field(u)?;
        let r2: f64 = match self.kind() {
            Kind::Flow => f.iter().map(|x| x * x).sum(),
            Kind::Map => f.iter().zip(u).map(|(a, b)| (a - b).powi(2)).sum(),
        };
        Ok(r2.sqrt())
    }

    fn classify_point(&self, u: &[f64]) -> Stability {
        let ev = eigen_general(&self.jac(u));
        // growth rates: real parts for flows, log-moduli for maps
        let rates: Vec<f64> = match self.kind() {
            Kind::Flow => ev.iter().map(|z| z.re).collect(),
            Kind::Map => ev.iter().map(|z| z.norm().ln()).collect(),
        };
        let scale = 1.0 + rates.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
        let tol = 1e-9 * scale;
        if rates.iter().any(|r| r.abs() <= tol) {
            Stability::CenterMargin
        } else if rates.iter().all(|&r| r < 0.0) {
            Stability::Stable
        } else if rates.iter().all(|&r| r > 0.0) {
            Stability::Repelling
        } else {
            Stability::Saddle
        }
    }
}

fn positive_quadratic_root(a: f64, b: f64, c: f64) -> Option<f64> {
    crate::smallmat::quadratic_roots(a, b, c)
        .into_iter()
        .filter(|z| z.im == 0.0 && z.re > 0.0)
        .map(|z| z.re)
        .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))))
}

/// Linear stability label of an equilibrium.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Saddle,
    Repelling,
    /// Some growth rate lies within round-off of zero.
    CenterMargin,
}

/// An equilibrium of a flow or a fixed point of a map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub label: String,
    pub coordinates: Vec<f64>,
    pub stability: Stability,
}

/// Tigan parameters (a, c, b) expressed as Yang parameters: σ = a, r = c − a.
pub fn tigan_to_yang(a: f64, c: f64, b: f64) -> Result<SystemSpec> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter {
            system: "tigan",
            name: "a".into(),
            reason: format!("must be > 0 (got {a})"),
        });
    }
    SystemSpec::yang(a, c - a, b)
}

/// Maps a Tigan state to the Yang state: `(√a·x, √a·y, a·z)`.
///
/// Equivalently the Tigan variables are `(X/√a, Y/√a, Z/a)` in Yang variables.
pub fn tigan_state_to_yang(a: f64, u: &[f64]) -> Vec<f64> {
    let s = a.sqrt();
    vec![s * u[0], s * u[1], a * u[2]]
}

/// Glukhovsky–Dolzhansky parameters (σ, R, a₀) as generalized Lorenz
/// parameters: `A = a₀σ²/(a₀R+1)²`, `r = (R/σ)(a₀R+1)`, `b = 1`.
pub fn gd_to_generalized_lorenz(sigma: f64, big_r: f64, a0: f64) -> Result<SystemSpec> {
    for (name, v) in [("sigma", sigma), ("R", big_r)] {
        if !(v > 0.0) {
            return Err(Error::InvalidParameter {
                system: "glukhovsky_dolzhansky",
                name: name.into(),
                reason: format!("must be > 0 (got {v})"),
            });
        }
    }
    if !(a0 >= 0.0) {
        return Err(Error::InvalidParameter {
            system: "glukhovsky_dolzhansky",
            name: "a0".into(),
            reason: format!("must be >= 0 (got {a0})"),
        });
    }
    let k = a0 * big_r + 1.0;
    let a = a0 * sigma * sigma / (k * k);
    let r = big_r / sigma * k;
    SystemSpec::generalized_lorenz(sigma, r, 1.0, a)
}

/// Inverse of [`gd_to_generalized_lorenz`]; requires `b = 1` and `σ > A r`.
pub fn generalized_lorenz_to_gd(sigma: f64, r: f64, a: f64) -> Result<SystemSpec> {
    if !(sigma > a * r) {
        return Err(Error::InvalidArgument(format!(
            "need sigma > A r for a Glukhovsky-Dolzhansky preimage (sigma = {sigma}, A r = {})",
            a * r
        )));
    }
    let k = sigma / (sigma - a * r);
    SystemSpec::glukhovsky_dolzhansky(sigma, r * sigma / k, a * k * k / (sigma * sigma))
}

/// Maps a Glukhovsky–Dolzhansky state to generalized Lorenz coordinates.
///
/// The forward substitution is `(x, y, z) = (X, R − k Z, k Y)` with `k = σ/(a₀R+1)`.
pub fn gd_state_to_generalized_lorenz(sigma: f64, big_r: f64, a0: f64, u: &[f64]) -> Vec<f64> {
    let k = sigma / (a0 * big_r + 1.0);
    vec![u[0], u[2] / k, (big_r - u[1]) / k]
}

/// Maps a Shimizu–Morioka state to the transformed system: `z ↦ z + x²/2`.
pub fn shimizu_morioka_state_to_transformed(u: &[f64]) -> Vec<f64> {
    vec![u[0], u[1], u[2] + 0.5 * u[0] * u[0]]
}
