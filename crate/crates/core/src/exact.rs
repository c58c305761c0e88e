//! Closed-form Lyapunov dimensions at a critical equilibrium together with
//! the parameter conditions under which they hold, and a sampled checker for
//! the symmetrized-Jacobian dimension condition.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smallmat::{eigen_symmetric, quadratic_roots, singular_values, SquareMatrix};
use crate::systems::{tigan_to_yang, Kind, SystemSpec};

/// Tolerance for conditions that are equalities.
const EQUALITY_REL_TOL: f64 = 1e-12;
/// A quadratic has two distinct real roots only when its discriminant clears
/// this fraction of the squared largest coefficient.
const DISTINCT_ROOTS_REL: f64 = 1e-12;

/// One inequality rewritten as `margin > 0` (strict) or `margin >= 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionMargin {
    pub id: String,
    pub lhs_minus_rhs: f64,
    pub strict: bool,
}

impl ConditionMargin {
    fn new(id: &str, lhs_minus_rhs: f64, strict: bool) -> Self {
        Self {
            id: id.to_string(),
            lhs_minus_rhs,
            strict,
        }
    }

    fn strict(id: &str, margin: f64) -> Self {
        Self::new(id, margin, true)
    }

    fn non_strict(id: &str, margin: f64) -> Self {
        Self::new(id, margin, false)
    }

    /// `lhs == rhs` up to a relative tolerance, as a non-strict margin.
    fn equality(id: &str, lhs: f64, rhs: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        Self::non_strict(id, EQUALITY_REL_TOL * scale - (lhs - rhs).abs())
    }

    pub fn satisfied(&self) -> bool {
        if self.strict {
            self.lhs_minus_rhs > 0.0
        } else {
            self.lhs_minus_rhs >= 0.0
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Henon,
    Lorenz,
    Gd,
    YangTigan,
    ShimizuMorioka,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Formula { value: f64 },
    ConvergenceToEquilibria,
    NotApplicable { failing: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactDimReport {
    pub theorem: Theorem,
    pub conditions: Vec<ConditionMargin>,
    pub outcome: Outcome,
    /// Real roots (smaller, larger) of the auxiliary quadratic in γ, when it has them.
    pub gamma_roots: Option<(f64, f64)>,
    /// Closed-form value regardless of the conditions; certified only when
    /// `outcome` is `Formula`, otherwise an upper-bound candidate.
    pub candidate: f64,
}

impl ExactDimReport {
    pub fn value(&self) -> Option<f64> {
        match self.outcome {
            Outcome::Formula { value } => Some(value),
            _ => None,
        }
    }

    pub fn certified(&self) -> bool {
        matches!(self.outcome, Outcome::Formula { .. })
    }

    pub fn condition(&self, id: &str) -> Option<&ConditionMargin> {
        self.conditions.iter().find(|c| c.id == id)
    }
}

fn failing(conds: &[&ConditionMargin]) -> Vec<String> {
    conds
        .iter()
        .filter(|c| !c.satisfied())
        .map(|c| c.id.clone())
        .collect()
}

/// Real roots of `a·γ² + b·γ + c` and whether they are distinct.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaQuadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl GammaQuadratic {
    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }

    /// Discriminant minus the distinctness threshold; positive means two distinct real roots.
    fn distinct_margin(&self) -> f64 {
        let scale = self.a.abs().max(self.b.abs()).max(self.c.abs());
        self.discriminant() - DISTINCT_ROOTS_REL * scale * scale
    }

    /// Ascending real roots, if the discriminant is nonnegative and `a != 0`.
    pub fn real_roots(&self) -> Option<(f64, f64)> {
        if self.a == 0.0 || self.discriminant() < 0.0 {
            return None;
        }
        let [r1, r2] = quadratic_roots(self.a, self.b, self.c);
        let (lo, hi) = if r1.re <= r2.re {
            (r1.re, r2.re)
        } else {
            (r2.re, r1.re)
        };
        Some((lo, hi))
    }
}

fn henon_fixed_point(a: f64, b: f64) -> f64 {
    0.5 * (b - 1.0 - ((b - 1.0).powi(2) + 4.0 * a).sqrt())
}

/// Hénon map: dimension at the saddle fixed point `(x₋, x₋)`.
pub fn henon_exact(a: f64, b: f64) -> Result<ExactDimReport> {
    SystemSpec::henon(a, b)?;
    let x = henon_fixed_point(a, b);
    let sigma1 = (x * x + b).sqrt() - x;
    let value = 1.0 + 1.0 / (1.0 - b.ln() / sigma1.ln());
    Ok(ExactDimReport {
        theorem: Theorem::Henon,
        conditions: vec![ConditionMargin::strict("expanding_multiplier", sigma1 - 1.0)],
        outcome: Outcome::Formula { value },
        gamma_roots: None,
        candidate: value,
    })
}

/// Shared closed form for the Lorenz family:
/// `3 − 2(σ+b+1)/(σ+1+√((σ−1)²+4σr))`.
fn lorenz_formula(sigma: f64, r: f64, b: f64) -> f64 {
    3.0 - 2.0 * (sigma + b + 1.0) / (sigma + 1.0 + ((sigma - 1.0).powi(2) + 4.0 * sigma * r).sqrt())
}

/// The γ-quadratic for the Lorenz system, expanded from
/// `(2σ−b+γ)²·P + 4bγ(σ+1)·Q = 0`.
pub fn lorenz_gamma_quadratic(sigma: f64, r: f64, b: f64) -> GammaQuadratic {
    let base = b * (b + sigma - 1.0).powi(2) - 4.0 * sigma * (sigma * b + b - b * b);
    let p = base + sigma * sigma * (r - 1.0) * (b - 4.0);
    let q = base - 3.0 * sigma * sigma * (r - 1.0);
    let c0 = 2.0 * sigma - b;
    GammaQuadratic {
        a: p,
        b: 2.0 * c0 * p + 4.0 * b * (sigma + 1.0) * q,
        c: c0 * c0 * p,
    }
}

pub fn lorenz_exact(sigma: f64, r: f64, b: f64) -> Result<ExactDimReport> {
    SystemSpec::lorenz(sigma, r, b)?;
    let s2 = sigma * sigma;
    let base = b * (b + sigma - 1.0).powi(2) - 4.0 * sigma * (b + sigma * b - b * b);
    let r0 = ConditionMargin::strict("r_above_one", r - 1.0);
    let rb = ConditionMargin::non_strict("r_lower_bound", (r - 1.0) - base / (3.0 * s2));
    let case_a = ConditionMargin::non_strict(
        "case_a",
        4.0 * sigma * (sigma * b + b - b * b) - b * (b + sigma - 1.0).powi(2) - s2 * (r - 1.0) * (b - 4.0),
    );
    let case_b = ConditionMargin::strict("case_b", -case_a.lhs_minus_rhs);
    let quad = lorenz_gamma_quadratic(sigma, r, b);
    let roots = quad.real_roots();
    let distinct = ConditionMargin::strict("gamma_distinct_real_roots", quad.distinct_margin());
    let upper_root = ConditionMargin::strict(
        "gamma_upper_root_positive",
        roots.map_or(f64::MIN, |(_, hi)| hi),
    );
    let stable_lo = ConditionMargin::strict("stable_band_lower", sigma * r - (b - sigma) * (b - 1.0));
    let stable_hi = ConditionMargin::strict("stable_band_upper", (b + 1.0) * (b + sigma) - sigma * r);
    let chaotic = ConditionMargin::strict("formula_branch", sigma * r - (b + 1.0) * (b + sigma));

    let case_b_ok = case_b.satisfied() && distinct.satisfied() && upper_root.satisfied();
    let pre_ok = r0.satisfied() && rb.satisfied() && (case_a.satisfied() || case_b_ok);
    let candidate = lorenz_formula(sigma, r, b);
    let outcome = if !pre_ok {
        let mut f = failing(&[&r0, &rb]);
        if !(case_a.satisfied() || case_b_ok) {
            f.extend(failing(&[&case_a, &case_b, &distinct, &upper_root]));
        }
        Outcome::NotApplicable { failing: f }
    } else if stable_lo.satisfied() && stable_hi.satisfied() {
        Outcome::ConvergenceToEquilibria
    } else if chaotic.satisfied() {
        Outcome::Formula { value: candidate }
    } else {
        Outcome::NotApplicable {
            failing: failing(&[&stable_lo, &stable_hi, &chaotic]),
        }
    };
    Ok(ExactDimReport {
        theorem: Theorem::Lorenz,
        conditions: vec![r0, rb, case_a, case_b, distinct, upper_root, stable_lo, stable_hi, chaotic],
        outcome,
        gamma_roots: roots,
        candidate,
    })
}

/// Generalized Lorenz system `ẋ = σ(y−x) − Ayz` (the convection model after
/// its change of variables).
pub fn gd_exact(sigma: f64, r: f64, b: f64, a: f64) -> Result<ExactDimReport> {
    SystemSpec::generalized_lorenz(sigma, r, b, a)?;
    let ar = a * r;
    let c1_eq = ConditionMargin::equality("case1_sigma_equals_ar", sigma, ar);
    let c1_ineq = ConditionMargin::strict("case1_growth", 4.0 * sigma * r - (b + 1.0) * (b + sigma));
    let c2_b = ConditionMargin::equality("case2_b_is_one", b, 1.0);
    let c2_r = ConditionMargin::strict("case2_r_above_two", r - 2.0);
    let c2_lo = ConditionMargin::strict(
        "case2_sigma_lower",
        sigma - (-3.0 + 2.0 * 3f64.sqrt()) / 3.0 * ar,
    );
    let mut conditions = vec![c1_eq.clone(), c1_ineq.clone(), c2_b.clone(), c2_r.clone(), c2_lo.clone()];
    let mut case2 = vec![c2_b, c2_r, c2_lo];
    if r > 4.0 {
        let upper = (3.0 * r + 2.0 * (r * (2.0 * r + 1.0)).sqrt()) / (r - 4.0) * ar;
        let c2_hi = ConditionMargin::strict("case2_sigma_upper", upper - sigma);
        conditions.push(c2_hi.clone());
        case2.push(c2_hi);
    }
    let case1_ok = c1_eq.satisfied() && c1_ineq.satisfied();
    let case2_ok = case2.iter().all(ConditionMargin::satisfied);
    let candidate = lorenz_formula(sigma, r, b);
    let outcome = if case1_ok || case2_ok {
        Outcome::Formula { value: candidate }
    } else {
        let mut f = failing(&[&c1_eq, &c1_ineq]);
        f.extend(failing(&case2.iter().collect::<Vec<_>>()));
        Outcome::NotApplicable { failing: f }
    };
    Ok(ExactDimReport {
        theorem: Theorem::Gd,
        conditions,
        outcome,
        gamma_roots: None,
        candidate,
    })
}

/// The γ-quadratic for the Yang system, expanded from
/// `4brσ²(γ+2σ−b)² + 16σbγ·K = 0`.
pub fn yang_gamma_quadratic(sigma: f64, r: f64, b: f64) -> GammaQuadratic {
    let k = r * sigma * sigma + b * (sigma + b).powi(2) - 4.0 * sigma * (sigma * r + sigma * b - b * b);
    let lead = 4.0 * b * r * sigma * sigma;
    let c0 = 2.0 * sigma - b;
    GammaQuadratic {
        a: lead,
        b: 2.0 * lead * c0 + 16.0 * sigma * b * k,
        c: lead * c0 * c0,
    }
}

fn yang_formula(sigma: f64, r: f64, b: f64) -> f64 {
    3.0 - 2.0 * (sigma + b) / (sigma + (sigma * sigma + 4.0 * sigma * r).sqrt())
}

pub fn yang_exact(sigma: f64, r: f64, b: f64) -> Result<ExactDimReport> {
    SystemSpec::yang(sigma, r, b)?;
    // below the origin's bifurcation the closed form has no real value
    let candidate = if sigma * sigma + 4.0 * sigma * r >= 0.0 {
        yang_formula(sigma, r, b)
    } else {
        f64::NAN
    };
    let (conditions, outcome, gamma_roots) = if r == 0.0 {
        let c1 = ConditionMargin::strict("zero_r_band", b * (sigma - b));
        // σ − (σ+b)²/(4(σ−b)) ≥ 0, multiplied through by 4(σ−b) > 0
        let c2 = ConditionMargin::non_strict(
            "zero_r_bound",
            4.0 * sigma * (sigma - b) - (sigma + b).powi(2),
        );
        let outcome = if c1.satisfied() && c2.satisfied() {
            Outcome::ConvergenceToEquilibria
        } else {
            Outcome::NotApplicable {
                failing: failing(&[&c1, &c2]),
            }
        };
        (vec![c1, c2], outcome, None)
    } else if r < 0.0 {
        let c = ConditionMargin::strict("negative_r_band", r * sigma + b * (sigma - b));
        let outcome = if c.satisfied() {
            Outcome::ConvergenceToEquilibria
        } else {
            Outcome::NotApplicable {
                failing: failing(&[&c]),
            }
        };
        (vec![c], outcome, None)
    } else {
        let quad = yang_gamma_quadratic(sigma, r, b);
        let roots = quad.real_roots();
        let distinct = ConditionMargin::strict("gamma_distinct_real_roots", quad.distinct_margin());
        let upper_root = ConditionMargin::strict(
            "gamma_upper_root_positive",
            roots.map_or(f64::MIN, |(_, hi)| hi),
        );
        let stable_lo = ConditionMargin::strict("stable_band_lower", r * sigma - b * (b - sigma));
        let stable_hi = ConditionMargin::strict("stable_band_upper", b * (sigma + b) - r * sigma);
        let chaotic = ConditionMargin::strict("formula_branch", r * sigma - b * (sigma + b));
        let outcome = if !(distinct.satisfied() && upper_root.satisfied()) {
            Outcome::NotApplicable {
                failing: failing(&[&distinct, &upper_root]),
            }
        } else if stable_lo.satisfied() && stable_hi.satisfied() {
            Outcome::ConvergenceToEquilibria
        } else if chaotic.satisfied() {
            Outcome::Formula { value: candidate }
        } else {
            Outcome::NotApplicable {
                failing: failing(&[&stable_lo, &stable_hi, &chaotic]),
            }
        };
        (
            vec![distinct, upper_root, stable_lo, stable_hi, chaotic],
            outcome,
            roots,
        )
    };
    Ok(ExactDimReport {
        theorem: Theorem::YangTigan,
        conditions,
        outcome,
        gamma_roots,
        candidate,
    })
}

/// Tigan system, reduced to the Yang system with `σ = a, r = c − a`.
pub fn tigan_exact(a: f64, c: f64, b: f64) -> Result<ExactDimReport> {
    let yang = tigan_to_yang(a, c, b)?;
    let v = yang.values();
    yang_exact(v[0], v[1], v[2])
}

/// Transformed Shimizu–Morioka system.
pub fn shimizu_morioka_exact(alpha: f64, lambda: f64) -> Result<ExactDimReport> {
    SystemSpec::shimizu_morioka_transformed(alpha, lambda)?;
    // a negative radicand fails its condition and is reported as the margin
    let root_margin = |radicand: f64, rhs: f64| {
        if radicand < 0.0 {
            radicand
        } else {
            radicand.sqrt() - rhs
        }
    };
    let c1 = ConditionMargin::non_strict(
        "first_root_bound",
        root_margin(10.0 + 3.0 / alpha - 13.0 * alpha, lambda - 4.0),
    );
    let c2 = ConditionMargin::strict("damping_bound", 1.0 / alpha - alpha - lambda);
    let radicand3 = (8.0 + 15.0 * alpha - 8.0 * alpha.powi(2) - 24.0 * alpha.powi(3))
        / (2.0 * alpha * (alpha + 1.0));
    let c3 = ConditionMargin::non_strict("second_root_bound", root_margin(radicand3, 4.0 - lambda));
    let candidate = 3.0 - 2.0 * (lambda + alpha) / (lambda + (4.0 + lambda * lambda).sqrt());
    let outcome = if c1.satisfied() && c2.satisfied() && c3.satisfied() {
        Outcome::Formula { value: candidate }
    } else {
        Outcome::NotApplicable {
            failing: failing(&[&c1, &c2, &c3]),
        }
    };
    Ok(ExactDimReport {
        theorem: Theorem::ShimizuMorioka,
        conditions: vec![c1, c2, c3],
        outcome,
        gamma_roots: None,
        candidate,
    })
}

/// Routes a catalog system to its closed-form report.
pub fn exact_for(spec: &SystemSpec) -> Result<ExactDimReport> {
    use crate::systems::SystemId::*;
    let v = spec.values();
    match spec.id() {
        Henon => henon_exact(v[0], v[1]),
        Lorenz => lorenz_exact(v[0], v[1], v[2]),
        GeneralizedLorenz => gd_exact(v[0], v[1], v[2], v[3]),
        GlukhovskyDolzhansky => {
            let g = crate::systems::gd_to_generalized_lorenz(v[0], v[1], v[2])?;
            let w = g.values();
            gd_exact(w[0], w[1], w[2], w[3])
        }
        Yang => yang_exact(v[0], v[1], v[2]),
        Tigan => tigan_exact(v[0], v[1], v[2]),
        ShimizuMoriokaTransformed => shimizu_morioka_exact(v[0], v[1]),
        ShimizuMorioka => Err(Error::InvalidArgument(
            "the closed form applies to shimizu_morioka_transformed".into(),
        )),
    }
}

/// Worst sampled value of the dimension condition and where it occurs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeonovMargin {
    pub worst: f64,
    pub worst_index: usize,
    pub margins: Vec<f64>,
}

impl LeonovMargin {
    /// Negative worst margin: the condition holds at every sampled point.
    pub fn holds_on_sample(&self) -> bool {
        self.worst < 0.0
    }
}

/// Evaluates `λ₁ + ⋯ + λ_j + s·λ_{j+1} + v(u)` at every point and returns the maximum.
///
/// For flows `λ_i` are the eigenvalues of the symmetric part of `S J(u) S⁻¹`
/// and `v` is the derivative of a Lyapunov-like function along the flow. For
/// maps the sum runs over logarithms of the singular values of `S J(u) S⁻¹`
/// and `v` is the increment `V(φ(u)) − V(u)`. This only checks the given
/// points and certifies nothing about the rest of the set.
pub fn leonov_margin<V>(
    spec: &SystemSpec,
    s_matrix: &SquareMatrix,
    v_term: V,
    j: usize,
    s: f64,
    points: &[Vec<f64>],
) -> Result<LeonovMargin>
where
    V: Fn(&[f64]) -> f64 + Sync,
{
    leonov_margin_with(spec.kind(), spec.dim(), |u| spec.jacobian(u), s_matrix, v_term, j, s, points)
}

/// Same check for an arbitrary Jacobian field of the given kind and dimension.
#[allow(clippy::too_many_arguments)]
pub fn leonov_margin_with<Jf, V>(
    kind: Kind,
    n: usize,
    jacobian: Jf,
    s_matrix: &SquareMatrix,
    v_term: V,
    j: usize,
    s: f64,
    points: &[Vec<f64>],
) -> Result<LeonovMargin>
where
    Jf: Fn(&[f64]) -> Result<SquareMatrix> + Sync,
    V: Fn(&[f64]) -> f64 + Sync,
{
    if s_matrix.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: s_matrix.dim(),
        });
    }
    if !(0.0..=1.0).contains(&s) || j > n || (j == n && s > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= s <= 1 and j + s <= {n}, got j = {j}, s = {s}"
        )));
    }
    if points.is_empty() {
        return Err(Error::InsufficientPoints { needed: 1, have: 0 });
    }
    let s_inv = s_matrix.inverse()?;
    let margins = points
        .par_iter()
        .map(|u| {
            let m = &(s_matrix * &jacobian(u)?) * &s_inv;
            let lambdas: Vec<f64> = match kind {
                Kind::Flow => eigen_symmetric(&m.symmetric_part())?,
                Kind::Map => singular_values(&m).values().iter().map(|v| v.ln()).collect(),
            };
            let mut total: f64 = lambdas[..j].iter().sum();
            if s > 0.0 {
                total += s * lambdas[j];
            }
            Ok(total + v_term(u))
        })
        .collect::<Result<Vec<f64>>>()?;
    let (worst_index, worst) = margins
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    Ok(LeonovMargin {
        worst,
        worst_index,
        margins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lyap::{equilibrium_exponents, kaplan_yorke, local_dimension_at_equilibrium};
    use crate::smallmat::eigen_general;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn henon_closed_form() {
        let rep = henon_exact(1.4, 0.3).unwrap();
        // fixed point from x² + (1−b)x − a = 0 solved by bisection on [−3, 0]
        let f = |x: f64| x * x + 0.7 * x - 1.4;
        let (mut lo, mut hi) = (-3.0_f64, 0.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let x = 0.5 * (lo + hi);
        assert!((x + 1.5839).abs() < 1e-4);
        let j = SquareMatrix::from_rows([[-2.0 * x, 0.3], [1.0, 0.0]]);
        let mu = eigen_general(&j).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((mu - 3.2598).abs() < 1e-4);
        let want = 1.0 + mu.ln() / (mu.ln() - 0.3f64.ln());
        assert!((rep.value().unwrap() - want).abs() < 1e-9);
        assert!((want - 1.4953).abs() < 1e-4);
    }

    #[test]
    fn henon_limit_and_equilibrium() {
        let near_one = henon_exact(1.4, 1.0 - 1e-12).unwrap().value().unwrap();
        assert!((near_one - 2.0).abs() < 1e-9);
        for (a, b) in [(1.4, 0.3), (1.0, 0.5), (2.0, 0.1)] {
            let rep = henon_exact(a, b).unwrap();
            let h = SystemSpec::henon(a, b).unwrap();
            let xm = henon_fixed_point(a, b);
            let d = local_dimension_at_equilibrium(&h, &[xm, xm]).unwrap().d;
            assert!((rep.value().unwrap() - d).abs() < 1e-9);
            assert!(d > 1.0 && d < 2.0);
        }
        assert!(henon_exact(1.4, 1.2).is_err());
    }

    #[test]
    fn lorenz_classic_values() {
        let r28 = lorenz_exact(10.0, 28.0, 8.0 / 3.0).unwrap();
        assert!((r28.value().unwrap() - 2.4013).abs() < 5e-4);
        let r245 = lorenz_exact(10.0, 24.5, 8.0 / 3.0).unwrap();
        assert!((r245.value().unwrap() - 2.3727).abs() < 5e-4);
        assert!(r28.conditions.iter().take(3).all(ConditionMargin::satisfied));
    }

    #[test]
    fn lorenz_branches() {
        // σr = 50 > (b+1)(b+σ) ≈ 46.4
        let r5 = lorenz_exact(10.0, 5.0, 8.0 / 3.0).unwrap();
        let direct = 3.0 - 2.0 * (10.0 + 8.0 / 3.0 + 1.0) / (11.0 + (81.0_f64 + 200.0).sqrt());
        assert!((r5.value().unwrap() - direct).abs() < 1e-14);
        let margin = r5.condition("formula_branch").unwrap().lhs_minus_rhs;
        assert!((margin - (50.0 - (11.0 / 3.0) * (38.0 / 3.0))).abs() < 1e-12);
        // r = 4 sits in the band where bounded orbits settle
        assert_eq!(lorenz_exact(10.0, 4.0, 8.0 / 3.0).unwrap().outcome, Outcome::ConvergenceToEquilibria);
        let below = lorenz_exact(10.0, 0.5, 8.0 / 3.0).unwrap();
        match &below.outcome {
            Outcome::NotApplicable { failing } => assert!(failing.contains(&"r_above_one".to_string())),
            o => panic!("{o:?}"),
        }
        assert!(!below.certified());
        assert!(below.candidate.is_finite());
        // the formula branch starts at r = 209/45 for σ = 10, b = 8/3
        assert!(lorenz_exact(10.0, 209.0 / 45.0 + 1e-9, 8.0 / 3.0).unwrap().certified());
        assert!(!lorenz_exact(10.0, 209.0 / 45.0 - 1e-9, 8.0 / 3.0).unwrap().certified());
    }

    #[test]
    fn lorenz_case_b_roots() {
        // b > 4 with large r flips the sign of case (a)
        let rep = lorenz_exact(10.0, 100.0, 6.0).unwrap();
        assert!(!rep.condition("case_a").unwrap().satisfied());
        let (lo, hi) = rep.gamma_roots.unwrap();
        for g in [lo, hi] {
            assert!(lorenz_gamma_residual(10.0, 100.0, 6.0, g) < 1e-8);
        }
    }

    fn lorenz_gamma_residual(sigma: f64, r: f64, b: f64, g: f64) -> f64 {
        let base = b * (b + sigma - 1.0).powi(2) - 4.0 * sigma * (sigma * b + b - b * b);
        let t1 = (2.0 * sigma - b + g).powi(2) * (base + sigma * sigma * (r - 1.0) * (b - 4.0));
        let t2 = 4.0 * b * g * (sigma + 1.0) * (base - 3.0 * sigma * sigma * (r - 1.0));
        (t1 + t2).abs() / t1.abs().max(t2.abs()).max(1.0)
    }

    #[test]
    fn lorenz_formula_matches_origin_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 200 {
            let (s, r, b) = (rng.gen_range(1.0..20.0), rng.gen_range(0.1..100.0), rng.gen_range(0.2..6.0));
            let rep = lorenz_exact(s, r, b).unwrap();
            if s * r <= (b + 1.0) * (b + s) {
                continue;
            }
            let spec = SystemSpec::lorenz(s, r, b).unwrap();
            let d = local_dimension_at_equilibrium(&spec, &[0.0; 3]).unwrap().d;
            assert!((rep.candidate - d).abs() < 1e-9, "{s} {r} {b}");
            assert!(rep.candidate > 2.0 && rep.candidate < 3.0);
            checked += 1;
        }
    }

    #[test]
    fn gd_values() {
        let rep = gd_exact(4.0, 700.0, 1.0, 0.0052).unwrap();
        assert!((rep.value().unwrap() - 2.8917).abs() < 5e-4);
        assert!(!rep.condition("case1_sigma_equals_ar").unwrap().satisfied());
        assert!(rep.condition("case2_sigma_upper").unwrap().satisfied());
        let spec = SystemSpec::generalized_lorenz(4.0, 700.0, 1.0, 0.0052).unwrap();
        let d = local_dimension_at_equilibrium(&spec, &[0.0; 3]).unwrap().d;
        assert!((rep.value().unwrap() - d).abs() < 1e-9);
    }

    #[test]
    fn gd_case_one() {
        // σ = A·r with b ≠ 1, so only case 1 can apply
        let (r, b) = (30.0, 2.0);
        let a = 10.0 / r;
        let rep = gd_exact(a * r, r, b, a).unwrap();
        assert!(rep.condition("case1_sigma_equals_ar").unwrap().satisfied());
        assert!(!rep.condition("case2_b_is_one").unwrap().satisfied());
        assert!(rep.certified());
        let spec = SystemSpec::generalized_lorenz(a * r, r, b, a).unwrap();
        let d = local_dimension_at_equilibrium(&spec, &[0.0; 3]).unwrap().d;
        assert!((rep.value().unwrap() - d).abs() < 1e-9);
        let off = gd_exact(a * r * 1.01, r, b, a).unwrap();
        assert!(!off.certified());
    }

    fn yang_gamma_residual(sigma: f64, r: f64, b: f64, g: f64) -> f64 {
        let k = r * sigma * sigma + b * (sigma + b).powi(2) - 4.0 * sigma * (sigma * r + sigma * b - b * b);
        let t1 = 4.0 * b * r * sigma * sigma * (g + 2.0 * sigma - b).powi(2);
        let t2 = 16.0 * sigma * b * g * k;
        (t1 + t2).abs() / t1.abs().max(t2.abs())
    }

    #[test]
    fn yang_roots_back_substitute() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut n = 0;
        while n < 50 {
            let (s, r, b) = (rng.gen_range(0.5..20.0), rng.gen_range(0.1..50.0), rng.gen_range(0.1..5.0));
            let rep = yang_exact(s, r, b).unwrap();
            if let Some((lo, hi)) = rep.gamma_roots {
                assert!(yang_gamma_residual(s, r, b, lo) < 1e-8);
                assert!(yang_gamma_residual(s, r, b, hi) < 1e-8);
                n += 1;
            }
        }
    }

    #[test]
    fn yang_branches() {
        let rep = yang_exact(10.0, 16.0, 8.0 / 3.0).unwrap();
        let (lo, hi) = rep.gamma_roots.unwrap();
        assert!(hi > lo && hi > 0.0);
        let want = 3.0 - 2.0 * (38.0 / 3.0) / (10.0 + 740f64.sqrt());
        assert!((rep.value().unwrap() - want).abs() < 1e-12);
        assert!((want - 2.3191).abs() < 1e-4);
        let spec = SystemSpec::yang(10.0, 16.0, 8.0 / 3.0).unwrap();
        let d = local_dimension_at_equilibrium(&spec, &[0.0; 3]).unwrap().d;
        assert!((want - d).abs() < 1e-9);

        assert_eq!(yang_exact(10.0, -1.0, 8.0 / 3.0).unwrap().outcome, Outcome::ConvergenceToEquilibria);
        assert!(!yang_exact(10.0, -30.0, 8.0 / 3.0).unwrap().certified());
        // r = 0 needs b < σ and 4σ(σ−b) ≥ (σ+b)²
        assert_eq!(yang_exact(10.0, 0.0, 1.0).unwrap().outcome, Outcome::ConvergenceToEquilibria);
        assert!(matches!(yang_exact(1.0, 0.0, 2.0).unwrap().outcome, Outcome::NotApplicable { .. }));
    }

    #[test]
    fn tigan_routes_to_yang() {
        assert_eq!(tigan_exact(10.0, 26.0, 8.0 / 3.0).unwrap(), yang_exact(10.0, 16.0, 8.0 / 3.0).unwrap());
        let spec = SystemSpec::tigan(10.0, 26.0, 8.0 / 3.0).unwrap();
        assert_eq!(exact_for(&spec).unwrap(), yang_exact(10.0, 16.0, 8.0 / 3.0).unwrap());
    }

    #[test]
    fn shimizu_morioka_values() {
        let rep = shimizu_morioka_exact(0.4, 0.9).unwrap();
        let (a, l) = (0.4_f64, 0.9_f64);
        let m1 = (10.0 + 3.0 / a - 13.0 * a).sqrt() - (l - 4.0);
        let m2 = 1.0 / a - a - l;
        let m3 = ((8.0 + 15.0 * a - 8.0 * a * a - 24.0 * a * a * a) / (2.0 * a * (a + 1.0))).sqrt() - (4.0 - l);
        let got: Vec<f64> = rep.conditions.iter().map(|c| c.lhs_minus_rhs).collect();
        assert_eq!(got, vec![m1, m2, m3]);
        assert!(got.iter().all(|m| *m > 0.0));
        let want = 3.0 - 2.6 / (0.9 + 4.81f64.sqrt());
        assert!((rep.value().unwrap() - want).abs() < 1e-9);
        let spec = SystemSpec::shimizu_morioka_transformed(0.4, 0.9).unwrap();
        let d = local_dimension_at_equilibrium(&spec, &[0.0; 3]).unwrap().d;
        assert!((want - d).abs() < 1e-9);
    }

    #[test]
    fn shimizu_morioka_failures() {
        // 1/α − α = 1.5 ≤ λ = 1.6
        let rep = shimizu_morioka_exact(0.5, 1.6).unwrap();
        match rep.outcome {
            Outcome::NotApplicable { failing } => assert!(failing.contains(&"damping_bound".to_string())),
            o => panic!("{o:?}"),
        }
        // α = 1 makes the second radicand negative
        let rep = shimizu_morioka_exact(1.0, 0.1).unwrap();
        assert!(!rep.condition("second_root_bound").unwrap().satisfied());
        assert!(rep.conditions.iter().all(|c| c.lhs_minus_rhs.is_finite()));
    }

    #[test]
    fn margins_are_continuous() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let (s, r, b) = (rng.gen_range(1.0..20.0), rng.gen_range(0.5..60.0), rng.gen_range(0.2..5.0));
            let pairs = [
                (lorenz_exact(s, r, b).unwrap(), lorenz_exact(s + 1e-9, r + 1e-9, b + 1e-9).unwrap()),
                (yang_exact(s, r, b).unwrap(), yang_exact(s + 1e-9, r + 1e-9, b + 1e-9).unwrap()),
                (gd_exact(s, r, 1.0, b / 100.0).unwrap(), gd_exact(s + 1e-9, r + 1e-9, 1.0, b / 100.0 + 1e-9).unwrap()),
                (
                    shimizu_morioka_exact(b / 5.0, s / 10.0).unwrap(),
                    shimizu_morioka_exact(b / 5.0 + 1e-9, s / 10.0 + 1e-9).unwrap(),
                ),
            ];
            for (a, c) in pairs {
                for (x, y) in a.conditions.iter().zip(&c.conditions) {
                    let scale = x.lhs_minus_rhs.abs().max(1.0);
                    // the root-positivity margin is a sentinel when roots are absent
                    if x.lhs_minus_rhs == f64::MIN || y.lhs_minus_rhs == f64::MIN {
                        continue;
                    }
                    assert!((x.lhs_minus_rhs - y.lhs_minus_rhs).abs() < 1e-6 * scale, "{}: {x:?} {y:?}", x.id);
                }
            }
        }
    }

    #[test]
    fn formulas_in_range() {
        for (s, r, b) in [(10.0, 28.0, 8.0 / 3.0), (16.0, 45.92, 4.0), (10.0, 99.96, 8.0 / 3.0)] {
            let v = lorenz_exact(s, r, b).unwrap().value().unwrap();
            assert!(v > 2.0 && v < 3.0);
        }
        let v = yang_exact(10.0, 16.0, 8.0 / 3.0).unwrap().value().unwrap();
        assert!(v > 2.0 && v < 3.0);
    }

    #[test]
    fn report_serializes() {
        let rep = lorenz_exact(10.0, 28.0, 8.0 / 3.0).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        assert!(text.contains("\"kind\":\"formula\""));
        let back: ExactDimReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn leonov_full_dimension_is_divergence() {
        let l = SystemSpec::lorenz(10.0, 28.0, 8.0 / 3.0).unwrap();
        let pts = vec![vec![1.0, 2.0, 3.0], vec![-5.0, 4.0, 20.0]];
        let m = leonov_margin(&l, &SquareMatrix::identity(3), |_| 0.0, 3, 0.0, &pts).unwrap();
        assert!((m.worst + 41.0 / 3.0).abs() < 1e-10);
        assert!(m.holds_on_sample());
    }

    #[test]
    fn leonov_stable_linear_system() {
        for n in 2..=4 {
            let m = leonov_margin_with(
                Kind::Flow,
                n,
                |_| Ok(SquareMatrix::identity(n).scale(-1.0)),
                &SquareMatrix::identity(n),
                |_| 0.0,
                1,
                1.0,
                &[vec![0.3; n], vec![-1.0; n]],
            )
            .unwrap();
            assert!((m.worst + 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn leonov_shimizu_morioka_diagnostic() {
        let (alpha, lambda) = (0.4, 0.9);
        let spec = SystemSpec::shimizu_morioka_transformed(alpha, lambda).unwrap();
        let k = 1.0;
        let s = SquareMatrix::from_rows([[-1.0 / k, 0.0, 0.0], [lambda - alpha, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let d = shimizu_morioka_exact(alpha, lambda).unwrap().candidate;
        let pts = vec![vec![0.0; 3], vec![1.0, 0.5, 1.2], vec![-1.2, 0.1, 1.5]];
        let m = leonov_margin(&spec, &s, |_| 0.0, 2, d - 2.0, &pts).unwrap();
        assert!(m.worst.is_finite());
        assert_eq!(m.margins.len(), 3);
    }

    #[test]
    fn leonov_rejects_bad_inputs() {
        let l = SystemSpec::lorenz(10.0, 28.0, 8.0 / 3.0).unwrap();
        let pts = vec![vec![1.0, 2.0, 3.0]];
        let sing = SquareMatrix::from_rows([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(leonov_margin(&l, &sing, |_| 0.0, 2, 0.5, &pts).unwrap_err(), Error::SingularMatrix);
        assert!(leonov_margin(&l, &SquareMatrix::identity(3), |_| 0.0, 3, 0.5, &pts).is_err());
        assert!(leonov_margin(&l, &SquareMatrix::identity(3), |_| 0.0, 1, 0.5, &[]).is_err());
        assert!(leonov_margin(&l, &SquareMatrix::identity(2), |_| 0.0, 1, 0.5, &pts).is_err());
    }

    #[test]
    fn leonov_map_semantics() {
        // for Hénon, ln σ₁ + ln σ₂ = ln b at every point
        let h = SystemSpec::henon(1.4, 0.3).unwrap();
        let pts: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64 * 0.1 - 0.5, 0.2]).collect();
        let m = leonov_margin(&h, &SquareMatrix::identity(2), |_| 0.0, 2, 0.0, &pts).unwrap();
        for v in &m.margins {
            assert!((v - 0.3f64.ln()).abs() < 1e-12);
        }
        let exps = equilibrium_exponents(&h, &[henon_fixed_point(1.4, 0.3); 2]).unwrap();
        assert!(kaplan_yorke(&exps).unwrap().j == 1);
    }
}
