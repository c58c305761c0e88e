//! Finite-time Lyapunov exponents and the Kaplan–Yorke dimension.
//!
//! Exponents come from a product SVD of the per-segment factor chain: QR
//! sweeps run backward over the chain, the chain of transposed R factors is
//! swept again, and the exponents are the summed logarithms of the final R
//! diagonals divided by the horizon. A single forward QR pass (Benettin's
//! scheme) is kept alongside as an independent estimate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{factor_sequence, FactorSequence, IntegratorConfig};
use crate::smallmat::{eigen_general, qr_posdiag, singular_values, SquareMatrix};
use crate::systems::{Kind, SystemSpec};

/// Descending finite-time exponents at horizon `t` from `u0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FtLeSpectrum {
    /// Time units for flows, iterations for maps.
    pub t: f64,
    pub u0: Vec<f64>,
    pub les: Vec<f64>,
    /// Same exponents from one forward QR pass.
    pub qr_les: Vec<f64>,
}

impl FtLeSpectrum {
    pub fn sum(&self) -> f64 {
        self.les.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductSvdResult {
    /// Descending.
    pub les: Vec<f64>,
    /// Diagonals of the R factors from the final sweep, in sweep storage order.
    pub r_diagonals: Vec<Vec<f64>>,
    pub sweeps: usize,
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn check_diagonal(r: &SquareMatrix, index: usize) -> Result<()> {
    if (0..r.dim()).any(|k| r[(k, k)] == 0.0) {
        return Err(Error::SingularFactor { index });
    }
    Ok(())
}

/// Runs `sweeps` product-SVD sweeps over the chain and returns the exponents.
pub fn product_svd(seq: &FactorSequence, sweeps: usize) -> Result<ProductSvdResult> {
    if sweeps == 0 {
        return Err(Error::InvalidArgument("sweeps must be >= 1".into()));
    }
    let n = seq.dim();
    let big_n = seq.len();
    // Storage order is newest first, so that a backward pass meets the oldest factor first
    // and the stored product a[0]·…·a[N-1] is the fundamental matrix itself.
    let mut a: Vec<SquareMatrix> = seq.factors.iter().rev().copied().collect();
    let mut r = vec![SquareMatrix::zeros(n); big_n];
    for sweep in 0..sweeps {
        let mut q = SquareMatrix::identity(n);
        for j in (0..big_n).rev() {
            let pair = qr_posdiag(&(&a[j] * &q));
            if sweep == 0 {
                check_diagonal(&pair.r, big_n - 1 - j)?;
            }
            r[j] = pair.r;
            q = pair.q;
        }
        if sweep + 1 < sweeps {
            for k in 0..big_n {
                a[k] = r[big_n - 1 - k].transpose();
            }
        }
    }
    let mut sums = vec![0.0; n];
    let mut r_diagonals = Vec::with_capacity(big_n);
    for rk in &r {
        let d = rk.diagonal();
        for (s, v) in sums.iter_mut().zip(&d) {
            *s += v.ln();
        }
        r_diagonals.push(d);
    }
    let t = seq.horizon();
    Ok(ProductSvdResult {
        les: sorted_desc(sums.into_iter().map(|s| s / t).collect()),
        r_diagonals,
        sweeps,
    })
}

/// Forward QR re-orthonormalization after each factor, summing ln diag R.
pub fn benettin_les(seq: &FactorSequence) -> Result<Vec<f64>> {
    let n = seq.dim();
    let mut q = SquareMatrix::identity(n);
    let mut sums = vec![0.0; n];
    for (i, f) in seq.factors.iter().enumerate() {
        let pair = qr_posdiag(&(f * &q));
        check_diagonal(&pair.r, i)?;
        for (k, s) in sums.iter_mut().enumerate() {
            *s += pair.r[(k, k)].ln();
        }
        q = pair.q;
    }
    let t = seq.horizon();
    Ok(sorted_desc(sums.into_iter().map(|s| s / t).collect()))
}

/// Finite-time exponents along the orbit of `u0` over `seg_len · n_factors`.
pub fn finite_time_les(
    spec: &SystemSpec,
    u0: &[f64],
    seg_len: f64,
    n_factors: usize,
    sweeps: usize,
    cfg: &IntegratorConfig,
) -> Result<FtLeSpectrum> {
    let seq = factor_sequence(spec, u0, seg_len, n_factors, cfg)?;
    spectrum_of(&seq, sweeps)
}

/// Exponents of an existing chain, by both algorithms.
pub fn spectrum_of(seq: &FactorSequence, sweeps: usize) -> Result<FtLeSpectrum> {
    let svd = product_svd(seq, sweeps)?;
    Ok(FtLeSpectrum {
        t: seq.horizon(),
        u0: seq.origin.clone(),
        les: svd.les,
        qr_les: benettin_les(seq)?,
    })
}

/// Largest condition number for which the explicit product is trusted.
pub const LCE_MAX_CONDITION: f64 = 1e12;

/// Column-norm exponents `(1/T) ln ‖column‖` of the explicit product, descending.
///
/// Only meaningful on short horizons; an explicit product with condition
/// number of `LCE_MAX_CONDITION` or more is rejected.
pub fn lce_column_exponents(seq: &FactorSequence) -> Result<Vec<f64>> {
    let p = seq.explicit_product();
    let sv = singular_values(&p);
    let v = sv.values();
    let cond = v[0] / v[v.len() - 1];
    if !p.is_finite() || !(cond < LCE_MAX_CONDITION) {
        return Err(Error::IllConditioned { cond });
    }
    let t = seq.horizon();
    Ok(sorted_desc(
        (0..p.dim()).map(|j| p.column_norm(j).ln() / t).collect(),
    ))
}

/// Which exponent vector a dimension was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KySource {
    FiniteTimeLes,
    EquilibriumEigenvalues,
    FixedPointMultipliers,
    ColumnExponents,
    Given,
}

/// Kaplan–Yorke triple: `d = j + s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KyDimension {
    pub j: usize,
    pub s: f64,
    pub d: f64,
    pub source: KySource,
}

fn check_descending(exps: &[f64]) -> Result<()> {
    if exps.is_empty() {
        return Err(Error::InvalidArgument("empty exponent vector".into()));
    }
    if exps.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite exponent".into()));
    }
    if exps.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidArgument(format!(
            "exponents must be descending: {exps:?}"
        )));
    }
    Ok(())
}

/// Kaplan–Yorke dimension of a descending exponent vector.
///
/// `j` is the largest index whose partial sum is nonnegative (a sum of
/// exactly zero counts), `s = (λ₁+⋯+λ_j)/|λ_{j+1}|`.
pub fn kaplan_yorke(exps: &[f64]) -> Result<KyDimension> {
    kaplan_yorke_from(exps, KySource::Given)
}

pub fn kaplan_yorke_from(exps: &[f64], source: KySource) -> Result<KyDimension> {
    check_descending(exps)?;
    let n = exps.len();
    let mut j = 0;
    let mut partial = 0.0;
    while j < n && partial + exps[j] >= 0.0 {
        partial += exps[j];
        j += 1;
    }
    if j == 0 || j == n {
        return Ok(KyDimension {
            j,
            s: 0.0,
            d: j as f64,
            source,
        });
    }
    let s = partial / exps[j].abs();
    Ok(KyDimension {
        j,
        s,
        d: j as f64 + s,
        source,
    })
}

/// The Kaplan–Yorke expression `j + (λ₁+⋯+λ_j)/|λ_{j+1}|` at a caller-chosen `j`,
/// without the sign rule that selects `j`.
pub fn kaplan_yorke_at(exps: &[f64], j: usize) -> Result<f64> {
    check_descending(exps)?;
    if j >= exps.len() {
        return Err(Error::InvalidArgument(format!(
            "j = {j} needs at least {} exponents",
            j + 1
        )));
    }
    let partial: f64 = exps[..j].iter().sum();
    Ok(j as f64 + partial / exps[j].abs())
}

/// Exponents at a stationary point: eigenvalue real parts for flows,
/// logarithms of eigenvalue moduli for maps; descending.
pub fn equilibrium_exponents(spec: &SystemSpec, coordinates: &[f64]) -> Result<Vec<f64>> {
    let j = spec.jacobian(coordinates)?;
    let eig = eigen_general(&j);
    let v = match spec.kind() {
        Kind::Flow => eig.iter().map(|z| z.re).collect(),
        Kind::Map => eig.iter().map(|z| z.norm().ln()).collect(),
    };
    Ok(sorted_desc(v))
}

/// Local Lyapunov dimension at a stationary point.
pub fn local_dimension_at_equilibrium(spec: &SystemSpec, coordinates: &[f64]) -> Result<KyDimension> {
    let exps = equilibrium_exponents(spec, coordinates)?;
    let source = match spec.kind() {
        Kind::Flow => KySource::EquilibriumEigenvalues,
        Kind::Map => KySource::FixedPointMultipliers,
    };
    kaplan_yorke_from(&exps, source)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub index: usize,
    pub spectrum: FtLeSpectrum,
    pub ky: KyDimension,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    /// Maximum dimension; ties go to the lowest point index.
    pub best: SweepPoint,
    pub points: Vec<SweepPoint>,
    pub failures: Vec<(usize, Error)>,
}

/// Finite-time dimension at every point and the maximum over them.
///
/// Points are processed concurrently. A failed point is recorded and
/// skipped; the call fails only when every point fails.
pub fn sweep_max_dimension(
    spec: &SystemSpec,
    points: &[Vec<f64>],
    seg_len: f64,
    n_factors: usize,
    sweeps: usize,
    cfg: &IntegratorConfig,
) -> Result<SweepReport> {
    if points.is_empty() {
        return Err(Error::InsufficientPoints { needed: 1, have: 0 });
    }
    let results: Vec<Result<SweepPoint>> = points
        .par_iter()
        .enumerate()
        .map(|(index, u0)| {
            let spectrum = finite_time_les(spec, u0, seg_len, n_factors, sweeps, cfg)?;
            let ky = kaplan_yorke_from(&spectrum.les, KySource::FiniteTimeLes)?;
            Ok(SweepPoint {
                index,
                spectrum,
                ky,
            })
        })
        .collect();
    let mut ok = Vec::new();
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(p) => ok.push(p),
            Err(e) => failures.push((i, e)),
        }
    }
    let Some(best) = ok
        .iter()
        .fold(None::<&SweepPoint>, |acc, p| match acc {
            Some(b) if b.ky.d >= p.ky.d => Some(b),
            _ => Some(p),
        })
        .cloned()
    else {
        let first = failures.swap_remove(0).1;
        return Err(Error::AllPointsFailed(Box::new(first)));
    };
    Ok(SweepReport {
        best,
        points: ok,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallmat::SingularSpectrum;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Short chains with nearby singular values need many sweeps.
    const CONVERGED: usize = 1000;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> SquareMatrix {
        let v: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        SquareMatrix::from_row_slice(n, &v).unwrap()
    }

    fn well_conditioned(rng: &mut ChaCha8Rng, n: usize) -> SquareMatrix {
        loop {
            let m = random_matrix(rng, n);
            let s = singular_values(&m);
            if s.values()[0] / s.values()[n - 1] < 50.0 {
                return m;
            }
        }
    }

    fn ln_sv(m: &SquareMatrix) -> Vec<f64> {
        singular_values(m).values().iter().map(|v| v.ln()).collect()
    }

    #[test]
    fn single_factor_is_its_own_svd() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = well_conditioned(&mut rng, 3);
        let seq = FactorSequence::from_factors(vec![m], 0.5).unwrap();
        let res = product_svd(&seq, CONVERGED).unwrap();
        for (a, b) in res.les.iter().zip(ln_sv(&m)) {
            assert!((a - b / 0.5).abs() < 1e-10);
        }
        assert_eq!(res.sweeps, CONVERGED);
        assert_eq!(res.r_diagonals.len(), 1);
    }

    #[test]
    fn diagonal_chain() {
        let f = SquareMatrix::from_diagonal(&[2.0, 0.5]);
        let seq = FactorSequence::from_factors(vec![f; 7], 0.25).unwrap();
        let res = product_svd(&seq, 3).unwrap();
        assert!((res.les[0] - 2f64.ln() / 0.25).abs() < 1e-14);
        assert!((res.les[1] - 0.5f64.ln() / 0.25).abs() < 1e-14);
        assert_eq!(benettin_les(&seq).unwrap(), res.les);
    }

    #[test]
    fn random_chains_match_explicit_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let k = rng.gen_range(1..=8);
            let fs: Vec<_> = (0..k).map(|_| well_conditioned(&mut rng, 3)).collect();
            let seq = FactorSequence::from_factors(fs, 1.0).unwrap();
            let res = product_svd(&seq, CONVERGED).unwrap();
            let want = ln_sv(&seq.explicit_product());
            let got: Vec<f64> = res.les.iter().map(|v| v * k as f64).collect();
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() < 1e-6, "{got:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn product_order_matters() {
        // the chain means f3·f2·f1, whose spectrum differs from f1·f2·f3
        let f1 = SquareMatrix::from_rows([[3.0, 0.0], [0.0, 1.0]]);
        let f2 = SquareMatrix::from_rows([[1.0, 2.0], [0.0, 1.0]]);
        let f3 = SquareMatrix::from_rows([[1.0, 0.0], [2.0, 1.0]]);
        let seq = FactorSequence::from_factors(vec![f1, f2, f3], 1.0).unwrap();
        let res = product_svd(&seq, CONVERGED).unwrap();
        let want = ln_sv(&(&(&f3 * &f2) * &f1));
        let wrong = ln_sv(&(&(&f1 * &f2) * &f3));
        assert!((want[0] - wrong[0]).abs() > 0.1);
        assert!((res.les[0] * 3.0 - want[0]).abs() < 1e-9);
        assert!((benettin_les(&seq).unwrap()[0] * 3.0 - want[0]).abs() > 1e-3);
    }

    #[test]
    fn singular_factor_is_reported() {
        let good = SquareMatrix::identity(2);
        let bad = SquareMatrix::from_rows([[1.0, 1.0], [1.0, 1.0]]);
        let seq = FactorSequence::from_factors(vec![good, bad, good], 1.0).unwrap();
        assert_eq!(
            product_svd(&seq, 3).unwrap_err(),
            Error::SingularFactor { index: 1 }
        );
        assert_eq!(benettin_les(&seq).unwrap_err(), Error::SingularFactor { index: 1 });
        assert!(product_svd(&seq, 0).is_err());
    }

    #[test]
    fn sweeps_converge_on_short_chains() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let fs: Vec<_> = (0..5).map(|_| well_conditioned(&mut rng, 3)).collect();
            let seq = FactorSequence::from_factors(fs, 1.0).unwrap();
            let a = product_svd(&seq, CONVERGED).unwrap().les;
            let b = product_svd(&seq, CONVERGED + 1).unwrap().les;
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn ky_examples() {
        let lor = [
            (-11.0 + 1201f64.sqrt()) / 2.0,
            -8.0 / 3.0,
            (-11.0 - 1201f64.sqrt()) / 2.0,
        ];
        let k = kaplan_yorke(&lor).unwrap();
        assert_eq!(k.j, 2);
        assert!((k.d - 2.4013).abs() < 5e-5);
        assert_eq!(kaplan_yorke(&[-0.1, -1.0, -2.0]).unwrap().d, 0.0);
        let full = kaplan_yorke(&[1.0, 0.5, 0.2]).unwrap();
        assert_eq!((full.j, full.s, full.d), (3, 0.0, 3.0));
        assert!(kaplan_yorke(&[1.0, 2.0]).is_err());
        assert!(kaplan_yorke(&[]).is_err());
    }

    #[test]
    fn ky_zero_sum_counts_upward() {
        let k = kaplan_yorke(&[1.0, -1.0, -2.0]).unwrap();
        assert_eq!(k.j, 2);
        assert_eq!(k.d, 2.0);
        let k = kaplan_yorke(&[0.0, -1.0]).unwrap();
        assert_eq!(k.j, 1);
    }

    #[test]
    fn ky_convex_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let n = rng.gen_range(2..=4);
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..3.0)).collect();
            v.sort_by(|a, b| b.total_cmp(a));
            let k = kaplan_yorke(&v).unwrap();
            assert!((0.0..1.0).contains(&k.s));
            assert!((k.d - (k.j as f64 + k.s)).abs() < 1e-15);
            if k.j >= 1 && k.j < n {
                let sj: f64 = v[..k.j].iter().sum();
                let sj1 = sj + v[k.j];
                assert!(((1.0 - k.s) * sj + k.s * sj1).abs() < 1e-12);
                assert!((kaplan_yorke_at(&v, k.j).unwrap() - k.d).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn ky_at_explicit_index() {
        assert!((kaplan_yorke_at(&[-0.5, -0.5, -2.0], 2).unwrap() - 1.5).abs() < 1e-15);
        assert!(kaplan_yorke_at(&[-0.5, -1.0], 2).is_err());
    }

    #[test]
    fn lce_examples() {
        let seq = FactorSequence::from_factors(vec![SquareMatrix::identity(3); 4], 0.1).unwrap();
        assert_eq!(lce_column_exponents(&seq).unwrap(), vec![0.0; 3]);
        let f = SquareMatrix::from_diagonal(&[3.0, 0.2, 1.5]);
        let seq = FactorSequence::from_factors(vec![f; 3], 1.0).unwrap();
        let lce = lce_column_exponents(&seq).unwrap();
        let les = product_svd(&seq, 3).unwrap().les;
        for (a, b) in lce.iter().zip(&les) {
            assert!((a - b).abs() < 1e-14);
        }
        let stiff = SquareMatrix::from_diagonal(&[1e4, 1e-4]);
        let seq = FactorSequence::from_factors(vec![stiff; 2], 1.0).unwrap();
        assert!(matches!(lce_column_exponents(&seq), Err(Error::IllConditioned { .. })));
    }

    #[test]
    fn top_exponent_can_exceed_top_column_exponent() {
        // a shear: σ₁ is the golden ratio while both columns have norm ≤ √2
        let shear = SquareMatrix::from_rows([[1.0, 1.0], [0.0, 1.0]]);
        let seq = FactorSequence::from_factors(vec![shear], 1.0).unwrap();
        let les = product_svd(&seq, CONVERGED).unwrap().les;
        let lce = lce_column_exponents(&seq).unwrap();
        assert!(les[0] > lce[0]);
        assert!(les[0] <= lce[0] + 2f64.ln() / 2.0);
    }

    #[test]
    fn column_exponent_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let n = rng.gen_range(2..=4);
            let k = rng.gen_range(1..=4);
            let fs: Vec<_> = (0..k).map(|_| well_conditioned(&mut rng, n)).collect();
            let seq = FactorSequence::from_factors(fs, 0.5).unwrap();
            let t = seq.horizon();
            let les = product_svd(&seq, CONVERGED).unwrap().les;
            let lce = lce_column_exponents(&seq).unwrap();
            for i in 0..n {
                let slack = ((n - i) as f64).ln() / (2.0 * t);
                assert!(les[i] <= lce[i] + slack + 1e-9);
                let tail_le: f64 = les[i..].iter().sum();
                let tail_lce: f64 = lce[i..].iter().sum();
                assert!(tail_le <= tail_lce + 1e-9);
            }
            assert!(les[n - 1] <= lce[n - 1] + 1e-9);
        }
    }

    #[test]
    fn similarity_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let fs: Vec<_> = (0..6).map(|_| well_conditioned(&mut rng, 3)).collect();
            let p = well_conditioned(&mut rng, 3);
            let pinv = p.inverse().unwrap();
            let sv = SingularSpectrum::new(singular_values(&p).values().to_vec()).unwrap();
            let cond = sv.values()[0] / sv.values()[2];
            let seq = FactorSequence::from_factors(fs.clone(), 0.5).unwrap();
            let mut conj = fs;
            conj[0] = &conj[0] * &pinv;
            conj[5] = &p * &conj[5];
            let seq2 = FactorSequence::from_factors(conj, 0.5).unwrap();
            let a = product_svd(&seq, CONVERGED).unwrap().les;
            let b = product_svd(&seq2, CONVERGED).unwrap().les;
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= cond.ln() / seq.horizon() + 1e-9);
            }
        }
    }

    #[test]
    fn lorenz_equilibrium_dimensions() {
        let l = SystemSpec::lorenz(10.0, 28.0, 8.0 / 3.0).unwrap();
        let d = local_dimension_at_equilibrium(&l, &[0.0; 3]).unwrap();
        assert!((d.d - 2.4013).abs() < 5e-5);
        assert_eq!(d.source, KySource::EquilibriumEigenvalues);
        let stable = SystemSpec::lorenz(10.0, 0.5, 8.0 / 3.0).unwrap();
        assert_eq!(local_dimension_at_equilibrium(&stable, &[0.0; 3]).unwrap().d, 0.0);
        // weakly stable focus: strict rule gives 0, the j = 2 expression gives 1.9989
        let l = SystemSpec::lorenz(10.0, 24.5, 8.0 / 3.0).unwrap();
        let s1 = l.equilibria()[1].coordinates.clone();
        assert_eq!(local_dimension_at_equilibrium(&l, &s1).unwrap().d, 0.0);
        let exps = equilibrium_exponents(&l, &s1).unwrap();
        assert!((kaplan_yorke_at(&exps, 2).unwrap() - 1.9989).abs() < 1e-4);
    }

    #[test]
    fn henon_fixed_point_dimension() {
        let h = SystemSpec::henon(1.4, 0.3).unwrap();
        let xm = h.equilibria().into_iter().find(|e| e.label == "x-").unwrap();
        let k = local_dimension_at_equilibrium(&h, &xm.coordinates).unwrap();
        assert_eq!(k.j, 1);
        assert!((k.d - 1.4953).abs() < 1e-4);
    }

    #[test]
    fn lorenz_at_origin_gives_eigenvalue_exponents() {
        let l = SystemSpec::lorenz(10.0, 28.0, 8.0 / 3.0).unwrap();
        let cfg = IntegratorConfig::default();
        let s = finite_time_les(&l, &[0.0; 3], 0.1, 2000, 3, &cfg).unwrap();
        let want = equilibrium_exponents(&l, &[0.0; 3]).unwrap();
        for (a, b) in s.les.iter().zip(&want) {
            assert!((a - b).abs() < 1e-3, "{:?} vs {want:?}", s.les);
        }
    }

    #[test]
    fn henon_sum_is_log_b() {
        let h = SystemSpec::henon(1.4, 0.3).unwrap();
        let s = finite_time_les(&h, &[0.0, 0.0], 1.0, 10_000, 3, &IntegratorConfig::default()).unwrap();
        assert!((s.sum() - 0.3f64.ln()).abs() < 1e-6);
        assert!(s.les.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(s.t, 10_000.0);
    }

    #[test]
    fn sweep_single_point_and_failures() {
        let l = SystemSpec::lorenz(10.0, 28.0, 8.0 / 3.0).unwrap();
        let cfg = IntegratorConfig::default();
        let p = vec![1.0, 1.0, 1.0];
        let rep = sweep_max_dimension(&l, &[p.clone()], 0.1, 50, 3, &cfg).unwrap();
        let direct = finite_time_les(&l, &p, 0.1, 50, 3, &cfg).unwrap();
        assert_eq!(rep.best.spectrum, direct);
        let bad = vec![1.0, 1.0];
        let rep = sweep_max_dimension(&l, &[bad.clone(), p.clone(), p], 0.1, 50, 3, &cfg).unwrap();
        assert_eq!(rep.failures.len(), 1);
        assert_eq!(rep.best.index, 1, "ties resolve to the lowest index");
        assert!(matches!(
            sweep_max_dimension(&l, &[bad], 0.1, 50, 3, &cfg),
            Err(Error::AllPointsFailed(_))
        ));
        assert!(sweep_max_dimension(&l, &[], 0.1, 50, 3, &cfg).is_err());
    }
}
