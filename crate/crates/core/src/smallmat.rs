//! Dense linear algebra for small square matrices (n ≤ 4).
//!
//! Everything here works on a stack-allocated [`SquareMatrix`] so the
//! integrator and the product SVD never touch the heap in their inner loops.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 4;

/// Row-major n×n matrix with n ≤ [`MAX_DIM`].
#[derive(Clone, Copy, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    a: [f64; MAX_DIM * MAX_DIM],
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "dimension {n} out of range");
        Self {
            n,
            a: [0.0; MAX_DIM * MAX_DIM],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from `n*n` row-major entries.
    pub fn from_row_slice(n: usize, entries: &[f64]) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&n) {
            return Err(Error::InvalidArgument(format!(
                "matrix dimension {n} outside 1..={MAX_DIM}"
            )));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = entries[i * n + j];
            }
        }
        Ok(m)
    }

    pub fn from_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros(N);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Row-major entries, `n*n` of them.
    pub fn to_row_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.a[..].iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().all(|v| v.is_finite())
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn column_norm(&self, j: usize) -> f64 {
        (0..self.n).map(|i| self[(i, j)].powi(2)).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut m = *self;
        m.a.iter_mut().for_each(|v| *v *= c);
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut m = *self;
        for (x, y) in m.a.iter_mut().zip(other.a.iter()) {
            *x += y;
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Symmetric part ½(M + Mᵀ).
    pub fn symmetric_part(&self) -> Self {
        self.add(&self.transpose()).scale(0.5)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut m = *self;
        let mut det = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| m[(i, k)].abs().total_cmp(&m[(j, k)].abs()))
                .unwrap();
            if m[(p, k)] == 0.0 {
                return 0.0;
            }
            if p != k {
                for j in 0..n {
                    let t = m[(k, j)];
                    m[(k, j)] = m[(p, j)];
                    m[(p, j)] = t;
                }
                det = -det;
            }
            det *= m[(k, k)];
            for i in k + 1..n {
                let f = m[(i, k)] / m[(k, k)];
                for j in k..n {
                    m[(i, j)] -= f * m[(k, j)];
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut m = *self;
        let mut inv = Self::identity(n);
        let scale = self.max_abs();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| m[(i, k)].abs().total_cmp(&m[(j, k)].abs()))
                .unwrap();
            if m[(p, k)].abs() <= f64::EPSILON * scale * n as f64 || !m[(p, k)].is_finite() {
                return Err(Error::SingularMatrix);
            }
            if p != k {
                for j in 0..n {
                    m.a.swap(k * MAX_DIM + j, p * MAX_DIM + j);
                    inv.a.swap(k * MAX_DIM + j, p * MAX_DIM + j);
                }
            }
            let pivot = m[(k, k)];
            for j in 0..n {
                m[(k, j)] /= pivot;
                inv[(k, j)] /= pivot;
            }
            for i in 0..n {
                if i != k {
                    let f = m[(i, k)];
                    if f != 0.0 {
                        for j in 0..n {
                            m[(i, j)] -= f * m[(k, j)];
                            inv[(i, j)] -= f * inv[(k, j)];
                        }
                    }
                }
            }
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.n && j < self.n);
        &self.a[i * MAX_DIM + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.n && j < self.n);
        &mut self.a[i * MAX_DIM + j]
    }
}

impl Mul for SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, rhs: SquareMatrix) -> SquareMatrix {
        &self * &rhs
    }
}

impl Mul<&SquareMatrix> for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in product");
        let n = self.n;
        let mut c = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    c[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        c
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<f64>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)]).collect())
            .collect();
        f.debug_struct("SquareMatrix").field("rows", &rows).finish()
    }
}

/// Singular values in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSpectrum(Vec<f64>);

impl SingularSpectrum {
    /// Wraps values that the caller guarantees are nonnegative; they are sorted here.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidArgument(
                "singular values must be finite and nonnegative".into(),
            ));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Orthogonal-triangular factorization with a nonnegative R diagonal.
#[derive(Clone, Copy, Debug)]
pub struct QrPair {
    pub q: SquareMatrix,
    pub r: SquareMatrix,
}

/// Householder QR followed by a sign fix so that `r` has a nonnegative diagonal.
///
/// For invertible input the factorization is unique. Exactly singular input
/// leaves zeros on the diagonal of `r`.
pub fn qr_posdiag(m: &SquareMatrix) -> QrPair {
    let n = m.dim();
    let mut r = *m;
    let mut q = SquareMatrix::identity(n);
    let mut v = [0.0; MAX_DIM];
    for k in 0..n.saturating_sub(1) {
        let below: f64 = (k + 1..n).map(|i| r[(i, k)].powi(2)).sum();
        if below == 0.0 {
            continue;
        }
        let norm = (below + r[(k, k)].powi(2)).sqrt();
        let alpha = if r[(k, k)] >= 0.0 { -norm } else { norm };
        v[k] = r[(k, k)] - alpha;
        for i in k + 1..n {
            v[i] = r[(i, k)];
        }
        let vtv: f64 = (k..n).map(|i| v[i] * v[i]).sum();
        // R <- H R
        for j in k..n {
            let dot: f64 = (k..n).map(|i| v[i] * r[(i, j)]).sum();
            let f = 2.0 * dot / vtv;
            for i in k..n {
                r[(i, j)] -= f * v[i];
            }
        }
        // Q <- Q H
        for i in 0..n {
            let dot: f64 = (k..n).map(|l| q[(i, l)] * v[l]).sum();
            let f = 2.0 * dot / vtv;
            for l in k..n {
                q[(i, l)] -= f * v[l];
            }
        }
        r[(k, k)] = alpha;
        for i in k + 1..n {
            r[(i, k)] = 0.0;
        }
    }
    for k in 0..n {
        if r[(k, k)] < 0.0 {
            for j in 0..n {
                r[(k, j)] = -r[(k, j)];
                q[(j, k)] = -q[(j, k)];
            }
        }
    }
    QrPair { q, r }
}

const JACOBI_MAX_SWEEPS: usize = 80;

/// Singular values by one-sided Jacobi rotations on the columns of `m`.
pub fn singular_values(m: &SquareMatrix) -> SingularSpectrum {
    let n = m.dim();
    let mut a = *m;
    let scale = m.frobenius_norm();
    if scale == 0.0 {
        return SingularSpectrum(vec![0.0; n]);
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        let mut off_mass = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..n {
                    alpha += a[(i, p)] * a[(i, p)];
                    beta += a[(i, q)] * a[(i, q)];
                    gamma += a[(i, p)] * a[(i, q)];
                }
                off_mass += gamma * gamma;
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let ap = a[(i, p)];
                    let aq = a[(i, q)];
                    a[(i, p)] = c * ap - s * aq;
                    a[(i, q)] = s * ap + c * aq;
                }
            }
        }
        if !rotated || off_mass.sqrt() < 1e-30 * scale * scale {
            break;
        }
    }
    let mut values: Vec<f64> = (0..n).map(|j| a.column_norm(j)).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    SingularSpectrum(values)
}

/// Singular value function: `σ₁⋯σ_⌊d⌋ · σ_{⌊d⌋+1}^{d−⌊d⌋}`, with `ω_0 = 1`.
pub fn omega_d(spectrum: &SingularSpectrum, d: f64) -> Result<f64> {
    let n = spectrum.len();
    if !(0.0..=n as f64).contains(&d) {
        return Err(Error::InvalidArgument(format!(
            "d = {d} outside [0, {n}]"
        )));
    }
    let j = d.floor() as usize;
    let s = d - j as f64;
    let sv = spectrum.values();
    let mut w: f64 = sv[..j.min(n)].iter().product();
    if s > 0.0 {
        let next = sv[j];
        if next == 0.0 {
            return Ok(0.0);
        }
        w *= next.powf(s);
    }
    Ok(w)
}

/// Symmetry tolerance relative to `max(1, max|m_ij|)`.
const SYMMETRY_TOL: f64 = 1e-12;

/// Eigenvalues of a symmetric matrix, descending, by cyclic Jacobi rotations.
pub fn eigen_symmetric(m: &SquareMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    let scale = m.max_abs().max(1.0);
    let mut asym: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            asym = asym.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let mut a = m.symmetric_part();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].powi(2))
            .sum();
        if off.sqrt() <= 1e-17 * a.frobenius_norm() || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev = a.diagonal();
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

/// Coefficients `c[0..n]` of the monic characteristic polynomial
/// `λⁿ + c[0]λⁿ⁻¹ + … + c[n-1]`, by Faddeev–LeVerrier.
pub fn characteristic_polynomial(m: &SquareMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut coeffs = Vec::with_capacity(n);
    let mut mk = SquareMatrix::zeros(n);
    let id = SquareMatrix::identity(n);
    let mut c_prev = 1.0;
    for k in 1..=n {
        // M_k = A (M_{k-1} + c_{k-1} I)
        mk = m * &mk.add(&id.scale(c_prev));
        let c = -mk.trace() / k as f64;
        coeffs.push(c);
        c_prev = c;
    }
    coeffs
}

/// Eigenvalues of a general matrix, ordered by descending real part, then
/// by descending imaginary part.
pub fn eigen_general(m: &SquareMatrix) -> Vec<Complex64> {
    let coeffs = characteristic_polynomial(m);
    let mut roots = poly_roots(&coeffs);
    sort_eigenvalues(&mut roots);
    roots
}

pub(crate) fn sort_eigenvalues(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
}

/// Roots of the monic polynomial `xⁿ + c[0]xⁿ⁻¹ + … + c[n-1]` for n ≤ 4.
fn poly_roots(c: &[f64]) -> Vec<Complex64> {
    match c.len() {
        0 => vec![],
        1 => vec![Complex64::new(-c[0], 0.0)],
        2 => quadratic_roots(1.0, c[0], c[1]).to_vec(),
        3 => cubic_roots(c[0], c[1], c[2]),
        _ => quartic_roots(c),
    }
}

/// Roots of `a x² + b x + c` without cancellation.
pub(crate) fn quadratic_roots(a: f64, b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let q = -0.5 * (b + b.signum_or_one() * sq);
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        let r1 = q / a;
        let r2 = c / q;
        [Complex64::new(r1, 0.0), Complex64::new(r2, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a.abs());
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

trait SignumOrOne {
    fn signum_or_one(self) -> f64;
}

impl SignumOrOne for f64 {
    fn signum_or_one(self) -> f64 {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

fn eval_cubic(a: f64, b: f64, c: f64, x: f64) -> (f64, f64) {
    let p = ((x + a) * x + b) * x + c;
    let dp = (3.0 * x + 2.0 * a) * x + b;
    (p, dp)
}

/// Cubic `x³ + a x² + b x + c`: one real root by Cardano (trigonometric form
/// when all three are real), Newton-polished, then deflation to a quadratic.
fn cubic_roots(a: f64, b: f64, c: f64) -> Vec<Complex64> {
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let mut x = if disc > 0.0 {
        let sq = disc.sqrt();
        (-q / 2.0 + sq).cbrt() + (-q / 2.0 - sq).cbrt() + shift
    } else if p == 0.0 {
        shift
    } else {
        // three real roots; take the largest
        let r = (-p / 3.0).sqrt();
        let arg = (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0);
        2.0 * r * (arg.acos() / 3.0).cos() + shift
    };
    for _ in 0..8 {
        let (fx, dfx) = eval_cubic(a, b, c, x);
        if dfx == 0.0 || fx == 0.0 {
            break;
        }
        let step = fx / dfx;
        let next = x - step;
        if !next.is_finite() {
            break;
        }
        let (fn_, _) = eval_cubic(a, b, c, next);
        if fn_.abs() >= fx.abs() {
            break;
        }
        x = next;
    }
    // x³ + a x² + b x + c = (x − r)(x² + e x + f)
    let e = a + x;
    let f = b + e * x;
    let [r2, r3] = quadratic_roots(1.0, e, f);
    vec![Complex64::new(x, 0.0), r2, r3]
}

/// Quartic roots by Aberth–Ehrlich iteration.
fn quartic_roots(c: &[f64]) -> Vec<Complex64> {
    let n = c.len();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &ck in c {
            dp = dp * z + p;
            p = p * z + ck;
        }
        (p, dp)
    };
    let radius = 1.0 + c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-16 {
            break;
        }
    }
    for zi in &mut z {
        if zi.im.abs() < 1e-12 * (1.0 + zi.re.abs()) {
            zi.im = 0.0;
        }
    }
    z
}
