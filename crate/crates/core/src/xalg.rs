//! Small dense complex linear algebra on C^4 and C^6, and the
//! exterior-algebra constructions identifying the 2-forms on C^4 with C^6:
//! wedge products, the induced (second compound) matrix, the 4-form pairing,
//! and a fixed-dimension eigensolver for the 4x4 asymptotic matrices.

use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
#[allow(unused_imports)] // needed by no_std builds, shadowed when std is linked
use num_traits::Float;
use thiserror::Error;

/// Complex column vector of fixed dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVec<const N: usize>(pub [Complex64; N]);

pub type Vec4 = CVec<4>;
pub type Vec6 = CVec<6>;

/// Complex N x N matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat<const N: usize>(pub [[Complex64; N]; N]);

pub type Mat4 = CMat<4>;
pub type Mat6 = CMat<6>;

/// Ordered basis of the 2-forms on C^4, as 0-based index pairs.
///
/// Every 6-component wedge coordinate in this crate refers to this order
/// (1-based labels: 12, 13, 14, 23, 24, 34). Signs come from index sorting.
pub const WEDGE_BASIS_ORDER: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Error, PartialEq)]
pub enum EigError {
    /// Inverse iteration could not reach the residual bound; the matrix is
    /// (numerically) defective or has clustered eigenvalues.
    #[error("near-defective matrix: eigen residual {residual:e} exceeds {bound:e}")]
    NearDefective { residual: f64, bound: f64 },
}

impl<const N: usize> CVec<N> {
    pub fn zero() -> Self {
        CVec([ZERO; N])
    }

    /// Standard basis vector e_i.
    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = ONE;
        v
    }

    pub fn from_re(re: [f64; N]) -> Self {
        let mut v = Self::zero();
        for (slot, x) in v.0.iter_mut().zip(re) {
            *slot = Complex64::new(x, 0.0);
        }
        v
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = *self;
        for z in out.0.iter_mut() {
            *z *= c;
        }
        out
    }

    pub fn scale_re(&self, r: f64) -> Self {
        let mut out = *self;
        for z in out.0.iter_mut() {
            *z *= r;
        }
        out
    }

    /// Unit vector in the same direction. Caller guarantees nonzero norm.
    pub fn normalized(&self) -> Self {
        self.scale_re(1.0 / self.norm())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Complex64> {
        self.0.iter()
    }
}

impl<const N: usize> Index<usize> for CVec<N> {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl<const N: usize> IndexMut<usize> for CVec<N> {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl<const N: usize> Add for CVec<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (a, b) in out.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        out
    }
}

impl<const N: usize> Sub for CVec<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for (a, b) in out.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        out
    }
}

impl<const N: usize> Neg for CVec<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_re(-1.0)
    }
}

impl<const N: usize> Mul<Complex64> for CVec<N> {
    type Output = Self;
    fn mul(self, c: Complex64) -> Self {
        self.scale(c)
    }
}

impl<const N: usize> CMat<N> {
    pub fn zeros() -> Self {
        CMat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn diag(d: [Complex64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, value) in d.into_iter().enumerate() {
            m.0[i][i] = value;
        }
        m
    }

    pub fn mul_vec(&self, v: &CVec<N>) -> CVec<N> {
        let mut out = CVec::zero();
        for i in 0..N {
            let mut acc = ZERO;
            for j in 0..N {
                acc += self.0[i][j] * v.0[j];
            }
            out.0[i] = acc;
        }
        out
    }

    pub fn mul_mat(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<const N: usize> Index<(usize, usize)> for CMat<N> {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..N {
            for j in 0..N {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

/// Hermitian inner product with conjugation on the SECOND argument:
/// `sum_i u_i * conj(v_i)`. Conjugate-symmetric.
pub fn hermitian_inner<const N: usize>(u: &CVec<N>, v: &CVec<N>) -> Complex64 {
    let mut acc = ZERO;
    for i in 0..N {
        acc += u.0[i] * v.0[i].conj();
    }
    acc
}

/// Wedge product C^4 x C^4 -> C^6: coordinate (ij) is `u_i v_j - u_j v_i`
/// in [`WEDGE_BASIS_ORDER`]. Antisymmetric.
pub fn wedge2(u: &Vec4, v: &Vec4) -> Vec6 {
    let mut out = Vec6::zero();
    for (k, &(i, j)) in WEDGE_BASIS_ORDER.iter().enumerate() {
        out.0[k] = u.0[i] * v.0[j] - u.0[j] * v.0[i];
    }
    out
}

/// Coefficient of e1^e2^e3^e4 in the 4-form U ^ S, for U, S given in wedge
/// coordinates. Bilinear; equals det[u1 u2 s1 s2] when U = u1^u2, S = s1^s2.
pub fn wedge4_pair(u: &Vec6, s: &Vec6) -> Complex64 {
    // Signs are the parities of the permutations (pair, complement-pair).
    u.0[0] * s.0[5] - u.0[1] * s.0[4] + u.0[2] * s.0[3] + u.0[3] * s.0[2] - u.0[4] * s.0[1]
        + u.0[5] * s.0[0]
}

/// Matrix induced on the 2-forms by `A` acting on C^4 via the Leibniz rule:
/// `induced_compound(A) * (u^v) = (Au)^v + u^(Av)` for all u, v.
pub fn induced_compound(a: &Mat4) -> Mat6 {
    let mut out = Mat6::zeros();
    for (row, &(i, j)) in WEDGE_BASIS_ORDER.iter().enumerate() {
        for (col, &(k, l)) in WEDGE_BASIS_ORDER.iter().enumerate() {
            let mut entry = ZERO;
            if j == l {
                entry += a.0[i][k];
            }
            if i == l {
                entry -= a.0[j][k];
            }
            if i == k {
                entry += a.0[j][l];
            }
            if j == k {
                entry -= a.0[i][l];
            }
            out.0[row][col] = entry;
        }
    }
    out
}

/// Determinant of a 4x4 complex matrix (LU with partial pivoting).
pub fn det4(a: &Mat4) -> Complex64 {
    let (lu, _, sign, singular) = lu_decompose(a);
    if singular {
        return ZERO;
    }
    let mut det = Complex64::new(sign, 0.0);
    for i in 0..4 {
        det *= lu.0[i][i];
    }
    det
}

/// LU with partial pivoting. Returns (LU, permutation, sign, singular).
fn lu_decompose<const N: usize>(a: &CMat<N>) -> (CMat<N>, [usize; N], f64, bool) {
    let mut lu = *a;
    let mut perm = [0usize; N];
    for (i, p) in perm.iter_mut().enumerate() {
        *p = i;
    }
    let mut sign = 1.0;
    let mut singular = false;
    for col in 0..N {
        let mut pivot = col;
        let mut best = lu.0[col][col].norm_sqr();
        for row in col + 1..N {
            let mag = lu.0[row][col].norm_sqr();
            if mag > best {
                best = mag;
                pivot = row;
            }
        }
        if best == 0.0 {
            singular = true;
            continue;
        }
        if pivot != col {
            lu.0.swap(pivot, col);
            perm.swap(pivot, col);
            sign = -sign;
        }
        let inv = ONE / lu.0[col][col];
        for row in col + 1..N {
            let factor = lu.0[row][col] * inv;
            lu.0[row][col] = factor;
            for j in col + 1..N {
                let sub = factor * lu.0[col][j];
                lu.0[row][j] -= sub;
            }
        }
    }
    (lu, perm, sign, singular)
}

/// Solve A x = b through a precomputed LU factorization.
fn lu_solve<const N: usize>(lu: &CMat<N>, perm: &[usize; N], b: &CVec<N>) -> CVec<N> {
    let mut x = CVec::zero();
    for (slot, &p) in x.0.iter_mut().zip(perm) {
        *slot = b.0[p];
    }
    // forward substitution (unit lower triangle)
    for i in 1..N {
        for j in 0..i {
            let sub = lu.0[i][j] * x.0[j];
            x.0[i] -= sub;
        }
    }
    // back substitution
    for i in (0..N).rev() {
        for j in i + 1..N {
            let sub = lu.0[i][j] * x.0[j];
            x.0[i] -= sub;
        }
        x.0[i] /= lu.0[i][i];
    }
    x
}

/// Monic characteristic polynomial of `a`, ascending coefficient order
/// (`coeffs[k]` multiplies `x^k`, `coeffs[N] == 1`). Newton's identities on
/// the power-sum traces.
pub fn char_poly<const N: usize>(a: &CMat<N>) -> Vec<Complex64> {
    let mut power_sums = [ZERO; N]; // power_sums[k-1] = tr(A^k)
    let mut acc = *a;
    power_sums[0] = acc.trace();
    for p in power_sums.iter_mut().skip(1) {
        acc = acc.mul_mat(a);
        *p = acc.trace();
    }
    // e_k elementary symmetric functions of the eigenvalues
    let mut elem = [ZERO; N];
    for k in 1..=N {
        let mut sum = ZERO;
        for i in 1..=k {
            let e_prev = if k - i == 0 { ONE } else { elem[k - i - 1] };
            let term = e_prev * power_sums[i - 1];
            if i % 2 == 1 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        elem[k - 1] = sum / Complex64::new(k as f64, 0.0);
    }
    // char(x) = sum_k (-1)^k e_k x^{N-k}
    let mut coeffs = alloc::vec![ZERO; N + 1];
    coeffs[N] = ONE;
    for k in 1..=N {
        let c = if k % 2 == 1 { -elem[k - 1] } else { elem[k - 1] };
        coeffs[N - k] = c;
    }
    coeffs
}

fn poly_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = ZERO;
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn poly_derivative_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = ZERO;
    for k in (1..coeffs.len()).rev() {
        acc = acc * z + coeffs[k] * Complex64::new(k as f64, 0.0);
    }
    acc
}

/// All roots of a monic polynomial (ascending coefficients, leading 1) by
/// Durand-Kerner iteration, each polished with two Newton steps. Accuracy is
/// full precision for simple roots, ~sqrt(eps) near multiple roots.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    debug_assert!((coeffs[degree] - ONE).norm() < 1e-12, "polynomial must be monic");
    if degree == 0 {
        return Vec::new();
    }
    // Cauchy bound keeps the seeds on the right scale.
    let bound = 1.0 + coeffs[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|i| {
            let mut z = ONE;
            for _ in 0..=i {
                z *= seed;
            }
            z * bound
        })
        .collect();
    for _ in 0..200 {
        let mut moved = 0.0f64;
        for i in 0..degree {
            let zi = roots[i];
            let mut denom = ONE;
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            if denom == ZERO {
                continue;
            }
            let delta = poly_eval(coeffs, zi) / denom;
            roots[i] = zi - delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-14 * bound {
            break;
        }
    }
    for root in roots.iter_mut() {
        for _ in 0..2 {
            let dp = poly_derivative_eval(coeffs, *root);
            if dp.norm() > 1e-30 {
                *root -= poly_eval(coeffs, *root) / dp;
            }
        }
    }
    roots
}

/// Eigenvalues of a 6x6 complex matrix (characteristic-polynomial roots).
pub fn eigenvalues6(a: &Mat6) -> Vec<Complex64> {
    poly_roots(&char_poly(a))
}

#[derive(Clone, Copy, Debug)]
pub struct Eigenpair {
    pub value: Complex64,
    pub vector: Vec4,
}

const EIG_RESIDUAL_BOUND: f64 = 1e-10;

/// Eigenpairs of a 4x4 complex matrix with distinct eigenvalues.
///
/// Quartic characteristic roots, each refined by inverse iteration; unit
/// eigenvectors with residual `|A w - mu w| <= 1e-10 |w|` guaranteed, else
/// [`EigError::NearDefective`].
pub fn eig4(a: &Mat4) -> Result<[Eigenpair; 4], EigError> {
    let coeffs = char_poly(a);
    let roots = poly_roots(&coeffs);
    let scale = a.frobenius_norm().max(1.0);
    let mut pairs = [Eigenpair { value: ZERO, vector: Vec4::zero() }; 4];
    let mut worst = 0.0f64;
    for (slot, &mu) in pairs.iter_mut().zip(roots.iter()) {
        // an exactly singular shift gets nudged off the eigenvalue so the
        // factorization stays usable for inverse iteration
        let nudge = Complex64::new(1e-12, 1e-12) * scale;
        let mut factorization = None;
        for attempt in 0..3 {
            let shift = mu + nudge * Complex64::new(attempt as f64, 0.0);
            let mut shifted = *a;
            for i in 0..4 {
                shifted.0[i][i] -= shift;
            }
            let (lu, perm, _, singular) = lu_decompose(&shifted);
            if !singular {
                factorization = Some((lu, perm));
                break;
            }
        }
        let mut w = Vec4::from_re([1.0, 0.7, -0.4, 0.2]).normalized();
        let mut mu_refined = mu;
        if let Some((lu, perm)) = factorization {
            for _ in 0..3 {
                let next = lu_solve(&lu, &perm, &w);
                let norm = next.norm();
                if !norm.is_finite() || norm == 0.0 {
                    break;
                }
                w = next.scale_re(1.0 / norm);
                // Rayleigh quotient recovers eigenvalue accuracy lost to
                // root clustering (w is unit norm)
                mu_refined = hermitian_inner(&a.mul_vec(&w), &w);
                let residual = (a.mul_vec(&w) - w.scale(mu_refined)).norm();
                if residual <= EIG_RESIDUAL_BOUND * scale {
                    break;
                }
            }
        }
        let residual = (a.mul_vec(&w) - w.scale(mu_refined)).norm();
        worst = worst.max(residual / scale);
        *slot = Eigenpair { value: mu_refined, vector: w };
    }
    if worst > EIG_RESIDUAL_BOUND {
        return Err(EigError::NearDefective { residual: worst, bound: EIG_RESIDUAL_BOUND });
    }
    Ok(pairs)
}
