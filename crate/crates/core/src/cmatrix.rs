//! Dense complex matrices.
//!
//! A small, self-contained linear algebra layer sized for desk-scale problems
//! (n up to a few dozen): LU solves with partial pivoting, a cyclic Jacobi
//! eigensolver for Hermitian matrices, one-sided Jacobi singular values, and
//! the matrix modulus and logarithm built on top of them.
//!
//! Matrices are values. Every operation returns a fresh matrix and never
//! mutates its inputs.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used for every matrix entry and spectral parameter.
pub type C64 = Complex64;

/// Relative tolerance for the Hermitian symmetry check.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// A pivot below `SINGULAR_TOL * ||M||_F` declares the matrix singular.
pub const SINGULAR_TOL: f64 = 1e-14;
/// Jacobi sweeps stop once the off-diagonal mass drops below this fraction of `||H||_F`.
pub const JACOBI_OFFDIAG_TOL: f64 = 1e-13;
/// Upper bound on Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Smallest eigenvalue accepted by [`CMatrix::log_pd`].
pub const PD_MIN_EIGENVALUE: f64 = 1e-14;

pub(crate) const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is singular: pivot {pivot:.3e} below threshold {threshold:.3e}")]
    SingularMatrix { pivot: f64, threshold: f64 },
    #[error("matrix is not Hermitian: ||H - H*||_F = {residual:.3e}")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive definite: minimum eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix dimensions must be positive and match the entry count")]
    BadShape,
    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense row-major complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let v = self[(r, c)];
                write!(f, "{:>+.6}{:+.6}i  ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl CMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(LinalgError::BadShape);
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::BadShape);
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![C64::new(1.0, 0.0); n])
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diag(&d)
    }

    pub(crate) fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.cols).map(<[C64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    fn require_square(&self, op: &'static str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(LinalgError::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(LinalgError::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            })
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    /// Hermitian real part `(M + M*) / 2`.
    pub fn re_part(&self) -> Result<Self> {
        let n = self.require_square("re_part")?;
        Ok(Self::from_fn(n, n, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5))
    }

    /// Hermitian imaginary part `(M - M*) / 2i`.
    pub fn im_part(&self) -> Result<Self> {
        let n = self.require_square("im_part")?;
        Ok(Self::from_fn(n, n, |r, c| {
            (self[(r, c)] - self[(c, r)].conj()) / (2.0 * I)
        }))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other, "add")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other, "sub")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out.data[r * other.cols..(r + 1) * other.cols]
                    .iter_mut()
                    .zip(row)
                {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `M - zI` for square `M`.
    pub fn shift(&self, z: C64) -> Result<Self> {
        let n = self.require_square("shift")?;
        let mut out = self.clone();
        for i in 0..n {
            out.data[i * n + i] -= z;
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<C64> {
        self.require_square("trace")?;
        Ok(self.diagonal().into_iter().sum())
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||self - other||_F`; panics on shape mismatch.
    pub fn dist(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "dist: shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn hermitian_residual(&self) -> Result<f64> {
        let n = self.require_square("hermitian_residual")?;
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                acc += (self[(r, c)] - self[(c, r)].conj()).norm_sqr();
            }
        }
        Ok(acc.sqrt())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_residual()
            .is_ok_and(|res| res <= HERMITIAN_TOL * self.fro_norm())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let cols = self.cols + other.cols;
        Ok(Self::from_fn(self.rows, cols, |r, c| {
            if c < self.cols {
                self[(r, c)]
            } else {
                other[(r, c - self.cols)]
            }
        }))
    }

    /// Vertical concatenation of `self` above `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                op: "vstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Assembles the 2x2 block matrix `[[a, b], [c, d]]`.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        a.hstack(b)?.vstack(&c.hstack(d)?)
    }

    /// Copies the sub-block starting at `(r0, c0)` of the given shape.
    pub fn sub_block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        Self::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)])
    }

    fn lu(&self) -> Result<Lu> {
        let n = self.require_square("lu")?;
        let threshold = SINGULAR_TOL * self.fro_norm();
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|r| (r, a[r * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            min_pivot = min_pivot.min(pmax);
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[k * n + k];
            if pivot.norm() == 0.0 {
                continue;
            }
            for r in k + 1..n {
                let f = a[r * n + k] / pivot;
                a[r * n + k] = f;
                for c in k + 1..n {
                    let u = a[k * n + c];
                    a[r * n + c] -= f * u;
                }
            }
        }
        Ok(Lu {
            n,
            a,
            perm,
            sign,
            min_pivot,
            threshold,
        })
    }

    /// Solves `self * X = rhs` by LU with partial pivoting.
    ///
    /// Fails with [`LinalgError::SingularMatrix`] when a pivot falls below
    /// `SINGULAR_TOL * ||self||_F`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        let lu = self.lu()?;
        if rhs.rows != lu.n {
            return Err(LinalgError::DimensionMismatch {
                op: "solve",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        lu.check()?;
        Ok(lu.solve(rhs))
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.require_square("inverse")?;
        self.solve(&Self::identity(n))
    }

    /// Determinant via LU; singular input yields zero rather than an error.
    pub fn det(&self) -> Result<C64> {
        let lu = self.lu()?;
        let mut d = C64::new(lu.sign, 0.0);
        for i in 0..lu.n {
            d *= lu.a[i * lu.n + i];
        }
        Ok(d)
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
    ///
    /// Returns eigenvalues in ascending order and the unitary matrix whose
    /// columns are the matching eigenvectors.
    pub fn herm_eig(&self) -> Result<(Vec<f64>, CMatrix)> {
        let n = self.require_square("herm_eig")?;
        let norm = self.fro_norm();
        let residual = self.hermitian_residual()?;
        if residual > HERMITIAN_TOL * norm {
            return Err(LinalgError::NotHermitian { residual });
        }
        // work on the exactly Hermitian projection
        let mut a = self.re_part()?.data;
        let mut v = Self::identity(n).data;
        let target = JACOBI_OFFDIAG_TOL * norm;
        let off = |a: &[C64]| -> f64 {
            let mut s = 0.0;
            for r in 0..n {
                for c in 0..n {
                    if r != c {
                        s += a[r * n + c].norm_sqr();
                    }
                }
            }
            s.sqrt()
        };

        let mut converged = off(&a) <= target;
        let mut sweeps = 0;
        while !converged && sweeps < JACOBI_MAX_SWEEPS {
            sweeps += 1;
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    let mag = apq.norm();
                    if mag == 0.0 {
                        continue;
                    }
                    let phase = apq / mag;
                    let app = a[p * n + p].re;
                    let aqq = a[q * n + q].re;
                    let theta = (aqq - app) / (2.0 * mag);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    // G = D * R with D = diag(1, conj(phase)) on (p, q)
                    let g_pp = C64::new(c, 0.0);
                    let g_pq = C64::new(s, 0.0);
                    let g_qp = -phase.conj() * s;
                    let g_qq = phase.conj() * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = akp * g_pp + akq * g_qp;
                        a[k * n + q] = akp * g_pq + akq * g_qq;
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * g_pp + vkq * g_qp;
                        v[k * n + q] = vkp * g_pq + vkq * g_qq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
                        a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
                    }
                    a[p * n + q] = C64::new(0.0, 0.0);
                    a[q * n + p] = C64::new(0.0, 0.0);
                    a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
                    a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
                }
            }
            converged = off(&a) <= target;
        }
        if !converged {
            return Err(LinalgError::NoConvergence { sweeps });
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
        let values = order.iter().map(|&i| a[i * n + i].re).collect();
        let vecs = Self::from_fn(n, n, |r, c| v[r * n + order[c]]);
        Ok((values, vecs))
    }

    /// `U f(Λ) U*` for Hermitian `self = U Λ U*`.
    /// Matrix modulus `|M| = (M* M)^{1/2}`.
    ///
    /// Formed as `V Σ V*` from one-sided Jacobi (`M V = U Σ`) rather than from
    /// the eigenvalues of `M* M`, which would square the condition number.
    pub fn modulus(&self) -> Result<Self> {
        self.require_square("modulus")?;
        let (cols, v) = one_sided_jacobi(self);
        Ok(herm_reconstruct(&v, &column_norms(&cols)))
    }

    /// Principal logarithm of a Hermitian positive definite matrix.
    pub fn log_pd(&self) -> Result<Self> {
        let (values, u) = self.herm_eig()?;
        let min = values.first().copied().unwrap_or(0.0);
        if min <= PD_MIN_EIGENVALUE {
            return Err(LinalgError::NotPositiveDefinite { min_eigenvalue: min });
        }
        Ok(herm_reconstruct(&u, &values.iter().map(|x| x.ln()).collect::<Vec<_>>()))
    }

    /// Singular values in descending order, by one-sided Jacobi rotations.
    ///
    /// Small singular values keep absolute accuracy near `eps * sigma_max`,
    /// which the Gram-matrix route cannot offer.
    pub fn singular_values(&self) -> Vec<f64> {
        // orthogonalize the columns of the taller orientation
        let (cols, _) = if self.rows >= self.cols {
            one_sided_jacobi(self)
        } else {
            one_sided_jacobi(&self.adjoint())
        };
        let mut sv = column_norms(&cols);
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Number of singular values above `rel_tol * sigma_max`.
    pub fn numeric_rank(&self, rel_tol: f64) -> usize {
        let sv = self.singular_values();
        let max = sv.first().copied().unwrap_or(0.0);
        if max == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > rel_tol * max).count()
    }
}

/// Rotates the columns of `a` until they are mutually orthogonal; returns the
/// rotated columns and the accumulated unitary `V` with `a V = columns`.
fn one_sided_jacobi(a: &CMatrix) -> (Vec<Vec<C64>>, CMatrix) {
    let (m, n) = a.shape();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|c| (0..m).map(|r| a[(r, c)]).collect()).collect();
    // columns of V
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|c| (0..n).map(|r| if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect())
        .collect();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for x in [&mut cols, &mut v] {
                    for k in 0..x[i].len() {
                        let ai = x[i][k];
                        let bj = x[j][k] * phase.conj();
                        x[i][k] = ai * c - bj * s;
                        x[j][k] = ai * s + bj * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let v = CMatrix::from_fn(n, n, |r, c| v[c][r]);
    (cols, v)
}

fn column_norms(cols: &[Vec<C64>]) -> Vec<f64> {
    cols.iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect()
}

fn herm_reconstruct(u: &CMatrix, values: &[f64]) -> CMatrix {
    let n = values.len();
    let out = CMatrix::from_fn(n, n, |r, c| {
        (0..n)
            .map(|k| u[(r, k)] * values[k] * u[(c, k)].conj())
            .sum()
    });
    // symmetrize away rounding
    CMatrix::from_fn(n, n, |r, c| (out[(r, c)] + out[(c, r)].conj()) * 0.5)
}

struct Lu {
    n: usize,
    a: Vec<C64>,
    perm: Vec<usize>,
    sign: f64,
    min_pivot: f64,
    threshold: f64,
}

impl Lu {
    fn check(&self) -> Result<()> {
        if self.min_pivot <= self.threshold || self.min_pivot == 0.0 {
            Err(LinalgError::SingularMatrix {
                pivot: self.min_pivot,
                threshold: self.threshold,
            })
        } else {
            Ok(())
        }
    }

    fn solve(&self, rhs: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut x = CMatrix::from_fn(n, rhs.cols, |r, c| rhs[(self.perm[r], c)]);
        let w = rhs.cols;
        for c in 0..w {
            for r in 0..n {
                let mut s = x.data[r * w + c];
                for k in 0..r {
                    s -= self.a[r * n + k] * x.data[k * w + c];
                }
                x.data[r * w + c] = s;
            }
            for r in (0..n).rev() {
                let mut s = x.data[r * w + c];
                for k in r + 1..n {
                    s -= self.a[r * n + k] * x.data[k * w + c];
                }
                x.data[r * w + c] = s / self.a[r * n + r];
            }
        }
        x
    }
}
