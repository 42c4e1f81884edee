//! Canonical L-systems `Θ = (T, K, J)` on `ℂⁿ` with input-output space `ℂᵐ`,
//! and the two analytic functions attached to them:
//!
//! * the transfer function `W(z) = I − 2i K* (T − zI)⁻¹ K J`, for `z ∈ ρ(T)`;
//! * the impedance function `V(z) = K* (Re T − zI)⁻¹ K`, for `z ∈ ρ(Re T)`.
//!
//! Off the real axis the two are linked by a Cayley-type transform, see
//! [`impedance_from_transfer`] and [`transfer_from_impedance`].

use serde::{Deserialize, Serialize};

use crate::cmatrix::{CMatrix, LinalgError, C64, I};
use crate::error::{Error, Result};

/// Relative tolerance for every structural check on an L-system.
pub const VALIDATION_TOL: f64 = 1e-10;

/// A validated L-system.
///
/// Construction checks that `J` is a signature operator, that
/// `Im T = K J K*`, and that `ran(Im T) ⊆ ran(K)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LSystem {
    t: CMatrix,
    k: CMatrix,
    j: CMatrix,
}

impl LSystem {
    pub fn new(t: CMatrix, k: CMatrix, j: CMatrix) -> Result<Self> {
        let n = t.rows();
        let m = j.rows();
        if !t.is_square() || !j.is_square() || k.shape() != (n, m) {
            return Err(Error::DimMismatch(format!(
                "T {:?}, K {:?}, J {:?}; need T n×n, K n×m, J m×m",
                t.shape(),
                k.shape(),
                j.shape()
            )));
        }

        let scale = VALIDATION_TOL * (1.0 + j.fro_norm());
        let asym = j.hermitian_residual()?;
        let unitary = j.matmul(&j)?.dist(&CMatrix::identity(m));
        if asym > scale || unitary > scale {
            return Err(Error::NotSignature {
                residual: asym.max(unitary),
            });
        }

        let im_t = t.im_part()?;
        let kjk = k.matmul(&j)?.matmul(&k.adjoint())?;
        let residual = im_t.dist(&kjk);
        let tolerance = VALIDATION_TOL * (1.0 + t.fro_norm());
        if residual > tolerance {
            return Err(Error::Imbalance {
                residual,
                tolerance,
            });
        }

        let channel = k.numeric_rank(VALIDATION_TOL);
        let augmented = k.hstack(&im_t)?.numeric_rank(VALIDATION_TOL);
        if augmented > channel {
            return Err(Error::Range { channel, augmented });
        }

        Ok(Self { t, k, j })
    }

    /// Main operator `T`.
    pub fn main_operator(&self) -> &CMatrix {
        &self.t
    }

    /// Channel operator `K`.
    pub fn channel(&self) -> &CMatrix {
        &self.k
    }

    /// Directing operator `J`.
    pub fn directing(&self) -> &CMatrix {
        &self.j
    }

    /// State-space dimension `n`.
    pub fn state_dim(&self) -> usize {
        self.t.rows()
    }

    /// Input-output dimension `m`.
    pub fn io_dim(&self) -> usize {
        self.j.rows()
    }

    /// `||Im T − K J K*||_F`.
    pub fn imbalance_residual(&self) -> f64 {
        let kjk = self
            .k
            .matmul(&self.j)
            .and_then(|x| x.matmul(&self.k.adjoint()))
            .expect("shapes validated at construction");
        self.t.im_part().expect("square").dist(&kjk)
    }

    /// Transfer function `W(z) = I − 2i K* (T − zI)⁻¹ K J`.
    pub fn transfer(&self, z: C64) -> Result<CMatrix> {
        let kj = self.k.matmul(&self.j)?;
        let x = solve_shifted(&self.t, z, &kj)?;
        let correction = self.k.adjoint().matmul(&x)?.scale(2.0 * I);
        Ok(CMatrix::identity(self.io_dim()).sub(&correction)?)
    }

    /// Impedance function `V(z) = K* (Re T − zI)⁻¹ K`.
    pub fn impedance(&self, z: C64) -> Result<CMatrix> {
        let x = solve_shifted(&self.t.re_part()?, z, &self.k)?;
        Ok(self.k.adjoint().matmul(&x)?)
    }
}

/// Solves `(A − zI) X = rhs`, mapping a singular pivot to [`Error::SpectrumHit`].
pub(crate) fn solve_shifted(a: &CMatrix, z: C64, rhs: &CMatrix) -> Result<CMatrix> {
    a.shift(z)?.solve(rhs).map_err(|e| match e {
        LinalgError::SingularMatrix { .. } => Error::SpectrumHit { z },
        other => other.into(),
    })
}

/// `V = i (W + I)⁻¹ (W − I) J`.
pub fn impedance_from_transfer(w: &CMatrix, j: &CMatrix) -> Result<CMatrix> {
    let id = CMatrix::identity(w.rows());
    let x = w.add(&id)?.solve(&w.sub(&id)?)?;
    Ok(x.matmul(j)?.scale(I))
}

/// `W = (I + i V J)⁻¹ (I − i V J)`.
pub fn transfer_from_impedance(v: &CMatrix, j: &CMatrix) -> Result<CMatrix> {
    let id = CMatrix::identity(v.rows());
    let ivj = v.matmul(j)?.scale(I);
    Ok(id.add(&ivj)?.solve(&id.sub(&ivj)?)?)
}

/// Outcome of sampling `Im V(z)` on the upper half-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct HerglotzReport {
    /// Smallest eigenvalue of `Im V(z)` at each sample, in input order.
    pub min_eigenvalues: Vec<f64>,
    /// Minimum over all samples.
    pub min_eigenvalue: f64,
    pub passed: bool,
}

/// Smallest eigenvalue of `Im V(z) = (V − V*)/2i` accepted as nonnegative.
pub const HERGLOTZ_TOL: f64 = 1e-10;

/// Samples the impedance function and checks that `Im V(z)` is positive
/// semidefinite at every point, as it must be for a Herglotz-Nevanlinna function.
pub fn herglotz_check(sys: &LSystem, samples: &[C64]) -> Result<HerglotzReport> {
    let mut min_eigenvalues = Vec::with_capacity(samples.len());
    for &z in samples {
        if z.im <= 0.0 {
            return Err(Error::Domain(format!(
                "Herglotz samples must lie in the upper half-plane, got {z}"
            )));
        }
        let (ev, _) = sys.impedance(z)?.im_part()?.herm_eig()?;
        min_eigenvalues.push(ev[0]);
    }
    let min_eigenvalue = min_eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(HerglotzReport {
        passed: min_eigenvalue >= -HERGLOTZ_TOL,
        min_eigenvalues,
        min_eigenvalue,
    })
}

/// JSON interchange form of an L-system: row-major nested arrays of `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "T")]
    pub t: Vec<Vec<C64>>,
    #[serde(rename = "K")]
    pub k: Vec<Vec<C64>>,
    #[serde(rename = "J")]
    pub j: Vec<Vec<C64>>,
}

impl From<&LSystem> for SystemFile {
    fn from(sys: &LSystem) -> Self {
        Self {
            n: sys.state_dim(),
            m: sys.io_dim(),
            t: sys.t.to_rows(),
            k: sys.k.to_rows(),
            j: sys.j.to_rows(),
        }
    }
}

impl TryFrom<SystemFile> for LSystem {
    type Error = Error;

    fn try_from(file: SystemFile) -> Result<Self> {
        let matrix = |name: &str, rows: &[Vec<C64>]| {
            CMatrix::from_rows(rows).map_err(|e| Error::Parse(format!("{name}: {e}")))
        };
        let sys = LSystem::new(matrix("T", &file.t)?, matrix("K", &file.k)?, matrix("J", &file.j)?)?;
        if sys.state_dim() != file.n || sys.io_dim() != file.m {
            return Err(Error::DimMismatch(format!(
                "declared n = {}, m = {} but matrices give n = {}, m = {}",
                file.n,
                file.m,
                sys.state_dim(),
                sys.io_dim()
            )));
        }
        Ok(sys)
    }
}

impl Serialize for LSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SystemFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = SystemFile::deserialize(d)?;
        LSystem::try_from(file).map_err(serde::de::Error::custom)
    }
}
