//! Coupling `Θ = Θ₁·Θ₂` of two L-systems sharing the directing operator `J`.
//!
//! The coupled system lives on `ℋ₁ ⊕ ℋ₂` with
//!
//! ```text
//!     𝐓 = | T₁   2i K₁ J K₂* |        𝐊 = | K₁ |
//!         | 0    T₂          |            | K₂ |
//! ```
//!
//! so that `Im 𝐓 = 𝐊 J 𝐊*` and the transfer function factors as
//! `W_Θ(z) = W_Θ₁(z) · W_Θ₂(z)`.

use crate::cmatrix::{CMatrix, C64, I};
use crate::entropy::{c_entropy, ExtendedReal};
use crate::error::{Error, Result};
use crate::lsystem::{solve_shifted, LSystem};

/// Tolerance on `||J₁ − J₂||_F` for two systems to be couplable.
pub const J_MATCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingResult {
    pub coupled: LSystem,
    pub left: LSystem,
    pub right: LSystem,
}

/// Couples `left · right`; the left factor's state comes first.
pub fn couple(left: &LSystem, right: &LSystem) -> Result<CouplingResult> {
    if left.io_dim() != right.io_dim() {
        return Err(Error::DimMismatch(format!(
            "input-output dimensions differ: {} vs {}",
            left.io_dim(),
            right.io_dim()
        )));
    }
    let residual = left.directing().dist(right.directing());
    if residual > J_MATCH_TOL {
        return Err(Error::JMismatch { residual });
    }
    let j = left.directing();
    let (k1, k2) = (left.channel(), right.channel());
    let link = k1.matmul(j)?.matmul(&k2.adjoint())?.scale(2.0 * I);
    let zero = CMatrix::zeros(right.state_dim(), left.state_dim());
    let t = CMatrix::block2(left.main_operator(), &link, &zero, right.main_operator())?;
    let k = k1.vstack(k2)?;
    let coupled = LSystem::new(t, k, j.clone())?;
    Ok(CouplingResult {
        coupled,
        left: left.clone(),
        right: right.clone(),
    })
}

impl CouplingResult {
    /// Block resolvent assembled from the factor resolvents:
    ///
    /// ```text
    /// (𝐓 − z)⁻¹ = | R₁   −2i R₁ K₁ J K₂* R₂ |
    ///             | 0     R₂                 |
    /// ```
    pub fn assembled_resolvent(&self, z: C64) -> Result<CMatrix> {
        let (n1, n2) = (self.left.state_dim(), self.right.state_dim());
        let r1 = solve_shifted(self.left.main_operator(), z, &CMatrix::identity(n1))?;
        let r2 = solve_shifted(self.right.main_operator(), z, &CMatrix::identity(n2))?;
        let link = self
            .left
            .channel()
            .matmul(self.left.directing())?
            .matmul(&self.right.channel().adjoint())?;
        let off = r1.matmul(&link)?.matmul(&r2)?.scale(-2.0 * I);
        Ok(CMatrix::block2(&r1, &off, &CMatrix::zeros(n2, n1), &r2)?)
    }

    /// `||(𝐓 − zI) · R_assembled − I||_F`.
    pub fn resolvent_residual(&self, z: C64) -> Result<f64> {
        let assembled = self.assembled_resolvent(z)?;
        let shifted = self.coupled.main_operator().shift(z)?;
        let n = self.coupled.state_dim();
        Ok(shifted.matmul(&assembled)?.dist(&CMatrix::identity(n)))
    }

    /// `||W_Θ(z) − W_Θ₁(z) W_Θ₂(z)||_F`.
    pub fn multiplication_residual(&self, z: C64) -> Result<f64> {
        let w = self.coupled.transfer(z)?;
        let product = self.left.transfer(z)?.matmul(&self.right.transfer(z)?)?;
        Ok(w.dist(&product))
    }

    /// c-Entropies of the coupled system and of both factors.
    pub fn entropies(&self) -> Result<CoupledEntropy> {
        Ok(CoupledEntropy {
            coupled: c_entropy(&self.coupled)?,
            left: c_entropy(&self.left)?,
            right: c_entropy(&self.right)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledEntropy {
    pub coupled: ExtendedReal,
    pub left: ExtendedReal,
    pub right: ExtendedReal,
}

impl CoupledEntropy {
    /// `|S − S₁ − S₂|` when all three are finite.
    pub fn additivity_residual(&self) -> Option<f64> {
        match (self.coupled, self.left, self.right) {
            (ExtendedReal::Finite(s), ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => {
                Some((s - a - b).abs())
            }
            _ => None,
        }
    }
}

/// Residual of the assembled block resolvent; see [`CouplingResult::resolvent_residual`].
pub fn coupled_resolvent_check(result: &CouplingResult, z: C64) -> Result<f64> {
    result.resolvent_residual(z)
}

/// Residual of the multiplication theorem; see [`CouplingResult::multiplication_residual`].
pub fn multiplication_check(result: &CouplingResult, z: C64) -> Result<f64> {
    result.multiplication_residual(z)
}

/// `(S, S₁, S₂)` for a coupling.
pub fn coupled_entropy_check(result: &CouplingResult) -> Result<CoupledEntropy> {
    result.entropies()
}

fn require_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {x} must lie in [0, 1]")))
    }
}

/// `D = 1 − (1 − D₁)(1 − D₂)`.
pub fn compose_dissipation(d1: f64, d2: f64) -> Result<f64> {
    require_unit("D1", d1)?;
    require_unit("D2", d2)?;
    Ok(d1 + d2 * (1.0 - d1))
}

/// `A = 1 − (1 − A₁)(1 − A₂)`.
pub fn compose_accumulation(a1: f64, a2: f64) -> Result<f64> {
    require_unit("A1", a1)?;
    require_unit("A2", a2)?;
    Ok(a1 + a2 * (1.0 - a1))
}
