//! Two-dimensional model systems and their closed-form transfer and impedance
//! functions.
//!
//! All models live on `ℂ²` with the standard basis and share the channel
//! operator `K = √(Im λ₀)·I₂`:
//!
//! | kind | `T`                   | `J`            | character     |
//! |------|-----------------------|----------------|---------------|
//! | d    | `diag(λ₀, −λ̄₀)`      | `I`            | dissipative   |
//! | m    | `diag(λ₀, λ̄₀)`       | `diag(1, −1)`  | mixed         |
//! | a    | `diag(λ̄₀, −λ₀)`      | `−I`           | accumulative  |
//!
//! The two-parameter family `T = diag(λ, μ)`, `K = diag(√Im λ, √Im μ)`, `J = I`
//! is the building block for couplings.
//!
//! The closed forms here are evaluated entrywise and serve as independent
//! oracles for the general resolvent route in [`crate::lsystem`].

use serde::{Deserialize, Serialize};

use crate::cmatrix::{CMatrix, C64};
use crate::error::{Error, Result};
use crate::lsystem::LSystem;

/// Relative guard around closed-form poles.
pub const POLE_GUARD: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "d")]
    Dissipative,
    #[serde(rename = "m")]
    Mixed,
    #[serde(rename = "a")]
    Accumulative,
    #[serde(rename = "general")]
    General,
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d" => Ok(Self::Dissipative),
            "m" => Ok(Self::Mixed),
            "a" => Ok(Self::Accumulative),
            "general" => Ok(Self::General),
            other => Err(Error::Parse(format!("unknown model kind {other:?}"))),
        }
    }
}

/// Parameters of a model system.
///
/// Serializes as `{"kind": "d", "lambda0": [re, im]}` or
/// `{"kind": "general", "lambda": [re, im], "mu": [re, im]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ModelSpec {
    #[serde(rename = "d")]
    Dissipative { lambda0: C64 },
    #[serde(rename = "m")]
    Mixed { lambda0: C64 },
    #[serde(rename = "a")]
    Accumulative { lambda0: C64 },
    #[serde(rename = "general")]
    General { lambda: C64, mu: C64 },
}

fn require_upper(name: &str, w: C64) -> Result<()> {
    if w.re.is_finite() && w.im.is_finite() && w.im > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {w} must satisfy Im {name} > 0")))
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn channel(lambda0: C64) -> CMatrix {
    CMatrix::identity(2).scale_real(lambda0.im.sqrt())
}

/// Dissipative model: `T = diag(λ₀, −λ̄₀)`, `J = I`.
pub fn build_theta_d(lambda0: C64) -> Result<LSystem> {
    require_upper("lambda0", lambda0)?;
    let t = CMatrix::from_diag(&[lambda0, -lambda0.conj()]);
    LSystem::new(t, channel(lambda0), CMatrix::identity(2))
}

/// Mixed model: `T = diag(λ₀, λ̄₀)`, `J = diag(1, −1)`.
pub fn build_theta_m(lambda0: C64) -> Result<LSystem> {
    require_upper("lambda0", lambda0)?;
    let t = CMatrix::from_diag(&[lambda0, lambda0.conj()]);
    LSystem::new(t, channel(lambda0), CMatrix::from_real_diag(&[1.0, -1.0]))
}

/// Accumulative model: `T = diag(λ̄₀, −λ₀)`, `J = −I`.
pub fn build_theta_a(lambda0: C64) -> Result<LSystem> {
    require_upper("lambda0", lambda0)?;
    let t = CMatrix::from_diag(&[lambda0.conj(), -lambda0]);
    LSystem::new(t, channel(lambda0), CMatrix::identity(2).scale_real(-1.0))
}

/// Two-parameter system `T = diag(λ, μ)`, `K = diag(√Im λ, √Im μ)`, `J = I`.
pub fn build_theta_general(lambda: C64, mu: C64) -> Result<LSystem> {
    require_upper("lambda", lambda)?;
    require_upper("mu", mu)?;
    let t = CMatrix::from_diag(&[lambda, mu]);
    let k = CMatrix::from_real_diag(&[lambda.im.sqrt(), mu.im.sqrt()]);
    LSystem::new(t, k, CMatrix::identity(2))
}

fn check_poles(z: C64, poles: &[C64]) -> Result<()> {
    for &pole in poles {
        if z == pole || (z - pole).norm() < POLE_GUARD * (1.0 + pole.norm()) {
            return Err(Error::PoleHit { z, pole });
        }
    }
    Ok(())
}

/// `(w̄ − z)/(w − z)`, the scalar transfer factor of a one-dimensional channel.
fn blaschke(w: C64, z: C64) -> C64 {
    (w.conj() - z) / (w - z)
}

impl ModelSpec {
    pub fn kind(&self) -> ModelKind {
        match self {
            Self::Dissipative { .. } => ModelKind::Dissipative,
            Self::Mixed { .. } => ModelKind::Mixed,
            Self::Accumulative { .. } => ModelKind::Accumulative,
            Self::General { .. } => ModelKind::General,
        }
    }

    pub fn build(&self) -> Result<LSystem> {
        match *self {
            Self::Dissipative { lambda0 } => build_theta_d(lambda0),
            Self::Mixed { lambda0 } => build_theta_m(lambda0),
            Self::Accumulative { lambda0 } => build_theta_a(lambda0),
            Self::General { lambda, mu } => build_theta_general(lambda, mu),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::Dissipative { lambda0 } | Self::Mixed { lambda0 } | Self::Accumulative { lambda0 } => {
                require_upper("lambda0", lambda0)
            }
            Self::General { lambda, mu } => {
                require_upper("lambda", lambda)?;
                require_upper("mu", mu)
            }
        }
    }

    /// Spectrum of the main operator, i.e. the poles of `W`.
    pub fn transfer_poles(&self) -> Vec<C64> {
        match *self {
            Self::Dissipative { lambda0: l } => vec![l, -l.conj()],
            Self::Mixed { lambda0: l } => vec![l, l.conj()],
            Self::Accumulative { lambda0: l } => vec![l.conj(), -l],
            Self::General { lambda, mu } => vec![lambda, mu],
        }
    }

    /// Spectrum of `Re T`, i.e. the poles of `V`.
    pub fn impedance_poles(&self) -> Vec<C64> {
        match *self {
            Self::Dissipative { lambda0: l } | Self::Accumulative { lambda0: l } => {
                vec![real(l.re), real(-l.re)]
            }
            Self::Mixed { lambda0: l } => vec![real(l.re)],
            Self::General { lambda, mu } => vec![real(lambda.re), real(mu.re)],
        }
    }

    /// Closed-form diagonal transfer function.
    pub fn closed_transfer(&self, z: C64) -> Result<CMatrix> {
        self.validate()?;
        check_poles(z, &self.transfer_poles())?;
        let d = match *self {
            Self::Dissipative { lambda0: l } => [blaschke(l, z), (l + z) / (l.conj() + z)],
            Self::Mixed { lambda0: l } => [blaschke(l, z), (l - z) / (l.conj() - z)],
            Self::Accumulative { lambda0: l } => [(l - z) / (l.conj() - z), (l.conj() + z) / (l + z)],
            Self::General { lambda, mu } => [blaschke(lambda, z), blaschke(mu, z)],
        };
        Ok(CMatrix::from_diag(&d))
    }

    /// Closed-form diagonal impedance function.
    pub fn closed_impedance(&self, z: C64) -> Result<CMatrix> {
        self.validate()?;
        check_poles(z, &self.impedance_poles())?;
        let d = match *self {
            Self::Dissipative { lambda0: l } | Self::Accumulative { lambda0: l } => {
                [l.im / (l.re - z), -l.im / (l.re + z)]
            }
            Self::Mixed { lambda0: l } => [l.im / (l.re - z), l.im / (l.re - z)],
            Self::General { lambda, mu } => [lambda.im / (lambda.re - z), mu.im / (mu.re - z)],
        };
        Ok(CMatrix::from_diag(&d))
    }
}
