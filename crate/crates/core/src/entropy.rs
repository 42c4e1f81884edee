//! c-Entropy `S = −tr ln |W(−i)|` of an L-system, the dissipation and
//! accumulation coefficients derived from it, closed forms for the model
//! systems, and grid scans over the spectral parameter.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cmatrix::{CMatrix, C64, I};
use crate::error::{Error, Result};
use crate::lsystem::LSystem;
use crate::models::ModelKind;

/// `|W(∓i)|` with an eigenvalue below this is treated as singular.
pub const SINGULAR_MODULUS_TOL: f64 = 1e-12;
/// Finite entropies within this multiple of `1 + Σ|ln σ|` of zero are reported as 0.
pub const ZERO_SNAP: f64 = 1e-13;
/// Offsets `ε` used to approach `−i` from above when `−i ∈ σ(T)`.
pub const LIMIT_LADDER: [f64; 3] = [1e-3, 1e-4, 1e-5];
/// `|det W|` changing by more than this factor per decade counts as divergence.
/// A simple pole changes it by almost exactly 10, so the cut sits below that.
pub const LIMIT_GROWTH: f64 = 5.0;
/// Resolution of the extrapolated finite limit; smaller magnitudes are reported as 0.
pub const LIMIT_ZERO_SNAP: f64 = 1e-10;

/// A real number or one of the two infinities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Self::Finite(_))
    }

    /// As an `f64`, with the infinities mapped to IEEE infinities.
    pub fn to_f64(self) -> f64 {
        match self {
            Self::Finite(x) => x,
            Self::PlusInfinity => f64::INFINITY,
            Self::MinusInfinity => f64::NEG_INFINITY,
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            Self::PlusInfinity
        } else if x == f64::NEG_INFINITY {
            Self::MinusInfinity
        } else {
            Self::Finite(x)
        }
    }

    /// Sum; `None` for the undefined `+∞ + (−∞)`.
    pub fn checked_add(self, other: Self) -> Option<Self> {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
            (PlusInfinity, MinusInfinity) | (MinusInfinity, PlusInfinity) => None,
            (PlusInfinity, _) | (_, PlusInfinity) => Some(PlusInfinity),
            (MinusInfinity, _) | (_, MinusInfinity) => Some(MinusInfinity),
        }
    }
}

impl std::ops::Neg for ExtendedReal {
    type Output = Self;

    fn neg(self) -> Self {
        match self {
            Self::Finite(x) => Self::Finite(-x),
            Self::PlusInfinity => Self::MinusInfinity,
            Self::MinusInfinity => Self::PlusInfinity,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(x) => write!(f, "{x}"),
            Self::PlusInfinity => f.write_str("+inf"),
            Self::MinusInfinity => f.write_str("-inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(x) => s.serialize_f64(*x),
            Self::PlusInfinity => s.serialize_str("+inf"),
            Self::MinusInfinity => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Number(f64),
            Token(String),
        }
        match Wire::deserialize(d)? {
            Wire::Number(x) => Ok(Self::Finite(x)),
            Wire::Token(t) if t == "+inf" => Ok(Self::PlusInfinity),
            Wire::Token(t) if t == "-inf" => Ok(Self::MinusInfinity),
            Wire::Token(t) => Err(serde::de::Error::custom(format!("bad entropy token {t:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Dissipative,
    Accumulative,
}

/// Entropy with its regime and the matching coefficient (`D` or `A`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub entropy: ExtendedReal,
    pub regime: Regime,
    pub coefficient: f64,
}

/// `Σ ln σ` over the eigenvalues `σ` of `|W|`, or `None` when `|W|` is singular.
fn log_modulus_trace(w: &CMatrix) -> Result<Option<f64>> {
    let modulus = w.modulus()?;
    let (values, _) = modulus.herm_eig()?;
    if values[0] < SINGULAR_MODULUS_TOL {
        return Ok(None);
    }
    let trace = modulus.log_pd()?.trace()?.re;
    let scale: f64 = values.iter().map(|v| v.ln().abs()).sum();
    if trace.abs() <= ZERO_SNAP * (1.0 + scale) {
        return Ok(Some(0.0));
    }
    Ok(Some(trace))
}

/// `−tr ln |W|` for a transfer matrix, `+∞` when `|W|` is singular.
pub fn entropy_of_transfer(w: &CMatrix) -> Result<ExtendedReal> {
    Ok(match log_modulus_trace(w)? {
        Some(t) => ExtendedReal::Finite(-t + 0.0),
        None => ExtendedReal::PlusInfinity,
    })
}

/// c-Entropy `S = −tr ln |W(−i)|`.
///
/// When `−i ∈ σ(T)` the value is taken as a limit along `z = −i + iε` for the
/// offsets in [`LIMIT_LADDER`]: `|det W|` growing by more than
/// [`LIMIT_GROWTH`] per decade gives `−∞`, shrinking at that rate gives `+∞`,
/// and a converging `−ln|det W|` gives its extrapolated finite limit.
pub fn c_entropy(sys: &LSystem) -> Result<ExtendedReal> {
    match sys.transfer(-I) {
        Ok(w) => entropy_of_transfer(&w),
        Err(Error::SpectrumHit { .. }) => limit_entropy(sys),
        Err(e) => Err(e),
    }
}

fn limit_entropy(sys: &LSystem) -> Result<ExtendedReal> {
    let mut dets = [0.0; 3];
    for (d, eps) in dets.iter_mut().zip(LIMIT_LADDER) {
        let z = C64::new(0.0, eps - 1.0);
        let w = sys.transfer(z).map_err(|e| {
            Error::NumericalBreakdown(format!("limit ladder at z = {z} failed: {e}"))
        })?;
        *d = w.det()?.norm();
    }
    if dets.iter().all(|&d| d == 0.0) {
        return Ok(ExtendedReal::PlusInfinity);
    }
    if dets.iter().any(|&d| d == 0.0 || !d.is_finite()) {
        return Err(Error::NumericalBreakdown(format!(
            "|det W| degenerate along the ladder: {dets:?}"
        )));
    }
    let r1 = dets[1] / dets[0];
    let r2 = dets[2] / dets[1];
    if r1 > LIMIT_GROWTH && r2 > LIMIT_GROWTH {
        return Ok(ExtendedReal::MinusInfinity);
    }
    if r1 < 1.0 / LIMIT_GROWTH && r2 < 1.0 / LIMIT_GROWTH {
        return Ok(ExtendedReal::PlusInfinity);
    }

    let s: Vec<f64> = dets.iter().map(|d| -d.ln()).collect();
    let (d1, d2) = (s[1] - s[0], s[2] - s[1]);
    let settled = d2.abs() <= LIMIT_ZERO_SNAP || d2.abs() <= 0.5 * d1.abs();
    if !settled {
        return Err(Error::NumericalBreakdown(format!(
            "entropy along the ladder does not settle: {s:?}"
        )));
    }
    // linear-in-ε extrapolation to ε = 0
    let ratio = LIMIT_LADDER[2] / (LIMIT_LADDER[1] - LIMIT_LADDER[2]);
    let limit = s[2] + d2 * ratio;
    if limit.abs() <= LIMIT_ZERO_SNAP {
        Ok(ExtendedReal::Finite(0.0))
    } else {
        Ok(ExtendedReal::Finite(limit))
    }
}

/// `S = +tr ln |W(i)|`, valid when `i ∈ ρ(T)`; a singular `|W(i)|` gives `−∞`.
pub fn c_entropy_at_plus_i(sys: &LSystem) -> Result<ExtendedReal> {
    let w = sys.transfer(I)?;
    Ok(match log_modulus_trace(&w)? {
        Some(t) => ExtendedReal::Finite(t),
        None => ExtendedReal::MinusInfinity,
    })
}

/// `−ln |det W(−i)|`, the determinant route to the same quantity.
pub fn entropy_via_det(sys: &LSystem) -> Result<ExtendedReal> {
    let d = sys.transfer(-I)?.det()?.norm();
    Ok(if d == 0.0 {
        ExtendedReal::PlusInfinity
    } else {
        ExtendedReal::Finite(-d.ln())
    })
}

fn require_upper(l: C64) -> Result<()> {
    if l.re.is_finite() && l.im.is_finite() && l.im > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("lambda0 = {l} must satisfy Im lambda0 > 0")))
    }
}

/// `|λ|² + 2 Im λ + 1` and `|λ|² − 2 Im λ + 1`, the latter written as a sum of
/// squares so that it vanishes exactly at `λ = i`.
fn ratio_parts(l: C64) -> (f64, f64) {
    let num = l.re * l.re + (1.0 + l.im) * (1.0 + l.im);
    let den = l.re * l.re + (1.0 - l.im) * (1.0 - l.im);
    (num, den)
}

fn half_log_ratio(l: C64) -> ExtendedReal {
    let (num, den) = ratio_parts(l);
    if den == 0.0 {
        ExtendedReal::PlusInfinity
    } else {
        ExtendedReal::Finite(0.5 * (num / den).ln())
    }
}

/// Closed-form entropy of the dissipative model.
pub fn closed_entropy_d(lambda0: C64) -> Result<ExtendedReal> {
    require_upper(lambda0)?;
    let (num, den) = ratio_parts(lambda0);
    Ok(if den == 0.0 {
        ExtendedReal::PlusInfinity
    } else {
        ExtendedReal::Finite((num / den).ln())
    })
}

/// Closed-form entropy of the mixed model, identically zero.
pub fn closed_entropy_m(lambda0: C64) -> Result<ExtendedReal> {
    require_upper(lambda0)?;
    Ok(ExtendedReal::Finite(0.0))
}

/// Closed-form entropy of the accumulative model, the negative of the dissipative one.
pub fn closed_entropy_a(lambda0: C64) -> Result<ExtendedReal> {
    Ok(-closed_entropy_d(lambda0)?)
}

/// Closed-form entropy of the two-parameter system `diag(λ, μ)`.
pub fn closed_entropy_general(lambda: C64, mu: C64) -> Result<ExtendedReal> {
    require_upper(lambda)?;
    require_upper(mu)?;
    Ok(half_log_ratio(lambda)
        .checked_add(half_log_ratio(mu))
        .expect("both terms are nonnegative"))
}

/// Regime and coefficient: `D = 1 − e^{−2S}` for `S ≥ 0`, `A = 1 − e^{2S}` for `S < 0`.
pub fn classify(entropy: ExtendedReal) -> EntropyReport {
    let (regime, coefficient) = match entropy {
        ExtendedReal::PlusInfinity => (Regime::Dissipative, 1.0),
        ExtendedReal::MinusInfinity => (Regime::Accumulative, 1.0),
        ExtendedReal::Finite(s) if s >= 0.0 => (Regime::Dissipative, -(-2.0 * s).exp_m1()),
        ExtendedReal::Finite(s) => (Regime::Accumulative, -(2.0 * s).exp_m1()),
    };
    EntropyReport {
        entropy,
        regime,
        coefficient,
    }
}

/// Entropy report of a system straight from the definition.
pub fn report(sys: &LSystem) -> Result<EntropyReport> {
    Ok(classify(c_entropy(sys)?))
}

fn coefficient_closed_form(l: C64) -> Result<f64> {
    require_upper(l)?;
    let abs2 = l.norm_sqr();
    let den = abs2 + 2.0 * l.im + 1.0;
    Ok(8.0 * l.im * (abs2 + 1.0) / (den * den))
}

/// `D_d = 8 Im λ₀ (|λ₀|² + 1) / (|λ₀|² + 2 Im λ₀ + 1)²`.
pub fn closed_dissipation_d(lambda0: C64) -> Result<f64> {
    coefficient_closed_form(lambda0)
}

/// `A_a`, the same rational function of `λ₀` as [`closed_dissipation_d`].
pub fn closed_accumulation_a(lambda0: C64) -> Result<f64> {
    coefficient_closed_form(lambda0)
}

/// Sample points `min, min + step, …, max`.
///
/// When `step` is the reciprocal of an integer `N` and both bounds are
/// multiples of it, samples are computed as `k / N` so that decimal grid
/// points such as `0` and `1` land exactly.
pub fn grid_axis(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !min.is_finite() || !max.is_finite() || min > max {
        return Err(Error::Domain(format!(
            "bad grid [{min}, {max}] with step {step}"
        )));
    }
    let per_unit = (1.0 / step).round();
    let on_lattice = |x: f64| ((x * per_unit) - (x * per_unit).round()).abs() < 1e-9;
    if per_unit >= 1.0 && ((1.0 / step) - per_unit).abs() < 1e-9 * per_unit && on_lattice(min) && on_lattice(max) {
        let lo = (min * per_unit).round() as i64;
        let hi = (max * per_unit).round() as i64;
        return Ok((lo..=hi).map(|k| k as f64 / per_unit).collect());
    }
    let count = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| min + k as f64 * step).collect())
}

/// Result of a one-dimensional scan along `λ₀ = x + a i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanResult {
    pub x_star: f64,
    pub entropy_star: f64,
}

fn scan(
    a: f64,
    x_range: (f64, f64),
    step: f64,
    entropy: fn(C64) -> Result<ExtendedReal>,
    better: fn(f64, f64) -> bool,
) -> Result<ScanResult> {
    if a.is_nan() || a <= 0.0 || a == 1.0 {
        return Err(Error::Domain(format!(
            "scan height a = {a} must be positive and different from 1"
        )));
    }
    let (lo, hi) = x_range;
    if !(lo <= 0.0 && 0.0 <= hi) || (lo + hi).abs() > 1e-12 * (1.0 + hi.abs()) {
        return Err(Error::Domain(format!(
            "scan range [{lo}, {hi}] must be symmetric about 0"
        )));
    }
    let mut best: Option<ScanResult> = None;
    for x in grid_axis(lo, hi, step)? {
        let s = entropy(C64::new(x, a))?
            .finite()
            .ok_or_else(|| Error::NumericalBreakdown(format!("infinite entropy at x = {x}")))?;
        if best.is_none_or(|b| better(s, b.entropy_star)) {
            best = Some(ScanResult {
                x_star: x,
                entropy_star: s,
            });
        }
    }
    best.ok_or_else(|| Error::Domain("empty scan grid".into()))
}

/// Grid maximizer of the dissipative entropy along `Im λ₀ = a`.
pub fn argmax_scan_d(a: f64, x_range: (f64, f64), step: f64) -> Result<ScanResult> {
    scan(a, x_range, step, closed_entropy_d, |s, best| s > best)
}

/// Grid minimizer of the accumulative entropy along `Im λ₀ = a`.
pub fn argmin_scan_a(a: f64, x_range: (f64, f64), step: f64) -> Result<ScanResult> {
    scan(a, x_range, step, closed_entropy_a, |s, best| s < best)
}

/// Entropy samples over the `(Re λ₀, Im λ₀)` plane.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    pub kind: ModelKind,
    pub x_axis: Vec<f64>,
    pub y_axis: Vec<f64>,
    /// `values[i][j]` is the entropy at `(x_axis[i], y_axis[j])`.
    pub values: Vec<Vec<ExtendedReal>>,
}

/// Default grid for surface emission: `x ∈ [−3, 3]`, `y ∈ [0.05, 3]`, step 0.05.
pub const DEFAULT_SURFACE: ((f64, f64), (f64, f64), f64) = ((-3.0, 3.0), (0.05, 3.0), 0.05);

/// Samples the closed-form entropy of the `d` or `a` model over a grid.
pub fn entropy_surface(
    kind: ModelKind,
    x_range: (f64, f64),
    y_range: (f64, f64),
    step: f64,
) -> Result<SurfaceGrid> {
    let entropy: fn(C64) -> Result<ExtendedReal> = match kind {
        ModelKind::Dissipative => closed_entropy_d,
        ModelKind::Accumulative => closed_entropy_a,
        other => {
            return Err(Error::Domain(format!(
                "surfaces are defined for kinds d and a, got {other:?}"
            )))
        }
    };
    if y_range.0.is_nan() || y_range.0 <= 0.0 {
        return Err(Error::Domain("surface y-range must be strictly positive".into()));
    }
    let x_axis = grid_axis(x_range.0, x_range.1, step)?;
    let y_axis = grid_axis(y_range.0, y_range.1, step)?;
    let values = x_axis
        .iter()
        .map(|&x| {
            y_axis
                .iter()
                .map(|&y| entropy(C64::new(x, y)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SurfaceGrid {
        kind,
        x_axis,
        y_axis,
        values,
    })
}

impl SurfaceGrid {
    /// Grid index closest to the singular point `λ₀ = i`.
    pub fn nearest_to_singularity(&self) -> (usize, usize) {
        let nearest = |axis: &[f64], target: f64| {
            axis.iter()
                .enumerate()
                .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
                .map(|(i, _)| i)
                .expect("non-empty axis")
        };
        (nearest(&self.x_axis, 0.0), nearest(&self.y_axis, 1.0))
    }

    /// Value at an exact grid point, if present.
    pub fn value_at(&self, x: f64, y: f64) -> Option<ExtendedReal> {
        let i = self.x_axis.iter().position(|&v| v == x)?;
        let j = self.y_axis.iter().position(|&v| v == y)?;
        Some(self.values[i][j])
    }

    /// CSV with header `x,y,entropy`, infinite cells as `+inf` / `-inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,entropy\n");
        for (i, &x) in self.x_axis.iter().enumerate() {
            for (j, &y) in self.y_axis.iter().enumerate() {
                out.push_str(&format!("{x},{y},{}\n", self.values[i][j]));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_theta_a, build_theta_d, build_theta_general, build_theta_m};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn fin(x: ExtendedReal) -> f64 {
        x.finite().expect("finite entropy")
    }

    #[test]
    fn model_entropies_at_one_plus_i() {
        let l = c(1.0, 1.0);
        let ln5 = 5f64.ln();
        assert!((fin(c_entropy(&build_theta_d(l).unwrap()).unwrap()) - ln5).abs() < 1e-14);
        assert_eq!(c_entropy(&build_theta_m(l).unwrap()).unwrap(), ExtendedReal::Finite(0.0));
        assert!((fin(c_entropy(&build_theta_a(l).unwrap()).unwrap()) + ln5).abs() < 1e-14);
    }

    #[test]
    fn model_entropies_at_i() {
        assert_eq!(c_entropy(&build_theta_d(I).unwrap()).unwrap(), ExtendedReal::PlusInfinity);
        assert_eq!(c_entropy(&build_theta_m(I).unwrap()).unwrap(), ExtendedReal::Finite(0.0));
        assert_eq!(c_entropy(&build_theta_a(I).unwrap()).unwrap(), ExtendedReal::MinusInfinity);
    }

    #[test]
    fn finite_limit_through_a_pole() {
        // simple pole of W at -i in one channel only
        let t = CMatrix::from_diag(&[-I, c(0.0, 2.0)]);
        let k = CMatrix::from_real_diag(&[1.0, 2f64.sqrt()]);
        let j = CMatrix::from_real_diag(&[-1.0, 1.0]);
        let sys = LSystem::new(t, k, j).unwrap();
        assert_eq!(c_entropy(&sys).unwrap(), ExtendedReal::MinusInfinity);
    }

    #[test]
    fn finite_limit_through_cancelling_poles() {
        // mixed block at λ₀ = i next to a regular dissipative channel
        let t = CMatrix::from_diag(&[I, -I, c(1.0, 1.0)]);
        let sys = LSystem::new(t, CMatrix::identity(3), CMatrix::from_real_diag(&[1.0, -1.0, 1.0])).unwrap();
        let s = fin(c_entropy(&sys).unwrap());
        assert!((s - 0.5 * 5f64.ln()).abs() < 1e-8, "{s}");
    }

    #[test]
    fn plus_i_route() {
        let ln5 = 5f64.ln();
        let s = c_entropy_at_plus_i(&build_theta_d(c(1.0, 1.0)).unwrap()).unwrap();
        assert!((fin(s) - ln5).abs() < 1e-14);
        assert!(matches!(
            c_entropy_at_plus_i(&build_theta_d(I).unwrap()),
            Err(Error::SpectrumHit { .. })
        ));
        assert_eq!(
            c_entropy_at_plus_i(&build_theta_a(I).unwrap()).unwrap(),
            ExtendedReal::MinusInfinity
        );
        let zero = LSystem::new(
            CMatrix::from_real_diag(&[1.0, 2.0]),
            CMatrix::zeros(2, 1),
            CMatrix::identity(1),
        )
        .unwrap();
        assert_eq!(c_entropy_at_plus_i(&zero).unwrap(), ExtendedReal::Finite(0.0));
        assert_eq!(c_entropy(&zero).unwrap(), ExtendedReal::Finite(0.0));
    }

    #[test]
    fn closed_forms() {
        let ln5 = 5f64.ln();
        let ln9 = 9f64.ln();
        assert!((fin(closed_entropy_d(c(1.0, 1.0)).unwrap()) - ln5).abs() < 1e-15);
        assert_eq!(closed_entropy_d(I).unwrap(), ExtendedReal::PlusInfinity);
        assert!((fin(closed_entropy_d(c(0.0, 2.0)).unwrap()) - ln9).abs() < 1e-15);
        assert!(matches!(closed_entropy_d(c(1.0, 0.0)), Err(Error::Domain(_))));

        assert!((fin(closed_entropy_a(c(1.0, 1.0)).unwrap()) + ln5).abs() < 1e-15);
        assert_eq!(closed_entropy_a(I).unwrap(), ExtendedReal::MinusInfinity);
        let l = c(3.0, 0.5);
        assert_eq!(fin(closed_entropy_a(l).unwrap()), -fin(closed_entropy_d(l).unwrap()));

        assert!((fin(closed_entropy_general(c(1.0, 1.0), c(1.0, 1.0)).unwrap()) - ln5).abs() < 1e-15);
        let s = fin(closed_entropy_general(c(1.0, 1.0), c(0.0, 2.0)).unwrap());
        assert!((s - 45f64.sqrt().ln()).abs() < 1e-15);
        let direct = fin(c_entropy(&build_theta_general(c(1.0, 1.0), c(0.0, 2.0)).unwrap()).unwrap());
        assert!((s - direct).abs() < 1e-14);
        assert_eq!(closed_entropy_general(I, c(0.0, 2.0)).unwrap(), ExtendedReal::PlusInfinity);
        // μ = −λ̄ reproduces the dissipative model
        let l = c(0.7, 1.9);
        assert!(
            (fin(closed_entropy_general(l, -l.conj()).unwrap()) - fin(closed_entropy_d(l).unwrap())).abs()
                < 1e-15
        );
    }

    #[test]
    fn classification() {
        let r = classify(ExtendedReal::Finite(5f64.ln()));
        assert_eq!(r.regime, Regime::Dissipative);
        assert!((r.coefficient - 24.0 / 25.0).abs() < 1e-15);
        let r = classify(ExtendedReal::Finite(0.0));
        assert_eq!((r.regime, r.coefficient), (Regime::Dissipative, 0.0));
        let r = classify(ExtendedReal::MinusInfinity);
        assert_eq!((r.regime, r.coefficient), (Regime::Accumulative, 1.0));
        let r = classify(ExtendedReal::PlusInfinity);
        assert_eq!((r.regime, r.coefficient), (Regime::Dissipative, 1.0));
        let r = classify(ExtendedReal::Finite(-5f64.ln()));
        assert_eq!(r.regime, Regime::Accumulative);
        assert!((r.coefficient - 24.0 / 25.0).abs() < 1e-15);
    }

    #[test]
    fn coefficient_closed_forms() {
        assert!((closed_dissipation_d(c(1.0, 1.0)).unwrap() - 24.0 / 25.0).abs() < 1e-15);
        assert_eq!(closed_dissipation_d(I).unwrap(), 1.0);
        let d = closed_dissipation_d(c(0.0, 2.0)).unwrap();
        assert!((d - 80.0 / 81.0).abs() < 1e-15);
        assert!((d - (1.0 - (-2.0 * 9f64.ln()).exp())).abs() < 1e-15);

        assert!((closed_accumulation_a(c(1.0, 1.0)).unwrap() - 24.0 / 25.0).abs() < 1e-15);
        assert_eq!(closed_accumulation_a(I).unwrap(), 1.0);
        let l = c(0.3, 2.7);
        assert_eq!(closed_accumulation_a(l).unwrap(), closed_dissipation_d(l).unwrap());
        for l in [c(0.3, 2.7), c(-4.0, 0.2), c(1.0, 1.0)] {
            let from_entropy = classify(closed_entropy_d(l).unwrap()).coefficient;
            assert!((closed_dissipation_d(l).unwrap() - from_entropy).abs() < 1e-12);
            let from_entropy = classify(closed_entropy_a(l).unwrap()).coefficient;
            assert!((closed_accumulation_a(l).unwrap() - from_entropy).abs() < 1e-12);
        }
    }

    #[test]
    fn extremal_scans() {
        let r = argmax_scan_d(2.0, (-3.0, 3.0), 0.1).unwrap();
        assert_eq!(r.x_star, 0.0);
        assert!((r.entropy_star - 9f64.ln()).abs() < 1e-15);
        let r = argmax_scan_d(0.5, (-2.0, 2.0), 0.5).unwrap();
        assert_eq!(r.x_star, 0.0);
        assert!((r.entropy_star - 9f64.ln()).abs() < 1e-15);
        assert!(matches!(argmax_scan_d(1.0, (-3.0, 3.0), 0.1), Err(Error::Domain(_))));

        let r = argmin_scan_a(2.0, (-3.0, 3.0), 0.1).unwrap();
        assert_eq!(r.x_star, 0.0);
        assert!((r.entropy_star + 9f64.ln()).abs() < 1e-15);
        let r = argmin_scan_a(0.5, (-2.0, 2.0), 0.5).unwrap();
        assert!((r.entropy_star + 9f64.ln()).abs() < 1e-15);
        assert!(matches!(argmin_scan_a(1.0, (-3.0, 3.0), 0.1), Err(Error::Domain(_))));
        assert!(matches!(argmin_scan_a(2.0, (-1.0, 3.0), 0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn grid_axes_hit_decimal_points() {
        let ax = grid_axis(-3.0, 3.0, 0.05).unwrap();
        assert_eq!(ax.len(), 121);
        assert!(ax.contains(&0.0) && ax.contains(&1.0) && ax.contains(&-3.0));
        let ax = grid_axis(0.0, 1.0, 0.3).unwrap();
        assert_eq!(ax.len(), 4);
        assert!(grid_axis(1.0, 0.0, 0.1).is_err());
        assert!(grid_axis(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn surfaces() {
        let ((xr, yr), step) = ((( -1.0, 1.0), (0.5, 1.5)), 0.25);
        let d = entropy_surface(ModelKind::Dissipative, xr, yr, step).unwrap();
        let infinite: Vec<_> = d
            .values
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (i, j, *v)))
            .filter(|(_, _, v)| !v.is_finite())
            .collect();
        assert_eq!(infinite.len(), 1);
        let (i, j, v) = infinite[0];
        assert_eq!((d.x_axis[i], d.y_axis[j], v), (0.0, 1.0, ExtendedReal::PlusInfinity));
        assert_eq!(d.nearest_to_singularity(), (i, j));
        assert!((fin(d.value_at(1.0, 1.0).unwrap()) - 5f64.ln()).abs() < 1e-15);

        let a = entropy_surface(ModelKind::Accumulative, xr, yr, step).unwrap();
        assert_eq!(a.value_at(0.0, 1.0), Some(ExtendedReal::MinusInfinity));
        assert!(a.to_csv().starts_with("x,y,entropy\n-1,0.5,"));
        assert!(a.to_csv().contains("\n0,1,-inf\n"));

        assert!(entropy_surface(ModelKind::Dissipative, xr, (0.0, 1.0), step).is_err());
        assert!(entropy_surface(ModelKind::Mixed, xr, yr, step).is_err());
    }

    #[test]
    fn report_json() {
        let r = report(&build_theta_a(I).unwrap()).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"entropy":"-inf","regime":"accumulative","coefficient":1.0}"#
        );
        let back: EntropyReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        let r: EntropyReport =
            serde_json::from_str(r#"{"entropy":0.5,"regime":"dissipative","coefficient":0.1}"#).unwrap();
        assert_eq!(r.entropy, ExtendedReal::Finite(0.5));
    }

    #[test]
    fn extended_real_arithmetic() {
        use ExtendedReal::*;
        assert_eq!(Finite(1.0).checked_add(Finite(2.0)), Some(Finite(3.0)));
        assert_eq!(PlusInfinity.checked_add(Finite(-7.0)), Some(PlusInfinity));
        assert_eq!(MinusInfinity.checked_add(MinusInfinity), Some(MinusInfinity));
        assert_eq!(PlusInfinity.checked_add(MinusInfinity), None);
        assert_eq!(ExtendedReal::from_f64(f64::NEG_INFINITY), MinusInfinity);
        assert_eq!(PlusInfinity.to_string(), "+inf");
    }
}
