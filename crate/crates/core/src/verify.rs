//! Seeded random systems and the randomized property suites behind
//! `lsys verify`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cmatrix::{CMatrix, C64, I};
use crate::coupling::{compose_accumulation, compose_dissipation, couple};
use crate::entropy::{
    c_entropy, c_entropy_at_plus_i, classify, closed_entropy_a, closed_entropy_d, closed_entropy_m,
    entropy_via_det, ExtendedReal,
};
use crate::error::Result;
use crate::lsystem::{herglotz_check, impedance_from_transfer, transfer_from_impedance, LSystem};
use crate::models::ModelSpec;

/// Minimum `σ_min(T − zI)` for sampled evaluation points.
pub const SPECTRAL_CLEARANCE: f64 = 0.1;

/// Exclusion radius around `λ₀ = i` for random model parameters.
pub const LAMBDA_EXCLUSION: f64 = 1e-3;

pub const ORACLE_TOL: f64 = 1e-9;
pub const ROUND_TRIP_TOL: f64 = 1e-9;
pub const MULTIPLICATION_TOL: f64 = 1e-10;
pub const ADDITIVITY_TOL: f64 = 1e-9;
pub const COMPOSITION_TOL: f64 = 1e-12;
pub const DETERMINANT_TOL: f64 = 1e-9;

/// Random valid L-systems, model parameters and evaluation points.
pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn unit(&mut self) -> C64 {
        C64::new(self.rng.gen_range(-1.0..=1.0), self.rng.gen_range(-1.0..=1.0))
    }

    pub fn signature(&mut self, m: usize) -> CMatrix {
        let d: Vec<f64> = (0..m)
            .map(|_| if self.rng.gen_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        CMatrix::from_real_diag(&d)
    }

    /// `T = R + i·KJK*` with `K` and Hermitian `R` drawn entrywise from `[−1, 1]²`.
    pub fn system_with(&mut self, n: usize, j: &CMatrix) -> Result<LSystem> {
        let m = j.rows();
        let entries: Vec<C64> = (0..n * m).map(|_| self.unit()).collect();
        let k = CMatrix::from_fn(n, m, |a, b| entries[a * m + b]);
        let mut upper = vec![C64::new(0.0, 0.0); n * n];
        for a in 0..n {
            upper[a * n + a] = C64::new(self.rng.gen_range(-1.0..=1.0), 0.0);
            for b in a + 1..n {
                upper[a * n + b] = self.unit();
            }
        }
        let r = CMatrix::from_fn(n, n, |a, b| if a <= b { upper[a * n + b] } else { upper[b * n + a].conj() });
        let im = k.matmul(j)?.matmul(&k.adjoint())?;
        let t = r.add(&im.scale(I))?;
        LSystem::new(t, k, j.clone())
    }

    /// State dimension 1..=4, input-output dimension 1..=3, random signature.
    pub fn system(&mut self) -> Result<LSystem> {
        let n = self.rng.gen_range(1..=4);
        let m = self.rng.gen_range(1..=3);
        let j = self.signature(m);
        self.system_with(n, &j)
    }

    /// Two systems sharing `m` and `J`.
    pub fn factor_pair(&mut self) -> Result<(LSystem, LSystem)> {
        let m = self.rng.gen_range(1..=3);
        let j = self.signature(m);
        let n1 = self.rng.gen_range(1..=4);
        let n2 = self.rng.gen_range(1..=4);
        Ok((self.system_with(n1, &j)?, self.system_with(n2, &j)?))
    }

    /// `Im λ₀ ∈ (0, 5]`, `|Re λ₀| ≤ 5`, away from `i`.
    pub fn lambda0(&mut self) -> C64 {
        loop {
            let re = self.rng.gen_range(-5.0..=5.0);
            let im = 5.0 - self.rng.gen_range(0.0..5.0);
            let l = C64::new(re, im);
            if (l - I).norm() >= LAMBDA_EXCLUSION {
                return l;
            }
        }
    }

    /// A point of `[−3, 3]²` with `σ_min(A − zI) ≥ 0.1` for every `A` given.
    pub fn z_clear_of(&mut self, operators: &[&CMatrix]) -> Result<C64> {
        loop {
            let z = C64::new(self.rng.gen_range(-3.0..=3.0), self.rng.gen_range(-3.0..=3.0));
            if spectral_clearance(operators, z)? >= SPECTRAL_CLEARANCE {
                return Ok(z);
            }
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..=hi)
    }
}

fn spectral_clearance(operators: &[&CMatrix], z: C64) -> Result<f64> {
    let mut clearance = f64::INFINITY;
    for a in operators {
        let s = a.shift(z)?.singular_values();
        clearance = clearance.min(s.last().copied().unwrap_or(f64::INFINITY));
    }
    Ok(clearance)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<15} {} checks={} failures={} max_residual={:.3e} tol={:.0e}",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.checks,
            self.failures,
            self.max_residual,
            self.tolerance
        )
    }
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    checks: usize,
    failures: usize,
    max_residual: f64,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Tally {
            name,
            tolerance,
            checks: 0,
            failures: 0,
            max_residual: 0.0,
        }
    }

    fn residual(&mut self, r: f64) {
        self.checks += 1;
        if r.is_nan() || r > self.tolerance {
            self.failures += 1;
        }
        if r.is_nan() || r > self.max_residual {
            self.max_residual = r;
        }
    }

    fn outcome(&mut self, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
        }
    }

    /// Compares extended reals: infinities must match exactly.
    fn extended(&mut self, got: ExtendedReal, want: ExtendedReal) {
        match (got, want) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => self.residual((a - b).abs()),
            _ => self.outcome(got == want),
        }
    }

    fn report(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
            max_residual: self.max_residual,
            tolerance: self.tolerance,
            passed: self.failures == 0 && self.checks > 0,
        }
    }
}

// each suite draws from its own stream so suites stay independent of each other
fn stream(seed: u64, suite: u64) -> Generator {
    Generator::new(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(suite))
}

/// General definition against the closed forms of the three models, plus
/// agreement of the `−i` and `+i` evaluation points.
pub fn oracle_suite(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut g = stream(seed, 1);
    let mut t = Tally::new("oracle", ORACLE_TOL);
    for _ in 0..cases {
        let l = g.lambda0();
        let pairs = [
            (ModelSpec::Dissipative { lambda0: l }, closed_entropy_d(l)?),
            (ModelSpec::Mixed { lambda0: l }, closed_entropy_m(l)?),
            (ModelSpec::Accumulative { lambda0: l }, closed_entropy_a(l)?),
        ];
        for (spec, closed) in pairs {
            let sys = spec.build()?;
            let s = c_entropy(&sys)?;
            t.extended(s, closed);
            let plus = c_entropy_at_plus_i(&sys)?;
            if s.is_finite() && plus.is_finite() {
                t.extended(plus, s);
            }
        }
    }
    Ok(t.report())
}

/// `V ↔ W` conversions against direct evaluation on random systems.
pub fn round_trip_suite(seed: u64, cases: usize, points: usize) -> Result<SuiteReport> {
    let mut g = stream(seed, 2);
    let mut t = Tally::new("round-trip", ROUND_TRIP_TOL);
    for _ in 0..cases {
        let sys = g.system()?;
        let re_t = sys.main_operator().re_part()?;
        for _ in 0..points {
            let z = loop {
                let z = g.z_clear_of(&[sys.main_operator(), &re_t])?;
                if z.im != 0.0 {
                    break z;
                }
            };
            let w = sys.transfer(z)?;
            let v = sys.impedance(z)?;
            t.residual(impedance_from_transfer(&w, sys.directing())?.dist(&v));
            t.residual(transfer_from_impedance(&v, sys.directing())?.dist(&w));
        }
    }
    Ok(t.report())
}

/// Grid of `rows × cols` points with `Re z ∈ [−2, 2]`, `Im z ∈ [0.2, 2]`.
pub fn herglotz_grid(rows: usize, cols: usize) -> Vec<C64> {
    let step = |k: usize, n: usize, lo: f64, hi: f64| {
        if n <= 1 {
            lo
        } else {
            let t = k as f64 / (n - 1) as f64;
            lo * (1.0 - t) + hi * t
        }
    };
    let mut zs = Vec::with_capacity(rows * cols);
    for a in 0..rows {
        for b in 0..cols {
            zs.push(C64::new(step(b, cols, -2.0, 2.0), step(a, rows, 0.2, 2.0)));
        }
    }
    zs
}

/// Minimum eigenvalue of `Im V(z)` over the upper half-plane grid, for the
/// three models at random `λ₀` and for random systems.
pub fn herglotz_suite(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut g = stream(seed, 3);
    let mut t = Tally::new("herglotz", crate::lsystem::HERGLOTZ_TOL);
    let grid = herglotz_grid(10, 10);
    for _ in 0..cases {
        let l = g.lambda0();
        let systems = [
            ModelSpec::Dissipative { lambda0: l }.build()?,
            ModelSpec::Mixed { lambda0: l }.build()?,
            ModelSpec::Accumulative { lambda0: l }.build()?,
            g.system()?,
        ];
        for sys in &systems {
            let report = herglotz_check(sys, &grid)?;
            t.residual((-report.min_eigenvalue).max(0.0));
        }
    }
    Ok(t.report())
}

/// Multiplication theorem and block resolvent on random factor pairs.
pub fn multiplication_suite(seed: u64, cases: usize, points: usize) -> Result<SuiteReport> {
    let mut g = stream(seed, 4);
    let mut t = Tally::new("multiplication", MULTIPLICATION_TOL);
    for _ in 0..cases {
        let (a, b) = g.factor_pair()?;
        let pair = couple(&a, &b)?;
        for _ in 0..points {
            let z = g.z_clear_of(&[a.main_operator(), b.main_operator()])?;
            t.residual(pair.multiplication_residual(z)?);
            t.residual(pair.resolvent_residual(z)?);
        }
    }
    Ok(t.report())
}

/// `S = S₁ + S₂` on random factor pairs; `+∞` absorbs.
pub fn additivity_suite(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut g = stream(seed, 4);
    let mut t = Tally::new("additivity", ADDITIVITY_TOL);
    for _ in 0..cases {
        let (a, b) = g.factor_pair()?;
        let e = couple(&a, &b)?.entropies()?;
        match e.left.checked_add(e.right) {
            Some(sum) => t.extended(e.coupled, sum),
            None => t.outcome(e.coupled == ExtendedReal::PlusInfinity),
        }
    }
    Ok(t.report())
}

/// Coefficient composition against the coefficient of the summed entropy,
/// for dissipative and accumulative scalars and for `J = I` system pairs.
pub fn composition_suite(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut g = stream(seed, 5);
    let mut t = Tally::new("composition", COMPOSITION_TOL);
    for _ in 0..cases {
        let (s1, s2) = (g.uniform(0.0, 5.0), g.uniform(0.0, 5.0));
        let coef = |s: f64| classify(ExtendedReal::Finite(s)).coefficient;
        t.residual((compose_dissipation(coef(s1), coef(s2))? - coef(s1 + s2)).abs());
        t.residual((compose_accumulation(coef(-s1), coef(-s2))? - coef(-s1 - s2)).abs());

        let m = g.rng.gen_range(1..=3);
        let j = CMatrix::identity(m);
        let n1 = g.rng.gen_range(1..=4);
        let n2 = g.rng.gen_range(1..=4);
        let (a, b) = (g.system_with(n1, &j)?, g.system_with(n2, &j)?);
        if let (Some(sa), Some(sb)) = (c_entropy(&a)?.finite(), c_entropy(&b)?.finite()) {
            t.residual((compose_dissipation(coef(sa), coef(sb))? - coef(sa + sb)).abs());
        }
    }
    Ok(t.report())
}

/// `−tr ln|W(−i)|` against `−ln|det W(−i)|` on the models at random `λ₀`
/// and on random systems.
pub fn determinant_suite(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut g = stream(seed, 6);
    let mut t = Tally::new("determinant", DETERMINANT_TOL);
    for _ in 0..cases {
        let l = g.lambda0();
        let systems = [
            ModelSpec::Dissipative { lambda0: l }.build()?,
            ModelSpec::Mixed { lambda0: l }.build()?,
            ModelSpec::Accumulative { lambda0: l }.build()?,
            g.system()?,
        ];
        for sys in &systems {
            let s = c_entropy(sys)?;
            if s.is_finite() {
                t.extended(entropy_via_det(sys)?, s);
            }
        }
    }
    Ok(t.report())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(f, "{s}")?;
        }
        write!(f, "{}", if self.passed() { "ALL PASS" } else { "FAILED" })
    }
}

/// Runs every suite with `cases` random draws each.
pub fn run_all(seed: u64, cases: usize) -> Result<VerifyReport> {
    Ok(VerifyReport {
        seed,
        cases,
        suites: vec![
            oracle_suite(seed, cases)?,
            round_trip_suite(seed, cases, 10)?,
            herglotz_suite(seed, cases)?,
            multiplication_suite(seed, cases, 25)?,
            additivity_suite(seed, cases)?,
            composition_suite(seed, cases)?,
            determinant_suite(seed, cases)?,
        ],
    })
}
