use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::StreamId;
use crate::scalar::Real;

/// Dyson index `beta`, hard-edge parameter `a` and spectral scale `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    pub beta: T,
    pub a: T,
    pub lambda: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(beta: T, a: T, lambda: T) -> Result<Self> {
        let p = ModelParams { beta, a, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > T::zero()) || !self.beta.is_finite() {
            return Err(Error::domain(format!("beta must be > 0, got {}", self.beta)));
        }
        if !(self.a > -T::one()) || !self.a.is_finite() {
            return Err(Error::domain(format!("a must be > -1, got {}", self.a)));
        }
        if !(self.lambda >= T::zero()) || !self.lambda.is_finite() {
            return Err(Error::domain(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        Ok(())
    }

    pub fn with_lambda(&self, lambda: T) -> Self {
        ModelParams { lambda, ..*self }
    }

    /// Drift envelope `β e^{-βt/8}`.
    pub fn envelope(&self, t: T) -> T {
        self.beta * (-self.beta * t / T::lit(8.0)).exp()
    }
}

/// How the integration end time is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HorizonPolicy<T> {
    /// `(8/β)(ln max(λ,1) + ln(1/tolerance)) + settle_window + extra`.
    Asymptotic { extra: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig<T> {
    /// Step before adaptive halving.
    pub base_step: T,
    pub horizon_policy: HorizonPolicy<T>,
    /// Time over which the count must stay constant to call a run converged.
    pub settle_window: T,
    /// Remaining forcing, relative to its initial size, at the end time.
    pub tolerance: T,
    /// Number of downsampled path points to keep (0 keeps none).
    pub path_points: usize,
}

pub const MAX_PATH_POINTS: usize = 4096;
/// Bound on `|drift| dt` and `|diffusion| sqrt(dt)` per step.
pub const STEP_CONTROL: f64 = 0.1;
pub const MAX_HALVINGS: u32 = 40;

impl<T: Real> Default for IntegratorConfig<T> {
    fn default() -> Self {
        IntegratorConfig {
            base_step: T::lit(0.01),
            horizon_policy: HorizonPolicy::Asymptotic { extra: T::zero() },
            settle_window: T::lit(4.0),
            tolerance: T::lit(1e-3),
            path_points: 0,
        }
    }
}

impl<T: Real> IntegratorConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let pos = |x: T| x > T::zero() && x.is_finite();
        if !pos(self.base_step) {
            return Err(Error::domain("base_step must be > 0"));
        }
        if !pos(self.settle_window) {
            return Err(Error::domain("settle_window must be > 0"));
        }
        if !pos(self.tolerance) || self.tolerance >= T::one() {
            return Err(Error::domain("tolerance must lie in (0, 1)"));
        }
        let HorizonPolicy::Asymptotic { extra } = self.horizon_policy;
        if !(extra >= T::zero()) {
            return Err(Error::domain("horizon extra must be >= 0"));
        }
        if self.path_points > MAX_PATH_POINTS {
            return Err(Error::domain(format!(
                "at most {MAX_PATH_POINTS} path points can be stored"
            )));
        }
        Ok(())
    }

    /// End time in the phase-diffusion clock.
    pub fn end_time(&self, beta: T, lambda: T) -> T {
        let HorizonPolicy::Asymptotic { extra } = self.horizon_policy;
        T::lit(8.0) / beta * (lambda.max(T::one()).ln() + self.tolerance.recip().ln())
            + self.settle_window
            + extra
    }

    pub fn with_base_step(mut self, base_step: T) -> Self {
        self.base_step = base_step;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffusionKind {
    Phi,
    Alpha,
    PsiCoupled,
    Riccati,
}

/// Outcome of one integrated path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffusionRun<T> {
    pub kind: DiffusionKind,
    pub params: ModelParams<T>,
    pub initial_value: T,
    pub terminal_value: T,
    /// Whole lattice periods crossed, exact (`terminal = period * turns + offset`).
    pub turns: i64,
    pub end_time: T,
    pub steps: u64,
    /// Last time the count read off this diffusion changed.
    pub last_count_change: T,
    pub converged: bool,
    pub path_summary: Option<Vec<(T, T)>>,
    pub noise: StreamId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountProcess {
    Bess,
    Sine,
    BessIncrement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Sde,
    Riccati,
    MatrixOracle,
}

/// One observation of a counting function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountSample<T> {
    pub value: u64,
    pub process: CountProcess,
    pub params: ModelParams<T>,
    /// Interval offset `x` for increment counts.
    pub offset: Option<T>,
    pub provenance: Provenance,
    pub converged: bool,
    /// False when a sample was drawn outside its recommended regime
    /// (e.g. too small a matrix for the oracle).
    pub regime_ok: bool,
}
