//! Coefficient sets of the phase, bulk and Riccati-angle diffusions.

use super::engine::{Coefficients, LatticeSde, Winding};
use super::types::ModelParams;
use crate::scalar::Real;

/// Phase diffusion
/// `dφ = (β/2)(a+½) sin(φ/2) dt + βλ e^{-βt/8} dt + ½ sin φ dt + 2 sin(φ/2) dB`.
#[derive(Debug, Clone, Copy)]
pub struct PhaseSde<T> {
    half_drift: T,
    beta: T,
    lambda: T,
}

impl<T: Real> PhaseSde<T> {
    pub fn new(p: &ModelParams<T>) -> Self {
        PhaseSde {
            half_drift: p.beta / T::lit(2.0) * (p.a + T::lit(0.5)),
            beta: p.beta,
            lambda: p.lambda,
        }
    }
}

impl<T: Real> LatticeSde<T> for PhaseSde<T> {
    fn period(&self) -> T {
        T::TAU()
    }

    fn coefficients(&self, s: &Winding<T>) -> Coefficients<T> {
        let sin_half = s.parity_sign() * (s.offset * T::lit(0.5)).sin();
        Coefficients {
            drift: self.half_drift * sin_half + T::lit(0.5) * s.offset.sin(),
            forcing_weight: T::one(),
            diffusion: T::lit(2.0) * sin_half,
        }
    }

    fn forcing_rate(&self, t: T) -> T {
        self.beta * self.lambda * (-self.beta * t / T::lit(8.0)).exp()
    }

    fn forcing_integral(&self, t: T, dt: T) -> T {
        let r = self.beta / T::lit(8.0);
        T::lit(8.0) * self.lambda * (-r * t).exp() * -(-r * dt).exp_m1()
    }

    /// `⌊φ / 4π⌋`
    fn count(&self, s: &Winding<T>) -> i64 {
        s.turns.div_euclid(2)
    }
}

/// Bulk diffusion `dα = λ(β/4) e^{-βt/4} dt + 2 sin(α/2) dB`.
#[derive(Debug, Clone, Copy)]
pub struct BulkSde<T> {
    beta: T,
    lambda: T,
}

impl<T: Real> BulkSde<T> {
    pub fn new(beta: T, lambda: T) -> Self {
        BulkSde { beta, lambda }
    }
}

impl<T: Real> LatticeSde<T> for BulkSde<T> {
    fn period(&self) -> T {
        T::TAU()
    }

    fn coefficients(&self, s: &Winding<T>) -> Coefficients<T> {
        Coefficients {
            drift: T::zero(),
            forcing_weight: T::one(),
            diffusion: T::lit(2.0) * s.parity_sign() * (s.offset * T::lit(0.5)).sin(),
        }
    }

    fn forcing_rate(&self, t: T) -> T {
        let r = self.beta / T::lit(4.0);
        self.lambda * r * (-r * t).exp()
    }

    fn forcing_integral(&self, t: T, dt: T) -> T {
        let r = self.beta / T::lit(4.0);
        self.lambda * (-r * t).exp() * -(-r * dt).exp_m1()
    }

    /// Nearest multiple of 2π, in units of 2π.
    fn count(&self, s: &Winding<T>) -> i64 {
        s.turns + i64::from(s.offset >= T::PI())
    }
}

/// Riccati diffusion
/// `dp = (2/√β) p dB + ((a + 2/β) p - p² - Λ e^{-t}) dt`
/// in the angle `θ` with `p = s cot(θ/2)`.
///
/// `θ ≡ 0 (mod 2π)` is `p = +∞`, `θ ≡ π (mod 2π)` is `p = 0`, and an
/// explosion to `-∞` followed by a restart at `+∞` is a smooth upward
/// crossing of a multiple of `2π`. Itô's formula gives
///
/// ```text
/// dθ = [ -(a + 2/β - σ² cos²(θ/2)) sin θ + 2 s cos²(θ/2)
///        + (2Λ e^{-t}/s) sin²(θ/2) ] dt - σ sin θ dB,   σ = 2/√β.
/// ```
#[derive(Debug, Clone, Copy)]
pub struct RiccatiAngleSde<T> {
    linear: T,
    sigma_sq: T,
    sigma: T,
    scale: T,
    eigen_scale: T,
}

impl<T: Real> RiccatiAngleSde<T> {
    /// `p.lambda` is the eigenvalue scale `Λ`.
    pub fn new(p: &ModelParams<T>) -> Self {
        let sigma_sq = T::lit(4.0) / p.beta;
        RiccatiAngleSde {
            linear: p.a + T::lit(2.0) / p.beta,
            sigma_sq,
            sigma: sigma_sq.sqrt(),
            scale: p.lambda.max(T::one()).sqrt(),
            eigen_scale: p.lambda,
        }
    }
}

impl<T: Real> LatticeSde<T> for RiccatiAngleSde<T> {
    fn period(&self) -> T {
        T::PI()
    }

    fn coefficients(&self, s: &Winding<T>) -> Coefficients<T> {
        let sin_theta = s.parity_sign() * s.offset.sin();
        let half = s.offset * T::lit(0.5);
        // θ/2 = kπ/2 + r/2
        let cos_sq = if s.turns.rem_euclid(2) == 0 {
            let c = half.cos();
            c * c
        } else {
            let c = half.sin();
            c * c
        };
        Coefficients {
            drift: -(self.linear - self.sigma_sq * cos_sq) * sin_theta
                + T::lit(2.0) * self.scale * cos_sq,
            forcing_weight: T::lit(2.0) / self.scale * (T::one() - cos_sq),
            diffusion: -self.sigma * sin_theta,
        }
    }

    fn forcing_rate(&self, t: T) -> T {
        self.eigen_scale * (-t).exp()
    }

    fn forcing_integral(&self, t: T, dt: T) -> T {
        self.eigen_scale * (-t).exp() * -(-dt).exp_m1()
    }

    /// Zero hits of `p` so far: upward crossings of odd multiples of π.
    fn count(&self, s: &Winding<T>) -> i64 {
        (s.turns + 1).div_euclid(2)
    }
}
