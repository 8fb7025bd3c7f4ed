//! The function γ(ν), its inverse, and the rate functions built from them.
//!
//! The integrals of `H^{-2}` that define γ are split into pieces that are
//! individually well conditioned:
//!
//! * on `[-1, 1]` the poles `16/(π² x²) - 4/(π² x)` of `H^{-2}` at the origin
//!   are integrated in closed form and only the bounded remainder is
//!   integrated numerically;
//! * on `(-∞, -1]` the integrand decays like `1 / (|x| log²|x|)`.
//!
//! Two schemes evaluate every piece. [`Scheme::Kronrod`] uses adaptive
//! Gauss–Kronrod and a two-term asymptotic expansion beyond `x = -10¹²`.
//! [`Scheme::Legendre`] uses fixed composite Gauss–Legendre after the
//! substitution `y = 1 / (ln 4 - 1 + ½ ln(1 - x))`, which maps the whole
//! half-line onto a bounded interval with a bounded integrand.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::elliptic::{h_series_excess, in_series_range, script_h};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_kronrod, CompositeLegendre, Tolerance};
use crate::scalar::Real;

/// γ(0) = 1/(2π).
pub const GAMMA_AT_ZERO: f64 = 1.0 / (2.0 * PI);

const TAIL_CUT: f64 = -1.0e12;
const LEGENDRE_ORDER: usize = 20;
const LEGENDRE_PANELS: usize = 48;
/// Below this value of the compactified variable the tail integrand equals 2
/// to double precision.
const FLAT_TAIL_Y: f64 = 0.05;
/// `1 - x = e^{-s}` is truncated at this `s` for the piece ending at `x = 1`.
const S_MAX: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    Kronrod,
    Legendre,
}

/// γ(ν) with the accumulated quadrature error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaValue<T> {
    pub nu: T,
    pub value: T,
    pub error_bound: T,
}

/// One evaluation of the rate function at density `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEvaluation<T> {
    pub rho: T,
    pub nu: T,
    pub gamma_at_nu: T,
    pub i_bess: T,
    pub quadrature_error_bound: T,
}

fn tol<T: Real>() -> Tolerance<T> {
    let floor = T::epsilon() * T::lit(256.0);
    Tolerance {
        abs: T::lit(1e-13).max(floor),
        rel: T::lit(1e-13).max(floor),
        max_intervals: 4000,
    }
}

fn inv_h_sq<T: Real>(x: T) -> T {
    let h = script_h(x).expect("argument inside [-inf, 1]");
    (h * h).recip()
}

/// `H^{-2}(x) - 16/(π² x²) + 4/(π² x)`, bounded near the origin.
fn pole_free<T: Real>(x: T) -> T {
    let pi2 = T::PI() * T::PI();
    if in_series_range(x) {
        // H = -(π x / 4)(1 + t), t = x/8 + u
        let t = h_series_excess(x);
        let u = t - x / T::lit(8.0);
        let s = T::one() + t;
        let num = -T::lit(2.0) * u - t * t + x * t / T::lit(2.0) + x * t * t / T::lit(4.0);
        T::lit(16.0) / (pi2 * x * x) * num / (s * s)
    } else {
        inv_h_sq(x) - T::lit(16.0) / (pi2 * x * x) + T::lit(4.0) / (pi2 * x)
    }
}

/// Closed-form ∫_{lo}^{hi} (16/(π² x²) - 4/(π² x)) dx for an interval not containing 0.
fn pole_integral<T: Real>(lo: T, hi: T) -> T {
    let pi2 = T::PI() * T::PI();
    T::lit(16.0) / pi2 * (lo.recip() - hi.recip()) - T::lit(4.0) / pi2 * (hi.abs() / lo.abs()).ln()
}

/// ∫_{-∞}^{-w0+1} with `w = 1 - x`, beyond `w0`: leading and first correction
/// of the large-|x| expansion `H^{-2} = q/Y² (1 + q(Y+1)/(2Y) + …)`, `q = 1/w`.
fn asymptotic_tail<T: Real>(w0: T) -> (T, T) {
    let y = T::lit(4.0).ln() - T::one() + T::lit(0.5) * w0.ln();
    let corr = (y + T::one()) / (T::lit(2.0) * w0 * y * y * y);
    let value = T::lit(2.0) / y + corr;
    // next order is O(corr / w0)
    let bound = corr.abs() / w0 * T::lit(10.0) + T::epsilon() * value;
    (value, bound)
}

/// ∫_{-∞}^{nu} H^{-2}(x) dx for `nu <= -1`.
fn lower_tail<T: Real>(nu: T, scheme: Scheme) -> Result<(T, T)> {
    match scheme {
        Scheme::Kronrod => {
            let cut = nu.min(T::lit(TAIL_CUT));
            let w_cut = T::one() - cut;
            let (tail, tail_err) = asymptotic_tail(w_cut);
            if cut == nu {
                return Ok((tail, tail_err));
            }
            // x = 1 - e^u
            let est = gauss_kronrod(
                |u: T| {
                    let w = u.exp();
                    inv_h_sq(T::one() - w) * w
                },
                (T::one() - nu).ln(),
                w_cut.ln(),
                tol(),
            )?;
            Ok((est.value + tail, est.error + tail_err))
        }
        Scheme::Legendre => {
            let y_of = |x: T| (T::lit(4.0).ln() - T::one() + T::lit(0.5) * (T::one() - x).ln()).recip();
            let y_top = y_of(nu);
            let flat = T::lit(FLAT_TAIL_Y).min(y_top);
            let g = |y: T| {
                let w = (T::lit(2.0) * (y.recip() - T::lit(4.0).ln() + T::one())).exp();
                T::lit(2.0) * w * inv_h_sq(T::one() - w) / (y * y)
            };
            let rule = CompositeLegendre::new(LEGENDRE_ORDER, LEGENDRE_PANELS);
            let body = if y_top > flat {
                rule.integrate(g, flat, y_top)
            } else {
                T::zero()
            };
            Ok((T::lit(2.0) * flat + body, T::lit(1e-12) * body.abs()))
        }
    }
}

/// ∫_{-1}^{nu} H^{-2} for `-1 < nu < 0`.
fn left_of_origin<T: Real>(nu: T, scheme: Scheme) -> Result<(T, T)> {
    let lo = -T::one();
    let (regular, err) = match scheme {
        Scheme::Kronrod => {
            let est = gauss_kronrod(pole_free, lo, nu, tol())?;
            (est.value, est.error)
        }
        Scheme::Legendre => {
            let rule = CompositeLegendre::new(LEGENDRE_ORDER, 8);
            (rule.integrate(pole_free, lo, nu), T::zero())
        }
    };
    Ok((regular + pole_integral(lo, nu), err))
}

/// ∫_{nu}^{1} H^{-2} for `0 < nu < 1`.
fn right_of_origin<T: Real>(nu: T, scheme: Scheme) -> Result<(T, T)> {
    let (regular, err) = match scheme {
        Scheme::Kronrod => {
            let est = gauss_kronrod(pole_free, nu, T::one(), tol())?;
            (est.value, est.error)
        }
        Scheme::Legendre => {
            // 1 - x = e^{-s} resolves the (1-x) log(1-x) behaviour at x = 1.
            let rule = CompositeLegendre::new(LEGENDRE_ORDER, LEGENDRE_PANELS);
            let s_lo = -(T::one() - nu).ln();
            let v = rule.integrate(
                |s: T| {
                    let e = (-s).exp();
                    pole_free(T::one() - e) * e
                },
                s_lo,
                T::lit(S_MAX).max(s_lo),
            );
            (v, T::zero())
        }
    };
    Ok((regular + pole_integral(nu, T::one()), err))
}

/// γ(ν) evaluated with an explicit quadrature scheme.
pub fn gamma_fn_with<T: Real>(nu: T, scheme: Scheme) -> Result<GammaValue<T>> {
    if nu.is_nan() || nu > T::one() {
        return Err(Error::domain(format!("gamma requires nu <= 1, got {nu}")));
    }
    let done = |value: T, error_bound: T| {
        Ok(GammaValue {
            nu,
            value,
            error_bound,
        })
    };
    if nu == T::one() {
        return done(T::zero(), T::zero());
    }
    if nu == T::zero() {
        return done(T::lit(GAMMA_AT_ZERO), T::zero());
    }
    let h = script_h(nu)?;
    let eighth = h / T::lit(8.0);
    let (integral, err) = if nu > T::zero() {
        let (i, e) = right_of_origin(nu, scheme)?;
        // ∫_1^ν = -∫_ν^1
        (-i, e)
    } else if nu >= -T::one() {
        let (tail, e1) = lower_tail(-T::one(), scheme)?;
        let (mid, e2) = left_of_origin(nu, scheme)?;
        (tail + mid, e1 + e2)
    } else {
        lower_tail(nu, scheme)?
    };
    let value = eighth * integral;
    done(value.max(T::zero()), (eighth * err).abs())
}

/// γ(ν) with the primary (adaptive) scheme.
pub fn gamma_fn<T: Real>(nu: T) -> Result<T> {
    gamma_fn_with(nu, Scheme::Kronrod).map(|g| g.value)
}

fn root_tolerance<T: Real>() -> T {
    T::lit(1e-13).max(T::epsilon() * T::lit(64.0))
}

/// Inverse of the strictly decreasing γ: the `ν <= 1` with `γ(ν) = r`.
pub fn gamma_inv_with<T: Real>(r: T, scheme: Scheme) -> Result<T> {
    if r.is_nan() || r < T::zero() {
        return Err(Error::domain(format!("gamma_inv requires r >= 0, got {r}")));
    }
    if r == T::zero() {
        return Ok(T::one());
    }
    let g0 = T::lit(GAMMA_AT_ZERO);
    if (r - g0).abs() <= T::lit(4.0) * T::epsilon() * g0 {
        return Ok(T::zero());
    }
    let f = |nu: T| gamma_fn_with(nu, scheme).map(|g| g.value - r);
    // f is decreasing: f(lo) > 0 > f(hi)
    let (mut lo, mut hi, mut f_lo, mut f_hi) = if r > g0 {
        let mut lo = -T::one();
        let mut f_lo = f(lo)?;
        while f_lo < T::zero() {
            lo = lo + lo;
            if lo < T::lit(-1e300) {
                return Err(Error::domain("gamma_inv bracket overflow"));
            }
            f_lo = f(lo)?;
        }
        (lo, T::zero(), f_lo, g0 - r)
    } else {
        (T::zero(), T::one(), g0 - r, -r)
    };
    let tol = root_tolerance::<T>();
    // Bisection while the bracket is wide, then Illinois-modified false position.
    let mut side = 0i8;
    for iter in 0..400 {
        let width = hi - lo;
        if width <= T::epsilon() * T::lit(4.0) * lo.abs().max(hi.abs()).max(T::lit(1e-300)) {
            break;
        }
        let mid = if iter < 12 || f_lo == f_hi {
            T::lit(0.5) * (lo + hi)
        } else {
            let x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
            if x > lo && x < hi {
                x
            } else {
                T::lit(0.5) * (lo + hi)
            }
        };
        let fm = f(mid)?;
        if fm.abs() <= tol * r.max(T::one()) {
            return Ok(mid);
        }
        if fm > T::zero() {
            lo = mid;
            f_lo = fm;
            if side == 1 {
                f_hi = f_hi * T::lit(0.5);
            }
            side = 1;
        } else {
            hi = mid;
            f_hi = fm;
            if side == -1 {
                f_lo = f_lo * T::lit(0.5);
            }
            side = -1;
        }
    }
    Ok(T::lit(0.5) * (lo + hi))
}

pub fn gamma_inv<T: Real>(r: T) -> Result<T> {
    gamma_inv_with(r, Scheme::Kronrod)
}

/// Rate function `I(ρ) = ν/2 + ρ H(ν)` with `ν = γ^{-1}(ρ/4)`.
pub fn rate_bess_with<T: Real>(rho: T, scheme: Scheme) -> Result<RateEvaluation<T>> {
    if rho.is_nan() || rho < T::zero() {
        return Err(Error::domain(format!("rate requires rho >= 0, got {rho}")));
    }
    let nu = gamma_inv_with(rho / T::lit(4.0), scheme)?;
    let g = gamma_fn_with(nu, scheme)?;
    let i_bess = nu / T::lit(2.0) + rho * script_h(nu)?;
    Ok(RateEvaluation {
        rho,
        nu,
        gamma_at_nu: g.value,
        i_bess,
        quadrature_error_bound: g.error_bound,
    })
}

pub fn rate_bess<T: Real>(rho: T) -> Result<RateEvaluation<T>> {
    rate_bess_with(rho, Scheme::Kronrod)
}

/// Bulk-process rate function through `I_Bess(ρ) = 32 I_Sine(ρ/4)`.
///
/// Evaluated with the [`Scheme::Legendre`] quadrature so that comparing it
/// against [`rate_bess`] exercises two independent numerical paths.
pub fn rate_sine<T: Real>(rho_s: T) -> Result<T> {
    if rho_s.is_nan() || rho_s < T::zero() {
        return Err(Error::domain(format!("rate requires rho >= 0, got {rho_s}")));
    }
    Ok(rate_bess_with(T::lit(4.0) * rho_s, Scheme::Legendre)?.i_bess / T::lit(32.0))
}
