use crate::error::{Error, Result};
use crate::quadrature::{gauss_kronrod, Tolerance};
use crate::scalar::Real;

/// Below this |m| the Maclaurin series of `H` is used instead of `(1-m)K - E`.
const SERIES_RADIUS: f64 = 0.05;
const SERIES_TERMS: usize = 18;

/// K, E and H = (1-m)K - E at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticValue<T> {
    pub m: T,
    pub k: T,
    pub e: T,
    pub h: T,
}

impl<T: Real> EllipticValue<T> {
    pub fn at(m: T) -> Result<Self> {
        let k = ellip_k(m)?;
        let e = ellip_e(m)?;
        Ok(EllipticValue {
            m,
            k,
            e,
            h: (T::one() - m) * k - e,
        })
    }
}

fn check_below_one<T: Real>(m: T, what: &str) -> Result<()> {
    if m.is_nan() || m >= T::one() {
        return Err(Error::domain(format!("{what} requires m < 1, got {m}")));
    }
    Ok(())
}

/// Runs the arithmetic-geometric mean of `1` and `sqrt(1-m)`, returning the
/// mean and the weighted sum `sum 2^(n-1) c_n^2` with `c_0^2 = m`.
fn agm<T: Real>(m: T) -> (T, T) {
    let mut a = T::one();
    let mut b = (T::one() - m).sqrt();
    let mut weight = T::lit(0.5);
    let mut sum = weight * m;
    for _ in 0..64 {
        let c = T::lit(0.5) * (a - b);
        let next_a = T::lit(0.5) * (a + b);
        b = (a * b).sqrt();
        a = next_a;
        weight = weight + weight;
        sum = sum + weight * c * c;
        if c.abs() <= T::epsilon() * a {
            break;
        }
    }
    (a, sum)
}

/// Complete elliptic integral of the first kind, parameter convention
/// `K(m) = ∫_0^{π/2} (1 - m sin²x)^{-1/2} dx`, for any `m < 1`.
pub fn ellip_k<T: Real>(m: T) -> Result<T> {
    check_below_one(m, "K(m)")?;
    let (mean, _) = agm(m);
    Ok(T::FRAC_PI_2() / mean)
}

/// Complete elliptic integral of the second kind; defined for `m <= 1`
/// with `E(1) = 1`.
pub fn ellip_e<T: Real>(m: T) -> Result<T> {
    if m == T::one() {
        return Ok(T::one());
    }
    check_below_one(m, "E(m)")?;
    let (mean, sum) = agm(m);
    Ok(T::FRAC_PI_2() / mean * (T::one() - sum))
}

fn quad_tol<T: Real>() -> Tolerance<T> {
    let eps = T::epsilon() * T::lit(64.0);
    Tolerance {
        abs: eps.max(T::lit(1e-14)),
        rel: eps.max(T::lit(1e-14)),
        max_intervals: 4000,
    }
}

/// `K(m)` by adaptive quadrature of its defining integral.
pub fn ellip_k_quadrature<T: Real>(m: T) -> Result<T> {
    check_below_one(m, "K(m)")?;
    let est = gauss_kronrod(
        |x: T| {
            let s = x.sin();
            (T::one() - m * s * s).sqrt().recip()
        },
        T::zero(),
        T::FRAC_PI_2(),
        quad_tol(),
    )?;
    Ok(est.value)
}

/// `E(m)` by adaptive quadrature of its defining integral.
pub fn ellip_e_quadrature<T: Real>(m: T) -> Result<T> {
    if m.is_nan() || m > T::one() {
        return Err(Error::domain(format!("E(m) requires m <= 1, got {m}")));
    }
    let est = gauss_kronrod(
        |x: T| {
            let s = x.sin();
            (T::one() - m * s * s).max(T::zero()).sqrt()
        },
        T::zero(),
        T::FRAC_PI_2(),
        quad_tol(),
    )?;
    Ok(est.value)
}

/// Coefficients `c_n` (n >= 1) with `H(m) = -(π m / 4) (1 + Σ_{n>=1} c_n m^n)`.
fn series_tail_coefficients<T: Real>() -> [T; SERIES_TERMS] {
    // (π/2) h_n are the Maclaurin coefficients of H, where
    // h_n = a_n 2n/(2n-1) - a_{n-1} and a_n = (binom(2n, n) / 4^n)^2.
    let mut out = [T::zero(); SERIES_TERMS];
    let mut central = 1.0f64; // binom(2n, n) / 4^n
    let mut a_prev = 1.0f64;
    for n in 1..=SERIES_TERMS + 1 {
        central *= (2 * n - 1) as f64 / (2 * n) as f64;
        let a = central * central;
        let h = a * (2 * n) as f64 / (2 * n - 1) as f64 - a_prev;
        a_prev = a;
        if n >= 2 {
            // H = (π/2) Σ h_n m^n = -(π m/4) Σ (-2 h_n) m^(n-1)
            out[n - 2] = T::lit(-2.0 * h);
        }
    }
    out
}

/// Returns `T(m) = S(m) - 1` where `H(m) = -(π m/4) S(m)`, valid for small |m|.
pub(crate) fn h_series_excess<T: Real>(m: T) -> T {
    let c = series_tail_coefficients::<T>();
    let mut acc = T::zero();
    for coef in c.iter().rev() {
        acc = (acc + *coef) * m;
    }
    acc
}

pub(crate) fn in_series_range<T: Real>(m: T) -> bool {
    m.abs() < T::lit(SERIES_RADIUS)
}

/// `H(m) = (1 - m) K(m) - E(m)` for `m <= 1`, with `H(1) = -1`.
///
/// Near zero the two terms cancel, so a Maclaurin series is used for small |m|.
pub fn script_h<T: Real>(m: T) -> Result<T> {
    if m.is_nan() || m > T::one() {
        return Err(Error::domain(format!("H(m) requires m <= 1, got {m}")));
    }
    if m == T::one() {
        return Ok(-T::one());
    }
    if in_series_range(m) {
        let lead = -T::FRAC_PI_4() * m;
        return Ok(lead + lead * h_series_excess(m));
    }
    let (mean, sum) = agm(m);
    let k = T::FRAC_PI_2() / mean;
    // (1-m)K - E = K (sum - m)
    Ok(k * (sum - m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn trivial_values() {
        assert!((ellip_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((ellip_e(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(ellip_e(1.0).unwrap(), 1.0);
        assert_eq!(script_h(1.0).unwrap(), -1.0);
        assert_eq!(script_h(0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(ellip_k(1.0).is_err());
        assert!(ellip_k(2.0).is_err());
        assert!(ellip_e(1.5).is_err());
        assert!(script_h(1.0 + 1e-12).is_err());
        assert!(ellip_k(f64::NAN).is_err());
    }

    // Reference values from an independent 30-digit evaluation.
    #[test]
    fn reference_values() {
        let cases: [(f64, f64, f64); 3] = [
            (0.5, 1.854_074_677_301_372, 1.350_643_881_047_675_5),
            (-1.0, 1.311_028_777_146_06, 1.910_098_894_513_856),
            (-2.0, 1.171_420_084_146_77, 2.184_438_142_746_201),
        ];
        for (m, k, e) in cases {
            assert!((ellip_k(m).unwrap() - k).abs() < 1e-13, "K({m})");
            assert!((ellip_e(m).unwrap() - e).abs() < 1e-13, "E({m})");
        }
    }

    #[test]
    fn agm_matches_quadrature() {
        for &m in &[-1e4f64, -300.0, -8.0, -2.0, -0.3, 0.0, 0.1, 0.5, 0.9, 0.999] {
            let k = ellip_k(m).unwrap();
            let kq = ellip_k_quadrature(m).unwrap();
            let e = ellip_e(m).unwrap();
            let eq = ellip_e_quadrature(m).unwrap();
            assert!((k - kq).abs() < 1e-10, "K({m}): {k} vs {kq}");
            assert!((e - eq).abs() < 1e-10, "E({m}): {e} vs {eq}");
        }
    }

    #[test]
    fn h_series_joins_direct_formula() {
        for &m in &[-0.049_999, -0.01, 0.01, 0.049_999] {
            let lead = -PI / 4.0 * m;
            let series = lead + lead * h_series_excess(m);
            let e = EllipticValue::at(m).unwrap();
            assert!((series - e.h).abs() < 1e-14, "m={m}: {series} vs {}", e.h);
        }
        let m = -8.0f64;
        let e = EllipticValue::at(m).unwrap();
        assert!((script_h(m).unwrap() - 4.244_653_291_517_867).abs() < 1e-12);
        assert!((e.h - 4.244_653_291_517_867).abs() < 1e-12);
    }

    #[test]
    fn small_m_expansion() {
        for i in 1..=50 {
            let m = 1e-3 * (i as f64 / 50.0) * if i % 2 == 0 { 1.0 } else { -1.0 };
            let h = script_h(m).unwrap();
            assert!((h + PI * m / 4.0).abs() <= 10.0 * m * m);
        }
    }

    #[test]
    fn f32_evaluation() {
        let k: f32 = ellip_k(0.5f32).unwrap();
        assert!((k - 1.854_074_7).abs() < 1e-5);
        let h: f32 = script_h(-8.0f32).unwrap();
        assert!((h - 4.244_653).abs() < 1e-4);
    }
}
