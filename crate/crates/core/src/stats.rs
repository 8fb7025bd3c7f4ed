//! Sample statistics and goodness-of-fit tests for integer-valued counts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Minimum expected cell count in chi-square comparisons.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    /// Standard error of the mean.
    pub mean_se: f64,
    /// Standard error of the sample variance, from the fourth central moment.
    pub variance_se: f64,
}

impl Moments {
    pub fn of(xs: &[f64]) -> Result<Self> {
        let n = xs.len();
        if n < 2 {
            return Err(Error::Experiment(format!("need at least 2 samples, got {n}")));
        }
        let nf = n as f64;
        let mean = xs.iter().sum::<f64>() / nf;
        let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / nf;
        let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / nf;
        let variance = m2 * nf / (nf - 1.0);
        Ok(Moments {
            n,
            mean,
            variance,
            mean_se: (variance / nf).sqrt(),
            variance_se: ((m4 - m2 * m2).max(0.0) / nf).sqrt(),
        })
    }

    pub fn of_counts(xs: &[u64]) -> Result<Self> {
        Moments::of(&xs.iter().map(|&x| x as f64).collect::<Vec<_>>())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

fn histogram(xs: &[u64]) -> BTreeMap<u64, usize> {
    let mut h = BTreeMap::new();
    for &x in xs {
        *h.entry(x).or_insert(0) += 1;
    }
    h
}

/// Two-sample chi-square homogeneity test on integer counts.
///
/// Adjacent support points are pooled from both tails inward until every
/// cell has expected count at least [`MIN_EXPECTED`] in each sample.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> Result<TestOutcome> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Experiment("chi-square needs two nonempty samples".into()));
    }
    let (ha, hb) = (histogram(a), histogram(b));
    let mut support: Vec<u64> = ha.keys().chain(hb.keys()).copied().collect();
    support.sort_unstable();
    support.dedup();
    let cells: Vec<(f64, f64)> = support
        .iter()
        .map(|k| (*ha.get(k).unwrap_or(&0) as f64, *hb.get(k).unwrap_or(&0) as f64))
        .collect();
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let small = na.min(nb) / (na + nb);
    let enough = |c: &(f64, f64)| (c.0 + c.1) * small >= MIN_EXPECTED;

    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for c in &cells {
        acc = (acc.0 + c.0, acc.1 + c.1);
        if enough(&acc) {
            pooled.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 + acc.1 > 0.0 {
        match pooled.last_mut() {
            Some(last) => *last = (last.0 + acc.0, last.1 + acc.1),
            None => pooled.push(acc),
        }
    }
    if pooled.len() < 2 {
        return Ok(TestOutcome {
            statistic: 0.0,
            dof: 0,
            p_value: 1.0,
        });
    }
    let (ra, rb) = ((nb / na).sqrt(), (na / nb).sqrt());
    let statistic: f64 = pooled
        .iter()
        .map(|(x, y)| (ra * x - rb * y).powi(2) / (x + y))
        .sum();
    let dof = pooled.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Experiment(e.to_string()))?;
    Ok(TestOutcome {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    })
}

/// Asymptotic Kolmogorov survival function `P(K > x)`.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 0.27 {
        // the alternating series converges slowly here and the value is 1 to double precision
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * x * x).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov–Smirnov distance and asymptotic p-value.
pub fn ks_two_sample(a: &[u64], b: &[u64]) -> Result<TestOutcome> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Experiment("KS needs two nonempty samples".into()));
    }
    let (ha, hb) = (histogram(a), histogram(b));
    let mut support: Vec<u64> = ha.keys().chain(hb.keys()).copied().collect();
    support.sort_unstable();
    support.dedup();
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut ca, mut cb, mut d) = (0usize, 0usize, 0.0f64);
    for k in support {
        ca += ha.get(&k).unwrap_or(&0);
        cb += hb.get(&k).unwrap_or(&0);
        d = d.max((ca as f64 / na - cb as f64 / nb).abs());
    }
    let en = (na * nb / (na + nb)).sqrt();
    Ok(TestOutcome {
        statistic: d,
        dof: 0,
        p_value: kolmogorov_sf(d * en),
    })
}

/// Kolmogorov–Smirnov distance between integer samples and `N(center, scale²)`,
/// with the normal law evaluated at half-integers (continuity correction).
pub fn ks_normal_discrete(xs: &[u64], center: f64, scale: f64) -> Result<TestOutcome> {
    if xs.is_empty() {
        return Err(Error::Experiment("KS needs a nonempty sample".into()));
    }
    if !(scale > 0.0) {
        return Err(Error::Experiment(format!("normal scale must be > 0, got {scale}")));
    }
    let normal = Normal::new(center, scale).map_err(|e| Error::Experiment(e.to_string()))?;
    let h = histogram(xs);
    let n = xs.len() as f64;
    let mut cum = 0usize;
    let first = *h.keys().next().unwrap_or(&0);
    // below the smallest observation the empirical CDF is 0
    let mut d = normal.cdf(first as f64 - 0.5);
    for (&k, &c) in &h {
        let below = normal.cdf(k as f64 - 0.5);
        d = d.max((cum as f64 / n - below).abs());
        cum += c;
        d = d.max((cum as f64 / n - normal.cdf(k as f64 + 0.5)).abs());
    }
    Ok(TestOutcome {
        statistic: d,
        dof: 0,
        p_value: kolmogorov_sf(d * n.sqrt()),
    })
}

/// Critical value of the one-sample KS distance at level `alpha` for `n` samples.
pub fn ks_critical(alpha: f64, n: usize) -> f64 {
    let (mut lo, mut hi) = (0.27, 5.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_sf(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi) / (n as f64).sqrt()
}

/// Empirical probability mass function on the integer support.
pub fn pmf(xs: &[u64]) -> BTreeMap<u64, f64> {
    let n = xs.len() as f64;
    histogram(xs).into_iter().map(|(k, c)| (k, c as f64 / n)).collect()
}

/// Total-variation distance `½ Σ_k |p_k - q_k|` of two empirical laws.
pub fn tv_distance(a: &[u64], b: &[u64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Experiment("TV distance needs two nonempty samples".into()));
    }
    let (pa, pb) = (pmf(a), pmf(b));
    let mut keys: Vec<u64> = pa.keys().chain(pb.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    Ok(0.5
        * keys
            .iter()
            .map(|k| (pa.get(k).unwrap_or(&0.0) - pb.get(k).unwrap_or(&0.0)).abs())
            .sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
}

/// Ordinary least squares `y ≈ intercept + slope x`. With `y_se` given, the
/// fit is weighted by `1/y_se²` and the slope error propagated from it.
pub fn linear_fit(x: &[f64], y: &[f64], y_se: Option<&[f64]>) -> Result<LinearFit> {
    let n = x.len();
    if n < 2 || y.len() != n || y_se.is_some_and(|s| s.len() != n) {
        return Err(Error::Experiment("linear fit needs >= 2 matched points".into()));
    }
    let w: Vec<f64> = match y_se {
        Some(s) => s.iter().map(|e| 1.0 / (e * e).max(f64::MIN_POSITIVE)).collect(),
        None => vec![1.0; n],
    };
    let sw: f64 = w.iter().sum();
    let mx = w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() / sw;
    let my = w.iter().zip(y).map(|(w, y)| w * y).sum::<f64>() / sw;
    let sxx: f64 = w.iter().zip(x).map(|(w, x)| w * (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::Experiment("linear fit needs distinct x values".into()));
    }
    let sxy: f64 = (0..n).map(|i| w[i] * (x[i] - mx) * (y[i] - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_se = if y_se.is_some() {
        (1.0 / sxx).sqrt()
    } else if n > 2 {
        let rss: f64 = (0..n).map(|i| (y[i] - intercept - slope * x[i]).powi(2)).sum();
        (rss / (n - 2) as f64 / sxx).sqrt()
    } else {
        f64::NAN
    };
    Ok(LinearFit {
        slope,
        intercept,
        slope_se,
    })
}
