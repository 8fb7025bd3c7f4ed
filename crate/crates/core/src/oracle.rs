//! β-Laguerre ensembles through their chi-bidiagonal model.
//!
//! `B` is lower bidiagonal with `B_ii ~ χ_{β(m-i+1)}` and
//! `B_{i+1,i} ~ χ_{β(n-i)}`, `m = n + a`; the eigenvalues of `B Bᵀ / β` have
//! the Laguerre density with weight `λ^{(β/2)(a+1)-1} e^{-βλ/2}`. Eigenvalues
//! are the squared singular values of `B/√β`, located by Sturm bisection on
//! the zero-diagonal Golub–Kahan form, which keeps high relative accuracy at
//! the hard edge.

use rand_distr::{ChiSquared, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::NoiseDriver;
use crate::scalar::Real;
use crate::sde::{CountProcess, CountSample, ModelParams, Provenance};

/// Matrix size over `λ²` below which hard-edge counts carry a finite-n warning.
pub const SIZE_GUIDELINE: f64 = 40.0;

const BISECTION_REL_TOL: f64 = 1e-13;
const MAX_BISECTIONS: usize = 400;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BidiagonalEnsemble<T> {
    pub n: usize,
    /// Column parameter `m = n + a`.
    pub m_param: T,
    pub beta: T,
    pub diagonal: Vec<T>,
    pub subdiagonal: Vec<T>,
}

impl<T: Real> BidiagonalEnsemble<T> {
    /// Wraps given entries; `diagonal.len() = n`, `subdiagonal.len() = n - 1`.
    pub fn from_entries(beta: T, m_param: T, diagonal: Vec<T>, subdiagonal: Vec<T>) -> Result<Self> {
        let n = diagonal.len();
        if n == 0 || subdiagonal.len() + 1 != n {
            return Err(Error::domain(format!(
                "need n >= 1 diagonal and n - 1 subdiagonal entries, got {} and {}",
                n,
                subdiagonal.len()
            )));
        }
        if !(beta > T::zero()) {
            return Err(Error::domain("beta must be > 0"));
        }
        if diagonal.iter().chain(&subdiagonal).any(|x| !(*x >= T::zero()) || !x.is_finite()) {
            return Err(Error::domain("bidiagonal entries must be finite and >= 0"));
        }
        Ok(BidiagonalEnsemble {
            n,
            m_param,
            beta,
            diagonal,
            subdiagonal,
        })
    }

    /// Off-diagonal of the `2n × 2n` Golub–Kahan matrix of `B/√β`:
    /// `d_1, s_1, d_2, s_2, ..., d_n`.
    fn golub_kahan(&self) -> Vec<T> {
        let scale = self.beta.sqrt().recip();
        let mut e = Vec::with_capacity(2 * self.n - 1);
        for i in 0..self.n {
            e.push(self.diagonal[i] * scale);
            if i + 1 < self.n {
                e.push(self.subdiagonal[i] * scale);
            }
        }
        e
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSpectrum<T> {
    /// Smallest eigenvalues of `B Bᵀ / β`, ascending.
    pub eigenvalues: Vec<T>,
    /// `√(n λ_k)`.
    pub scaled_points: Vec<T>,
}

/// Draws one ensemble of size `n` with `m = n + a`.
pub fn sample_beta_laguerre<T: Real>(
    n: usize,
    a: T,
    beta: T,
    noise: &mut NoiseDriver,
) -> Result<BidiagonalEnsemble<T>> {
    if n == 0 {
        return Err(Error::domain("matrix size must be >= 1"));
    }
    if !(beta > T::zero()) || !beta.is_finite() {
        return Err(Error::domain(format!("beta must be > 0, got {beta}")));
    }
    if !(a > -T::one()) || !a.is_finite() {
        return Err(Error::domain(format!("a must be > -1, got {a}")));
    }
    let b = beta.to_f64_lossy();
    let m = T::lit(n as f64) + a;
    let mf = m.to_f64_lossy();
    let mut chi = |k: f64| -> Result<T> {
        let d = ChiSquared::new(k).map_err(|e| Error::domain(format!("chi parameter {k}: {e}")))?;
        Ok(T::lit(d.sample(noise.rng()).sqrt()))
    };
    let mut diagonal = Vec::with_capacity(n);
    let mut subdiagonal = Vec::with_capacity(n - 1);
    for i in 1..=n {
        diagonal.push(chi(b * (mf - i as f64 + 1.0))?);
        if i < n {
            subdiagonal.push(chi(b * (n - i) as f64)?);
        }
    }
    Ok(BidiagonalEnsemble {
        n,
        m_param: m,
        beta,
        diagonal,
        subdiagonal,
    })
}

/// Number of eigenvalues `< x` of the symmetric tridiagonal matrix with
/// diagonal `diag` and off-diagonal `off`.
pub fn sturm_count<T: Real>(diag: &[T], off: &[T], x: T) -> usize {
    let tiny = T::min_positive_value().sqrt();
    let mut count = 0;
    let mut q = T::one();
    for i in 0..diag.len() {
        let e2 = if i == 0 { T::zero() } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { T::zero() } else { e2 / q };
        if q.abs() < tiny {
            q = -tiny;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval of a symmetric tridiagonal matrix.
fn gershgorin<T: Real>(diag: &[T], off: &[T]) -> (T, T) {
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..diag.len() {
        let r = if i > 0 { off[i - 1].abs() } else { T::zero() }
            + if i < off.len() { off[i].abs() } else { T::zero() };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// Isolates the eigenvalue with zero-based index `index` by bisection on the
/// Sturm count.
fn bisect<T: Real>(
    index: usize,
    mut lo: T,
    mut hi: T,
    count_below: impl Fn(T) -> usize,
) -> Result<T> {
    let tol = T::lit(BISECTION_REL_TOL);
    for _ in 0..MAX_BISECTIONS {
        let mid = lo + (hi - lo) * T::lit(0.5);
        if mid <= lo || mid >= hi || hi - lo <= tol * lo.abs().max(hi.abs()) {
            return Ok(mid);
        }
        if count_below(mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::Eigensolver {
        index,
        lo: lo.to_f64_lossy(),
        hi: hi.to_f64_lossy(),
    })
}

/// The `k` smallest eigenvalues of a symmetric tridiagonal matrix, ascending.
pub fn tridiagonal_smallest<T: Real>(diag: &[T], off: &[T], k: usize) -> Result<Vec<T>> {
    let n = diag.len();
    if off.len() + 1 != n.max(1) || k > n {
        return Err(Error::domain(format!(
            "tridiagonal of size {n} with {} off-diagonals, k = {k}",
            off.len()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let (lo, hi) = gershgorin(diag, off);
    let pad = (hi - lo).abs().max(T::one()) * T::lit(1e-12);
    (0..k)
        .map(|i| bisect(i, lo - pad, hi + pad, |x| sturm_count(diag, off, x)))
        .collect()
}

/// Number of singular values of `B/√β` below `s > 0`.
fn singular_count_below<T: Real>(gk: &[T], zeros: &[T], s: T) -> usize {
    sturm_count(zeros, gk, s).saturating_sub(gk.len().div_ceil(2))
}

/// The `k` smallest eigenvalues of `B Bᵀ / β` and their hard-edge points.
pub fn smallest_eigenvalues<T: Real>(ens: &BidiagonalEnsemble<T>, k: usize) -> Result<OracleSpectrum<T>> {
    if k == 0 || k > ens.n {
        return Err(Error::domain(format!("need 1 <= k <= n = {}, got {k}", ens.n)));
    }
    let gk = ens.golub_kahan();
    let zeros = vec![T::zero(); gk.len() + 1];
    let bound = gk
        .windows(2)
        .map(|w| w[0] + w[1])
        .fold(gk[0], T::max)
        .max(gk[gk.len() - 1])
        * T::lit(1.0 + 1e-12)
        + T::min_positive_value();
    let mut eigenvalues = Vec::with_capacity(k);
    for i in 0..k {
        let s = bisect(i, T::zero(), bound, |x| singular_count_below(&gk, &zeros, x))?;
        eigenvalues.push(s * s);
    }
    let nf = T::lit(ens.n as f64);
    let scaled_points = eigenvalues.iter().map(|&l| (nf * l).sqrt()).collect();
    Ok(OracleSpectrum {
        eigenvalues,
        scaled_points,
    })
}

/// Number of hard-edge points `√(n λ_k) <= lambda` of one ensemble.
pub fn hard_edge_count<T: Real>(ens: &BidiagonalEnsemble<T>, lambda: T) -> usize {
    if !(lambda > T::zero()) {
        return 0;
    }
    let gk = ens.golub_kahan();
    let zeros = vec![T::zero(); gk.len() + 1];
    // √(n σ²) <= λ  ⟺  σ <= λ / √n; ties have probability zero.
    let s = lambda / T::lit(ens.n as f64).sqrt();
    singular_count_below(&gk, &zeros, s)
}

/// Samples an `n × n` ensemble and counts its hard-edge points in `[0, λ]`.
/// `regime_ok` is false when `n < 40 λ²`.
pub fn oracle_count<T: Real>(
    n: usize,
    params: &ModelParams<T>,
    noise: &mut NoiseDriver,
) -> Result<CountSample<T>> {
    params.validate()?;
    let ens = sample_beta_laguerre(n, params.a, params.beta, noise)?;
    let lambda = params.lambda;
    Ok(CountSample {
        value: hard_edge_count(&ens, lambda) as u64,
        process: CountProcess::Bess,
        params: *params,
        offset: None,
        provenance: Provenance::MatrixOracle,
        converged: true,
        regime_ok: T::lit(n as f64) >= T::lit(SIZE_GUIDELINE) * lambda * lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cyclic Jacobi eigenvalues of a dense symmetric matrix.
    #[allow(clippy::needless_range_loop)]
    fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
        let n = a.len();
        for _ in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i][j] * a[i][j])
                .sum();
            if off < 1e-30 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k][p], a[k][q]);
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    fn bbt_over_beta(e: &BidiagonalEnsemble<f64>) -> Vec<Vec<f64>> {
        let n = e.n;
        let mut b = vec![vec![0.0; n]; n];
        for i in 0..n {
            b[i][i] = e.diagonal[i];
            if i + 1 < n {
                b[i + 1][i] = e.subdiagonal[i];
            }
        }
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| b[i][k] * b[j][k]).sum::<f64>() / e.beta)
                    .collect()
            })
            .collect()
    }

    #[test]
    fn diagonal_ensembles() {
        let ones = BidiagonalEnsemble::from_entries(1.0f64, 4.0, vec![1.0; 4], vec![0.0; 3]).unwrap();
        let s = smallest_eigenvalues(&ones, 4).unwrap();
        assert!(s.eigenvalues.iter().all(|l| (l - 1.0).abs() < 1e-12));
        let e = BidiagonalEnsemble::from_entries(1.0f64, 3.0, vec![1.0, 2.0, 3.0], vec![0.0; 2]).unwrap();
        let s = smallest_eigenvalues(&e, 3).unwrap();
        for (l, want) in s.eigenvalues.iter().zip([1.0, 4.0, 9.0]) {
            assert!((l - want).abs() < 1e-11 * want, "{l}");
        }
        assert!((s.scaled_points[2] - 27f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn generic_tridiagonal_bisection() {
        // second difference matrix: 2 - 2cos(kπ/(n+1))
        let n = 12;
        let ev = tridiagonal_smallest(&vec![2.0; n], &vec![-1.0; n - 1], n).unwrap();
        for (k, l) in ev.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((l - want).abs() < 1e-12, "{k}: {l} vs {want}");
        }
    }

    #[test]
    fn matches_dense_solver() {
        for (seed, beta, a) in [(1, 2.0, 0.0), (2, 1.0, 0.5), (3, 4.0, 2.3)] {
            let e = sample_beta_laguerre(50, a, beta, &mut NoiseDriver::new(seed, 0)).unwrap();
            let dense = jacobi_eigenvalues(bbt_over_beta(&e));
            let s = smallest_eigenvalues(&e, 50).unwrap();
            for (x, y) in s.eigenvalues.iter().zip(&dense) {
                assert!((x - y).abs() <= 1e-8 * y.abs().max(1e-2), "{x} vs {y}");
            }
            assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            assert!(s.eigenvalues[0] >= 0.0);
        }
    }

    #[test]
    fn count_agrees_with_spectrum() {
        let e = sample_beta_laguerre(200, 0.5, 2.0, &mut NoiseDriver::new(4, 0)).unwrap();
        let s = smallest_eigenvalues(&e, 10).unwrap();
        for lambda in [0.5, 2.0, 5.0, 8.0] {
            let c = s.scaled_points.iter().filter(|&&p| p <= lambda).count();
            assert_eq!(hard_edge_count(&e, lambda), c);
        }
        assert_eq!(hard_edge_count(&e, 0.0), 0);
    }

    #[test]
    fn size_one_mean() {
        let mut nd = NoiseDriver::new(5, 0);
        let (a, beta) = (0.7, 1.5);
        let n = 100_000;
        let xs: Vec<f64> = (0..n)
            .map(|_| smallest_eigenvalues(&sample_beta_laguerre(1, a, beta, &mut nd).unwrap(), 1).unwrap().eigenvalues[0])
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        // χ²_{β(a+1)}/β has variance 2(a+1)/β
        let se = (2.0 * (a + 1.0) / beta / n as f64).sqrt();
        assert!((mean - (a + 1.0)).abs() < 3.0 * se, "{mean}");
    }

    #[test]
    fn chi_entry_moments() {
        let mut nd = NoiseDriver::new(6, 0);
        let (n, beta, a) = (3, 2.0, 0.4);
        let draws = 100_000;
        let mut sums = vec![[0.0f64; 2]; 2 * n - 1];
        for _ in 0..draws {
            let e = sample_beta_laguerre(n, a, beta, &mut nd).unwrap();
            for (s, x) in sums.iter_mut().zip(e.diagonal.iter().chain(&e.subdiagonal)) {
                s[0] += x * x;
                s[1] += x * x * x * x;
            }
        }
        let m = n as f64 + a;
        let params: Vec<f64> = (1..=n)
            .map(|i| beta * (m - i as f64 + 1.0))
            .chain((1..n).map(|i| beta * (n - i) as f64))
            .collect();
        for (s, k) in sums.iter().zip(params) {
            // E χ² = k, Var χ² = 2k
            let mean = s[0] / draws as f64;
            let var = s[1] / draws as f64 - mean * mean;
            assert!((mean - k).abs() < 4.0 * (2.0 * k / draws as f64).sqrt(), "{mean} vs {k}");
            // Var of the sample variance of χ²_k is about (E(X-k)^4 - (2k)²)/N = (12k² + 48k - 4k²)/N
            let se_var = ((8.0 * k * k + 48.0 * k) / draws as f64).sqrt();
            assert!((var - 2.0 * k).abs() < 4.0 * se_var, "{var} vs {}", 2.0 * k);
        }
    }

    /// Dense Wishart `G Gᴴ` with `G` an `n × n` standard real (β = 1) or
    /// complex (β = 2) Gaussian matrix: returns `(tr W, tr W²)` on the
    /// `e^{-βλ/2}` scale.
    #[allow(clippy::needless_range_loop)]
    fn dense_wishart_traces(n: usize, beta: f64, nd: &mut NoiseDriver) -> (f64, f64) {
        let s = if beta == 2.0 { 0.5f64.sqrt() } else { 1.0 };
        let g: Vec<Vec<(f64, f64)>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let re = nd.standard_normal() * s;
                        let im = if beta == 2.0 { nd.standard_normal() * s } else { 0.0 };
                        (re, im)
                    })
                    .collect()
            })
            .collect();
        let mut tr = 0.0;
        let mut tr2 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let (mut re, mut im) = (0.0, 0.0);
                for k in 0..n {
                    let (a, b) = g[i][k];
                    let (c, d) = g[j][k];
                    re += a * c + b * d;
                    im += b * c - a * d;
                }
                if i == j {
                    tr += re;
                }
                tr2 += re * re + im * im;
            }
        }
        (tr, tr2)
    }

    #[test]
    fn trace_moments_match_dense_wishart() {
        let n = 6;
        let draws = 10_000;
        for beta in [1.0, 2.0] {
            let mut nd = NoiseDriver::new(7, beta as u64);
            let mut bi = (Vec::new(), Vec::new());
            let mut de = (Vec::new(), Vec::new());
            for _ in 0..draws {
                let e = sample_beta_laguerre(n, 0.0, beta, &mut nd).unwrap();
                let ev = smallest_eigenvalues(&e, n).unwrap().eigenvalues;
                bi.0.push(ev.iter().sum::<f64>());
                bi.1.push(ev.iter().map(|l| l * l).sum::<f64>());
                let (t1, t2) = dense_wishart_traces(n, beta, &mut nd);
                de.0.push(t1);
                de.1.push(t2);
            }
            let stats = |v: &[f64]| {
                let m = v.iter().sum::<f64>() / v.len() as f64;
                let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
                (m, var / v.len() as f64)
            };
            for (x, y) in [(&bi.0, &de.0), (&bi.1, &de.1)] {
                let ((mx, vx), (my, vy)) = (stats(x), stats(y));
                assert!((mx - my).abs() < 3.0 * (vx + vy).sqrt(), "beta {beta}: {mx} vs {my}");
            }
        }
    }

    #[test]
    fn smallest_eigenvalue_law_at_beta_two() {
        // a = 0, β = 2: n λ_min ~ Exp(1) exactly at every n
        let mut nd = NoiseDriver::new(8, 0);
        let draws = 20_000;
        let hits = (0..draws)
            .filter(|_| {
                let e = sample_beta_laguerre(30, 0.0, 2.0, &mut nd).unwrap();
                hard_edge_count(&e, 1.0) == 0
            })
            .count();
        let p = hits as f64 / draws as f64;
        let q = (-1.0f64).exp();
        assert!((p - q).abs() < 4.0 * (q * (1.0 - q) / draws as f64).sqrt(), "{p}");
    }

    #[test]
    fn oracle_count_flags_small_matrices() {
        let p = ModelParams::new(2.0, 0.0, 3.0).unwrap();
        let mut nd = NoiseDriver::new(9, 0);
        assert!(!oracle_count(100, &p, &mut nd).unwrap().regime_ok);
        assert!(oracle_count(400, &p, &mut nd).unwrap().regime_ok);
        let zero = ModelParams::new(2.0, 0.0, 0.0).unwrap();
        assert_eq!(oracle_count(50, &zero, &mut nd).unwrap().value, 0);
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut nd = NoiseDriver::new(0, 0);
        assert!(sample_beta_laguerre::<f64>(0, 0.0, 2.0, &mut nd).is_err());
        assert!(sample_beta_laguerre(5, -1.0, 2.0, &mut nd).is_err());
        assert!(sample_beta_laguerre(5, 0.0, 0.0, &mut nd).is_err());
        let e = BidiagonalEnsemble::from_entries(1.0f64, 3.0, vec![1.0, 2.0, 3.0], vec![0.0; 2]).unwrap();
        assert!(smallest_eigenvalues(&e, 4).is_err());
        assert!(smallest_eigenvalues(&e, 0).is_err());
    }
}
