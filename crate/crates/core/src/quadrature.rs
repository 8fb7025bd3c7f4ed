//! One-dimensional quadrature: adaptive Gauss–Kronrod (7/15) and composite
//! Gauss–Legendre. The two rules use disjoint node families so they can
//! serve as independent checks of each other.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of a quadrature together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
    pub max_intervals: usize,
}

impl<T: Real> Tolerance<T> {
    pub fn new(abs: T, rel: T) -> Self {
        Tolerance {
            abs,
            rel,
            max_intervals: 2000,
        }
    }
}

fn kronrod15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let h = half * (b - a);
    let fc = f(center);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = h * T::lit(XGK[j]);
        let s = f(center - dx) + f(center + dx);
        k = k + s * T::lit(WGK[j]);
        if j % 2 == 1 {
            g = g + s * T::lit(WG[j / 2]);
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Real> Eq for Segment<T> {}
impl<T: Real> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// Globally adaptive Gauss–Kronrod quadrature of `f` over `[a, b]`.
///
/// Bisects the segment with the largest error until the summed error
/// estimate is below `max(tol.abs, tol.rel * |I|)`.
pub fn gauss_kronrod<T, F>(mut f: F, a: T, b: T, tol: Tolerance<T>) -> Result<Estimate<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: T::zero(),
        });
    }
    let (v, e) = kronrod15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v,
        error: e,
    });
    let mut total = v;
    let mut err = e;
    let half = T::lit(0.5);
    while heap.len() < tol.max_intervals {
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::Accuracy {
                what: "gauss-kronrod (non-finite integrand)",
                achieved: err.to_f64_lossy(),
                required: tol.abs.to_f64_lossy(),
            });
        }
        if err <= tol.abs.max(tol.rel * total.abs()) {
            break;
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = half * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Segment cannot be split further at this precision.
            heap.push(worst);
            break;
        }
        let (v1, e1) = kronrod15(&mut f, worst.a, mid);
        let (v2, e2) = kronrod15(&mut f, mid, worst.b);
        total = total - worst.value + v1 + v2;
        err = err - worst.error + e1 + e2;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // Re-sum to shed accumulated rounding from the running updates.
    let (value, error) = heap
        .iter()
        .fold((T::zero(), T::zero()), |(v, e), s| (v + s.value, e + s.error));
    let limit = tol.abs.max(tol.rel * value.abs());
    if !(error <= limit * T::lit(10.0)) {
        return Err(Error::Accuracy {
            what: "gauss-kronrod",
            achieved: error.to_f64_lossy(),
            required: limit.to_f64_lossy(),
        });
    }
    Ok(Estimate { value, error })
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Fixed composite Gauss–Legendre rule: `panels` equal panels of `order` points.
#[derive(Debug, Clone)]
pub struct CompositeLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    panels: usize,
}

impl CompositeLegendre {
    pub fn new(order: usize, panels: usize) -> Self {
        let (nodes, weights) = legendre_rule(order);
        CompositeLegendre {
            nodes,
            weights,
            panels: panels.max(1),
        }
    }

    pub fn integrate<T: Real, F: FnMut(T) -> T>(&self, mut f: F, a: T, b: T) -> T {
        let width = (b - a) / T::lit(self.panels as f64);
        let half = T::lit(0.5) * width;
        let mut sum = T::zero();
        for p in 0..self.panels {
            let lo = a + width * T::lit(p as f64);
            let center = lo + half;
            let mut panel = T::zero();
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                panel = panel + T::lit(*w) * f(center + half * T::lit(*x));
            }
            sum = sum + panel * half;
        }
        sum
    }
}
