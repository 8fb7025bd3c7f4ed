//! Euler–Maruyama integration of lattice-monotone scalar diffusions.
//!
//! All diffusions here have coefficients that are periodic in the state
//! with some period `P`, vanishing noise on the lattice `P ℤ`, and a
//! nonnegative push across it. The state is stored as an exact integer
//! number of periods plus an offset in `[0, P)`; this keeps lattice points
//! exact fixed points and makes the "no downward crossing" guard a clamp of
//! the offset at zero.

use crate::error::{Error, Result};
use crate::noise::NoiseDriver;
use crate::scalar::Real;

use super::types::{MAX_HALVINGS, STEP_CONTROL};

/// State `period * turns + offset` with `offset` in `[0, period)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winding<T> {
    pub turns: i64,
    pub offset: T,
}

impl<T: Real> Winding<T> {
    pub fn lattice(turns: i64) -> Self {
        Winding {
            turns,
            offset: T::zero(),
        }
    }

    pub fn value(&self, period: T) -> T {
        period * T::lit(self.turns as f64) + self.offset
    }

    /// `(-1)^turns` as a scalar.
    pub fn parity_sign(&self) -> T {
        if self.turns.rem_euclid(2) == 0 {
            T::one()
        } else {
            -T::one()
        }
    }
}

/// Coefficients of one step: `dx = (drift + weight F(t)) dt + diffusion dB`.
#[derive(Debug, Clone, Copy)]
pub struct Coefficients<T> {
    pub drift: T,
    pub forcing_weight: T,
    pub diffusion: T,
}

pub trait LatticeSde<T: Real> {
    fn period(&self) -> T;
    fn coefficients(&self, state: &Winding<T>) -> Coefficients<T>;
    /// Time-dependent forcing `F(t)`.
    fn forcing_rate(&self, t: T) -> T;
    /// Exact `∫_t^{t+dt} F`.
    fn forcing_integral(&self, t: T, dt: T) -> T;
    /// Integer observable whose stabilisation defines convergence.
    fn count(&self, state: &Winding<T>) -> i64;
}

#[derive(Debug, Clone)]
pub struct Outcome<T, const N: usize> {
    pub states: [Winding<T>; N],
    pub steps: u64,
    pub last_change: [T; N],
    pub end_time: T,
}

/// Integrates `N` diffusions on `[0, t_end]` driven by one shared Brownian path.
///
/// The step starts at `base_step` and is halved until every system satisfies
/// `|drift| dt <= 0.1` and `|diffusion| sqrt(dt) <= 0.1`. `inspect` sees every
/// accepted step as `(t0, before, t1, after)`.
pub fn integrate<T, S, F, const N: usize>(
    systems: [&S; N],
    init: [Winding<T>; N],
    t_end: T,
    base_step: T,
    noise: &mut NoiseDriver,
    mut inspect: F,
) -> Result<Outcome<T, N>>
where
    T: Real,
    S: LatticeSde<T> + ?Sized,
    F: FnMut(T, &[Winding<T>; N], T, &[Winding<T>; N]),
{
    let control = T::lit(STEP_CONTROL);
    let control_sq = control * control;
    let mut states = init;
    let mut counts = [0i64; N];
    for (c, (s, x)) in counts.iter_mut().zip(systems.iter().zip(states.iter())) {
        *c = s.count(x);
    }
    let mut last_change = [T::zero(); N];
    let mut t = T::zero();
    let mut steps = 0u64;
    let mut coefs = [Coefficients {
        drift: T::zero(),
        forcing_weight: T::zero(),
        diffusion: T::zero(),
    }; N];

    while t < t_end {
        let mut dt = base_step;
        for i in 0..N {
            coefs[i] = systems[i].coefficients(&states[i]);
        }
        for _ in 0..MAX_HALVINGS {
            let ok = systems.iter().zip(coefs.iter()).all(|(s, c)| {
                let rate = (c.drift + c.forcing_weight * s.forcing_rate(t)).abs();
                rate * dt <= control && c.diffusion * c.diffusion * dt <= control_sq
            });
            if ok {
                break;
            }
            dt = dt * T::lit(0.5);
        }
        let last = t + dt >= t_end;
        if last {
            dt = t_end - t;
        }
        let db = noise.increment(dt);
        let before = states;
        for i in 0..N {
            let sys = systems[i];
            let c = coefs[i];
            let delta = c.drift * dt + c.forcing_weight * sys.forcing_integral(t, dt) + c.diffusion * db;
            let next = advance(states[i], delta, sys.period()).ok_or_else(|| Error::Integration {
                t: t.to_f64_lossy(),
                reason: format!("non-finite increment {delta} from state {:?}", states[i]),
            })?;
            if next.turns < states[i].turns {
                return Err(Error::Integration {
                    t: t.to_f64_lossy(),
                    reason: format!("lattice index decreased from {} to {}", states[i].turns, next.turns),
                });
            }
            states[i] = next;
        }
        let t_next = if last { t_end } else { t + dt };
        for i in 0..N {
            let c = systems[i].count(&states[i]);
            if c != counts[i] {
                counts[i] = c;
                last_change[i] = t_next;
            }
        }
        inspect(t, &before, t_next, &states);
        t = t_next;
        steps += 1;
    }
    Ok(Outcome {
        states,
        steps,
        last_change,
        end_time: t_end,
    })
}

/// Applies `delta` to a winding state. Downward lattice crossings are
/// clamped to the lattice point.
fn advance<T: Real>(state: Winding<T>, delta: T, period: T) -> Option<Winding<T>> {
    if !delta.is_finite() {
        return None;
    }
    let r = state.offset + delta;
    if r < T::zero() {
        return Some(Winding::lattice(state.turns));
    }
    if r < period {
        return Some(Winding {
            turns: state.turns,
            offset: r,
        });
    }
    let q = (r / period).floor();
    let mut offset = r - q * period;
    let mut turns = state.turns + q.to_i64()?;
    if offset >= period {
        offset = offset - period;
        turns += 1;
    }
    if offset < T::zero() {
        offset = T::zero();
    }
    Some(Winding { turns, offset })
}
