use super::engine::{integrate, LatticeSde, Outcome, Winding};
use super::models::{BulkSde, PhaseSde, RiccatiAngleSde};
use super::types::{
    CountProcess, CountSample, DiffusionKind, DiffusionRun, IntegratorConfig, ModelParams,
    Provenance,
};
use crate::error::{Error, Result};
use crate::noise::NoiseDriver;
use crate::scalar::Real;

/// Keeps at most `points` evenly spaced (in time) states of system `index`.
struct PathRecorder<T> {
    points: Vec<(T, T)>,
    spacing: T,
    next: T,
    period: T,
    index: usize,
}

impl<T: Real> PathRecorder<T> {
    fn new(points: usize, t_end: T, period: T, index: usize, initial: T) -> Option<Self> {
        if points == 0 {
            return None;
        }
        let spacing = t_end / T::lit(points.saturating_sub(1).max(1) as f64);
        let mut v = Vec::with_capacity(points);
        v.push((T::zero(), initial));
        Some(PathRecorder {
            points: v,
            spacing,
            next: spacing,
            period,
            index,
        })
    }

    fn observe<const N: usize>(&mut self, t: T, states: &[Winding<T>; N], cap: usize) {
        if t >= self.next && self.points.len() < cap {
            self.points.push((t, states[self.index].value(self.period)));
            while self.next <= t {
                self.next = self.next + self.spacing;
            }
        }
    }
}

fn settled<T: Real>(end: T, last_change: T, window: T) -> bool {
    end - last_change >= window
}

#[allow(clippy::too_many_arguments)]
fn run_record<T: Real, const N: usize>(
    kind: DiffusionKind,
    params: ModelParams<T>,
    period: T,
    initial: Winding<T>,
    out: &Outcome<T, N>,
    index: usize,
    converged: bool,
    path: Option<Vec<(T, T)>>,
    noise: &NoiseDriver,
) -> DiffusionRun<T> {
    let state = out.states[index];
    DiffusionRun {
        kind,
        params,
        initial_value: initial.value(period),
        terminal_value: state.value(period),
        turns: state.turns,
        end_time: out.end_time,
        steps: out.steps,
        last_count_change: out.last_change[index],
        converged,
        path_summary: path,
        noise: noise.id(),
    }
}

/// Integrates the phase diffusion from `φ(0) = 2π` until the forcing has
/// decayed below `cfg.tolerance`.
pub fn simulate_phi<T: Real>(
    params: &ModelParams<T>,
    cfg: &IntegratorConfig<T>,
    noise: &mut NoiseDriver,
) -> Result<DiffusionRun<T>> {
    params.validate()?;
    cfg.validate()?;
    let sde = PhaseSde::new(params);
    let period = sde.period();
    let init = Winding::lattice(1);
    let t_end = cfg.end_time(params.beta, params.lambda);
    let mut rec = PathRecorder::new(cfg.path_points, t_end, period, 0, init.value(period));
    let cap = cfg.path_points;
    let out = integrate([&sde], [init], t_end, cfg.base_step, noise, |_, _, t1, after| {
        if let Some(r) = rec.as_mut() {
            r.observe(t1, after, cap);
        }
    })?;
    // Once the forcing is spent neither 4πk nor 2π(2k+1) can be crossed
    // downward or upward respectively, so a settled count is final.
    let converged = settled(t_end, out.last_change[0], cfg.settle_window);
    Ok(run_record(
        DiffusionKind::Phi,
        *params,
        period,
        init,
        &out,
        0,
        converged,
        rec.map(|r| r.points),
        noise,
    ))
}

/// `⌊φ / 4π⌋` of a raw phase value.
pub fn count_from_terminal<T: Real>(phi: T) -> u64 {
    let c = (phi / (T::lit(4.0) * T::PI())).floor();
    c.max(T::zero()).to_u64().unwrap_or(0)
}

/// Counting-function sample `M(λ) = ⌊φ(∞)/4π⌋` read off a phase run.
pub fn count_from_phi<T: Real>(run: &DiffusionRun<T>) -> Result<CountSample<T>> {
    if run.kind != DiffusionKind::Phi {
        return Err(Error::domain(format!(
            "count_from_phi needs a phi run, got {:?}",
            run.kind
        )));
    }
    Ok(CountSample {
        value: run.turns.div_euclid(2).max(0) as u64,
        process: CountProcess::Bess,
        params: run.params,
        offset: None,
        provenance: Provenance::Sde,
        converged: run.converged,
        regime_ok: true,
    })
}

/// Integrates the bulk diffusion from `α(0) = 0`.
pub fn simulate_alpha<T: Real>(
    lambda: T,
    beta: T,
    cfg: &IntegratorConfig<T>,
    noise: &mut NoiseDriver,
) -> Result<DiffusionRun<T>> {
    let params = ModelParams::new(beta, T::zero(), lambda)?;
    cfg.validate()?;
    let sde = BulkSde::new(beta, lambda);
    let period = sde.period();
    let init = Winding::lattice(0);
    let t_end = cfg.end_time(beta, lambda);
    let mut rec = PathRecorder::new(cfg.path_points, t_end, period, 0, T::zero());
    let cap = cfg.path_points;
    let out = integrate([&sde], [init], t_end, cfg.base_step, noise, |_, _, t1, after| {
        if let Some(r) = rec.as_mut() {
            r.observe(t1, after, cap);
        }
    })?;
    let converged = settled(t_end, out.last_change[0], cfg.settle_window);
    Ok(run_record(
        DiffusionKind::Alpha,
        params,
        period,
        init,
        &out,
        0,
        converged,
        rec.map(|r| r.points),
        noise,
    ))
}

/// Bulk counting-function sample `N(λ) = α(∞)/2π`.
pub fn count_from_alpha<T: Real>(run: &DiffusionRun<T>) -> Result<CountSample<T>> {
    if run.kind != DiffusionKind::Alpha {
        return Err(Error::domain(format!(
            "count_from_alpha needs an alpha run, got {:?}",
            run.kind
        )));
    }
    let nearest = (run.terminal_value / T::TAU()).round();
    Ok(CountSample {
        value: nearest.max(T::zero()).to_u64().unwrap_or(0),
        process: CountProcess::Sine,
        params: run.params,
        offset: None,
        provenance: Provenance::Sde,
        converged: run.converged,
        regime_ok: true,
    })
}

/// Integrates `φ_{a,λ}` and `φ_{a,λ+x}` on one Brownian path and counts the
/// points of the hard-edge process in `(λ, λ + x]` as `⌊(ψ(∞) + 2π)/4π⌋`
/// with `ψ = φ_{a,λ+x} - φ_{a,λ}`.
pub fn simulate_coupled_increment<T: Real>(
    params: &ModelParams<T>,
    x: T,
    cfg: &IntegratorConfig<T>,
    noise: &mut NoiseDriver,
) -> Result<(DiffusionRun<T>, DiffusionRun<T>, CountSample<T>)> {
    params.validate()?;
    cfg.validate()?;
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!("increment offset must be >= 0, got {x}")));
    }
    let upper = params.with_lambda(params.lambda + x);
    let lo = PhaseSde::new(params);
    let hi = PhaseSde::new(&upper);
    let period = lo.period();
    let init = Winding::lattice(1);
    let t_end = cfg.end_time(params.beta, upper.lambda);
    let mut rec_lo = PathRecorder::new(cfg.path_points, t_end, period, 0, init.value(period));
    let mut rec_hi = PathRecorder::new(cfg.path_points, t_end, period, 1, init.value(period));
    let cap = cfg.path_points;
    let out = integrate(
        [&lo, &hi],
        [init, init],
        t_end,
        cfg.base_step,
        noise,
        |_, _, t1, after| {
            if let (Some(a), Some(b)) = (rec_lo.as_mut(), rec_hi.as_mut()) {
                a.observe(t1, after, cap);
                b.observe(t1, after, cap);
            }
        },
    )?;
    let conv = |i: usize| settled(t_end, out.last_change[i], cfg.settle_window);
    let run_lo = run_record(
        DiffusionKind::PsiCoupled,
        *params,
        period,
        init,
        &out,
        0,
        conv(0),
        rec_lo.map(|r| r.points),
        noise,
    );
    let run_hi = run_record(
        DiffusionKind::PsiCoupled,
        upper,
        period,
        init,
        &out,
        1,
        conv(1),
        rec_hi.map(|r| r.points),
        noise,
    );
    // (ψ + 2π)/4π = (Δturns + 1)/2 + Δoffset/4π, with Δturns exact
    let [s_lo, s_hi] = out.states;
    let half_turns = T::lit((s_hi.turns - s_lo.turns + 1) as f64)
        + (s_hi.offset - s_lo.offset) / period;
    let raw = (half_turns / T::lit(2.0)).floor();
    let nonnegative = raw >= T::zero();
    let sample = CountSample {
        value: raw.max(T::zero()).to_u64().unwrap_or(0),
        process: CountProcess::BessIncrement,
        params: *params,
        offset: Some(x),
        provenance: Provenance::Sde,
        converged: run_lo.converged && run_hi.converged && nonnegative,
        regime_ok: true,
    };
    Ok((run_lo, run_hi, sample))
}

/// Integrates the Riccati diffusion (in its angle coordinate) with
/// `params.lambda` read as the eigenvalue scale `Λ`.
///
/// The clock is the Riccati time `τ = βt/4`; the end time and settle window
/// of `cfg` are converted from the phase clock at `λ = √Λ`.
pub fn simulate_riccati_run<T: Real>(
    params: &ModelParams<T>,
    cfg: &IntegratorConfig<T>,
    noise: &mut NoiseDriver,
) -> Result<DiffusionRun<T>> {
    params.validate()?;
    cfg.validate()?;
    let sde = RiccatiAngleSde::new(params);
    let period = sde.period();
    let clock = params.beta / T::lit(4.0);
    let t_end = clock * cfg.end_time(params.beta, params.lambda.sqrt());
    let init = Winding::lattice(0);
    let mut rec = PathRecorder::new(cfg.path_points, t_end, period, 0, T::zero());
    let cap = cfg.path_points;
    let out = integrate([&sde], [init], t_end, cfg.base_step, noise, |_, _, t1, after| {
        if let Some(r) = rec.as_mut() {
            r.observe(t1, after, cap);
        }
    })?;
    let converged = settled(t_end, out.last_change[0], clock * cfg.settle_window);
    Ok(run_record(
        DiffusionKind::Riccati,
        *params,
        period,
        init,
        &out,
        0,
        converged,
        rec.map(|r| r.points),
        noise,
    ))
}

/// Number of zero hits of the Riccati diffusion, which is `M(√Λ)`.
pub fn simulate_riccati<T: Real>(
    params: &ModelParams<T>,
    cfg: &IntegratorConfig<T>,
    noise: &mut NoiseDriver,
) -> Result<CountSample<T>> {
    let run = simulate_riccati_run(params, cfg, noise)?;
    Ok(CountSample {
        value: (run.turns + 1).div_euclid(2).max(0) as u64,
        process: CountProcess::Bess,
        params: run.params,
        offset: None,
        provenance: Provenance::Riccati,
        converged: run.converged,
        regime_ok: true,
    })
}

/// `sup_{0<=s<=T} |∫_0^s e^{icφ(t)} dt|` along one simulated phase path,
/// restricted to the regime `λ > 1`, `T <= (8/β) ln λ`.
pub fn oscillatory_statistic<T: Real>(
    params: &ModelParams<T>,
    c: T,
    horizon: T,
    cfg: &IntegratorConfig<T>,
    noise: &mut NoiseDriver,
) -> Result<T> {
    params.validate()?;
    if !(params.lambda > T::one()) {
        return Err(Error::domain(format!(
            "oscillatory statistic needs lambda > 1, got {}",
            params.lambda
        )));
    }
    let limit = T::lit(8.0) / params.beta * params.lambda.ln();
    if horizon > limit {
        return Err(Error::domain(format!(
            "oscillatory statistic needs T <= (8/beta) ln lambda = {limit}, got {horizon}"
        )));
    }
    oscillatory_sup(params, c, horizon, cfg, noise)
}

/// [`oscillatory_statistic`] without the regime restriction.
pub fn oscillatory_sup<T: Real>(
    params: &ModelParams<T>,
    c: T,
    horizon: T,
    cfg: &IntegratorConfig<T>,
    noise: &mut NoiseDriver,
) -> Result<T> {
    params.validate()?;
    cfg.validate()?;
    if c == T::zero() || !c.is_finite() {
        return Err(Error::domain("frequency c must be nonzero"));
    }
    if !(horizon > T::zero()) || !horizon.is_finite() {
        return Err(Error::domain("horizon T must be > 0"));
    }
    let sde = PhaseSde::new(params);
    let period = sde.period();
    let (mut re, mut im) = (T::zero(), T::zero());
    let mut sup = T::zero();
    let half = T::lit(0.5);
    integrate(
        [&sde],
        [Winding::lattice(1)],
        horizon,
        cfg.base_step,
        noise,
        |t0, before, t1, after| {
            let dt = t1 - t0;
            let p0 = c * before[0].value(period);
            let p1 = c * after[0].value(period);
            re = re + half * dt * (p0.cos() + p1.cos());
            im = im + half * dt * (p0.sin() + p1.sin());
            sup = sup.max(re.hypot(im));
        },
    )?;
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(beta: f64, a: f64, lambda: f64) -> ModelParams<f64> {
        ModelParams::new(beta, a, lambda).unwrap()
    }

    #[test]
    fn zero_lambda_phase_stays_at_two_pi() {
        let cfg = IntegratorConfig::default();
        let run = simulate_phi(&params(2.0, 0.5, 0.0), &cfg, &mut NoiseDriver::new(1, 0)).unwrap();
        assert_eq!(run.terminal_value, 2.0 * PI);
        assert_eq!(count_from_phi(&run).unwrap().value, 0);
        assert!(run.converged);
    }

    #[test]
    fn terminal_count_is_floor() {
        assert_eq!(count_from_terminal(2.0 * PI), 0);
        assert_eq!(count_from_terminal(4.0 * PI + 1e-9), 1);
        assert_eq!(count_from_terminal(10.0 * PI), 2);
    }

    #[test]
    fn runs_reproduce_from_stream() {
        let cfg = IntegratorConfig::default();
        let p = params(1.0, 0.3, 6.0);
        let a = simulate_phi(&p, &cfg, &mut NoiseDriver::new(9, 4)).unwrap();
        let b = simulate_phi(&p, &cfg, &mut NoiseDriver::new(9, 4)).unwrap();
        assert_eq!(a, b);
        let c = simulate_phi(&p, &cfg, &mut NoiseDriver::new(9, 5)).unwrap();
        assert_ne!(a.terminal_value, c.terminal_value);
    }

    #[test]
    fn path_summary_respects_budget() {
        let cfg = IntegratorConfig {
            path_points: 50,
            ..Default::default()
        };
        let run = simulate_phi(&params(2.0, 0.0, 3.0), &cfg, &mut NoiseDriver::new(2, 0)).unwrap();
        let path = run.path_summary.unwrap();
        assert!(path.len() <= 50 && path.len() > 40, "{}", path.len());
        assert_eq!(path[0], (0.0, 2.0 * PI));
        assert!(path.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn empty_interval_holds_no_points() {
        let cfg = IntegratorConfig::default();
        for s in 0..5 {
            let (lo, hi, inc) =
                simulate_coupled_increment(&params(2.0, 1.0, 4.0), 0.0, &cfg, &mut NoiseDriver::new(3, s))
                    .unwrap();
            assert_eq!(inc.value, 0);
            assert_eq!(lo.terminal_value, hi.terminal_value);
        }
    }

    #[test]
    fn negative_offset_is_rejected() {
        let cfg = IntegratorConfig::default();
        let r = simulate_coupled_increment(&params(2.0, 1.0, 4.0), -1.0, &cfg, &mut NoiseDriver::new(3, 0));
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn coupled_paths_stay_ordered() {
        let cfg = IntegratorConfig::default();
        let p = params(2.0, 0.5, 3.0);
        for s in 0..20 {
            let (lo, hi, inc) =
                simulate_coupled_increment(&p, 2.0, &cfg, &mut NoiseDriver::new(8, s)).unwrap();
            assert!(hi.terminal_value >= lo.terminal_value - 1e-9);
            assert!(inc.converged);
        }
    }

    #[test]
    fn riccati_without_forcing_never_hits_zero() {
        let cfg = IntegratorConfig::default();
        for s in 0..5 {
            let c = simulate_riccati(&params(1.0, 0.0, 0.0), &cfg, &mut NoiseDriver::new(4, s)).unwrap();
            assert_eq!(c.value, 0);
            assert_eq!(c.provenance, Provenance::Riccati);
        }
    }

    // β = 2, a = 0: P(M(λ) = 0) = e^{-λ²}.
    #[test]
    fn gap_probability_matches_both_routes() {
        let cfg = IntegratorConfig::default();
        let n = 400;
        let (mut phi_zero, mut ric_zero) = (0, 0);
        for s in 0..n {
            let run = simulate_phi(&params(2.0, 0.0, 1.0), &cfg, &mut NoiseDriver::new(11, s)).unwrap();
            phi_zero += (count_from_phi(&run).unwrap().value == 0) as u32;
            let c = simulate_riccati(&params(2.0, 0.0, 1.0), &cfg, &mut NoiseDriver::new(12, s)).unwrap();
            ric_zero += (c.value == 0) as u32;
        }
        let target = (-1.0f64).exp();
        let tol = 4.0 * (target * (1.0 - target) / n as f64).sqrt();
        for z in [phi_zero, ric_zero] {
            let p = z as f64 / n as f64;
            assert!((p - target).abs() < tol, "{p} vs {target}");
        }
    }

    #[test]
    fn bulk_count_mean() {
        let cfg = IntegratorConfig::default();
        let n = 300;
        let lambda = 20.0;
        let mut sum = 0.0;
        let mut near = 0;
        for s in 0..n {
            let run = simulate_alpha(lambda, 2.0, &cfg, &mut NoiseDriver::new(5, s)).unwrap();
            assert!(run.converged);
            let k = (run.terminal_value / (2.0 * PI)).round();
            let gap = (run.terminal_value - 2.0 * PI * k).abs();
            assert!(gap < PI / 2.0, "{gap}");
            near += (gap < 0.1) as u32;
            sum += count_from_alpha(&run).unwrap().value as f64;
        }
        assert!(near as f64 >= 0.95 * n as f64, "{near}");
        let mean = sum / n as f64;
        assert!((mean - lambda / (2.0 * PI)).abs() < 0.25, "{mean}");
    }

    #[test]
    fn oscillatory_sup_is_bounded_by_horizon() {
        let cfg = IntegratorConfig::default();
        let p = params(2.0, 0.0, 50.0);
        let t = 3.0;
        for s in 0..5 {
            let v = oscillatory_statistic(&p, 0.5, t, &cfg, &mut NoiseDriver::new(6, s)).unwrap();
            assert!(v >= 0.0 && v <= t + 1e-12);
        }
        // φ ≡ 2π: the integral is T e^{2πic}
        let z = oscillatory_sup(&params(2.0, 0.0, 0.0), 0.25, t, &cfg, &mut NoiseDriver::new(0, 0)).unwrap();
        assert!((z - t).abs() < 1e-9);
    }

    #[test]
    fn oscillatory_regime_is_enforced() {
        let cfg = IntegratorConfig::default();
        let mut nd = NoiseDriver::new(0, 0);
        assert!(oscillatory_statistic(&params(2.0, 0.0, 1.0), 1.0, 0.1, &cfg, &mut nd).is_err());
        assert!(oscillatory_statistic(&params(2.0, 0.0, 10.0), 1.0, 9.3, &cfg, &mut nd).is_err());
        assert!(oscillatory_statistic(&params(2.0, 0.0, 10.0), 0.0, 1.0, &cfg, &mut nd).is_err());
    }
}
