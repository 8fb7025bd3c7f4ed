use std::f64::consts::PI;

use hardedge::parallel::batch;
use hardedge::sde::{
    count_from_alpha, count_from_phi, simulate_alpha, simulate_phi, simulate_riccati, IntegratorConfig,
    ModelParams,
};
use hardedge::stats::{chi_square_two_sample, ks_two_sample, linear_fit, Moments};
use hardedge::NoiseDriver;

fn phi_counts(p: &ModelParams<f64>, n: usize, seed: u64, cfg: &IntegratorConfig<f64>) -> Vec<u64> {
    batch(seed, n, |nd| count_from_phi(&simulate_phi(p, cfg, nd)?))
        .unwrap()
        .iter()
        .map(|s| s.value)
        .collect()
}

fn riccati_counts(p: &ModelParams<f64>, n: usize, seed: u64) -> Vec<u64> {
    batch(seed, n, |nd| simulate_riccati(p, &IntegratorConfig::default(), nd))
        .unwrap()
        .iter()
        .map(|s| s.value)
        .collect()
}

#[test]
fn phase_count_mean_at_lambda_50() {
    let p = ModelParams::new(2.0, 0.0, 50.0).unwrap();
    let m = Moments::of_counts(&phi_counts(&p, 2000, 21, &IntegratorConfig::default())).unwrap();
    let target = 100.0 / PI;
    assert!((m.mean - target).abs() < 3.0 * m.mean_se, "{} ± {}", m.mean, m.mean_se);
}

#[test]
fn bulk_count_mean_at_lambda_40() {
    let cfg = IntegratorConfig::default();
    let runs = batch(22, 2000, |nd| simulate_alpha(40.0, 2.0, &cfg, nd)).unwrap();
    let near = runs
        .iter()
        .filter(|r| {
            let k = (r.terminal_value / (2.0 * PI)).round();
            (r.terminal_value - 2.0 * PI * k).abs() < PI
        })
        .count();
    assert!(near as f64 >= 0.99 * runs.len() as f64);
    let counts: Vec<u64> = runs.iter().map(|r| count_from_alpha(r).unwrap().value).collect();
    let m = Moments::of_counts(&counts).unwrap();
    let target = 40.0 / (2.0 * PI);
    assert!((m.mean - target).abs() < 3.0 * m.mean_se, "{} ± {}", m.mean, m.mean_se);
}

#[test]
fn riccati_without_forcing_rarely_hits_zero() {
    let p = ModelParams::new(2.0, 0.0, 0.0).unwrap();
    let hits = riccati_counts(&p, 1000, 23).iter().filter(|&&c| c > 0).count();
    assert!(hits <= 10, "{hits}");
}

#[test]
fn riccati_and_phase_counts_agree() {
    let phi = phi_counts(&ModelParams::new(2.0, 0.0, 3.0).unwrap(), 500, 24, &IntegratorConfig::default());
    let ric = riccati_counts(&ModelParams::new(2.0, 0.0, 9.0).unwrap(), 500, 25);
    let r = chi_square_two_sample(&phi, &ric).unwrap();
    assert!(r.p_value > 0.01, "{r:?}");
}

#[test]
fn zero_count_probability_decays_at_rate_beta_over_two() {
    let scales = [1.0, 2.0, 3.0];
    let n = 4000;
    let mut y = Vec::new();
    let mut se = Vec::new();
    for (i, &l) in scales.iter().enumerate() {
        let c = riccati_counts(&ModelParams::new(2.0, 0.0, l).unwrap(), n, 26 + i as u64);
        let p = c.iter().filter(|&&x| x == 0).count() as f64 / n as f64;
        y.push(p.ln());
        se.push(((1.0 - p) / (n as f64 * p)).sqrt());
    }
    let fit = linear_fit(&scales, &y, Some(&se)).unwrap();
    assert!((fit.slope + 1.0).abs() < 0.3, "{fit:?}");
}

#[test]
fn halving_the_step_leaves_count_laws_unchanged() {
    let p = ModelParams::new(2.0, 0.5, 4.0).unwrap();
    let coarse = IntegratorConfig::default();
    let fine = coarse.with_base_step(coarse.base_step / 2.0);
    let a = phi_counts(&p, 500, 27, &coarse);
    let b = phi_counts(&p, 500, 28, &fine);
    let ks = ks_two_sample(&a, &b).unwrap();
    assert!(ks.p_value > 0.01, "{ks:?}");
}

#[test]
fn single_precision_phase() {
    let cfg = IntegratorConfig::<f32>::default();
    let fixed = simulate_phi(&ModelParams::new(2.0f32, 0.0, 0.0).unwrap(), &cfg, &mut NoiseDriver::new(1, 0)).unwrap();
    assert_eq!(fixed.terminal_value, 2.0 * std::f32::consts::PI);
    let p = ModelParams::new(2.0f32, 0.0, 5.0).unwrap();
    let counts: Vec<f64> = (0..300)
        .map(|i| {
            let run = simulate_phi(&p, &cfg, &mut NoiseDriver::new(29, i)).unwrap();
            count_from_phi(&run).unwrap().value as f64
        })
        .collect();
    let m = Moments::of(&counts).unwrap();
    // β = 2 determinantal mean 2λ/π - a/2
    assert!((m.mean - 10.0 / PI).abs() < 4.0 * m.mean_se, "{}", m.mean);
}
