use std::f64::consts::PI;

use hardedge::oracle::oracle_count;
use hardedge::parallel::batch;
use hardedge::sde::ModelParams;
use hardedge::stats::Moments;

fn counts(n: usize, p: &ModelParams<f64>, draws: usize, seed: u64) -> Moments {
    let c: Vec<u64> = batch(seed, draws, |nd| oracle_count(n, p, nd))
        .unwrap()
        .iter()
        .map(|s| s.value)
        .collect();
    Moments::of_counts(&c).unwrap()
}

#[test]
fn oracle_mean_count_at_lambda_3() {
    let p = ModelParams::new(2.0, 0.0, 3.0).unwrap();
    let m = counts(400, &p, 2000, 31);
    assert!((m.mean - 6.0 / PI).abs() < 3.0 * m.mean_se, "{} ± {}", m.mean, m.mean_se);
}

#[test]
fn hard_edge_limit_is_stable_in_n() {
    let p = ModelParams::new(2.0, 0.0, 3.0).unwrap();
    let small = counts(400, &p, 4000, 32);
    let large = counts(800, &p, 4000, 33);
    // standard error of the difference of two independent means
    let se = (small.mean_se.powi(2) + large.mean_se.powi(2)).sqrt();
    assert!((small.mean - large.mean).abs() < se, "{} vs {} (se {se})", small.mean, large.mean);
}
