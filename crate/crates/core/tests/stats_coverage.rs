use bandsim::stats::{batch_mean_ci, ratio_estimate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BATCHES: usize = 30;
const REPLICATIONS: usize = 1000;

fn bernoulli_batches(rng: &mut ChaCha8Rng, p: f64, n: usize) -> Vec<f64> {
    (0..BATCHES).map(|_| (0..n).filter(|_| rng.gen_bool(p)).count() as f64 / n as f64).collect()
}

#[test]
fn batch_mean_coverage_is_nominal() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let covered = (0..REPLICATIONS)
        .filter(|_| batch_mean_ci(&bernoulli_batches(&mut rng, 0.5, 1000), 0.95).unwrap().covers(0.5))
        .count();
    let rate = covered as f64 / REPLICATIONS as f64;
    assert!((0.93..=0.97).contains(&rate), "coverage {rate}");
}

#[test]
fn ratio_coverage_is_nominal() {
    // events pass a filter with probability 0.6; of those, 0.3 succeed
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let p = 0.3;
    let mut covered = 0;
    for _ in 0..REPLICATIONS {
        let mut num = vec![0.0; BATCHES];
        let mut den = vec![0.0; BATCHES];
        for b in 0..BATCHES {
            for _ in 0..500 {
                if rng.gen_bool(0.6) {
                    den[b] += 1.0;
                    if rng.gen_bool(p) {
                        num[b] += 1.0;
                    }
                }
            }
        }
        if ratio_estimate(&num, &den, 0.95).unwrap().covers(p) {
            covered += 1;
        }
    }
    let rate = covered as f64 / REPLICATIONS as f64;
    assert!((0.93..=0.97).contains(&rate), "coverage {rate}");
}

#[test]
fn half_width_shrinks_like_inverse_root() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let sizes = [100usize, 400, 1600, 6400];
    let points: Vec<(f64, f64)> = sizes
        .iter()
        .map(|&n| {
            let mean_width = (0..40)
                .map(|_| batch_mean_ci(&bernoulli_batches(&mut rng, 0.2, n), 0.95).unwrap().half_width)
                .sum::<f64>()
                / 40.0;
            (((BATCHES * n) as f64).ln(), mean_width.ln())
        })
        .collect();
    let mx = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let my = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let slope = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / points.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    assert!((slope + 0.5).abs() <= 0.1, "slope {slope}");
}
