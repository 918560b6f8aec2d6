use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// One-tailed paired bootstrap p-value of the model beating the baseline.
///
/// Each of `iterations` resamples draws `n` instance indices with
/// replacement; the p-value is the fraction of resamples in which the
/// baseline is at least as accurate as the model (ties count against the
/// model).
pub fn bootstrap_significance<T: PartialEq>(
    gold: &[T],
    model: &[T],
    baseline: &[T],
    iterations: usize,
    seed: u64,
) -> Result<f64> {
    let n = gold.len();
    if model.len() != n || baseline.len() != n {
        return Err(Error::LengthMismatch(format!(
            "gold {n}, model {}, baseline {}",
            model.len(),
            baseline.len()
        )));
    }
    if n < 2 {
        return Err(Error::invalid("bootstrap needs at least two instances"));
    }
    if iterations == 0 {
        return Err(Error::invalid("bootstrap iterations must be positive"));
    }
    // per-instance (model correct) - (baseline correct)
    let diff: Vec<i64> = (0..n)
        .map(|i| i64::from(model[i] == gold[i]) - i64::from(baseline[i] == gold[i]))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut not_better = 0usize;
    for _ in 0..iterations {
        let total: i64 = (0..n).map(|_| diff[rng.gen_range(0..n)]).sum();
        if total <= 0 {
            not_better += 1;
        }
    }
    Ok(not_better as f64 / iterations as f64)
}
