use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tseries_core::{Calendar, Series};

/// Positive multiplicative random walk from 100 on a daily calendar.
pub fn random_walk(name: &str, n: usize, seed: u64) -> Series {
    walk_on(name, Arc::new(Calendar::synthetic(n)), seed)
}

/// Same walk, one value per entry of `calendar`.
pub fn walk_on(name: &str, calendar: Arc<Calendar>, seed: u64) -> Series {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut price = 100.0f64;
    let prices: Vec<f64> = (0..calendar.len())
        .map(|_| {
            price *= (0.02 * (rng.random::<f64>() - 0.5)).exp();
            price
        })
        .collect();
    Series::from_reals(name, calendar, prices).expect("calendar is not empty")
}
