//! Confidence intervals and reproducible random streams for the Monte Carlo
//! estimators.
//!
//! Every estimator splits its samples into fixed-size blocks. Block `b` draws
//! from ChaCha8 stream `b` under the run seed, so results do not depend on
//! the number of worker threads or the order blocks finish in.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two-sided 99% standard normal quantile.
pub const Z99: f64 = 2.575_829_303_548_901;

/// Samples per independent random stream.
pub const BLOCK: u64 = 1 << 14;

/// Generator for block `stream` of a run keyed by `seed`.
pub fn block_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A uniform draw in `(0, 1)`, never exactly 0.
#[inline]
pub fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Unit-mean exponential from a uniform `u` by inversion, and its
/// antithetic partner from `1 - u`.
#[inline]
pub fn exp_pair(u: f64) -> (f64, f64) {
    (-(-u).ln_1p(), -u.ln())
}

/// Half-width of the Wilson score interval at quantile `z`.
pub fn wilson_half_width(successes: u64, n: u64, z: f64) -> f64 {
    if n == 0 {
        return 0.5;
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}

/// Runs `blocks` independent blocks, optionally on a dedicated pool of
/// `workers` threads, and returns their results in block order.
pub fn run_blocks<T, F>(blocks: u64, workers: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    let run = || (0..blocks).into_par_iter().map(&f).collect::<Vec<T>>();
    match workers {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().expect("thread pool").install(run),
        None => run(),
    }
}

/// Number of samples in block `b` of a run of `n`.
pub fn block_len(n: u64, b: u64) -> u64 {
    (n - b * BLOCK).min(BLOCK)
}

pub fn block_count(n: u64) -> u64 {
    n.div_ceil(BLOCK)
}
