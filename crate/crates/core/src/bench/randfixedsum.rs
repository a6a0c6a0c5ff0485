//! Uniform sampling of vectors with bounded components and a fixed sum
//! (Stafford's simplex decomposition).

use thiserror::Error;

use super::rng::SplitMix64;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum RandFixedSumError {
    #[error("cannot split {total} into {n} values within [{low}, {high}]")]
    InfeasibleSum { n: usize, total: f64, low: f64, high: f64 },
}

/// `n` values in `[low, high]` summing to `total`, uniform over that slice of
/// the hypercube.
pub fn randfixedsum(
    n: usize,
    total: f64,
    low: f64,
    high: f64,
    rng: &mut SplitMix64,
) -> Result<Vec<f64>, RandFixedSumError> {
    let tol = 1e-12 * total.abs().max(1.0);
    let err = RandFixedSumError::InfeasibleSum { n, total, low, high };
    if n == 0 || !(low <= high) || total < n as f64 * low - tol || total > n as f64 * high + tol {
        return Err(err);
    }
    if high == low {
        return Ok(vec![low; n]);
    }

    // work on the unit cube with sum s
    let mut s = (total - n as f64 * low) / (high - low);
    let k = (s.floor() as i64).clamp(0, n as i64 - 1) as usize;
    s = s.clamp(k as f64, k as f64 + 1.0);
    // 1-based tables, as in the reference formulation
    let s1 = |l: usize| s - (k as f64 - (l as f64 - 1.0));
    let s2 = |l: usize| (k + n) as f64 - (l as f64 - 1.0) - s;

    let mut w = vec![vec![0.0f64; n + 2]; n + 1];
    w[1][2] = f64::MAX;
    let mut t = vec![vec![0.0f64; n + 1]; n];
    let tiny = f64::from_bits(1);
    for i in 2..=n {
        for c in 2..=i + 1 {
            let a = w[i - 1][c] * s1(c - 1) / i as f64;
            let b = w[i - 1][c - 1] * s2(n - i + c - 1) / i as f64;
            w[i][c] = a + b;
            let denom = w[i][c] + tiny;
            t[i - 1][c - 1] = if s2(n - i + c - 1) > s1(c - 1) {
                b / denom
            } else {
                1.0 - a / denom
            };
        }
    }

    let mut x = vec![0.0; n];
    let mut j = k + 1;
    let (mut sm, mut pr) = (0.0, 1.0);
    for i in (1..n).rev() {
        let step = usize::from(rng.uniform() <= t[i][j]);
        let sx = rng.uniform().powf(1.0 / i as f64);
        sm += (1.0 - sx) * pr * s / (i + 1) as f64;
        pr *= sx;
        x[n - i - 1] = sm + pr * step as f64;
        s -= step as f64;
        j -= step;
    }
    x[n - 1] = sm + pr * s;
    rng.shuffle(&mut x);
    Ok(x.into_iter().map(|v| low + (high - low) * v).collect())
}
