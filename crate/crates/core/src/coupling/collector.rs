//! Coupon collecting: `R_m` distinct labels after `m` uniform draws, and
//! `L_j`, the first `m` with `R_m = n − j`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::rng::{stream, Purpose};

/// One collecting run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectorStats {
    pub n: usize,
    /// `first_hits[r − 1]` is the first `m` with `R_m = r`.
    pub first_hits: Vec<u64>,
}

impl CollectorStats {
    pub fn run<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut seen = vec![false; n];
        let mut first_hits = Vec::with_capacity(n);
        let mut m = 0u64;
        while first_hits.len() < n {
            m += 1;
            let c = rng.random_range(0..n);
            if !std::mem::replace(&mut seen[c], true) {
                first_hits.push(m);
            }
        }
        CollectorStats { n, first_hits }
    }

    /// `L_j`.
    pub fn l(&self, j: usize) -> u64 {
        self.first_hits[self.n - j - 1]
    }

    /// `R_m`.
    pub fn distinct_after(&self, m: u64) -> usize {
        self.first_hits.partition_point(|&h| h <= m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollectorSummary {
    pub n: usize,
    pub j: usize,
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    pub std_dev: f64,
    pub std_err: f64,
    /// `mean / (n ln n)`; absent for `n = 1`.
    pub normalized_mean: Option<f64>,
    pub samples: Vec<u64>,
}

pub fn coupon_collector(n: usize, j: usize, trials: u64, seed: u64) -> Result<CollectorSummary> {
    if n == 0 || j >= n {
        return Err(Error::domain(format!("need n >= 1 and j < n, got n = {n}, j = {j}")));
    }
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    let samples: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|t| CollectorStats::run(n, &mut stream(seed, Purpose::Collector, t)).l(j))
        .collect();
    let count = trials as f64;
    let mean = samples.iter().map(|&x| x as f64).sum::<f64>() / count;
    let var = samples.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / (count - 1.0).max(1.0);
    let nf = n as f64;
    Ok(CollectorSummary {
        n,
        j,
        trials,
        seed,
        mean,
        std_dev: var.sqrt(),
        std_err: (var / count).sqrt(),
        normalized_mean: (n > 1).then(|| mean / (nf * nf.ln())),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_label() {
        let s = coupon_collector(1, 0, 50, 0).unwrap();
        assert!(s.samples.iter().all(|&x| x == 1));
        assert_eq!(s.normalized_mean, None);
    }

    #[test]
    fn distinct_counts_are_monotone() {
        let stats = CollectorStats::run(50, &mut stream(0, Purpose::Collector, 0));
        assert!(stats.first_hits.windows(2).all(|w| w[0] < w[1]));
        assert!(stats.l(0) >= 50);
        let mut prev = 0;
        for m in 0..=stats.l(0) {
            let r = stats.distinct_after(m);
            assert!(r >= prev);
            prev = r;
        }
        assert_eq!(stats.distinct_after(stats.l(3)), 47);
        assert_eq!(stats.distinct_after(stats.l(3) - 1), 46);
    }

    #[test]
    fn rejects_bad_j() {
        assert!(coupon_collector(3, 3, 10, 0).is_err());
    }
}
