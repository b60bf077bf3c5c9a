//! Lower-bound statistics: increasing bottom cards and a single marked card.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::deck::Deck;
use super::rng::{stream, Purpose};

/// Wilson score interval at 95%.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = 1.959963984540054;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncreasingBottomEstimate {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub m: u64,
    pub trials: u64,
    pub seed: u64,
    /// Empirical `P(L_j > m)`.
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// `1/j!`.
    pub pi_bj: f64,
    /// `P(L_j > m) − 1/j!`.
    pub estimate: f64,
    pub estimate_ci: (f64, f64),
    /// Fraction of runs whose bottom `j` cards are increasing after `m` steps.
    pub bottom_increasing: f64,
}

/// Runs `m` bottom-k-to-top shuffles from the identity. `L_j > m` when fewer
/// than `k − j` of the labels `n−k+1..=n` have been chosen.
pub fn increasing_bottom_statistic(
    n: usize,
    k: usize,
    j: usize,
    m: u64,
    trials: u64,
    seed: u64,
) -> Result<IncreasingBottomEstimate> {
    if k <= 1 || k > n {
        return Err(Error::domain(format!("need n >= k > 1, got n = {n}, k = {k}")));
    }
    if j == 0 || j > k.min(20) || trials == 0 {
        return Err(Error::domain(format!("need 1 <= j <= min(k, 20) and trials > 0, got j = {j}")));
    }
    let lo = n - k + 1;
    let outcomes: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, Purpose::LowerBound, t);
            let mut deck = Deck::identity(n);
            let mut chosen = vec![false; k];
            let mut distinct = 0;
            for _ in 0..m {
                let a = rng.random_range(lo..=n);
                let card = deck.card_at(a);
                if card >= lo && !std::mem::replace(&mut chosen[card - lo], true) {
                    distinct += 1;
                }
                deck.move_to_top(a);
            }
            let increasing = (n - j + 1..n).all(|p| deck.card_at(p) < deck.card_at(p + 1));
            (distinct < k - j, increasing)
        })
        .collect();
    let hits = outcomes.iter().filter(|o| o.0).count() as u64;
    let inc = outcomes.iter().filter(|o| o.1).count() as f64;
    let p_hat = hits as f64 / trials as f64;
    let (ci_low, ci_high) = wilson_interval(hits, trials);
    let pi_bj = 1.0 / (1..=j).map(|i| i as f64).product::<f64>();
    Ok(IncreasingBottomEstimate {
        n,
        k,
        j,
        m,
        trials,
        seed,
        p_hat,
        ci_low,
        ci_high,
        pi_bj,
        estimate: p_hat - pi_bj,
        estimate_ci: (ci_low - pi_bj, ci_high - pi_bj),
        bottom_increasing: inc / trials as f64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleCardEstimate {
    pub n: usize,
    pub k: usize,
    pub l: u64,
    pub c: f64,
    pub trials: u64,
    pub seed: u64,
    /// 1-based starting position of the marked card.
    pub start: usize,
    /// Size of the bottom block defining the event `A`.
    pub block: usize,
    /// Empirical `q̃^l(A)`.
    pub p_hat: f64,
    pub std_err: f64,
    /// `π(A) = ⌊cn⌋/n`.
    pub pi_a: f64,
    /// `|q̃^l(A) − π(A)|`.
    pub lower_bound: f64,
}

/// Position of a marked card after one step of `q̃_{n,k}`.
pub(crate) fn single_card_step<R: Rng + ?Sized>(x: usize, n: usize, k: usize, rng: &mut R) -> usize {
    let l = rng.random_range(n - k + 1..=n);
    if rng.random_bool(0.5) {
        // σ_l: top card to position l, cards 2..=l move up.
        if x == 1 {
            l
        } else if x <= l {
            x - 1
        } else {
            x
        }
    } else if x == l {
        1
    } else if x < l {
        x + 1
    } else {
        x
    }
}

/// Monte Carlo estimate of `q̃^l(A)` where `A` is "the marked card lies in the
/// bottom `⌊cn⌋` positions", for a card started at `⌊(1−c)n/2⌋ + 1`.
pub fn single_card_lower_bound(
    n: usize,
    k: usize,
    l: u64,
    c: f64,
    trials: u64,
    seed: u64,
) -> Result<SingleCardEstimate> {
    if k <= 1 || k > n {
        return Err(Error::domain(format!("need n >= k > 1, got n = {n}, k = {k}")));
    }
    if !(c > 0.0 && c < 1.0) || trials == 0 {
        return Err(Error::domain(format!("need c in (0, 1) and trials > 0, got c = {c}")));
    }
    let nf = n as f64;
    let block = (c * nf).floor() as usize;
    let start = ((1.0 - c) * nf / 2.0).floor() as usize + 1;
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = stream(seed, Purpose::SingleCard, t);
            let mut x = start;
            for _ in 0..l {
                x = single_card_step(x, n, k, &mut rng);
            }
            x > n - block
        })
        .count() as f64;
    let tr = trials as f64;
    let p_hat = hits / tr;
    let pi_a = block as f64 / nf;
    Ok(SingleCardEstimate {
        n,
        k,
        l,
        c,
        trials,
        seed,
        start,
        block,
        p_hat,
        std_err: (p_hat * (1.0 - p_hat) / tr).sqrt(),
        pi_a,
        lower_bound: (p_hat - pi_a).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Permutation;

    #[test]
    fn no_shuffles_yet() {
        let e = increasing_bottom_statistic(10, 10, 4, 0, 20, 0).unwrap();
        assert_eq!(e.p_hat, 1.0);
        assert!((e.estimate - (1.0 - 1.0 / 24.0)).abs() < 1e-15);
        assert_eq!(e.bottom_increasing, 1.0);
    }

    #[test]
    fn uncollected_bottom_stays_increasing() {
        // Whenever L_j > m the bottom j cards are increasing.
        let e = increasing_bottom_statistic(12, 12, 3, 20, 2000, 1).unwrap();
        assert!(e.bottom_increasing >= e.p_hat);
    }

    #[test]
    fn single_card_starts_above_block() {
        let e = single_card_lower_bound(100, 50, 0, 0.5, 100, 0).unwrap();
        assert_eq!(e.p_hat, 0.0);
        assert_eq!(e.start, 26);
        assert_eq!(e.block, 50);
    }

    #[test]
    fn single_card_step_matches_group_action() {
        let n = 7;
        for k in 2..=n {
            for x in 1..=n {
                for l in n - k + 1..=n {
                    // card x starts at position x of the identity deck
                    let after_fwd = Permutation::cycle(l, n).unwrap().position_of(x);
                    let after_rev = Permutation::cycle(l, n).unwrap().inverse().position_of(x);
                    let expect_fwd = if x == 1 { l } else if x <= l { x - 1 } else { x };
                    let expect_rev = if x == l { 1 } else if x < l { x + 1 } else { x };
                    assert_eq!(after_fwd, expect_fwd);
                    assert_eq!(after_rev, expect_rev);
                }
            }
        }
    }

    #[test]
    fn interval_contains_estimate() {
        let (lo, hi) = wilson_interval(30, 100);
        assert!(lo < 0.3 && 0.3 < hi);
        assert_eq!(wilson_interval(0, 10).0, 0.0);
    }
}
