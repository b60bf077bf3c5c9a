//! Independent coupling trials and their empirical tail.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::deck::{bottom_k_to_top_step, top_insert_couple_step, Deck, DeckPair};
use super::rng::{stream, Purpose};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingKind {
    /// Reversed walk `q*_{n,k}`.
    BottomToTop,
    /// Forward walk `q_{n,k}`.
    TopInsert,
}

impl std::str::FromStr for CouplingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bottom-to-top" => Ok(CouplingKind::BottomToTop),
            "top-insert" => Ok(CouplingKind::TopInsert),
            _ => Err(Error::parse(s)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub n: usize,
    pub k: usize,
    pub kind: CouplingKind,
    pub trials: u64,
    pub seed: u64,
    /// Step cap; trials still apart at the cap are censored.
    pub cap: u64,
    /// Record per-card coupling times.
    pub track_cards: bool,
}

impl TrialConfig {
    pub fn new(n: usize, k: usize, kind: CouplingKind, trials: u64, seed: u64) -> Self {
        let cap = 50 * (n as u64).pow(3);
        TrialConfig { n, k, kind, trials, seed, cap, track_cards: false }
    }

    fn validate(&self) -> Result<()> {
        if self.k <= 1 || self.k > self.n || self.n > u16::MAX as usize {
            return Err(Error::domain(format!("need n >= k > 1, got n = {}, k = {}", self.n, self.k)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialStats {
    pub trial: u64,
    pub seed: u64,
    /// First step at which the decks agree; equals the cap when censored.
    pub t: u64,
    pub censored: bool,
    /// Per card (index = label − 1): the step after which it stays matched.
    pub card_times: Option<Vec<u64>>,
}

/// Runs one trial: deck 1 starts at the identity, deck 2 uniformly.
pub fn run_trial(cfg: &TrialConfig, trial: u64) -> TrialStats {
    let mut rng = stream(cfg.seed, Purpose::Coupling, trial);
    let deck2 = Deck::uniform(cfg.n, &mut rng);
    let mut pair = DeckPair::new(Deck::identity(cfg.n), deck2);
    let mut card_times = cfg.track_cards.then(|| vec![0u64; cfg.n]);
    let update_cards = |pair: &DeckPair, times: &mut Option<Vec<u64>>| {
        if let Some(times) = times {
            for c in 1..=pair.n() {
                if !pair.is_matched(c) {
                    times[c - 1] = pair.step + 1;
                }
            }
        }
    };
    while !pair.coupled() && pair.step < cfg.cap {
        update_cards(&pair, &mut card_times);
        step(&mut pair, cfg, &mut rng);
    }
    TrialStats {
        trial,
        seed: cfg.seed,
        t: pair.step,
        censored: !pair.coupled(),
        card_times,
    }
}

fn step<R: Rng + ?Sized>(pair: &mut DeckPair, cfg: &TrialConfig, rng: &mut R) {
    match cfg.kind {
        CouplingKind::BottomToTop => bottom_k_to_top_step(pair, cfg.k, rng),
        CouplingKind::TopInsert => top_insert_couple_step(pair, cfg.k, rng),
    }
}

/// All trials in trial order; a pure function of the configuration.
pub fn coupling_trials(cfg: &TrialConfig) -> Result<Vec<TrialStats>> {
    cfg.validate()?;
    Ok((0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect())
}

/// Coupling time of the `p`-lazy walk: the number of Bernoulli(`p`) trials
/// needed for `inner.t` successes. `p = 1` returns the inner trial.
pub fn lazy_trial(inner: &TrialStats, p: f64, seed: u64) -> Result<TrialStats> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::domain(format!("laziness {p} outside (0, 1]")));
    }
    if p == 1.0 {
        return Ok(inner.clone());
    }
    let mut rng = stream(seed, Purpose::Lazy, inner.trial);
    let mut steps = 0u64;
    let mut moves = 0u64;
    while moves < inner.t {
        steps += 1;
        if rng.random_bool(p) {
            moves += 1;
        }
    }
    Ok(TrialStats { t: steps, card_times: None, ..inner.clone() })
}

/// Empirical `P(T > m)` with its binomial standard error; censored trials
/// count as exceeding every `m` below the cap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tail {
    pub m: u64,
    pub p_hat: f64,
    pub std_err: f64,
    pub censored: u64,
}

pub fn tail(stats: &[TrialStats], m: u64) -> Tail {
    let n = stats.len() as f64;
    let hits = stats.iter().filter(|s| s.censored || s.t > m).count() as f64;
    let p_hat = hits / n;
    Tail {
        m,
        p_hat,
        std_err: (p_hat * (1.0 - p_hat) / n).sqrt(),
        censored: stats.iter().filter(|s| s.censored).count() as u64,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub n: usize,
    pub k: usize,
    pub kind: CouplingKind,
    pub trials: u64,
    pub seed: u64,
    pub censored: u64,
    pub mean: f64,
    pub std_err: f64,
    /// 95% normal interval for the mean coupling time.
    pub ci_low: f64,
    pub ci_high: f64,
}

pub fn summarize(cfg: &TrialConfig, stats: &[TrialStats]) -> TrialSummary {
    let n = stats.len() as f64;
    let mean = stats.iter().map(|s| s.t as f64).sum::<f64>() / n;
    let var = stats.iter().map(|s| (s.t as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let std_err = (var / n).sqrt();
    TrialSummary {
        n: cfg.n,
        k: cfg.k,
        kind: cfg.kind,
        trials: cfg.trials,
        seed: cfg.seed,
        censored: stats.iter().filter(|s| s.censored).count() as u64,
        mean,
        std_err,
        ci_low: mean - 1.96 * std_err,
        ci_high: mean + 1.96 * std_err,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cards_couple_within_one_step() {
        let cfg = TrialConfig::new(2, 2, CouplingKind::BottomToTop, 400, 0);
        let stats = coupling_trials(&cfg).unwrap();
        for s in &stats {
            assert!(s.t <= 1);
            let start = Deck::uniform(2, &mut stream(0, Purpose::Coupling, s.trial));
            assert_eq!(s.t == 1, start != Deck::identity(2));
        }
        assert!(stats.iter().any(|s| s.t == 1) && stats.iter().any(|s| s.t == 0));
    }

    #[test]
    fn deterministic_under_seed() {
        let mut cfg = TrialConfig::new(9, 3, CouplingKind::TopInsert, 50, 11);
        cfg.track_cards = true;
        assert_eq!(coupling_trials(&cfg).unwrap(), coupling_trials(&cfg).unwrap());
        let other = TrialConfig { seed: 12, ..cfg.clone() };
        assert_ne!(coupling_trials(&cfg).unwrap(), coupling_trials(&other).unwrap());
    }

    #[test]
    fn coupling_time_is_max_card_time() {
        for kind in [CouplingKind::BottomToTop, CouplingKind::TopInsert] {
            let mut cfg = TrialConfig::new(8, 4, kind, 40, 1);
            cfg.track_cards = true;
            for s in coupling_trials(&cfg).unwrap() {
                let times = s.card_times.unwrap();
                assert_eq!(*times.iter().max().unwrap(), s.t);
            }
        }
    }

    #[test]
    fn censoring_is_flagged() {
        let mut cfg = TrialConfig::new(30, 2, CouplingKind::TopInsert, 5, 0);
        cfg.cap = 3;
        let stats = coupling_trials(&cfg).unwrap();
        assert!(stats.iter().all(|s| s.censored && s.t == 3));
        assert_eq!(tail(&stats, 1000).p_hat, 1.0);
    }

    #[test]
    fn lazy_wrapper() {
        let cfg = TrialConfig::new(20, 20, CouplingKind::BottomToTop, 200, 3);
        let stats = coupling_trials(&cfg).unwrap();
        for s in &stats {
            assert_eq!(&lazy_trial(s, 1.0, 3).unwrap(), s);
        }
        let lazy: Vec<_> = stats.iter().map(|s| lazy_trial(s, 0.5, 3).unwrap()).collect();
        assert_eq!(lazy, stats.iter().map(|s| lazy_trial(s, 0.5, 3).unwrap()).collect::<Vec<_>>());
        let ratio = summarize(&cfg, &lazy).mean / summarize(&cfg, &stats).mean;
        assert!((1.8..2.2).contains(&ratio), "{ratio}");
        assert!(lazy_trial(&stats[0], 0.0, 0).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(coupling_trials(&TrialConfig::new(5, 1, CouplingKind::TopInsert, 1, 0)).is_err());
        assert!(coupling_trials(&TrialConfig::new(5, 6, CouplingKind::TopInsert, 1, 0)).is_err());
    }
}
