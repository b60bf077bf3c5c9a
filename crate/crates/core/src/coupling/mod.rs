//! Monte Carlo couplings and order statistics.

mod collector;
mod deck;
mod lowerbound;
pub mod rng;
mod trials;

pub use collector::{coupon_collector, CollectorStats, CollectorSummary};
pub use deck::{bottom_k_to_top_step, top_insert_couple_step, Deck, DeckPair};
pub use lowerbound::{
    increasing_bottom_statistic, single_card_lower_bound, wilson_interval, IncreasingBottomEstimate,
    SingleCardEstimate,
};
pub use trials::{
    coupling_trials, lazy_trial, run_trial, summarize, tail, CouplingKind, Tail, TrialConfig, TrialStats,
    TrialSummary,
};
