//! Exact finite-n checks of the general mixing-time inequalities.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::SparseMeasure;
use crate::scalar::{ratio, Weight};

use super::mixing::{mixing_time_unbounded, Metric, Profile};

type Exact = SparseMeasure<BigRational>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LazyCheck {
    pub p: f64,
    pub eps: f64,
    pub t_lazy: usize,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub t2: usize,
    /// `None` when `q⋆q*` generates a proper subgroup (the bound is then vacuous).
    pub t2_product: Option<usize>,
    pub t_le_t2: bool,
    pub t2_le_twice_product: bool,
    pub lazy: Vec<LazyCheck>,
}

impl TransferReport {
    pub fn all_hold(&self) -> bool {
        self.t_le_t2 && self.t2_le_twice_product && self.lazy.iter().all(|c| c.holds)
    }
}

/// For `q = q_{n,k}`: `T ≤ T₂`, `T₂(q) ≤ 2T₂(q⋆q*)`, and for each `ε`,
/// `T(q̂_{1/2}) ≤ max[((2+ε)/p)·T(q), 80/(pε²)]`.
pub fn transfer_checks(n: usize, k: usize, eps: &[f64]) -> Result<TransferReport> {
    let q = Exact::top_to_bottom_k(n, k)?;
    let t = must_mix(&q, Metric::Tv)?;
    let t2 = must_mix(&q, Metric::L2)?;
    let product = q.convolve(&q.reversal())?;
    let t2_product = mixing_time_unbounded(&product, Metric::L2)?;
    let p = 0.5;
    let t_lazy = must_mix(&q.lazy(ratio(1, 2))?, Metric::Tv)?;
    let lazy = eps
        .iter()
        .map(|&e| {
            let bound = ((2.0 + e) / p * t as f64).max(80.0 / (p * e * e));
            LazyCheck { p, eps: e, t_lazy, bound, holds: t_lazy as f64 <= bound }
        })
        .collect();
    Ok(TransferReport {
        n,
        k,
        t,
        t2,
        t2_product,
        t_le_t2: t <= t2,
        t2_le_twice_product: t2_product.is_none_or(|tp| t2 <= 2 * tp),
        lazy,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkCheck {
    /// `q`, `q~` or `q^`.
    pub walk: String,
    pub t: usize,
    pub t2: usize,
    pub t_le_t2: bool,
    /// Largest `|d((q*)^m) − d(q^m)|` over `m ≤ 30`, both metrics.
    pub reversal_gap: f64,
    /// Largest `d(q^m) − e^{−⌊m/T_p⌋}` over `m ≥ T_p` and both metrics.
    pub submult_excess: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallNReport {
    pub n: usize,
    pub k: usize,
    pub walks: Vec<WalkCheck>,
}

impl SmallNReport {
    pub fn all_hold(&self) -> bool {
        self.walks
            .iter()
            .all(|w| w.t_le_t2 && w.reversal_gap <= 1e-12 && w.submult_excess <= 1e-12)
    }
}

/// `T ≤ T₂`, reversal invariance and sub-multiplicativity for `q_{n,k}`,
/// `q̃_{n,k}` and `q̂_{n,k}`.
pub fn small_n_checks(n: usize, k: usize) -> Result<SmallNReport> {
    let q = Exact::top_to_bottom_k(n, k)?;
    let walks = [("q", q.clone()), ("q~", q.symmetrize()), ("q^", q.lazy(ratio(1, 2))?)];
    let mut out = Vec::new();
    for (name, w) in walks {
        let w = w.to_f64();
        let t = must_mix(&w, Metric::Tv)?;
        let t2 = must_mix(&w, Metric::L2)?;
        let horizon = 30.max(4 * t2);
        let fwd = Profile::compute::<f64, f64>(&w, horizon)?;
        let rev = Profile::compute::<f64, f64>(&w.reversal(), 30)?;
        let reversal_gap = rev
            .rows
            .iter()
            .zip(&fwd.rows)
            .map(|(a, b)| (a.tv - b.tv).abs().max((a.l2 - b.l2).abs()))
            .fold(0.0, f64::max);
        let mut submult_excess = f64::NEG_INFINITY;
        for (metric, tp) in [(Metric::Tv, t), (Metric::L2, t2)] {
            for row in &fwd.rows[tp.max(1)..] {
                let bound = (-((row.step / tp.max(1)) as f64)).exp();
                submult_excess = submult_excess.max(row.distance(metric) - bound);
            }
        }
        out.push(WalkCheck {
            walk: name.to_string(),
            t,
            t2,
            t_le_t2: t <= t2,
            reversal_gap,
            submult_excess,
        });
    }
    Ok(SmallNReport { n, k, walks: out })
}

fn must_mix<W: Weight>(q: &SparseMeasure<W>, metric: Metric) -> Result<usize> {
    mixing_time_unbounded(q, metric)?.ok_or_else(|| Error::domain("support does not generate S_n"))
}
