//! Distance profiles and mixing times of `q^m`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{rank_zero_based, Permutation};
use crate::measure::SparseMeasure;
use crate::scalar::{Real, Weight};

use super::dense::{check_dense, DenseDistribution, StepTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Tv,
    L2,
}

impl Metric {
    /// `1/(2e)` for total variation, `1/e` for `L²`.
    pub fn threshold(self) -> f64 {
        match self {
            Metric::Tv => 0.5 / std::f64::consts::E,
            Metric::L2 => 1.0 / std::f64::consts::E,
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tv" => Ok(Metric::Tv),
            "l2" => Ok(Metric::L2),
            _ => Err(Error::parse(s)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub step: usize,
    pub tv: f64,
    pub l2: f64,
}

impl ProfileRow {
    pub fn distance(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Tv => self.tv,
            Metric::L2 => self.l2,
        }
    }
}

/// Distances of `q^m` to uniform for `m = 0..=m_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub rows: Vec<ProfileRow>,
}

impl Profile {
    pub fn compute<T: Real, W: Weight>(q: &SparseMeasure<W>, m_max: usize) -> Result<Self> {
        let table = StepTable::<T>::new(q)?;
        let mut d = DenseDistribution::<T>::delta_e(q.n())?;
        let mut rows = Vec::with_capacity(m_max + 1);
        for step in 0..=m_max {
            if step > 0 {
                d = table.apply(&d);
            }
            rows.push(ProfileRow {
                step,
                tv: d.tv_distance().to_f64().unwrap_or(f64::NAN),
                l2: d.lp_distance(2)?.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Profile { rows })
    }

    /// First step whose distance is at most the metric's threshold.
    pub fn mixing_time(&self, metric: Metric) -> Option<usize> {
        let th = metric.threshold();
        self.rows.iter().find(|r| r.distance(metric) <= th).map(|r| r.step)
    }

    pub fn distance(&self, step: usize, metric: Metric) -> f64 {
        self.rows[step].distance(metric)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingReport {
    pub measure: String,
    pub n: usize,
    pub metric: Metric,
    pub threshold: f64,
    /// `None` when the threshold is not reached within `m_max` steps.
    pub mixing_time: Option<usize>,
    pub saturated: bool,
    pub m_max: usize,
    pub profile: Vec<ProfileRow>,
}

/// The mixing time of `q` under `metric`, with the distance profile to
/// `m_max`. Not reaching the threshold is reported as saturation.
pub fn mixing_time<W: Weight>(
    q: &SparseMeasure<W>,
    label: &str,
    metric: Metric,
    m_max: usize,
) -> Result<MixingReport> {
    let profile = Profile::compute::<f64, W>(q, m_max)?;
    let t = profile.mixing_time(metric);
    Ok(MixingReport {
        measure: label.to_string(),
        n: q.n(),
        metric,
        threshold: metric.threshold(),
        mixing_time: t,
        saturated: t.is_none(),
        m_max,
        profile: profile.rows,
    })
}

/// Whether the support of `q` generates all of `S_n`.
pub(crate) fn generates<W: Weight>(q: &SparseMeasure<W>) -> Result<bool> {
    let size = check_dense(q.n())?;
    let mut seen = vec![false; size];
    let mut queue = VecDeque::from([Permutation::identity(q.n())]);
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for s in q.support() {
            let y = x.compose_unchecked(s);
            let r = rank_zero_based(y.as_zero_based()) as usize;
            if !seen[r] {
                seen[r] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    Ok(count == size)
}

/// Mixing time under `metric` with no horizon; `None` when the support
/// generates a proper subgroup and the walk never mixes.
pub(crate) fn mixing_time_unbounded<W: Weight>(q: &SparseMeasure<W>, metric: Metric) -> Result<Option<usize>> {
    if !generates(q)? {
        return Ok(None);
    }
    let table = StepTable::<f64>::new(q)?;
    let mut d = DenseDistribution::<f64>::delta_e(q.n())?;
    let th = metric.threshold();
    for step in 0..STEP_LIMIT {
        if step > 0 {
            d = table.apply(&d);
        }
        let dist = match metric {
            Metric::Tv => d.tv_distance(),
            Metric::L2 => d.lp_distance(2)?,
        };
        if dist <= th {
            return Ok(Some(step));
        }
    }
    Err(Error::Numeric { message: format!("walk did not mix within {STEP_LIMIT} steps"), trace: Vec::new() })
}

const STEP_LIMIT: usize = 100_000;
