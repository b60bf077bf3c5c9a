//! Uses of a flow: the odd-flow eigenvalue bound, the distance lower bound
//! on `A(η)`, Dirichlet forms and the comparison of mixing times.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coupling::rng::{stream, Purpose};
use crate::error::{Error, Result};
use crate::exact::{spectrum, Metric, Profile, DENSE_CAP};
use crate::group::{factorial, rank_zero_based, Permutation};
use crate::measure::SparseMeasure;
use crate::scalar::{compensated_sum, Weight};

use super::Flow;

/// `−1 + (1 + β̃_min)/A(η)` for an odd flow.
pub fn odd_flow_eigenvalue_bound<W: Weight>(flow: &Flow<W>, beta_tilde_min: f64) -> Result<f64> {
    if flow.paths.iter().any(|p| p.len() % 2 == 0) {
        return Err(Error::domain("odd-flow bound needs odd-length paths only"));
    }
    let (a, _) = flow.congestion()?;
    Ok(odd_bound_from_a(a.to_f64(), beta_tilde_min))
}

pub fn odd_bound_from_a(a: f64, beta_tilde_min: f64) -> f64 {
    -1.0 + (1.0 + beta_tilde_min) / a
}

/// Word-length distances from `e` in the Cayley graph, by rank.
pub fn cayley_distances(n: usize, generators: &[Permutation]) -> Result<Vec<Option<u32>>> {
    if n > DENSE_CAP {
        return Err(Error::capacity(format!("breadth-first search supports n <= {DENSE_CAP}, got {n}")));
    }
    let size = factorial(n)? as usize;
    let mut dist = vec![None; size];
    dist[0] = Some(0);
    let mut queue = VecDeque::from([Permutation::identity(n)]);
    while let Some(x) = queue.pop_front() {
        let d = dist[rank_zero_based(x.as_zero_based()) as usize].expect("visited");
        for s in generators {
            let y = x.compose_unchecked(s);
            let r = rank_zero_based(y.as_zero_based()) as usize;
            if dist[r].is_none() {
                dist[r] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    Ok(dist)
}

/// `Σ_g d_S(e, g)² q̃(g)`, a lower bound on `A(η)` for every `(q̃, q)`-flow.
pub fn congestion_lower_bound<W: Weight>(target: &SparseMeasure<W>, generators: &[Permutation]) -> Result<W> {
    let dist = cayley_distances(target.n(), generators)?;
    let mut total = W::zero();
    for (g, w) in target.atoms() {
        let d = dist[g.rank()?.0 as usize].ok_or_else(|| Error::Unreachable(g.to_string()))?;
        total = total + w.clone() * W::from_ratio((d * d) as i64, 1);
    }
    Ok(total)
}

/// Right-multiplication index tables: `table[s][x] = rank(x·s)`.
fn right_tables<W: Weight>(q: &SparseMeasure<W>) -> Result<Vec<(f64, Vec<u32>)>> {
    if q.n() > DENSE_CAP {
        return Err(Error::capacity(format!("dense forms support n <= {DENSE_CAP}, got {}", q.n())));
    }
    let elements: Vec<Permutation> = Permutation::all(q.n()).collect();
    Ok(q.atoms()
        .map(|(s, w)| {
            let idx = elements.iter().map(|x| rank_zero_based(x.compose_unchecked(s).as_zero_based()) as u32).collect();
            (w.to_f64(), idx)
        })
        .collect())
}

fn check_len(n: usize, f: &[f64]) -> Result<()> {
    let size = factorial(n)? as usize;
    if f.len() != size {
        return Err(Error::domain(format!("function has {} values, S_{n} has {size} elements", f.len())));
    }
    Ok(())
}

/// `E_q(f, f) = (1/(2|G|)) Σ_{x,y} |f(xy) − f(x)|² q(y)`, `f` indexed by rank.
pub fn dirichlet_form<W: Weight>(f: &[f64], q: &SparseMeasure<W>) -> Result<f64> {
    check_len(q.n(), f)?;
    let tables = right_tables(q)?;
    let terms = tables.iter().flat_map(|(w, idx)| {
        f.iter().zip(idx).map(move |(&fx, &xy)| {
            let d = f[xy as usize] - fx;
            w * d * d
        })
    });
    Ok(compensated_sum(terms) / (2.0 * f.len() as f64))
}

/// `⟨(I − Q)f, f⟩` under the uniform measure, `Qf(x) = Σ_y f(xy) q(y)`.
pub fn operator_form<W: Weight>(f: &[f64], q: &SparseMeasure<W>) -> Result<f64> {
    check_len(q.n(), f)?;
    let tables = right_tables(q)?;
    let terms = (0..f.len()).map(|x| {
        let qf: f64 = tables.iter().map(|(w, idx)| w * f[idx[x] as usize]).sum();
        (f[x] - qf) * f[x]
    });
    Ok(compensated_sum(terms) / f.len() as f64)
}

/// Seeded random functions with values uniform in `[−1, 1]`.
pub fn random_function(n: usize, seed: u64, index: u64) -> Result<Vec<f64>> {
    let size = factorial(n)? as usize;
    let mut rng = stream(seed, Purpose::Functions, index);
    Ok((0..size).map(|_| rng.random_range(-1.0..=1.0)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub flow: String,
    pub a: f64,
    pub functions: u64,
    pub violations: u64,
    /// Smallest `A·E_q(f,f) − E_target(f,f)`.
    pub min_slack: f64,
}

/// Checks `E_target(f, f) ≤ A(η)·E_q(f, f)` on seeded random functions.
pub fn dirichlet_comparison<W: Weight>(flow: &Flow<W>, functions: u64, seed: u64) -> Result<ComparisonReport> {
    let (a, _) = flow.congestion()?;
    let a = a.to_f64();
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    for i in 0..functions {
        let f = random_function(flow.n(), seed, i)?;
        let lhs = dirichlet_form(&f, &flow.target)?;
        let rhs = a * dirichlet_form(&f, &flow.q)?;
        let slack = rhs - lhs;
        if slack < -1e-12 * rhs.abs().max(1.0) {
            violations += 1;
        }
        min_slack = min_slack.min(slack);
    }
    Ok(ComparisonReport { flow: flow.name.clone(), a, functions, violations, min_slack })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonBound {
    pub n: usize,
    pub k: usize,
    pub a: f64,
    /// `T₂` of the reference walk (the flow's target measure).
    pub reference_t2: usize,
    pub beta_minus: f64,
    pub terms: [f64; 3],
    pub bound: f64,
    /// Exact `T₂` of the compared walk.
    pub t2: usize,
    pub holds: bool,
    pub slack: f64,
}

/// `T₂(q) ≤ max{A·T₂(q_ref), A log|G|, 1/(−log β_−)}` for a `(q_ref, q)`-flow,
/// with the third term taken as zero when `β_− = 0`.
pub fn comparison_bound<W: Weight>(flow: &Flow<W>, k: usize) -> Result<ComparisonBound> {
    let n = flow.n();
    let (a, _) = flow.congestion()?;
    let a = a.to_f64();
    let horizon = 100_000;
    let reference_t2 = first_mixing(&flow.target, horizon)?;
    let t2 = first_mixing(&flow.q, horizon)?;
    let beta_minus = spectrum(&flow.q, false)?.beta_minus();
    let third = if beta_minus > 0.0 { 1.0 / -beta_minus.ln() } else { 0.0 };
    let log_g = (1..=n).map(|i| (i as f64).ln()).sum::<f64>();
    let terms = [a * reference_t2 as f64, a * log_g, third];
    let bound = terms.iter().copied().fold(0.0, f64::max);
    Ok(ComparisonBound {
        n,
        k,
        a,
        reference_t2,
        beta_minus,
        terms,
        bound,
        t2,
        holds: t2 as f64 <= bound,
        slack: bound - t2 as f64,
    })
}

fn first_mixing<W: Weight>(q: &SparseMeasure<W>, horizon: usize) -> Result<usize> {
    let mut m = 64;
    loop {
        if let Some(t) = Profile::compute::<f64, W>(q, m)?.mixing_time(Metric::L2) {
            return Ok(t);
        }
        if m >= horizon {
            return Err(Error::Numeric { message: format!("no L2 mixing within {horizon} steps"), trace: Vec::new() });
        }
        m *= 4;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{build_flow_general, build_odd_flow, Alphabet, WeightMode};
    use crate::scalar::ratio;
    use num_rational::BigRational;

    type R = BigRational;

    #[test]
    fn odd_bound_formula() {
        assert_eq!(odd_bound_from_a(2.0, 1.0), 0.0);
        let f = build_odd_flow::<R>(5, 3).unwrap();
        let b = odd_flow_eigenvalue_bound(&f, 1.0).unwrap();
        assert!(b >= -35.0 / 36.0);
        let even = build_flow_general::<R>(4, 2, WeightMode::Rescaled).unwrap();
        assert!(odd_flow_eigenvalue_bound(&even, 1.0).is_err());
    }

    #[test]
    fn lower_bound_on_generators() {
        let q = SparseMeasure::<R>::top_to_bottom_k(5, 3).unwrap().symmetrize();
        let gens: Vec<_> = q.support().cloned().collect();
        assert_eq!(congestion_lower_bound(&q, &gens).unwrap(), ratio(1, 1) - q.weight(&Permutation::identity(5)));
        let q = SparseMeasure::<R>::top_to_bottom_k(4, 4).unwrap().symmetrize();
        let gens: Vec<_> = q.support().cloned().collect();
        assert_eq!(congestion_lower_bound(&q, &gens).unwrap(), ratio(3, 4));
    }

    #[test]
    fn unreachable_target() {
        let n = 4;
        let target = SparseMeasure::<R>::random_transposition(n).unwrap();
        let gens = vec![Permutation::cycle(4, n).unwrap(), Permutation::cycle(4, n).unwrap().inverse()];
        assert!(matches!(congestion_lower_bound(&target, &gens), Err(Error::Unreachable(_))));
    }

    #[test]
    fn forms_agree() {
        let q = SparseMeasure::<f64>::top_to_bottom_k(5, 3).unwrap().symmetrize();
        for i in 0..5 {
            let f = random_function(5, 9, i).unwrap();
            let a = dirichlet_form(&f, &q).unwrap();
            let b = operator_form(&f, &q).unwrap();
            assert!(a >= 0.0 && (a - b).abs() < 1e-10);
        }
        assert_eq!(dirichlet_form(&vec![3.0; 120], &q).unwrap(), 0.0);
    }

    #[test]
    fn alphabet_of_flow_matches_q() {
        let f = build_flow_general::<R>(5, 3, WeightMode::Rescaled).unwrap();
        assert_eq!(f.alphabet, Alphabet::from_support(&f.q));
    }

    #[test]
    fn comparison_bound_holds_at_five() {
        let flow = build_flow_general::<R>(5, 3, WeightMode::Rescaled).unwrap();
        let r = comparison_bound(&flow, 3).unwrap();
        assert!(r.holds && r.slack > 0.0, "{r:?}");
    }
}
