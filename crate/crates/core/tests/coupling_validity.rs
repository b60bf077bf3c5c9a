//! Each deck of a coupled pair must be a faithful copy of its walk.

use bottomk::coupling::rng::{stream, Purpose};
use bottomk::coupling::{bottom_k_to_top_step, top_insert_couple_step, Deck, DeckPair};
use bottomk::exact::StepTable;
use bottomk::{Distribution, Measure, PermRank, Permutation};
use statrs::distribution::{ChiSquared, ContinuousCDF};

const SAMPLES: u64 = 20_000;

/// Law of `start · X_m` where `X_m` follows `q^m` from the identity.
fn exact_law(q: &Measure, start: &Permutation, m: usize) -> Vec<f64> {
    let table = StepTable::<f64>::new(q).unwrap();
    let mut d = Distribution::delta_e(q.n()).unwrap();
    for _ in 0..m {
        d = table.apply(&d);
    }
    let inv = start.inverse();
    Permutation::all(q.n()).map(|x| d.prob(&inv.compose(&x).unwrap()).unwrap()).collect()
}

fn p_value(counts: &[u64], probs: &[f64]) -> f64 {
    let total = counts.iter().sum::<u64>() as f64;
    let mut stat = 0.0;
    let mut cells = 0;
    for (&c, &p) in counts.iter().zip(probs) {
        let e = p * total;
        if e > 0.0 {
            stat += (c as f64 - e).powi(2) / e;
            cells += 1;
        } else {
            assert_eq!(c, 0, "sample in a cell of probability zero");
        }
    }
    1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat)
}

fn check(kind: &str, n: usize, k: usize, m: usize) {
    let start2 = Permutation::from_one_line(&[3, 1, 4, 2]).unwrap();
    let q = Measure::top_to_bottom_k(n, k).unwrap();
    let q = if kind == "bottom-to-top" { q.reversal() } else { q };
    let size = (1..=n).product::<usize>();
    let (mut c1, mut c2) = (vec![0u64; size], vec![0u64; size]);
    for i in 0..SAMPLES {
        let mut rng = stream(11, Purpose::Validity, i);
        let mut pair = DeckPair::new(Deck::identity(n), Deck::from_permutation(&start2));
        for _ in 0..m {
            if kind == "bottom-to-top" {
                bottom_k_to_top_step(&mut pair, k, &mut rng);
            } else {
                top_insert_couple_step(&mut pair, k, &mut rng);
            }
        }
        c1[pair.deck1.to_permutation().rank().unwrap().0 as usize] += 1;
        c2[pair.deck2.to_permutation().rank().unwrap().0 as usize] += 1;
    }
    let p1 = p_value(&c1, &exact_law(&q, &Permutation::identity(n), m));
    let p2 = p_value(&c2, &exact_law(&q, &start2, m));
    assert!(p1 > 1e-4 && p2 > 1e-4, "{kind} n = {n} k = {k}: p-values {p1}, {p2}");
}

#[test]
fn bottom_to_top_marginals() {
    for k in 2..=4 {
        check("bottom-to-top", 4, k, 3);
    }
}

#[test]
fn top_insert_marginals() {
    for k in 2..=4 {
        check("top-insert", 4, k, 3);
    }
}

#[test]
fn rank_round_trip() {
    let g = Permutation::from_one_line(&[3, 1, 4, 2]).unwrap();
    assert_eq!(g.rank().unwrap().unrank(4).unwrap(), g);
    assert_eq!(PermRank(0).unrank(4).unwrap(), Permutation::identity(4));
}
