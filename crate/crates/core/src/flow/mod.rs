//! Paths and flows in Cayley graphs, and the congestion constant `A(η)`.
//!
//! A path is a word over a symmetric generating set `S`; it starts at `e` and
//! its endpoint is the left-to-right product of its letters, so each letter
//! is a right multiplication.

mod analysis;
mod builders;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use analysis::*;
pub use builders::*;

use crate::error::{Error, Result};
use crate::group::Permutation;
use crate::measure::SparseMeasure;
use crate::scalar::Weight;

/// Human-readable name of a generator: `s5`, `s5inv`, `t1_5`, `e`, or the
/// one-line form.
pub fn generator_name(g: &Permutation) -> String {
    let n = g.n();
    if g.is_identity() {
        return "e".into();
    }
    for l in 2..=n {
        let s = Permutation::cycle(l, n).expect("l in range");
        if *g == s {
            return format!("s{l}");
        }
        if *g == s.inverse() {
            return format!("s{l}inv");
        }
    }
    let moved: Vec<usize> = (1..=n).filter(|&i| g.at(i) != i).collect();
    if moved.len() == 2 {
        return format!("t{}_{}", moved[0], moved[1]);
    }
    g.to_string()
}

/// A symmetric set of generators, indexed by letter.
#[derive(Clone, Debug, PartialEq)]
pub struct Alphabet {
    n: usize,
    letters: Vec<Permutation>,
    names: Vec<String>,
    index: BTreeMap<Permutation, u16>,
}

impl Alphabet {
    /// The support of `q` closed under inverses, in rank order.
    pub fn from_support<W: Weight>(q: &SparseMeasure<W>) -> Self {
        let mut set: Vec<Permutation> = q.support().cloned().collect();
        set.extend(q.support().map(Permutation::inverse));
        set.sort();
        set.dedup();
        let index = set.iter().enumerate().map(|(i, g)| (g.clone(), i as u16)).collect();
        let names = set.iter().map(generator_name).collect();
        Alphabet { n: q.n(), letters: set, names, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, g: &Permutation) -> Result<u16> {
        self.index
            .get(g)
            .copied()
            .ok_or_else(|| Error::domain(format!("{} is not a generator", generator_name(g))))
    }

    pub fn element(&self, letter: u16) -> &Permutation {
        &self.letters[letter as usize]
    }

    pub fn name(&self, letter: u16) -> &str {
        &self.names[letter as usize]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.letters
    }

    /// Encodes a word of group elements; every element must be a generator.
    pub fn encode(&self, word: &[Permutation]) -> Result<Vec<u16>> {
        word.iter().map(|g| self.letter(g)).collect()
    }

    /// Left-to-right product of a word.
    pub fn endpoint(&self, word: &[u16]) -> Permutation {
        let mut g = Permutation::identity(self.n);
        for &s in word {
            g = g.compose_unchecked(self.element(s));
        }
        g
    }
}

/// Product of a word of generators in written order.
pub fn path_endpoint(alphabet: &Alphabet, word: &[Permutation]) -> Result<Permutation> {
    Ok(alphabet.endpoint(&alphabet.encode(word)?))
}

/// One weighted path; the weight is shared through a weight class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyPath {
    pub word: Vec<u16>,
    /// The element the builder intends the word to reach.
    pub target: Permutation,
    pub class: u32,
}

impl CayleyPath {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

/// A weighted set of paths from `e`, meant to reproduce `target` (Definition:
/// the mass of paths ending at `y` equals `target(y)`), measured against the
/// comparison measure `q` whose support supplies the generators.
#[derive(Clone, Debug)]
pub struct Flow<W: Weight> {
    pub name: String,
    pub alphabet: Alphabet,
    pub q: SparseMeasure<W>,
    pub target: SparseMeasure<W>,
    pub weights: Vec<W>,
    pub paths: Vec<CayleyPath>,
    pub odd_only: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndpointMismatch {
    pub word: Vec<String>,
    pub intended: Permutation,
    pub actual: Permutation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginalMismatch {
    pub element: Permutation,
    pub flow_mass: String,
    pub target_mass: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowVerification {
    pub paths: usize,
    pub endpoint_mismatches: Vec<EndpointMismatch>,
    pub marginal_mismatches: Vec<MarginalMismatch>,
    pub parity_violations: usize,
}

impl FlowVerification {
    pub fn ok(&self) -> bool {
        self.endpoint_mismatches.is_empty() && self.marginal_mismatches.is_empty() && self.parity_violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorLoad {
    pub generator: String,
    pub q: String,
    /// `Σ_δ |δ| N(s, δ) η(δ)`.
    pub load: String,
    /// `load / q(s)`.
    pub term: String,
    pub term_f64: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowReport {
    pub flow: String,
    pub n: usize,
    pub paths: usize,
    pub max_length: usize,
    pub a: String,
    pub a_f64: f64,
    pub generators: Vec<GeneratorLoad>,
}

impl<W: Weight> Flow<W> {
    pub fn n(&self) -> usize {
        self.alphabet.n()
    }

    pub fn weight(&self, path: &CayleyPath) -> &W {
        &self.weights[path.class as usize]
    }

    pub fn max_length(&self) -> usize {
        self.paths.iter().map(CayleyPath::len).max().unwrap_or(0)
    }

    pub fn total_mass(&self) -> W {
        self.paths.iter().fold(W::zero(), |acc, p| acc + self.weight(p).clone())
    }

    /// Recomputes every endpoint and compares marginals with the target.
    pub fn verify(&self) -> FlowVerification {
        let mut endpoint_mismatches = Vec::new();
        let mut mass: BTreeMap<Permutation, W> = BTreeMap::new();
        for p in &self.paths {
            let actual = self.alphabet.endpoint(&p.word);
            if actual != p.target {
                endpoint_mismatches.push(EndpointMismatch {
                    word: self.word_names(p),
                    intended: p.target.clone(),
                    actual: actual.clone(),
                });
            }
            let w = self.weight(p).clone();
            match mass.get_mut(&actual) {
                Some(m) => *m = m.clone() + w,
                None => {
                    mass.insert(actual, w);
                }
            }
        }
        let mut marginal_mismatches = Vec::new();
        let elements: std::collections::BTreeSet<&Permutation> = mass.keys().chain(self.target.support()).collect();
        for g in elements {
            let have = mass.get(g).cloned().unwrap_or_else(W::zero);
            let want = self.target.weight(g);
            if !have.weight_eq(&want) {
                marginal_mismatches.push(MarginalMismatch {
                    element: g.clone(),
                    flow_mass: have.render(),
                    target_mass: want.render(),
                });
            }
        }
        let parity_violations = if self.odd_only { self.paths.iter().filter(|p| p.len() % 2 == 0).count() } else { 0 };
        FlowVerification { paths: self.paths.len(), endpoint_mismatches, marginal_mismatches, parity_violations }
    }

    pub fn word_names(&self, p: &CayleyPath) -> Vec<String> {
        p.word.iter().map(|&s| self.alphabet.name(s).to_string()).collect()
    }

    /// Per-letter `Σ_δ |δ| N(s, δ) η(δ)`.
    pub fn loads(&self) -> Vec<W> {
        let letters = self.alphabet.len();
        let mut counts = vec![vec![0u64; letters]; self.weights.len()];
        let mut scratch = vec![0u64; letters];
        for p in &self.paths {
            for &s in &p.word {
                scratch[s as usize] += 1;
            }
            let len = p.len() as u64;
            let row = &mut counts[p.class as usize];
            for &s in &p.word {
                if scratch[s as usize] > 0 {
                    row[s as usize] += len * scratch[s as usize];
                    scratch[s as usize] = 0;
                }
            }
        }
        (0..letters)
            .map(|s| {
                counts.iter().zip(&self.weights).fold(W::zero(), |acc, (row, w)| {
                    if row[s] == 0 {
                        acc
                    } else {
                        acc + w.clone() * W::from_ratio(row[s] as i64, 1)
                    }
                })
            })
            .collect()
    }

    /// `A(η) = max_s load(s)/q(s)` with the per-generator breakdown.
    pub fn congestion(&self) -> Result<(W, FlowReport)> {
        let loads = self.loads();
        let mut a = W::zero();
        let mut generators = Vec::new();
        for (s, load) in loads.into_iter().enumerate() {
            let g = self.alphabet.element(s as u16);
            let qs = self.q.weight(g);
            if qs.is_zero() {
                if !load.is_zero() {
                    return Err(Error::domain(format!(
                        "flow uses {} which has zero comparison weight",
                        generator_name(g)
                    )));
                }
                continue;
            }
            let term = load.clone() / qs.clone();
            if term > a {
                a = term.clone();
            }
            generators.push(GeneratorLoad {
                generator: self.alphabet.name(s as u16).to_string(),
                q: qs.render(),
                load: load.render(),
                term_f64: term.to_f64(),
                term: term.render(),
            });
        }
        let report = FlowReport {
            flow: self.name.clone(),
            n: self.n(),
            paths: self.paths.len(),
            max_length: self.max_length(),
            a: a.render(),
            a_f64: a.to_f64(),
            generators,
        };
        Ok((a, report))
    }

    /// JSON form `{target, q, paths: [{word, weight}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let paths: Vec<serde_json::Value> = self
            .paths
            .iter()
            .map(|p| serde_json::json!({"word": self.word_names(p), "weight": self.weight(p).render()}))
            .collect();
        serde_json::json!({
            "target": serde_json::to_value(&self.target).expect("measure serializes"),
            "q": serde_json::to_value(&self.q).expect("measure serializes"),
            "paths": paths,
        })
    }
}
