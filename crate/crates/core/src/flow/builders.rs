//! The explicit flows: odd loops at the identity, transposition flows over
//! the top to bottom-k generators, and the Rudvalis-generator flow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Permutation;
use crate::measure::SparseMeasure;
use crate::scalar::Weight;

use super::{Alphabet, CayleyPath, Flow};

/// How the transposition flows weight their paths.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// Twice the printed weights, plus an empty path carrying `1/n` at `e`;
    /// marginals then equal the random transposition measure exactly.
    #[default]
    Rescaled,
    /// `1/n²` per transposition path and no identity path.
    Printed,
}

/// Accumulates paths, interning weights into classes.
struct Builder<W: Weight> {
    alphabet: Alphabet,
    weights: Vec<W>,
    paths: Vec<CayleyPath>,
}

impl<W: Weight> Builder<W> {
    fn new(alphabet: Alphabet) -> Self {
        Builder { alphabet, weights: Vec::new(), paths: Vec::new() }
    }

    fn class(&mut self, w: &W) -> u32 {
        match self.weights.iter().position(|x| x == w) {
            Some(i) => i as u32,
            None => {
                self.weights.push(w.clone());
                (self.weights.len() - 1) as u32
            }
        }
    }

    fn push(&mut self, word: Vec<u16>, target: Permutation, w: &W) {
        let class = self.class(w);
        self.paths.push(CayleyPath { word, target, class });
    }

    fn finish(self, name: &str, q: SparseMeasure<W>, target: SparseMeasure<W>, odd_only: bool) -> Flow<W> {
        Flow { name: name.into(), alphabet: self.alphabet, q, target, weights: self.weights, paths: self.paths, odd_only }
    }
}

/// Letters for `σ_l` and `σ_l⁻¹`.
struct Sigma {
    fwd: Vec<u16>,
    inv: Vec<u16>,
}

impl Sigma {
    fn new(alphabet: &Alphabet, n: usize, range: std::ops::RangeInclusive<usize>) -> Result<Self> {
        let mut fwd = vec![u16::MAX; n + 1];
        let mut inv = vec![u16::MAX; n + 1];
        for l in range {
            let s = Permutation::cycle(l, n)?;
            fwd[l] = alphabet.letter(&s)?;
            inv[l] = alphabet.letter(&s.inverse())?;
        }
        Ok(Sigma { fwd, inv })
    }

    fn pow(&self, l: usize, e: usize, out: &mut Vec<u16>) {
        out.extend(std::iter::repeat_n(self.fwd[l], e));
    }

    fn inv_pow(&self, l: usize, e: usize, out: &mut Vec<u16>) {
        out.extend(std::iter::repeat_n(self.inv[l], e));
    }

    /// `σ_i⁻¹ σ_j σ_{j−1}⁻¹ σ_i`, a path to `(i j)`.
    fn short(&self, i: usize, j: usize, out: &mut Vec<u16>) {
        out.extend([self.inv[i], self.fwd[j], self.inv[j - 1], self.fwd[i]]);
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k <= 1 || k > n {
        return Err(Error::domain(format!("need n >= k > 1, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// Odd flow to `δ_e` over `S = supp q̃_{n,k}`: the loops `σ_l^l` and
/// `(σ_l⁻¹)^l` for odd `l ∈ [n−k+1, n]`, weighted `∝ 1/l²`.
pub fn build_odd_flow<W: Weight>(n: usize, k: usize) -> Result<Flow<W>> {
    check_nk(n, k)?;
    let q = SparseMeasure::<W>::top_to_bottom_k(n, k)?.symmetrize();
    let alphabet = Alphabet::from_support(&q);
    let sigma = Sigma::new(&alphabet, n, n - k + 1..=n)?;
    let odd: Vec<usize> = (n - k + 1..=n).filter(|l| l % 2 == 1).collect();
    if odd.is_empty() {
        return Err(Error::domain("no odd cycle length in range"));
    }
    let norm = odd.iter().fold(W::zero(), |acc, &m| acc + W::from_ratio(1, (m * m) as i64));
    let c = W::one() / (W::from_ratio(2, 1) * norm);
    let mut b = Builder::new(alphabet);
    let e = Permutation::identity(n);
    for &l in &odd {
        let w = c.clone() * W::from_ratio(1, (l * l) as i64);
        let mut up = Vec::new();
        sigma.pow(l, l, &mut up);
        let mut down = Vec::new();
        sigma.inv_pow(l, l, &mut down);
        if up == down {
            // σ_1 = e: both directions are the same path.
            b.push(up, e.clone(), &(w.clone() + w));
        } else {
            b.push(up, e.clone(), &w);
            b.push(down, e.clone(), &w);
        }
    }
    let target = SparseMeasure::delta_e(n);
    Ok(b.finish(&format!("odd({n},{k})"), q, target, true))
}

fn rt_weights<W: Weight>(n: usize, mode: WeightMode) -> (W, Option<W>) {
    let nn = (n * n) as i64;
    match mode {
        WeightMode::Rescaled => (W::from_ratio(2, nn), Some(W::from_ratio(1, n as i64))),
        WeightMode::Printed => (W::from_ratio(1, nn), None),
    }
}

/// One path per transposition over `S = {σ_l^{±1} : l > C}`, `k = n − C`,
/// targeting the random transposition measure. Needs `n > 2C + 2`.
pub fn build_flow_large_k<W: Weight>(n: usize, c: usize, mode: WeightMode) -> Result<Flow<W>> {
    if n <= 2 * c + 2 {
        return Err(Error::domain(format!("need n > 2C + 2, got n = {n}, C = {c}")));
    }
    let k = n - c;
    let q = SparseMeasure::<W>::top_to_bottom_k(n, k)?.symmetrize();
    let alphabet = Alphabet::from_support(&q);
    let s = Sigma::new(&alphabet, n, c + 1..=n)?;
    let (w, empty) = rt_weights::<W>(n, mode);
    let mut b = Builder::new(alphabet);
    for i in 1..=n {
        for j in i + 1..=n {
            let mut word = Vec::new();
            if i > c {
                s.short(i, j, &mut word);
            } else {
                let e = c - i + 1;
                let outer = if j <= n - c { n } else { n - c };
                let (a, b2) = if j <= n - c { (j + c - i + 1, j + c - i) } else { (j, j - 1) };
                s.inv_pow(outer, e, &mut word);
                word.extend([s.inv[c + 1], s.fwd[a], s.inv[b2], s.fwd[c + 1]]);
                s.pow(outer, e, &mut word);
            }
            b.push(word, Permutation::transposition(i, j, n)?, &w);
        }
    }
    if let Some(e) = empty {
        b.push(Vec::new(), Permutation::identity(n), &e);
    }
    let target = SparseMeasure::random_transposition(n)?;
    Ok(b.finish(&format!("large-k({n},C={c})"), q, target, false))
}

/// Transposition flow for any `k`: one short path when `j > i > n − k`,
/// otherwise `k − 1` paths conjugated through `σ_l`, `n − k < l < n`.
pub fn build_flow_general<W: Weight>(n: usize, k: usize, mode: WeightMode) -> Result<Flow<W>> {
    check_nk(n, k)?;
    let q = SparseMeasure::<W>::top_to_bottom_k(n, k)?.symmetrize();
    let alphabet = Alphabet::from_support(&q);
    let s = Sigma::new(&alphabet, n, n - k + 1..=n)?;
    let (w_short, empty) = rt_weights::<W>(n, mode);
    let w_long = w_short.clone() / W::from_ratio((k - 1) as i64, 1);
    let mut b = Builder::new(alphabet);
    let m = n - k;
    for i in 1..=n {
        for j in i + 1..=n {
            let target = Permutation::transposition(i, j, n)?;
            if i > m {
                let mut word = Vec::new();
                s.short(i, j, &mut word);
                b.push(word, target, &w_short);
                continue;
            }
            for l in m + 1..n {
                let mut word = Vec::new();
                if j > l {
                    s.inv_pow(l, l - i, &mut word);
                    s.short(l, j, &mut word);
                    s.pow(l, l - i, &mut word);
                } else {
                    s.inv_pow(l, l - j, &mut word);
                    s.short(l, l + 1, &mut word);
                    s.inv_pow(l, j - i, &mut word);
                    s.short(l, l + 1, &mut word);
                    s.pow(l, j - i, &mut word);
                    s.short(l, l + 1, &mut word);
                    s.pow(l, l - j, &mut word);
                }
                b.push(word, target.clone(), &w_long);
            }
        }
    }
    if let Some(e) = empty {
        b.push(Vec::new(), Permutation::identity(n), &e);
    }
    let target = SparseMeasure::random_transposition(n)?;
    Ok(b.finish(&format!("general({n},{k})"), q, target, false))
}

/// Flow from `q̃_{n,k}` to the generators `{σ_n^{±1}, (1 n)}`:
/// `σ_l = σ_n (σ_n⁻¹ τ)^{n−l} σ_n^{n−l}`, and the inverse word for `σ_l⁻¹`.
pub fn build_flow_rudvalis<W: Weight>(n: usize, k: usize) -> Result<Flow<W>> {
    check_nk(n, k)?;
    let q = SparseMeasure::<W>::rudvalis_symmetric(n)?;
    let target = SparseMeasure::<W>::top_to_bottom_k(n, k)?.symmetrize();
    let alphabet = Alphabet::from_support(&q);
    let sn = Permutation::cycle(n, n)?;
    let fwd = alphabet.letter(&sn)?;
    let inv = alphabet.letter(&sn.inverse())?;
    let tau = alphabet.letter(&Permutation::transposition(1, n, n)?)?;
    let w = W::from_ratio(1, 2 * k as i64);
    let mut b = Builder::new(alphabet);
    for l in n - k + 1..=n {
        let r = n - l;
        let mut word = vec![fwd];
        for _ in 0..r {
            word.extend([inv, tau]);
        }
        word.extend(std::iter::repeat_n(fwd, r));
        let mut back = Vec::with_capacity(word.len());
        for &s in word.iter().rev() {
            back.push(if s == fwd { inv } else if s == inv { fwd } else { s });
        }
        let sl = Permutation::cycle(l, n)?;
        b.push(word, sl.clone(), &w);
        b.push(back, sl.inverse(), &w);
    }
    Ok(b.finish(&format!("rudvalis({n},{k})"), q, target, false))
}
