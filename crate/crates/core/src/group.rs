//! Permutations of a deck of `n` cards.
//!
//! A [`Permutation`] is stored in one-line form: the entry at position `i`
//! is the label of the card held at position `i`. Positions and labels are
//! 1-based at every public boundary and 0-based in storage.
//!
//! Products follow `(a·b)(i) = a(b(i))`. A walk step multiplies on the right,
//! so `deck · σ_l` is the deck after its top card is inserted at position `l`.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest deck size whose factorial fits in a `u64`.
pub const MAX_RANK_N: usize = 20;

const FACTORIALS: [u64; MAX_RANK_N + 1] = {
    let mut f = [1u64; MAX_RANK_N + 1];
    let mut i = 1;
    while i <= MAX_RANK_N {
        f[i] = f[i - 1] * i as u64;
        i += 1;
    }
    f
};

/// `n!` for `n <= 20`.
pub fn factorial(n: usize) -> Result<u64> {
    FACTORIALS
        .get(n)
        .copied()
        .ok_or_else(|| Error::capacity(format!("{n}! does not fit in 64 bits")))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<u16>,
}

/// Lexicographic rank of a one-line array, in `[0, n!)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PermRank(pub u64);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1 && n <= u16::MAX as usize, "deck size {n} out of range");
        Permutation { map: (0..n as u16).collect() }
    }

    /// Builds a permutation from 1-based labels, `labels[i-1] = σ(i)`.
    pub fn from_one_line(labels: &[usize]) -> Result<Self> {
        let n = labels.len();
        if n == 0 || n > u16::MAX as usize {
            return Err(Error::domain(format!("deck size {n} out of range")));
        }
        let mut seen = vec![false; n];
        let mut map = Vec::with_capacity(n);
        for &label in labels {
            if label == 0 || label > n || seen[label - 1] {
                return Err(Error::domain(format!("{labels:?} is not a permutation of 1..={n}")));
            }
            seen[label - 1] = true;
            map.push((label - 1) as u16);
        }
        Ok(Permutation { map })
    }

    pub(crate) fn from_zero_based_unchecked(map: Vec<u16>) -> Self {
        debug_assert!(is_bijection(&map));
        Permutation { map }
    }

    /// The cycle `σ_l = (1 2 … l)`: `σ_l(i) = i + 1` for `i < l`, `σ_l(l) = 1`.
    pub fn cycle(l: usize, n: usize) -> Result<Self> {
        if l == 0 || l > n {
            return Err(Error::domain(format!("cycle length {l} outside [1, {n}]")));
        }
        let mut p = Permutation::identity(n);
        p.map[..l].rotate_left(1);
        Ok(p)
    }

    /// The transposition `(i j)` of positions `i != j`.
    pub fn transposition(i: usize, j: usize, n: usize) -> Result<Self> {
        if i == j || i == 0 || j == 0 || i > n || j > n {
            return Err(Error::domain(format!("bad transposition ({i} {j}) in S_{n}")));
        }
        let mut p = Permutation::identity(n);
        p.map.swap(i - 1, j - 1);
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// Label of the card at 1-based `position`.
    pub fn at(&self, position: usize) -> usize {
        self.map[position - 1] as usize + 1
    }

    /// 1-based position of the card with 1-based `label`.
    pub fn position_of(&self, label: usize) -> usize {
        let target = (label - 1) as u16;
        self.map.iter().position(|&c| c == target).expect("label present") + 1
    }

    /// 1-based one-line form.
    pub fn one_line(&self) -> Vec<usize> {
        self.map.iter().map(|&c| c as usize + 1).collect()
    }

    pub(crate) fn as_zero_based(&self) -> &[u16] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &c)| i == c as usize)
    }

    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::domain(format!(
                "cannot compose S_{} with S_{}",
                self.n(),
                other.n()
            )));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.n(), other.n());
        Permutation { map: other.map.iter().map(|&j| self.map[j as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.n()];
        for (i, &c) in self.map.iter().enumerate() {
            inv[c as usize] = i as u16;
        }
        Permutation { map: inv }
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, exp: i64) -> Permutation {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Permutation::identity(self.n());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose_unchecked(&sq);
            }
            sq = sq.compose_unchecked(&sq);
            e >>= 1;
        }
        acc
    }

    /// In place `self ← self · σ_l`: the top card goes to position `l`.
    pub fn insert_top_at(&mut self, l: usize) {
        self.map[..l].rotate_left(1);
    }

    /// In place `self ← self · σ_l⁻¹`: the card at position `l` goes to the top.
    pub fn move_to_top(&mut self, l: usize) {
        self.map[..l].rotate_right(1);
    }

    pub fn rank(&self) -> Result<PermRank> {
        let n = self.n();
        if n > MAX_RANK_N {
            return Err(Error::capacity(format!("rank needs n <= {MAX_RANK_N}, got {n}")));
        }
        Ok(PermRank(rank_zero_based(&self.map)))
    }

    /// Every permutation of `n` cards in lexicographic (rank) order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations { next: Some(Permutation::identity(n)) }
    }
}

pub(crate) fn rank_zero_based(map: &[u16]) -> u64 {
    let n = map.len();
    let mut rank = 0u64;
    for i in 0..n {
        let smaller = map[i + 1..].iter().filter(|&&c| c < map[i]).count() as u64;
        rank += smaller * FACTORIALS[n - 1 - i];
    }
    rank
}

fn is_bijection(map: &[u16]) -> bool {
    let mut seen = vec![false; map.len()];
    map.iter().all(|&c| {
        let c = c as usize;
        c < seen.len() && !std::mem::replace(&mut seen[c], true)
    })
}

impl PermRank {
    pub fn unrank(self, n: usize) -> Result<Permutation> {
        let total = factorial(n)?;
        if self.0 >= total {
            return Err(Error::domain(format!("rank {} outside [0, {n}!)", self.0)));
        }
        let mut pool: Vec<u16> = (0..n as u16).collect();
        let mut rest = self.0;
        let mut map = Vec::with_capacity(n);
        for i in 0..n {
            let f = FACTORIALS[n - 1 - i];
            let idx = (rest / f) as usize;
            rest %= f;
            map.push(pool.remove(idx));
        }
        Ok(Permutation { map })
    }
}

pub struct AllPermutations {
    next: Option<Permutation>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_lexicographic(&mut succ.map) {
            self.next = Some(succ);
        }
        Some(current)
    }
}

fn next_lexicographic(a: &mut [u16]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Panics when the deck sizes differ; use [`Permutation::compose`] to get an
/// error instead.
impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs).expect("deck sizes match")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &c) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", c + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let labels = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::parse(s)))
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_one_line(&labels)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
