//! Finitely supported probability measures on `S_n`.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::Permutation;
use crate::scalar::Weight;

/// A measure on `S_n` with finite support, keyed in rank order.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMeasure<W: Weight> {
    n: usize,
    atoms: BTreeMap<Permutation, W>,
}

impl<W: Weight> SparseMeasure<W> {
    /// Collects atoms, merging repeated elements and dropping zero weights.
    pub fn from_atoms<I>(n: usize, atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Permutation, W)>,
    {
        let mut map: BTreeMap<Permutation, W> = BTreeMap::new();
        for (g, w) in atoms {
            if g.n() != n {
                return Err(Error::domain(format!("atom {g} is not in S_{n}")));
            }
            if w < W::zero() {
                return Err(Error::domain(format!("negative weight at {g}")));
            }
            add_to(&mut map, g, w);
        }
        map.retain(|_, w| !w.is_zero());
        Ok(SparseMeasure { n, atoms: map })
    }

    /// Point mass at the identity.
    pub fn delta_e(n: usize) -> Self {
        let mut atoms = BTreeMap::new();
        atoms.insert(Permutation::identity(n), W::one());
        SparseMeasure { n, atoms }
    }

    /// Weight `1/k` on each `σ_l`, `n − k < l ≤ n`.
    pub fn top_to_bottom_k(n: usize, k: usize) -> Result<Self> {
        if k <= 1 || k > n {
            return Err(Error::domain(format!("need n >= k > 1, got n = {n}, k = {k}")));
        }
        let w = W::from_ratio(1, k as i64);
        let atoms = (n - k + 1..=n).map(|l| Ok((Permutation::cycle(l, n)?, w.clone())));
        Self::from_atoms(n, atoms.collect::<Result<Vec<_>>>()?)
    }

    /// Uniform `1/n` on the identity and `2/n²` on each transposition.
    pub fn random_transposition(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("random transposition needs n >= 2, got {n}")));
        }
        let nn = n as i64;
        let mut atoms = vec![(Permutation::identity(n), W::from_ratio(1, nn))];
        for i in 1..=n {
            for j in i + 1..=n {
                atoms.push((Permutation::transposition(i, j, n)?, W::from_ratio(2, nn * nn)));
            }
        }
        Self::from_atoms(n, atoms)
    }

    /// Uniform on `{σ_n, σ_n⁻¹, (1 n), e}`.
    pub fn rudvalis_symmetric(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("need n >= 2, got {n}")));
        }
        let s = Permutation::cycle(n, n)?;
        let quarter = W::from_ratio(1, 4);
        let atoms = [
            s.inverse(),
            s,
            Permutation::transposition(1, n, n)?,
            Permutation::identity(n),
        ]
        .into_iter()
        .map(|g| (g, quarter.clone()));
        Self::from_atoms(n, atoms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, g: &Permutation) -> W {
        self.atoms.get(g).cloned().unwrap_or_else(W::zero)
    }

    /// Atoms in rank order.
    pub fn atoms(&self) -> impl Iterator<Item = (&Permutation, &W)> {
        self.atoms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Permutation> {
        self.atoms.keys()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> W {
        self.atoms.values().fold(W::zero(), |acc, w| acc + w.clone())
    }

    /// Total mass is one (exactly for rationals, to 1e-12 for floats).
    pub fn is_probability(&self) -> bool {
        self.total_mass().weight_eq(&W::one())
    }

    /// `q*(g) = q(g⁻¹)`.
    pub fn reversal(&self) -> Self {
        SparseMeasure {
            n: self.n,
            atoms: self.atoms.iter().map(|(g, w)| (g.inverse(), w.clone())).collect(),
        }
    }

    /// `½(q + q*)`.
    pub fn symmetrize(&self) -> Self {
        let half = W::half();
        let mut atoms = BTreeMap::new();
        for (g, w) in &self.atoms {
            let hw = half.clone() * w.clone();
            add_to(&mut atoms, g.inverse(), hw.clone());
            add_to(&mut atoms, g.clone(), hw);
        }
        SparseMeasure { n: self.n, atoms }
    }

    /// `p·q + (1 − p)·δ_e` for `p ∈ (0, 1)`.
    pub fn lazy(&self, p: W) -> Result<Self> {
        if !(p > W::zero() && p < W::one()) {
            return Err(Error::domain(format!("laziness {p:?} outside (0, 1)")));
        }
        let mut atoms: BTreeMap<Permutation, W> =
            self.atoms.iter().map(|(g, w)| (g.clone(), p.clone() * w.clone())).collect();
        add_to(&mut atoms, Permutation::identity(self.n), W::one() - p);
        Ok(SparseMeasure { n: self.n, atoms })
    }

    /// `(a⋆b)(g) = Σ_h a(h)·b(h⁻¹g)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::domain(format!(
                "cannot convolve measures on S_{} and S_{}",
                self.n, other.n
            )));
        }
        let mut atoms = BTreeMap::new();
        for (h, a) in &self.atoms {
            for (s, b) in &other.atoms {
                add_to(&mut atoms, h.compose_unchecked(s), a.clone() * b.clone());
            }
        }
        atoms.retain(|_, w: &mut W| !w.is_zero());
        Ok(SparseMeasure { n: self.n, atoms })
    }

    /// `q = q*`, compared with [`Weight::weight_eq`].
    pub fn is_symmetric(&self) -> bool {
        self.atoms.iter().all(|(g, w)| self.weight(&g.inverse()).weight_eq(w))
    }

    /// Atomwise equality under [`Weight::weight_eq`], ignoring zero atoms.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.atoms.keys().chain(other.atoms.keys()).all(|g| self.weight(g).weight_eq(&other.weight(g)))
    }

    /// The same measure with weights converted to another scalar type.
    pub fn map_weights<V: Weight>(&self, f: impl Fn(&W) -> V) -> SparseMeasure<V> {
        SparseMeasure { n: self.n, atoms: self.atoms.iter().map(|(g, w)| (g.clone(), f(w))).collect() }
    }

    pub fn to_f64(&self) -> SparseMeasure<f64> {
        self.map_weights(|w| w.to_f64())
    }
}

fn add_to<W: Weight>(map: &mut BTreeMap<Permutation, W>, g: Permutation, w: W) {
    match map.get_mut(&g) {
        Some(slot) => *slot = slot.clone() + w,
        None => {
            map.insert(g, w);
        }
    }
}

#[derive(Serialize, Deserialize)]
struct AtomRepr {
    perm: Permutation,
    weight: String,
}

#[derive(Serialize, Deserialize)]
struct MeasureRepr {
    n: usize,
    atoms: Vec<AtomRepr>,
}

impl<W: Weight> Serialize for SparseMeasure<W> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MeasureRepr {
            n: self.n,
            atoms: self
                .atoms
                .iter()
                .map(|(g, w)| AtomRepr { perm: g.clone(), weight: w.render() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, W: Weight> Deserialize<'de> for SparseMeasure<W> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MeasureRepr::deserialize(d)?;
        let atoms = repr
            .atoms
            .into_iter()
            .map(|a| Ok((a.perm, W::parse_weight(&a.weight)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        SparseMeasure::from_atoms(repr.n, atoms).map_err(D::Error::custom)
    }
}
