//! Dense probability vectors over all of `S_n`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{factorial, rank_zero_based, PermRank, Permutation};
use crate::measure::SparseMeasure;
use crate::scalar::{compensated_sum, Real, Weight};

/// Largest deck size for dense evolution (8! = 40320 states).
pub const DENSE_CAP: usize = 8;

pub(crate) fn check_dense(n: usize) -> Result<usize> {
    if n == 0 || n > DENSE_CAP {
        return Err(Error::capacity(format!("dense engine supports 1 <= n <= {DENSE_CAP}, got {n}")));
    }
    Ok(factorial(n)? as usize)
}

/// A probability vector indexed by [`PermRank`].
#[derive(Clone, Debug, PartialEq)]
pub struct DenseDistribution<T: Real> {
    n: usize,
    probs: Vec<T>,
}

impl<T: Real> DenseDistribution<T> {
    pub fn delta_e(n: usize) -> Result<Self> {
        let size = check_dense(n)?;
        let mut probs = vec![T::zero(); size];
        probs[0] = T::one();
        Ok(DenseDistribution { n, probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        let size = check_dense(n)?;
        Ok(DenseDistribution { n, probs: vec![T::one() / T::from_usize_lossy(size); size] })
    }

    pub fn from_measure<W: Weight>(q: &SparseMeasure<W>) -> Result<Self> {
        let size = check_dense(q.n())?;
        let mut probs = vec![T::zero(); size];
        for (g, w) in q.atoms() {
            probs[g.rank()?.0 as usize] = T::lit(w.to_f64());
        }
        Ok(DenseDistribution { n: q.n(), probs })
    }

    /// Builds from raw probabilities in rank order.
    pub fn from_probs(n: usize, probs: Vec<T>) -> Result<Self> {
        let size = check_dense(n)?;
        if probs.len() != size {
            return Err(Error::domain(format!("expected {size} entries, got {}", probs.len())));
        }
        Ok(DenseDistribution { n, probs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob(&self, g: &Permutation) -> Result<T> {
        Ok(self.probs[g.rank()?.0 as usize])
    }

    pub fn get(&self, r: PermRank) -> T {
        self.probs[r.0 as usize]
    }

    pub fn total_mass(&self) -> T {
        compensated_sum(self.probs.iter().copied())
    }

    /// One step of the walk: `result(g) = Σ_h d(h)·q(h⁻¹g)`.
    pub fn convolve_step<W: Weight>(&self, q: &SparseMeasure<W>) -> Result<Self> {
        Ok(StepTable::new(q)?.apply(self))
    }

    /// `½ Σ_g |d(g) − 1/n!|`.
    pub fn tv_distance(&self) -> T {
        let u = T::one() / T::from_usize_lossy(self.probs.len());
        compensated_sum(self.probs.iter().map(|&p| (p - u).abs())) * T::lit(0.5)
    }

    /// `(Σ_g |d(g)/π(g) − 1|^p π(g))^{1/p}` for `p ∈ {1, 2}`.
    pub fn lp_distance(&self, p: u32) -> Result<T> {
        let size = T::from_usize_lossy(self.probs.len());
        let dev = self.probs.iter().map(|&x| (x * size - T::one()).abs());
        match p {
            1 => Ok(compensated_sum(dev) / size),
            2 => Ok((compensated_sum(dev.map(|d| d * d)) / size).sqrt()),
            _ => Err(Error::domain(format!("L^p distance supports p in {{1, 2}}, got {p}"))),
        }
    }
}

/// Precomputed index table for repeated convolution by one measure.
///
/// Entry `s` maps each target rank `g` to the rank of `g·s⁻¹`.
pub struct StepTable<T: Real> {
    n: usize,
    columns: Vec<(T, Vec<u32>)>,
}

impl<T: Real> StepTable<T> {
    pub fn new<W: Weight>(q: &SparseMeasure<W>) -> Result<Self> {
        let n = q.n();
        check_dense(n)?;
        let elements: Vec<Permutation> = Permutation::all(n).collect();
        let columns = q
            .atoms()
            .map(|(s, w)| {
                let s_inv = s.inverse();
                let idx = elements
                    .par_iter()
                    .map(|g| rank_zero_based(g.compose_unchecked(&s_inv).as_zero_based()) as u32)
                    .collect();
                (T::lit(w.to_f64()), idx)
            })
            .collect();
        Ok(StepTable { n, columns })
    }

    pub fn apply(&self, d: &DenseDistribution<T>) -> DenseDistribution<T> {
        assert_eq!(d.n, self.n, "distribution and measure live on different groups");
        let src = &d.probs;
        let probs = (0..src.len())
            .into_par_iter()
            .map(|g| {
                let mut acc = T::zero();
                for (w, idx) in &self.columns {
                    acc = acc + *w * src[idx[g] as usize];
                }
                if acc < T::zero() && acc > T::lit(-1e-15) {
                    T::zero()
                } else {
                    acc
                }
            })
            .collect();
        DenseDistribution { n: self.n, probs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::SparseMeasure;

    type D = DenseDistribution<f64>;

    #[test]
    fn caps() {
        assert!(D::delta_e(8).is_ok());
        assert!(matches!(D::delta_e(9), Err(Error::Capacity(_))));
    }

    #[test]
    fn step_from_delta_is_the_measure() {
        let q = SparseMeasure::<f64>::top_to_bottom_k(4, 3).unwrap();
        let d = D::delta_e(4).unwrap().convolve_step(&q).unwrap();
        assert_eq!(d, D::from_measure(&q).unwrap());
    }

    #[test]
    fn uniform_is_stationary() {
        let q = SparseMeasure::<f64>::top_to_bottom_k(5, 2).unwrap();
        let u = D::uniform(5).unwrap();
        let v = u.convolve_step(&q).unwrap();
        for (a, b) in u.probs().iter().zip(v.probs()) {
            assert!((a - b).abs() < 1e-17);
        }
        assert_eq!(u.tv_distance(), 0.0);
        assert_eq!(u.lp_distance(2).unwrap(), 0.0);
    }

    #[test]
    fn two_steps_of_q33_by_word_enumeration() {
        let q = SparseMeasure::<f64>::top_to_bottom_k(3, 3).unwrap();
        let d = D::delta_e(3).unwrap().convolve_step(&q).unwrap().convolve_step(&q).unwrap();
        let mut expected = vec![0.0; 6];
        let gens: Vec<_> = q.support().cloned().collect();
        for a in &gens {
            for b in &gens {
                expected[(a * b).rank().unwrap().0 as usize] += 1.0 / 9.0;
            }
        }
        for (x, y) in d.probs().iter().zip(&expected) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn distances() {
        let d = D::delta_e(3).unwrap();
        assert!((d.tv_distance() - 5.0 / 6.0).abs() < 1e-15);
        assert!((d.lp_distance(2).unwrap() - 5f64.sqrt()).abs() < 1e-14);
        assert!((d.lp_distance(1).unwrap() - 2.0 * d.tv_distance()).abs() < 1e-14);
        assert!(d.lp_distance(3).is_err());

        let q = SparseMeasure::<f64>::top_to_bottom_k(2, 2).unwrap();
        let one = D::delta_e(2).unwrap().convolve_step(&q).unwrap();
        assert_eq!(one.tv_distance(), 0.0);
    }

    #[test]
    fn single_precision_runs() {
        let q = SparseMeasure::<f64>::top_to_bottom_k(5, 3).unwrap();
        let d = DenseDistribution::<f32>::delta_e(5).unwrap().convolve_step(&q).unwrap();
        assert!((d.total_mass() - 1.0).abs() < 1e-6);
    }
}
