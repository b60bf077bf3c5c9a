//! Spectra of symmetric walks via dense symmetric eigendecomposition.

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{factorial, rank_zero_based, Permutation};
use crate::measure::SparseMeasure;
use crate::scalar::{ratio, Weight};

/// Largest `n` diagonalized by default (720 states).
pub const EIGEN_CAP: usize = 6;
/// Largest `n` reachable with the opt-in flag (5040 states).
pub const EIGEN_CAP_LARGE: usize = 7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub beta_min: f64,
    /// Largest eigenvalue after removing one copy of the top eigenvalue.
    pub beta_1: f64,
    pub gap: f64,
}

/// Transition matrix `M(x, y) = q(x⁻¹y)` in rank order.
pub fn transition_matrix<W: Weight>(q: &SparseMeasure<W>) -> Result<DMatrix<f64>> {
    let size = factorial(q.n())? as usize;
    let mut m = DMatrix::<f64>::zeros(size, size);
    for (x_idx, x) in Permutation::all(q.n()).enumerate() {
        for (s, w) in q.atoms() {
            let y = rank_zero_based(x.compose_unchecked(s).as_zero_based()) as usize;
            m[(x_idx, y)] += w.to_f64();
        }
    }
    Ok(m)
}

/// Full spectrum of a symmetric measure. `allow_large` admits `n = 7`.
pub fn spectrum<W: Weight>(q: &SparseMeasure<W>, allow_large: bool) -> Result<SpectrumReport> {
    let cap = if allow_large { EIGEN_CAP_LARGE } else { EIGEN_CAP };
    if q.n() > cap {
        return Err(Error::capacity(format!("spectrum supports n <= {cap}, got {}", q.n())));
    }
    if !q.is_symmetric() {
        return Err(Error::domain("spectrum needs a symmetric measure"));
    }
    let m = transition_matrix(q)?;
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let top = *eigenvalues.last().expect("nonempty");
    if (top - 1.0).abs() > 1e-10 {
        return Err(Error::Numeric {
            message: format!("top eigenvalue {top} differs from 1"),
            trace: Vec::new(),
        });
    }
    let beta_1 = if eigenvalues.len() > 1 { eigenvalues[eigenvalues.len() - 2] } else { f64::NAN };
    Ok(SpectrumReport { n: q.n(), beta_min: eigenvalues[0], beta_1, gap: 1.0 - beta_1, eigenvalues })
}

impl SpectrumReport {
    /// `d_{π,2}(q^m)² = Σ β_i^{2m}` over all eigenvalues but one copy of the top.
    pub fn l2_squared(&self, m: u32) -> f64 {
        let k = self.eigenvalues.len() - 1;
        self.eigenvalues[..k].iter().map(|b| b.powi(2 * m as i32)).sum()
    }

    /// `max(0, −β_min)`.
    pub fn beta_minus(&self) -> f64 {
        (-self.beta_min).max(0.0)
    }
}

/// `−1 + (k − 1)/(k(n − k + 2)(n + 1))`.
pub fn beta_min_formula(n: usize, k: usize) -> BigRational {
    let (n, k) = (n as i64, k as i64);
    ratio(k - 1, k * (n - k + 2) * (n + 1)) - ratio(1, 1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaMinCheck {
    pub n: usize,
    pub k: usize,
    pub beta_min: f64,
    pub formula: String,
    pub formula_value: f64,
    pub holds: bool,
}

/// Compares the least eigenvalue of `q̃_{n,k}` with the closed-form bound.
pub fn beta_min_bound_check(n: usize, k: usize) -> Result<BetaMinCheck> {
    let q = SparseMeasure::<BigRational>::top_to_bottom_k(n, k)?.symmetrize();
    let s = spectrum(&q, false)?;
    let formula = beta_min_formula(n, k);
    let formula_value = formula.to_f64();
    Ok(BetaMinCheck {
        n,
        k,
        beta_min: s.beta_min,
        formula: formula.render(),
        formula_value,
        holds: s.beta_min >= formula_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::dense::DenseDistribution;

    type Q = SparseMeasure<f64>;

    #[test]
    fn two_cards() {
        let s = spectrum(&Q::top_to_bottom_k(2, 2).unwrap(), false).unwrap();
        assert!((s.eigenvalues[0]).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_nonsymmetric_and_large() {
        assert!(matches!(spectrum(&Q::top_to_bottom_k(4, 3).unwrap(), false), Err(Error::Domain(_))));
        let big = Q::top_to_bottom_k(7, 3).unwrap().symmetrize();
        assert!(matches!(spectrum(&big, false), Err(Error::Capacity(_))));
    }

    #[test]
    fn formula_values() {
        assert_eq!(beta_min_formula(5, 3), ratio(-35, 36));
        for n in 2..10 {
            let expected = ratio((n - 1) as i64, (2 * n * (n + 1)) as i64) - ratio(1, 1);
            assert_eq!(beta_min_formula(n, n), expected);
        }
    }

    #[test]
    fn l2_from_spectrum_matches_convolution() {
        let q = Q::top_to_bottom_k(4, 2).unwrap().symmetrize();
        let s = spectrum(&q, false).unwrap();
        assert!((s.l2_squared(0) - 23.0).abs() < 1e-9);
        let mut d = DenseDistribution::<f64>::delta_e(4).unwrap();
        for m in 1..=10 {
            d = d.convolve_step(&q).unwrap();
            let direct = d.lp_distance(2).unwrap().powi(2);
            assert!((s.l2_squared(m) - direct).abs() < 1e-8, "m = {m}");
        }
        assert!(s.l2_squared(10_000) < 1e-12);
    }
}
