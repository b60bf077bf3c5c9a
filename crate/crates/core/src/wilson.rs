//! Eigenfunction lower bound for the `k = 3` shuffle.
//!
//! The walk is lifted to `(X⁻¹, Y)` with `Y = t mod n`. Each card carries a
//! winding coordinate `Z(j) = X_t⁻¹(j) − X_0⁻¹(j) + Y_t (mod n)`, and
//!
//! ```text
//! Ψ = Σ_j v(X⁻¹(j)) · w^{Z(j)},   w = e^{2πi/n},
//! v = (λ^{n−3}, …, λ, 1, χ₁, χ₀).
//! ```
//!
//! `Ψ` is an eigenfunction of the lifted chain with eigenvalue `λ` when `λ`
//! is a root of
//!
//! ```text
//! f(λ) = 9λⁿ − 9wλ^{n−1} + 2w²λ^{n−2} − 3w^{−2}λ² + w^{−1}λ
//! ```
//!
//! and `χ₁ = 2/(3λ − w)`, `χ₀ = 2/((3λ − w)(3λ − 2w))`.

use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupling::rng::{stream, Purpose};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Supported deck sizes for the Newton iteration.
pub const MIN_N: usize = 16;
pub const MAX_N: usize = 1024;

/// Which coefficient multiplies `λ^{n−2}` in `f`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `2w²`, obtained by eliminating `χ₀, χ₁` from the three constraints.
    #[default]
    Derived,
    /// `2w`. Its roots do not satisfy the first constraint.
    Printed,
}

pub fn unit_root<T: Real>(n: usize) -> Complex<T> {
    Complex::from_polar(T::one(), T::TAU() / T::from_usize_lossy(n))
}

/// `f(λ)` and `f′(λ)`.
pub fn wilson_poly<T: Real>(lambda: Complex<T>, n: usize, variant: Variant) -> (Complex<T>, Complex<T>) {
    let w = unit_root::<T>(n);
    let c = match variant {
        Variant::Derived => w * w,
        Variant::Printed => w,
    };
    let lit = |x: f64| Complex::new(T::lit(x), T::zero());
    let nf = n as f64;
    let l1 = lambda.powu(n as u32 - 3);
    let l2 = l1 * lambda;
    let l3 = l2 * lambda;
    let l4 = l3 * lambda;
    let w_inv = w.inv();
    let w_inv2 = w_inv * w_inv;
    let f = lit(9.0) * l4 - lit(9.0) * w * l3 + lit(2.0) * c * l2 - lit(3.0) * w_inv2 * lambda * lambda
        + w_inv * lambda;
    let df = lit(9.0 * nf) * l3 - lit(9.0 * (nf - 1.0)) * w * l2 + lit(2.0 * (nf - 2.0)) * c * l1
        - lit(6.0) * w_inv2 * lambda
        + w_inv;
    (f, df)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonResult<T> {
    pub lambda: Complex<T>,
    pub residual: T,
    /// Iterates `z_0, z_1, …` as `(re, im)`.
    pub trace: Vec<(f64, f64)>,
}

/// Newton's method on `f` from `z₀ = 1` until `|f| ≤ tol`.
pub fn newton_root<T: Real>(n: usize, tol: T, max_iter: usize, variant: Variant) -> Result<NewtonResult<T>> {
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::domain(format!("Newton iteration supports {MIN_N} <= n <= {MAX_N}, got {n}")));
    }
    let mut z = Complex::new(T::one(), T::zero());
    let mut trace = Vec::with_capacity(max_iter + 1);
    for _ in 0..=max_iter {
        trace.push((z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN)));
        let (f, df) = wilson_poly(z, n, variant);
        if f.norm() <= tol {
            return Ok(NewtonResult { lambda: z, residual: f.norm(), trace });
        }
        z = z - f / df;
        if !(z.re.is_finite() && z.im.is_finite()) {
            break;
        }
    }
    Err(Error::Numeric { message: format!("Newton iteration did not reach |f| <= {tol}"), trace })
}

/// `(χ₀, χ₁)`.
pub fn chi_values<T: Real>(lambda: Complex<T>, w: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
    let three = T::lit(3.0);
    let a = lambda * three - w;
    let b = lambda * three - w * T::lit(2.0);
    if a.norm() < T::lit(1e-12) || b.norm() < T::lit(1e-12) {
        return Err(Error::Numeric { message: "χ denominators vanish".into(), trace: Vec::new() });
    }
    let two = Complex::new(T::lit(2.0), T::zero());
    Ok((two / (a * b), two / a))
}

/// Residuals of `χ₀ + χ₁w⁻¹ + w⁻² = 3λ^{n−2}`, `χ₁/χ₀ + 2w = 3λ`, `2/χ₁ + w = 3λ`.
pub fn constraint_residuals<T: Real>(
    lambda: Complex<T>,
    chi0: Complex<T>,
    chi1: Complex<T>,
    n: usize,
) -> [T; 3] {
    let w = unit_root::<T>(n);
    let three = T::lit(3.0);
    let wi = w.inv();
    let r0 = chi0 + chi1 * wi + wi * wi - lambda.powu(n as u32 - 2) * three;
    let r1 = chi1 / chi0 + w * T::lit(2.0) - lambda * three;
    let r2 = Complex::new(T::lit(2.0), T::zero()) / chi1 + w - lambda * three;
    [r0.norm(), r1.norm(), r2.norm()]
}

/// A state of the lifted chain; positions are 1-based, windings in `[0, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedState {
    /// `pos[j − 1] = X⁻¹(j)`.
    pub pos: Vec<u32>,
    pub y: u32,
    pub z: Vec<u32>,
}

impl LiftedState {
    pub fn identity(n: usize) -> Self {
        LiftedState { pos: (1..=n as u32).collect(), y: 0, z: vec![0; n] }
    }

    /// A uniformly random deck at lift time `y`, started from the identity.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut pos: Vec<u32> = (1..=n as u32).collect();
        pos.shuffle(rng);
        let y = rng.random_range(0..n as u32);
        let nn = n as u32;
        let z = pos.iter().enumerate().map(|(j, &p)| (p + y + nn - (j as u32 + 1)) % nn).collect();
        LiftedState { pos, y, z }
    }

    pub fn n(&self) -> usize {
        self.pos.len()
    }

    /// Applies `σ_l`: the top card goes to position `l`.
    pub fn step(&self, l: u32) -> LiftedState {
        let n = self.n() as u32;
        let mut out = self.clone();
        for j in 0..self.pos.len() {
            let (p, z) = card_step(self.pos[j], self.z[j], l, n);
            out.pos[j] = p;
            out.z[j] = z;
        }
        out.y = (self.y + 1) % n;
        out
    }
}

/// One card's `(X⁻¹, Z)` under `σ_l`; `Z` advances by `Δposition + 1`.
pub fn card_step(pos: u32, z: u32, l: u32, n: u32) -> (u32, u32) {
    let new = if pos == 1 {
        l
    } else if pos <= l {
        pos - 1
    } else {
        pos
    };
    (new, (z + new + 2 * n + 1 - pos) % n)
}

/// Precomputed `v` and powers of `w`.
#[derive(Clone, Debug)]
pub struct Eigenfunction<T: Real> {
    pub n: usize,
    pub lambda: Complex<T>,
    v: Vec<Complex<T>>,
    w_pow: Vec<Complex<T>>,
}

impl<T: Real> Eigenfunction<T> {
    pub fn new(n: usize, lambda: Complex<T>, chi0: Complex<T>, chi1: Complex<T>) -> Self {
        let mut v = vec![Complex::new(T::zero(), T::zero()); n];
        let mut p = Complex::new(T::one(), T::zero());
        for x in (0..n - 2).rev() {
            v[x] = p;
            p = p * lambda;
        }
        v[n - 2] = chi1;
        v[n - 1] = chi0;
        let w_pow = (0..n)
            .map(|z| Complex::from_polar(T::one(), T::TAU() * T::from_usize_lossy(z) / T::from_usize_lossy(n)))
            .collect();
        Eigenfunction { n, lambda, v, w_pow }
    }

    /// `v(x)` for 1-based `x`.
    pub fn v(&self, x: usize) -> Complex<T> {
        self.v[x - 1]
    }

    pub fn psi_card(&self, pos: u32, z: u32) -> Complex<T> {
        self.v[pos as usize - 1] * self.w_pow[z as usize]
    }

    pub fn psi(&self, s: &LiftedState) -> Complex<T> {
        s.pos.iter().zip(&s.z).fold(Complex::new(T::zero(), T::zero()), |acc, (&p, &z)| acc + self.psi_card(p, z))
    }

    /// `|Σ_x v(x)|`, the value at the identity start.
    pub fn psi_max(&self) -> T {
        self.psi(&LiftedState::identity(self.n)).norm()
    }

    /// `(|E[Ψ'] − λΨ| / max(1, |Ψ|), E|Ψ' − Ψ|²)` at one state.
    pub fn local_stats(&self, s: &LiftedState) -> (T, T) {
        let n = self.n as u32;
        let third = T::one() / T::lit(3.0);
        let mut mean = Complex::new(T::zero(), T::zero());
        let mut sq = T::zero();
        let psi = self.psi(s);
        for l in [n - 2, n - 1, n] {
            let mut delta = Complex::new(T::zero(), T::zero());
            for j in 0..s.pos.len() {
                let (p, z) = card_step(s.pos[j], s.z[j], l, n);
                delta = delta + (self.psi_card(p, z) - self.psi_card(s.pos[j], s.z[j]));
            }
            mean = mean + (psi + delta) * third;
            sq = sq + delta.norm_sqr() * third;
        }
        let resid = (mean - psi * self.lambda).norm() / psi.norm().max(T::one());
        (resid, sq)
    }

    /// Largest residual and largest conditional second moment over sampled states.
    pub fn sample_stats(&self, samples: u64, seed: u64) -> (T, T) {
        (0..samples)
            .into_par_iter()
            .map(|i| self.local_stats(&LiftedState::random(self.n, &mut stream(seed, Purpose::Wilson, i))))
            .reduce(|| (T::zero(), T::zero()), |a, b| (a.0.max(b.0), a.1.max(b.1)))
    }
}

/// `max |E[Ψ(next)] − λΨ| / max(1, |Ψ|)` over `samples` random states.
pub fn eigenfunction_residual<T: Real>(ef: &Eigenfunction<T>, samples: u64, seed: u64) -> T {
    ef.sample_stats(samples, seed).0
}

/// Empirical `R`: the largest `E[|Ψ(next) − Ψ|²]` over `samples` random states.
pub fn r_estimate<T: Real>(ef: &Eigenfunction<T>, samples: u64, seed: u64) -> T {
    ef.sample_stats(samples, seed).1
}

/// Largest `t ≤ (log Ψ_max + ½ log(γε/(4R))) / (−log(1 − γ))`; zero when
/// the numerator is not positive.
pub fn step_bound(psi_max: f64, gamma: f64, r: f64, eps: f64) -> u64 {
    let num = psi_max.ln() + 0.5 * (gamma * eps / (4.0 * r)).ln();
    let den = -(1.0 - gamma).ln();
    if num <= 0.0 || den.is_nan() || den <= 0.0 {
        0
    } else {
        (num / den).floor() as u64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WilsonParams<T> {
    pub n: usize,
    pub lambda: Complex<T>,
    pub w: Complex<T>,
    pub chi0: Complex<T>,
    pub chi1: Complex<T>,
    pub gamma: T,
    pub psi_max: T,
    pub r: T,
    pub eps: T,
}

impl<T: Real> WilsonParams<T> {
    pub fn bound(&self) -> u64 {
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        step_bound(f(self.psi_max), f(self.gamma), f(self.r), f(self.eps))
    }

    /// Parameters of the ½-lazy chain: `λ̃ = ½ + ½λ`, `γ̃ = γ/2`, `R̃ = R/2`, same `Ψ`.
    pub fn lazy_transfer(&self) -> WilsonParams<T> {
        let half = T::lit(0.5);
        WilsonParams {
            lambda: Complex::new(half, T::zero()) + self.lambda * half,
            gamma: self.gamma * half,
            r: self.r * half,
            ..self.clone()
        }
    }

    /// The lazy bound written in the original parameters:
    /// `(log Ψ_max + ½ log(γε/(4R))) / (−log(1 − γ/2))`.
    pub fn lazy_bound_closed_form(&self) -> u64 {
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        let num = f(self.psi_max).ln() + 0.5 * (f(self.gamma) * f(self.eps) / (4.0 * f(self.r))).ln();
        let den = -(1.0 - f(self.gamma) / 2.0).ln();
        if num <= 0.0 {
            0
        } else {
            (num / den).floor() as u64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WilsonReport {
    pub params: WilsonParams<f64>,
    pub f_residual: f64,
    pub chi_residuals: [f64; 3],
    pub residual: f64,
    pub newton_iterations: usize,
    pub bound_t: u64,
    pub lazy_bound_t: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WilsonConfig {
    pub n: usize,
    pub eps: f64,
    pub samples: u64,
    pub seed: u64,
    pub variant: Variant,
    pub max_iter: usize,
}

impl WilsonConfig {
    pub fn new(n: usize, eps: f64, samples: u64, seed: u64) -> Self {
        WilsonConfig { n, eps, samples, seed, variant: Variant::Derived, max_iter: 100 }
    }
}

/// Root, χ-values, `Ψ_max`, sampled `R` and residual, and both step bounds.
pub fn wilson_report(cfg: &WilsonConfig) -> Result<WilsonReport> {
    if !(cfg.eps > 0.0 && cfg.eps < 1.0) {
        return Err(Error::domain(format!("ε = {} outside (0, 1)", cfg.eps)));
    }
    let n = cfg.n;
    let root = newton_root::<f64>(n, 1e-12 * n as f64, cfg.max_iter, cfg.variant)?;
    let lambda = root.lambda;
    let w = unit_root::<f64>(n);
    let (chi0, chi1) = chi_values(lambda, w)?;
    let gamma = 1.0 - lambda.re;
    if !(gamma > 0.0 && gamma < 1.0 && lambda.re >= 0.5) {
        return Err(Error::Numeric {
            message: format!("root {lambda} violates 1/2 <= Re λ < 1"),
            trace: root.trace,
        });
    }
    let ef = Eigenfunction::new(n, lambda, chi0, chi1);
    let (residual, r) = ef.sample_stats(cfg.samples, cfg.seed);
    let params = WilsonParams { n, lambda, w, chi0, chi1, gamma, psi_max: ef.psi_max(), r, eps: cfg.eps };
    let lazy = params.lazy_transfer();
    Ok(WilsonReport {
        f_residual: root.residual,
        chi_residuals: constraint_residuals(lambda, chi0, chi1, n),
        residual,
        newton_iterations: root.trace.len() - 1,
        bound_t: params.bound(),
        lazy_bound_t: lazy.bound(),
        params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    #[test]
    fn poly_at_zero_and_one() {
        let n = 40;
        assert_eq!(wilson_poly(C::new(0.0, 0.0), n, Variant::Derived).0, C::new(0.0, 0.0));
        let w = unit_root::<f64>(n);
        let (f, _) = wilson_poly(C::new(1.0, 0.0), n, Variant::Printed);
        let expected = 9.0 - w * 7.0 + w.inv() - w.inv() * w.inv() * 3.0;
        assert!((f - expected).norm() < 1e-13);
        let (f, _) = wilson_poly(C::new(1.0, 0.0), n, Variant::Derived);
        let expected = 9.0 - w * 9.0 + w * w * 2.0 + w.inv() - w.inv() * w.inv() * 3.0;
        assert!((f - expected).norm() < 1e-13);
    }

    #[test]
    fn derivative_at_one_for_large_n() {
        let n = 4096;
        let (_, d) = wilson_poly(C::new(1.0, 0.0), n, Variant::Printed);
        assert!((d - C::new(2.0 * n as f64, -14.0 * PI)).norm() < 0.1);
        let (_, d) = wilson_poly(C::new(1.0, 0.0), n, Variant::Derived);
        assert!((d.re - 2.0 * n as f64).abs() < 10.0);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for variant in [Variant::Derived, Variant::Printed] {
            let z = C::new(0.99, -0.01);
            let h = 1e-7;
            let (f0, d) = wilson_poly(z, 32, variant);
            let (f1, _) = wilson_poly(z + h, 32, variant);
            assert!(((f1 - f0) / h - d).norm() < 1e-4 * d.norm());
        }
    }

    #[test]
    fn first_newton_step() {
        for n in [256, 512, 1024] {
            let (f, d) = wilson_poly(C::new(1.0, 0.0), n, Variant::Derived);
            let z1 = C::new(1.0, 0.0) - f / d;
            let nf = n as f64;
            let c = (1.0 - z1.re) * nf.powi(3);
            assert!((c - 12.0 * PI * PI).abs() < 300.0 / nf, "n = {n}: {c}");
        }
    }

    #[test]
    fn newton_domain_and_certification() {
        assert!(matches!(newton_root::<f64>(15, 1e-10, 50, Variant::Derived), Err(Error::Domain(_))));
        let root = newton_root::<f64>(32, 32e-12, 50, Variant::Derived).unwrap();
        assert!(root.residual <= 32e-12);
        let w = unit_root::<f64>(32);
        let (c0, c1) = chi_values(root.lambda, w).unwrap();
        let r = constraint_residuals(root.lambda, c0, c1, 32);
        assert!(r.iter().all(|&x| x < 1e-8), "{r:?}");
        assert!(((c0 - 1.0).norm()) <= 50.0 / 32.0 && ((c1 - 1.0).norm()) <= 50.0 / 32.0);
    }

    #[test]
    fn printed_polynomial_fails_first_constraint() {
        let root = newton_root::<f64>(32, 32e-12, 50, Variant::Printed).unwrap();
        let w = unit_root::<f64>(32);
        let (c0, c1) = chi_values(root.lambda, w).unwrap();
        let r = constraint_residuals(root.lambda, c0, c1, 32);
        assert!(r[0] > 1e-3, "{r:?}");
        assert!(r[1] < 1e-12 && r[2] < 1e-12);
    }

    #[test]
    fn newton_nonconvergence_carries_trace() {
        match newton_root::<f64>(64, 0.0, 3, Variant::Derived) {
            Err(Error::Numeric { trace, .. }) => assert_eq!(trace.len(), 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_precision_root() {
        let root = newton_root::<f32>(32, 1e-5, 50, Variant::Derived).unwrap();
        let d = newton_root::<f64>(32, 32e-12, 50, Variant::Derived).unwrap();
        assert!((root.lambda.re as f64 - d.lambda.re).abs() < 1e-5);
    }

    #[test]
    fn lifted_table() {
        let n = 20u32;
        // σ_n, interior card: moves up, winding unchanged
        assert_eq!(card_step(7, 4, n, n), (6, 4));
        // σ_{n−1}, card on top: (n − 1, Z − 1)
        assert_eq!(card_step(1, 4, n - 1, n), (n - 1, 3));
        // σ_{n−2}, card on top: (n − 2, Z − 2)
        assert_eq!(card_step(1, 4, n - 2, n), (n - 2, 2));
        // σ_{n−1}, bottom card stays: (n, Z + 1)
        assert_eq!(card_step(n, 4, n - 1, n), (n, 5));
        // σ_{n−2}, card at n − 1 stays
        assert_eq!(card_step(n - 1, n - 1, n - 2, n), (n - 1, 0));
        // σ_n, card on top wraps to the bottom with Z unchanged
        assert_eq!(card_step(1, 4, n, n), (n, 4));
    }

    #[test]
    fn lifted_state_tracks_winding() {
        let n = 17;
        let mut rng = stream(0, Purpose::Validity, 0);
        let mut s = LiftedState::identity(n);
        for t in 1..200u32 {
            let l = n as u32 - rng.random_range(0..3u32);
            s = s.step(l);
            assert_eq!(s.y, t % n as u32);
            for j in 0..n {
                let expect = (s.pos[j] as i64 - (j as i64 + 1) + t as i64).rem_euclid(n as i64);
                assert_eq!(s.z[j] as i64, expect);
            }
        }
    }

    fn eigenfunction(n: usize) -> Eigenfunction<f64> {
        let root = newton_root::<f64>(n, 1e-12 * n as f64, 50, Variant::Derived).unwrap();
        let (c0, c1) = chi_values(root.lambda, unit_root(n)).unwrap();
        Eigenfunction::new(n, root.lambda, c0, c1)
    }

    #[test]
    fn v_list_alignment() {
        let n = 20;
        let ef = eigenfunction(n);
        assert_eq!(ef.v(n - 2), C::new(1.0, 0.0));
        assert_eq!(ef.v(n - 3), ef.lambda);
        assert!((ef.v(1) - ef.lambda.powu(n as u32 - 3)).norm() < 1e-13);
        let sum: C = (1..=n).map(|x| ef.v(x)).sum();
        assert!((ef.psi(&LiftedState::identity(n)) - sum).norm() < 1e-13);
    }

    #[test]
    fn interior_cards_are_eigenfunctions() {
        let n = 24u32;
        let ef = eigenfunction(n as usize);
        for pos in 2..=n - 2 {
            for z in [0, 5, n - 1] {
                let mean: C = [n - 2, n - 1, n]
                    .iter()
                    .map(|&l| {
                        let (p, zz) = card_step(pos, z, l, n);
                        ef.psi_card(p, zz)
                    })
                    .sum::<C>()
                    / 3.0;
                assert!((mean - ef.lambda * ef.psi_card(pos, z)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn residual_detects_perturbation() {
        let ef = eigenfunction(32);
        assert!(eigenfunction_residual(&ef, 2000, 1) < 1e-9);
        let bad = Eigenfunction::new(32, ef.lambda + 1e-3, ef.v(31), ef.v(32));
        assert!(eigenfunction_residual(&bad, 2000, 1) > 1e-4);
    }

    #[test]
    fn psi_modulus_ignores_lift_time() {
        let ef = eigenfunction(20);
        let mut rng = stream(2, Purpose::Validity, 0);
        let s = LiftedState::random(20, &mut rng);
        let relabelled = LiftedState { y: (s.y + 7) % 20, ..s.clone() };
        assert_eq!(ef.psi(&s).norm().to_bits(), ef.psi(&relabelled).norm().to_bits());
        // a common winding shift is a unit phase
        let shifted = LiftedState { z: s.z.iter().map(|z| (z + 7) % 20).collect(), ..s.clone() };
        assert!((ef.psi(&shifted).norm() - ef.psi(&s).norm()).abs() < 1e-12);
    }

    #[test]
    fn step_bound_monotonicity() {
        let base = step_bound(100.0, 1e-4, 1e-3, 0.5);
        assert!(base > 0);
        assert!(step_bound(100.0, 1e-4, 1e-2, 0.5) <= base);
        assert!(step_bound(200.0, 1e-4, 1e-3, 0.5) >= base);
        assert!(step_bound(100.0, 1e-4, 1e-3, 0.99) >= base);
        assert_eq!(step_bound(1.0, 1e-4, 1.0, 0.5), 0);
    }

    #[test]
    fn lazy_transfer_identities() {
        let report = wilson_report(&WilsonConfig::new(64, 0.5, 500, 0)).unwrap();
        let p = &report.params;
        let lazy = p.lazy_transfer();
        assert_eq!(lazy.gamma, p.gamma / 2.0);
        assert!(lazy.lambda.re >= 0.5);
        assert_eq!(lazy.bound(), p.lazy_bound_closed_form());
        let ratio = lazy.bound() as f64 / p.bound() as f64;
        assert!((1.9..2.1).contains(&ratio), "{ratio}");
    }
}
