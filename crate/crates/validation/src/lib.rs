//! The acceptance criteria, each evaluated end to end against the library.
//!
//! Every criterion returns an [`Outcome`] instead of panicking so that a
//! failing criterion still reports its measured values.

use bottomk::coupling::{
    coupling_trials, coupon_collector, increasing_bottom_statistic, lazy_trial, tail, CouplingKind, TrialConfig,
};
use bottomk::exact::{beta_min_bound_check, mixing_time, small_n_checks, transfer_checks, Metric};
use bottomk::flow::{
    build_flow_general, build_flow_large_k, build_flow_rudvalis, build_odd_flow, congestion_lower_bound,
    dirichlet_comparison, odd_flow_eigenvalue_bound, WeightMode,
};
use bottomk::scalar::ratio;
use bottomk::wilson::{wilson_report, WilsonConfig};
use bottomk::{BigRational, ExactFlow, ExactMeasure, Permutation, Result};

/// Default seed for every stochastic criterion.
pub const SEED: u64 = 0;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub details: Vec<String>,
}

impl Outcome {
    fn new(id: u8, title: &'static str) -> Self {
        Outcome { id, title, pass: true, details: Vec::new() }
    }

    /// Records a check; any failed check fails the criterion.
    fn check(&mut self, ok: bool, detail: String) {
        if !ok {
            self.pass = false;
            self.details.push(format!("FAIL {detail}"));
        } else {
            self.details.push(detail);
        }
    }

    fn error(id: u8, title: &'static str, e: bottomk::Error) -> Self {
        Outcome { id, title, pass: false, details: vec![format!("error: {e}")] }
    }

    pub fn line(&self) -> String {
        format!("{} criterion {:>2}: {}", if self.pass { "PASS" } else { "FAIL" }, self.id, self.title)
    }
}

fn run(id: u8, title: &'static str, body: impl FnOnce(&mut Outcome) -> Result<()>) -> Outcome {
    let mut out = Outcome::new(id, title);
    match body(&mut out) {
        Ok(()) => out,
        Err(e) => Outcome::error(id, title, e),
    }
}

fn pairs(ns: std::ops::RangeInclusive<usize>) -> impl Iterator<Item = (usize, usize)> {
    ns.flat_map(|n| (2..=n).map(move |k| (n, k)))
}

pub fn criterion_1() -> Outcome {
    run(1, "exact small-n suite", |out| {
        for (n, k) in pairs(2..=6) {
            let r = small_n_checks(n, k)?;
            for w in &r.walks {
                out.check(
                    w.t_le_t2 && w.reversal_gap <= 1e-12 && w.submult_excess <= 1e-12,
                    format!(
                        "n={n} k={k} {}: T={} T2={} reversal_gap={:.1e} submult_excess={:.3e}",
                        w.walk, w.t, w.t2, w.reversal_gap, w.submult_excess
                    ),
                );
            }
        }
        Ok(())
    })
}

pub fn criterion_2() -> Outcome {
    run(2, "least eigenvalue bound", |out| {
        for (n, k) in pairs(2..=6) {
            let c = beta_min_bound_check(n, k)?;
            let flow = build_odd_flow::<BigRational>(n, k)?;
            let odd = odd_flow_eigenvalue_bound(&flow, 1.0)?;
            out.check(
                c.holds && odd <= c.beta_min + 1e-12,
                format!(
                    "n={n} k={k}: beta_min={:.12} closed_form={:.12} odd_flow_bound={:.12}",
                    c.beta_min, c.formula_value, odd
                ),
            );
        }
        Ok(())
    })
}

pub fn criterion_3() -> Outcome {
    run(3, "coupling tail dominates exact distance", |out| {
        let (n, trials) = (5, 10_000);
        for k in [2, 3, 5] {
            let cfg = TrialConfig::new(n, k, CouplingKind::TopInsert, trials, SEED);
            let stats = coupling_trials(&cfg)?;
            let q = ExactMeasure::top_to_bottom_k(n, k)?;
            let profile = mixing_time(&q, "q", Metric::Tv, 30)?.profile;
            let mut worst = f64::INFINITY;
            let mut worst_m = 0;
            for row in &profile {
                let t = tail(&stats, row.step as u64);
                let p = t.p_hat.max(row.tv);
                let sigma = (p * (1.0 - p) / trials as f64).sqrt();
                let slack = t.p_hat + 3.0 * sigma - row.tv;
                if slack < worst {
                    worst = slack;
                    worst_m = row.step;
                }
            }
            out.check(worst >= 0.0, format!("n={n} k={k}: min slack {worst:.3e} at m={worst_m}"));
        }
        Ok(())
    })
}

pub fn criterion_4() -> Outcome {
    run(4, "cutoff trend for k = n", |out| {
        let trials = 1000;
        let mut margins = Vec::new();
        for n in [100usize, 200, 400] {
            let nl = n as f64 * (n as f64).ln();
            let cfg = TrialConfig::new(n, n, CouplingKind::BottomToTop, trials, SEED);
            let stats = coupling_trials(&cfg)?;
            let up = tail(&stats, (1.25 * nl).floor() as u64);
            let m = (0.75 * nl).floor() as u64;
            let low = increasing_bottom_statistic(n, n, 6, m, trials, SEED)?;
            let upper_margin = 0.1 - up.p_hat;
            let lower_margin = low.estimate - 0.5;
            out.check(
                upper_margin >= 0.0,
                format!("n={n}: P(T > 1.25 n ln n) = {:.4} (need <= 0.1)", up.p_hat),
            );
            out.check(
                lower_margin >= 0.0,
                format!(
                    "n={n}: m={m} P(L_6 > m) = {:.4}, minus 1/6! = {:.4} (need >= 0.5)",
                    low.p_hat, low.estimate
                ),
            );
            margins.push((n, upper_margin, lower_margin));
        }
        for w in margins.windows(2) {
            let (a, b) = (w[0], w[1]);
            out.check(
                b.1 >= a.1 && b.2 >= a.2,
                format!(
                    "n={}->{}: upper margin {:.4}->{:.4}, lower margin {:.4}->{:.4}",
                    a.0, b.0, a.1, b.1, a.2, b.2
                ),
            );
        }
        Ok(())
    })
}

pub fn criterion_5() -> Outcome {
    run(5, "lazy doubling trend", |out| {
        let (n, trials) = (200usize, 1000);
        let cfg = TrialConfig::new(n, n, CouplingKind::BottomToTop, trials, SEED);
        let lazy = coupling_trials(&cfg)?
            .iter()
            .map(|s| lazy_trial(s, 0.5, SEED))
            .collect::<Result<Vec<_>>>()?;
        let m = (2.5 * n as f64 * (n as f64).ln()).floor() as u64;
        let t = tail(&lazy, m);
        out.check(t.p_hat <= 0.1, format!("n={n}: P(T_lazy > {m}) = {:.4} (need <= 0.1)", t.p_hat));
        Ok(())
    })
}

/// Band for `n³(1 − Re λ)`, centred on `18π² + 14π ≈ 221.6`.
pub const WILSON_BAND: (f64, f64) = (150.0, 300.0);

pub fn criterion_6() -> Outcome {
    run(6, "Wilson suite", |out| {
        let mut bounds = Vec::new();
        for n in [16usize, 32, 64, 128, 256] {
            let r = wilson_report(&WilsonConfig::new(n, 0.5, 10_000, SEED))?;
            let nf = n as f64;
            let scaled = nf.powi(3) * r.params.gamma;
            out.check(r.f_residual <= 1e-12 * nf, format!("n={n}: |f(λ)| = {:.2e}", r.f_residual));
            out.check(r.chi_residuals[2] <= 1e-8, format!("n={n}: third constraint residual {:.2e}", r.chi_residuals[2]));
            out.check(r.residual <= 1e-9, format!("n={n}: eigenfunction residual {:.2e}", r.residual));
            out.check(
                (WILSON_BAND.0..=WILSON_BAND.1).contains(&scaled),
                format!("n={n}: n^3 (1 - Re λ) = {scaled:.4} (band {:?})", WILSON_BAND),
            );
            let lazy_ratio = r.lazy_bound_t as f64 / r.bound_t as f64;
            out.check(
                (1.8..=2.2).contains(&lazy_ratio),
                format!("n={n}: lazy/plain bound = {} / {} = {lazy_ratio:.4}", r.lazy_bound_t, r.bound_t),
            );
            bounds.push((n, r.bound_t));
        }
        for w in bounds.windows(2) {
            let ratio = w[1].1 as f64 / w[0].1 as f64;
            out.check(
                (7.0..=9.5).contains(&ratio),
                format!("t({})/t({}) = {} / {} = {ratio:.4}", w[1].0, w[0].0, w[1].1, w[0].1),
            );
        }
        Ok(())
    })
}

fn all_flows(n: usize) -> Result<Vec<ExactFlow>> {
    let mut flows = Vec::new();
    for k in 2..=n {
        flows.push(build_odd_flow(n, k)?);
        flows.push(build_flow_general(n, k, WeightMode::Rescaled)?);
        flows.push(build_flow_rudvalis(n, k)?);
    }
    for c in (0..n).take_while(|&c| n > 2 * c + 2) {
        flows.push(build_flow_large_k(n, c, WeightMode::Rescaled)?);
    }
    Ok(flows)
}

pub fn criterion_7() -> Outcome {
    run(7, "flow suite", |out| {
        let mut built = 0;
        let mut bad = Vec::new();
        for n in 2..=12 {
            for f in all_flows(n)? {
                built += 1;
                if !f.verify().ok() {
                    bad.push(f.name.clone());
                }
            }
        }
        out.check(bad.is_empty(), format!("{built} flows at n <= 12 verified; failures: {bad:?}"));

        for n in [8usize, 12, 16, 24, 40] {
            let mut worst = (0, f64::NEG_INFINITY);
            for k in 2..=n {
                let (a, _) = build_flow_general::<BigRational>(n, k, WeightMode::Rescaled)?.congestion()?;
                let nf = n as f64;
                let limit = 2.0 * (18.0 * nf * nf + 8.0 * (k * k) as f64 / (nf * nf));
                let r = bottomk::Weight::to_f64(&a) / limit;
                if r > worst.1 {
                    worst = (k, r);
                }
            }
            out.check(worst.1 <= 1.0, format!("general flow n={n}: max A/limit = {:.4} at k={}", worst.1, worst.0));
        }

        let mut rud_ok = true;
        for (n, k) in pairs(2..=12) {
            let (a, _) = build_flow_rudvalis::<BigRational>(n, k)?.congestion()?;
            let sum: i64 = (n - k + 1..=n).map(|l| (3 * (n - l) as i64 + 1).pow(2)).sum();
            let limit = ratio(4 * sum, k as i64);
            if a > limit {
                rud_ok = false;
                out.details.push(format!("FAIL rudvalis n={n} k={k}: A={a} > {limit}"));
            }
        }
        out.check(rud_ok, "rudvalis flow A <= (4/k) sum (3(n-l)+1)^2 exactly for n <= 12".into());

        let mut lb_ok = 0;
        let mut lb_bad = Vec::new();
        for n in 2..=8 {
            for f in all_flows(n)? {
                let gens: Vec<Permutation> = f.q.support().cloned().collect();
                let lower = congestion_lower_bound(&f.target, &gens)?;
                let (a, _) = f.congestion()?;
                if lower <= a {
                    lb_ok += 1;
                } else {
                    lb_bad.push(format!("{}: {lower} > {a}", f.name));
                }
            }
        }
        out.check(lb_bad.is_empty(), format!("distance lower bound <= A for {lb_ok} flows at n <= 8; failures: {lb_bad:?}"));
        Ok(())
    })
}

pub fn criterion_8() -> Outcome {
    run(8, "Dirichlet comparison", |out| {
        for (n, k) in [4usize, 5].into_iter().flat_map(|n| (2..=n).map(move |k| (n, k))) {
            for f in [build_flow_general::<BigRational>(n, k, WeightMode::Rescaled)?, build_flow_rudvalis(n, k)?] {
                let r = dirichlet_comparison(&f, 100, SEED)?;
                out.check(
                    r.violations == 0,
                    format!("{}: A={:.4} violations={} min slack {:.3e}", r.flow, r.a, r.violations, r.min_slack),
                );
            }
        }
        Ok(())
    })
}

pub fn criterion_9() -> Outcome {
    run(9, "transfer suite", |out| {
        for (n, k) in pairs(2..=5) {
            let r = transfer_checks(n, k, &[0.1, 0.5, 0.9])?;
            let product = r.t2_product.map_or("none (proper subgroup)".to_string(), |t| t.to_string());
            let lazy: Vec<String> = r.lazy.iter().map(|c| format!("{}<={:.1}", c.t_lazy, c.bound)).collect();
            out.check(
                r.all_hold(),
                format!("n={n} k={k}: T={} T2={} T2(q*q^*)={product} lazy {}", r.t, r.t2, lazy.join(" ")),
            );
        }
        Ok(())
    })
}

pub fn criterion_10() -> Outcome {
    run(10, "coupon collector", |out| {
        let big = coupon_collector(1000, 0, 200, SEED)?;
        let norm = big.normalized_mean.expect("n > 1");
        out.check((0.95..=1.15).contains(&norm), format!("n=1000: mean L_0 / (n ln n) = {norm:.4}"));
        let small = coupon_collector(3, 0, 200, SEED)?;
        let z = (small.mean - 5.5) / small.std_err;
        out.check(z.abs() <= 3.0, format!("n=3: mean L_0 = {:.4} ± {:.4} (z = {z:.2})", small.mean, small.std_err));
        Ok(())
    })
}
