use bottomk::coupling::{
    coupling_trials, coupon_collector, increasing_bottom_statistic, lazy_trial, single_card_lower_bound, summarize,
    tail, CouplingKind, TrialConfig,
};
use bottomk::exact::{beta_min_bound_check, mixing_time, spectrum, transfer_checks, Metric, EIGEN_CAP};
use bottomk::flow::{
    build_flow_general, build_flow_large_k, build_flow_rudvalis, build_odd_flow, comparison_bound,
    congestion_lower_bound, dirichlet_comparison, odd_flow_eigenvalue_bound, WeightMode,
};
use bottomk::report::{profile_table, to_json, Table};
use bottomk::scalar::{format_g17, ratio};
use bottomk::wilson::{wilson_report, Variant, WilsonConfig};
use bottomk::{BigRational, Complex64, Error, ExactFlow, ExactMeasure, Permutation, Result, Weight};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;

/// Files produced by one command; the first is echoed to stdout.
pub struct Output {
    pub files: Vec<(String, String)>,
}

impl Output {
    fn json<T: Serialize>(name: &str, value: &T) -> Result<Self> {
        Ok(Output { files: vec![(format!("{name}.json"), to_json(value)?)] })
    }

    fn csv(mut self, name: &str, table: &Table) -> Self {
        self.files.push((format!("{name}.csv"), table.to_csv()));
        self
    }
}

pub fn run(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Exact(a) => exact(a),
        Command::Spectrum(a) => spectrum_cmd(a),
        Command::Couple(a) => couple(a),
        Command::Collector(a) => collector(a),
        Command::Lowerbound(a) => lowerbound(a),
        Command::Wilson(a) => wilson(a),
        Command::Flow(a) => flow(a),
        Command::Transfer(a) => transfer(a),
    }
}

fn walk_measure(walk: Walk, n: usize, k: usize) -> Result<(ExactMeasure, String)> {
    let q = ExactMeasure::top_to_bottom_k(n, k)?;
    Ok(match walk {
        Walk::Q => (q, format!("q({n},{k})")),
        Walk::Reversal => (q.reversal(), format!("q*({n},{k})")),
        Walk::Sym => (q.symmetrize(), format!("q~({n},{k})")),
        Walk::Lazy => (q.lazy(ratio(1, 2))?, format!("q^({n},{k})")),
        Walk::Rt => (ExactMeasure::random_transposition(n)?, format!("rt({n})")),
        Walk::Rudvalis => (ExactMeasure::rudvalis_symmetric(n)?, format!("rudvalis({n})")),
    })
}

fn exact(a: &ExactArgs) -> Result<Output> {
    let (q, label) = walk_measure(a.walk, a.n, a.k)?;
    let metric = match a.metric {
        MetricArg::Tv => Metric::Tv,
        MetricArg::L2 => Metric::L2,
    };
    let report = mixing_time(&q, &label, metric, a.mmax)?;
    let table = profile_table(&report.profile);
    Ok(Output::json("mixing", &report)?.csv("profile", &table))
}

fn spectrum_cmd(a: &SpectrumArgs) -> Result<Output> {
    let (q, label) = walk_measure(a.walk, a.n, a.k)?;
    let s = spectrum(&q, a.large)?;
    let bound = if a.walk == Walk::Sym && a.n <= EIGEN_CAP { Some(beta_min_bound_check(a.n, a.k)?) } else { None };
    let mut t = Table::new(["index", "eigenvalue"]);
    for (i, e) in s.eigenvalues.iter().enumerate() {
        t.push([i.to_string(), format_g17(*e)]);
    }
    #[derive(Serialize)]
    struct Out<'a> {
        measure: String,
        spectrum: &'a bottomk::exact::SpectrumReport,
        beta_minus: f64,
        beta_min_bound: Option<bottomk::exact::BetaMinCheck>,
    }
    let out = Out { measure: label, beta_minus: s.beta_minus(), spectrum: &s, beta_min_bound: bound };
    Ok(Output::json("spectrum", &out)?.csv("eigenvalues", &t))
}

fn couple(a: &CoupleArgs) -> Result<Output> {
    let kind = match a.kind {
        KindArg::BottomToTop => CouplingKind::BottomToTop,
        KindArg::TopInsert => CouplingKind::TopInsert,
    };
    let mut cfg = TrialConfig::new(a.n, a.k, kind, a.trials, a.seed);
    if let Some(cap) = a.cap {
        cfg.cap = cap;
    }
    let mut stats = coupling_trials(&cfg)?;
    if a.lazy != 1.0 {
        stats = stats.iter().map(|s| lazy_trial(s, a.lazy, a.seed)).collect::<Result<_>>()?;
    }
    let summary = summarize(&cfg, &stats);
    let tails: Vec<_> = a.tail.iter().map(|&m| tail(&stats, m)).collect();
    let mut trials = Table::new(["trial", "t", "censored"]);
    for s in &stats {
        trials.push([s.trial.to_string(), s.t.to_string(), s.censored.to_string()]);
    }
    let mut tt = Table::new(["m", "p_hat", "std_err", "censored"]);
    for t in &tails {
        tt.push([t.m.to_string(), format_g17(t.p_hat), format_g17(t.std_err), t.censored.to_string()]);
    }
    let out = json!({"lazy": a.lazy, "summary": summary, "tails": tails});
    Ok(Output::json("coupling", &out)?.csv("trials", &trials).csv("tails", &tt))
}

fn collector(a: &CollectorArgs) -> Result<Output> {
    let s = coupon_collector(a.n, a.j, a.trials, a.seed)?;
    let mut t = Table::new(["trial", "l"]);
    for (i, x) in s.samples.iter().enumerate() {
        t.push([i.to_string(), x.to_string()]);
    }
    let out = json!({
        "n": s.n, "j": s.j, "trials": s.trials, "seed": s.seed,
        "mean": s.mean, "std_dev": s.std_dev, "std_err": s.std_err, "normalized_mean": s.normalized_mean,
    });
    Ok(Output::json("collector", &out)?.csv("samples", &t))
}

fn lowerbound(a: &LowerboundArgs) -> Result<Output> {
    match a.statistic {
        Statistic::IncreasingBottom => {
            Output::json("lowerbound", &increasing_bottom_statistic(a.n, a.k, a.j, a.m, a.trials, a.seed)?)
        }
        Statistic::SingleCard => {
            Output::json("lowerbound", &single_card_lower_bound(a.n, a.k, a.m, a.c, a.trials, a.seed)?)
        }
    }
}

fn complex(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn wilson(a: &WilsonArgs) -> Result<Output> {
    let mut cfg = WilsonConfig::new(a.n, a.eps, a.samples, a.seed);
    cfg.variant = match a.variant {
        VariantArg::Derived => Variant::Derived,
        VariantArg::Printed => Variant::Printed,
    };
    cfg.max_iter = a.max_iter;
    let r = wilson_report(&cfg)?;
    let p = &r.params;
    let lazy = p.lazy_transfer();
    let out = json!({
        "params": {
            "n": p.n, "lambda": complex(p.lambda), "w": complex(p.w), "chi0": complex(p.chi0),
            "chi1": complex(p.chi1), "gamma": p.gamma, "psi_max": p.psi_max, "r": p.r, "eps": p.eps,
        },
        "scaled_gap": (p.n as f64).powi(3) * p.gamma,
        "f_residual": r.f_residual,
        "chi_residuals": r.chi_residuals,
        "eigenfunction_residual": r.residual,
        "newton_iterations": r.newton_iterations,
        "bound_t": r.bound_t,
        "lazy": {"lambda": complex(lazy.lambda), "gamma": lazy.gamma, "r": lazy.r, "bound_t": r.lazy_bound_t},
        "lazy_bound_closed_form": p.lazy_bound_closed_form(),
    });
    Output::json("wilson", &out)
}

fn flow(a: &FlowArgs) -> Result<Output> {
    let n = a.n;
    let need_k = || a.k.ok_or_else(|| Error::Domain("--k is required for this builder".into()));
    let mode = match a.weights {
        Weights::Rescaled => WeightMode::Rescaled,
        Weights::Printed => WeightMode::Printed,
    };
    let k = match (a.builder, a.c) {
        (Builder::LargeK, Some(c)) if c < n => n - c,
        (Builder::LargeK, Some(c)) => return Err(Error::Domain(format!("need C < n, got C = {c}"))),
        _ => need_k()?,
    };
    let f: ExactFlow = match a.builder {
        Builder::Odd => build_odd_flow(n, k)?,
        Builder::General => build_flow_general(n, k, mode)?,
        Builder::Rudvalis => build_flow_rudvalis(n, k)?,
        Builder::LargeK => build_flow_large_k(n, n.saturating_sub(k), mode)?,
    };
    let verification = f.verify();
    let (a_eta, report) = f.congestion()?;
    let mut bounds = serde_json::Map::new();
    match a.builder {
        Builder::Odd => {
            let value = odd_flow_eigenvalue_bound(&f, 1.0)?;
            bounds.insert("eigenvalue_bound".into(), json!(value));
            let closed = bottomk::exact::beta_min_formula(n, k);
            bounds.insert("closed_form".into(), json!({"exact": closed.render(), "value": closed.to_f64()}));
        }
        Builder::General => {
            let (nf, kf) = (n as f64, k as f64);
            bounds.insert("stated_limit".into(), json!(18.0 * nf * nf + 8.0 * kf * kf / (nf * nf)));
        }
        Builder::Rudvalis => {
            let sum: i64 = (n - k + 1..=n).map(|l| (3 * (n - l) as i64 + 1).pow(2)).sum();
            let limit = ratio(4 * sum, k as i64);
            bounds.insert("stated_limit".into(), json!({"exact": limit.render(), "holds": a_eta <= limit}));
        }
        Builder::LargeK => {
            let c = (n - k) as f64;
            bounds.insert("stated_limit".into(), json!(8.0 * (c * (c + 2.0).powi(2) + 1.0)));
        }
    }
    if n <= bottomk::exact::DENSE_CAP {
        let gens: Vec<Permutation> = f.q.support().cloned().collect();
        let lower: BigRational = congestion_lower_bound(&f.target, &gens)?;
        bounds.insert("distance_lower_bound".into(), json!(lower.render()));
    }
    if a.functions > 0 && n <= bottomk::exact::DENSE_CAP {
        bounds.insert("dirichlet".into(), serde_json::to_value(dirichlet_comparison(&f, a.functions, a.seed)?)?);
    }
    if matches!(a.builder, Builder::General | Builder::LargeK) && n <= EIGEN_CAP {
        bounds.insert("comparison".into(), serde_json::to_value(comparison_bound(&f, k)?)?);
    }
    let mut gens = Table::new(["generator", "q", "load", "term", "term_f64"]);
    for g in &report.generators {
        gens.push([g.generator.clone(), g.q.clone(), g.load.clone(), g.term.clone(), format_g17(g.term_f64)]);
    }
    let out = json!({
        "report": report,
        "verification": {
            "ok": verification.ok(),
            "paths": verification.paths,
            "endpoint_mismatches": verification.endpoint_mismatches.len(),
            "marginal_mismatches": verification.marginal_mismatches,
            "parity_violations": verification.parity_violations,
        },
        "bounds": bounds,
    });
    let mut output = Output::json("flow", &out)?.csv("generators", &gens);
    if a.paths {
        output.files.push(("paths.json".into(), to_json(&f.to_json())?));
    }
    Ok(output)
}

fn transfer(a: &TransferArgs) -> Result<Output> {
    let r = transfer_checks(a.n, a.k, &a.eps)?;
    Output::json("transfer", &json!({"all_hold": r.all_hold(), "report": r}))
}
