use tstable_core::exact_counts::{exact_C, pairing_bound};
use tstable_core::formulas::{
    alpha_formula, alpha_hat, balanced_max_report, chi_bounds, stability_window,
};
use tstable_core::graph_lab::{run_concentration_experiment, summarize, ExperimentConfig};
use tstable_core::moments::{
    build_profile, expected_count_from_profile, mstar_prediction, prob_bound_from_profile, Mode,
    Side,
};
use tstable_core::poly_saddle::{approx_log_C, contour_log_C, r0_asymptotic, TruncExpPoly};
use tstable_core::{Error, Params};

use crate::ranges::IntList;
use crate::table::{Cell, Table};
use crate::{Command, Output};

pub struct CliError(Error);

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self.0 {
            Error::Domain(_) | Error::LossOfPrecision(_) => 3,
            Error::OracleScale(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn domain(msg: String) -> CliError {
    CliError(Error::Domain(msg))
}

fn non_negative(flag: &str, list: &IntList) -> CliResult<Vec<usize>> {
    if list.0.is_empty() {
        return Err(domain(format!("--{flag} selects no values")));
    }
    list.0
        .iter()
        .map(|&v| usize::try_from(v).map_err(|_| domain(format!("--{flag} must be non-negative, got {v}"))))
        .collect()
}

fn single(flag: &str, v: i64) -> CliResult<usize> {
    usize::try_from(v).map_err(|_| domain(format!("--{flag} must be non-negative, got {v}")))
}

fn params(t: usize, p: f64) -> CliResult<Params> {
    Ok(Params::new(t, p)?)
}

pub fn run(command: Command) -> CliResult<(Table, Output)> {
    match command {
        Command::Counts { t, k, m, nodes, output } => Ok((counts(&t, &k, m.as_ref(), nodes)?, output)),
        Command::Saddle { t, k, m, output } => Ok((saddle(&t, &k, &m)?, output)),
        Command::Profile { t, p, k, n, output } => Ok((profile(&t, p, &k, n.as_ref())?, output)),
        Command::Window { t, p, n, eps, output } => Ok((window(&t, p, &n, eps)?, output)),
        Command::Chi { t, p, n, eps, output } => Ok((chi(&t, p, &n, eps)?, output)),
        Command::Experiment {
            t,
            p,
            n,
            trials,
            seed,
            eps,
            jobs,
            budget_ms,
            timing,
            output,
        } => {
            let cfg = ExperimentConfig {
                n: single("n", n)?,
                trials: single("trials", trials)?,
                epsilon: eps,
                master_seed: seed,
                budget_ms: (budget_ms > 0).then_some(budget_ms),
                jobs,
                colour: true,
            };
            Ok((experiment(single("t", t)?, p, &cfg, timing)?, output))
        }
        Command::PartitionCheck { t, p, n, k, output } => Ok((partition_check(&t, p, &n, &k)?, output)),
    }
}

fn ok_or_empty(r: tstable_core::Result<f64>) -> Cell {
    match r {
        Ok(v) => Cell::Real(v),
        Err(e) => {
            log::info!("{e}");
            Cell::Empty
        }
    }
}

fn counts(t: &IntList, k: &IntList, m: Option<&IntList>, nodes: usize) -> CliResult<Table> {
    let mut table = Table::new(
        "counts",
        &[
            "t", "k", "m", "exact", "ln_exact", "contour", "ln_contour", "saddle", "ln_saddle",
            "in_window", "ln_pairing_bound",
        ],
    );
    for &t in &non_negative("t", t)? {
        for &k in &non_negative("k", k)? {
            if k == 0 {
                return Err(domain("--k must be at least 1".into()));
            }
            let ms = match m {
                Some(list) => non_negative("m", list)?,
                None => (0..=t * k / 2).collect(),
            };
            for m in ms {
                let exact = exact_C(t, k, m)?;
                let contour = if 2 * m > t * k {
                    Cell::Empty
                } else {
                    ok_or_empty(contour_log_C::<f64>(t, k, m, nodes))
                };
                let approx = if t >= 1 && k >= 2 && m > 0 && 2 * m < t * k {
                    Some(approx_log_C::<f64>(t, k, m)?)
                } else {
                    None
                };
                let exp_of = |c: &Cell| match c {
                    Cell::Real(v) => Cell::Real(v.exp()),
                    _ => Cell::Empty,
                };
                table.push(vec![
                    t.into(),
                    k.into(),
                    m.into(),
                    exact.to_string().into(),
                    exact.ln_value().into(),
                    exp_of(&contour),
                    contour,
                    approx.map(|a| a.log_value.exp()).into(),
                    approx.map(|a| a.log_value).into(),
                    approx.map(|a| a.in_window).into(),
                    pairing_bound(t, k, m)?.ln_value().into(),
                ]);
            }
        }
    }
    Ok(table)
}

fn saddle(t: &IntList, k: &IntList, m: &IntList) -> CliResult<Table> {
    let mut table = Table::new(
        "saddle",
        &["t", "k", "m", "y", "r0", "s", "r0_asymptotic", "ln_saddle", "in_window"],
    );
    for &t in &non_negative("t", t)? {
        let poly = TruncExpPoly::new(t);
        for &k in &non_negative("k", k)? {
            for &m in &non_negative("m", m)? {
                if k == 0 {
                    return Err(domain("--k must be at least 1".into()));
                }
                let y = 2.0 * m as f64 / k as f64;
                let sd = poly.solve_r0(y)?;
                let approx = if k >= 2 { Some(approx_log_C::<f64>(t, k, m)?) } else { None };
                table.push(vec![
                    t.into(),
                    k.into(),
                    m.into(),
                    y.into(),
                    sd.r0.into(),
                    sd.s.into(),
                    r0_asymptotic(t, y)?.into(),
                    approx.map(|a| a.log_value).into(),
                    approx.map(|a| a.in_window).into(),
                ]);
            }
        }
    }
    Ok(table)
}

fn profile(t: &IntList, p: f64, k: &IntList, n: Option<&IntList>) -> CliResult<Table> {
    let mut table = Table::new(
        "profile",
        &[
            "t", "p", "k", "mode", "m_star", "mstar_prediction", "log_f_star", "log_sum",
            "log_prob_upper", "log_prob_closed_form", "n", "log_count_upper", "log_count_lower",
            "log_count_closed_form",
        ],
    );
    let ns: Vec<Option<usize>> = match n {
        Some(list) => non_negative("n", list)?.into_iter().map(Some).collect(),
        None => vec![None],
    };
    for &t in &non_negative("t", t)? {
        let par = params(t, p)?;
        for &k in &non_negative("k", k)? {
            let prof = build_profile(&par, k)?;
            let prob = prob_bound_from_profile(&prof);
            for &n in &ns {
                let (up, lo) = match n {
                    Some(n) if n < k => {
                        return Err(domain(format!("need k <= n, got k = {k}, n = {n}")));
                    }
                    Some(n) => (
                        Some(expected_count_from_profile(&prof, n as u64, Side::Upper)),
                        Some(expected_count_from_profile(&prof, n as u64, Side::Lower)),
                    ),
                    None => (None, None),
                };
                table.push(vec![
                    t.into(),
                    p.into(),
                    k.into(),
                    match prof.mode {
                        Mode::Exact => "exact".to_string(),
                        Mode::Saddle => "saddle".to_string(),
                    }
                    .into(),
                    prof.m_star.into(),
                    mstar_prediction(&par, k).into(),
                    prof.log_f_star().into(),
                    prof.log_sum.into(),
                    prob.log_value.into(),
                    prob.log_closed_form.into(),
                    n.into(),
                    up.map(|b| b.log_value).into(),
                    lo.map(|b| b.log_value).into(),
                    up.map(|b| b.log_closed_form).into(),
                ]);
            }
        }
    }
    Ok(table)
}

fn window(t: &IntList, p: f64, n: &IntList, eps: f64) -> CliResult<Table> {
    let mut table = Table::new("window", &["t", "p", "n", "eps", "alpha", "lo", "hi"]);
    for &t in &non_negative("t", t)? {
        let par = params(t, p)?;
        for &n in &non_negative("n", n)? {
            let w = stability_window(&par, n as u64, eps)?;
            table.push(vec![
                t.into(),
                p.into(),
                n.into(),
                eps.into(),
                w.alpha.into(),
                w.lo.into(),
                w.hi.into(),
            ]);
        }
    }
    Ok(table)
}

fn chi(t: &IntList, p: f64, n: &IntList, eps: f64) -> CliResult<Table> {
    let mut table = Table::new(
        "chi",
        &["t", "p", "n", "alpha", "chi_lower", "chi_upper", "eps", "alpha_hat"],
    );
    for &t in &non_negative("t", t)? {
        let par = params(t, p)?;
        for &n in &non_negative("n", n)? {
            let (lo, hi) = chi_bounds(&par, n as u64)?;
            table.push(vec![
                t.into(),
                p.into(),
                n.into(),
                alpha_formula(&par, n as u64)?.into(),
                lo.into(),
                hi.into(),
                eps.into(),
                alpha_hat(&par, n as u64, eps)?.into(),
            ]);
        }
    }
    Ok(table)
}

fn experiment(t: usize, p: f64, cfg: &ExperimentConfig, timing: bool) -> CliResult<Table> {
    let par = params(t, p)?;
    let records = run_concentration_experiment(&par, cfg)?;
    let summary = summarize(&records);
    eprintln!(
        "trials {} timeouts {} support_width {} mode {} in_window {}",
        summary.trials,
        summary.timeouts,
        summary.support_width,
        summary.mode.map_or("-".into(), |m| m.to_string()),
        summary.fraction_in_window.map_or("-".into(), |f| f.to_string()),
    );
    for (value, count) in &summary.histogram {
        eprintln!("alpha {value}: {count}");
    }
    let mut table = Table::new(
        "experiment",
        &[
            "seed", "n", "t", "p", "alpha_exact", "alpha_heuristic", "window_lo", "window_hi",
            "in_window", "chi_greedy", "elapsed_ms",
        ],
    );
    for r in &records {
        table.push(vec![
            r.seed.into(),
            r.n.into(),
            r.t.into(),
            r.p.into(),
            r.alpha_exact.into(),
            r.alpha_heuristic.into(),
            r.window.lo.into(),
            r.window.hi.into(),
            r.in_window().into(),
            r.chi_greedy.into(),
            timing.then_some(r.elapsed_ms).into(),
        ]);
    }
    Ok(table)
}

fn partition_check(t: &IntList, p: f64, n: &IntList, parts: &IntList) -> CliResult<Table> {
    let mut table = Table::new(
        "partition-check",
        &[
            "t", "p", "n", "r", "holds", "balanced_h", "global_violations", "local_violations",
            "small_part_violations",
        ],
    );
    for &t in &non_negative("t", t)? {
        let par = params(t, p)?;
        for &n in &non_negative("n", n)? {
            for &r in &non_negative("k", parts)? {
                let report = balanced_max_report(&par, n, r)?;
                table.push(vec![
                    t.into(),
                    p.into(),
                    n.into(),
                    r.into(),
                    report.holds().into(),
                    report.balanced_h.into(),
                    report.global_violations.len().into(),
                    report.local_violations.len().into(),
                    report.small_part_violations.len().into(),
                ]);
            }
        }
    }
    Ok(table)
}
