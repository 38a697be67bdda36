use tstable_core::exact_counts::GraphCensus;
use tstable_core::formulas::alpha_formula;
use tstable_core::graph_lab::rng::trial_seed;
use tstable_core::graph_lab::sample_gnp;
use tstable_core::moments::{
    build_profile, build_profile_with, log_expected_count, log_prob_tstable_upper, mstar_prediction,
    Mode, ProfileOptions, Side,
};
use tstable_core::poly_saddle::in_accuracy_window;
use tstable_core::scalar::ln_binomial;
use tstable_core::Params;

fn with(mode: Mode) -> ProfileOptions {
    ProfileOptions {
        mode: Some(mode),
        ..ProfileOptions::default()
    }
}

fn unimodal_ks() -> impl Iterator<Item = usize> {
    (1..=24).chain((25..=400).step_by(25))
}

#[test]
fn lambda_is_above_then_below_one() {
    for t in 1..=3 {
        for p in [0.3, 0.5, 0.7] {
            let params = Params::new(t, p).unwrap();
            for k in unimodal_ks() {
                let profile = build_profile(&params, k).unwrap();
                assert_eq!(profile.mode, Mode::Exact);
                let lambdas = profile.lambdas();
                let rising = lambdas.iter().take_while(|&&l| l > 1.0).count();
                assert!(
                    lambdas[rising..].iter().all(|&l| l <= 1.0),
                    "t = {t}, p = {p}, k = {k}: λ returns above 1"
                );
                if k >= 25 {
                    assert_eq!(profile.lambda_crossings(), 1, "t = {t}, p = {p}, k = {k}");
                    // the argmax is where λ first drops to 1 or below
                    assert_eq!(profile.m_star, rising, "t = {t}, p = {p}, k = {k}");
                }
            }
        }
    }
}

#[test]
fn single_crossing_t1_k400() {
    let profile = build_profile(&Params::new(1, 0.5).unwrap(), 400).unwrap();
    assert_eq!(profile.lambda_crossings(), 1);
    assert!((profile.m_star as i64 - 190).abs() <= 8);
}

// |2m* − prediction| stays O(1), so divided by √k it goes to zero. The
// residual itself jitters because 2m* is an even integer.
#[test]
fn mstar_tracks_prediction() {
    for t in 1..=2 {
        for p in [0.3, 0.5, 0.7] {
            let params = Params::new(t, p).unwrap();
            for k in [100usize, 200, 400, 800, 1600] {
                let profile = build_profile(&params, k).unwrap();
                let gap = (2.0 * profile.m_star as f64 - 2.0 * mstar_prediction(&params, k)).abs();
                assert!(gap <= 3.0, "t = {t}, p = {p}, k = {k}: gap {gap}");
                if profile.mode == Mode::Exact && k >= 400 {
                    let saddle = build_profile_with(&params, k, with(Mode::Saddle)).unwrap();
                    let d = saddle.m_star as i64 - profile.m_star as i64;
                    assert!(d.abs() <= 1, "t = {t}, p = {p}, k = {k}: saddle m* off by {d}");
                }
            }
        }
    }
}

#[test]
fn exact_and_saddle_agree_in_window() {
    for t in 1..=3 {
        let params = Params::new(t, 0.5).unwrap();
        for k in [200usize, 500, 1000, 2000] {
            let exact = build_profile_with(&params, k, with(Mode::Exact)).unwrap();
            let saddle = build_profile_with(&params, k, with(Mode::Saddle)).unwrap();
            let mut checked = 0;
            for m in (1..t * k / 2).filter(|&m| in_accuracy_window(t, k, m)) {
                let d = (exact.log_f[m] - saddle.log_f[m]).abs();
                assert!(d <= 0.1, "t = {t}, k = {k}, m = {m}: Δ = {d}");
                checked += 1;
            }
            assert!(checked > 0);
        }
    }
}

#[test]
fn expected_count_sides_bracket() {
    for t in 0..=3 {
        for p in [0.3, 0.5, 0.7] {
            let params = Params::new(t, p).unwrap();
            for (n, k) in [(50u64, 8usize), (1000, 20), (100_000, 40), (1_000_000, 60)] {
                let up = log_expected_count(&params, n, k, Side::Upper).unwrap().log_value;
                let lo = log_expected_count(&params, n, k, Side::Lower).unwrap().log_value;
                assert!(lo <= up, "t = {t}, p = {p}, n = {n}, k = {k}");
                let t_f = t as f64;
                let slack = (t_f * k as f64 / 2.0 + 1.0).ln() + t_f + t_f * t_f + 2f64.ln();
                assert!(up - lo <= slack + 1e-9);
            }
        }
    }
}

#[test]
fn t0_upper_is_exact() {
    for p in [0.1, 0.5, 0.9] {
        let params = Params::new(0, p).unwrap();
        for (n, k) in [(3u64, 2usize), (10, 4), (1000, 30)] {
            let up = log_expected_count(&params, n, k, Side::Upper).unwrap().log_value;
            let pairs = (k * (k - 1) / 2) as f64;
            let want = ln_binomial::<f64>(n, k as u64) + pairs * (1.0 - p).ln();
            assert!((up - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }
    let up = log_expected_count(&Params::new(0, 0.5).unwrap(), 3, 2, Side::Upper).unwrap();
    assert!((up.log_value - 1.5f64.ln()).abs() < 1e-14);
}

#[test]
fn prob_bound_dominates_census() {
    for t in 0..=3 {
        for p in [0.3, 0.5, 0.7] {
            let params = Params::new(t, p).unwrap();
            for k in 1..=7usize {
                let census = GraphCensus::new(k).unwrap();
                let pairs = k * (k - 1) / 2;
                let prob: f64 = (0..=pairs)
                    .map(|m| {
                        census.count(m, t) as f64
                            * p.powi(m as i32)
                            * (1.0 - p).powi((pairs - m) as i32)
                    })
                    .sum();
                let bound = log_prob_tstable_upper(&params, k).unwrap().log_value;
                assert!(prob.ln() <= bound + 1e-12, "t = {t}, p = {p}, k = {k}");
            }
        }
    }
}

#[test]
fn prob_bound_dominates_simulation() {
    let params = Params::new(1, 0.5).unwrap();
    let k = 20;
    let samples = 100_000u64;
    let all: Vec<usize> = (0..k).collect();
    let hits = (0..samples)
        .filter(|&i| sample_gnp(k, 0.5, trial_seed(2024, i)).unwrap().is_t_stable(&all, 1))
        .count();
    let bound = log_prob_tstable_upper(&params, k).unwrap().log_value;
    let est = hits as f64 / samples as f64;
    assert!(est <= bound.exp(), "estimate {est} above bound {}", bound.exp());
}

#[test]
fn first_moment_at_million() {
    let params = Params::new(1, 0.5).unwrap();
    let n = 1_000_000u64;
    let alpha = alpha_formula(&params, n).unwrap();
    let above = (alpha + 0.2).ceil() as usize;
    let below = (alpha - 0.2).floor() as usize;
    let up = log_expected_count(&params, n, above, Side::Upper).unwrap();
    assert!(up.log_value < 0.0, "upper at k = {above}: {}", up.log_value);
    let lo = log_expected_count(&params, n, below, Side::Lower).unwrap();
    assert!(lo.log_value > 0.0, "lower at k = {below}: {}", lo.log_value);
}
