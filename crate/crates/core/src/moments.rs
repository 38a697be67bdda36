//! First-moment weights for `t`-stable sets of order `k` in `G(n, p)`.
//!
//! Splitting `P(A is t-stable)` by the number of edges `m` inside `A` gives
//! terms bounded by
//!
//! ```text
//! f(m) = p^m (1−p)^{C(k,2)−m} C_{2m}(t,k) (2m)!/(m! 2^m)
//! ```
//!
//! Everything here is carried as `ln f(m)`.

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::exact_counts::{exact_C, CoefficientRow};
use crate::poly_saddle::approx_log_C;
use crate::scalar::{count, ln_binomial, ln_factorial, log_sum_exp, real, Real};

/// Largest `tk` for which profiles default to exact coefficients.
pub const DEFAULT_EXACT_THRESHOLD: usize = 4000;

/// The model triple `(t, p, b = 1/(1−p))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params<F> {
    t: usize,
    p: F,
    b: F,
}

impl<F: Real> Params<F> {
    pub fn new(t: usize, p: F) -> Result<Self> {
        if !(p > F::zero() && p < F::one()) {
            return domain(format!("edge probability must lie in (0, 1), got {p}"));
        }
        Ok(Self {
            t,
            p,
            b: (F::one() - p).recip(),
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn p(&self) -> F {
        self.p
    }

    pub fn b(&self) -> F {
        self.b
    }

    /// `ln b = −ln(1−p)`, computed without cancellation for small `p`.
    pub fn ln_b(&self) -> F {
        -(-self.p).ln_1p()
    }

    /// Logarithm to base `b`.
    pub fn log_b(&self, x: F) -> F {
        x.ln() / self.ln_b()
    }
}

/// How `C_{2m}(t, k)` is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Exact rational dynamic programming.
    Exact,
    /// Saddle-point approximation.
    Saddle,
}

fn pairs(k: usize) -> u64 {
    (k as u64) * (k as u64).saturating_sub(1) / 2
}

fn check_m(t: usize, k: usize, m: usize) -> Result<()> {
    if k == 0 {
        return domain("k must be at least 1");
    }
    if 2 * m > t * k {
        return domain(format!("2m = {} exceeds tk = {}", 2 * m, t * k));
    }
    Ok(())
}

/// Everything in `ln f(m)` except `ln C_{2m}(t, k)`.
fn log_weight<F: Real>(params: &Params<F>, k: usize, m: usize) -> F {
    let m64 = m as u64;
    let m_f = count::<F>(m64);
    let ln_q = -params.ln_b();
    let edge_part = if m == 0 {
        F::zero()
    } else {
        m_f * params.p.ln()
    };
    edge_part
        + count::<F>(pairs(k) - m64) * ln_q
        + ln_factorial::<F>(2 * m64)
        - ln_factorial::<F>(m64)
        - m_f * F::LN_2()
}

/// `ln f(m)` computed in the given mode; `-inf` when `m > C(k, 2)`.
///
/// Exact mode needs `tk` at most [`DEFAULT_EXACT_THRESHOLD`]; saddle mode needs
/// `t ≥ 1`, `k ≥ 2` and `0 < 2m < tk`.
pub fn log_f<F: Real>(params: &Params<F>, k: usize, m: usize, mode: Mode) -> Result<F> {
    let t = params.t;
    check_m(t, k, m)?;
    if m as u64 > pairs(k) {
        // more edges than a k-set can hold
        return Ok(F::neg_infinity());
    }
    let ln_c = match mode {
        Mode::Exact => {
            if t * k > DEFAULT_EXACT_THRESHOLD {
                return domain(format!(
                    "exact mode limited to tk <= {DEFAULT_EXACT_THRESHOLD}, got {}",
                    t * k
                ));
            }
            real::<F>(exact_C(t, k, m)?.ln_value())
        }
        Mode::Saddle => approx_log_C::<F>(t, k, m)?.log_value,
    };
    Ok(log_weight(params, k, m) + ln_c)
}

/// `ln f(m)` for every `0 ≤ m ≤ min(⌊tk/2⌋, C(k, 2))`, with its maximiser and
/// total. Larger `m` have `f(m) = 0` and are left out.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentProfile<F> {
    pub params: Params<F>,
    pub k: usize,
    pub mode: Mode,
    pub log_f: Vec<F>,
    /// Smallest maximising `m`.
    pub m_star: usize,
    /// `ln Σ_m f(m)`.
    pub log_sum: F,
}

impl<F: Real> MomentProfile<F> {
    /// `λ_m = f(m+1)/f(m)`.
    pub fn lambda(&self, m: usize) -> Option<F> {
        let next = self.log_f.get(m + 1)?;
        Some((*next - self.log_f[m]).exp())
    }

    pub fn lambdas(&self) -> Vec<F> {
        self.log_f.windows(2).map(|w| (w[1] - w[0]).exp()).collect()
    }

    /// Number of indices where `λ_m − 1` changes sign from positive to
    /// non-positive.
    pub fn lambda_crossings(&self) -> usize {
        let l = self.lambdas();
        l.windows(2)
            .filter(|w| w[0] > F::one() && w[1] <= F::one())
            .count()
    }

    pub fn log_f_star(&self) -> F {
        self.log_f[self.m_star]
    }
}

/// Profile options: which mode to use and where to switch automatically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfileOptions {
    pub mode: Option<Mode>,
    pub exact_threshold: usize,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            mode: None,
            exact_threshold: DEFAULT_EXACT_THRESHOLD,
        }
    }
}

impl ProfileOptions {
    fn resolve(&self, t: usize, k: usize) -> Mode {
        match self.mode {
            Some(m) => m,
            None if t * k <= self.exact_threshold || k < 2 => Mode::Exact,
            None => Mode::Saddle,
        }
    }
}

/// [`build_profile_with`] using default options.
pub fn build_profile<F: Real>(params: &Params<F>, k: usize) -> Result<MomentProfile<F>> {
    build_profile_with(params, k, ProfileOptions::default())
}

/// Fills `ln f(m)` for every `m`, locates `m*` and sums by log-sum-exp.
///
/// In saddle mode the endpoints use their closed forms `C_0 = 1` and
/// `C_{tk} = (1/t!)^k`; interior entries are evaluated in parallel.
pub fn build_profile_with<F: Real>(
    params: &Params<F>,
    k: usize,
    options: ProfileOptions,
) -> Result<MomentProfile<F>> {
    let t = params.t;
    if k == 0 {
        return domain("k must be at least 1");
    }
    let max_m = (t * k / 2).min(pairs(k) as usize);
    let mode = options.resolve(t, k);
    let log_f: Vec<F> = match mode {
        Mode::Exact => {
            let row = CoefficientRow::new(t, k)?;
            (0..=max_m)
                .map(|m| log_weight(params, k, m) + real::<F>(row.ln_c(m)))
                .collect()
        }
        Mode::Saddle => {
            if t > 0 && k < 2 {
                return domain("saddle mode needs k >= 2");
            }
            let ln_top = -count::<F>(k as u64) * ln_factorial::<F>(t as u64);
            (0..=max_m)
                .into_par_iter()
                .map(|m| {
                    let ln_c = if m == 0 {
                        F::zero()
                    } else if 2 * m == t * k {
                        ln_top
                    } else {
                        approx_log_C::<F>(t, k, m)?.log_value
                    };
                    Ok(log_weight(params, k, m) + ln_c)
                })
                .collect::<Result<_>>()?
        }
    };
    let mut m_star = 0;
    for (m, v) in log_f.iter().enumerate() {
        if *v > log_f[m_star] {
            m_star = m;
        }
    }
    let log_sum = log_sum_exp(&log_f);
    Ok(MomentProfile {
        params: *params,
        k,
        mode,
        log_f,
        m_star,
        log_sum,
    })
}

/// Leading-order location `(tk − √(tk/(bp)))/2` of `m*`; zero for `t = 0`.
pub fn mstar_prediction<F: Real>(params: &Params<F>, k: usize) -> F {
    if params.t == 0 {
        return F::zero();
    }
    let tk = count::<F>((params.t * k) as u64);
    (tk - (tk / (params.b * params.p)).sqrt()) * real(0.5)
}

/// A computed bound next to its asymptotic closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogBound<F> {
    pub log_value: F,
    pub log_closed_form: F,
}

/// `t ln(x)` with the `0⁰ = 1` convention.
fn t_ln<F: Real>(t: usize, x: F) -> F {
    if t == 0 {
        F::zero()
    } else {
        count::<F>(t as u64) * x.ln()
    }
}

/// `ln[(tk/2 + 1) f(m*)]`, an upper bound on `ln P(A is t-stable)` for a fixed
/// `k`-set `A`, and the closed form `(k/2) ln[b^{−k+1} (tbpk/e)^t / t!²]`.
pub fn log_prob_tstable_upper<F: Real>(params: &Params<F>, k: usize) -> Result<LogBound<F>> {
    let profile = build_profile(params, k)?;
    Ok(prob_bound_from_profile(&profile))
}

pub fn prob_bound_from_profile<F: Real>(profile: &MomentProfile<F>) -> LogBound<F> {
    let params = &profile.params;
    let (t, k) = (params.t, profile.k);
    let tk_half = count::<F>((t * k) as u64) * real(0.5);
    let log_value = (tk_half + F::one()).ln() + profile.log_f_star();
    let k_f = count::<F>(k as u64);
    let inner = -(k_f - F::one()) * params.ln_b()
        + t_ln(t, count::<F>(t as u64) * params.b * params.p * k_f / F::E())
        - real::<F>(2.0) * ln_factorial::<F>(t as u64);
    LogBound {
        log_value,
        log_closed_form: k_f * real(0.5) * inner,
    }
}

/// Which side of the first-moment sandwich to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

/// Bounds on `ln E[#t-stable sets of order k]` in `G(n, p)`.
///
/// Upper: `ln C(n,k) + ln Σ_m f(m)`. Lower: `ln C(n,k) + ln(e^{−t−t²}/2) + ln f(m*)`.
/// The closed form is `(k/2) ln[e² n² b^{−k+1} k^{t−2} (tbp/e)^t / t!²]`.
pub fn log_expected_count<F: Real>(
    params: &Params<F>,
    n: u64,
    k: usize,
    side: Side,
) -> Result<LogBound<F>> {
    if k == 0 || k as u64 > n {
        return domain(format!("need 1 <= k <= n, got k = {k}, n = {n}"));
    }
    let profile = build_profile(params, k)?;
    Ok(expected_count_from_profile(&profile, n, side))
}

/// [`log_expected_count`] for a profile that is already built.
pub fn expected_count_from_profile<F: Real>(
    profile: &MomentProfile<F>,
    n: u64,
    side: Side,
) -> LogBound<F> {
    let params = &profile.params;
    let (t, k) = (params.t, profile.k);
    let t_f = count::<F>(t as u64);
    let ln_choose = ln_binomial::<F>(n, k as u64);
    let log_value = match side {
        Side::Upper => ln_choose + profile.log_sum,
        Side::Lower => {
            ln_choose - t_f - t_f * t_f - F::LN_2() + profile.log_f_star()
        }
    };
    let k_f = count::<F>(k as u64);
    let inner = real::<F>(2.0)
        + real::<F>(2.0) * count::<F>(n).ln()
        - (k_f - F::one()) * params.ln_b()
        + (t_f - real(2.0)) * k_f.ln()
        + t_ln(t, t_f * params.b * params.p / F::E())
        - real::<F>(2.0) * ln_factorial::<F>(t as u64);
    LogBound {
        log_value,
        log_closed_form: k_f * real(0.5) * inner,
    }
}
