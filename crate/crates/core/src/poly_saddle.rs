//! The truncated exponential `R_t(z) = Σ_{i≤t} z^i/i!` and the saddle point of
//! its powers.
//!
//! For `y ∈ (0, t)` the map `φ(r) = r R_t'(r)/R_t(r)` is a strictly increasing
//! bijection from `(0, ∞)` onto `(0, t)`, so `φ(r_0) = y` has one positive root.
//! Reading `w_i = r^i/i!` as weights on `{0, …, t}`, `φ(r)` is the mean of that
//! distribution and `s = r φ'(r)` its variance. Both are computed from the
//! weights directly, and the distance to the top degree `t - φ(r)` is summed
//! from non-negative terms, so nothing cancels when `y` approaches `t` and
//! `r_0` grows without bound.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{domain, Error, Result};
use crate::scalar::{count, real, solver_tolerance, Real};

/// Default number of trapezoid nodes on the saddle circle.
pub const DEFAULT_CONTOUR_NODES: usize = 4096;

const MAX_NEWTON_STEPS: usize = 200;

/// `R_t(z) = Σ_{i=0}^{t} z^i/i!` with exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncExpPoly {
    coeffs: Vec<BigRational>,
    float_coeffs: Vec<f64>,
}

impl TruncExpPoly {
    pub fn new(t: usize) -> Self {
        let mut coeffs = Vec::with_capacity(t + 1);
        let mut c = BigRational::one();
        coeffs.push(c.clone());
        for i in 1..=t {
            c /= BigRational::from_integer(BigInt::from(i));
            coeffs.push(c.clone());
        }
        let float_coeffs = coeffs
            .iter()
            .map(|c| c.to_f64().expect("1/i! is representable"))
            .collect();
        Self {
            coeffs,
            float_coeffs,
        }
    }

    /// The degree `t`.
    pub fn t(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exact coefficients, `coeffs()[i] = 1/i!`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Horner evaluation at a complex point.
    pub fn eval<F: Real>(&self, z: Complex<F>) -> Complex<F> {
        self.float_coeffs
            .iter()
            .rev()
            .fold(Complex::new(F::zero(), F::zero()), |acc, &c| {
                acc * z + Complex::new(real::<F>(c), F::zero())
            })
    }

    /// Horner evaluation at a real point.
    pub fn eval_real<F: Real>(&self, x: F) -> F {
        self.float_coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, &c| acc * x + real::<F>(c))
    }

    /// Weights `r^i/i!`, divided by `r^t` when `r > 1` so nothing overflows.
    fn weights<F: Real>(&self, r: F) -> Vec<F> {
        let t = self.t();
        if r <= F::one() {
            let mut pow = F::one();
            self.float_coeffs
                .iter()
                .map(|&c| {
                    let w = real::<F>(c) * pow;
                    pow = pow * r;
                    w
                })
                .collect()
        } else {
            let inv = r.recip();
            let mut out = vec![F::zero(); t + 1];
            let mut pow = F::one();
            for i in (0..=t).rev() {
                out[i] = real::<F>(self.float_coeffs[i]) * pow;
                pow = pow * inv;
            }
            out
        }
    }

    fn stats<F: Real>(&self, r: F) -> WeightStats<F> {
        let t = self.t();
        let w = self.weights(r);
        let total = w.iter().fold(F::zero(), |a, &x| a + x);
        let mean = w
            .iter()
            .enumerate()
            .fold(F::zero(), |a, (i, &x)| a + count::<F>(i as u64) * x)
            / total;
        let gap = w
            .iter()
            .enumerate()
            .fold(F::zero(), |a, (i, &x)| a + count::<F>((t - i) as u64) * x)
            / total;
        let t_f = count::<F>(t as u64);
        let var = w
            .iter()
            .enumerate()
            .fold(F::zero(), |a, (i, &x)| {
                let d = count::<F>(i as u64) - t_f + gap;
                a + x * d * d
            })
            / total;
        let ln_r_value = if r <= F::one() {
            total.ln()
        } else {
            total.ln() + t_f * r.ln()
        };
        WeightStats {
            mean,
            gap,
            var,
            ln_r_value,
        }
    }

    fn check_saddle_args<F: Real>(&self, r: F) -> Result<()> {
        if self.t() == 0 {
            return domain("t = 0: r R'(r)/R(r) vanishes identically");
        }
        if !(r > F::zero()) || !r.is_finite() {
            return domain(format!("radius must be positive and finite, got {r}"));
        }
        Ok(())
    }

    /// `φ(r) = r R_t'(r)/R_t(r)`, in `(0, t)`.
    pub fn phi<F: Real>(&self, r: F) -> Result<F> {
        self.check_saddle_args(r)?;
        Ok(self.stats(r).mean)
    }

    /// `r φ'(r)`, the closed-form derivative `r (N'R − NR')/R²` with `N = rR'`.
    pub fn phi_slope<F: Real>(&self, r: F) -> Result<F> {
        self.check_saddle_args(r)?;
        Ok(self.stats(r).var)
    }

    /// `ln R_t(r)` for `r > 0`, overflow-free.
    pub fn ln_eval<F: Real>(&self, r: F) -> F {
        self.stats(r).ln_r_value
    }

    /// Solves `φ(r_0) = y` for `0 < y < t`.
    ///
    /// Newton's method in `ln r` (the slope there is `s`), started at
    /// `max(t/(t−y), 10⁻³)` and guarded by a bisection bracket. Near `y = t` the
    /// residual is measured on `t − y` instead of `y` so the root keeps full
    /// relative accuracy.
    pub fn solve_r0<F: Real>(&self, y: F) -> Result<SaddleData<F>> {
        let t = self.t();
        if t == 0 {
            return domain("t = 0 has no saddle equation");
        }
        let t_f = count::<F>(t as u64);
        if !(y > F::zero() && y < t_f) {
            return domain(format!("saddle target y = {y} must lie in (0, {t})"));
        }
        let gap_target = t_f - y;
        let upper_half = y > t_f * real(0.5);
        // residual > 0 means r is too large
        let residual = |st: &WeightStats<F>| {
            if upper_half {
                gap_target - st.gap
            } else {
                st.mean - y
            }
        };
        let scale = if upper_half { gap_target } else { y };
        let tol = solver_tolerance::<F>();

        let guess = r0_asymptotic(t, y)?;
        let mut lo = real::<F>(1e-9).min(y * real(1e-3)).ln();
        let mut hi = (guess * real(1e3)).ln();
        while residual(&self.stats(lo.exp())) > F::zero() {
            lo = lo - real(10.0);
        }
        while residual(&self.stats(hi.exp())) < F::zero() {
            hi = hi + real(10.0);
        }

        let mut x = guess.max(real(1e-3)).ln();
        for _ in 0..MAX_NEWTON_STEPS {
            let st = self.stats(x.exp());
            let res = residual(&st);
            if res.abs() <= tol * scale {
                return Ok(SaddleData {
                    y,
                    r0: x.exp(),
                    s: st.var,
                });
            }
            if res > F::zero() {
                hi = x;
            } else {
                lo = x;
            }
            let newton = x - res / st.var;
            x = if newton.is_finite() && newton > lo && newton < hi {
                newton
            } else {
                (lo + hi) * real(0.5)
            };
            if hi - lo <= F::epsilon() * hi.abs().max(F::one()) {
                break;
            }
        }
        let st = self.stats(x.exp());
        if residual(&st).abs() <= tol * scale * real(1e3) {
            Ok(SaddleData {
                y,
                r0: x.exp(),
                s: st.var,
            })
        } else {
            Err(Error::LossOfPrecision(format!(
                "saddle solver did not converge for t = {t}, y = {y}"
            )))
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct WeightStats<F> {
    mean: F,
    gap: F,
    var: F,
    ln_r_value: F,
}

/// Solution `(y, r_0(y), s(y))` of the saddle equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddleData<F> {
    pub y: F,
    pub r0: F,
    pub s: F,
}

/// Leading-order root `t/(t − y)`, used to seed the solver.
pub fn r0_asymptotic<F: Real>(t: usize, y: F) -> Result<F> {
    let t_f = count::<F>(t as u64);
    if t == 0 || !(y > F::zero() && y < t_f) {
        return domain(format!("need t >= 1 and 0 < y < t, got t = {t}, y = {y}"));
    }
    Ok(t_f / (t_f - y))
}

/// Whether `t − ln k/√k ≤ 2m/k ≤ t − 1/(√k ln k)`, the range where the
/// saddle-point estimate is uniformly accurate.
pub fn in_accuracy_window(t: usize, k: usize, m: usize) -> bool {
    if k < 2 {
        return false;
    }
    let (t, k, y) = (t as f64, k as f64, 2.0 * m as f64 / k as f64);
    let (lnk, sk) = (k.ln(), k.sqrt());
    t - lnk / sk <= y && y <= t - 1.0 / (sk * lnk)
}

/// Saddle-point estimate of `ln C_{2m}(t, k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddleApprox<F> {
    pub log_value: F,
    pub in_window: bool,
    pub saddle: SaddleData<F>,
}

fn check_interior(t: usize, k: usize, m: usize) -> Result<()> {
    if t == 0 {
        return domain("t = 0 has no saddle point");
    }
    if m == 0 || 2 * m >= t * k {
        return domain(format!("need 0 < 2m < tk, got t = {t}, k = {k}, m = {m}"));
    }
    Ok(())
}

/// `ln[ R_t(r_0)^k / (r_0^{2m} √(2π k s)) ]` with `r_0 = r_0(2m/k)`, plus a flag
/// telling whether `m` sits inside [`in_accuracy_window`].
///
/// Evaluated for any interior `m`; accuracy is only guaranteed in the window.
#[allow(non_snake_case)]
pub fn approx_log_C<F: Real>(t: usize, k: usize, m: usize) -> Result<SaddleApprox<F>> {
    if k < 2 {
        return domain("saddle approximation needs k >= 2");
    }
    check_interior(t, k, m)?;
    let poly = TruncExpPoly::new(t);
    let y = count::<F>(2 * m as u64) / count::<F>(k as u64);
    let saddle = poly.solve_r0(y)?;
    let k_f = count::<F>(k as u64);
    let log_value = k_f * poly.ln_eval(saddle.r0)
        - count::<F>(2 * m as u64) * saddle.r0.ln()
        - real::<F>(0.5) * (F::TAU() * k_f * saddle.s).ln();
    Ok(SaddleApprox {
        log_value,
        in_window: in_accuracy_window(t, k, m),
        saddle,
    })
}

/// `ln C_{2m}(t, k)` from Cauchy's formula on the circle of radius `r_0`.
///
/// The integrand is divided by `R(r_0)^k` so each node contributes a number of
/// modulus at most one; the trapezoid rule on `n_nodes` equispaced points is
/// exact up to aliasing of coefficients `n_nodes` degrees away.
///
/// Accepts `0 ≤ 2m ≤ tk`. At the endpoints there is no saddle point, so the
/// radius is taken at `y` moved half a unit (`1/(2k)`) inside `(0, t)`; any
/// circle gives the right coefficient, only the conditioning changes.
#[allow(non_snake_case)]
pub fn contour_log_C<F: Real>(t: usize, k: usize, m: usize, n_nodes: usize) -> Result<F> {
    if t == 0 || k == 0 || 2 * m > t * k {
        return domain(format!("need t >= 1, k >= 1, 2m <= tk, got t = {t}, k = {k}, m = {m}"));
    }
    if n_nodes < 64 {
        return domain(format!("contour quadrature needs at least 64 nodes, got {n_nodes}"));
    }
    let k_exp = u32::try_from(k).map_err(|_| Error::Domain(format!("k = {k} too large")))?;
    let poly = TruncExpPoly::new(t);
    // At the endpoints m = 0 and 2m = tk there is no saddle; any circle works
    // for Cauchy's formula, so the radius is taken half a degree inside.
    let k_f = count::<F>(k as u64);
    let half_step = real::<F>(0.5) / k_f;
    let t_f = count::<F>(t as u64);
    let y = (count::<F>(2 * m as u64) / k_f).max(half_step).min(t_f - half_step);
    let saddle = poly.solve_r0(y)?;
    let w = poly.weights(saddle.r0);
    let total = w.iter().fold(F::zero(), |a, &x| a + x);
    let w: Vec<F> = w.into_iter().map(|x| x / total).collect();

    let two_m = count::<F>(2 * m as u64);
    let mut sum = F::zero();
    let mut abs_sum = F::zero();
    let mut off_saddle_alive = false;
    for j in 0..n_nodes {
        let angle = F::TAU() * count::<F>(j as u64) / count::<F>(n_nodes as u64);
        let ratio = w
            .iter()
            .enumerate()
            .fold(Complex::new(F::zero(), F::zero()), |acc, (i, &wi)| {
                acc + Complex::from_polar(wi, count::<F>(i as u64) * angle)
            });
        let term = ratio.powu(k_exp) * Complex::from_polar(F::one(), -two_m * angle);
        let modulus = term.norm();
        if j != 0 && modulus > F::zero() {
            off_saddle_alive = true;
        }
        sum = sum + term.re;
        abs_sum = abs_sum + modulus;
    }
    if !off_saddle_alive {
        return Err(Error::LossOfPrecision(format!(
            "integrand underflows off the saddle (t = {t}, k = {k}, m = {m}, nodes = {n_nodes})"
        )));
    }
    let nodes = count::<F>(n_nodes as u64);
    let mean = sum / nodes;
    let roundoff = F::epsilon() * real::<F>(4.0) * (count::<F>(k as u64) + count::<F>(t as u64 + 2)) * abs_sum
        / nodes;
    if !(mean > roundoff) {
        return Err(Error::LossOfPrecision(format!(
            "normalised contour integral {mean} is below its rounding error {roundoff}"
        )));
    }
    Ok(mean.ln() + k_f * poly.ln_eval(saddle.r0) - two_m * saddle.r0.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_counts::exact_C;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn coefficient_invariants() {
        for t in 0..8 {
            let p = TruncExpPoly::new(t);
            assert_eq!(p.coeffs().len(), t + 1);
            assert!(p.coeffs()[0].is_one());
            for i in 1..=t {
                assert_eq!(
                    &p.coeffs()[i] * BigRational::from_integer(BigInt::from(i)),
                    p.coeffs()[i - 1]
                );
            }
        }
    }

    #[test]
    fn eval_examples() {
        let z = Complex::new(2.0_f64, 0.0);
        assert_eq!(TruncExpPoly::new(1).eval(z), Complex::new(3.0, 0.0));
        assert_eq!(
            TruncExpPoly::new(0).eval(Complex::new(-7.5_f64, 3.0)),
            Complex::new(1.0, 0.0)
        );
        let v = TruncExpPoly::new(2).eval_real(2f64.sqrt());
        assert!(close(v, 2.0 + 2f64.sqrt(), 1e-15));
        // real non-negative argument gives a real value >= 1
        let c = TruncExpPoly::new(5).eval(Complex::new(0.3_f64, 0.0));
        assert_eq!(c.im, 0.0);
        assert!(c.re >= 1.0);
    }

    #[test]
    fn phi_examples() {
        assert!(close(TruncExpPoly::new(1).phi(1.0_f64).unwrap(), 0.5, 1e-15));
        assert!(close(TruncExpPoly::new(2).phi(2f64.sqrt()).unwrap(), 1.0, 1e-14));
        let p3 = TruncExpPoly::new(3);
        let tiny = p3.phi(1e-9_f64).unwrap();
        assert!(tiny > 0.0 && tiny < 1e-8);
    }

    #[test]
    fn phi_rejects_bad_inputs() {
        let p = TruncExpPoly::new(2);
        assert!(matches!(p.phi(0.0_f64), Err(Error::Domain(_))));
        assert!(matches!(p.phi(-1.0_f64), Err(Error::Domain(_))));
        assert!(matches!(TruncExpPoly::new(0).phi(1.0_f64), Err(Error::Domain(_))));
    }

    #[test]
    fn phi_slope_matches_finite_difference() {
        let p = TruncExpPoly::new(4);
        for &r in &[0.05_f64, 0.7, 3.0, 40.0] {
            let h = r * 1e-6;
            let fd = (p.phi(r + h).unwrap() - p.phi(r - h).unwrap()) / (2.0 * h);
            assert!(close(p.phi_slope(r).unwrap(), r * fd, 1e-7), "r = {r}");
        }
    }

    #[test]
    fn solve_examples() {
        let s = TruncExpPoly::new(1).solve_r0(0.5_f64).unwrap();
        assert!(close(s.r0, 1.0, 1e-12) && close(s.s, 0.25, 1e-12));
        let s = TruncExpPoly::new(2).solve_r0(1.0_f64).unwrap();
        assert!(close(s.r0, 2f64.sqrt(), 1e-12));
        assert!(close(s.s, 2.0 - 2f64.sqrt(), 1e-12));
        let s = TruncExpPoly::new(1).solve_r0(0.9_f64).unwrap();
        assert!(close(s.r0, 9.0, 1e-12) && close(s.s, 0.09, 1e-12));
    }

    #[test]
    fn solve_domain_errors() {
        let p = TruncExpPoly::new(3);
        for y in [0.0_f64, -0.1, 3.0, 3.5] {
            assert!(matches!(p.solve_r0(y), Err(Error::Domain(_))), "y = {y}");
        }
        assert!(TruncExpPoly::new(0).solve_r0(0.5_f64).is_err());
    }

    #[test]
    fn asymptotic_examples() {
        assert!(close(r0_asymptotic(1, 0.9_f64).unwrap(), 10.0, 1e-12));
        assert!(close(r0_asymptotic(2, 1.0_f64).unwrap(), 2.0, 1e-15));
        assert!(r0_asymptotic(5, 5.0 - 1e-12_f64).unwrap() > 1e11);
        assert!(r0_asymptotic(5, 5.0_f64).is_err());
    }

    #[test]
    fn asymptotic_gap_and_s_scaling_near_top() {
        for t in 1..=5usize {
            let p = TruncExpPoly::new(t);
            let mut prev_dev = f64::INFINITY;
            for j in 1..=40 {
                let y = t as f64 - 2f64.powi(-j);
                let sd = p.solve_r0(y).unwrap();
                let gap = (sd.r0 - r0_asymptotic(t, y).unwrap()).abs();
                assert!(gap <= t as f64 + 1.0, "t = {t}, j = {j}, gap = {gap}");
                let dev = (sd.s * sd.r0 / t as f64 - 1.0).abs();
                if j >= 10 {
                    assert!(dev <= prev_dev + 1e-9, "t = {t}, j = {j}");
                }
                prev_dev = dev;
            }
            assert!(prev_dev < 1e-9);
        }
    }

    #[test]
    fn approx_worked_case() {
        let a = approx_log_C::<f64>(1, 100, 45).unwrap();
        let exact = exact_C(1, 100, 45).unwrap().ln_value();
        assert!(close(a.log_value.exp(), 1.746e13, 1e-3));
        assert!(close((a.log_value - exact).exp(), 1.009, 2e-3));
    }

    #[test]
    fn approx_flags_tiny_k_out_of_window() {
        let a = approx_log_C::<f64>(2, 4, 1).unwrap();
        assert!(!a.in_window);
        assert!(a.log_value.is_finite());
        assert!(approx_log_C::<f64>(1, 10, 5).is_err());
        assert!(approx_log_C::<f64>(1, 10, 0).is_err());
    }

    #[test]
    fn approx_handles_very_large_k() {
        let k = 1_000_000;
        let m = (k - 2000) / 2;
        let a = approx_log_C::<f64>(3, k, m + k).unwrap();
        assert!(a.log_value.is_finite());
    }

    #[test]
    fn contour_examples() {
        let v = contour_log_C::<f64>(1, 10, 3, DEFAULT_CONTOUR_NODES).unwrap();
        assert!(close(v.exp(), 210.0, 1e-6));
        let v = contour_log_C::<f64>(2, 2, 2, 64).unwrap();
        assert!(close(v.exp(), 0.25, 1e-6));
        let v = contour_log_C::<f64>(2, 5, 0, 64).unwrap();
        assert!(v.abs() < 1e-6);
        assert!(contour_log_C::<f64>(2, 2, 3, 64).is_err());
        let v = contour_log_C::<f64>(3, 6, 4, DEFAULT_CONTOUR_NODES).unwrap();
        let exact = exact_C(3, 6, 4).unwrap().ln_value();
        assert!(((v - exact).exp() - 1.0).abs() <= 1e-6);
        assert!(contour_log_C::<f64>(3, 6, 4, 63).is_err());
    }

    #[test]
    fn f32_solver_runs() {
        let s = TruncExpPoly::new(2).solve_r0(1.0_f32).unwrap();
        assert!((s.r0 - 2f32.sqrt()).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn phi_increasing(t in 1usize..7, a in -6.0f64..6.0, d in 1e-3f64..2.0) {
            let p = TruncExpPoly::new(t);
            let r1 = a.exp();
            let r2 = (a + d).exp();
            prop_assert!(p.phi(r1).unwrap() < p.phi(r2).unwrap());
        }

        #[test]
        fn solve_round_trip(t in 1usize..7, frac in 0.01f64..0.99) {
            let p = TruncExpPoly::new(t);
            let y = frac * t as f64;
            let sd = p.solve_r0(y).unwrap();
            prop_assert!(sd.s > 0.0 && sd.r0 > 0.0);
            let back = p.phi(sd.r0).unwrap();
            prop_assert!((back - y).abs() <= 1e-10 * y);
        }
    }
}
