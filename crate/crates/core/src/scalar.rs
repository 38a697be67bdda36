//! Scalar abstraction for the floating-point side of the crate.
//!
//! Every real-valued routine is written against [`Real`], so the same code runs
//! in `f64` (the default, see the aliases at the crate root) or `f32`. Exact
//! quantities never go through this trait; they live in `num_rational` types.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point: f32 or f64.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Converts an `f64` constant into the working scalar.
#[inline]
pub fn real<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("f64 constant representable in scalar type")
}

/// Converts an unsigned count into the working scalar.
#[inline]
pub fn count<F: Real>(n: u64) -> F {
    F::from_u64(n).expect("count representable in scalar type")
}

/// Relative tolerance that a root solver can actually reach in `F`.
pub fn solver_tolerance<F: Real>() -> F {
    real::<F>(1e-12).max(F::epsilon() * real(16.0))
}

/// `ln Γ(x)` for `x > 0`.
///
/// Stirling's series with terms through `x^-9`, applied after shifting the
/// argument above 15 with the recurrence `Γ(x+1) = xΓ(x)`. Relative accuracy is
/// about `1e-15` in `f64`.
pub fn ln_gamma<F: Real>(x: F) -> F {
    debug_assert!(x > F::zero(), "ln_gamma needs a positive argument");
    let shift_to = real::<F>(15.0);
    let mut x = x;
    let mut shift = F::zero();
    while x < shift_to {
        shift = shift + x.ln();
        x = x + F::one();
    }
    let inv = x.recip();
    let inv2 = inv * inv;
    // Bernoulli-number coefficients B_{2j} / (2j (2j-1)).
    let series = inv
        * (real::<F>(1.0 / 12.0)
            - inv2
                * (real::<F>(1.0 / 360.0)
                    - inv2
                        * (real::<F>(1.0 / 1260.0)
                            - inv2 * (real::<F>(1.0 / 1680.0) - inv2 * real(1.0 / 1188.0)))));
    (x - real(0.5)) * x.ln() - x + real::<F>(0.5) * (F::TAU()).ln() + series - shift
}

/// `ln n!`, exact summation below 32 and Stirling above.
pub fn ln_factorial<F: Real>(n: u64) -> F {
    if n < 32 {
        (2..=n).fold(F::zero(), |acc, i| acc + count::<F>(i).ln())
    } else {
        ln_gamma(count::<F>(n) + F::one())
    }
}

/// `ln C(n, k)`; `-inf` when `k > n`.
///
/// For small `k` the falling product is summed directly, which avoids the
/// cancellation of two huge `ln Γ` values when `n` is large.
pub fn ln_binomial<F: Real>(n: u64, k: u64) -> F {
    if k > n {
        return F::neg_infinity();
    }
    let k = k.min(n - k);
    if k <= 256 {
        let falling = (0..k).fold(F::zero(), |acc, i| acc + count::<F>(n - i).ln());
        falling - ln_factorial::<F>(k)
    } else {
        ln_factorial::<F>(n) - ln_factorial::<F>(k) - ln_factorial::<F>(n - k)
    }
}

/// `ln Σ exp(x_i)` with the maximum factored out; `-inf` for an empty slice or
/// when every term is `-inf`.
pub fn log_sum_exp<F: Real>(xs: &[F]) -> F {
    let max = xs.iter().copied().fold(F::neg_infinity(), F::max);
    if max == F::neg_infinity() {
        return max;
    }
    let sum = xs.iter().fold(F::zero(), |acc, &x| acc + (x - max).exp());
    max + sum.ln()
}
