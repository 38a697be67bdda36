//! Exact coefficients of `R_t(z)^k` and the counts built from them.
//!
//! `C_{2m}(t, k)` is the coefficient of `z^{2m}` in `(Σ_{i≤t} z^i/i!)^k`, i.e. the
//! sum of `1/Π d_i!` over degree sequences `d_1..d_k` with entries at most `t`
//! and total `2m`. The dynamic program below convolves the scaled integer
//! polynomial `Σ (t!/i!) z^i` with itself `k` times and divides by `(t!)^k` at
//! the end, so every intermediate value is an exact integer.

use std::fmt;
use std::ops::{AddAssign, Mul};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Exact non-negative rational count with a natural-log view.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(Ratio<BigUint>);

impl BigCount {
    pub fn zero() -> Self {
        Self(Ratio::from_integer(BigUint::zero()))
    }

    pub fn one() -> Self {
        Self(Ratio::from_integer(BigUint::one()))
    }

    pub fn from_integer(n: impl Into<BigUint>) -> Self {
        Self(Ratio::from_integer(n.into()))
    }

    /// Builds `num/den` reduced to lowest terms.
    ///
    /// # Panics
    /// Panics if `den` is zero.
    pub fn from_ratio(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Self {
        Self(Ratio::new(num.into(), den.into()))
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.numer().is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn as_ratio(&self) -> &Ratio<BigUint> {
        &self.0
    }

    /// `ln(num) - ln(den)`, or `-inf` for zero. Finite for any size of operands.
    pub fn ln_value(&self) -> f64 {
        ln_biguint(self.numer()) - ln_biguint(self.denom())
    }

    /// Nearest `f64`; overflows to `inf` for huge values, use [`Self::ln_value`] there.
    pub fn to_f64(&self) -> f64 {
        let num = self.numer().to_f64().unwrap_or(f64::INFINITY);
        let den = self.denom().to_f64().unwrap_or(f64::INFINITY);
        if num.is_finite() && den.is_finite() {
            num / den
        } else {
            self.ln_value().exp()
        }
    }
}

impl Mul for BigCount {
    type Output = BigCount;

    fn mul(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 * rhs.0)
    }
}

impl fmt::Debug for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigCount({self})")
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

/// Natural log of an arbitrary-size unsigned integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit head fits in f64");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Coefficients of `base(z)^k` up to degree `max_degree`, by `k` successive
/// convolutions with `base`.
///
/// Generic over the coefficient ring: exact callers use `BigUint` or
/// `Ratio<BigInt>`, tests also run it in `f64`.
pub fn power_coefficients<T>(base: &[T], k: usize, max_degree: usize) -> Vec<T>
where
    T: Clone + Zero + One + AddAssign,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    let mut cur = vec![T::one()];
    if base.is_empty() {
        return if k == 0 { cur } else { vec![T::zero()] };
    }
    let width = base.len() - 1;
    for _ in 0..k {
        let len = (cur.len() + width).min(max_degree + 1);
        let mut next = vec![T::zero(); len];
        for (j, slot) in next.iter_mut().enumerate() {
            let lo = j.saturating_sub(cur.len() - 1);
            for i in lo..=j.min(width) {
                let c = &cur[j - i];
                if c.is_zero() {
                    continue;
                }
                *slot += &base[i] * c;
            }
        }
        cur = next;
    }
    cur
}

/// `t!/i!` for `0 ≤ i ≤ t`: the coefficients of `t!·R_t(z)`.
fn scaled_base(t: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::one(); t + 1];
    // out[i] = t!/i! = (i+1)(i+2)...t
    for i in (0..t).rev() {
        out[i] = &out[i + 1] * BigUint::from(i + 1);
    }
    out
}

fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return domain("k must be at least 1");
    }
    Ok(())
}

/// Exact `C_{2m}(t, k)`; zero when `2m > tk`.
#[allow(non_snake_case)]
pub fn exact_C(t: usize, k: usize, m: usize) -> Result<BigCount> {
    check_k(k)?;
    let degree = 2 * m;
    if degree > t * k {
        return Ok(BigCount::zero());
    }
    let row = power_coefficients(&scaled_base(t), k, degree);
    let num = row.into_iter().nth(degree).unwrap_or_default();
    Ok(BigCount::from_ratio(num, factorial(t as u64).pow(k as u32)))
}

/// The full coefficient vector of `R_t(z)^k`, kept in scaled-integer form.
///
/// One DP pass serves every `m`, which is what moment profiles need.
#[derive(Clone, Debug)]
pub struct CoefficientRow {
    t: usize,
    k: usize,
    scaled: Vec<BigUint>,
    ln_scale: f64,
}

impl CoefficientRow {
    pub fn new(t: usize, k: usize) -> Result<Self> {
        check_k(k)?;
        let scaled = power_coefficients(&scaled_base(t), k, t * k);
        let ln_scale = k as f64 * ln_biguint(&factorial(t as u64));
        Ok(Self {
            t,
            k,
            scaled,
            ln_scale,
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Largest `m` with a non-zero coefficient, `⌊tk/2⌋`.
    pub fn max_m(&self) -> usize {
        self.t * self.k / 2
    }

    /// Exact `C_{2m}(t, k)`.
    pub fn c(&self, m: usize) -> BigCount {
        match self.scaled.get(2 * m) {
            Some(num) => BigCount::from_ratio(
                num.clone(),
                factorial(self.t as u64).pow(self.k as u32),
            ),
            None => BigCount::zero(),
        }
    }

    /// `ln C_{2m}(t, k)` without forming the reduced fraction.
    pub fn ln_c(&self, m: usize) -> f64 {
        match self.scaled.get(2 * m) {
            Some(num) => ln_biguint(num) - self.ln_scale,
            None => f64::NEG_INFINITY,
        }
    }

    /// Sum of every coefficient (all degrees), scaled back: equals `R_t(1)^k`.
    pub fn total(&self) -> BigCount {
        let sum = self.scaled.iter().fold(BigUint::zero(), |acc, x| acc + x);
        BigCount::from_ratio(sum, factorial(self.t as u64).pow(self.k as u32))
    }
}

/// `S_{2m}(t, k) = (2m)!·C_{2m}(t, k)`: allocations of `2m` labelled balls into
/// `k` bins holding at most `t` each.
#[allow(non_snake_case)]
pub fn allocations_S(t: usize, k: usize, m: usize) -> Result<BigCount> {
    let c = exact_C(t, k, m)?;
    let s = c * BigCount::from_integer(factorial(2 * m as u64));
    debug_assert!(s.is_integer());
    Ok(s)
}

/// `(2m)!/(m!·2^m)`, the number of perfect matchings on `2m` points.
pub fn pairings(m: usize) -> BigUint {
    // (2m-1)!! = 1·3·5···(2m-1)
    (0..m as u64).fold(BigUint::one(), |acc, i| acc * (2 * i + 1))
}

/// Configuration-model upper bound `C_{2m}(t,k)·(2m)!/(m!·2^m)` on the number of
/// labelled graphs with `k` vertices, `m` edges and maximum degree at most `t`.
pub fn pairing_bound(t: usize, k: usize, m: usize) -> Result<BigCount> {
    Ok(exact_C(t, k, m)? * BigCount::from_integer(pairings(m)))
}

/// Largest vertex count the exhaustive graph census accepts (`C(8,2) = 28` edges).
pub const MAX_CENSUS_VERTICES: usize = 8;

/// Exhaustive tally of every labelled graph on `k ≤ 8` vertices by edge count
/// and maximum degree.
#[derive(Clone, Debug)]
pub struct GraphCensus {
    k: usize,
    // counts[m][d]: graphs with m edges and maximum degree exactly d
    counts: Vec<Vec<u64>>,
}

impl GraphCensus {
    /// Walks all `2^{C(k,2)}` edge subsets in Gray-code order.
    pub fn new(k: usize) -> Result<Self> {
        if k > MAX_CENSUS_VERTICES {
            return Err(Error::OracleScale(format!(
                "graph census needs k <= {MAX_CENSUS_VERTICES}, got {k}"
            )));
        }
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|u| (u + 1..k).map(move |v| (u, v)))
            .collect();
        let e = pairs.len();
        let max_deg = k.saturating_sub(1);
        let mut counts = vec![vec![0u64; max_deg + 1]; e + 1];
        let mut deg = [0u8; MAX_CENSUS_VERTICES];
        let mut mask: u64 = 0;
        let mut edges = 0usize;
        counts[0][0] = 1;
        for step in 1u64..(1u64 << e) {
            let bit = step.trailing_zeros() as usize;
            let (u, v) = pairs[bit];
            if mask >> bit & 1 == 1 {
                deg[u] -= 1;
                deg[v] -= 1;
                edges -= 1;
            } else {
                deg[u] += 1;
                deg[v] += 1;
                edges += 1;
            }
            mask ^= 1 << bit;
            let d = deg[..k].iter().copied().max().unwrap_or(0) as usize;
            counts[edges][d] += 1;
        }
        Ok(Self { k, counts })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Graphs with exactly `m` edges and maximum degree at most `t`.
    pub fn count(&self, m: usize, t: usize) -> u64 {
        self.counts
            .get(m)
            .map(|row| row.iter().take(t + 1).sum())
            .unwrap_or(0)
    }

    /// Total graphs with `m` edges, `C(C(k,2), m)`.
    pub fn count_any(&self, m: usize) -> u64 {
        self.counts.get(m).map(|row| row.iter().sum()).unwrap_or(0)
    }
}

/// Number of labelled graphs on `k ≤ 8` vertices with exactly `m` edges and
/// maximum degree at most `t`, by exhaustive enumeration.
pub fn brute_graph_count(k: usize, m: usize, t: usize) -> Result<BigCount> {
    Ok(BigCount::from_integer(GraphCensus::new(k)?.count(m, t)))
}

/// `gcd(num, den)` is 1 for every stored count.
pub fn is_normalized(c: &BigCount) -> bool {
    c.numer().gcd(c.denom()).is_one()
}
