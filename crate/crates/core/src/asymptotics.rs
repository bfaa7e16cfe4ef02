//! Bernoulli numbers, Faulhaber power sums and the large-`s` behaviour of
//! expected values.
//!
//! Bernoulli numbers use the `B_1 = -1/2` convention throughout. Faulhaber's
//! formula is then
//!
//! ```text
//! sum_{i=1}^{n} i^r = 1/(r+1) * sum_{j=0}^{r} (-1)^j C(r+1, j) B_j n^(r+1-j)
//! ```
//!
//! With the opposite convention (`B_1 = +1/2`) the `(-1)^j` factor would have to
//! go, so do not mix tables from elsewhere into this module.

use std::sync::RwLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, binomial_row};
use crate::experiment::{ExperimentSpec, Mode};
use crate::rational::{self, Rational};

/// Exact Bernoulli numbers `B_0..=B_max_index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl BernoulliTable {
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, index: usize) -> Option<&Rational> {
        self.values.get(index)
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }
}

// Shared, grow-only cache of B_0, B_1, ...
static BERNOULLI_CACHE: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

fn extend_bernoulli(values: &mut Vec<Rational>, max_index: usize) {
    if values.is_empty() {
        values.push(Rational::one());
    }
    // B_m = -1/(m+1) * sum_{j=0}^{m-1} C(m+1, j) B_j
    while values.len() <= max_index {
        let m = values.len();
        let row = binomial_row(m as u32 + 1);
        let partial = values
            .iter()
            .zip(&row)
            .fold(Rational::zero(), |acc, (b, c)| {
                acc + b * Rational::from_integer(BigInt::from(c.clone()))
            });
        values.push(-partial / rational::from_int(m as u64 + 1));
    }
}

fn with_bernoulli<T>(max_index: usize, f: impl FnOnce(&[Rational]) -> T) -> T {
    {
        let cache = BERNOULLI_CACHE.read().unwrap_or_else(|e| e.into_inner());
        if cache.len() > max_index {
            return f(&cache[..=max_index]);
        }
    }
    let mut cache = BERNOULLI_CACHE.write().unwrap_or_else(|e| e.into_inner());
    extend_bernoulli(&mut cache, max_index);
    f(&cache[..=max_index])
}

/// `B_0..=B_max_index` from the recurrence `sum_{j=0}^{m} C(m+1, j) B_j = 0`.
pub fn bernoulli_table(max_index: usize) -> BernoulliTable {
    BernoulliTable {
        values: with_bernoulli(max_index, <[Rational]>::to_vec),
    }
}

/// Faulhaber's polynomial for `sum_{i=1}^{n} i^r`, evaluated in rationals.
///
/// The result is always an integer; [`faulhaber_sum`] checks that.
pub fn faulhaber_rational(n: u64, r: u32) -> Rational {
    let row = binomial_row(r + 1);
    let n_big = BigInt::from(n);
    with_bernoulli(r as usize, |bernoulli| {
        let mut power = n_big.clone(); // n^(r+1-j), starting at j = r
        let mut total = Rational::zero();
        for j in (0..=r as usize).rev() {
            let coeff = BigInt::from(row[j].clone()) * &power;
            let term = &bernoulli[j] * Rational::from_integer(coeff);
            if j % 2 == 1 {
                total -= term;
            } else {
                total += term;
            }
            power *= &n_big;
        }
        total / rational::from_int(r + 1)
    })
}

/// `sum_{i=1}^{n} i^r` in `O(r^2)` big-number operations, independent of `n`.
pub fn faulhaber_sum(n: u64, r: u32) -> BigUint {
    let value = faulhaber_rational(n, r);
    assert!(
        value.is_integer(),
        "Faulhaber evaluation for n={n}, r={r} did not reduce to an integer: {value}"
    );
    let (sign, magnitude) = value.to_integer().into_parts();
    assert!(sign != Sign::Minus, "negative power sum for n={n}, r={r}");
    magnitude
}

fn require_rolls(r: u32) -> Result<()> {
    if r >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidRolls(r))
    }
}

/// Limit of `E/s` as `s -> inf`: `r/(r+1)` for advantage, `1/(r+1)` for
/// disadvantage.
pub fn limit_ratio(mode: Mode, r: u32) -> Result<Rational> {
    require_rolls(r)?;
    match mode {
        Mode::Advantage => Ok(rational::ratio(r, r + 1)),
        Mode::Disadvantage => Ok(rational::ratio(1u32, r + 1)),
        Mode::Single => Err(Error::NoLimit(Mode::Single.name())),
    }
}

fn base_expected_value(s: u64) -> Rational {
    rational::ratio(s + 1, 2u32)
}

/// `(E[max] - E[X]) / E[X]` where `E[X] = (s+1)/2`.
pub fn relative_gain(r: u32, s: u64) -> Result<Rational> {
    let spec = ExperimentSpec::advantage(s, r)?;
    let base = base_expected_value(s);
    Ok((exact::expected_value(&spec) - &base) / base)
}

/// `(E[X] - E[min]) / E[X]`.
pub fn relative_loss(r: u32, s: u64) -> Result<Rational> {
    let spec = ExperimentSpec::disadvantage(s, r)?;
    let base = base_expected_value(s);
    Ok((&base - exact::expected_value(&spec)) / base)
}

/// `(r-1)/(r+1)`, the common large-`s` limit of relative gain and loss.
pub fn gain_loss_limit(r: u32) -> Result<Rational> {
    require_rolls(r)?;
    Ok(rational::ratio(r - 1, r + 1))
}

/// One point of a convergence table: `E/s` at a given die size against its
/// large-`s` limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceRow {
    sides: u64,
    ratio: Rational,
    limit: Rational,
    gap: Rational,
}

impl ConvergenceRow {
    pub fn new(sides: u64, ratio: Rational, limit: Rational) -> Self {
        let gap = &ratio - &limit;
        ConvergenceRow {
            sides,
            ratio,
            limit,
            gap,
        }
    }

    pub fn sides(&self) -> u64 {
        self.sides
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn limit(&self) -> &Rational {
        &self.limit
    }

    /// `ratio - limit`, signed.
    pub fn gap(&self) -> &Rational {
        &self.gap
    }
}

/// Exact `E/s` for each die size in `sides_schedule`.
///
/// For advantage and disadvantage both gaps lie strictly between 0 and `1/s`
/// and sum to exactly `1/s`. Single mode is accepted with `r = 1` and limit
/// `1/2`.
pub fn convergence_table(
    mode: Mode,
    r: u32,
    sides_schedule: &[u64],
) -> Result<Vec<ConvergenceRow>> {
    if sides_schedule.is_empty() {
        return Err(Error::EmptySchedule);
    }
    let increasing = sides_schedule.windows(2).all(|w| w[0] < w[1]);
    if !increasing || sides_schedule[0] < 2 {
        return Err(Error::InvalidSchedule);
    }
    let limit = match mode {
        Mode::Single => {
            ExperimentSpec::new(2, r, mode)?;
            rational::ratio(1u32, 2u32)
        }
        _ => limit_ratio(mode, r)?,
    };
    sides_schedule
        .iter()
        .map(|&s| {
            let spec = ExperimentSpec::new(s, r, mode)?;
            let ratio = exact::expected_value(&spec) / rational::from_int(s);
            Ok(ConvergenceRow::new(s, ratio, limit.clone()))
        })
        .collect()
}
