//! Exact outcome frequencies, PMFs and expected values.
//!
//! Frequencies count ordered roll sequences in the `s^r` sample space. For the
//! advantage experiment the count of sequences whose maximum is `i` has two
//! forms:
//!
//! - choose which `j >= 1` rolls show `i`, the rest fall in `1..i`:
//!   `sum_{j=1}^{r} C(r, j) (i-1)^(r-j)`
//! - telescoped: `i^r - (i-1)^r`
//!
//! The disadvantage counts mirror these with `s - i` in place of `i - 1`.
//! Both forms are public so they can be checked against each other.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::asymptotics;
use crate::error::{Error, Result};
use crate::experiment::{ExperimentSpec, Mode};
use crate::rational::{self, Rational};

/// Above this many terms, `expected_value` sums powers with Faulhaber's
/// formula instead of the direct loop.
pub const FAULHABER_THRESHOLD: u64 = 1_000_000;

/// Default cap on `s^r` for [`expected_value_via_pmf`].
pub const DEFAULT_WORK_BOUND: u128 = 10_000_000;

/// Largest die for which [`pmf`] will materialise per-outcome tables.
pub const MAX_PMF_SIDES: u64 = 10_000_000;

fn require_mode(spec: &ExperimentSpec, expected: Mode) -> Result<()> {
    if spec.mode() == expected {
        Ok(())
    } else {
        Err(Error::ModeMismatch {
            expected: expected.name(),
            actual: spec.mode().name(),
        })
    }
}

fn require_outcome(outcome: u64, spec: &ExperimentSpec) -> Result<()> {
    if (1..=spec.sides()).contains(&outcome) {
        Ok(())
    } else {
        Err(Error::OutcomeOutOfRange {
            outcome,
            sides: spec.sides(),
        })
    }
}

fn pow(base: u64, exp: u32) -> BigUint {
    BigUint::from(base).pow(exp)
}

/// Row `n` of Pascal's triangle, `C(n, 0..=n)`.
pub fn binomial_row(n: u32) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for k in 0..n {
        let next = &row[k as usize] * (n - k) / (k + 1);
        row.push(next);
    }
    row
}

// sum_{j=1}^{r} C(r, j) base^(r-j)
fn binomial_sum(base: u64, rolls: u32) -> BigUint {
    let row = binomial_row(rolls);
    let mut power = BigUint::one();
    let mut total = BigUint::zero();
    for j in (1..=rolls).rev() {
        total += &row[j as usize] * &power;
        power *= base;
    }
    total
}

/// `i^r - (i-1)^r`: sequences whose maximum is exactly `outcome`.
pub fn frequency_advantage_closed(outcome: u64, spec: &ExperimentSpec) -> Result<BigUint> {
    require_mode(spec, Mode::Advantage)?;
    require_outcome(outcome, spec)?;
    let r = spec.rolls();
    Ok(pow(outcome, r) - pow(outcome - 1, r))
}

/// `sum_{j=1}^{r} C(r, j) (i-1)^(r-j)`: the counting form of
/// [`frequency_advantage_closed`].
pub fn frequency_advantage_binomial(outcome: u64, spec: &ExperimentSpec) -> Result<BigUint> {
    require_mode(spec, Mode::Advantage)?;
    require_outcome(outcome, spec)?;
    Ok(binomial_sum(outcome - 1, spec.rolls()))
}

/// `(s-i+1)^r - (s-i)^r`: sequences whose minimum is exactly `outcome`.
pub fn frequency_disadvantage_closed(outcome: u64, spec: &ExperimentSpec) -> Result<BigUint> {
    require_mode(spec, Mode::Disadvantage)?;
    require_outcome(outcome, spec)?;
    let r = spec.rolls();
    let above = spec.sides() - outcome;
    Ok(pow(above + 1, r) - pow(above, r))
}

/// `sum_{j=1}^{r} C(r, j) (s-i)^(r-j)`.
pub fn frequency_disadvantage_binomial(outcome: u64, spec: &ExperimentSpec) -> Result<BigUint> {
    require_mode(spec, Mode::Disadvantage)?;
    require_outcome(outcome, spec)?;
    Ok(binomial_sum(spec.sides() - outcome, spec.rolls()))
}

/// Exact distribution of the kept outcome.
///
/// Outcomes are 1-based in every accessor: `frequency(1)` is the count for a
/// kept value of 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomePmf {
    spec: ExperimentSpec,
    frequencies: Vec<BigUint>,
    probabilities: Vec<Rational>,
}

impl OutcomePmf {
    pub fn spec(&self) -> &ExperimentSpec {
        &self.spec
    }

    pub fn frequencies(&self) -> &[BigUint] {
        &self.frequencies
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.probabilities
    }

    pub fn frequency(&self, outcome: u64) -> Option<&BigUint> {
        index(outcome).and_then(|i| self.frequencies.get(i))
    }

    pub fn probability(&self, outcome: u64) -> Option<&Rational> {
        index(outcome).and_then(|i| self.probabilities.get(i))
    }

    /// `(outcome, frequency, probability)` for outcomes `1..=s`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigUint, &Rational)> + '_ {
        self.frequencies
            .iter()
            .zip(&self.probabilities)
            .enumerate()
            .map(|(i, (f, p))| (i as u64 + 1, f, p))
    }

    pub fn total_frequency(&self) -> BigUint {
        self.frequencies.iter().sum()
    }
}

fn index(outcome: u64) -> Option<usize> {
    outcome.checked_sub(1).and_then(|i| usize::try_from(i).ok())
}

pub fn pmf(spec: &ExperimentSpec) -> Result<OutcomePmf> {
    let sides = spec.sides();
    if sides > MAX_PMF_SIDES {
        return Err(Error::WorkBoundExceeded {
            points: sides.to_string(),
            bound: MAX_PMF_SIDES as u128,
        });
    }
    let r = spec.rolls();
    // Increments of i^r for i = 1..=s; advantage reads them in order,
    // disadvantage reversed.
    let increments = || {
        let mut previous = BigUint::zero();
        (1..=sides).map(move |i| {
            let current = pow(i, r);
            let step = &current - &previous;
            previous = current;
            step
        })
    };
    let frequencies: Vec<BigUint> = match spec.mode() {
        Mode::Single => vec![BigUint::one(); sides as usize],
        Mode::Advantage => increments().collect(),
        Mode::Disadvantage => {
            let mut v: Vec<BigUint> = increments().collect();
            v.reverse();
            v
        }
    };
    let total = BigInt::from(spec.sample_space_size());
    let probabilities = frequencies
        .iter()
        .map(|f| Rational::new(BigInt::from(f.clone()), total.clone()))
        .collect();
    Ok(OutcomePmf {
        spec: *spec,
        frequencies,
        probabilities,
    })
}

/// Which algorithm [`power_sum`] uses for `n` terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerSumRoute {
    Naive,
    Faulhaber,
}

impl PowerSumRoute {
    pub fn for_terms(n: u64) -> Self {
        if n > FAULHABER_THRESHOLD {
            PowerSumRoute::Faulhaber
        } else {
            PowerSumRoute::Naive
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PowerSumRoute::Naive => "naive",
            PowerSumRoute::Faulhaber => "faulhaber",
        }
    }
}

/// `sum_{i=1}^{n} i^r` by direct summation.
pub fn power_sum_naive(n: u64, r: u32) -> BigUint {
    (1..=n).map(|i| pow(i, r)).sum()
}

/// `sum_{i=1}^{n} i^r`, choosing the route by [`FAULHABER_THRESHOLD`].
pub fn power_sum(n: u64, r: u32) -> BigUint {
    match PowerSumRoute::for_terms(n) {
        PowerSumRoute::Naive => power_sum_naive(n, r),
        PowerSumRoute::Faulhaber => asymptotics::faulhaber_sum(n, r),
    }
}

/// Exact expected value of the kept outcome.
///
/// With `T = sum_{i=1}^{s-1} i^r`, advantage is `s - T/s^r` and disadvantage
/// is `1 + T/s^r`; the single roll is `(s+1)/2`.
pub fn expected_value(spec: &ExperimentSpec) -> Rational {
    let s = spec.sides();
    if spec.mode() == Mode::Single {
        return rational::ratio(s + 1, 2u32);
    }
    let tail = Rational::new(
        BigInt::from(power_sum(s - 1, spec.rolls())),
        BigInt::from(spec.sample_space_size()),
    );
    match spec.mode() {
        Mode::Advantage => rational::from_int(s) - tail,
        _ => Rational::one() + tail,
    }
}

/// Expected value straight from the definition, `sum_i i * freq_i / s^r`,
/// limited to sample spaces of at most [`DEFAULT_WORK_BOUND`] points.
pub fn expected_value_via_pmf(spec: &ExperimentSpec) -> Result<Rational> {
    expected_value_via_pmf_bounded(spec, DEFAULT_WORK_BOUND)
}

pub fn expected_value_via_pmf_bounded(spec: &ExperimentSpec, bound: u128) -> Result<Rational> {
    let points = spec.sample_space_size();
    if points > BigUint::from(bound) {
        return Err(Error::WorkBoundExceeded {
            points: points.to_string(),
            bound,
        });
    }
    let pmf = pmf(spec)?;
    let weighted: BigUint = pmf.iter().map(|(i, f, _)| f * i).sum();
    Ok(Rational::new(weighted.into(), points.into()))
}
