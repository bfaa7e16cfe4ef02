//! Seeded Monte Carlo simulation of the three experiments.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`). Trials are grouped into
//! fixed blocks of [`BLOCK_TRIALS`]; block `b` draws from stream `b` of the
//! generator keyed by the seed. Blocks are the unit of randomness and chunks
//! only decide which thread runs which blocks, so the counts for a given
//! `(spec, trials, seed)` do not depend on the chunk count.

use std::num::NonZeroUsize;
use std::thread;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{OutcomePmf, MAX_PMF_SIDES};
use crate::experiment::{ExperimentSpec, Mode};
use crate::rational::{self, Rational};

pub const BLOCK_TRIALS: u64 = 16_384;

/// Uniform value in `1..=sides`, by rejection on the smallest power-of-two
/// range covering `0..sides`.
pub fn uniform_die<R: RngCore + ?Sized>(rng: &mut R, sides: u64) -> u64 {
    if sides <= 1 {
        return 1;
    }
    let mask = u64::MAX >> (sides - 1).leading_zeros();
    loop {
        let v = rng.next_u64() & mask;
        if v < sides {
            return v + 1;
        }
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn roll_once<R: RngCore>(rng: &mut R, spec: &ExperimentSpec) -> u64 {
    let s = spec.sides();
    let first = uniform_die(rng, s);
    let rest = (1..spec.rolls()).map(|_| uniform_die(rng, s));
    match spec.mode() {
        Mode::Single => first,
        Mode::Advantage => rest.fold(first, u64::max),
        Mode::Disadvantage => rest.fold(first, u64::min),
    }
}

fn run_blocks(
    spec: &ExperimentSpec,
    trials: u64,
    seed: u64,
    blocks: std::ops::Range<u64>,
) -> Vec<u64> {
    let mut counts = vec![0u64; spec.sides() as usize];
    for block in blocks {
        let start = block * BLOCK_TRIALS;
        let len = BLOCK_TRIALS.min(trials - start);
        let mut rng = block_rng(seed, block);
        for _ in 0..len {
            counts[(roll_once(&mut rng, spec) - 1) as usize] += 1;
        }
    }
    counts
}

/// Result of a simulation run. Everything but `counts` is derived from the
/// counts.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    spec: ExperimentSpec,
    trials: u64,
    seed: u64,
    counts: Vec<u64>,
    empirical_mean: f64,
    standard_error: f64,
}

impl SimulationResult {
    /// Builds a result from per-outcome counts (index 0 is outcome 1).
    pub fn from_counts(spec: ExperimentSpec, seed: u64, counts: Vec<u64>) -> Result<Self> {
        if counts.len() as u64 != spec.sides() {
            return Err(Error::CountsLength {
                got: counts.len(),
                sides: spec.sides(),
            });
        }
        let trials: u64 = counts.iter().sum();
        if trials == 0 {
            return Err(Error::NoTrials);
        }
        let n = trials as f64;
        let outcomes = || {
            counts
                .iter()
                .enumerate()
                .map(|(i, &c)| ((i + 1) as f64, c as f64))
        };
        let mean = outcomes().map(|(x, c)| x * c).sum::<f64>() / n;
        let standard_error = if trials > 1 {
            let ss: f64 = outcomes().map(|(x, c)| c * (x - mean) * (x - mean)).sum();
            (ss / (n - 1.0) / n).sqrt()
        } else {
            0.0
        };
        Ok(SimulationResult {
            spec,
            trials,
            seed,
            counts,
            empirical_mean: mean,
            standard_error,
        })
    }

    pub fn spec(&self) -> &ExperimentSpec {
        &self.spec
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Per-outcome counts; index 0 is outcome 1.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, outcome: u64) -> Option<u64> {
        outcome
            .checked_sub(1)
            .and_then(|i| self.counts.get(i as usize).copied())
    }

    pub fn empirical_mean(&self) -> f64 {
        self.empirical_mean
    }

    pub fn standard_error(&self) -> f64 {
        self.standard_error
    }

    /// `(mean - expected) / standard_error`.
    pub fn z_score(&self, expected: &Rational) -> f64 {
        (self.empirical_mean - rational::to_f64(expected)) / self.standard_error
    }
}

/// Simulates `trials` experiments, spreading blocks over the available cores.
pub fn simulate(spec: &ExperimentSpec, trials: u64, seed: u64) -> Result<SimulationResult> {
    let workers = thread::available_parallelism().map_or(1, NonZeroUsize::get);
    simulate_chunked(spec, trials, seed, workers)
}

/// As [`simulate`] with an explicit number of concurrent chunks. The result is
/// identical for every `chunks >= 1`.
pub fn simulate_chunked(
    spec: &ExperimentSpec,
    trials: u64,
    seed: u64,
    chunks: usize,
) -> Result<SimulationResult> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    if spec.sides() > MAX_PMF_SIDES {
        return Err(Error::WorkBoundExceeded {
            points: spec.sides().to_string(),
            bound: MAX_PMF_SIDES as u128,
        });
    }
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    let chunks = (chunks.max(1) as u64).min(blocks);
    let per_chunk = blocks.div_ceil(chunks);

    let partials: Vec<Vec<u64>> = if chunks == 1 {
        vec![run_blocks(spec, trials, seed, 0..blocks)]
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = (0..chunks)
                .map(|c| {
                    let range = (c * per_chunk).min(blocks)..((c + 1) * per_chunk).min(blocks);
                    scope.spawn(move || run_blocks(spec, trials, seed, range))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("simulation worker panicked"))
                .collect()
        })
    };

    let mut counts = vec![0u64; spec.sides() as usize];
    for partial in partials {
        for (total, c) in counts.iter_mut().zip(partial) {
            *total += c;
        }
    }
    SimulationResult::from_counts(*spec, seed, counts)
}

/// Total-variation distance `1/2 * sum_i |count_i/trials - p_i|`.
pub fn empirical_pmf_distance(result: &SimulationResult, exact: &OutcomePmf) -> Result<f64> {
    if result.spec() != exact.spec() {
        return Err(Error::SpecMismatch);
    }
    let n = result.trials() as f64;
    let l1: f64 = result
        .counts()
        .iter()
        .zip(exact.probabilities())
        .map(|(&c, p)| (c as f64 / n - rational::to_f64(p)).abs())
        .sum();
    Ok(l1 / 2.0)
}
