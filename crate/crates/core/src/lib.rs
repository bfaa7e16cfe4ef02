//! Exact outcome distributions, expected values and asymptotics for
//! "roll a fair `s`-sided die `r` times and keep the highest (advantage) or
//! the lowest (disadvantage)" experiments.
//!
//! All probabilities and expected values are exact rationals over
//! arbitrary-precision integers. The crate is organised as:
//!
//! - [`experiment`]: the [`ExperimentSpec`] data model.
//! - [`exact`]: outcome frequencies, PMFs and expected values.
//! - [`asymptotics`]: Bernoulli numbers, Faulhaber power sums, limits of
//!   `E/s`, relative gain and loss, convergence tables.
//! - [`montecarlo`]: a seeded, reproducible simulator used as an independent
//!   statistical check on the exact engine.
//! - [`cli`]: the `keepdice` command-line front end.
//!
//! ```
//! use keepdice::{exact, ExperimentSpec, Mode, Rational};
//!
//! let spec = ExperimentSpec::new(6, 2, Mode::Advantage).unwrap();
//! let ev = exact::expected_value(&spec);
//! assert_eq!(ev, Rational::new(161.into(), 36.into()));
//! ```

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod montecarlo;
pub mod rational;

pub use error::{Error, Result};
pub use experiment::{ExperimentSpec, Mode};
pub use rational::Rational;
