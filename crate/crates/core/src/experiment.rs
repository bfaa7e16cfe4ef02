use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Which roll is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// One roll, kept as is.
    Single,
    /// Keep the highest of `r` rolls.
    Advantage,
    /// Keep the lowest of `r` rolls.
    Disadvantage,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Single, Mode::Advantage, Mode::Disadvantage];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Single => "single",
            Mode::Advantage => "advantage",
            Mode::Disadvantage => "disadvantage",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "single" => Ok(Mode::Single),
            "advantage" => Ok(Mode::Advantage),
            "disadvantage" => Ok(Mode::Disadvantage),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// A validated experiment: a fair die with `sides` faces rolled `rolls` times,
/// keeping the outcome selected by `mode`.
///
/// Advantage and disadvantage accept `rolls == 1`; that is the single-roll
/// experiment under another name (see [`ExperimentSpec::is_degenerate`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExperimentSpec {
    sides: u64,
    rolls: u32,
    mode: Mode,
}

impl ExperimentSpec {
    pub fn new(sides: u64, rolls: u32, mode: Mode) -> Result<Self> {
        if sides < 2 {
            return Err(Error::InvalidSides(sides));
        }
        if rolls < 1 {
            return Err(Error::InvalidRolls(rolls));
        }
        if mode == Mode::Single && rolls != 1 {
            return Err(Error::SingleModeRolls(rolls));
        }
        Ok(ExperimentSpec { sides, rolls, mode })
    }

    pub fn single(sides: u64) -> Result<Self> {
        Self::new(sides, 1, Mode::Single)
    }

    pub fn advantage(sides: u64, rolls: u32) -> Result<Self> {
        Self::new(sides, rolls, Mode::Advantage)
    }

    pub fn disadvantage(sides: u64, rolls: u32) -> Result<Self> {
        Self::new(sides, rolls, Mode::Disadvantage)
    }

    pub fn sides(&self) -> u64 {
        self.sides
    }

    pub fn rolls(&self) -> u32 {
        self.rolls
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Advantage or disadvantage with a single roll.
    pub fn is_degenerate(&self) -> bool {
        self.mode != Mode::Single && self.rolls == 1
    }

    /// `s^r`, the number of ordered roll sequences.
    pub fn sample_space_size(&self) -> BigUint {
        BigUint::from(self.sides).pow(self.rolls)
    }
}

impl fmt::Display for ExperimentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} r={} s={}", self.mode, self.rolls, self.sides)
    }
}
