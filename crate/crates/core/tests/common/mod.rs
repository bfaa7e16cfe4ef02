//! Independent oracles. Nothing here calls into the formulas under test.
#![allow(dead_code)]

use keepdice::{Mode, Rational};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// Counts of the kept outcome over every ordered `rolls`-tuple of a
/// `sides`-sided die, by walking the tuples one by one. Index 0 is outcome 1.
pub fn enumerate_counts(sides: u64, rolls: u32, mode: Mode) -> Vec<u64> {
    let mut counts = vec![0u64; sides as usize];
    let mut tuple = vec![1u64; rolls as usize];
    loop {
        let kept = match mode {
            Mode::Single => tuple[0],
            Mode::Advantage => *tuple.iter().max().unwrap(),
            Mode::Disadvantage => *tuple.iter().min().unwrap(),
        };
        counts[(kept - 1) as usize] += 1;
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == tuple.len() {
                return counts;
            }
            if tuple[pos] < sides {
                tuple[pos] += 1;
                break;
            }
            tuple[pos] = 1;
            pos += 1;
        }
    }
}

/// Mean kept outcome over the full enumeration.
pub fn enumerate_mean(sides: u64, rolls: u32, mode: Mode) -> Rational {
    let counts = enumerate_counts(sides, rolls, mode);
    let total: u64 = counts.iter().sum();
    let weighted: u64 = counts
        .iter()
        .enumerate()
        .map(|(i, c)| (i as u64 + 1) * c)
        .sum();
    Rational::new(BigInt::from(weighted), BigInt::from(total))
}

/// Bernoulli numbers by the Akiyama–Tanigawa algorithm. That algorithm yields
/// B_1 = +1/2; the sign is flipped here to match the B_1 = -1/2 convention.
pub fn akiyama_tanigawa(max_index: usize) -> Vec<Rational> {
    let mut a: Vec<Rational> = Vec::with_capacity(max_index + 1);
    let mut out = Vec::with_capacity(max_index + 1);
    for m in 0..=max_index {
        a.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            a[j - 1] = Rational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
        }
        out.push(a[0].clone());
    }
    if max_index >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

/// `sum_{i=1}^{n} i^r` by repeated multiplication.
pub fn naive_power_sum(n: u64, r: u32) -> BigUint {
    let mut total = BigUint::zero();
    for i in 1..=n {
        let mut p = BigUint::one();
        for _ in 0..r {
            p *= i;
        }
        total += p;
    }
    total
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
