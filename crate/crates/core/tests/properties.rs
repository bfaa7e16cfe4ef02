mod common;

use common::{int, naive_power_sum, q};
use keepdice::asymptotics::{
    bernoulli_table, convergence_table, faulhaber_rational, faulhaber_sum, gain_loss_limit,
    relative_gain, relative_loss,
};
use keepdice::exact::{
    binomial_row, expected_value, expected_value_via_pmf, frequency_advantage_binomial,
    frequency_advantage_closed, frequency_disadvantage_binomial, frequency_disadvantage_closed,
    pmf,
};
use keepdice::rational::{parse_fraction, to_fraction_string};
use keepdice::{ExperimentSpec, Mode, Rational};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn adv(s: u64, r: u32) -> ExperimentSpec {
    ExperimentSpec::advantage(s, r).unwrap()
}

fn dis(s: u64, r: u32) -> ExperimentSpec {
    ExperimentSpec::disadvantage(s, r).unwrap()
}

proptest! {
    #[test]
    fn lemma_forms_agree(r in 1u32..=8, s in 2u64..=40, pick in 0.0f64..1.0) {
        let i = 1 + ((s - 1) as f64 * pick).round() as u64;
        prop_assert_eq!(
            frequency_advantage_binomial(i, &adv(s, r)).unwrap(),
            frequency_advantage_closed(i, &adv(s, r)).unwrap()
        );
        prop_assert_eq!(
            frequency_disadvantage_binomial(i, &dis(s, r)).unwrap(),
            frequency_disadvantage_closed(i, &dis(s, r)).unwrap()
        );
    }

    #[test]
    fn reflection_symmetry(r in 1u32..=8, s in 2u64..=40) {
        let a = pmf(&adv(s, r)).unwrap();
        let d = pmf(&dis(s, r)).unwrap();
        for i in 1..=s {
            prop_assert_eq!(a.frequency(i), d.frequency(s + 1 - i));
        }
    }

    #[test]
    fn pmf_invariants(r in 1u32..=8, s in 2u64..=40, mode_ix in 0usize..3) {
        let mode = Mode::ALL[mode_ix];
        let r = if mode == Mode::Single { 1 } else { r };
        let spec = ExperimentSpec::new(s, r, mode).unwrap();
        let p = pmf(&spec).unwrap();
        prop_assert_eq!(p.frequencies().len() as u64, s);
        prop_assert_eq!(p.probabilities().len() as u64, s);
        let total = spec.sample_space_size();
        prop_assert_eq!(p.total_frequency(), total.clone());
        let mut sum = Rational::zero();
        for (_, f, prob) in p.iter() {
            prop_assert_eq!(
                prob,
                &Rational::new(BigInt::from(f.clone()), BigInt::from(total.clone()))
            );
            sum += prob;
        }
        prop_assert_eq!(sum, int(1));
    }

    #[test]
    fn complementarity(r in 1u32..=8, s in 2u64..=40) {
        prop_assert_eq!(
            expected_value(&adv(s, r)) + expected_value(&dis(s, r)),
            int(s + 1)
        );
        prop_assert_eq!(relative_gain(r, s).unwrap(), relative_loss(r, s).unwrap());
    }

    #[test]
    fn monotone_in_rolls(r in 1u32..=10, s in 2u64..=60) {
        prop_assert!(expected_value(&adv(s, r + 1)) > expected_value(&adv(s, r)));
        prop_assert!(expected_value(&dis(s, r + 1)) < expected_value(&dis(s, r)));
        // s - E[max] shrinks with r
        let gap = |r| int(s) - expected_value(&adv(s, r));
        prop_assert!(gap(r + 1) < gap(r));
    }

    #[test]
    fn ev_matches_definition(r in 1u32..=5, s in 2u64..=24) {
        for spec in [adv(s, r), dis(s, r)] {
            prop_assert_eq!(expected_value(&spec), expected_value_via_pmf(&spec).unwrap());
        }
    }

    #[test]
    fn advantage_sandwich(r in 1u32..=8, s in 2u64..=10_000) {
        let rows = convergence_table(Mode::Advantage, r, &[s]).unwrap();
        let gap = rows[0].gap();
        prop_assert!(gap.is_positive());
        prop_assert!(gap <= &q(1, s as i64));
    }

    #[test]
    fn gaps_split_one_over_s(r in 1u32..=8, s in 2u64..=5_000) {
        let a = convergence_table(Mode::Advantage, r, &[s]).unwrap().remove(0);
        let d = convergence_table(Mode::Disadvantage, r, &[s]).unwrap().remove(0);
        let one_over_s = q(1, s as i64);
        prop_assert_eq!(a.gap() + d.gap(), one_over_s.clone());
        prop_assert!(d.gap().is_positive() && d.gap() < &one_over_s);
        // looser published band for the disadvantage gap
        prop_assert!(d.gap() >= &-one_over_s.clone() && d.gap() < &(&one_over_s * int(2)));
    }

    #[test]
    fn faulhaber_is_integral(n in 0u64..=1_000_000_000_000, r in 0u32..=20) {
        prop_assert!(faulhaber_rational(n, r).is_integer());
    }

    #[test]
    fn faulhaber_matches_naive(n in 0u64..=2000, r in 0u32..=12) {
        prop_assert_eq!(faulhaber_sum(n, r), naive_power_sum(n, r));
    }

    #[test]
    fn degenerate_single_roll(s in 2u64..=100_000) {
        let mid = q(s as i64 + 1, 2);
        prop_assert_eq!(expected_value(&adv(s, 1)), mid.clone());
        prop_assert_eq!(expected_value(&dis(s, 1)), mid.clone());
        prop_assert_eq!(expected_value(&ExperimentSpec::single(s).unwrap()), mid);
    }

    #[test]
    fn fraction_text_round_trip(n in any::<i64>(), d in 1i64..=i64::MAX) {
        let value = q(n, d);
        prop_assert_eq!(parse_fraction(&to_fraction_string(&value)).unwrap(), value);
    }
}

#[test]
fn pascal_rows_sum_to_powers_of_two() {
    for n in 0..=64u32 {
        let sum: BigUint = binomial_row(n).iter().sum();
        assert_eq!(sum, BigUint::from(2u32).pow(n));
    }
}

#[test]
fn bernoulli_recurrence() {
    let b = bernoulli_table(40);
    assert_eq!(b.get(0), Some(&int(1)));
    assert_eq!(b.get(1), Some(&q(-1, 2)));
    for m in 1..=40usize {
        let row = binomial_row(m as u32 + 1);
        let total: Rational = (0..=m)
            .map(|j| &b.values()[j] * Rational::from_integer(BigInt::from(row[j].clone())))
            .sum();
        assert!(total.is_zero(), "m={m}");
        if m >= 3 && m % 2 == 1 {
            assert!(b.values()[m].is_zero());
        }
    }
}

#[test]
fn gain_approaches_limit_along_doubling() {
    for r in 2..=6u32 {
        let limit = gain_loss_limit(r).unwrap();
        let mut s = 10u64;
        let mut previous: Option<Rational> = None;
        for _ in 0..10 {
            let distance = (relative_gain(r, s).unwrap() - &limit).abs();
            if let Some(p) = previous {
                assert!(distance < p, "r={r} s={s}");
            }
            previous = Some(distance);
            s *= 2;
        }
    }
}

#[test]
fn fixed_die_many_rolls() {
    let tol = q(1, 1000);
    let ev_adv = expected_value(&adv(6, 40));
    let ev_dis = expected_value(&dis(6, 40));
    assert!(int(6) - ev_adv < tol);
    assert!(ev_dis - int(1) < tol);
    // keeps shrinking past r = 40
    let mut last = int(6);
    for r in 1..=80 {
        let gap = int(6) - expected_value(&adv(6, r));
        assert!(gap.is_positive() && gap < last);
        last = gap;
    }
}
