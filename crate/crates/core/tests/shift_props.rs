use num_traits::One;
use proptest::prelude::*;

use opclass::rational::{int, ratio, ExactRational};
use opclass::shift::{self, Tail, WeightSequence};

fn weight() -> impl Strategy<Value = ExactRational> {
    (1i64..12, 1i64..12).prop_map(|(p, q)| ratio(p, q))
}

fn constant_tail_sequence() -> impl Strategy<Value = WeightSequence> {
    (prop::collection::vec(weight(), 0..5), weight())
        .prop_map(|(prefix, c)| WeightSequence::with_constant_tail(prefix, c).unwrap())
}

fn periodic_sequence(max_period: usize) -> impl Strategy<Value = WeightSequence> {
    (
        prop::collection::vec(weight(), 0..4),
        prop::collection::vec(weight(), 1..=max_period),
    )
        .prop_map(|(prefix, cycle)| WeightSequence::periodic(prefix, cycle).unwrap())
}

/// A non-decreasing constant-tail sequence, subnormal or not.
fn monotone_sequence() -> impl Strategy<Value = WeightSequence> {
    prop::collection::vec(1i64..6, 1..5).prop_map(|steps| {
        let mut acc = 0;
        let weights: Vec<ExactRational> = steps
            .iter()
            .map(|s| {
                acc += s;
                ratio(acc, 25)
            })
            .collect();
        let (prefix, last) = weights.split_at(weights.len() - 1);
        WeightSequence::with_constant_tail(prefix.to_vec(), last[0].clone()).unwrap()
    })
}

/// `(a, c, c, ...)` with `a <= c`: the subnormal constant-tail shifts.
fn subnormal_sequence() -> impl Strategy<Value = WeightSequence> {
    (weight(), weight()).prop_map(|(a, b)| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        WeightSequence::with_constant_tail(vec![lo], hi).unwrap()
    })
}

/// Sequence that is exactly periodic from index 0 with period dividing `n`.
fn n_quasinormal_sequence(n: usize) -> impl Strategy<Value = WeightSequence> {
    let divisors: Vec<usize> = (1..=n).filter(|p| n.is_multiple_of(*p)).collect();
    prop::sample::select(divisors)
        .prop_flat_map(|p| prop::collection::vec(weight(), p))
        .prop_map(|cycle| WeightSequence::periodic(vec![], cycle).unwrap())
}

fn with_power() -> impl Strategy<Value = (usize, WeightSequence)> {
    (1usize..5).prop_flat_map(|n| (Just(n), n_quasinormal_sequence(n)))
}

fn verdicts(w: &WeightSequence) -> (bool, Vec<bool>, bool, Vec<bool>, Vec<bool>) {
    (
        shift::is_hyponormal_shift(w).holds,
        (1..=3)
            .map(|k| shift::is_k_hyponormal_shift(w, k, None).unwrap().holds)
            .collect(),
        shift::is_subnormal_shift(w).holds,
        (2..=3)
            .map(|n| shift::is_n_subnormal_shift(w, n).unwrap().holds)
            .collect(),
        (2..=3)
            .map(|n| shift::is_n_quasinormal_shift(w, n).unwrap().holds)
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn moments_follow_weights(w in periodic_sequence(3)) {
        let gammas = w.moments(12).gammas;
        prop_assert_eq!(&gammas[0], &ExactRational::one());
        for k in 0..12 {
            let a = w.weight_at(k);
            prop_assert_eq!(&gammas[k + 1], &(&gammas[k] * &a * &a));
        }
    }

    #[test]
    fn decomposition_reconstructs_window_products(w in periodic_sequence(3), n in 1usize..5) {
        let dec = w.decompose_power(n).unwrap();
        prop_assert_eq!(dec.components.len(), n);
        for (j, comp) in dec.components.iter().enumerate() {
            for m in 0..10 {
                prop_assert_eq!(comp.weight_at(m), w.window_product(j + m * n, n));
            }
        }
    }

    #[test]
    fn n_quasinormal_weights_are_forced(w in periodic_sequence(4), n in 1usize..5) {
        if shift::is_n_quasinormal_shift(&w, n).unwrap().holds {
            let seed: Vec<ExactRational> = (0..2 * n - 1).map(|j| w.weight_at(j)).collect();
            let out = shift::derive_quasinormal_continuation(n, &seed, 20).unwrap();
            for (j, x) in out.iter().enumerate() {
                prop_assert_eq!(x, &w.weight_at(j));
            }
        }
    }

    #[test]
    fn n_quasinormal_sequences_are_forced((n, w) in with_power()) {
        let seed: Vec<ExactRational> = (0..2 * n - 1).map(|j| w.weight_at(j)).collect();
        let out = shift::derive_quasinormal_continuation(n, &seed, 12).unwrap();
        prop_assert!(out.iter().enumerate().all(|(j, x)| *x == w.weight_at(j)));
    }

    #[test]
    fn bounded_continuations_are_periodic(
        n in 2usize..5,
        exps in prop::collection::vec((-2i32..=2, -1i32..=1), 7),
    ) {
        let seed: Vec<ExactRational> = exps[..2 * n - 1]
            .iter()
            .map(|&(a, b)| {
                let two = if a >= 0 { int(1 << a) } else { ratio(1, 1 << -a) };
                let three = if b >= 0 { int(3i64.pow(b as u32)) } else { ratio(1, 3) };
                two * three
            })
            .collect();
        let probe = shift::boundedness_forces_periodicity_probe(n, &seed, 1e6, 500).unwrap();
        if probe.escaped_at.is_none() {
            let fit = probe.periodic_within.unwrap();
            prop_assert!(fit.residual < 1e-8);
            prop_assert!(fit.period <= n);
        }
    }

    #[test]
    fn subnormal_implies_k_hyponormal(
        w in prop_oneof![constant_tail_sequence(), monotone_sequence(), subnormal_sequence()],
    ) {
        if shift::is_subnormal_shift(&w).holds {
            for k in 1..=6 {
                prop_assert!(shift::is_k_hyponormal_shift(&w, k, None).unwrap().holds, "k = {}", k);
            }
        }
    }

    #[test]
    fn n_quasinormal_implies_n_subnormal((n, w) in with_power()) {
        prop_assert!(shift::is_n_quasinormal_shift(&w, n).unwrap().holds);
        prop_assert!(shift::is_n_subnormal_shift(&w, n).unwrap().holds);
    }

    #[test]
    fn verdicts_are_scale_invariant(w in periodic_sequence(3), c in weight()) {
        let scaled = w.scaled(&c).unwrap();
        prop_assert_eq!(verdicts(&w), verdicts(&scaled));
    }

    #[test]
    fn quasi_n_normal_means_constant_window_products(w in periodic_sequence(3), n in 1usize..4) {
        let v = shift::is_quasi_n_normal_shift(&w, n);
        let constant = (0..w.horizon() + 2 * n).all(|j| w.window_product(j, n) == w.window_product(0, n));
        prop_assert_eq!(v.holds, constant);
        if v.holds {
            prop_assert!(shift::is_n_quasinormal_shift(&w, n).unwrap().holds);
        }
    }
}

#[test]
fn tail_rule_defines_every_weight() {
    let w = WeightSequence::periodic(vec![ratio(1, 2)], vec![int(1), int(2)]).unwrap();
    let expected = [ratio(1, 2), int(1), int(2), int(1), int(2)];
    for (j, x) in expected.iter().enumerate() {
        assert_eq!(&w.weight_at(j), x);
    }
    assert!(matches!(w.canonical().tail(), Tail::Periodic(c) if c.len() == 2));
}
