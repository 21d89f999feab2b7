//! Cross-module invariants: round trips, oracle agreement on random and
//! exhaustive inputs, monotonicity and closure laws, and chain ordering of
//! the bound formulas.

use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zimin::bounds;
use zimin::construct::euler_construct_p;
use zimin::explorer::{count_avoiding, estimate_threshold, exact_f};
use zimin::word::{Alphabet, Symbol, Word};
use zimin::{contains_pattern, contains_zimin, scan_free, zimin_witness, MatchOutcome, Pattern};

fn word_strategy(q: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..q, 0..=max_len)
        .prop_map(move |symbols| Word::new(Alphabet::new(q).unwrap(), symbols).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_parse_round_trip(w in word_strategy(5, 40)) {
        let text = w.render();
        let back = Word::parse(&text, w.alphabet()).unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn render_parse_round_trip_large_alphabet(w in word_strategy(100, 30)) {
        let text = w.render();
        let back = Word::parse(&text, w.alphabet()).unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn containment_is_monotone_in_level(w in word_strategy(3, 24)) {
        let mut last = true;
        for n in 1..=4u32 {
            let now = contains_zimin(&w, n);
            prop_assert!(!now || last, "containment at level {} without level {}", n, n - 1);
            last = now;
        }
    }

    #[test]
    fn containment_survives_extension(
        w in word_strategy(3, 18),
        ext in prop::collection::vec(0..3u32, 0..8)
    ) {
        let mut symbols = w.symbols().to_vec();
        symbols.extend(ext);
        let bigger = Word::new(w.alphabet(), symbols).unwrap();
        for n in 2..=3u32 {
            if contains_zimin(&w, n) {
                prop_assert!(contains_zimin(&bigger, n));
            }
        }
    }

    #[test]
    fn scan_free_is_the_least_containing_prefix(w in word_strategy(2, 20)) {
        for n in 2..=3u32 {
            match scan_free(&w, n) {
                Some(e) => {
                    prop_assert!(contains_zimin(&w.subword(0..e + 1), n));
                    prop_assert!(e == 0 || !contains_zimin(&w.subword(0..e), n));
                }
                None => prop_assert!(!contains_zimin(&w, n)),
            }
        }
    }

    #[test]
    fn witnesses_validate(w in word_strategy(2, 26)) {
        for n in 2..=3u32 {
            if let Some(witness) = zimin_witness(&w, n) {
                prop_assert_eq!(witness.validate(&w), Ok(()));
                prop_assert!(contains_zimin(&w, n));
            } else {
                prop_assert!(!contains_zimin(&w, n));
            }
        }
    }

    #[test]
    fn dp_agrees_with_backtracking_on_random_words(w in word_strategy(3, 16)) {
        for n in 2..=3u32 {
            let p = Pattern::zimin(n).unwrap();
            let oracle = match contains_pattern(&w, &p) {
                MatchOutcome::Found(_) => true,
                MatchOutcome::Absent => false,
                MatchOutcome::Undecided { .. } => return Err(TestCaseError::fail("budget")),
            };
            prop_assert_eq!(contains_zimin(&w, n), oracle);
        }
    }
}

#[test]
fn avoidance_is_subword_closed_on_500_random_subwords() {
    // spot-check the closure law on a construction output
    let w = euler_construct_p(4).unwrap();
    assert!(!contains_zimin(&w, 3));
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for _ in 0..500 {
        let a = rng.gen_range(0..w.len());
        let b = rng.gen_range(a..=w.len());
        assert!(!contains_zimin(&w.subword(a..b), 3));
    }
}

#[test]
fn short_words_over_q_symbols_behave_like_f2_says() {
    // every word of length 2q+1 contains level 2; aabbcc.. of length 2q does not
    for q in 1..=4u32 {
        let len = 2 * q as usize + 1;
        let alphabet = Alphabet::new(q).unwrap();
        let mut symbols = vec![0 as Symbol; len];
        loop {
            let w = Word::new(alphabet, symbols.clone()).unwrap();
            assert!(contains_zimin(&w, 2), "{} must contain level 2", w.render());
            let mut pos = len;
            while pos > 0 {
                symbols[pos - 1] += 1;
                if symbols[pos - 1] < q {
                    break;
                }
                symbols[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
    }
    for q in 1..=40u32 {
        let symbols: Vec<Symbol> = (0..q).flat_map(|c| [c, c]).collect();
        let w = Word::new(Alphabet::new(q).unwrap(), symbols).unwrap();
        assert_eq!(w.len(), 2 * q as usize);
        assert!(!contains_zimin(&w, 2), "doubled-blocks witness at q={q}");
    }
}

#[test]
fn canonical_counts_match_naive_enumeration_through_backtracking() {
    // m(2,2,l) and m(2,3,l) for l <= 8, counted two independent ways
    for q in [2u32, 3] {
        let counts = count_avoiding(2, q, 8, 1 << 34);
        assert!(counts.exact);
        let p = Pattern::zimin(2).unwrap();
        let alphabet = Alphabet::new(q).unwrap();
        for len in 0..=8usize {
            let mut naive = 0u64;
            let mut symbols = vec![0 as Symbol; len];
            loop {
                let w = Word::new(alphabet, symbols.clone()).unwrap();
                match contains_pattern(&w, &p) {
                    MatchOutcome::Absent => naive += 1,
                    MatchOutcome::Found(_) => {}
                    MatchOutcome::Undecided { .. } => panic!("budget on a tiny word"),
                }
                let mut pos = len;
                while pos > 0 {
                    symbols[pos - 1] += 1;
                    if symbols[pos - 1] < q {
                        break;
                    }
                    symbols[pos - 1] = 0;
                    pos -= 1;
                }
                if pos == 0 {
                    break;
                }
            }
            assert_eq!(
                counts.counts[len].to_u64(),
                Some(naive),
                "m(2,{q},{len})"
            );
        }
    }
}

#[test]
fn count_log_bound_sits_below_the_exact_value() {
    // f(n,q) >= log_q m(n,q): check at n=3, q=2 with the exhausted counts
    let f = exact_f(3, 2, 1 << 40);
    assert!(f.exact);
    let counts = count_avoiding(3, 2, f.longest.len(), 1 << 40);
    let total: num_bigint::BigUint = counts.counts.iter().sum();
    let log = bounds::log_count_bound(&total, 2).unwrap();
    assert!(
        log <= f.value.unwrap(),
        "log_2 m(3,2) = {log} must not exceed f(3,2) = {:?}",
        f.value
    );
}

#[test]
fn construction_lengths_sit_below_the_formula_uppers() {
    use zimin::construct::euler_construct_improved;
    for q in [5u32, 6] {
        let w = euler_construct_improved(q).unwrap();
        let lower = bounds::f3_lower(q as u64).unwrap();
        assert_eq!(
            lower.as_exact().unwrap().to_u64().unwrap(),
            w.len() as u64,
            "construction meets the formula at q={q}"
        );
        let upper = bounds::f3_upper_improved(q as u64).unwrap();
        assert_eq!(
            lower.partial_cmp_value(&upper),
            Some(std::cmp::Ordering::Less)
        );
        let rs = bounds::f3_upper_rs(q as u64);
        assert_eq!(lower.partial_cmp_value(&rs), Some(std::cmp::Ordering::Less));
    }
}

#[test]
fn threshold_estimates_are_isotone_within_slack() {
    let lengths: Vec<usize> = (1..=12).map(|k| 3 * k).collect();
    let est = estimate_threshold(2, 20, &lengths, 150, 9, 1);
    for i in 0..lengths.len() - 1 {
        let slack =
            (est.ci95[i].1 - est.ci95[i].0) + (est.ci95[i + 1].1 - est.ci95[i + 1].0);
        assert!(
            est.probs[i] <= est.probs[i + 1] + slack,
            "drop from {} to {} at lengths {}..{} beyond slack {slack}",
            est.probs[i],
            est.probs[i + 1],
            lengths[i],
            lengths[i + 1]
        );
    }
}
