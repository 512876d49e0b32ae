//! Properties of generated streams, complexity profiles, Sturmian structure
//! and repetitions.

mod common;

use common::{all_words, bin};
use kabelian_core::complexity::{
    factor_complexity, k_complexity, r_complexity, ComplexityProfile, Relation,
};
use kabelian_core::flowgraph::Budget;
use kabelian_core::generators::mechanical;
use kabelian_core::repetitions::{balance_bound, find_power, is_k_power, PositionSet};
use kabelian_core::sturmian::{
    classify_length_2k_pairs, factor_chain, same_sturmian_equivalence, special_factors,
};
use kabelian_core::words::{factors, is_balanced, reverse};
use kabelian_core::{k_abelian_equivalent, Alphabet, Word, WordStream, K};

fn swap_letters(w: &Word) -> Word {
    Word::new(
        w.alphabet().clone(),
        w.symbols().iter().map(|&s| 1 - s).collect(),
    )
    .unwrap()
}

fn streams() -> Vec<WordStream> {
    [
        "fib",
        "tm",
        "mech:13/21:0",
        "mech:[0;2,1,1,1,1,1]:3",
        "up:U=001,V=01",
        "morphic:0=01,1=2,2=0:seed=0",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

#[test]
fn prefixes_are_consistent() {
    for s in streams() {
        let long = s.prefix(400);
        for n in [0, 1, 17, 128, 399] {
            assert_eq!(s.prefix(n), long.prefix(n), "{s}");
        }
    }
}

#[test]
fn fibonacci_length_six_factors() {
    let fib = WordStream::fibonacci().prefix(13);
    let got: Vec<String> = factors(&fib, 6).iter().map(Word::to_string).collect();
    assert_eq!(
        got,
        ["001001", "001010", "010010", "010100", "100100", "100101", "101001"]
    );
}

#[test]
fn mechanical_matches_fibonacci_after_renaming() {
    let fib = WordStream::fibonacci().prefix(53);
    let mech = swap_letters(&mechanical(13, 21, 12, 53).unwrap());
    assert_eq!(mech, fib);
}

#[test]
fn mechanical_prefixes_are_balanced() {
    for (p, q) in [(8, 21), (13, 21), (34, 55), (5, 12)] {
        for rho in [0, 3, q - 1] {
            let w = mechanical(p, q, rho, 300).unwrap();
            for n in [1, 10, 77, 300] {
                assert!(is_balanced(&w.prefix(n)).unwrap(), "{p}/{q}:{rho} n={n}");
            }
        }
    }
}

#[test]
fn rk_is_coarser_than_k_abelian() {
    for s in streams() {
        let prefix = s.prefix(300);
        for k in 1..=3 {
            for n in 1..=30 {
                let rho = r_complexity(&prefix, K::finite(k), n).unwrap();
                let p = k_complexity(&prefix, K::finite(k), n).unwrap();
                assert!(rho <= p, "{s} k={k} n={n}");
            }
        }
    }
}

#[test]
fn truncation_never_decreases_complexity() {
    for s in streams() {
        for k in [K::finite(1), K::finite(2), K::finite(3), K::INFINITE] {
            for n in [1, 4, 9, 20] {
                let mut last = 0;
                for len in [40, 80, 160, 320] {
                    let c = k_complexity(&s.prefix(len), k, n).unwrap();
                    assert!(c >= last, "{s} k={k} n={n}");
                    last = c;
                }
            }
        }
    }
}

#[test]
fn periodic_factor_complexity_is_eventually_constant() {
    let s: WordStream = "up:U=001,V=01101".parse().unwrap();
    let profile =
        ComplexityProfile::of_stream(&s, K::INFINITE, Relation::KAbelian, 30, None).unwrap();
    assert!(profile.valid.iter().all(|&v| v));
    assert!(profile.values[10..]
        .iter()
        .all(|&v| v == profile.values[10]));
}

#[test]
fn aperiodic_streams_meet_morse_hedlund() {
    for s in [WordStream::fibonacci(), WordStream::thue_morse()] {
        let prefix = s.prefix(2000);
        for n in 1..=40 {
            assert!(factor_complexity(&prefix, n).unwrap() > n, "{s} n={n}");
        }
    }
}

#[test]
fn five_letter_rk_counterexample() {
    // a word containing every length-3 word over five letters; its powers
    // are periodic yet keep R_2 complexity at least 5
    let alphabet = Alphabet::of_size(5);
    let cubes: Vec<u8> = all_words(&alphabet, 3)
        .iter()
        .flat_map(|w| w.symbols().to_vec())
        .collect();
    let period = Word::new(alphabet.clone(), cubes).unwrap();
    let omega = WordStream::ultimately_periodic(&Word::empty(alphabet), &period).unwrap();
    let prefix = omega.prefix(3 * period.len());
    for n in [1, 2, 3, 5, 8, 13, 40, 100] {
        assert!(
            r_complexity(&prefix, K::finite(2), n).unwrap() >= 5,
            "n={n}"
        );
    }
}

#[test]
fn sturmian_special_factors() {
    for s in ["fib", "mech:13/21:5", "mech:[0;1,2,1,1,2]:0"] {
        let s: WordStream = s.parse().unwrap();
        // special factors of length n are read off the length n + 1 factors
        let bound = s.sturmian_bound().unwrap_or(40).min(40);
        let window = s.coverage_window(bound).unwrap();
        let prefix = s.prefix(window);
        for n in 1..bound {
            let r = special_factors(&prefix, n).unwrap();
            assert_eq!(r.right_special.len(), 1, "{s} n={n}");
            assert_eq!(r.left_special.len(), 1, "{s} n={n}");
            let rs = r.right_special.first().unwrap();
            assert_eq!(&reverse(rs), r.left_special.first().unwrap());
        }
    }
}

#[test]
fn chain_marks_equivalent_neighbours() {
    let prefix = WordStream::fibonacci().prefix(2000);
    for n in 1..=20 {
        let chain = factor_chain(&prefix, n).unwrap();
        for k in 1..=3 {
            for (i, pair) in chain.factors.windows(2).enumerate() {
                let sigma = chain.sigma[i];
                let marked = k <= sigma && sigma <= n.saturating_sub(k);
                let equivalent = k_abelian_equivalent(&pair[0], &pair[1], K::finite(k)).unwrap();
                assert_eq!(marked, equivalent, "n={n} k={k} i={i}");
            }
        }
    }
}

#[test]
fn same_sturmian_criterion_matches_equivalence() {
    let prefix = WordStream::fibonacci().prefix(100);
    for n in 1..=12 {
        let fs: Vec<Word> = factors(&prefix, n).into_iter().collect();
        for u in &fs {
            for v in &fs {
                for k in 1..=4 {
                    let k = K::finite(k);
                    assert_eq!(
                        same_sturmian_equivalence(u, v, k, &prefix).unwrap(),
                        k_abelian_equivalent(u, v, k).unwrap(),
                        "{u} {v} k={k}"
                    );
                }
            }
        }
    }
}

#[test]
fn length_2k_pairs_match_bruteforce() {
    for k in 1..=3 {
        let words = all_words(&Alphabet::binary(), 2 * k);
        let mut expected = Vec::new();
        for (i, u) in words.iter().enumerate() {
            for v in &words[i + 1..] {
                if k_abelian_equivalent(u, v, K::finite(k)).unwrap() {
                    expected.push((u.clone(), v.clone()));
                }
            }
        }
        expected.sort();
        let got: Vec<(Word, Word)> = classify_length_2k_pairs(2, k, Budget::default())
            .unwrap()
            .into_iter()
            .map(|p| (p.u, p.v))
            .collect();
        assert_eq!(got, expected, "k={k}");
    }
}

#[test]
fn power_witnesses_revalidate() {
    let prefix = WordStream::fibonacci().prefix(600);
    let sets = [
        PositionSet::All,
        PositionSet::Progression { start: 2, step: 3 },
        "res:5:0,1,3".parse().unwrap(),
    ];
    for d in &sets {
        for k in 1..=3 {
            for n in 2..=3 {
                let Some(w) = find_power(&prefix, K::finite(k), n, d, 200).unwrap() else {
                    continue;
                };
                let whole = prefix.factor(w.start, w.start + n * w.block_length);
                assert!(is_k_power(&whole, n, K::finite(k)).unwrap());
                for k2 in 1..k {
                    assert!(is_k_power(&whole, n, K::finite(k2)).unwrap());
                }
                assert!((0..=n).all(|j| d.contains(w.start + j * w.block_length)));
            }
        }
    }
}

#[test]
fn balance_is_monotone() {
    for s in ["fib", "tm", "mech:5/12:1"] {
        let s: WordStream = s.parse().unwrap();
        let mut by_k = Vec::new();
        for k in 1..=4 {
            let mut last = 0;
            for len in [50, 100, 200, 400] {
                let b = balance_bound(&s.prefix(len), k).unwrap().bound;
                assert!(b >= last, "{s} k={k} len={len}");
                last = b;
            }
            by_k.push(last);
        }
        assert!(by_k.windows(2).all(|w| w[0] <= w[1]), "{s}: {by_k:?}");
    }
}

#[test]
fn thue_morse_is_not_balanced() {
    assert!(!is_balanced(&WordStream::thue_morse().prefix(16)).unwrap());
    assert!(is_balanced(&bin("0100101001001")).unwrap());
}
