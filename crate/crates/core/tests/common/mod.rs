#![allow(dead_code)]

use std::sync::Arc;

use kabelian_core::words::occurrences;
use kabelian_core::{Alphabet, Word, K};

pub fn bin(s: &str) -> Word {
    Word::parse(s, &Alphabet::binary()).unwrap()
}

/// Every word of length `n` over `alphabet`, in lexicographic order.
pub fn all_words(alphabet: &Arc<Alphabet>, n: usize) -> Vec<Word> {
    let m = alphabet.size();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w: Vec<u8>| {
                (0..m as u8).map(move |a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|s| Word::new(alphabet.clone(), s).unwrap())
        .collect()
}

/// Every word of length at most `n`.
pub fn words_up_to(alphabet: &Arc<Alphabet>, n: usize) -> Vec<Word> {
    (0..=n).flat_map(|len| all_words(alphabet, len)).collect()
}

/// The textbook definition: equal occurrence counts of every word of
/// length at most `k`, compared one pattern at a time.
pub fn definitional_equiv(u: &Word, v: &Word, k: K) -> bool {
    match k.value() {
        None => u == v,
        Some(k) => {
            u.len() == v.len()
                && (1..=k).all(|len| {
                    all_words(u.alphabet(), len)
                        .iter()
                        .all(|x| occurrences(u, x).unwrap() == occurrences(v, x).unwrap())
                })
        }
    }
}

/// Occurrence counts of every pattern of length `1..=k`, in a fixed order.
/// Two words of equal length are k-Abelian equivalent iff these agree.
pub fn definitional_profile(w: &Word, k: usize) -> Vec<usize> {
    (1..=k)
        .flat_map(|len| all_words(w.alphabet(), len))
        .map(|x| occurrences(w, &x).unwrap())
        .collect()
}
