//! k-Abelian complexity of infinite words, measured on finite prefixes.
//!
//! Every value computed from a prefix is a lower bound for the quantity of
//! the infinite word: factors missing from the window are missing from the
//! count. A [`ComplexityProfile`] therefore carries a per-length validity flag,
//! set when the generating stream guarantees that the window holds every
//! factor of that length. The periodicity alarm only looks at valid lengths.

use std::collections::HashSet;
use std::hash::Hash;

use serde::Serialize;

use crate::equivalence::{r_k_key, signature, K};
use crate::error::{Error, Result};
use crate::generators::WordStream;
use crate::words::{code_space, encode, Symbol, Word};

/// The threshold `q^(k)(n)`: `n + 1` up to `2k − 1`, then `2k`.
pub fn q(k: K, n: usize) -> usize {
    match k.value() {
        Some(k) if n >= 2 * k => 2 * k,
        _ => n + 1,
    }
}

/// Which relation a profile counts classes of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// k-Abelian equivalence.
    KAbelian,
    /// The coarser R_k relation.
    Rk,
}

/// Number of k-Abelian classes among the length-`n` factors of `prefix`.
pub fn k_complexity(prefix: &Word, k: K, n: usize) -> Result<usize> {
    check_length(prefix, n)?;
    let symbols = prefix.symbols();
    match k.value() {
        Some(k) if n >= k => {
            let m = prefix.alphabet().size();
            match code_space(m, k).filter(|&s| s <= 1 << 12) {
                Some(space) => Ok(sliding_class_count(symbols, m, k, n, space as usize)),
                None => distinct_keys(symbols, n, |w| {
                    signature(
                        &Word::from_parts(prefix.alphabet(), w.to_vec()),
                        K::finite(k),
                    )
                }),
            }
        }
        // n < k: the class of a factor is the factor itself
        _ => Ok(distinct_windows(symbols, n)),
    }
}

/// Number of R_k classes among the length-`n` factors of `prefix`.
pub fn r_complexity(prefix: &Word, k: K, n: usize) -> Result<usize> {
    check_length(prefix, n)?;
    distinct_keys(prefix.symbols(), n, |w| {
        Ok(r_k_key(&Word::from_parts(prefix.alphabet(), w.to_vec()), k))
    })
}

/// Plain factor complexity.
pub fn factor_complexity(prefix: &Word, n: usize) -> Result<usize> {
    check_length(prefix, n)?;
    Ok(distinct_windows(prefix.symbols(), n))
}

fn check_length(prefix: &Word, n: usize) -> Result<()> {
    if n > prefix.len() {
        Err(Error::TooShort {
            len: prefix.len(),
            need: n,
        })
    } else {
        Ok(())
    }
}

fn distinct_windows(symbols: &[Symbol], n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    symbols.windows(n).collect::<HashSet<_>>().len()
}

fn distinct_keys<T, F>(symbols: &[Symbol], n: usize, key: F) -> Result<usize>
where
    T: Hash + Eq,
    F: Fn(&[Symbol]) -> Result<T>,
{
    let windows: HashSet<&[Symbol]> = symbols.windows(n.max(1)).map(|w| &w[..n]).collect();
    let keys = windows
        .into_iter()
        .map(key)
        .collect::<Result<HashSet<T>>>()?;
    Ok(keys.len().max(usize::from(n == 0)))
}

/// Distinct `(pref_{k−1}, length-k counts)` keys over all length-`n` windows,
/// updating one dense count table as the window slides.
fn sliding_class_count(symbols: &[Symbol], m: usize, k: usize, n: usize, space: usize) -> usize {
    let codes: Vec<usize> = crate::words::rolling_codes(symbols, m, k, space as u64)
        .map(|c| c as usize)
        .collect();
    let per_window = n - k + 1;
    let mut table = vec![0u32; space];
    for &c in &codes[..per_window] {
        table[c] += 1;
    }
    let mut seen: HashSet<(u64, Vec<u32>)> = HashSet::new();
    for start in 0..=symbols.len() - n {
        if start > 0 {
            table[codes[start - 1]] -= 1;
            table[codes[start + per_window - 1]] += 1;
        }
        let head = encode(&symbols[start..start + k - 1], m);
        seen.insert((head, table.clone()));
    }
    seen.len()
}

/// Complexity values for `n = 1..=n_max` on one window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityProfile {
    pub k: K,
    pub relation: Relation,
    pub n_max: usize,
    /// Prefix length the values were computed on.
    pub window_length: usize,
    /// `values[n - 1]` is the class count at length `n`.
    pub values: Vec<usize>,
    /// `valid[n - 1]`: the window is known to contain every length-`n`
    /// factor of the source.
    pub valid: Vec<bool>,
}

impl ComplexityProfile {
    /// Profile of a bare prefix; `valid(n)` says which lengths are covered.
    pub fn of_prefix(
        prefix: &Word,
        k: K,
        relation: Relation,
        n_max: usize,
        valid: impl Fn(usize) -> bool,
    ) -> Result<Self> {
        check_length(prefix, n_max)?;
        let values = (1..=n_max)
            .map(|n| match relation {
                Relation::KAbelian => k_complexity(prefix, k, n),
                Relation::Rk => r_complexity(prefix, k, n),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ComplexityProfile {
            k,
            relation,
            n_max,
            window_length: prefix.len(),
            values,
            valid: (1..=n_max).map(valid).collect(),
        })
    }

    /// Profile of a stream. The window defaults to the stream's coverage
    /// bound for `n_max`, or `max(8 n_max, 1024)` when none is known.
    pub fn of_stream(
        stream: &WordStream,
        k: K,
        relation: Relation,
        n_max: usize,
        window: Option<usize>,
    ) -> Result<Self> {
        let window = window
            .or_else(|| stream.coverage_window(n_max))
            .unwrap_or_else(|| (8 * n_max).max(1024))
            .max(n_max);
        let prefix = stream.prefix(window);
        Self::of_prefix(&prefix, k, relation, n_max, |n| {
            stream.coverage_window(n).is_some_and(|l| l <= window)
        })
    }

    pub fn value(&self, n: usize) -> Option<usize> {
        n.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn is_valid(&self, n: usize) -> bool {
        n.checked_sub(1)
            .and_then(|i| self.valid.get(i).copied())
            .unwrap_or(false)
    }
}

/// Least valid `n0` with `values(n0) < q(k, n0)`.
///
/// A hit proves the source ultimately periodic; no hit proves nothing.
pub fn periodicity_alarm(profile: &ComplexityProfile) -> Option<usize> {
    (1..=profile.n_max)
        .find(|&n| profile.is_valid(n) && profile.value(n).is_some_and(|v| v < q(profile.k, n)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileViolation {
    pub k: K,
    pub n: usize,
    pub value: usize,
    pub expected: usize,
}

/// Result of comparing a stream's k-Abelian complexity against `q^(k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SturmianReport {
    pub stream: String,
    pub k_max: usize,
    pub n_max: usize,
    pub violations: Vec<ProfileViolation>,
    /// `(k, n)` pairs skipped because the window was not known to cover them.
    pub unchecked: Vec<(usize, usize)>,
}

impl SturmianReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.unchecked.is_empty()
    }
}

/// Checks `P^(k)(n) = q^(k)(n)` for `1 ≤ k ≤ k_max`, `1 ≤ n ≤ n_max`.
pub fn sturmian_profile_check(
    stream: &WordStream,
    k_max: usize,
    n_max: usize,
) -> Result<SturmianReport> {
    let m = stream.alphabet().size();
    if m != 2 {
        return Err(Error::NonBinary(m));
    }
    if let Some(bound) = stream.sturmian_bound() {
        if n_max > bound {
            return Err(Error::Precondition(format!(
                "n_max = {n_max} exceeds the Sturmian validity bound {bound} of {stream}"
            )));
        }
    }
    let mut violations = Vec::new();
    let mut unchecked = Vec::new();
    for k in 1..=k_max {
        let k = K::finite(k);
        let profile = ComplexityProfile::of_stream(stream, k, Relation::KAbelian, n_max, None)?;
        for n in 1..=n_max {
            let value = profile.value(n).unwrap();
            let expected = q(k, n);
            if !profile.is_valid(n) {
                unchecked.push((k.value().unwrap(), n));
            } else if value != expected {
                violations.push(ProfileViolation {
                    k,
                    n,
                    value,
                    expected,
                });
            }
        }
    }
    Ok(SturmianReport {
        stream: stream.to_string(),
        k_max,
        n_max,
        violations,
        unchecked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    fn bin(s: &str) -> Word {
        Word::parse(s, &Alphabet::binary()).unwrap()
    }

    #[test]
    fn q_values() {
        assert_eq!(q(K::finite(2), 3), 4);
        assert_eq!(q(K::finite(2), 6), 4);
        assert_eq!(q(K::finite(2), 4), 4);
        assert_eq!(q(K::INFINITE, 10), 11);
        assert_eq!(q(K::finite(1), 0), 1);
    }

    #[test]
    fn fibonacci_length_six() {
        let fib = WordStream::fibonacci().prefix(100);
        assert_eq!(k_complexity(&fib, K::finite(2), 6).unwrap(), 4);
        assert_eq!(r_complexity(&fib, K::finite(2), 6).unwrap(), 4);
        assert_eq!(k_complexity(&fib, K::INFINITE, 6).unwrap(), 7);
        assert_eq!(factor_complexity(&fib, 6).unwrap(), 7);
    }

    #[test]
    fn sliding_matches_signatures() {
        let tm = WordStream::thue_morse().prefix(300);
        for k in 1..=4 {
            for n in 0..=20 {
                let by_sig = distinct_keys(tm.symbols(), n, |w| {
                    signature(&Word::from_parts(tm.alphabet(), w.to_vec()), K::finite(k))
                })
                .unwrap();
                assert_eq!(
                    k_complexity(&tm, K::finite(k), n).unwrap(),
                    by_sig,
                    "k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn alternating_word() {
        let w = bin(&"01".repeat(20));
        assert_eq!(k_complexity(&w, K::finite(2), 2).unwrap(), 2);
        let s: WordStream = "up:U=,V=01".parse().unwrap();
        let p =
            ComplexityProfile::of_stream(&s, K::finite(2), Relation::KAbelian, 20, None).unwrap();
        assert_eq!(periodicity_alarm(&p), Some(2));
    }

    #[test]
    fn r_can_be_strictly_smaller() {
        let w = bin("00110101");
        assert!(
            r_complexity(&w, K::finite(2), 4).unwrap() < k_complexity(&w, K::finite(2), 4).unwrap()
        );
    }

    #[test]
    fn alarm_needs_validity() {
        // the short window misses factors, but no length is flagged valid
        let s: WordStream = "up:U=0000000000,V=1".parse().unwrap();
        let p = ComplexityProfile::of_prefix(
            &s.prefix(12),
            K::finite(1),
            Relation::KAbelian,
            12,
            |_| false,
        )
        .unwrap();
        assert_eq!(periodicity_alarm(&p), None);
        let p =
            ComplexityProfile::of_stream(&s, K::finite(1), Relation::KAbelian, 12, None).unwrap();
        assert!(p.valid.iter().all(|&v| v));
    }

    #[test]
    fn sturmian_check_examples() {
        let report = sturmian_profile_check(&WordStream::fibonacci(), 2, 20).unwrap();
        assert!(report.passed(), "{report:?}");
        let report = sturmian_profile_check(&WordStream::thue_morse(), 1, 4).unwrap();
        assert!(report.violations.iter().any(|v| v.n == 2 && v.value == 3));
        let alt: WordStream = "up:U=,V=01".parse().unwrap();
        let report = sturmian_profile_check(&alt, 2, 6).unwrap();
        assert_eq!(report.violations[0].n, 2);
        let mech = WordStream::mechanical(13, 21, 0).unwrap();
        assert!(sturmian_profile_check(&mech, 2, 40).is_err());
        let ternary: WordStream = "up:U=,V=012".parse().unwrap();
        assert_eq!(
            sturmian_profile_check(&ternary, 1, 3),
            Err(Error::NonBinary(3))
        );
    }

    #[test]
    fn errors() {
        assert!(k_complexity(&bin("01"), K::finite(1), 3).is_err());
        assert_eq!(k_complexity(&bin("01"), K::finite(1), 0).unwrap(), 1);
        assert_eq!(r_complexity(&bin("01"), K::finite(1), 0).unwrap(), 1);
    }
}
