//! k-Abelian equivalence.
//!
//! Two words are k-Abelian equivalent when every non-empty factor of length
//! at most k occurs equally often in both. The production path compares
//! [`ClassSignature`]s: the length, the prefix of length k−1 and the counts
//! of length-k factors. Equal length-k counts together with a common
//! (k−1)-prefix force equal counts for every shorter factor, so the
//! signature is a complete invariant of the class.

use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::words::{decode, factor_counts, Symbol, Word};

/// The equivalence parameter: a positive integer or infinity.
///
/// Finite values order below [`K::INFINITE`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct K(Option<NonZeroUsize>);

impl Ord for K {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |k: &K| k.value().unwrap_or(usize::MAX);
        key(self).cmp(&key(other))
    }
}

impl PartialOrd for K {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl K {
    pub const INFINITE: K = K(None);

    /// Panics if `k == 0`.
    pub fn finite(k: usize) -> K {
        Self::try_finite(k).expect("k must be positive")
    }

    pub fn try_finite(k: usize) -> Result<K> {
        NonZeroUsize::new(k)
            .map(|k| K(Some(k)))
            .ok_or_else(|| Error::InvalidK(k.to_string()))
    }

    /// `None` for infinity.
    pub fn value(self) -> Option<usize> {
        self.0.map(NonZeroUsize::get)
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_none()
    }

    /// `min(n, k − 1)`, the affix length used by signatures and R_k.
    pub fn affix_len(self, n: usize) -> usize {
        match self.value() {
            Some(k) => n.min(k - 1),
            None => n,
        }
    }
}

impl fmt::Display for K {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(k) => write!(f, "{k}"),
            None => f.write_str("inf"),
        }
    }
}

impl FromStr for K {
    type Err = Error;

    fn from_str(s: &str) -> Result<K> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(K::INFINITE),
            t => t
                .parse::<usize>()
                .map_err(|_| Error::InvalidK(s.to_string()))
                .and_then(K::try_finite),
        }
    }
}

impl Serialize for K {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.value() {
            Some(k) => serializer.serialize_u64(k as u64),
            None => serializer.serialize_str("inf"),
        }
    }
}

/// Affixes and length-k factor counts of a single word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct KSpectrum {
    pub k: K,
    pub word_length: usize,
    pub prefix: Word,
    pub suffix: Word,
    /// `(factor, count)` in lexicographic factor order; only non-zero counts.
    /// Empty when the word is shorter than k.
    pub counts_k: Vec<(Word, u32)>,
}

impl KSpectrum {
    pub fn of(w: &Word, k: K) -> Result<Self> {
        let affix = k.affix_len(w.len());
        let counts_k = match k.value() {
            Some(k) if w.len() >= k => {
                let m = w.alphabet().size();
                factor_counts(w.symbols(), m, k)?
                    .into_iter()
                    .map(|(code, n)| (Word::from_parts(w.alphabet(), decode(code, m, k)), n))
                    .collect()
            }
            _ => Vec::new(),
        };
        Ok(KSpectrum {
            k,
            word_length: w.len(),
            prefix: w.prefix(affix),
            suffix: w.suffix(affix),
            counts_k,
        })
    }
}

/// Canonical, hashable key of a k-Abelian class.
///
/// Counts are stored as `(code, count)` pairs sorted by the base-m code of
/// the factor, which is its lexicographic rank in A^k.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassSignature {
    pub k: K,
    pub word_length: usize,
    pub prefix: Vec<Symbol>,
    pub counts: Vec<(u64, u32)>,
}

/// The signature of `w`'s k-Abelian class.
///
/// Words shorter than k are stored verbatim in `prefix`; for `k = ∞` the
/// whole word is the signature.
pub fn signature(w: &Word, k: K) -> Result<ClassSignature> {
    let prefix_len = k.affix_len(w.len());
    let counts = match k.value() {
        Some(k) if w.len() >= k => factor_counts(w.symbols(), w.alphabet().size(), k)?,
        _ => Vec::new(),
    };
    Ok(ClassSignature {
        k,
        word_length: w.len(),
        prefix: w.symbols()[..prefix_len].to_vec(),
        counts,
    })
}

pub fn k_abelian_equivalent(u: &Word, v: &Word, k: K) -> Result<bool> {
    u.same_alphabet(v)?;
    if u.len() != v.len() {
        return Ok(false);
    }
    if k.is_infinite() {
        return Ok(u == v);
    }
    Ok(signature(u, k)? == signature(v, k)?)
}

/// Shortest factor (lexicographically least among those) whose counts in `u`
/// and `v` differ, searching lengths `1..=k`. `None` iff `u ∼_k v`.
pub fn distinguishing_factor(u: &Word, v: &Word, k: K) -> Result<Option<Word>> {
    u.same_alphabet(v)?;
    let m = u.alphabet().size();
    let max_len = k.value().unwrap_or(usize::MAX).min(u.len().max(v.len()));
    for len in 1..=max_len {
        let cu = factor_counts(u.symbols(), m, len)?;
        let cv = factor_counts(v.symbols(), m, len)?;
        if let Some(code) = first_difference(&cu, &cv) {
            return Ok(Some(Word::from_parts(u.alphabet(), decode(code, m, len))));
        }
    }
    Ok(None)
}

fn first_difference(a: &[(u64, u32)], b: &[(u64, u32)]) -> Option<u64> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(ca, na)), Some(&(cb, nb))) => {
                if ca == cb {
                    if na != nb {
                        return Some(ca);
                    }
                    i += 1;
                    j += 1;
                } else {
                    return Some(ca.min(cb));
                }
            }
            (Some(&(ca, _)), None) => return Some(ca),
            (None, Some(&(cb, _))) => return Some(cb),
            (None, None) => unreachable!(),
        }
    }
    None
}

fn letter_counts(w: &Word) -> Vec<usize> {
    let mut counts = vec![0; w.alphabet().size()];
    for &s in w.symbols() {
        counts[s as usize] += 1;
    }
    counts
}

pub fn abelian_equivalent(u: &Word, v: &Word) -> Result<bool> {
    u.same_alphabet(v)?;
    Ok(u.len() == v.len() && letter_counts(u) == letter_counts(v))
}

/// The R_k relation: Abelian equivalence plus common prefix and suffix of
/// length k−1. Words shorter than k−1 are related only to themselves.
pub fn r_k_equivalent(u: &Word, v: &Word, k: K) -> Result<bool> {
    u.same_alphabet(v)?;
    let short = match k.value() {
        Some(k) => u.len() < k - 1 || v.len() < k - 1,
        None => true,
    };
    if short {
        return Ok(u == v);
    }
    let affix = k.affix_len(u.len());
    Ok(abelian_equivalent(u, v)?
        && u.symbols()[..affix] == v.symbols()[..affix]
        && u.symbols()[u.len() - affix..] == v.symbols()[v.len() - affix..])
}

/// Canonical key of an R_k class, consistent with [`r_k_equivalent`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RkKey {
    Verbatim(Vec<Symbol>),
    Parikh {
        letters: Vec<usize>,
        prefix: Vec<Symbol>,
        suffix: Vec<Symbol>,
    },
}

pub fn r_k_key(w: &Word, k: K) -> RkKey {
    match k.value() {
        Some(k) if w.len() >= k - 1 => {
            let affix = k - 1;
            RkKey::Parikh {
                letters: letter_counts(w),
                prefix: w.symbols()[..affix].to_vec(),
                suffix: w.symbols()[w.len() - affix..].to_vec(),
            }
        }
        _ => RkKey::Verbatim(w.symbols().to_vec()),
    }
}

/// Truth values of the six equivalent conditions on a pair with equal
/// length-k factor counts, in order:
///
/// 1. equal counts for every factor of length ≤ k−1,
/// 2. equal counts for every factor of length k−1,
/// 3. equal (k−1)-prefixes and equal (k−1)-suffixes,
/// 4. equal (k−1)-prefixes,
/// 5. equal (k−1)-suffixes,
/// 6. equal i-prefixes and (k−1−i)-suffixes for some 0 ≤ i ≤ k−1.
pub fn characterization_conditions(u: &Word, v: &Word, k: usize) -> Result<[bool; 6]> {
    u.same_alphabet(v)?;
    if k == 0 {
        return Err(Error::InvalidK("0".into()));
    }
    let need = k - 1;
    if u.len() < need || v.len() < need {
        return Err(Error::Precondition(format!(
            "both words need length at least k-1 = {need}"
        )));
    }
    let m = u.alphabet().size();
    if factor_counts(u.symbols(), m, k)? != factor_counts(v.symbols(), m, k)? {
        return Err(Error::Precondition("length-k factor counts differ".into()));
    }
    let counts_equal = |len: usize| -> Result<bool> {
        Ok(factor_counts(u.symbols(), m, len)? == factor_counts(v.symbols(), m, len)?)
    };
    let pref = |i: usize| u.symbols()[..i] == v.symbols()[..i];
    let suff = |i: usize| u.symbols()[u.len() - i..] == v.symbols()[v.len() - i..];

    let mut all_shorter = true;
    for len in 1..k {
        all_shorter &= counts_equal(len)?;
    }
    let c1 = all_shorter;
    let c2 = need == 0 || counts_equal(need)?;
    let c3 = pref(need) && suff(need);
    let c4 = pref(need);
    let c5 = suff(need);
    let c6 = (0..=need).any(|i| pref(i) && suff(need - i));
    Ok([c1, c2, c3, c4, c5, c6])
}

/// Whether all six conditions of [`characterization_conditions`] agree.
/// Intended as a test oracle.
pub fn characterizations_agree(u: &Word, v: &Word, k: usize) -> Result<bool> {
    let c = characterization_conditions(u, v, k)?;
    Ok(c.iter().all(|&b| b == c[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    fn bin(s: &str) -> Word {
        Word::parse(s, &Alphabet::binary()).unwrap()
    }

    #[test]
    fn worked_pairs() {
        let (u, v) = (bin("010110"), bin("011010"));
        assert!(k_abelian_equivalent(&u, &v, K::finite(3)).unwrap());
        assert!(!k_abelian_equivalent(&u, &v, K::finite(4)).unwrap());
        assert!(!k_abelian_equivalent(&bin("0110"), &bin("1101"), K::finite(2)).unwrap());
        for k in 1..=6 {
            let pad = "0".repeat(k - 1);
            let u = bin(&format!("{pad}01{pad}"));
            let v = bin(&format!("{pad}10{pad}"));
            assert!(k_abelian_equivalent(&u, &v, K::finite(k)).unwrap(), "k={k}");
            assert!(
                !k_abelian_equivalent(&u, &v, K::finite(k + 1)).unwrap(),
                "k={k}"
            );
        }
    }

    #[test]
    fn infinite_k_is_equality() {
        let (u, v) = (bin("010110"), bin("011010"));
        assert!(!k_abelian_equivalent(&u, &v, K::INFINITE).unwrap());
        assert!(k_abelian_equivalent(&u, &u, K::INFINITE).unwrap());
        assert_eq!(signature(&u, K::INFINITE).unwrap().prefix, u.symbols());
    }

    #[test]
    fn signature_shapes() {
        let s = signature(&bin("010110"), K::finite(3)).unwrap();
        assert_eq!(s.prefix, [0, 1]);
        // 010 -> 2, 011 -> 3, 101 -> 5, 110 -> 6
        assert_eq!(s.counts, vec![(2, 1), (3, 1), (5, 1), (6, 1)]);
        assert_eq!(s, signature(&bin("011010"), K::finite(3)).unwrap());

        let short = signature(&bin("0"), K::finite(3)).unwrap();
        assert_eq!(short.prefix, [0]);
        assert!(short.counts.is_empty());

        assert_ne!(
            signature(&bin("0011"), K::finite(2)).unwrap(),
            signature(&bin("0101"), K::finite(2)).unwrap()
        );
    }

    #[test]
    fn spectrum_records_affixes() {
        let s = KSpectrum::of(&bin("010110"), K::finite(3)).unwrap();
        assert_eq!(s.prefix.to_string(), "01");
        assert_eq!(s.suffix.to_string(), "10");
        let total: u32 = s.counts_k.iter().map(|(_, n)| n).sum();
        assert_eq!(total as usize, 6 - 3 + 1);
    }

    #[test]
    fn r_k_is_coarser() {
        let (u, v) = (bin("0011"), bin("0101"));
        assert!(r_k_equivalent(&u, &v, K::finite(2)).unwrap());
        assert!(!k_abelian_equivalent(&u, &v, K::finite(2)).unwrap());
        let ab = Alphabet::from_chars("ab").unwrap();
        let (u, v) = (
            Word::parse("aabb", &ab).unwrap(),
            Word::parse("abab", &ab).unwrap(),
        );
        assert!(r_k_equivalent(&u, &v, K::finite(2)).unwrap());
        assert!(!k_abelian_equivalent(&u, &v, K::finite(2)).unwrap());
        assert_eq!(r_k_key(&u, K::finite(2)), r_k_key(&v, K::finite(2)));
        assert!(r_k_equivalent(&u, &u, K::INFINITE).unwrap());
        assert!(!r_k_equivalent(&u, &v, K::INFINITE).unwrap());
        // shorter than k-1: equality only
        assert!(!r_k_equivalent(&bin("01"), &bin("10"), K::finite(4)).unwrap());
    }

    #[test]
    fn witness() {
        let x = distinguishing_factor(&bin("010110"), &bin("011010"), K::finite(4))
            .unwrap()
            .unwrap();
        assert_eq!(x.len(), 4);
        assert_eq!(
            distinguishing_factor(&bin("010110"), &bin("011010"), K::finite(3)).unwrap(),
            None
        );
        let x = distinguishing_factor(&bin("0110"), &bin("1101"), K::finite(2))
            .unwrap()
            .unwrap();
        assert_eq!(x.to_string(), "0");
        let x = distinguishing_factor(&bin("01"), &bin("011"), K::INFINITE)
            .unwrap()
            .unwrap();
        assert_eq!(x.to_string(), "1");
    }

    #[test]
    fn six_conditions() {
        assert!(characterizations_agree(&bin("010110"), &bin("011010"), 3).unwrap());
        assert_eq!(
            characterization_conditions(&bin("010110"), &bin("011010"), 3).unwrap(),
            [true; 6]
        );
        // 0110 and 1101 share the length-2 counts but not the affixes
        let c = characterization_conditions(&bin("0110"), &bin("1101"), 2).unwrap();
        assert_eq!(c, [false; 6]);
        assert!(matches!(
            characterizations_agree(&bin("0011"), &bin("0101"), 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn parse_k() {
        assert_eq!("inf".parse::<K>().unwrap(), K::INFINITE);
        assert_eq!("3".parse::<K>().unwrap(), K::finite(3));
        assert!("0".parse::<K>().is_err());
        assert!(K::finite(10) < K::INFINITE);
    }
}
