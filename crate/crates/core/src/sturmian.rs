//! Structural tooling for Sturmian words: special factors, the swap maps
//! linking consecutive factors, and the classification of k-Abelian
//! equivalent pairs of length 2k.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::equivalence::{abelian_equivalent, signature, K};
use crate::error::{Error, Result};
use crate::flowgraph::Budget;
use crate::words::{balanced_symbols, code_space, decode, factors, Alphabet, Symbol, Word};

/// Special factors of one length within a prefix window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialFactorReport {
    pub n: usize,
    /// `u` with `ua`, `ub` both factors for distinct letters `a`, `b`.
    pub right_special: BTreeSet<Word>,
    pub left_special: BTreeSet<Word>,
    pub bispecial: BTreeSet<Word>,
}

pub fn special_factors(prefix: &Word, n: usize) -> Result<SpecialFactorReport> {
    if n + 1 > prefix.len() {
        return Err(Error::TooShort {
            len: prefix.len(),
            need: n + 1,
        });
    }
    let mut right: BTreeMap<&[Symbol], BTreeSet<Symbol>> = BTreeMap::new();
    let mut left: BTreeMap<&[Symbol], BTreeSet<Symbol>> = BTreeMap::new();
    for w in prefix.symbols().windows(n + 1) {
        right.entry(&w[..n]).or_default().insert(w[n]);
        left.entry(&w[1..]).or_default().insert(w[0]);
    }
    let special = |map: BTreeMap<&[Symbol], BTreeSet<Symbol>>| -> BTreeSet<Word> {
        map.into_iter()
            .filter(|(_, ext)| ext.len() >= 2)
            .map(|(u, _)| Word::from_parts(prefix.alphabet(), u.to_vec()))
            .collect()
    };
    let right_special = special(right);
    let left_special = special(left);
    let bispecial = right_special.intersection(&left_special).cloned().collect();
    Ok(SpecialFactorReport {
        n,
        right_special,
        left_special,
        bispecial,
    })
}

/// `swap_i` on binary words (1-based `i`): turns the `01` at positions
/// `i, i+1` into `10`, or for `i = |w|` a final `0` into `1`.
pub fn swap(w: &Word, i: usize) -> Result<Word> {
    let m = w.alphabet().size();
    if m != 2 {
        return Err(Error::NonBinary(m));
    }
    let undefined = || Error::SwapUndefined {
        word: w.to_string(),
        index: i,
    };
    let n = w.len();
    let mut symbols = w.symbols().to_vec();
    if i == 0 || i > n {
        return Err(undefined());
    }
    if i < n {
        if symbols[i - 1] != 0 || symbols[i] != 1 {
            return Err(undefined());
        }
        symbols.swap(i - 1, i);
    } else {
        if symbols[n - 1] != 0 {
            return Err(undefined());
        }
        symbols[n - 1] = 1;
    }
    Ok(Word::from_parts(w.alphabet(), symbols))
}

/// The length-`n` factors in lexicographic order, linked by swaps:
/// `factors[i + 1] = swap_{sigma[i]}(factors[i])`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorChain {
    pub n: usize,
    pub factors: Vec<Word>,
    /// 1-based swap indices, a permutation of `1..=n`.
    pub sigma: Vec<usize>,
}

pub fn factor_chain(prefix: &Word, n: usize) -> Result<FactorChain> {
    let m = prefix.alphabet().size();
    if m != 2 {
        return Err(Error::NonBinary(m));
    }
    let sorted: Vec<Word> = factors(prefix, n).into_iter().collect();
    if sorted.len() != n + 1 {
        return Err(Error::NotSturmian(format!(
            "{} factors of length {n}, expected {}",
            sorted.len(),
            n + 1
        )));
    }
    let mut sigma = Vec::with_capacity(n);
    for pair in sorted.windows(2) {
        let hits: Vec<usize> = (1..=n)
            .filter(|&i| swap(&pair[0], i).is_ok_and(|s| s == pair[1]))
            .collect();
        match hits.as_slice() {
            [i] => sigma.push(*i),
            _ => {
                return Err(Error::NotSturmian(format!(
                    "{} and {} are not related by a unique swap",
                    pair[0], pair[1]
                )))
            }
        }
    }
    let distinct: BTreeSet<usize> = sigma.iter().copied().collect();
    if distinct.len() != n {
        return Err(Error::NotSturmian(format!(
            "swap indices {sigma:?} are not a permutation"
        )));
    }
    Ok(FactorChain {
        n,
        factors: sorted,
        sigma,
    })
}

/// A distinct equivalent pair `u = x·a·b·rev(x)`, `v = x·b·a·rev(x)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Length2kPair {
    pub u: Word,
    pub v: Word,
    pub x: Word,
}

/// All unordered pairs `u < v` of k-Abelian equivalent words in `A^{2k}`,
/// each verified against the decomposition `x·ab·rev(x)` / `x·ba·rev(x)`
/// with `x`, `xa`, `xb` balanced binary words.
///
/// Returns [`Error::DecompositionFailure`] on the first pair that does not
/// decompose.
pub fn classify_length_2k_pairs(m: usize, k: usize, budget: Budget) -> Result<Vec<Length2kPair>> {
    if k == 0 {
        return Err(Error::InvalidK("0".into()));
    }
    let len = 2 * k;
    let total = code_space(m, len)
        .filter(|&t| t <= budget.max_nodes)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!("{m}^{len} words exceed {} words", budget.max_nodes))
        })?;
    let alphabet = Alphabet::of_size(m);
    let signed = (0..total)
        .into_par_iter()
        .map(|code| {
            let w = Word::from_parts(&alphabet, decode(code, m, len));
            signature(&w, K::finite(k)).map(|s| (s, w))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut classes: BTreeMap<_, Vec<Word>> = BTreeMap::new();
    for (sig, w) in signed {
        classes.entry(sig).or_default().push(w);
    }
    let mut pairs = Vec::new();
    for class in classes.values() {
        for (i, u) in class.iter().enumerate() {
            for v in &class[i + 1..] {
                pairs.push(decompose_pair(u, v, k)?);
            }
        }
    }
    pairs.sort();
    Ok(pairs)
}

/// Splits `u`, `v` of length `2k` as `x·ab·rev(x)` and `x·ba·rev(x)` and
/// checks the balance conditions.
pub fn decompose_pair(u: &Word, v: &Word, k: usize) -> Result<Length2kPair> {
    let fail = || Error::DecompositionFailure {
        u: u.to_string(),
        v: v.to_string(),
    };
    u.same_alphabet(v)?;
    if k == 0 || u.len() != 2 * k || v.len() != 2 * k {
        return Err(fail());
    }
    let (us, vs) = (u.symbols(), v.symbols());
    let x = &us[..k - 1];
    let (a, b) = (us[k - 1], us[k]);
    let mut x_rev = x.to_vec();
    x_rev.reverse();
    let shape_ok = a != b
        && vs[..k - 1] == *x
        && vs[k - 1] == b
        && vs[k] == a
        && us[k + 1..] == x_rev[..]
        && vs[k + 1..] == x_rev[..];
    let with = |c: Symbol| {
        let mut s = x.to_vec();
        s.push(c);
        s
    };
    let balanced = balanced_symbols(us)
        && balanced_symbols(vs)
        && balanced_symbols(&with(a))
        && balanced_symbols(&with(b));
    if !(shape_ok && balanced) {
        return Err(fail());
    }
    Ok(Length2kPair {
        u: u.clone(),
        v: v.clone(),
        x: Word::from_parts(u.alphabet(), x.to_vec()),
    })
}

/// Decides `u ∼_k v` for factors of one Sturmian word: Abelian equivalence
/// plus common prefix and suffix of length `min(|u|, k − 1)`.
///
/// Both words must occur in `prefix`.
pub fn same_sturmian_equivalence(u: &Word, v: &Word, k: K, prefix: &Word) -> Result<bool> {
    for w in [u, v] {
        w.same_alphabet(prefix)?;
        let occurs = w.is_empty() || prefix.symbols().windows(w.len()).any(|x| x == w.symbols());
        if !occurs {
            return Err(Error::NotAFactor(w.to_string()));
        }
    }
    if u.len() != v.len() {
        return Ok(false);
    }
    let affix = k.affix_len(u.len());
    Ok(abelian_equivalent(u, v)?
        && u.symbols()[..affix] == v.symbols()[..affix]
        && u.symbols()[u.len() - affix..] == v.symbols()[v.len() - affix..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::k_abelian_equivalent;
    use crate::generators::WordStream;

    fn bin(s: &str) -> Word {
        Word::parse(s, &Alphabet::binary()).unwrap()
    }

    #[test]
    fn swap_examples() {
        assert_eq!(swap(&bin("001001"), 5).unwrap(), bin("001010"));
        assert_eq!(swap(&bin("010100"), 1).unwrap(), bin("100100"));
        assert_eq!(swap(&bin("100100"), 6).unwrap(), bin("100101"));
        assert!(matches!(
            swap(&bin("100101"), 6),
            Err(Error::SwapUndefined { .. })
        ));
        assert!(matches!(
            swap(&bin("100100"), 1),
            Err(Error::SwapUndefined { .. })
        ));
        assert!(matches!(
            swap(&bin("01"), 0),
            Err(Error::SwapUndefined { .. })
        ));
    }

    #[test]
    fn fibonacci_chain() {
        let fib = WordStream::fibonacci().prefix(200);
        let chain = factor_chain(&fib, 6).unwrap();
        let names: Vec<String> = chain.factors.iter().map(Word::to_string).collect();
        assert_eq!(
            names,
            ["001001", "001010", "010010", "010100", "100100", "100101", "101001"]
        );
        assert_eq!(chain.sigma, [5, 2, 4, 1, 6, 3]);
        let one = factor_chain(&fib, 1).unwrap();
        assert_eq!(one.sigma, [1]);
    }

    #[test]
    fn chain_rejects_non_sturmian() {
        let tm = WordStream::thue_morse().prefix(100);
        assert!(matches!(factor_chain(&tm, 3), Err(Error::NotSturmian(_))));
    }

    #[test]
    fn mechanical_chain_is_permutation() {
        let mech = WordStream::mechanical(13, 21, 0).unwrap().prefix(100);
        let chain = factor_chain(&mech, 5).unwrap();
        let mut s = chain.sigma.clone();
        s.sort();
        assert_eq!(s, [1, 2, 3, 4, 5]);
    }

    #[test]
    fn special_factor_examples() {
        let fib = WordStream::fibonacci().prefix(200);
        let r = special_factors(&fib, 1).unwrap();
        assert_eq!(r.right_special, BTreeSet::from([bin("0")]));
        assert_eq!(special_factors(&fib, 2).unwrap().right_special.len(), 1);
        let alt = bin(&"01".repeat(30));
        assert!(special_factors(&alt, 3).unwrap().right_special.is_empty());
        assert!(special_factors(&bin("01"), 2).is_err());
    }

    #[test]
    fn length_2k_small_cases() {
        let pairs = classify_length_2k_pairs(2, 1, Budget::default()).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(
            (pairs[0].u.to_string(), pairs[0].v.to_string()),
            ("01".into(), "10".into())
        );
        assert!(pairs[0].x.is_empty());

        let pairs = classify_length_2k_pairs(2, 2, Budget::default()).unwrap();
        assert!(pairs.iter().any(|p| p.u.to_string() == "0010"
            && p.v.to_string() == "0100"
            && p.x.to_string() == "0"));

        let pairs = classify_length_2k_pairs(3, 2, Budget::default()).unwrap();
        assert!(!pairs.is_empty());
        for p in &pairs {
            let letters: BTreeSet<Symbol> = p.u.symbols().iter().copied().collect();
            assert!(letters.len() <= 2, "{p:?}");
        }
        assert!(classify_length_2k_pairs(2, 2, Budget::new(4).unwrap()).is_err());
    }

    #[test]
    fn decomposition_failure_is_reported() {
        assert!(matches!(
            decompose_pair(&bin("0110"), &bin("1001"), 2),
            Err(Error::DecompositionFailure { .. })
        ));
    }

    #[test]
    fn same_word_criterion() {
        let fib = WordStream::fibonacci().prefix(100);
        let k2 = K::finite(2);
        assert!(same_sturmian_equivalence(&bin("001010"), &bin("010010"), k2, &fib).unwrap());
        assert!(!same_sturmian_equivalence(&bin("100100"), &bin("100101"), k2, &fib).unwrap());
        assert!(!k_abelian_equivalent(&bin("100100"), &bin("100101"), k2).unwrap());
        assert!(matches!(
            same_sturmian_equivalence(&bin("0011"), &bin("0101"), k2, &fib),
            Err(Error::NotAFactor(_))
        ));
    }
}
