//! k-Abelian powers and (k, B)-balance.
//!
//! [`find_power`] is a bounded search: it scans block lengths up to `l_max`
//! and reports the first witness in `(block length, start)` order, or `None`
//! when the budget is exhausted without one.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::complexity::k_complexity;
use crate::equivalence::{signature, ClassSignature, K};
use crate::error::{Error, Result};
use crate::words::{code_space, encode, Symbol, Word};

/// A set of positions `D ⊆ ℕ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PositionSet {
    All,
    /// `{start, start + step, start + 2 step, …}`.
    Progression {
        start: usize,
        step: usize,
    },
    /// Indices whose residue modulo `modulus` is listed.
    Residues {
        modulus: usize,
        residues: BTreeSet<usize>,
    },
    Explicit(BTreeSet<usize>),
}

impl PositionSet {
    pub fn contains(&self, i: usize) -> bool {
        match self {
            PositionSet::All => true,
            PositionSet::Progression { start, step } => {
                i >= *start && (i - start).is_multiple_of(*step)
            }
            PositionSet::Residues { modulus, residues } => residues.contains(&(i % modulus)),
            PositionSet::Explicit(set) => set.contains(&i),
        }
    }

    /// Fraction of `0..window` in the set.
    pub fn density(&self, window: usize) -> f64 {
        if window == 0 {
            return 0.0;
        }
        let hits = (0..window).filter(|&i| self.contains(i)).count();
        hits as f64 / window as f64
    }
}

impl fmt::Display for PositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join =
            |s: &BTreeSet<usize>| s.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        match self {
            PositionSet::All => f.write_str("all"),
            PositionSet::Progression { start, step } => write!(f, "ap:{start},{step}"),
            PositionSet::Residues { modulus, residues } => {
                write!(f, "res:{modulus}:{}", join(residues))
            }
            PositionSet::Explicit(set) => write!(f, "set:{}", join(set)),
        }
    }
}

/// `all`, `ap:START,STEP`, `res:MOD:R1,R2,…` or `set:I1,I2,…`.
impl FromStr for PositionSet {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let list = |s: &str| -> Result<BTreeSet<usize>> {
            s.split([',', ' ', '\n', '\t'])
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| bad("expected integers"))
                })
                .collect()
        };
        let (head, rest) = spec.trim().split_once(':').unwrap_or((spec.trim(), ""));
        match head {
            "all" => Ok(PositionSet::All),
            "ap" => {
                let (a, d) = rest
                    .split_once(',')
                    .ok_or_else(|| bad("expected ap:START,STEP"))?;
                let start = a
                    .trim()
                    .parse()
                    .map_err(|_| bad("START must be an integer"))?;
                let step: usize = d
                    .trim()
                    .parse()
                    .map_err(|_| bad("STEP must be an integer"))?;
                if step == 0 {
                    return Err(bad("STEP must be positive"));
                }
                Ok(PositionSet::Progression { start, step })
            }
            "res" => {
                let (m, r) = rest
                    .split_once(':')
                    .ok_or_else(|| bad("expected res:MOD:R,…"))?;
                let modulus: usize = m
                    .trim()
                    .parse()
                    .map_err(|_| bad("MOD must be an integer"))?;
                if modulus == 0 {
                    return Err(bad("MOD must be positive"));
                }
                let residues = list(r)?;
                if residues.iter().any(|&r| r >= modulus) {
                    return Err(bad("residues must be below MOD"));
                }
                Ok(PositionSet::Residues { modulus, residues })
            }
            "set" => Ok(PositionSet::Explicit(list(rest)?)),
            _ => Err(bad("unknown position set")),
        }
    }
}

/// `N` consecutive blocks of length `block_length` starting at `start`,
/// pairwise k-Abelian equivalent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerWitness {
    pub start: usize,
    pub block_length: usize,
    pub exponent: usize,
    pub k: K,
    pub blocks: Vec<Word>,
}

/// Whether `w` splits into `n` equal blocks that are pairwise `∼_k`.
pub fn is_k_power(w: &Word, n: usize, k: K) -> Result<bool> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "exponent must be at least 2, got {n}"
        )));
    }
    if !w.len().is_multiple_of(n) {
        return Err(Error::Precondition(format!(
            "exponent {n} does not divide the length {}",
            w.len()
        )));
    }
    let l = w.len() / n;
    let first = signature(&w.factor(0, l), k)?;
    for j in 1..n {
        if signature(&w.factor(j * l, (j + 1) * l), k)? != first {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Class identifiers of every length-`l` window of `symbols`.
fn window_class_ids(word: &Word, l: usize, k: K) -> Result<Vec<u32>> {
    let symbols = word.symbols();
    let mut ids = HashMap::new();
    let mut out = Vec::with_capacity(symbols.len() + 1 - l);
    match k.value() {
        Some(_) => {
            let mut by_sig: HashMap<ClassSignature, u32> = HashMap::new();
            for start in 0..=symbols.len() - l {
                let sig = signature(&word.factor(start, start + l), k)?;
                let next = by_sig.len() as u32;
                out.push(*by_sig.entry(sig).or_insert(next));
            }
        }
        None => {
            for w in symbols.windows(l) {
                let next = ids.len() as u32;
                out.push(*ids.entry(w).or_insert(next));
            }
        }
    }
    Ok(out)
}

/// First k-Abelian `n`-power in `prefix` whose progression
/// `{i, i + l, …, i + l n}` lies in `positions`, with `l ≤ l_max`, in
/// `(l, i)` order.
pub fn find_power(
    prefix: &Word,
    k: K,
    n: usize,
    positions: &PositionSet,
    l_max: usize,
) -> Result<Option<PowerWitness>> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "exponent must be at least 2, got {n}"
        )));
    }
    if l_max == 0 || l_max * n > prefix.len() {
        return Err(Error::Precondition(format!(
            "need 1 <= l_max and l_max * N <= |prefix| (l_max = {l_max}, N = {n}, |prefix| = {})",
            prefix.len()
        )));
    }
    let search = |l: usize| -> Result<Option<PowerWitness>> {
        let ids = window_class_ids(prefix, l, k)?;
        for i in 0..=prefix.len() - l * n {
            let in_d = (0..=n).all(|j| positions.contains(i + j * l));
            if in_d && (1..n).all(|j| ids[i + j * l] == ids[i]) {
                return Ok(Some(PowerWitness {
                    start: i,
                    block_length: l,
                    exponent: n,
                    k,
                    blocks: (0..n)
                        .map(|j| prefix.factor(i + j * l, i + (j + 1) * l))
                        .collect(),
                }));
            }
        }
        Ok(None)
    };
    (1..=l_max)
        .into_par_iter()
        .find_map_first(|l| search(l).transpose())
        .transpose()
}

/// Witness that a window is not better than `(k, B)`-balanced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceWitness {
    /// Window with the most occurrences of `x`.
    pub u: Word,
    /// Window of the same length with the fewest.
    pub v: Word,
    pub x: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceReport {
    pub k: usize,
    /// Least `B` such that the window is `(k, B)`-balanced.
    pub bound: u64,
    pub witness: Option<BalanceWitness>,
    pub window: usize,
}

/// Best imbalance found for one `(|x|, window length)` pair.
#[derive(Debug, Clone, Copy)]
struct Imbalance {
    spread: u64,
    x_len: usize,
    window_len: usize,
    x_pos: usize,
    max_start: usize,
    min_start: usize,
}

impl Imbalance {
    /// Larger spread wins; ties go to the shorter `x`, then shorter window.
    fn better(self, other: Imbalance) -> Imbalance {
        let key = |i: &Imbalance| (std::cmp::Reverse(i.spread), i.x_len, i.window_len);
        if key(&other) < key(&self) {
            other
        } else {
            self
        }
    }
}

/// Compact ids of the length-`len` factors at each position, numbered in
/// lexicographic order of the factor, plus the position of one occurrence
/// per id.
fn factor_ids(symbols: &[Symbol], m: usize, len: usize) -> (Vec<usize>, Vec<usize>) {
    let codes: Vec<u64> = match code_space(m, len) {
        Some(space) => crate::words::rolling_codes(symbols, m, len, space).collect(),
        None => symbols.windows(len).map(|w| encode(w, m)).collect(),
    };
    let mut distinct: Vec<(u64, usize)> = codes.iter().enumerate().map(|(p, &c)| (c, p)).collect();
    distinct.sort_unstable();
    distinct.dedup_by_key(|e| e.0);
    let index: HashMap<u64, usize> = distinct
        .iter()
        .enumerate()
        .map(|(i, &(c, _))| (c, i))
        .collect();
    (
        codes.iter().map(|c| index[c]).collect(),
        distinct.iter().map(|&(_, p)| p).collect(),
    )
}

fn imbalance_for(
    ids: &[usize],
    distinct: usize,
    x_len: usize,
    window_len: usize,
    total: usize,
) -> Imbalance {
    // occurrences inside window [s, s + window_len) start at s..=s + window_len - x_len
    let per_window = window_len - x_len + 1;
    let mut counts = vec![0u64; distinct];
    for &id in &ids[..per_window] {
        counts[id] += 1;
    }
    let mut hi: Vec<(u64, usize)> = counts.iter().map(|&c| (c, 0)).collect();
    let mut lo = hi.clone();
    for s in 1..=total - window_len {
        let out = ids[s - 1];
        let inn = ids[s + per_window - 1];
        counts[out] -= 1;
        counts[inn] += 1;
        for id in [out, inn] {
            if counts[id] > hi[id].0 {
                hi[id] = (counts[id], s);
            }
            if counts[id] < lo[id].0 {
                lo[id] = (counts[id], s);
            }
        }
    }
    let (best, spread) = (0..distinct)
        .map(|id| (id, hi[id].0 - lo[id].0))
        .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    Imbalance {
        spread,
        x_len,
        window_len,
        x_pos: best,
        max_start: hi[best].1,
        min_start: lo[best].1,
    }
}

/// Least `B` with `||u|_x − |v|_x| ≤ B` over equal-length factors `u`, `v`
/// of `prefix` and `1 ≤ |x| ≤ k`.
///
/// For each `(|x|, window length)` pair one count table slides over the
/// prefix; only the two entries that change are compared with their running
/// extremes, keeping the cost at `O(k |prefix|^2)`.
pub fn balance_bound(prefix: &Word, k: usize) -> Result<BalanceReport> {
    if k == 0 {
        return Err(Error::InvalidK("0".into()));
    }
    let symbols = prefix.symbols();
    let total = symbols.len();
    let m = prefix.alphabet().size();
    let max_x = k.min(total);
    let tables: Vec<(Vec<usize>, Vec<usize>)> =
        (1..=max_x).map(|len| factor_ids(symbols, m, len)).collect();
    let jobs: Vec<(usize, usize)> = (1..=max_x)
        .flat_map(|x_len| (x_len..=total).map(move |w| (x_len, w)))
        .collect();
    let best = jobs
        .into_par_iter()
        .map(|(x_len, w)| {
            let (ids, first) = &tables[x_len - 1];
            imbalance_for(ids, first.len(), x_len, w, total)
        })
        .reduce_with(Imbalance::better);
    let witness = best.map(|b| {
        let x_at = tables[b.x_len - 1].1[b.x_pos];
        BalanceWitness {
            u: prefix.factor(b.max_start, b.max_start + b.window_len),
            v: prefix.factor(b.min_start, b.min_start + b.window_len),
            x: prefix.factor(x_at, x_at + b.x_len),
        }
    });
    Ok(BalanceReport {
        k,
        bound: best.map_or(0, |b| b.spread),
        witness,
        window: total,
    })
}

/// Outcome of checking `P^(k)(n) ≤ (B + 1)^K`, `K = Card A^{≤k}`, on a window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceLink {
    pub k: usize,
    pub bound: u64,
    /// `Card A^{≤k}`, the empty word included.
    pub exponent: u32,
    /// `(B + 1)^K`, saturating.
    pub limit: u128,
    pub max_complexity: usize,
    pub holds: bool,
}

/// Checks the complexity bound implied by (k, B)-balance for every length
/// `n` in the window.
pub fn balance_complexity_link(prefix: &Word, k: usize) -> Result<BalanceLink> {
    let report = balance_bound(prefix, k)?;
    let m = prefix.alphabet().size() as u128;
    let exponent = (0..=k as u32).fold(0u128, |acc, j| acc.saturating_add(m.saturating_pow(j)));
    let exponent = u32::try_from(exponent).unwrap_or(u32::MAX);
    let limit = (u128::from(report.bound) + 1).saturating_pow(exponent);
    let kk = K::finite(k);
    let max_complexity = (1..=prefix.len())
        .into_par_iter()
        .map(|n| k_complexity(prefix, kk, n))
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))?;
    Ok(BalanceLink {
        k,
        bound: report.bound,
        exponent,
        limit,
        max_complexity,
        holds: (max_complexity as u128) <= limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::WordStream;
    use crate::words::Alphabet;

    fn bin(s: &str) -> Word {
        Word::parse(s, &Alphabet::binary()).unwrap()
    }

    #[test]
    fn power_examples() {
        assert!(is_k_power(&bin("0101"), 2, K::INFINITE).unwrap());
        assert!(is_k_power(&bin("0110"), 2, K::finite(1)).unwrap());
        assert!(!is_k_power(&bin("0110"), 2, K::finite(2)).unwrap());
        assert!(is_k_power(&bin("00100100"), 2, K::finite(2)).unwrap());
        assert!(is_k_power(&bin("000"), 3, K::finite(1)).unwrap());
        assert!(!is_k_power(&bin("010"), 3, K::finite(1)).unwrap());
        assert!(is_k_power(&bin("0101"), 3, K::finite(1)).is_err());
        assert!(is_k_power(&bin("0101"), 1, K::finite(1)).is_err());
    }

    #[test]
    fn fibonacci_square() {
        let fib = WordStream::fibonacci().prefix(100);
        let w = find_power(&fib, K::finite(1), 2, &PositionSet::All, 3)
            .unwrap()
            .unwrap();
        // the first "00" sits at index 2 of 0100101…
        assert_eq!((w.block_length, w.start), (1, 2));
        assert_eq!(w.blocks, [bin("0"), bin("0")]);
    }

    #[test]
    fn position_constraints() {
        let fib = WordStream::fibonacci().prefix(200);
        let d = PositionSet::Progression { start: 1, step: 2 };
        let w = find_power(&fib, K::finite(1), 2, &d, 20).unwrap().unwrap();
        assert!((0..=2).all(|j| d.contains(w.start + j * w.block_length)));
        assert!(find_power(&fib, K::finite(1), 2, &d, 500).is_err());
    }

    #[test]
    fn position_set_parsing() {
        assert_eq!("all".parse::<PositionSet>().unwrap(), PositionSet::All);
        let ap: PositionSet = "ap:3,4".parse().unwrap();
        assert!(ap.contains(7) && !ap.contains(5) && !ap.contains(0));
        let res: PositionSet = "res:3:0,2".parse().unwrap();
        assert!(res.contains(5) && !res.contains(4));
        assert!((res.density(300) - 2.0 / 3.0).abs() < 1e-9);
        let set: PositionSet = "set:1,4,9".parse().unwrap();
        assert_eq!(set.to_string(), "set:1,4,9");
        assert!("ap:1,0".parse::<PositionSet>().is_err());
        assert!("res:2:5".parse::<PositionSet>().is_err());
        assert!("nope".parse::<PositionSet>().is_err());
    }

    #[test]
    fn balance_examples() {
        let fib = WordStream::fibonacci().prefix(300);
        let r = balance_bound(&fib, 1).unwrap();
        assert_eq!(r.bound, 1);
        let w = r.witness.unwrap();
        assert_eq!(w.u.len(), w.v.len());
        let alt = bin(&"01".repeat(50));
        assert!(balance_bound(&alt, 2).unwrap().bound <= 1);
        assert_eq!(balance_bound(&bin("0011"), 1).unwrap().bound, 2);
    }

    #[test]
    fn balance_link() {
        let fib = WordStream::fibonacci().prefix(200);
        let link = balance_complexity_link(&fib, 2).unwrap();
        assert!(link.holds);
        assert_eq!(link.exponent, 7);
        assert_eq!(link.max_complexity, 4);
    }
}
