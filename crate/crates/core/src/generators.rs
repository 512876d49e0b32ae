//! Deterministic generators of infinite-word prefixes.
//!
//! Each [`WordStream`] is a pure description: the symbol at index `i` depends
//! only on the parameters and `i`, so prefixes of different lengths always
//! agree on their common range.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Symbol, Word};

/// A substitution on an alphabet, each letter mapped to a non-empty word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    alphabet: Arc<Alphabet>,
    images: Vec<Vec<Symbol>>,
}

impl Morphism {
    /// `images[a]` is the image of letter `a`.
    pub fn new(alphabet: Arc<Alphabet>, images: Vec<Vec<Symbol>>) -> Result<Self> {
        if images.len() != alphabet.size() {
            return Err(Error::Precondition(format!(
                "morphism needs one image per letter ({} given for {} letters)",
                images.len(),
                alphabet.size()
            )));
        }
        for (a, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::Precondition(format!(
                    "image of {} is empty",
                    alphabet.symbol_name(a as Symbol)
                )));
            }
            Word::new(alphabet.clone(), img.clone())?;
        }
        Ok(Morphism { alphabet, images })
    }

    /// Builds a morphism from `(letter, image)` text pairs over single-char
    /// symbols, e.g. `[("0", "01"), ("1", "0")]`. The alphabet is the sorted
    /// set of letters appearing anywhere.
    pub fn from_rules(rules: &[(&str, &str)]) -> Result<Self> {
        let mut letters = BTreeSet::new();
        for (a, img) in rules {
            letters.insert(a.to_string());
            letters.extend(img.chars().map(String::from));
        }
        let alphabet = Arc::new(Alphabet::new(letters)?);
        let mut images = vec![Vec::new(); alphabet.size()];
        for (a, img) in rules {
            let idx = alphabet.index_of(a).unwrap() as usize;
            images[idx] = Word::parse(img, &alphabet)?.into_symbols();
        }
        Self::new(alphabet, images)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn image(&self, a: Symbol) -> &[Symbol] {
        &self.images[a as usize]
    }

    pub fn is_prolongable(&self, seed: Symbol) -> bool {
        let img = self.image(seed);
        img.len() >= 2 && img[0] == seed
    }

    /// Lengths of `mu^j(seed)` for `j = 0, 1, …` while at most `limit`.
    fn iterate_lengths(&self, seed: Symbol, limit: usize) -> Vec<usize> {
        let m = self.alphabet.size();
        let mut vec = vec![0usize; m];
        vec[seed as usize] = 1;
        let mut out = vec![1];
        loop {
            let mut next = vec![0usize; m];
            for (a, &count) in vec.iter().enumerate() {
                if count == 0 {
                    continue;
                }
                for &b in &self.images[a] {
                    next[b as usize] = next[b as usize].saturating_add(count);
                }
            }
            let len = next.iter().fold(0usize, |acc, &c| acc.saturating_add(c));
            if len > limit || len <= *out.last().unwrap() {
                return out;
            }
            out.push(len);
            vec = next;
        }
    }
}

/// The length-`n` prefix of the fixed point of `mu` starting with `seed`.
pub fn morphic(mu: &Morphism, seed: Symbol, n: usize) -> Result<Word> {
    if !mu.is_prolongable(seed) {
        return Err(Error::NotProlongable(
            mu.alphabet.symbol_name(seed).to_string(),
        ));
    }
    // The fixed point is its own image: expand it letter by letter behind a
    // read cursor. Position 0 is already expanded by the seed image.
    let mut out = mu.image(seed).to_vec();
    let mut cursor = 1;
    while out.len() < n {
        let a = out[cursor];
        out.extend_from_slice(mu.image(a));
        cursor += 1;
    }
    out.truncate(n);
    Ok(Word::from_parts(mu.alphabet(), out))
}

/// Lower mechanical word `s_i = ⌊((i+1)p + rho)/q⌋ − ⌊(ip + rho)/q⌋`, exact.
pub fn mechanical(p: i64, q: i64, rho: i64, n: usize) -> Result<Word> {
    let (p, q, rho) = reduce_slope(p, q, rho)?;
    let symbols = (0..n as i64)
        .map(|i| mechanical_symbol(p, q, rho, i))
        .collect();
    Ok(Word::from_parts(&Alphabet::binary(), symbols))
}

/// Lowest terms for `p/q`; `⌊rho/g⌋` leaves every floor unchanged.
fn reduce_slope(p: i64, q: i64, rho: i64) -> Result<(i64, i64, i64)> {
    if !(q > 0 && p > 0 && p < q) {
        return Err(Error::InvalidSlope { p, q });
    }
    let g = gcd(p, q);
    Ok((p / g, q / g, rho.div_euclid(g)))
}

fn mechanical_symbol(p: i64, q: i64, rho: i64, i: i64) -> Symbol {
    let hi = ((i + 1) as i128 * p as i128 + rho as i128).div_euclid(q as i128);
    let lo = (i as i128 * p as i128 + rho as i128).div_euclid(q as i128);
    (hi - lo) as Symbol
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// The last convergent `p/q` of the continued fraction `[a0; a1, …, an]`.
pub fn convergent(terms: &[u64]) -> Result<(i64, i64)> {
    if terms.is_empty() {
        return Err(Error::InvalidSpec {
            spec: String::new(),
            reason: "empty continued fraction".into(),
        });
    }
    let (mut h_prev, mut h) = (1i128, terms[0] as i128);
    let (mut k_prev, mut k) = (0i128, 1i128);
    for &a in &terms[1..] {
        let a = a as i128;
        (h_prev, h) = (h, a * h + h_prev);
        (k_prev, k) = (k, a * k + k_prev);
    }
    let fit = |x: i128| {
        i64::try_from(x).map_err(|_| Error::InvalidSpec {
            spec: format!("{terms:?}"),
            reason: "convergent overflows 64 bits".into(),
        })
    };
    Ok((fit(h)?, fit(k)?))
}

/// Length-`n` prefix of `U V V V …`.
pub fn ultimately_periodic(preperiod: &Word, period: &Word, n: usize) -> Result<Word> {
    preperiod.same_alphabet(period)?;
    if period.is_empty() {
        return Err(Error::EmptyPeriod);
    }
    let symbols = (0..n)
        .map(|i| up_symbol(preperiod.symbols(), period.symbols(), i))
        .collect();
    Ok(Word::from_parts(period.alphabet(), symbols))
}

fn up_symbol(u: &[Symbol], v: &[Symbol], i: usize) -> Symbol {
    if i < u.len() {
        u[i]
    } else {
        v[(i - u.len()) % v.len()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StreamKind {
    Mechanical {
        p: i64,
        q: i64,
        rho: i64,
    },
    Morphic {
        morphism: Morphism,
        seed: Symbol,
    },
    UltimatelyPeriodic {
        preperiod: Vec<Symbol>,
        period: Vec<Symbol>,
    },
}

/// An infinite word given by its generating rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordStream {
    kind: StreamKind,
    alphabet: Arc<Alphabet>,
    label: String,
}

/// Largest prefix materialized while probing morphic factor saturation.
const MORPHIC_PROBE_LIMIT: usize = 1 << 22;

impl WordStream {
    pub fn mechanical(p: i64, q: i64, rho: i64) -> Result<Self> {
        let (p, q, rho) = reduce_slope(p, q, rho)?;
        Ok(WordStream {
            kind: StreamKind::Mechanical { p, q, rho },
            alphabet: Alphabet::binary(),
            label: format!("mech:{p}/{q}:{rho}"),
        })
    }

    /// Mechanical word whose slope is the last convergent of `terms`.
    pub fn mechanical_cf(terms: &[u64], rho: i64) -> Result<Self> {
        let (p, q) = convergent(terms)?;
        Self::mechanical(p, q, rho)
    }

    pub fn morphic(morphism: Morphism, seed: Symbol) -> Result<Self> {
        if !morphism.is_prolongable(seed) {
            return Err(Error::NotProlongable(
                morphism.alphabet.symbol_name(seed).to_string(),
            ));
        }
        let rules: Vec<String> = (0..morphism.alphabet.size())
            .map(|a| {
                let img = Word::from_parts(&morphism.alphabet, morphism.images[a].clone());
                format!("{}={}", morphism.alphabet.symbol_name(a as Symbol), img)
            })
            .collect();
        let label = format!(
            "morphic:{}:seed={}",
            rules.join(","),
            morphism.alphabet.symbol_name(seed)
        );
        Ok(WordStream {
            alphabet: morphism.alphabet.clone(),
            kind: StreamKind::Morphic { morphism, seed },
            label,
        })
    }

    pub fn ultimately_periodic(preperiod: &Word, period: &Word) -> Result<Self> {
        preperiod.same_alphabet(period)?;
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(WordStream {
            kind: StreamKind::UltimatelyPeriodic {
                preperiod: preperiod.symbols().to_vec(),
                period: period.symbols().to_vec(),
            },
            alphabet: period.alphabet().clone(),
            label: format!("up:U={preperiod},V={period}"),
        })
    }

    /// Fixed point of `0 → 01, 1 → 0`.
    pub fn fibonacci() -> Self {
        let mu = Morphism::new(Alphabet::binary(), vec![vec![0, 1], vec![0]]).unwrap();
        let mut s = Self::morphic(mu, 0).unwrap();
        s.label = "fib".into();
        s
    }

    /// Fixed point of `0 → 01, 1 → 10`.
    pub fn thue_morse() -> Self {
        let mu = Morphism::new(Alphabet::binary(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let mut s = Self::morphic(mu, 0).unwrap();
        s.label = "tm".into();
        s
    }

    pub fn kind(&self) -> &StreamKind {
        &self.kind
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn prefix(&self, n: usize) -> Word {
        match &self.kind {
            StreamKind::Mechanical { p, q, rho } => mechanical(*p, *q, *rho, n).unwrap(),
            StreamKind::Morphic { morphism, seed } => morphic(morphism, *seed, n).unwrap(),
            StreamKind::UltimatelyPeriodic { preperiod, period } => {
                let symbols = (0..n).map(|i| up_symbol(preperiod, period, i)).collect();
                Word::from_parts(&self.alphabet, symbols)
            }
        }
    }

    /// A prefix length guaranteed to contain every length-`n` factor of the
    /// stream, when one is known.
    ///
    /// Mechanical and ultimately periodic words are exact. For morphic words
    /// the bound is the first iterate `mu^j(seed)` whose length-`n` factor
    /// count equals that of `mu^{j+1}(seed)`.
    pub fn coverage_window(&self, n: usize) -> Option<usize> {
        match &self.kind {
            StreamKind::Mechanical { q, .. } => Some(n + *q as usize - 1),
            StreamKind::UltimatelyPeriodic { preperiod, period } => {
                Some(preperiod.len() + period.len() + n.max(1) - 1)
            }
            StreamKind::Morphic { morphism, seed } => {
                let lengths = morphism.iterate_lengths(*seed, MORPHIC_PROBE_LIMIT);
                lengths.windows(2).filter(|w| w[0] >= n).find_map(|w| {
                    let prefix = morphic(morphism, *seed, w[1]).ok()?;
                    let (short, long) = (&prefix.symbols()[..w[0]], prefix.symbols());
                    (distinct_factor_count(short, n) == distinct_factor_count(long, n))
                        .then_some(w[0])
                })
            }
        }
    }

    /// For mechanical words with rational slope `p/q`, the largest `n` for
    /// which the factor set of length `n` is that of a genuine Sturmian word
    /// (`q − 1`). `None` for other kinds.
    pub fn sturmian_bound(&self) -> Option<usize> {
        match &self.kind {
            StreamKind::Mechanical { q, .. } => Some(*q as usize - 1),
            _ => None,
        }
    }
}

fn distinct_factor_count(symbols: &[Symbol], n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    symbols.windows(n).collect::<BTreeSet<_>>().len()
}

impl fmt::Display for WordStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Parses a stream spec:
///
/// * `fib`, `tm`
/// * `mech:P/Q:RHO` or `mech:[a0;a1,a2,...]:RHO`
/// * `morphic:0=01,1=0:seed=0`
/// * `up:U=0,V=1` (either side may be empty, `V` may not)
impl FromStr for WordStream {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let spec = spec.trim();
        let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
        match head {
            "fib" | "fibonacci" => Ok(Self::fibonacci()),
            "tm" | "thue-morse" => Ok(Self::thue_morse()),
            "mech" => {
                let (slope, rho) = rest
                    .rsplit_once(':')
                    .ok_or_else(|| bad("expected mech:P/Q:RHO"))?;
                let rho: i64 = rho.parse().map_err(|_| bad("RHO must be an integer"))?;
                if let Some(cf) = slope.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                    let terms = cf
                        .split([';', ','])
                        .map(|t| t.trim().parse::<u64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| bad("continued fraction terms must be integers"))?;
                    Self::mechanical_cf(&terms, rho)
                } else {
                    let (p, q) = slope.split_once('/').ok_or_else(|| bad("expected P/Q"))?;
                    let p = p.parse().map_err(|_| bad("P must be an integer"))?;
                    let q = q.parse().map_err(|_| bad("Q must be an integer"))?;
                    Self::mechanical(p, q, rho)
                }
            }
            "morphic" => {
                let (rules, seed) = rest
                    .rsplit_once(":seed=")
                    .ok_or_else(|| bad("expected morphic:a=IMG,...:seed=a"))?;
                let rules = rules
                    .split(',')
                    .map(|r| r.split_once('=').ok_or_else(|| bad("rule must be a=IMG")))
                    .collect::<Result<Vec<_>>>()?;
                let mut seen = BTreeMap::new();
                for (a, img) in &rules {
                    if a.chars().count() != 1 || seen.insert(*a, *img).is_some() {
                        return Err(bad("letters must be single, distinct characters"));
                    }
                }
                let mu = Morphism::from_rules(&rules)?;
                let seed = mu
                    .alphabet
                    .index_of(seed)
                    .ok_or_else(|| bad("seed is not a letter of the morphism"))?;
                Self::morphic(mu, seed)
            }
            "up" => {
                let mut u = None;
                let mut v = None;
                for part in rest.split(',') {
                    match part.split_once('=') {
                        Some(("U", x)) => u = Some(x),
                        Some(("V", x)) => v = Some(x),
                        _ => return Err(bad("expected up:U=...,V=...")),
                    }
                }
                let u = u.unwrap_or("");
                let v = v.ok_or_else(|| bad("missing V"))?;
                let alphabet =
                    Alphabet::infer([u, v], Default::default()).map_err(|_| Error::EmptyPeriod)?;
                Self::ultimately_periodic(&Word::parse(u, &alphabet)?, &Word::parse(v, &alphabet)?)
            }
            _ => Err(bad("unknown stream kind")),
        }
    }
}
