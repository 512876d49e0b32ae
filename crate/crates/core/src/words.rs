//! Finite words over ordered alphabets.
//!
//! A [`Word`] stores its letters as indices into a shared [`Alphabet`]. The
//! alphabet order is the order used for every lexicographic comparison in the
//! crate. Operations combining two words fail with
//! [`Error::AlphabetMismatch`] instead of silently comparing indices from
//! different alphabets.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Index of a letter inside its [`Alphabet`].
pub type Symbol = u8;

/// A finite, totally ordered set of symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if symbols.len() > 256 {
            return Err(Error::AlphabetTooLarge(symbols.len()));
        }
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if !seen.insert(s.as_str()) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// `{0, 1}`.
    pub fn binary() -> Arc<Self> {
        Self::of_size(2)
    }

    /// The alphabet `{0, 1, …, m−1}` (digits, then lowercase letters past 9).
    ///
    /// Panics if `m` is zero or greater than 36.
    pub fn of_size(m: usize) -> Arc<Self> {
        assert!((1..=36).contains(&m), "alphabet size must be in 1..=36");
        let symbols = (0..m)
            .map(|i| char::from_digit(i as u32, 36).unwrap().to_string())
            .collect();
        Arc::new(Alphabet { symbols })
    }

    /// Single-character alphabet, one symbol per char in the given order.
    pub fn from_chars(chars: &str) -> Result<Arc<Self>> {
        Self::new(chars.chars().map(String::from)).map(Arc::new)
    }

    /// Collects the symbols used by `texts`, sorted.
    pub fn infer<'a, I>(texts: I, delimiter: Delimiter) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut seen = BTreeSet::new();
        for text in texts {
            for token in delimiter.tokens(text) {
                seen.insert(token.to_string());
            }
        }
        Self::new(seen).map(Arc::new)
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        &self.symbols[s as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<Symbol> {
        self.symbols
            .iter()
            .position(|s| s == name)
            .map(|i| i as Symbol)
    }

    fn single_char(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }
}

/// How symbols are separated in textual words.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Delimiter {
    /// Every character is a symbol.
    #[default]
    None,
    /// Symbols are separated by commas (multi-character symbols allowed).
    Comma,
}

impl Delimiter {
    fn tokens<'a>(self, text: &'a str) -> Box<dyn Iterator<Item = &'a str> + 'a> {
        match self {
            Delimiter::None => Box::new(
                text.char_indices()
                    .map(move |(i, c)| &text[i..i + c.len_utf8()]),
            ),
            Delimiter::Comma => Box::new(text.split(',').map(str::trim).filter(|t| !t.is_empty())),
        }
    }
}

/// A finite word.
///
/// Ordering is lexicographic on symbol indices, which follows the alphabet
/// order. Words over different alphabets are never equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<Symbol>,
    alphabet: Arc<Alphabet>,
}

impl Word {
    pub fn new(alphabet: Arc<Alphabet>, symbols: Vec<Symbol>) -> Result<Self> {
        let m = alphabet.size();
        if let Some(&bad) = symbols.iter().find(|&&s| s as usize >= m) {
            return Err(Error::UnknownSymbol(format!("#{bad}")));
        }
        Ok(Word { symbols, alphabet })
    }

    pub fn empty(alphabet: Arc<Alphabet>) -> Self {
        Word {
            symbols: Vec::new(),
            alphabet,
        }
    }

    /// Parses a word whose symbols are single characters.
    pub fn parse(text: &str, alphabet: &Arc<Alphabet>) -> Result<Self> {
        Self::parse_with(text, alphabet, Delimiter::None)
    }

    pub fn parse_with(text: &str, alphabet: &Arc<Alphabet>, delimiter: Delimiter) -> Result<Self> {
        let symbols = delimiter
            .tokens(text.trim())
            .map(|t| {
                alphabet
                    .index_of(t)
                    .ok_or_else(|| Error::UnknownSymbol(t.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word {
            symbols,
            alphabet: alphabet.clone(),
        })
    }

    pub(crate) fn from_parts(alphabet: &Arc<Alphabet>, symbols: Vec<Symbol>) -> Self {
        debug_assert!(symbols.iter().all(|&s| (s as usize) < alphabet.size()));
        Word {
            symbols,
            alphabet: alphabet.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn same_alphabet(&self, other: &Word) -> Result<()> {
        if Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// The factor occupying `start..end`.
    pub fn factor(&self, start: usize, end: usize) -> Word {
        Word::from_parts(&self.alphabet, self.symbols[start..end].to_vec())
    }

    /// Prefix of length `min(n, |w|)`.
    pub fn prefix(&self, n: usize) -> Word {
        self.factor(0, n.min(self.len()))
    }

    /// Suffix of length `min(n, |w|)`.
    pub fn suffix(&self, n: usize) -> Word {
        self.factor(self.len() - n.min(self.len()), self.len())
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        self.same_alphabet(other)?;
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Ok(Word::from_parts(&self.alphabet, symbols))
    }

    pub fn reversed(&self) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Word::from_parts(&self.alphabet, symbols)
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.alphabet.single_char() { "" } else { "," };
        for (i, &s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            f.write_str(self.alphabet.symbol_name(s))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", self.to_string())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Parses a plain-text word list: one word per line, blank lines skipped.
///
/// When `alphabet` is `None` it is inferred from the whole input.
pub fn parse_word_list(
    text: &str,
    delimiter: Delimiter,
    alphabet: Option<Arc<Alphabet>>,
) -> Result<Vec<Word>> {
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    let alphabet = match alphabet {
        Some(a) => a,
        None => Alphabet::infer(lines.iter().copied(), delimiter)?,
    };
    lines
        .iter()
        .map(|l| Word::parse_with(l, &alphabet, delimiter))
        .collect()
}

/// Number of (possibly overlapping) occurrences of `x` in `w`.
pub fn occurrences(w: &Word, x: &Word) -> Result<usize> {
    w.same_alphabet(x)?;
    if x.is_empty() {
        return Err(Error::EmptyPattern);
    }
    Ok(w.symbols()
        .windows(x.len())
        .filter(|win| *win == x.symbols())
        .count())
}

pub fn reverse(w: &Word) -> Word {
    w.reversed()
}

/// Distinct factors of length `n`. Empty when `n > |w|`.
pub fn factors(w: &Word, n: usize) -> BTreeSet<Word> {
    if n > w.len() {
        return BTreeSet::new();
    }
    if n == 0 {
        return BTreeSet::from([Word::empty(w.alphabet().clone())]);
    }
    w.symbols()
        .windows(n)
        .map(|win| Word::from_parts(w.alphabet(), win.to_vec()))
        .collect()
}

/// Whether a binary word is balanced: equal-length factors differ by at most
/// one in their letter counts.
pub fn is_balanced(w: &Word) -> Result<bool> {
    let m = w.alphabet().size();
    if m > 2 {
        return Err(Error::NonBinary(m));
    }
    Ok(balanced_symbols(w.symbols()))
}

/// Balance check on a raw symbol slice. Slices with more than two distinct
/// letters are never balanced.
pub(crate) fn balanced_symbols(symbols: &[Symbol]) -> bool {
    let Some(&first) = symbols.first() else {
        return true;
    };
    let distinct: BTreeSet<Symbol> = symbols.iter().copied().collect();
    if distinct.len() > 2 {
        return false;
    }
    let mut prefix = Vec::with_capacity(symbols.len() + 1);
    prefix.push(0i64);
    for &s in symbols {
        prefix.push(prefix.last().unwrap() + i64::from(s == first));
    }
    let len = symbols.len();
    (1..=len).all(|n| {
        let (lo, hi) = (0..=len - n).fold((i64::MAX, i64::MIN), |(lo, hi), i| {
            let c = prefix[i + n] - prefix[i];
            (lo.min(c), hi.max(c))
        });
        hi - lo <= 1
    })
}

/// `m^len`, or `None` on overflow.
pub(crate) fn code_space(m: usize, len: usize) -> Option<u64> {
    (m as u64).checked_pow(u32::try_from(len).ok()?)
}

/// Base-`m` code of a symbol slice (most significant symbol first), so codes
/// order like the words they encode.
pub(crate) fn encode(symbols: &[Symbol], m: usize) -> u64 {
    symbols
        .iter()
        .fold(0u64, |acc, &s| acc * m as u64 + u64::from(s))
}

pub(crate) fn decode(mut code: u64, m: usize, len: usize) -> Vec<Symbol> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (code % m as u64) as Symbol;
        code /= m as u64;
    }
    out
}

/// Occurrence counts of every length-`len` factor, as `(code, count)` pairs
/// sorted by code. One sliding-window pass.
pub(crate) fn factor_counts(symbols: &[Symbol], m: usize, len: usize) -> Result<Vec<(u64, u32)>> {
    let space = code_space(m, len).ok_or(Error::FactorSpaceTooLarge { m, k: len })?;
    if len == 0 || symbols.len() < len {
        return Ok(Vec::new());
    }
    let windows = symbols.len() - len + 1;
    let codes = rolling_codes(symbols, m, len, space);
    if space <= (1 << 16) || space <= 4 * windows as u64 {
        let mut table = vec![0u32; space as usize];
        for c in codes {
            table[c as usize] += 1;
        }
        Ok(table
            .into_iter()
            .enumerate()
            .filter(|&(_, n)| n > 0)
            .map(|(c, n)| (c as u64, n))
            .collect())
    } else {
        let mut table: HashMap<u64, u32> = HashMap::new();
        for c in codes {
            *table.entry(c).or_default() += 1;
        }
        let mut out: Vec<_> = table.into_iter().collect();
        out.sort_unstable();
        Ok(out)
    }
}

/// Codes of all length-`len` windows, left to right. Requires `len >= 1` and
/// `symbols.len() >= len`.
pub(crate) fn rolling_codes(
    symbols: &[Symbol],
    m: usize,
    len: usize,
    space: u64,
) -> impl Iterator<Item = u64> + '_ {
    let head = encode(&symbols[..len - 1], m);
    let m = m as u64;
    symbols[len - 1..].iter().scan(head, move |code, &s| {
        *code = (*code * m + u64::from(s)) % space;
        Some(*code)
    })
}
