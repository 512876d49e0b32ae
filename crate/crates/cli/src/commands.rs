use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use kabelian_core::complexity::{
    periodicity_alarm, q, sturmian_profile_check, ComplexityProfile, Relation,
};
use kabelian_core::equivalence::{distinguishing_factor, KSpectrum};
use kabelian_core::flowgraph::{census, growth_exponent_fit, Budget, CensusMethod};
use kabelian_core::repetitions::{balance_bound, balance_complexity_link, find_power, PositionSet};
use kabelian_core::sturmian::{classify_length_2k_pairs, factor_chain, special_factors};
use kabelian_core::{k_abelian_equivalent, Alphabet, Delimiter, Word, WordStream};

use crate::args::{Command, Format, MethodArg, RelationArg, SturmianCommand, WordArgs};
use crate::schema::*;

/// Rendered output and whether the analysis came out negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub body: String,
    pub negative: bool,
}

/// A word to analyse: either an infinite stream or a literal finite word.
enum Source {
    Stream(WordStream),
    Literal(Word),
}

impl Source {
    fn parse(spec: &str, words: &WordArgs) -> Result<Self> {
        match spec.strip_prefix("lit:") {
            Some(text) => Ok(Source::Literal(parse_words(&[text], words)?.remove(0))),
            None => {
                if words.alphabet.is_some() || words.comma {
                    bail!("--alphabet and --comma apply to lit: words only");
                }
                Ok(Source::Stream(spec.parse()?))
            }
        }
    }

    fn label(&self) -> String {
        match self {
            Source::Stream(s) => s.to_string(),
            Source::Literal(w) => format!("lit:{w}"),
        }
    }

    /// The first `len` letters; a literal is returned whole.
    fn prefix(&self, len: usize) -> Word {
        match self {
            Source::Stream(s) => s.prefix(len),
            Source::Literal(w) => w.clone(),
        }
    }

    /// A prefix long enough to contain every length-`n` factor, when known.
    fn covering_prefix(&self, n: usize, window: Option<usize>) -> Word {
        match self {
            Source::Stream(s) => {
                let len = window
                    .or_else(|| s.coverage_window(n))
                    .unwrap_or_else(|| (8 * n).max(1024));
                s.prefix(len.max(n))
            }
            Source::Literal(w) => w.clone(),
        }
    }
}

fn delimiter(words: &WordArgs) -> Delimiter {
    if words.comma {
        Delimiter::Comma
    } else {
        Delimiter::None
    }
}

fn parse_words(texts: &[&str], words: &WordArgs) -> Result<Vec<Word>> {
    let delim = delimiter(words);
    let alphabet: Arc<Alphabet> = match &words.alphabet {
        Some(a) if words.comma => Arc::new(Alphabet::new(a.split(',').map(str::trim))?),
        Some(a) => Alphabet::from_chars(a)?,
        None if texts.iter().all(|t| t.trim().is_empty()) => Alphabet::binary(),
        None => Alphabet::infer(texts.iter().copied(), delim)?,
    };
    texts
        .iter()
        .map(|t| {
            Word::parse_with(t, &alphabet, delim).with_context(|| format!("cannot read word {t:?}"))
        })
        .collect()
}

fn parse_positions(spec: &str) -> Result<PositionSet> {
    if let Some(rest) = spec.strip_prefix("set:") {
        let path = Path::new(rest);
        if !rest.is_empty() && path.is_file() {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read position file {rest}"))?;
            return Ok(format!("set:{text}").parse()?);
        }
    }
    Ok(spec.parse()?)
}

fn render<T: Serialize + Tabular>(value: &T, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(value)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(value.header())?;
            for row in value.rows() {
                w.write_record(row)?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::Table => Ok(table(&value.header(), &value.rows())),
    }
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    out += &line(
        widths
            .iter()
            .map(|&w| "-".repeat(w))
            .collect::<Vec<_>>()
            .iter()
            .map(String::as_str)
            .collect(),
    );
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

fn report<T: Serialize + Tabular>(value: &T, format: Format, negative: bool) -> Result<Report> {
    Ok(Report {
        body: render(value, format)?,
        negative,
    })
}

/// Runs one subcommand.
pub fn run(command: &Command, format: Format, budget: u64) -> Result<Report> {
    let budget = Budget::new(budget)?;
    match command {
        Command::Eq { k, u, v, words } => {
            let parsed = parse_words(&[u, v], words)?;
            let (u, v) = (&parsed[0], &parsed[1]);
            let equivalent = k_abelian_equivalent(u, v, *k)?;
            let witness_x = if equivalent {
                None
            } else {
                distinguishing_factor(u, v, *k)?.map(|x| x.to_string())
            };
            let out = EqOutput {
                equivalent,
                witness_x,
                k: (*k).into(),
                u: u.to_string(),
                v: v.to_string(),
            };
            report(&out, format, !equivalent)
        }
        Command::Sig { k, word, words } => {
            let w = parse_words(&[word], words)?.remove(0);
            let spec = KSpectrum::of(&w, *k)?;
            let out = SigOutput {
                k: (*k).into(),
                length: spec.word_length,
                prefix: spec.prefix.to_string(),
                suffix: spec.suffix.to_string(),
                counts: spec
                    .counts_k
                    .iter()
                    .map(|(f, c)| FactorCount {
                        factor: f.to_string(),
                        count: *c,
                    })
                    .collect(),
            };
            report(&out, format, false)
        }
        Command::Census {
            m,
            k,
            n_range,
            method,
            fit,
        } => {
            if !(1..=36).contains(m) {
                bail!("alphabet size m must be in 1..=36, got {m}");
            }
            let methods: &[CensusMethod] = match method {
                MethodArg::Flow => &[CensusMethod::FlowEnumeration],
                MethodArg::Bruteforce => &[CensusMethod::Bruteforce],
                MethodArg::Both => &[CensusMethod::FlowEnumeration, CensusMethod::Bruteforce],
            };
            let rows = census(*m, *k, n_range.0..=n_range.1, methods, budget)?;
            let fit = if *fit {
                let flow: Vec<_> = rows
                    .iter()
                    .filter(|r| r.method == methods[0])
                    .copied()
                    .collect();
                let g = growth_exponent_fit(&flow)?;
                Some(FitRecord {
                    fitted_exponent: g.fitted_exponent,
                    theoretical_exponent: g.theoretical_exponent,
                    rows: g.rows,
                })
            } else {
                None
            };
            let out = CensusOutput {
                rows: rows
                    .iter()
                    .map(|r| CensusRecord {
                        m: r.m,
                        k: r.k,
                        n: r.n,
                        class_count: r.class_count,
                        method: r.method.to_string(),
                    })
                    .collect(),
                fit,
            };
            report(&out, format, false)
        }
        Command::Complexity {
            word,
            k,
            n_max,
            relation,
            window,
            plot_data,
            words,
        } => {
            let source = Source::parse(word, words)?;
            let relation = match relation {
                RelationArg::KAbelian => Relation::KAbelian,
                RelationArg::Rk => Relation::Rk,
            };
            let profile = match &source {
                Source::Stream(s) => {
                    ComplexityProfile::of_stream(s, *k, relation, *n_max, *window)?
                }
                Source::Literal(w) => {
                    ComplexityProfile::of_prefix(w, *k, relation, *n_max, |_| true)?
                }
            };
            if *plot_data {
                let mut body = String::from("# n value\n");
                for n in 1..=profile.n_max {
                    body += &format!("{n} {}\n", profile.value(n).unwrap_or(0));
                }
                return Ok(Report {
                    body,
                    negative: false,
                });
            }
            let out = ComplexityOutput {
                stream: source.label(),
                k: (*k).into(),
                relation: match relation {
                    Relation::KAbelian => "k-abelian".into(),
                    Relation::Rk => "rk".into(),
                },
                window_length: profile.window_length,
                alarm: periodicity_alarm(&profile),
                rows: (1..=profile.n_max)
                    .map(|n| ComplexityRow {
                        n,
                        value: profile.value(n).unwrap_or(0),
                        q: q(*k, n),
                        valid: profile.is_valid(n),
                    })
                    .collect(),
            };
            report(&out, format, false)
        }
        Command::Sturmian(cmd) => run_sturmian(cmd, format),
        Command::Pairs2k { k, m } => {
            if !(1..=36).contains(m) {
                bail!("alphabet size m must be in 1..=36, got {m}");
            }
            let pairs = classify_length_2k_pairs(*m, *k, budget)?;
            let out = PairsOutput {
                m: *m,
                k: *k,
                pairs: pairs
                    .iter()
                    .map(|p| PairRecord {
                        u: p.u.to_string(),
                        v: p.v.to_string(),
                        x: p.x.to_string(),
                    })
                    .collect(),
            };
            report(&out, format, false)
        }
        Command::Power {
            word,
            k,
            exponent,
            lmax,
            positions,
            window,
            words,
        } => {
            let source = Source::parse(word, words)?;
            let d = parse_positions(positions)?;
            let prefix = source.prefix(window.unwrap_or(lmax.saturating_mul(*exponent)));
            let hit = find_power(&prefix, *k, *exponent, &d, *lmax)?;
            let out = PowerOutput {
                k: (*k).into(),
                exponent: *exponent,
                l_max: *lmax,
                positions: d.to_string(),
                window: prefix.len(),
                witness: hit.map(|w| WitnessRecord {
                    start: w.start,
                    block_length: w.block_length,
                    blocks: w.blocks.iter().map(Word::to_string).collect(),
                }),
            };
            let negative = out.witness.is_none();
            report(&out, format, negative)
        }
        Command::Balance {
            word,
            k,
            window,
            link,
            words,
        } => {
            let source = Source::parse(word, words)?;
            let prefix = source.prefix(*window);
            let r = balance_bound(&prefix, *k)?;
            let link = if *link {
                let l = balance_complexity_link(&prefix, *k)?;
                Some(LinkRecord {
                    exponent: l.exponent,
                    limit: l.limit.to_string(),
                    max_complexity: l.max_complexity,
                    holds: l.holds,
                })
            } else {
                None
            };
            let out = BalanceOutput {
                k: r.k,
                window: r.window,
                bound: r.bound,
                witness: r.witness.map(|w| PairRecord {
                    u: w.u.to_string(),
                    v: w.v.to_string(),
                    x: w.x.to_string(),
                }),
                link,
            };
            let negative = out.link.as_ref().is_some_and(|l| !l.holds);
            report(&out, format, negative)
        }
    }
}

fn run_sturmian(cmd: &SturmianCommand, format: Format) -> Result<Report> {
    match cmd {
        SturmianCommand::Chain {
            word,
            n,
            window,
            words,
        } => {
            let source = Source::parse(word, words)?;
            let chain = factor_chain(&source.covering_prefix(*n, *window), *n)?;
            let out = ChainOutput {
                n: chain.n,
                factors: chain.factors.iter().map(Word::to_string).collect(),
                sigma: chain.sigma,
            };
            report(&out, format, false)
        }
        SturmianCommand::Special {
            word,
            n,
            window,
            words,
        } => {
            let source = Source::parse(word, words)?;
            let r = special_factors(&source.covering_prefix(n + 1, *window), *n)?;
            let names =
                |s: &std::collections::BTreeSet<Word>| s.iter().map(Word::to_string).collect();
            let out = SpecialOutput {
                n: r.n,
                right_special: names(&r.right_special),
                left_special: names(&r.left_special),
                bispecial: names(&r.bispecial),
            };
            report(&out, format, false)
        }
        SturmianCommand::Check { word, k_max, n_max } => {
            let stream: WordStream = word.parse()?;
            let r = sturmian_profile_check(&stream, *k_max, *n_max)?;
            let out = CheckOutput {
                stream: r.stream.clone(),
                k_max: r.k_max,
                n_max: r.n_max,
                passed: r.passed(),
                violations: r
                    .violations
                    .iter()
                    .map(|v| ViolationRecord {
                        k: v.k.value().unwrap_or(usize::MAX),
                        n: v.n,
                        value: v.value,
                        expected: v.expected,
                    })
                    .collect(),
                unchecked: r.unchecked.clone(),
            };
            let negative = !out.passed;
            report(&out, format, negative)
        }
    }
}
