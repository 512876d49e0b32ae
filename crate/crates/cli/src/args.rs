use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kabelian_core::K;

#[derive(Debug, Parser)]
#[command(name = "kabelian", version, about = "k-Abelian equivalence workbench")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Maximum search nodes (or words, for brute force) per enumeration.
    #[arg(
        long,
        global = true,
        env = "KABELIAN_BUDGET",
        default_value_t = 200_000_000,
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    pub budget: u64,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// How literal words are read.
#[derive(Debug, Clone, Args)]
pub struct WordArgs {
    /// Symbols are separated by commas, allowing multi-character symbols.
    #[arg(long)]
    pub comma: bool,
    /// Alphabet in order, e.g. `01` or `a,b,c` with --comma; inferred
    /// from the input when omitted.
    #[arg(long)]
    pub alphabet: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide u ~k v; exits 1 when the words are not equivalent.
    Eq {
        #[arg(long)]
        k: K,
        u: String,
        v: String,
        #[command(flatten)]
        words: WordArgs,
    },
    /// Canonical class signature of a word.
    Sig {
        #[arg(long)]
        k: K,
        word: String,
        #[command(flatten)]
        words: WordArgs,
    },
    /// Count k-Abelian classes of A^n for a range of n.
    Census {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Inclusive range `A..B`, or a single length.
        #[arg(long, value_parser = parse_range)]
        n_range: (usize, usize),
        #[arg(long, value_enum, default_value_t = MethodArg::Flow)]
        method: MethodArg,
        /// Also report the fitted log-log growth exponent (JSON only).
        #[arg(long)]
        fit: bool,
    },
    /// k-Abelian (or R_k) complexity profile of a stream.
    Complexity {
        /// Stream spec (`fib`, `tm`, `mech:P/Q:RHO`, `morphic:…`, `up:U=…,V=…`) or `lit:WORD`.
        #[arg(long)]
        word: String,
        #[arg(long)]
        k: K,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = RelationArg::KAbelian)]
        relation: RelationArg,
        /// Prefix length to analyse; defaults to the stream's coverage bound.
        #[arg(long)]
        window: Option<usize>,
        /// Emit bare `n value` lines for plotting.
        #[arg(long)]
        plot_data: bool,
        #[command(flatten)]
        words: WordArgs,
    },
    /// Sturmian structure of a stream.
    #[command(subcommand)]
    Sturmian(SturmianCommand),
    /// All distinct k-Abelian equivalent pairs of length 2k, decomposed.
    Pairs2k {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
    /// Search a prefix for a k-Abelian N-power; exits 1 when none is found.
    Power {
        #[arg(long)]
        word: String,
        #[arg(long)]
        k: K,
        /// Exponent N (at least 2).
        #[arg(long = "N", visible_alias = "exponent")]
        exponent: usize,
        /// Largest block length tried.
        #[arg(long)]
        lmax: usize,
        /// Allowed positions: `all`, `ap:A,D`, `res:M:R1,R2`, `set:I1,I2` or `set:FILE`.
        #[arg(long = "D", visible_alias = "positions", default_value = "all")]
        positions: String,
        /// Prefix length searched; defaults to lmax * N.
        #[arg(long)]
        window: Option<usize>,
        #[command(flatten)]
        words: WordArgs,
    },
    /// Least B making a prefix (k, B)-balanced.
    Balance {
        #[arg(long)]
        word: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        window: usize,
        /// Also check P^(k)(n) <= (B+1)^K over the window; exits 1 if it fails.
        #[arg(long)]
        link: bool,
        #[command(flatten)]
        words: WordArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum SturmianCommand {
    /// Sorted length-n factors and the swap permutation linking them.
    Chain {
        #[arg(long)]
        word: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        window: Option<usize>,
        #[command(flatten)]
        words: WordArgs,
    },
    /// Right, left and bispecial factors of length n.
    Special {
        #[arg(long)]
        word: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        window: Option<usize>,
        #[command(flatten)]
        words: WordArgs,
    },
    /// Compare P^(k)(n) with q^(k)(n); exits 1 on any violation.
    Check {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[arg(long, default_value_t = 40)]
        n_max: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Flow,
    Bruteforce,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RelationArg {
    KAbelian,
    Rk,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("not a length: {t:?}"))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => (parse(s)?, parse(s)?),
    };
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..4"), Ok((3, 4)));
        assert_eq!(parse_range("3..=4"), Ok((3, 4)));
        assert_eq!(parse_range("7"), Ok((7, 7)));
        assert!(parse_range("5..4").is_err());
        assert!(parse_range("a..4").is_err());
    }
}
