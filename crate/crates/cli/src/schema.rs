//! JSON/CSV output records. Every record deserializes back to itself.

use serde::{Deserialize, Serialize};

use kabelian_core::K;

/// `k` as a number, or `"inf"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KValue {
    Finite(usize),
    Named(String),
}

impl From<K> for KValue {
    fn from(k: K) -> Self {
        match k.value() {
            Some(v) => KValue::Finite(v),
            None => KValue::Named("inf".into()),
        }
    }
}

impl std::fmt::Display for KValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KValue::Finite(v) => write!(f, "{v}"),
            KValue::Named(s) => f.write_str(s),
        }
    }
}

/// Anything that can be printed as rows of a table or CSV file.
pub trait Tabular {
    fn header(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqOutput {
    pub equivalent: bool,
    /// Shortest distinguishing factor when the words differ.
    pub witness_x: Option<String>,
    pub k: KValue,
    pub u: String,
    pub v: String,
}

impl Tabular for EqOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["equivalent", "witness_x", "k", "u", "v"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.equivalent.to_string(),
            opt(&self.witness_x),
            self.k.to_string(),
            self.u.clone(),
            self.v.clone(),
        ]]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCount {
    pub factor: String,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigOutput {
    pub k: KValue,
    pub length: usize,
    pub prefix: String,
    pub suffix: String,
    pub counts: Vec<FactorCount>,
}

impl Tabular for SigOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["factor", "count"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.counts
            .iter()
            .map(|c| vec![c.factor.clone(), c.count.to_string()])
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub class_count: u64,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub fitted_exponent: f64,
    pub theoretical_exponent: f64,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusOutput {
    pub rows: Vec<CensusRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitRecord>,
}

impl Tabular for CensusOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["m", "k", "n", "count", "method"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.m.to_string(),
                    r.k.to_string(),
                    r.n.to_string(),
                    r.class_count.to_string(),
                    r.method.clone(),
                ]
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityRow {
    pub n: usize,
    pub value: usize,
    pub q: usize,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityOutput {
    pub stream: String,
    pub k: KValue,
    pub relation: String,
    pub window_length: usize,
    /// Least valid n with value below q, if any.
    pub alarm: Option<usize>,
    pub rows: Vec<ComplexityRow>,
}

impl Tabular for ComplexityOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["n", "value", "q", "valid"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.value.to_string(),
                    r.q.to_string(),
                    r.valid.to_string(),
                ]
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainOutput {
    pub n: usize,
    pub factors: Vec<String>,
    /// 1-based swap positions between consecutive factors.
    pub sigma: Vec<usize>,
}

impl Tabular for ChainOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["i", "factor", "sigma"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.factors
            .iter()
            .enumerate()
            .map(|(i, f)| vec![(i + 1).to_string(), f.clone(), opt(&self.sigma.get(i))])
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialOutput {
    pub n: usize,
    pub right_special: Vec<String>,
    pub left_special: Vec<String>,
    pub bispecial: Vec<String>,
}

impl Tabular for SpecialOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["kind", "factor"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        let tag = |kind: &str, v: &[String]| -> Vec<Vec<String>> {
            v.iter()
                .map(|f| vec![kind.to_string(), f.clone()])
                .collect()
        };
        [
            tag("right", &self.right_special),
            tag("left", &self.left_special),
            tag("bispecial", &self.bispecial),
        ]
        .concat()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub k: usize,
    pub n: usize,
    pub value: usize,
    pub expected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutput {
    pub stream: String,
    pub k_max: usize,
    pub n_max: usize,
    pub passed: bool,
    pub violations: Vec<ViolationRecord>,
    /// `[k, n]` pairs outside the window's guaranteed coverage.
    pub unchecked: Vec<(usize, usize)>,
}

impl Tabular for CheckOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["k", "n", "value", "expected"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.violations
            .iter()
            .map(|v| {
                vec![
                    v.k.to_string(),
                    v.n.to_string(),
                    v.value.to_string(),
                    v.expected.to_string(),
                ]
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub u: String,
    pub v: String,
    pub x: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairsOutput {
    pub m: usize,
    pub k: usize,
    pub pairs: Vec<PairRecord>,
}

impl Tabular for PairsOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["u", "v", "x"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.pairs
            .iter()
            .map(|p| vec![p.u.clone(), p.v.clone(), p.x.clone()])
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub start: usize,
    pub block_length: usize,
    pub blocks: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerOutput {
    pub k: KValue,
    pub exponent: usize,
    pub l_max: usize,
    pub positions: String,
    pub window: usize,
    pub witness: Option<WitnessRecord>,
}

impl Tabular for PowerOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["found", "start", "block_length", "blocks"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        let row = match &self.witness {
            Some(w) => vec![
                "true".into(),
                w.start.to_string(),
                w.block_length.to_string(),
                w.blocks.join(" "),
            ],
            None => vec!["false".into(), String::new(), String::new(), String::new()],
        };
        vec![row]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkRecord {
    /// Number of words of length at most k.
    pub exponent: u32,
    /// (B + 1)^exponent, saturating at 2^128 - 1.
    pub limit: String,
    pub max_complexity: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceOutput {
    pub k: usize,
    pub window: usize,
    pub bound: u64,
    pub witness: Option<PairRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link: Option<LinkRecord>,
}

impl Tabular for BalanceOutput {
    fn header(&self) -> Vec<&'static str> {
        vec!["k", "window", "bound", "u", "v", "x", "link_holds"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        let w = self.witness.clone().unwrap_or(PairRecord {
            u: String::new(),
            v: String::new(),
            x: String::new(),
        });
        vec![vec![
            self.k.to_string(),
            self.window.to_string(),
            self.bound.to_string(),
            w.u,
            w.v,
            w.x,
            opt(&self.link.as_ref().map(|l| l.holds)),
        ]]
    }
}
