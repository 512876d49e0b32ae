//! Factor-count flows on de Bruijn graphs.
//!
//! A word `w` of length `n ≥ k − 1` induces a flow `f_w(t) = |w|_t` on
//! `A^k` together with the endpoints `s1 = pref_{k−1}(w)` and
//! `s2 = suff_{k−1}(w)`. Reading `t = s·a = b·s'` as an edge `s → s'` of the
//! de Bruijn multigraph on `A^{k−1}`, `w` is an Eulerian path from `s1` to
//! `s2`. Conversely a flow is the flow of some word exactly when the graph
//! admits such a path, which reduces to a degree balance plus connectivity.
//!
//! Since a k-Abelian class is determined by `(s1, f)`, counting realizable
//! flows of total `n − k + 1` counts the classes of `A^n`.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::Serialize;

use crate::equivalence::{signature, K};
use crate::error::{Error, Result};
use crate::words::{code_space, decode, encode, factor_counts, Alphabet, Symbol, Word};

/// Largest `m^k` a flow function may index.
pub const MAX_FLOW_SPACE: u64 = 1 << 24;

/// Work limit for enumerations: DFS nodes for the flow census, words for
/// brute force.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Budget {
    pub const DEFAULT_NODES: u64 = 200_000_000;

    pub fn new(max_nodes: u64) -> Result<Self> {
        if max_nodes == 0 {
            return Err(Error::Precondition("budget must be positive".into()));
        }
        Ok(Budget { max_nodes })
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: Self::DEFAULT_NODES,
        }
    }
}

/// A map `A^k → ℕ` with designated endpoints in `A^{k−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlowFunction {
    k: usize,
    alphabet: Arc<Alphabet>,
    /// Indexed by the base-m code of `t`, i.e. lexicographic order of `A^k`.
    counts: Vec<u64>,
    source: Vec<Symbol>,
    sink: Vec<Symbol>,
}

fn flow_space(m: usize, k: usize) -> Result<u64> {
    match code_space(m, k) {
        Some(s) if s <= MAX_FLOW_SPACE => Ok(s),
        _ => Err(Error::FactorSpaceTooLarge { m, k }),
    }
}

impl FlowFunction {
    pub fn new(
        alphabet: Arc<Alphabet>,
        k: usize,
        counts: Vec<u64>,
        source: &Word,
        sink: &Word,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidK("0".into()));
        }
        let space = flow_space(alphabet.size(), k)?;
        if counts.len() as u64 != space {
            return Err(Error::Precondition(format!(
                "flow over A^{k} needs {space} counts, got {}",
                counts.len()
            )));
        }
        for s in [source, sink] {
            if s.len() != k - 1 || **s.alphabet() != *alphabet {
                return Err(Error::Precondition(format!(
                    "endpoint {s} is not a word of length {} over the flow alphabet",
                    k - 1
                )));
            }
        }
        Ok(FlowFunction {
            k,
            alphabet,
            counts,
            source: source.symbols().to_vec(),
            sink: sink.symbols().to_vec(),
        })
    }

    /// Convenience constructor from textual `(factor, count)` pairs over a
    /// single-character alphabet; unlisted factors get 0.
    pub fn from_pairs(
        alphabet: &Arc<Alphabet>,
        k: usize,
        pairs: &[(&str, u64)],
        source: &str,
        sink: &str,
    ) -> Result<Self> {
        let m = alphabet.size();
        let mut counts = vec![0u64; flow_space(m, k)? as usize];
        for (t, c) in pairs {
            let t = Word::parse(t, alphabet)?;
            if t.len() != k {
                return Err(Error::Precondition(format!("{t} does not have length {k}")));
            }
            counts[encode(t.symbols(), m) as usize] = *c;
        }
        Self::new(
            alphabet.clone(),
            k,
            counts,
            &Word::parse(source, alphabet)?,
            &Word::parse(sink, alphabet)?,
        )
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, t: &Word) -> u64 {
        if t.len() != self.k {
            return 0;
        }
        self.counts[encode(t.symbols(), self.alphabet.size()) as usize]
    }

    /// Non-zero entries as `(factor, count)`, lexicographic.
    pub fn support(&self) -> Vec<(Word, u64)> {
        let m = self.alphabet.size();
        self.counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(t, &c)| {
                (
                    Word::from_parts(&self.alphabet, decode(t as u64, m, self.k)),
                    c,
                )
            })
            .collect()
    }

    pub fn source(&self) -> Word {
        Word::from_parts(&self.alphabet, self.source.clone())
    }

    pub fn sink(&self) -> Word {
        Word::from_parts(&self.alphabet, self.sink.clone())
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Length of any word realizing this flow.
    pub fn word_length(&self) -> u64 {
        self.total() + self.k as u64 - 1
    }

    pub fn graph(&self) -> DeBruijnGraph {
        DeBruijnGraph::new(self)
    }
}

/// The multigraph `G_f`: vertices `A^{k−1}`, `f(t)` parallel edges from
/// `pref_{k−1}(t)` to `suff_{k−1}(t)`.
#[derive(Debug, Clone)]
pub struct DeBruijnGraph {
    m: usize,
    vertex_count: usize,
    /// `(from, to, multiplicity)` for every `t` with `f(t) > 0`.
    edges: Vec<(usize, usize, u64)>,
    in_degree: Vec<u64>,
    out_degree: Vec<u64>,
    source: usize,
    sink: usize,
}

impl DeBruijnGraph {
    fn new(f: &FlowFunction) -> Self {
        let m = f.alphabet.size();
        let vertex_count = f.counts.len() / m;
        let mut edges = Vec::new();
        let mut in_degree = vec![0u64; vertex_count];
        let mut out_degree = vec![0u64; vertex_count];
        for (t, &c) in f.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (from, to) = (t / m, t % vertex_count);
            edges.push((from, to, c));
            out_degree[from] += c;
            in_degree[to] += c;
        }
        DeBruijnGraph {
            m,
            vertex_count,
            edges,
            in_degree,
            out_degree,
            source: encode(&f.source, m) as usize,
            sink: encode(&f.sink, m) as usize,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn alphabet_size(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn in_degree(&self, s: usize) -> u64 {
        self.in_degree[s]
    }

    pub fn out_degree(&self, s: usize) -> u64 {
        self.out_degree[s]
    }

    /// `c_s`: −1 at the source and +1 at the sink when they differ, else 0.
    pub fn correction(&self, s: usize) -> i64 {
        correction(s, self.source, self.sink)
    }

    pub fn is_balanced(&self) -> bool {
        (0..self.vertex_count)
            .all(|s| self.in_degree[s] as i64 == self.out_degree[s] as i64 + self.correction(s))
    }

    /// All edges lie in one weakly connected component, and the source is
    /// on it whenever there is at least one edge.
    pub fn is_connected(&self) -> bool {
        let Some(&(first, _, _)) = self.edges.first() else {
            return true;
        };
        let mut uf = UnionFind::<usize>::new(self.vertex_count);
        for &(a, b, _) in &self.edges {
            uf.union(a, b);
        }
        let root = uf.find(first);
        self.edges.iter().all(|&(a, _, _)| uf.find(a) == root) && uf.find(self.source) == root
    }
}

fn correction(s: usize, source: usize, sink: usize) -> i64 {
    if source == sink {
        0
    } else if s == source {
        -1
    } else if s == sink {
        1
    } else {
        0
    }
}

/// The flow of `w`: length-k factor counts and its (k−1)-affixes.
pub fn build_flow(w: &Word, k: usize) -> Result<FlowFunction> {
    if k == 0 {
        return Err(Error::InvalidK("0".into()));
    }
    if w.len() < k - 1 {
        return Err(Error::TooShort {
            len: w.len(),
            need: k - 1,
        });
    }
    let m = w.alphabet().size();
    let mut counts = vec![0u64; flow_space(m, k)? as usize];
    for (t, c) in factor_counts(w.symbols(), m, k)? {
        counts[t as usize] = u64::from(c);
    }
    Ok(FlowFunction {
        k,
        alphabet: w.alphabet().clone(),
        counts,
        source: w.symbols()[..k - 1].to_vec(),
        sink: w.symbols()[w.len() - (k - 1)..].to_vec(),
    })
}

/// Whether some word has flow `f` and endpoints `(s1, s2)`, i.e. whether
/// `G_f` has an Eulerian path from `s1` to `s2`.
///
/// With no edges this holds iff `s1 = s2` (the word is `s1` itself).
/// Otherwise the degree system `Σ_a f(as) = Σ_a f(sa) + c_s` must hold and
/// the edges must form one component containing `s1`.
pub fn is_realizable(f: &FlowFunction) -> bool {
    let g = f.graph();
    if g.edges.is_empty() {
        return f.source == f.sink;
    }
    g.is_balanced() && g.is_connected()
}

/// The lexicographically least word realizing `f`.
///
/// Walks from the source choosing at each step the least letter whose edge
/// leaves a realizable remainder, so no backtracking is needed.
pub fn realize(f: &FlowFunction) -> Result<Word> {
    if !is_realizable(f) {
        return Err(Error::Unrealizable);
    }
    let m = f.alphabet.size();
    let vertex_count = f.counts.len() / m;
    let mut rest = f.clone();
    let mut word = f.source.clone();
    let mut current = encode(&f.source, m) as usize;
    for _ in 0..f.total() {
        let step = (0..m).find_map(|a| {
            let t = current * m + a;
            if rest.counts[t] == 0 {
                return None;
            }
            rest.counts[t] -= 1;
            let next = t % vertex_count;
            rest.source = decode(next as u64, m, f.k - 1);
            if is_realizable(&rest) {
                Some((a, next))
            } else {
                rest.counts[t] += 1;
                None
            }
        });
        let (a, next) = step.ok_or(Error::Unrealizable)?;
        word.push(a as Symbol);
        current = next;
    }
    Ok(Word::from_parts(&f.alphabet, word))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusMethod {
    Bruteforce,
    FlowEnumeration,
}

impl std::fmt::Display for CensusMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CensusMethod::Bruteforce => "bruteforce",
            CensusMethod::FlowEnumeration => "flow-enumeration",
        })
    }
}

/// Number of k-Abelian classes of `A^n` for `|A| = m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub class_count: u64,
    pub method: CensusMethod,
}

/// Depth-first enumeration of realizable flows for fixed `(m, k, n)`.
///
/// Values are assigned in lexicographic order of `A^k`. A vertex's degree
/// equation is checked as soon as its last incident edge is assigned, and
/// the final entry takes whatever total remains. Connectivity is checked at
/// the leaves.
struct FlowEnumerator {
    m: usize,
    k: usize,
    total: u64,
    vertex_count: usize,
    /// `completes[i]`: vertices whose in- and out-edges all have index ≤ i.
    completes: Vec<Vec<usize>>,
    nodes: AtomicU64,
    limit: u64,
    exhausted: AtomicBool,
}

impl FlowEnumerator {
    fn new(m: usize, k: usize, n: usize, budget: Budget) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidK("0".into()));
        }
        if n + 1 < k {
            return Err(Error::Precondition(format!(
                "census needs n >= k - 1 (n = {n}, k = {k})"
            )));
        }
        let space = flow_space(m, k)? as usize;
        let vertex_count = space / m;
        let mut completes = vec![Vec::new(); space];
        for s in 0..vertex_count {
            let last_out = s * m + (m - 1);
            let last_in = (m - 1) * vertex_count + s;
            completes[last_out.max(last_in)].push(s);
        }
        Ok(FlowEnumerator {
            m,
            k,
            total: (n + 1 - k) as u64,
            vertex_count,
            completes,
            nodes: AtomicU64::new(0),
            limit: budget.max_nodes,
            exhausted: AtomicBool::new(false),
        })
    }

    fn endpoint_pairs(&self) -> Vec<(usize, usize)> {
        let v = self.vertex_count;
        (0..v).flat_map(|a| (0..v).map(move |b| (a, b))).collect()
    }

    fn budget_error(&self) -> Error {
        Error::BudgetExceeded(format!(
            "flow enumeration for m={}, k={} expanded more than {} nodes",
            self.m, self.k, self.limit
        ))
    }

    /// Visits every realizable flow with endpoints `(source, sink)`.
    fn run<F: FnMut(&[u64])>(&self, source: usize, sink: usize, visit: &mut F) -> Result<()> {
        let mut counts = vec![0u64; self.completes.len()];
        self.dfs(0, self.total, source, sink, &mut counts, visit);
        if self.exhausted.load(Ordering::Relaxed) {
            Err(self.budget_error())
        } else {
            Ok(())
        }
    }

    fn dfs<F: FnMut(&[u64])>(
        &self,
        index: usize,
        remaining: u64,
        source: usize,
        sink: usize,
        counts: &mut [u64],
        visit: &mut F,
    ) {
        if self.exhausted.load(Ordering::Relaxed) {
            return;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.limit {
            self.exhausted.store(true, Ordering::Relaxed);
            return;
        }
        if index == counts.len() {
            if self.leaf_connected(source, counts) {
                visit(counts);
            }
            return;
        }
        let last = index + 1 == counts.len();
        let values = if last {
            remaining..=remaining
        } else {
            0..=remaining
        };
        for value in values {
            counts[index] = value;
            if self.completed_balanced(index, source, sink, counts) {
                self.dfs(index + 1, remaining - value, source, sink, counts, visit);
            }
        }
        counts[index] = 0;
    }

    fn completed_balanced(&self, index: usize, source: usize, sink: usize, counts: &[u64]) -> bool {
        let (m, v) = (self.m, self.vertex_count);
        self.completes[index].iter().all(|&s| {
            let out: u64 = counts[s * m..s * m + m].iter().sum();
            let inn: u64 = (0..m).map(|a| counts[a * v + s]).sum();
            inn as i64 == out as i64 + correction(s, source, sink)
        })
    }

    fn leaf_connected(&self, source: usize, counts: &[u64]) -> bool {
        if self.total == 0 {
            // degree checks already forced source == sink
            return true;
        }
        let (m, v) = (self.m, self.vertex_count);
        let mut uf = UnionFind::<usize>::new(v);
        let mut touched = vec![false; v];
        for (t, &c) in counts.iter().enumerate() {
            if c > 0 {
                let (a, b) = (t / m, t % v);
                uf.union(a, b);
                touched[a] = true;
                touched[b] = true;
            }
        }
        let root = uf.find(source);
        touched[source] && (0..v).all(|s| !touched[s] || uf.find(s) == root)
    }
}

/// Counts k-Abelian classes of `A^n` by enumerating realizable flows over
/// all endpoint pairs, in parallel over the pairs.
pub fn count_classes_flow(m: usize, k: usize, n: usize, budget: Budget) -> Result<u64> {
    let e = FlowEnumerator::new(m, k, n, budget)?;
    let per_pair = e
        .endpoint_pairs()
        .into_par_iter()
        .map(|(s1, s2)| {
            let mut count = 0u64;
            e.run(s1, s2, &mut |_| count += 1)?;
            Ok(count)
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(per_pair.into_iter().sum())
}

/// Calls `visit` on every realizable flow of total `n − k + 1`, endpoint
/// pairs in lexicographic order.
pub fn for_each_class_flow<F: FnMut(FlowFunction)>(
    m: usize,
    k: usize,
    n: usize,
    budget: Budget,
    mut visit: F,
) -> Result<()> {
    let alphabet = Alphabet::of_size(m);
    let e = FlowEnumerator::new(m, k, n, budget)?;
    for (s1, s2) in e.endpoint_pairs() {
        let (source, sink) = (decode(s1 as u64, m, k - 1), decode(s2 as u64, m, k - 1));
        e.run(s1, s2, &mut |counts| {
            visit(FlowFunction {
                k,
                alphabet: alphabet.clone(),
                counts: counts.to_vec(),
                source: source.clone(),
                sink: sink.clone(),
            })
        })?;
    }
    Ok(())
}

/// Counts k-Abelian classes of `A^n` by bucketing all `m^n` words by
/// signature.
pub fn count_classes_bruteforce(m: usize, k: usize, n: usize, budget: Budget) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidK("0".into()));
    }
    let total = code_space(m, n)
        .filter(|&t| t <= budget.max_nodes)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "brute force over {m}^{n} words exceeds {} words",
                budget.max_nodes
            ))
        })?;
    let alphabet = Alphabet::of_size(m);
    let classes: HashSet<_> = (0..total)
        .into_par_iter()
        .map(|code| {
            let w = Word::from_parts(&alphabet, decode(code, m, n));
            signature(&w, K::finite(k))
        })
        .collect::<Result<_>>()?;
    Ok(classes.len() as u64)
}

/// Census rows for each `n`, by the requested methods.
///
/// With both methods, brute-force rows are emitted only where `m^n` fits the
/// budget; flow rows are always computed.
pub fn census(
    m: usize,
    k: usize,
    ns: impl IntoIterator<Item = usize>,
    methods: &[CensusMethod],
    budget: Budget,
) -> Result<Vec<CensusRow>> {
    let mut rows = Vec::new();
    for n in ns {
        for &method in methods {
            let class_count = match method {
                CensusMethod::Bruteforce => {
                    let fits = code_space(m, n).is_some_and(|t| t <= budget.max_nodes);
                    if !fits && methods.len() > 1 {
                        continue;
                    }
                    count_classes_bruteforce(m, k, n, budget)?
                }
                CensusMethod::FlowEnumeration => count_classes_flow(m, k, n, budget)?,
            };
            rows.push(CensusRow {
                m,
                k,
                n,
                class_count,
                method,
            });
        }
    }
    Ok(rows)
}

/// Least-squares slope of `log(class_count)` against `log(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthFit {
    pub m: usize,
    pub k: usize,
    pub fitted_exponent: f64,
    /// `m^k − m^{k−1}`.
    pub theoretical_exponent: f64,
    pub rows: usize,
}

pub fn growth_exponent_fit(rows: &[CensusRow]) -> Result<GrowthFit> {
    if rows.len() < 4 {
        return Err(Error::Precondition(format!(
            "growth fit needs at least 4 rows, got {}",
            rows.len()
        )));
    }
    let (m, k) = (rows[0].m, rows[0].k);
    if rows.iter().any(|r| r.m != m || r.k != k) {
        return Err(Error::Precondition("rows must share m and k".into()));
    }
    if rows.windows(2).any(|w| w[1].n <= w[0].n) || rows[0].n == 0 {
        return Err(Error::Precondition(
            "rows must have increasing positive n".into(),
        ));
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| ((r.n as f64).ln(), (r.class_count as f64).ln()))
        .collect();
    let len = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / len;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let mk = (m as f64).powi(k as i32);
    Ok(GrowthFit {
        m,
        k,
        fitted_exponent: sxy / sxx,
        theoretical_exponent: mk - mk / m as f64,
        rows: rows.len(),
    })
}
