//! Exact chain counts in the Boolean lattice on `m` cells.
//!
//! The number of chains `A_0 ⊂ A_1 ⊂ … ⊂ A_k` of supports over `m` cells is
//! summed over size vectors `s_0 < s_1 < … < s_k`: a chain with those sizes
//! is built by choosing `A_0` (`C(m, s_0)` ways) and then each increment out
//! of the cells not yet used (`C(m - s_{i-1}, s_i - s_{i-1})` ways). For an
//! order-`n` matrix `m = n²`, and the count of `k`-level equivalence classes
//! is `chain_count(n², k)`.
//!
//! The naive summation visits every size vector. [`chain_count_ie`] evaluates
//! the same numbers in `O(k)` big-integer terms by inclusion–exclusion over
//! empty increments and is kept as an independent route.

use std::fmt::Write as _;
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative count.
pub type Count = BigUint;

/// Which end of a chain is pinned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Root {
    /// The initial term is the null support `O`.
    O,
    /// The terminal term is the full support `J`.
    J,
}

/// Binomial coefficients `C(a, b)` for `0 ≤ b ≤ a ≤ max_row`.
#[derive(Debug)]
pub struct PascalTable {
    rows: Vec<Vec<BigUint>>,
}

impl PascalTable {
    fn build(max_row: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_row + 1);
        for a in 0..=max_row {
            let mut row = Vec::with_capacity(a + 1);
            row.push(BigUint::one());
            for b in 1..a {
                let prev = &rows[a - 1];
                row.push(&prev[b - 1] + &prev[b]);
            }
            if a > 0 {
                row.push(BigUint::one());
            }
            rows.push(row);
        }
        PascalTable { rows }
    }

    pub fn max_row(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(a, b)`; both indices must lie in the table.
    #[inline]
    pub fn get(&self, a: usize, b: usize) -> &BigUint {
        &self.rows[a][b]
    }
}

static PASCAL: LazyLock<RwLock<Arc<PascalTable>>> =
    LazyLock::new(|| RwLock::new(Arc::new(PascalTable::build(32))));

/// The shared Pascal table, grown to at least `max_row` rows. Growth replaces
/// the table wholesale, so readers holding an older `Arc` keep a consistent
/// (smaller) table.
pub fn pascal(max_row: usize) -> Arc<PascalTable> {
    {
        let table = PASCAL.read().expect("pascal lock poisoned");
        if table.max_row() >= max_row {
            return Arc::clone(&table);
        }
    }
    let mut table = PASCAL.write().expect("pascal lock poisoned");
    if table.max_row() < max_row {
        let target = max_row.max(2 * table.max_row());
        *table = Arc::new(PascalTable::build(target));
    }
    Arc::clone(&table)
}

/// `C(a, b)`, zero when `b < 0` or `b > a`.
pub fn binomial(a: i64, b: i64) -> Result<Count> {
    if a < 0 {
        return Err(Error::NegativeArgument(a));
    }
    if b < 0 || b > a {
        return Ok(Count::zero());
    }
    Ok(pascal(a as usize).get(a as usize, b as usize).clone())
}

/// Cardinalities `s_0 < s_1 < … < s_k` of a chain over `cells` cells.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SizeVector {
    cells: usize,
    sizes: Vec<usize>,
}

impl SizeVector {
    pub fn new(cells: usize, sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidSizeVector("no sizes".into()));
        }
        if sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSizeVector(format!("{sizes:?} is not strictly increasing")));
        }
        if sizes[sizes.len() - 1] > cells {
            return Err(Error::InvalidSizeVector(format!("{sizes:?} exceeds {cells} cells")));
        }
        Ok(SizeVector { cells, sizes })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn k(&self) -> usize {
        self.sizes.len() - 1
    }

    /// `s_0, s_1 - s_0, …, s_k - s_{k-1}`.
    pub fn increments(&self) -> Vec<usize> {
        let mut prev = 0;
        self.sizes
            .iter()
            .map(|&s| {
                let d = s - prev;
                prev = s;
                d
            })
            .collect()
    }

    /// Chains with these sizes, grown upward from the smallest component:
    /// `C(m, s_0) · ∏ C(m - s_{i-1}, s_i - s_{i-1})`.
    pub fn term(&self) -> Count {
        let t = pascal(self.cells);
        let m = self.cells;
        let mut acc = t.get(m, self.sizes[0]).clone();
        for w in self.sizes.windows(2) {
            acc *= t.get(m - w[0], w[1] - w[0]);
        }
        acc
    }

    /// The same count, shrinking downward from the largest component:
    /// `C(m, s_k) · C(s_k, s_{k-1}) · … · C(s_1, s_0)`.
    pub fn term_top_down(&self) -> Count {
        let t = pascal(self.cells);
        let mut acc = t.get(self.cells, self.sizes[self.k()]).clone();
        for w in self.sizes.windows(2).rev() {
            acc *= t.get(w[1], w[0]);
        }
        acc
    }

    /// Every size vector of length `k + 1` over `cells` cells, lexicographic.
    pub fn all(cells: usize, k: usize) -> Vec<SizeVector> {
        fn extend(cells: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<SizeVector>) {
            if cur.len() == len {
                out.push(SizeVector { cells, sizes: cur.clone() });
                return;
            }
            let start = cur.last().map_or(0, |&s| s + 1);
            let room = len - cur.len() - 1;
            for s in start..=cells.saturating_sub(room) {
                if s + room > cells {
                    break;
                }
                cur.push(s);
                extend(cells, len, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if k <= cells {
            extend(cells, k + 1, &mut Vec::with_capacity(k + 1), &mut out);
        }
        out
    }
}

/// Result of a naive summation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summation {
    /// Chain count per length `k = 0..=m`.
    pub per_k: Vec<Count>,
    /// Size vectors that contributed a term.
    pub terms: u64,
}

impl Summation {
    fn zero(m: usize) -> Self {
        Summation {
            per_k: vec![Count::zero(); m + 1],
            terms: 0,
        }
    }

    fn merge(mut self, other: Summation) -> Self {
        for (a, b) in self.per_k.iter_mut().zip(other.per_k) {
            *a += b;
        }
        self.terms += other.terms;
        self
    }

    pub fn total(&self) -> Count {
        self.per_k.iter().sum()
    }
}

/// Depth below which subtrees are split across rayon tasks.
const PARALLEL_DEPTH: usize = 3;

/// Term-by-term evaluation of the chain-count sums.
///
/// Size vectors are walked depth-first as the nonempty subsets of
/// `{0, …, m}` in lexicographic order; each prefix carries its partial
/// product so a node costs one multiplication.
#[derive(Clone, Debug)]
pub struct NaiveSummation {
    cells: usize,
    only_k: Option<usize>,
    root: Option<Root>,
    parallel: bool,
}

impl NaiveSummation {
    /// Every `k` at once.
    pub fn row(cells: usize) -> Self {
        NaiveSummation {
            cells,
            only_k: None,
            root: None,
            parallel: false,
        }
    }

    /// A single `k`; other entries of the result stay zero.
    pub fn for_k(cells: usize, k: usize) -> Self {
        NaiveSummation {
            only_k: Some(k),
            ..Self::row(cells)
        }
    }

    pub fn rooted(mut self, root: Option<Root>) -> Self {
        self.root = root;
        self
    }

    /// Split the walk across the current rayon pool.
    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn run(&self) -> Summation {
        let m = self.cells;
        let mut out = Summation::zero(m);
        if self.only_k.is_some_and(|k| k > m) {
            return out;
        }
        let table = pascal(m);
        let starts: Vec<usize> = match self.root {
            Some(Root::O) => vec![0],
            _ => (0..=m).collect(),
        };
        let visit = |s0: usize| {
            let mut acc = Summation::zero(m);
            self.descend(&table, s0, 0, table.get(m, s0).clone(), &mut acc);
            acc
        };
        if self.parallel {
            out = starts.into_par_iter().map(visit).reduce(|| Summation::zero(m), Summation::merge);
        } else {
            for s0 in starts {
                out = out.merge(visit(s0));
            }
        }
        out
    }

    fn descend(&self, table: &PascalTable, last: usize, depth: usize, product: Count, acc: &mut Summation) {
        let m = self.cells;
        let max_depth = self.only_k.unwrap_or(m);
        let counts_here = self.only_k.map_or(true, |k| k == depth);
        if counts_here && (self.root != Some(Root::J) || last == m) {
            acc.per_k[depth] += &product;
            acc.terms += 1;
        }
        if depth == max_depth {
            return;
        }
        // With a fixed k, the components after the next need one new cell each.
        let room = if self.only_k.is_some() { max_depth - depth - 1 } else { 0 };
        let hi = m.saturating_sub(room);
        if last + 1 > hi {
            return;
        }
        let child = |s: usize| product.clone() * table.get(m - last, s - last);
        if self.parallel && depth < PARALLEL_DEPTH {
            let sub = (last + 1..=hi)
                .into_par_iter()
                .map(|s| {
                    let mut local = Summation::zero(m);
                    self.descend(table, s, depth + 1, child(s), &mut local);
                    local
                })
                .reduce(|| Summation::zero(m), Summation::merge);
            *acc = std::mem::replace(acc, Summation::zero(m)).merge(sub);
        } else {
            for s in last + 1..=hi {
                self.descend(table, s, depth + 1, child(s), acc);
            }
        }
    }
}

fn k_in_range(m: usize, k: i64) -> Option<usize> {
    usize::try_from(k).ok().filter(|&k| k <= m)
}

/// Chains of `k + 1` strictly increasing supports over `m` cells, by the
/// naive summation. Zero outside `0 ≤ k ≤ m`.
pub fn chain_count(m: usize, k: i64) -> Count {
    chain_count_rooted(m, k, None)
}

/// As [`chain_count`], restricted to chains starting at `O` (`s_0 = 0`) or
/// ending at `J` (`s_k = m`).
pub fn chain_count_rooted(m: usize, k: i64, root: Option<Root>) -> Count {
    match k_in_range(m, k) {
        Some(k) => NaiveSummation::for_k(m, k).rooted(root).run().per_k.swap_remove(k),
        None => Count::zero(),
    }
}

/// `Σ_{i=0}^{k} (-1)^i C(k, i) (k + 2 - i)^m`: each cell is assigned to one
/// of `k + 2` layers (inside `A_0`, in one of the `k` increments, or outside
/// `A_k`) with every increment nonempty.
pub fn chain_count_ie(m: usize, k: i64) -> Count {
    signed_surjection_sum(m, k, 2)
}

/// Rooted counterpart of [`chain_count_ie`]: pinning either end removes one
/// layer, `Σ (-1)^i C(k, i) (k + 1 - i)^m`.
pub fn chain_count_rooted_ie(m: usize, k: i64, root: Option<Root>) -> Count {
    match root {
        None => chain_count_ie(m, k),
        Some(_) => signed_surjection_sum(m, k, 1),
    }
}

fn signed_surjection_sum(m: usize, k: i64, free_layers: usize) -> Count {
    let Some(k) = k_in_range(m, k) else {
        return Count::zero();
    };
    let table = pascal(k);
    let mut sum = BigInt::zero();
    for i in 0..=k {
        let base = BigInt::from(k + free_layers - i);
        let term = BigInt::from(table.get(k, i).clone()) * num_traits::pow(base, m);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum.to_biguint().expect("inclusion-exclusion sum is nonnegative")
}

/// All chain counts for `m` cells, by the naive summation.
pub fn chain_row(m: usize, root: Option<Root>) -> Vec<Count> {
    NaiveSummation::row(m).rooted(root).run().per_k
}

pub fn chain_row_ie(m: usize, root: Option<Root>) -> Vec<Count> {
    (0..=m as i64).map(|k| chain_count_rooted_ie(m, k, root)).collect()
}

/// Number of equivalence classes of order-`n` fuzzy matrices; 1 for `n = 0`.
pub fn total_count(n: usize) -> Count {
    total_count_rooted(n, None)
}

pub fn total_count_rooted(n: usize, root: Option<Root>) -> Count {
    chain_row(n * n, root).into_iter().sum()
}

pub fn total_count_ie(n: usize, root: Option<Root>) -> Count {
    chain_row_ie(n * n, root).into_iter().sum()
}

/// Maximal chains of order-`n` crisp matrices: `(n²)!`.
pub fn flag_count(n: usize) -> Count {
    (1..=n * n).map(Count::from).product()
}

/// Size vectors summed over in the naive evaluation of the order-`n` total:
/// `2^(n²+1) - 1`.
pub fn term_count(n: usize) -> Count {
    (Count::one() << (n * n + 1)) - Count::one()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountRow {
    pub n: usize,
    /// Entry `k` is the count for `k`-level matrices, `k = 0..=n²`.
    pub per_k: Vec<Count>,
    pub total: Count,
}

impl CountRow {
    fn from_counts(n: usize, per_k: Vec<Count>) -> Self {
        let total = per_k.iter().sum();
        CountRow { n, per_k, total }
    }
}

/// Per-`k` and total counts for `n = 0..=max_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub rows: Vec<CountRow>,
    pub o_rooted: Option<Vec<CountRow>>,
    pub j_rooted: Option<Vec<CountRow>>,
}

/// How to evaluate the per-`k` counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Naive { parallel: bool },
    InclusionExclusion,
}

impl Method {
    pub fn row(self, m: usize, root: Option<Root>) -> Vec<Count> {
        match self {
            Method::Naive { parallel } => NaiveSummation::row(m).rooted(root).parallel(parallel).run().per_k,
            Method::InclusionExclusion => chain_row_ie(m, root),
        }
    }
}

pub fn count_table(max_n: usize) -> CountTable {
    count_table_with(max_n, Method::Naive { parallel: false }, false)
}

pub fn count_table_with(max_n: usize, method: Method, with_rooted: bool) -> CountTable {
    let rows_for = |root| -> Vec<CountRow> {
        (0..=max_n)
            .map(|n| CountRow::from_counts(n, method.row(n * n, root)))
            .collect()
    };
    CountTable {
        rows: rows_for(None),
        o_rooted: with_rooted.then(|| rows_for(Some(Root::O))),
        j_rooted: with_rooted.then(|| rows_for(Some(Root::J))),
    }
}

#[derive(Serialize)]
struct RowJson {
    n: usize,
    f_nk: Vec<String>,
    f_n: String,
}

fn rows_json(rows: &[CountRow]) -> Vec<RowJson> {
    rows.iter()
        .map(|r| RowJson {
            n: r.n,
            f_nk: r.per_k.iter().map(Count::to_string).collect(),
            f_n: r.total.to_string(),
        })
        .collect()
}

impl CountTable {
    /// One line per `(n, k)` under the header `n,k,f_nk,f_n`; the last column
    /// repeats the row total.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,k,f_nk,f_n\n");
        for row in &self.rows {
            for (k, v) in row.per_k.iter().enumerate() {
                writeln!(out, "{},{},{},{}", row.n, k, v, row.total).unwrap();
            }
        }
        out
    }

    /// `{"rows": [{"n", "f_nk": [...], "f_n"}], ...}` with counts as decimal
    /// strings so no consumer can round them.
    pub fn to_json(&self) -> String {
        let mut value = serde_json::json!({ "rows": rows_json(&self.rows) });
        if let Some(rows) = &self.o_rooted {
            value["o_rooted"] = serde_json::to_value(rows_json(rows)).unwrap();
        }
        if let Some(rows) = &self.j_rooted {
            value["j_rooted"] = serde_json::to_value(rows_json(rows)).unwrap();
        }
        serde_json::to_string_pretty(&value).unwrap()
    }

    /// Whitespace-aligned layout: `n`, then `f_{n,0} … f_{n,n²}`, then `f_n`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut section = |title: &str, rows: &[CountRow]| {
            let width = rows
                .iter()
                .flat_map(|r| r.per_k.iter().chain([&r.total]))
                .map(|c| c.to_string().len())
                .max()
                .unwrap_or(1);
            let cols = rows.iter().map(|r| r.per_k.len()).max().unwrap_or(0);
            write!(out, "{title}\n{:>3}", "n").unwrap();
            for k in 0..cols {
                write!(out, " {:>width$}", format!("k={k}")).unwrap();
            }
            writeln!(out, " {:>width$}", "total").unwrap();
            for r in rows {
                write!(out, "{:>3}", r.n).unwrap();
                for k in 0..cols {
                    let cell = r.per_k.get(k).map(Count::to_string).unwrap_or_default();
                    write!(out, " {cell:>width$}").unwrap();
                }
                writeln!(out, " {:>width$}", r.total).unwrap();
            }
        };
        section("f_{n,k}", &self.rows);
        if let Some(rows) = &self.o_rooted {
            section("O-rooted", rows);
        }
        if let Some(rows) = &self.j_rooted {
            section("J-rooted", rows);
        }
        out
    }
}

/// `(n, f_n)` for `n = 0..=max_n`.
pub fn sequence(max_n: usize) -> Vec<(usize, Count)> {
    sequence_with(max_n, Method::Naive { parallel: false })
}

pub fn sequence_with(max_n: usize, method: Method) -> Vec<(usize, Count)> {
    (0..=max_n)
        .map(|n| (n, method.row(n * n, None).into_iter().sum()))
        .collect()
}

/// b-file layout: one `n f_n` pair per line.
pub fn to_b_file(seq: &[(usize, Count)]) -> String {
    seq.iter().map(|(n, v)| format!("{n} {v}\n")).collect()
}
