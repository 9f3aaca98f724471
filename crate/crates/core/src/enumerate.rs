//! Brute-force enumeration of supports and strict chains.
//!
//! Supports over `m ≤ 64` cells are `u64` masks; bit `c` is row-major cell
//! `c`, which is character `c` of the bitstring form. This module is the
//! ground truth the counting formulas are checked against, so it counts by
//! construction and never by formula (the formula only sizes jobs up front).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::count::{chain_count_ie, Root, SizeVector};
use crate::error::{Error, Result};

/// Hard limit of the mask representation.
pub const MAX_MASK_CELLS: usize = 64;

/// Limits that keep enumeration jobs bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    /// Largest cell count accepted.
    pub max_cells: usize,
    /// Largest projected number of chains accepted.
    pub ceiling: u64,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            max_cells: 16,
            ceiling: 10_000_000,
        }
    }
}

impl EnumConfig {
    fn check_cells(&self, m: usize) -> Result<()> {
        let cap = self.max_cells.min(MAX_MASK_CELLS);
        if m > cap {
            return Err(Error::TooManyCells { cells: m, cap });
        }
        Ok(())
    }

    fn check_job(&self, m: usize, k: usize) -> Result<()> {
        self.check_cells(m)?;
        let projected = chain_count_ie(m, k as i64);
        if projected > BigUint::from(self.ceiling) {
            return Err(Error::Infeasible {
                projected,
                ceiling: self.ceiling,
            });
        }
        Ok(())
    }
}

fn full_mask(m: usize) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// Row-major bitstring of a support over `m` cells.
pub fn mask_to_bitstring(mask: u64, m: usize) -> String {
    (0..m).map(|c| if mask >> c & 1 == 1 { '1' } else { '0' }).collect()
}

/// `A0` for the empty support, `A<m>` for the full one, otherwise
/// `A<size>^{cells}` with 1-based cell indices, e.g. `A2^{1,3}`.
pub fn mask_label(mask: u64, m: usize) -> String {
    let size = mask.count_ones();
    if mask == 0 || mask == full_mask(m) {
        return format!("A{size}");
    }
    let cells: Vec<String> = (0..m)
        .filter(|c| mask >> c & 1 == 1)
        .map(|c| (c + 1).to_string())
        .collect();
    format!("A{size}^{{{}}}", cells.join(","))
}

/// All `2^m` supports, ordered lexicographically by bitstring.
pub fn enumerate_supports(m: usize, cfg: &EnumConfig) -> Result<Vec<u64>> {
    cfg.check_cells(m)?;
    if m == 0 {
        return Ok(vec![0]);
    }
    // Lexicographic bitstring order is numeric order of the bit-reversed mask.
    let shift = 64 - m as u32;
    Ok((0..=full_mask(m)).map(|x| x.reverse_bits() >> shift).collect())
}

/// One strict chain of supports.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainRecord {
    pub cells: usize,
    pub components: Vec<u64>,
}

impl ChainRecord {
    pub fn size_vector(&self) -> SizeVector {
        let sizes = self.components.iter().map(|c| c.count_ones() as usize).collect();
        SizeVector::new(self.cells, sizes).expect("components strictly increase")
    }

    /// `0000 < 1000 < 1100`, or with labels `A0 < A1^{1} < A2^{1,2}`.
    pub fn format(&self, labeled: bool) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|&c| {
                if labeled {
                    mask_label(c, self.cells)
                } else {
                    mask_to_bitstring(c, self.cells)
                }
            })
            .collect();
        parts.join(" < ")
    }
}

/// Candidate first components, in a fixed order.
fn first_components(m: usize, k: usize, root: Option<Root>) -> Vec<u64> {
    let full = full_mask(m);
    match root {
        Some(Root::O) => vec![0],
        Some(Root::J) if k == 0 => vec![full],
        _ => (0..=full)
            .filter(|s| s.count_ones() as usize + k <= m)
            .collect(),
    }
}

struct Walker {
    m: usize,
    full: u64,
    k: usize,
    root: Option<Root>,
}

impl Walker {
    /// Extends `chain` with every strictly larger support that still leaves
    /// room for the remaining components.
    fn extend(&self, chain: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
        let depth = chain.len() - 1;
        if depth == self.k {
            visit(chain);
            return;
        }
        let last = *chain.last().unwrap();
        let remaining = self.k - depth - 1;
        let limit = self.m - remaining;
        if remaining == 0 && self.root == Some(Root::J) {
            if last != self.full {
                chain.push(self.full);
                self.extend(chain, visit);
                chain.pop();
            }
            return;
        }
        let free = self.full & !last;
        let mut d = free;
        while d != 0 {
            let next = last | d;
            if next.count_ones() as usize <= limit {
                chain.push(next);
                self.extend(chain, visit);
                chain.pop();
            }
            d = (d - 1) & free;
        }
    }
}

/// Streams every strict chain of `k + 1` supports over `m` cells to `visit`
/// and returns how many there were. `root` pins the initial term to `O` or
/// the terminal term to `J`.
pub fn enumerate_chains(
    m: usize,
    k: i64,
    root: Option<Root>,
    cfg: &EnumConfig,
    mut visit: impl FnMut(&ChainRecord),
) -> Result<u64> {
    let Some(k) = usize::try_from(k).ok().filter(|&k| k <= m) else {
        cfg.check_cells(m)?;
        return Ok(0);
    };
    cfg.check_job(m, k)?;
    let walker = Walker { m, full: full_mask(m), k, root };
    let mut count = 0u64;
    let mut record = ChainRecord { cells: m, components: Vec::with_capacity(k + 1) };
    for first in first_components(m, k, root) {
        let mut chain = vec![first];
        walker.extend(&mut chain, &mut |c| {
            count += 1;
            record.components.clear();
            record.components.extend_from_slice(c);
            visit(&record);
        });
    }
    Ok(count)
}

/// Counts chains, partitioning the search by first component across the
/// current rayon pool.
pub fn count_chains(m: usize, k: i64, root: Option<Root>, cfg: &EnumConfig, parallel: bool) -> Result<u64> {
    let Some(k) = usize::try_from(k).ok().filter(|&k| k <= m) else {
        cfg.check_cells(m)?;
        return Ok(0);
    };
    cfg.check_job(m, k)?;
    let walker = Walker { m, full: full_mask(m), k, root };
    let part = |first: u64| {
        let mut n = 0u64;
        walker.extend(&mut vec![first], &mut |_| n += 1);
        n
    };
    let firsts = first_components(m, k, root);
    Ok(if parallel {
        firsts.into_par_iter().map(part).sum()
    } else {
        firsts.into_iter().map(part).sum()
    })
}

/// Materializes every chain; parallel runs concatenate partitions in the
/// serial order, so the output is identical either way.
pub fn collect_chains(
    m: usize,
    k: i64,
    root: Option<Root>,
    cfg: &EnumConfig,
    parallel: bool,
) -> Result<Vec<ChainRecord>> {
    let Some(k) = usize::try_from(k).ok().filter(|&k| k <= m) else {
        cfg.check_cells(m)?;
        return Ok(Vec::new());
    };
    cfg.check_job(m, k)?;
    let walker = Walker { m, full: full_mask(m), k, root };
    let part = |first: u64| {
        let mut out = Vec::new();
        walker.extend(&mut vec![first], &mut |c| {
            out.push(ChainRecord { cells: m, components: c.to_vec() })
        });
        out
    };
    let firsts = first_components(m, k, root);
    let parts: Vec<Vec<ChainRecord>> = if parallel {
        firsts.into_par_iter().map(part).collect()
    } else {
        firsts.into_iter().map(part).collect()
    };
    Ok(parts.into_iter().flatten().collect())
}

/// Chain counts keyed by size vector.
pub fn group_by_size_vector(
    m: usize,
    k: i64,
    root: Option<Root>,
    cfg: &EnumConfig,
) -> Result<BTreeMap<SizeVector, u64>> {
    let mut groups = BTreeMap::new();
    enumerate_chains(m, k, root, cfg, |c| {
        *groups.entry(c.size_vector()).or_insert(0) += 1;
    })?;
    Ok(groups)
}

/// Covering graph of the support lattice on `m` cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseDiagram {
    pub cells: usize,
    /// By size, then by ascending cell list.
    pub nodes: Vec<u64>,
    /// `(lower, upper)` pairs differing in exactly one cell.
    pub edges: Vec<(u64, u64)>,
}

#[derive(Serialize)]
struct NodeJson {
    id: String,
    label: String,
    size: u32,
}

#[derive(Serialize)]
struct HasseJson {
    cells: usize,
    nodes: Vec<NodeJson>,
    edges: Vec<[String; 2]>,
}

pub fn hasse_export(m: usize, cfg: &EnumConfig) -> Result<HasseDiagram> {
    cfg.check_cells(m)?;
    let full = full_mask(m);
    let mut nodes: Vec<u64> = (0..=full).collect();
    let cell_list = |mask: u64| -> Vec<usize> { (0..m).filter(|c| mask >> c & 1 == 1).collect() };
    nodes.sort_by_cached_key(|&s| (s.count_ones(), cell_list(s)));
    let edges = nodes
        .iter()
        .flat_map(|&s| (0..m).filter(move |c| s >> c & 1 == 0).map(move |c| (s, s | 1 << c)))
        .collect();
    Ok(HasseDiagram { cells: m, nodes, edges })
}

impl HasseDiagram {
    pub fn to_dot(&self) -> String {
        let m = self.cells;
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n");
        for &s in &self.nodes {
            writeln!(out, "  \"{}\" [label=\"{}\"];", mask_to_bitstring(s, m), mask_label(s, m)).unwrap();
        }
        for &(a, b) in &self.edges {
            writeln!(out, "  \"{}\" -> \"{}\";", mask_to_bitstring(a, m), mask_to_bitstring(b, m)).unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        let m = self.cells;
        let wire = HasseJson {
            cells: m,
            nodes: self
                .nodes
                .iter()
                .map(|&s| NodeJson {
                    id: mask_to_bitstring(s, m),
                    label: mask_label(s, m),
                    size: s.count_ones(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| [mask_to_bitstring(a, m), mask_to_bitstring(b, m)])
                .collect(),
        };
        serde_json::to_string_pretty(&wire).unwrap()
    }
}
