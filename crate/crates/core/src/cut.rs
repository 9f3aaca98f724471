//! Alpha-cuts, cut chains and equivalence of fuzzy matrices.
//!
//! A fuzzy matrix is determined up to equivalence by the chain of distinct
//! weak cuts it realizes for `α ∈ (0, 1]`. [`ChainSignature`] is that chain
//! with the levels dropped; two matrices are equivalent exactly when their
//! signatures are equal. [`equivalent_direct`] decides the same relation
//! from the entries alone and serves as the cross-check.

use std::collections::HashMap;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{CrispMatrix, FuzzyMatrix, Membership};

/// Weak cut: cells with `a_ij ≥ α`, for `0 < α ≤ 1`.
pub fn alpha_cut(f: &FuzzyMatrix, alpha: &Membership) -> Result<CrispMatrix> {
    if alpha.is_zero() {
        return Err(Error::LevelOutOfRange {
            level: alpha.to_string(),
            range: "(0, 1]",
        });
    }
    Ok(cut_where(f, |a| a >= alpha))
}

/// Strong cut: cells with `a_ij > α`, for `0 ≤ α < 1`.
pub fn strong_alpha_cut(f: &FuzzyMatrix, alpha: &Membership) -> Result<CrispMatrix> {
    if alpha.is_one() {
        return Err(Error::LevelOutOfRange {
            level: alpha.to_string(),
            range: "[0, 1)",
        });
    }
    Ok(cut_where(f, |a| a > alpha))
}

fn cut_where(f: &FuzzyMatrix, keep: impl Fn(&Membership) -> bool) -> CrispMatrix {
    let n = f.order();
    let cells = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| keep(f.get(i, j)));
    CrispMatrix::from_cells(n, cells).expect("cells lie inside the matrix")
}

/// Number of distinct entry values strictly between 0 and 1.
pub fn k_level(f: &FuzzyMatrix) -> usize {
    let mut interior: Vec<&Membership> = f
        .entries()
        .iter()
        .filter(|a| !a.is_zero() && !a.is_one())
        .collect();
    interior.sort();
    interior.dedup();
    interior.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rootedness {
    pub o_rooted: bool,
    pub j_rooted: bool,
}

/// Whether the signature of `f` contains `O` (no entry equals 1) and `J`
/// (no entry equals 0).
pub fn rootedness(f: &FuzzyMatrix) -> Rootedness {
    signature(f).rootedness()
}

/// Strictly increasing crisp cuts paired with strictly decreasing levels in
/// `(0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutChain {
    order: usize,
    levels: Vec<Membership>,
    cuts: Vec<CrispMatrix>,
}

impl CutChain {
    pub fn new(order: usize, levels: Vec<Membership>, cuts: Vec<CrispMatrix>) -> Result<Self> {
        if cuts.is_empty() {
            return Err(Error::InvalidChain("a chain has at least one cut".into()));
        }
        if levels.len() != cuts.len() {
            return Err(Error::InvalidChain(format!(
                "{} levels for {} cuts",
                levels.len(),
                cuts.len()
            )));
        }
        if levels.iter().any(Membership::is_zero) {
            return Err(Error::InvalidChain("levels must be positive".into()));
        }
        if levels.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidChain("levels must strictly decrease".into()));
        }
        check_cuts(order, &cuts)?;
        Ok(CutChain { order, levels, cuts })
    }

    /// The cuts of `f` at each of its distinct positive values, preceded by
    /// `O` at level 1 when no entry equals 1. The all-zero matrix gives the
    /// single cut `O` at level 1.
    pub fn decompose(f: &FuzzyMatrix) -> Self {
        let mut values: Vec<&Membership> = f.entries().iter().filter(|a| !a.is_zero()).collect();
        values.sort_by(|a, b| b.cmp(a));
        values.dedup();

        let mut levels = Vec::with_capacity(values.len() + 1);
        let mut cuts = Vec::with_capacity(values.len() + 1);
        if values.first().map_or(true, |v| !v.is_one()) {
            levels.push(Membership::one());
            cuts.push(CrispMatrix::empty(f.order()));
        }
        for v in values {
            cuts.push(cut_where(f, |a| a >= v));
            levels.push(v.clone());
        }
        CutChain {
            order: f.order(),
            levels,
            cuts,
        }
    }

    /// Rebuilds the matrix as the union of `α_i · χ(cut_i)`: each cell takes
    /// the largest level whose cut contains it, or 0.
    pub fn reconstruct(&self) -> FuzzyMatrix {
        let entries = (0..self.order * self.order)
            .map(|c| {
                self.cuts
                    .iter()
                    .position(|cut| cut.get(c))
                    .map_or_else(Membership::zero, |i| self.levels[i].clone())
            })
            .collect();
        FuzzyMatrix::from_entries(self.order, entries).expect("entry count matches order")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn levels(&self) -> &[Membership] {
        &self.levels
    }

    pub fn cuts(&self) -> &[CrispMatrix] {
        &self.cuts
    }

    /// The chain length `k` (number of proper inclusions).
    pub fn k(&self) -> usize {
        self.cuts.len() - 1
    }

    pub fn signature(&self) -> ChainSignature {
        ChainSignature {
            order: self.order,
            cuts: self.cuts.clone(),
        }
    }
}

fn check_cuts(order: usize, cuts: &[CrispMatrix]) -> Result<()> {
    if let Some(bad) = cuts.iter().find(|c| c.order() != order) {
        return Err(Error::OrderMismatch {
            left: order,
            right: bad.order(),
        });
    }
    for w in cuts.windows(2) {
        if !w[0].is_proper_subset(&w[1])? {
            return Err(Error::InvalidChain(format!(
                "{} is not a proper subset of {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// The ascending chain of distinct weak cuts of a fuzzy matrix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChainSignature {
    order: usize,
    cuts: Vec<CrispMatrix>,
}

#[derive(Serialize, Deserialize)]
struct SignatureJson {
    n: usize,
    k: usize,
    cuts: Vec<String>,
    o_rooted: bool,
    j_rooted: bool,
}

impl ChainSignature {
    pub fn new(order: usize, cuts: Vec<CrispMatrix>) -> Result<Self> {
        if cuts.is_empty() {
            return Err(Error::InvalidChain("a signature has at least one cut".into()));
        }
        check_cuts(order, &cuts)?;
        Ok(ChainSignature { order, cuts })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cuts(&self) -> &[CrispMatrix] {
        &self.cuts
    }

    pub fn k(&self) -> usize {
        self.cuts.len() - 1
    }

    pub fn rootedness(&self) -> Rootedness {
        Rootedness {
            o_rooted: self.cuts[0].is_empty(),
            j_rooted: self.cuts[self.cuts.len() - 1].is_full(),
        }
    }

    /// Attaches the levels `(k+1-i)/(k+1)` for `i = 0..=k`.
    pub fn canonical_chain(&self) -> CutChain {
        let denom = self.cuts.len() as i64;
        let levels = (0..denom)
            .map(|i| Membership::ratio(denom - i, denom).expect("level lies in (0, 1]"))
            .collect();
        CutChain {
            order: self.order,
            levels,
            cuts: self.cuts.clone(),
        }
    }

    /// Deterministic member of the class this signature describes.
    pub fn representative(&self) -> FuzzyMatrix {
        self.canonical_chain().reconstruct()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let r = self.rootedness();
        let wire = SignatureJson {
            n: self.order,
            k: self.k(),
            cuts: self.cuts.iter().map(CrispMatrix::to_bitstring).collect(),
            o_rooted: r.o_rooted,
            j_rooted: r.j_rooted,
        };
        serde_json::to_value(wire).expect("signature JSON is always serializable")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let wire: SignatureJson = serde_json::from_str(json)?;
        let cuts = wire
            .cuts
            .iter()
            .map(|b| CrispMatrix::from_bitstring(b))
            .collect::<Result<Vec<_>>>()?;
        let sig = Self::new(wire.n, cuts)?;
        let r = sig.rootedness();
        if sig.k() != wire.k || r.o_rooted != wire.o_rooted || r.j_rooted != wire.j_rooted {
            return Err(Error::InvalidChain("declared k or rootedness disagrees with cuts".into()));
        }
        Ok(sig)
    }
}

impl Serialize for ChainSignature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

pub fn signature(f: &FuzzyMatrix) -> ChainSignature {
    CutChain::decompose(f).signature()
}

fn check_orders(a: &FuzzyMatrix, b: &FuzzyMatrix) -> Result<()> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    Ok(())
}

/// Decides equivalence from the entries: same strict-order pattern over all
/// cell pairs and the same cells equal to exactly 1 and exactly 0.
pub fn equivalent_direct(a: &FuzzyMatrix, b: &FuzzyMatrix) -> Result<bool> {
    check_orders(a, b)?;
    let (ea, eb) = (a.entries(), b.entries());
    for (x, y) in ea.iter().zip(eb) {
        if x.is_one() != y.is_one() || x.is_zero() != y.is_zero() {
            return Ok(false);
        }
    }
    for c in 0..ea.len() {
        for d in 0..ea.len() {
            if (ea[c] > ea[d]) != (eb[c] > eb[d]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Decides equivalence by comparing the sets of distinct weak cuts.
pub fn equivalent_cuts(a: &FuzzyMatrix, b: &FuzzyMatrix) -> Result<bool> {
    check_orders(a, b)?;
    Ok(signature(a) == signature(b))
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceClass {
    pub signature: ChainSignature,
    pub representative: FuzzyMatrix,
    /// Input indices, ascending.
    pub members: Vec<usize>,
}

/// Classes in order of first appearance in the corpus.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct Classification {
    pub classes: Vec<EquivalenceClass>,
}

impl Classification {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("classification JSON is always serializable")
    }
}

/// Partitions a corpus of same-order matrices into equivalence classes.
///
/// Signatures are computed on the current rayon pool; grouping is serial so
/// the result does not depend on scheduling.
pub fn classify_corpus(fs: &[FuzzyMatrix]) -> Result<Classification> {
    let first = fs.first().ok_or(Error::EmptyCorpus)?.order();
    if let Some(bad) = fs.iter().find(|f| f.order() != first) {
        return Err(Error::MixedOrders {
            first,
            other: bad.order(),
        });
    }
    let signatures: Vec<ChainSignature> = fs.par_iter().map(signature).collect();

    let mut index: HashMap<&ChainSignature, usize> = HashMap::new();
    let mut classes: Vec<EquivalenceClass> = Vec::new();
    for (i, sig) in signatures.iter().enumerate() {
        let slot = *index.entry(sig).or_insert_with(|| {
            classes.push(EquivalenceClass {
                signature: sig.clone(),
                representative: sig.representative(),
                members: Vec::new(),
            });
            classes.len() - 1
        });
        classes[slot].members.push(i);
    }
    Ok(Classification { classes })
}

/// Every order-`order` matrix whose entries come from `grid`, in row-major
/// odometer order (last cell varies fastest).
pub fn grid_corpus(order: usize, grid: &[Membership]) -> Vec<FuzzyMatrix> {
    let cells = order * order;
    let total = grid.len().pow(cells as u32);
    (0..total)
        .map(|mut x| {
            let mut entries = vec![Membership::zero(); cells];
            for slot in entries.iter_mut().rev() {
                *slot = grid[x % grid.len()].clone();
                x /= grid.len();
            }
            FuzzyMatrix::from_entries(order, entries).expect("entry count matches order")
        })
        .collect()
}

/// `{0, 1/(t+1), …, t/(t+1), 1}`: the endpoints plus `t` interior points.
pub fn uniform_grid(interior: usize) -> Vec<Membership> {
    let denom = BigRational::from_integer((interior as i64 + 1).into());
    (0..=interior + 1)
        .map(|i| {
            let v = BigRational::from_integer((i as i64).into()) / &denom;
            Membership::from_rational(v).expect("grid point lies in [0, 1]")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fm(rows: &[&[&str]]) -> FuzzyMatrix {
        FuzzyMatrix::parse_rows(rows).unwrap()
    }

    fn v(s: &str) -> Membership {
        s.parse().unwrap()
    }

    fn crisp(bits: &str) -> CrispMatrix {
        CrispMatrix::from_bitstring(bits).unwrap()
    }

    #[test]
    fn weak_cuts() {
        let f = fm(&[&["0.3", "0.7"], &["0.7", "1"]]);
        assert_eq!(alpha_cut(&f, &v("0.5")).unwrap(), crisp("0111"));
        assert_eq!(alpha_cut(&f, &v("1")).unwrap(), crisp("0001"));
        let g = fm(&[&["0.3", "0.7"], &["0.7", "0.9"]]);
        assert_eq!(alpha_cut(&g, &v("0.91")).unwrap(), CrispMatrix::empty(2));
        assert!(alpha_cut(&f, &v("0")).is_err());
    }

    #[test]
    fn strong_cuts() {
        let half = fm(&[&["0.5"]]);
        assert_eq!(strong_alpha_cut(&half, &v("0.5")).unwrap(), CrispMatrix::empty(1));
        assert_eq!(strong_alpha_cut(&half, &v("0")).unwrap(), CrispMatrix::full(1));
        let f = fm(&[&["0", "1"], &["1", "1"]]);
        assert_eq!(strong_alpha_cut(&f, &v("0")).unwrap(), crisp("0111"));
        assert!(strong_alpha_cut(&f, &v("1")).is_err());
    }

    #[test]
    fn signatures() {
        assert_eq!(signature(&fm(&[&["0.5"]])).cuts(), &[crisp("0"), crisp("1")]);
        assert_eq!(signature(&fm(&[&["1"]])).cuts(), &[crisp("1")]);
        assert_eq!(
            signature(&fm(&[&["0.3", "0.7"], &["0.7", "1"]])).cuts(),
            &[crisp("0001"), crisp("0111"), crisp("1111")]
        );
        let zero = fm(&[&["0", "0"], &["0", "0"]]);
        assert_eq!(signature(&zero).cuts(), &[CrispMatrix::empty(2)]);
    }

    #[test]
    fn levels() {
        assert_eq!(k_level(&fm(&[&["0", "1"], &["1", "0"]])), 0);
        assert_eq!(k_level(&fm(&[&["0.5"]])), 1);
        assert_eq!(k_level(&fm(&[&["0.1", "0.2"], &["0.3", "0.4"]])), 4);
        assert_eq!(k_level(&fm(&[&["0.5", "1/2"], &["0.5", "1"]])), 1);
    }

    #[test]
    fn rooted() {
        let r = rootedness(&fm(&[&["0.5"]]));
        assert!(r.o_rooted && r.j_rooted);
        let r = rootedness(&fm(&[&["0", "0"], &["0", "0"]]));
        assert!(r.o_rooted && !r.j_rooted);
        let r = rootedness(&fm(&[&["1", "0.5"], &["0.5", "0"]]));
        assert!(!r.o_rooted && !r.j_rooted);
    }

    #[test]
    fn reconstruction() {
        let one = CutChain::new(1, vec![v("1")], vec![crisp("1")]).unwrap();
        assert_eq!(one.reconstruct(), fm(&[&["1"]]));
        let half = CutChain::new(1, vec![v("1"), v("0.5")], vec![crisp("0"), crisp("1")]).unwrap();
        assert_eq!(half.reconstruct(), fm(&[&["0.5"]]));
        let f = fm(&[&["0.3", "0"], &["0.7", "0.3"]]);
        assert_eq!(CutChain::decompose(&f).reconstruct(), f);
    }

    #[test]
    fn chain_validation() {
        let o = crisp("0000");
        let j = crisp("1111");
        assert!(CutChain::new(2, vec![v("1"), v("0.5")], vec![o.clone(), j.clone()]).is_ok());
        assert!(CutChain::new(2, vec![v("0.5"), v("1")], vec![o.clone(), j.clone()]).is_err());
        assert!(CutChain::new(2, vec![v("1"), v("0")], vec![o.clone(), j.clone()]).is_err());
        assert!(CutChain::new(2, vec![v("1"), v("0.5")], vec![j.clone(), o.clone()]).is_err());
        assert!(CutChain::new(2, vec![v("1"), v("0.5")], vec![j.clone(), j.clone()]).is_err());
        assert!(CutChain::new(2, vec![v("1")], vec![o.clone(), j.clone()]).is_err());
        assert!(CutChain::new(2, vec![], vec![]).is_err());
        assert!(CutChain::new(3, vec![v("1")], vec![o]).is_err());
    }

    #[test]
    fn equivalence_examples() {
        let cases = [
            (fm(&[&["0.3", "0.7"], &["0.7", "1"]]), fm(&[&["0.1", "0.5"], &["0.5", "1"]]), true),
            (fm(&[&["1"]]), fm(&[&["0.9"]]), false),
            (fm(&[&["0"]]), fm(&[&["0.1"]]), false),
            (fm(&[&["0.5"]]), fm(&[&["0.7"]]), true),
            (fm(&[&["0.5"]]), fm(&[&["0"]]), false),
        ];
        for (a, b, expected) in cases {
            assert_eq!(equivalent_direct(&a, &b).unwrap(), expected, "{a:?} {b:?}");
            assert_eq!(equivalent_cuts(&a, &b).unwrap(), expected, "{a:?} {b:?}");
        }
        let small = fm(&[&["1"]]);
        let big = fm(&[&["1", "1"], &["1", "1"]]);
        assert!(equivalent_direct(&small, &big).is_err());
        assert!(equivalent_cuts(&small, &big).is_err());
    }

    #[test]
    fn signature_json() {
        let sig = signature(&fm(&[&["0.3", "0.7"], &["0.7", "1"]]));
        let json = sig.to_json_value().to_string();
        assert_eq!(
            json,
            r#"{"cuts":["0001","0111","1111"],"j_rooted":true,"k":2,"n":2,"o_rooted":false}"#
        );
        assert_eq!(ChainSignature::from_json(&json).unwrap(), sig);
        assert!(ChainSignature::from_json(r#"{"cuts":["1111","0001"],"j_rooted":true,"k":1,"n":2,"o_rooted":false}"#).is_err());
    }

    #[test]
    fn representatives_are_canonical() {
        let sig = signature(&fm(&[&["0.3", "0"], &["0.7", "0.3"]]));
        let rep = sig.representative();
        assert_eq!(rep, fm(&[&["1/3", "0"], &["2/3", "1/3"]]));
        assert_eq!(signature(&rep), sig);
        let sig = signature(&fm(&[&["1", "0.2"], &["0.2", "0.2"]]));
        assert_eq!(sig.representative(), fm(&[&["1", "0.5"], &["0.5", "0.5"]]));
    }

    #[test]
    fn classify_small_grids() {
        let c = classify_corpus(&grid_corpus(1, &uniform_grid(1))).unwrap();
        assert_eq!(c.class_count(), 3);
        let c = classify_corpus(&grid_corpus(2, &uniform_grid(0))).unwrap();
        assert_eq!(c.class_count(), 16);
        assert!(matches!(classify_corpus(&[]), Err(Error::EmptyCorpus)));
        let mixed = [fm(&[&["1"]]), fm(&[&["1", "0"], &["0", "1"]])];
        assert!(matches!(classify_corpus(&mixed), Err(Error::MixedOrders { first: 1, other: 2 })));
    }
}
