//! Crisp and fuzzy matrices over exact membership values.
//!
//! Cells are addressed row-major: cell `(i, j)` of an order-`n` matrix (both
//! zero-based) has index `i * n + j`. Every serialized support uses this
//! ordering.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact membership degree in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Membership(BigRational);

impl Membership {
    pub fn zero() -> Self {
        Membership(BigRational::zero())
    }

    pub fn one() -> Self {
        Membership(BigRational::one())
    }

    /// `numer / denom`, rejected unless it lies in `[0, 1]`.
    pub fn ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::BadValue(format!("{numer}/{denom}")));
        }
        Self::from_rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_rational(value: BigRational) -> Result<Self> {
        if value.is_negative() || value > BigRational::one() {
            return Err(Error::OutOfUnitInterval(format_rational(&value)));
        }
        Ok(Membership(value))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        Membership(BigRational::one() - &self.0)
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for Membership {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_rational(parse_rational(s)?)
    }
}

impl Serialize for Membership {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Membership {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses `"0.25"`, `".5"`, `"3"` or `"1/4"` into an exact rational.
fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::BadValue(s.to_string());
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = parse_digits(num.trim()).ok_or_else(bad)?;
        let den: BigInt = parse_digits(den.trim()).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (int_part, frac_part) = t.split_once('.').unwrap_or((t, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let int: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        parse_digits(int_part).ok_or_else(bad)?
    };
    if frac_part.is_empty() {
        return Ok(BigRational::from_integer(int));
    }
    let frac: BigInt = parse_digits(frac_part).ok_or_else(bad)?;
    let scale = num_traits::pow(BigInt::from(10u32), frac_part.len());
    Ok(BigRational::new(int * &scale + frac, scale))
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Terminating decimals print as decimals, everything else as `p/q`.
fn format_rational(r: &BigRational) -> String {
    let (numer, denom) = (r.numer(), r.denom());
    if denom.is_one() {
        return numer.to_string();
    }
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let mut rest = denom.clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    while rest.is_multiple_of(&two) {
        rest /= &two;
        twos += 1;
    }
    while rest.is_multiple_of(&five) {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{numer}/{denom}");
    }
    let digits = twos.max(fives);
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = numer.abs() * (&scale / denom);
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if numer.is_negative() { "-" } else { "" };
    format!("{sign}{int}.{frac:0>digits$}")
}

/// A 0/1 matrix, stored as its support set of cells.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CrispMatrix {
    order: usize,
    words: Vec<u64>,
}

impl CrispMatrix {
    /// The null matrix `O`.
    pub fn empty(order: usize) -> Self {
        CrispMatrix {
            order,
            words: vec![0; (order * order).div_ceil(64)],
        }
    }

    /// The unit matrix `J` (every cell set).
    pub fn full(order: usize) -> Self {
        let mut m = Self::empty(order);
        for c in 0..m.cell_count() {
            m.insert(c);
        }
        m
    }

    /// Builds a matrix from zero-based `(row, col)` pairs.
    pub fn from_cells(order: usize, cells: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut m = Self::empty(order);
        for (i, j) in cells {
            if i >= order || j >= order {
                return Err(Error::MalformedMatrix(format!(
                    "cell ({i}, {j}) outside an order-{order} matrix"
                )));
            }
            m.insert(i * order + j);
        }
        Ok(m)
    }

    /// Builds an order-`order` matrix from the low `order²` bits of `mask`;
    /// bit `c` is row-major cell `c`.
    pub fn from_mask(order: usize, mask: u64) -> Result<Self> {
        let cells = order * order;
        if cells > 64 || (cells < 64 && mask >> cells != 0) {
            return Err(Error::MalformedMatrix(format!(
                "mask {mask:#x} does not fit {cells} cells"
            )));
        }
        let mut m = Self::empty(order);
        if cells > 0 {
            m.words[0] = mask;
        }
        Ok(m)
    }

    /// Parses a row-major bitstring such as `"1001"`; its length must be a
    /// perfect square.
    pub fn from_bitstring(bits: &str) -> Result<Self> {
        let len = bits.len();
        let order = (len as f64).sqrt().round() as usize;
        if order * order != len {
            return Err(Error::MalformedMatrix(format!(
                "bitstring length {len} is not a square"
            )));
        }
        let mut m = Self::empty(order);
        for (c, b) in bits.bytes().enumerate() {
            match b {
                b'1' => m.insert(c),
                b'0' => {}
                _ => return Err(Error::MalformedMatrix(format!("bad bit {:?}", b as char))),
            }
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cell_count(&self) -> usize {
        self.order * self.order
    }

    fn insert(&mut self, cell: usize) {
        self.words[cell / 64] |= 1 << (cell % 64);
    }

    /// Whether row-major cell `cell` is in the support.
    pub fn get(&self, cell: usize) -> bool {
        cell < self.cell_count() && self.words[cell / 64] >> (cell % 64) & 1 == 1
    }

    /// Number of cells in the support.
    pub fn cardinality(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.cardinality() == self.cell_count()
    }

    /// Row-major indices of the support.
    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.cell_count()).filter(|&c| self.get(c))
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &CrispMatrix) -> Result<bool> {
        check_orders(self.order, other.order)?;
        Ok(self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0))
    }

    /// `self ⊂ other` (proper inclusion).
    pub fn is_proper_subset(&self, other: &CrispMatrix) -> Result<bool> {
        Ok(self.is_subset(other)? && self != other)
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.cell_count())
            .map(|c| if self.get(c) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for CrispMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

fn check_orders(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::OrderMismatch { left, right });
    }
    Ok(())
}

/// A square matrix of exact membership degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FuzzyMatrix {
    order: usize,
    entries: Vec<Membership>,
}

#[derive(Serialize, Deserialize)]
struct FuzzyMatrixJson {
    n: usize,
    entries: Vec<Vec<Membership>>,
}

impl FuzzyMatrix {
    /// Builds a matrix from its rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: Vec<Vec<Membership>>) -> Result<Self> {
        let order = rows.len();
        let mut entries = Vec::with_capacity(order * order);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != order {
                return Err(Error::MalformedMatrix(format!(
                    "row {} has {} entries, expected {order}",
                    i + 1,
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(FuzzyMatrix { order, entries })
    }

    /// Row-major entries of an order-`order` matrix.
    pub fn from_entries(order: usize, entries: Vec<Membership>) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::MalformedMatrix(format!(
                "{} entries for an order-{order} matrix",
                entries.len()
            )));
        }
        Ok(FuzzyMatrix { order, entries })
    }

    /// Convenience constructor from string rows, e.g. `&[&["0.3", "1/2"], ...]`.
    pub fn parse_rows(rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|v| v.parse()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    /// The crisp matrix read as a fuzzy one.
    pub fn from_crisp(m: &CrispMatrix) -> Self {
        let entries = (0..m.cell_count())
            .map(|c| if m.get(c) { Membership::one() } else { Membership::zero() })
            .collect();
        FuzzyMatrix { order: m.order(), entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[Membership] {
        &self.entries
    }

    /// Entry at zero-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &Membership {
        &self.entries[row * self.order + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Membership]> {
        self.entries.chunks(self.order.max(1)).take(self.order)
    }

    fn zip_with(&self, other: &Self, pick: impl Fn(&Membership, &Membership) -> bool) -> Result<Self> {
        check_orders(self.order, other.order)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| if pick(a, b) { a.clone() } else { b.clone() })
            .collect();
        Ok(FuzzyMatrix { order: self.order, entries })
    }

    /// Cellwise max.
    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a >= b)
    }

    /// Cellwise min.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a <= b)
    }

    /// Cellwise `1 - a`.
    pub fn complement(&self) -> Self {
        FuzzyMatrix {
            order: self.order,
            entries: self.entries.iter().map(Membership::complement).collect(),
        }
    }

    /// `self ⊆ other` in the fuzzy sense: every entry is at most the other's.
    pub fn is_contained_in(&self, other: &Self) -> Result<bool> {
        check_orders(self.order, other.order)?;
        Ok(self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b))
    }

    /// Parses the whitespace grid format: `n` lines of `n` values. Blank
    /// lines are ignored; an input with no values is the order-0 matrix.
    pub fn from_text(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| l.split_whitespace().map(str::parse).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(Membership::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let wire: FuzzyMatrixJson = serde_json::from_str(json)?;
        Self::from_json_value(wire)
    }

    fn from_json_value(wire: FuzzyMatrixJson) -> Result<Self> {
        let m = Self::from_rows(wire.entries)?;
        if m.order != wire.n {
            return Err(Error::MalformedMatrix(format!(
                "declared n = {} but found {} rows",
                wire.n, m.order
            )));
        }
        Ok(m)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let wire = FuzzyMatrixJson {
            n: self.order,
            entries: self.rows().map(<[Membership]>::to_vec).collect(),
        };
        serde_json::to_value(wire).expect("matrix JSON is always serializable")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }
}

impl Serialize for FuzzyMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FuzzyMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = FuzzyMatrixJson::deserialize(d)?;
        Self::from_json_value(wire).map_err(serde::de::Error::custom)
    }
}
