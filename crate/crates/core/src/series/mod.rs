//! Exact multivariate power series in `q, y_1, …, y_l`, truncated by
//! `q`-degree, with arbitrary-precision integer coefficients.

mod accum;
mod nat;
mod packed;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Bound;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{EngineError, Result};

pub use accum::LevelAccumulator;
pub use nat::Nat;
pub use packed::{KeyPacker, PackedAccumulator};

/// Exponents of `y_1, …, y_l`.
pub type YExps = SmallVec<[u32; 8]>;

/// A monomial `q^q · y^y`. Ordered by `q`-degree, then lexicographically in `y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeriesKey {
    pub q: u32,
    pub y: YExps,
}

impl SeriesKey {
    pub fn new(q: u32, y: &[u32]) -> Self {
        SeriesKey { q, y: YExps::from_slice(y) }
    }
}

impl fmt::Display for SeriesKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", monomial_text(self.q, &self.y))
    }
}

/// A power series truncated above `q`-degree `truncation`; only nonzero
/// coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    rank: usize,
    truncation: u32,
    terms: BTreeMap<SeriesKey, BigInt>,
}

/// First disagreement between two series in canonical key order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub key: SeriesKey,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl TruncatedSeries {
    pub fn zero(rank: usize, truncation: u32) -> Self {
        TruncatedSeries { rank, truncation, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize, truncation: u32) -> Self {
        let mut s = Self::zero(rank, truncation);
        s.add_term(SeriesKey { q: 0, y: YExps::from_elem(0, rank) }, BigInt::one());
        s
    }

    /// Single term `c · q^q · y^y`; empty if `q` exceeds the truncation.
    pub fn monomial(truncation: u32, q: u32, y: &[u32], c: impl Into<BigInt>) -> Self {
        let mut s = Self::zero(y.len(), truncation);
        s.add_term(SeriesKey::new(q, y), c.into());
        s
    }

    /// Sum of `(q, y, c)` triples; duplicates are added, zero sums and terms
    /// above the truncation are dropped.
    pub fn from_terms<I>(rank: usize, truncation: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Vec<u32>, BigInt)>,
    {
        let mut s = Self::zero(rank, truncation);
        for (q, y, c) in terms {
            if y.len() != rank {
                return Err(EngineError::RankMismatch { left: rank, right: y.len() });
            }
            s.add_term(SeriesKey { q, y: YExps::from_vec(y) }, c);
        }
        Ok(s)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SeriesKey, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, q: u32, y: &[u32]) -> BigInt {
        self.terms.get(&SeriesKey::new(q, y)).cloned().unwrap_or_default()
    }

    /// Terms of `q`-degree exactly `q`.
    pub fn level(&self, q: u32) -> impl Iterator<Item = (&SeriesKey, &BigInt)> {
        let lo = SeriesKey { q, y: YExps::new() };
        let hi = SeriesKey { q: q.saturating_add(1), y: YExps::new() };
        let upper = if q == u32::MAX { Bound::Unbounded } else { Bound::Excluded(hi) };
        self.terms.range((Bound::Included(lo), upper))
    }

    /// Adds `c` to the coefficient at `key`, keeping the invariants.
    pub fn add_term(&mut self, key: SeriesKey, c: BigInt) {
        debug_assert_eq!(key.y.len(), self.rank);
        if key.q > self.truncation || c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Lowers the truncation order, dropping terms above it.
    pub fn truncated(mut self, truncation: u32) -> Self {
        if truncation < self.truncation {
            self.terms.retain(|k, _| k.q <= truncation);
            self.truncation = truncation;
        }
        self
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(EngineError::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let m = self.truncation.min(other.truncation);
        let mut out = self.clone().truncated(m);
        for (k, c) in other.terms.iter().take_while(|(k, _)| k.q <= m) {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let m = self.truncation.min(other.truncation);
        let mut out = Self::zero(self.rank, m);
        for (ka, ca) in self.terms.iter() {
            if ka.q > m {
                break;
            }
            for (kb, cb) in other.terms.iter() {
                let q = ka.q + kb.q;
                if q > m {
                    break;
                }
                let y: YExps = ka.y.iter().zip(kb.y.iter()).map(|(a, b)| a + b).collect();
                out.add_term(SeriesKey { q, y }, ca * cb);
            }
        }
        Ok(out)
    }

    /// Sets every `y_i = 1`, giving a series in `q` alone (rank 0).
    pub fn specialize_y(&self) -> Self {
        let mut out = Self::zero(0, self.truncation);
        for (k, c) in &self.terms {
            out.add_term(SeriesKey { q: k.q, y: YExps::new() }, c.clone());
        }
        out
    }

    /// Coefficients of `q^0 … q^M` after setting every `y_i = 1`.
    pub fn q_coefficients(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.truncation as usize + 1];
        for (k, c) in &self.terms {
            v[k.q as usize] += c;
        }
        v
    }

    /// Walks both series in canonical order and reports the smallest key whose
    /// coefficients differ. Series of different truncation are compared up to
    /// the smaller one.
    pub fn first_difference(&self, other: &Self) -> Option<Mismatch> {
        let m = self.truncation.min(other.truncation);
        let mut a = self.terms.iter().take_while(|(k, _)| k.q <= m).peekable();
        let mut b = other.terms.iter().take_while(|(k, _)| k.q <= m).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return None,
                (Some((ka, ca)), None) => {
                    return Some(Mismatch { key: (*ka).clone(), lhs: (*ca).clone(), rhs: BigInt::zero() })
                }
                (None, Some((kb, cb))) => {
                    return Some(Mismatch { key: (*kb).clone(), lhs: BigInt::zero(), rhs: (*cb).clone() })
                }
                (Some((ka, ca)), Some((kb, cb))) => match ka.cmp(kb) {
                    std::cmp::Ordering::Less => {
                        return Some(Mismatch { key: (*ka).clone(), lhs: (*ca).clone(), rhs: BigInt::zero() })
                    }
                    std::cmp::Ordering::Greater => {
                        return Some(Mismatch { key: (*kb).clone(), lhs: BigInt::zero(), rhs: (*cb).clone() })
                    }
                    std::cmp::Ordering::Equal => {
                        if ca != cb {
                            return Some(Mismatch { key: (*ka).clone(), lhs: (*ca).clone(), rhs: (*cb).clone() });
                        }
                        a.next();
                        b.next();
                    }
                },
            }
        }
    }

    /// In-place multiplication by `1 / (1 - q^shift · y^mon)`.
    pub fn divide_by_one_minus(&mut self, mon: &[u32], shift: u32) -> Result<()> {
        if mon.len() != self.rank {
            return Err(EngineError::RankMismatch { left: self.rank, right: mon.len() });
        }
        if shift == 0 {
            return Err(EngineError::InvalidArgument("shift must be positive".into()));
        }
        let m = self.truncation;
        let mut q = 0u32;
        while q + shift <= m {
            let moved: Vec<(SeriesKey, BigInt)> = self
                .level(q)
                .map(|(k, c)| {
                    let y: YExps = k.y.iter().zip(mon).map(|(a, b)| a + b).collect();
                    (SeriesKey { q: q + shift, y }, c.clone())
                })
                .collect();
            for (k, c) in moved {
                self.add_term(k, c);
            }
            q += 1;
        }
        Ok(())
    }

    /// Human-readable polynomial, e.g. `1 + q*y1 + 2*q^2*y1^2`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = monomial_text(k.q, &k.y);
            if mono == "1" {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }

    /// One `q,y1,…,yl,c` row per term, with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q");
        for i in 1..=self.rank {
            out.push_str(&format!(",y{i}"));
        }
        out.push_str(",c\n");
        for (k, c) in &self.terms {
            out.push_str(&k.q.to_string());
            for e in &k.y {
                out.push_str(&format!(",{e}"));
            }
            out.push_str(&format!(",{c}\n"));
        }
        out
    }
}

fn monomial_text(q: u32, y: &[u32]) -> String {
    let mut parts = Vec::new();
    match q {
        0 => {}
        1 => parts.push("q".to_string()),
        _ => parts.push(format!("q^{q}")),
    }
    for (i, e) in y.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("y{}", i + 1)),
            _ => parts.push(format!("y{}^{e}", i + 1)),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(q^{})", self.to_text(), self.truncation + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    q: u32,
    y: Vec<u32>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    rank: usize,
    truncation: u32,
    terms: Vec<TermRepr>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            rank: self.rank,
            truncation: self.truncation,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| TermRepr { q: k.q, y: k.y.to_vec(), c: c.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(d)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            let c: BigInt = t.c.parse().map_err(|_| D::Error::custom(format!("bad coefficient {:?}", t.c)))?;
            terms.push((t.q, t.y, c));
        }
        TruncatedSeries::from_terms(repr.rank, repr.truncation, terms).map_err(D::Error::custom)
    }
}

pub fn ts_add(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.add(b)
}

pub fn ts_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.mul(b)
}

pub fn ts_specialize_y(a: &TruncatedSeries) -> TruncatedSeries {
    a.specialize_y()
}

/// `∏_{n≥0} (1 − q^{a+n} y^mon)^{-1}` truncated at `truncation`.
pub fn geometric_inverse_factor(mon: &[u32], q_shift: i64, truncation: u32) -> Result<TruncatedSeries> {
    if q_shift < 1 {
        return Err(EngineError::InvalidArgument(format!(
            "q shift must be at least 1 for a truncatable expansion, got {q_shift}"
        )));
    }
    let mut s = TruncatedSeries::one(mon.len(), truncation);
    let mut shift = q_shift as u64;
    while shift <= truncation as u64 {
        s.divide_by_one_minus(mon, shift as u32)?;
        shift += 1;
    }
    Ok(s)
}

/// `1 / (q;q)_r` as a rank-0 series: the coefficient of `q^j` counts
/// partitions of `j` into at most `r` parts.
pub fn inv_q_pochhammer(r: u32, truncation: u32) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(0, truncation);
    for part in 1..=r.min(truncation) {
        s.divide_by_one_minus(&[], part).expect("rank 0, positive shift");
    }
    s
}

/// Coefficients of `1 / (q;q)_r` up to `q^truncation` as machine counters.
pub(crate) fn inv_q_pochhammer_coeffs(r: u32, truncation: u32) -> Vec<Nat> {
    let len = truncation as usize + 1;
    let mut v = vec![Nat::ZERO; len];
    v[0] = Nat::ONE;
    for part in 1..=r.min(truncation) as usize {
        for j in part..len {
            let (lo, hi) = v.split_at_mut(j);
            hi[0] += &lo[j - part];
        }
    }
    v
}
