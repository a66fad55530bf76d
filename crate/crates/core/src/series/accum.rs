use num_bigint::BigInt;
use rustc_hash::FxHashMap;

use super::{Nat, SeriesKey, TruncatedSeries, YExps};

/// Hash-based scratch space for building a large non-negative series one
/// term at a time, bucketed by `q`-degree.
#[derive(Debug, Clone)]
pub struct LevelAccumulator {
    rank: usize,
    levels: Vec<FxHashMap<YExps, Nat>>,
}

impl LevelAccumulator {
    pub fn new(rank: usize, truncation: u32) -> Self {
        LevelAccumulator { rank, levels: vec![FxHashMap::default(); truncation as usize + 1] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn truncation(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Adds `c` at `q^q y^y`; terms above the truncation are ignored.
    pub fn add(&mut self, q: u32, y: &[u32], c: &Nat) {
        if let Some(level) = self.levels.get_mut(q as usize) {
            if let Some(slot) = level.get_mut(y) {
                *slot += c;
            } else if !c.is_zero() {
                level.insert(YExps::from_slice(y), c.clone());
            }
        }
    }

    pub fn add_one(&mut self, q: u32, y: &[u32]) {
        if let Some(level) = self.levels.get_mut(q as usize) {
            match level.get_mut(y) {
                Some(slot) => *slot += 1,
                None => {
                    level.insert(YExps::from_slice(y), Nat::ONE);
                }
            }
        }
    }

    pub fn merge(&mut self, other: LevelAccumulator) {
        debug_assert_eq!(self.levels.len(), other.levels.len());
        for (q, level) in other.levels.into_iter().enumerate() {
            if self.levels[q].is_empty() {
                self.levels[q] = level;
                continue;
            }
            for (y, c) in level {
                self.add(q as u32, &y, &c);
            }
        }
    }

    /// In-place multiplication by `1 / (1 − q^shift · y^mon)`.
    pub fn divide_by_one_minus(&mut self, mon: &[u32], shift: u32) {
        let shift = shift as usize;
        assert!(shift >= 1);
        for q in shift..self.levels.len() {
            let (lo, hi) = self.levels.split_at_mut(q);
            let src = &lo[q - shift];
            let dst = &mut hi[0];
            let mut key = YExps::from_elem(0, self.rank);
            for (y, c) in src {
                for (k, (a, b)) in key.iter_mut().zip(y.iter().zip(mon)) {
                    *k = a + b;
                }
                match dst.get_mut(&key) {
                    Some(slot) => *slot += c,
                    None => {
                        dst.insert(key.clone(), c.clone());
                    }
                }
            }
        }
    }

    pub fn into_series(self) -> TruncatedSeries {
        let truncation = self.truncation();
        let mut s = TruncatedSeries::zero(self.rank, truncation);
        for (q, level) in self.levels.into_iter().enumerate() {
            for (y, c) in level {
                s.add_term(SeriesKey { q: q as u32, y }, BigInt::from(c.to_biguint()));
            }
        }
        s
    }
}
