use num_bigint::BigInt;
use rustc_hash::FxHashMap;

use super::{Nat, SeriesKey, TruncatedSeries, YExps};
use crate::error::{EngineError, Result};

/// Packs a bounded exponent vector into one `u64`, one bit field per
/// variable. Packing is additive: `pack(a) + pack(b) = pack(a + b)` as long
/// as every sum stays within its field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPacker {
    shifts: Vec<u32>,
    caps: Vec<u32>,
}

impl KeyPacker {
    /// Fields wide enough for `0..=caps[i]`.
    pub fn new(caps: &[u32]) -> Result<Self> {
        let mut shifts = Vec::with_capacity(caps.len());
        let mut used = 0u32;
        for &c in caps {
            shifts.push(used);
            used += 32 - c.leading_zeros();
        }
        if used > 64 {
            return Err(EngineError::InvalidArgument(format!(
                "exponent caps {caps:?} need {used} bits, more than a packed key holds"
            )));
        }
        Ok(KeyPacker { shifts, caps: caps.to_vec() })
    }

    /// Caps `M·θ_i`, enough for every term of a principal-subspace character
    /// truncated at `M`.
    pub fn for_character(highest_root: &[u32], truncation: u32) -> Result<Self> {
        let caps: Vec<u32> = highest_root.iter().map(|&t| t * truncation).collect();
        Self::new(&caps)
    }

    pub fn rank(&self) -> usize {
        self.caps.len()
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    /// `None` when some entry exceeds its cap.
    pub fn pack(&self, y: &[u32]) -> Option<u64> {
        let mut key = 0u64;
        for ((&v, &cap), &s) in y.iter().zip(&self.caps).zip(&self.shifts) {
            if v > cap {
                return None;
            }
            key |= (v as u64) << s;
        }
        Some(key)
    }

    pub fn unpack(&self, key: u64) -> YExps {
        let mut y = YExps::with_capacity(self.caps.len());
        for (i, &s) in self.shifts.iter().enumerate() {
            let width = self.shifts.get(i + 1).copied().unwrap_or(64) - s;
            let mask = if width >= 64 { u64::MAX } else { (1u64 << width) - 1 };
            y.push(((key >> s) & mask) as u32);
        }
        y
    }
}

/// [`super::LevelAccumulator`] keyed by packed exponent vectors. Counts live
/// in machine words and spill into `overflow` when a word would wrap.
#[derive(Debug, Clone)]
pub struct PackedAccumulator {
    levels: Vec<FxHashMap<u64, u64>>,
    overflow: Vec<FxHashMap<u64, Nat>>,
}

impl PackedAccumulator {
    pub fn new(truncation: u32) -> Self {
        let n = truncation as usize + 1;
        PackedAccumulator { levels: vec![FxHashMap::default(); n], overflow: vec![FxHashMap::default(); n] }
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn add_u64(&mut self, q: u32, key: u64, c: u64) {
        let Some(level) = self.levels.get_mut(q as usize) else { return };
        let slot = level.entry(key).or_insert(0);
        match slot.checked_add(c) {
            Some(v) => *slot = v,
            None => {
                let spilled = std::mem::take(slot);
                let big = self.overflow[q as usize].entry(key).or_default();
                *big += spilled;
                *big += c;
            }
        }
    }

    pub fn add(&mut self, q: u32, key: u64, c: &Nat) {
        match c.to_u64() {
            Some(v) => self.add_u64(q, key, v),
            None => {
                if let Some(level) = self.overflow.get_mut(q as usize) {
                    *level.entry(key).or_default() += c;
                }
            }
        }
    }

    pub fn merge(&mut self, other: PackedAccumulator) {
        for (q, level) in other.levels.into_iter().enumerate() {
            if self.levels[q].is_empty() {
                self.levels[q] = level;
                continue;
            }
            for (k, c) in level {
                self.add_u64(q as u32, k, c);
            }
        }
        for (q, level) in other.overflow.into_iter().enumerate() {
            for (k, c) in level {
                *self.overflow[q].entry(k).or_default() += &c;
            }
        }
    }

    pub fn into_series(self, packer: &KeyPacker) -> TruncatedSeries {
        let truncation = (self.levels.len() - 1) as u32;
        let mut s = TruncatedSeries::zero(packer.rank(), truncation);
        for (q, level) in self.levels.into_iter().enumerate() {
            for (k, c) in level {
                s.add_term(SeriesKey { q: q as u32, y: packer.unpack(k) }, BigInt::from(c));
            }
        }
        for (q, level) in self.overflow.into_iter().enumerate() {
            for (k, c) in level {
                s.add_term(SeriesKey { q: q as u32, y: packer.unpack(k) }, BigInt::from(c.to_biguint()));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_is_additive() {
        let p = KeyPacker::new(&[3, 10, 0, 7]).unwrap();
        let a = p.pack(&[1, 4, 0, 3]).unwrap();
        let b = p.pack(&[2, 6, 0, 4]).unwrap();
        assert_eq!(p.unpack(a + b).as_slice(), &[3, 10, 0, 7]);
        assert_eq!(p.pack(&[4, 0, 0, 0]), None);
    }

    #[test]
    fn rejects_too_many_bits() {
        assert!(KeyPacker::new(&[u32::MAX, u32::MAX, 1]).is_err());
        assert!(KeyPacker::new(&[255; 8]).is_ok());
    }

    #[test]
    fn accumulates_into_series() {
        let p = KeyPacker::new(&[5, 5]).unwrap();
        let mut a = PackedAccumulator::new(2);
        a.add_u64(1, p.pack(&[1, 0]).unwrap(), 2);
        let mut b = PackedAccumulator::new(2);
        b.add_u64(1, p.pack(&[1, 0]).unwrap(), 3);
        b.add_u64(2, p.pack(&[0, 2]).unwrap(), 1);
        b.add_u64(3, 0, 9);
        a.merge(b);
        assert_eq!(a.into_series(&p).to_text(), "5*q*y1 + q^2*y2^2");
    }

    #[test]
    fn spills_past_a_machine_word() {
        let p = KeyPacker::new(&[1]).unwrap();
        let mut a = PackedAccumulator::new(0);
        a.add_u64(0, 1, u64::MAX);
        a.add_u64(0, 1, 2);
        a.add_u64(0, 1, 3);
        let want = BigInt::from(u64::MAX) + 5;
        assert_eq!(a.into_series(&p).to_text(), format!("{want}*y1"));
    }
}
