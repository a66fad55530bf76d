use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::dual::{charge_to_dual, DualChargeCounts};
use crate::error::{EngineError, Result};

/// `x_{nα_i}(m)`: color `i`, charge `n`, mode `m` (energy `−m`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuasiParticle {
    pub color: usize,
    pub charge: u32,
    pub mode: i64,
}

impl QuasiParticle {
    pub fn energy(&self) -> i64 {
        -self.mode
    }
}

/// Per-color charge lists, each non-increasing in the position `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChargeType(pub Vec<Vec<u32>>);

impl ChargeType {
    pub fn new(charges: Vec<Vec<u32>>) -> Result<Self> {
        for block in &charges {
            check_charges(block)?;
        }
        Ok(ChargeType(charges))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn color(&self, color: usize) -> &[u32] {
        &self.0[color - 1]
    }

    pub fn color_type(&self) -> Vec<u32> {
        self.0.iter().map(|b| b.iter().sum()).collect()
    }

    pub fn to_dual(&self) -> DualChargeCounts {
        DualChargeCounts(self.0.iter().map(|b| charge_to_dual(b).expect("validated charges")).collect())
    }
}

pub(crate) fn check_charges(block: &[u32]) -> Result<()> {
    if block.contains(&0) || block.windows(2).any(|w| w[1] > w[0]) {
        return Err(EngineError::NotMonotone(block.to_vec()));
    }
    Ok(())
}

/// A quasi-particle monomial, stored color by color with position `p = 1, 2, …`
/// in each color.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QPMonomial {
    blocks: Vec<Vec<(u32, i64)>>,
}

impl QPMonomial {
    /// Builds a monomial from per-color `(charge, mode)` sequences. Charges
    /// must be positive and non-increasing within each color.
    pub fn new(blocks: Vec<Vec<(u32, i64)>>) -> Result<Self> {
        for b in &blocks {
            let charges: Vec<u32> = b.iter().map(|(n, _)| *n).collect();
            check_charges(&charges)?;
        }
        Ok(QPMonomial { blocks })
    }

    pub fn empty(rank: usize) -> Self {
        QPMonomial { blocks: vec![Vec::new(); rank] }
    }

    /// Groups particles by color, keeping their relative order.
    pub fn from_particles(rank: usize, particles: &[QuasiParticle]) -> Result<Self> {
        let mut blocks = vec![Vec::new(); rank];
        for qp in particles {
            if qp.color == 0 || qp.color > rank {
                return Err(EngineError::InvalidArgument(format!("color {} out of range", qp.color)));
            }
            blocks[qp.color - 1].push((qp.charge, qp.mode));
        }
        Self::new(blocks)
    }

    pub fn rank(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, color: usize) -> &[(u32, i64)] {
        &self.blocks[color - 1]
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|b| b.is_empty())
    }

    pub fn particles(&self) -> impl Iterator<Item = QuasiParticle> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, b)| {
            b.iter().map(move |&(charge, mode)| QuasiParticle { color: i + 1, charge, mode })
        })
    }

    pub fn charge_type(&self) -> ChargeType {
        ChargeType(self.blocks.iter().map(|b| b.iter().map(|(n, _)| *n).collect()).collect())
    }

    pub fn energy_type(&self) -> Vec<Vec<i64>> {
        self.blocks.iter().map(|b| b.iter().map(|(_, m)| *m).collect()).collect()
    }

    pub fn color_type(&self) -> Vec<u32> {
        self.charge_type().color_type()
    }

    pub fn dual_counts(&self) -> DualChargeCounts {
        self.charge_type().to_dual()
    }

    /// `Σ (−m)` over all quasi-particles.
    pub fn total_energy(&self) -> i64 {
        -self.blocks.iter().flatten().map(|(_, m)| *m).sum::<i64>()
    }

    /// `(color, charge, energy)` triples in storage order.
    pub fn triples(&self) -> Vec<(usize, u32, i64)> {
        self.particles().map(|qp| (qp.color, qp.charge, qp.energy())).collect()
    }
}

/// Orders two monomials of the same color type: charge types first, then
/// energy types. Each is read as one sequence starting from the rightmost
/// factor (color 1, position 1), and compared element by element with a
/// proper prefix ranking lower.
pub fn compare_monomials(a: &QPMonomial, b: &QPMonomial) -> Result<Ordering> {
    if a.color_type() != b.color_type() {
        return Err(EngineError::ColorTypeMismatch);
    }
    let flat_charges = |m: &QPMonomial| -> Vec<u32> { m.blocks.iter().flatten().map(|(n, _)| *n).collect() };
    let flat_modes = |m: &QPMonomial| -> Vec<i64> { m.blocks.iter().flatten().map(|(_, e)| *e).collect() };
    Ok(flat_charges(a).cmp(&flat_charges(b)).then_with(|| flat_modes(a).cmp(&flat_modes(b))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1(parts: &[(u32, i64)]) -> QPMonomial {
        QPMonomial::new(vec![parts.to_vec()]).unwrap()
    }

    #[test]
    fn identical_monomials_are_equal() {
        let m = a1(&[(2, -4), (1, -3)]);
        assert_eq!(compare_monomials(&m, &m.clone()).unwrap(), Ordering::Equal);
    }

    #[test]
    fn charge_type_decides_first() {
        let small = a1(&[(1, -1), (1, -3)]);
        let big = a1(&[(2, -2)]);
        assert_eq!(compare_monomials(&small, &big).unwrap(), Ordering::Less);
    }

    #[test]
    fn energy_type_breaks_ties() {
        let lo = a1(&[(1, -1), (1, -4)]);
        let hi = a1(&[(1, -1), (1, -3)]);
        assert_eq!(compare_monomials(&lo, &hi).unwrap(), Ordering::Less);
    }

    #[test]
    fn differing_color_types_rejected() {
        assert_eq!(compare_monomials(&a1(&[(1, -1)]), &a1(&[(2, -2)])), Err(EngineError::ColorTypeMismatch));
    }

    #[test]
    fn rejects_increasing_charges() {
        assert!(QPMonomial::new(vec![vec![(1, -1), (2, -5)]]).is_err());
        assert!(QPMonomial::new(vec![vec![(0, -1)]]).is_err());
    }

    #[test]
    fn accessors() {
        let m = QPMonomial::new(vec![vec![(2, -2), (1, -1)], vec![(3, 1)]]).unwrap();
        assert_eq!(m.color_type(), vec![3, 3]);
        assert_eq!(m.total_energy(), 2);
        assert_eq!(m.triples(), vec![(1, 2, 2), (1, 1, 1), (2, 3, -1)]);
        assert_eq!(m.dual_counts().0, vec![vec![2, 1], vec![1, 1, 1]]);
    }
}
