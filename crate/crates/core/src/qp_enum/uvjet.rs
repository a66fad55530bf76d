use super::monomial::QPMonomial;
use crate::error::{EngineError, Result};
use crate::lie_data::{Family, RootSystemData};

fn pair_min(a: &[u32], b: &[u32], scale: u32) -> u64 {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x.min(scale * y) as u64)).sum()
}

/// Checks the five charge identities behind the `F_4` exponent on one
/// monomial: the diagonal sums for every color, and the three cross sums.
pub fn check_uvjet(rs: &RootSystemData, m: &QPMonomial) -> Result<bool> {
    if rs.spec.family() != Family::F || m.rank() != 4 {
        return Err(EngineError::InvalidArgument(format!("uvjet identities are stated for F4, got {}", rs.spec)));
    }
    let charges = m.charge_type();
    let dual = m.dual_counts();
    let n = |i: usize| charges.color(i).to_vec();
    let r = |i: usize, t: usize| dual.get(i, t) as u64;
    let len = |i: usize| dual.0[i - 1].len();

    for i in 1..=4 {
        let lhs: u64 = n(i).iter().enumerate().map(|(p, &c)| (2 * p as u64 + 1) * c as u64).sum();
        let rhs: u64 = (1..=len(i)).map(|t| r(i, t) * r(i, t)).sum();
        if lhs != rhs {
            return Ok(false);
        }
    }
    let cross = |a: usize, b: usize| -> u64 { (1..=len(a).max(len(b))).map(|t| r(a, t) * r(b, t)).sum() };
    if pair_min(&n(2), &n(1), 1) != cross(1, 2) {
        return Ok(false);
    }
    if pair_min(&n(4), &n(3), 1) != cross(3, 4) {
        return Ok(false);
    }
    let rhs5: u64 = (1..=len(2)).map(|t| r(2, t) * (r(3, 2 * t - 1) + r(3, 2 * t))).sum();
    Ok(pair_min(&n(3), &n(2), 2) == rhs5)
}
