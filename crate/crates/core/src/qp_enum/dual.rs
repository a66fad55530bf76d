use serde::{Deserialize, Serialize};

use super::monomial::check_charges;
use crate::error::{EngineError, Result};

/// Per color, `r^{(1)} ≥ r^{(2)} ≥ … > 0` where `r^{(n)}` counts the
/// quasi-particles of that color with charge at least `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DualChargeCounts(pub Vec<Vec<u32>>);

impl DualChargeCounts {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// `r_i^{(t)}` with `t` 1-based; zero beyond the support.
    pub fn get(&self, color: usize, t: usize) -> u32 {
        if t == 0 {
            return 0;
        }
        self.0[color - 1].get(t - 1).copied().unwrap_or(0)
    }

    /// `n_i = Σ_t r_i^{(t)}`.
    pub fn color_type(&self) -> Vec<u32> {
        self.0.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn to_charges(&self) -> Vec<Vec<u32>> {
        self.0.iter().map(|r| dual_to_charge(r).expect("valid dual counts")).collect()
    }
}

/// Conjugate partition: entry `n − 1` of the result is `#{p : c_p ≥ n}`.
pub fn charge_to_dual(charges: &[u32]) -> Result<Vec<u32>> {
    check_charges(charges)?;
    let top = charges.first().copied().unwrap_or(0);
    Ok((1..=top).map(|n| charges.iter().take_while(|&&c| c >= n).count() as u32).collect())
}

/// Inverse of [`charge_to_dual`].
pub fn dual_to_charge(dual: &[u32]) -> Result<Vec<u32>> {
    if dual.contains(&0) || dual.windows(2).any(|w| w[1] > w[0]) {
        return Err(EngineError::NotMonotone(dual.to_vec()));
    }
    let count = dual.first().copied().unwrap_or(0);
    Ok((1..=count).map(|p| dual.iter().take_while(|&&r| r >= p).count() as u32).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(charge_to_dual(&[3, 1, 1]).unwrap(), vec![3, 1, 1]);
        assert_eq!(charge_to_dual(&[2, 2]).unwrap(), vec![2, 2]);
        assert_eq!(charge_to_dual(&[4, 1]).unwrap(), vec![2, 1, 1, 1]);
        assert_eq!(charge_to_dual(&[]).unwrap(), Vec::<u32>::new());
        assert_eq!(dual_to_charge(&[2, 1, 1, 1]).unwrap(), vec![4, 1]);
    }

    #[test]
    fn rejects_non_monotone() {
        assert!(charge_to_dual(&[1, 2]).is_err());
        assert!(dual_to_charge(&[1, 3]).is_err());
        assert!(dual_to_charge(&[2, 0]).is_err());
    }

    proptest! {
        #[test]
        fn conjugation_is_an_involution(mut parts in proptest::collection::vec(1u32..=12, 0..=12)) {
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let dual = charge_to_dual(&parts).unwrap();
            prop_assert_eq!(dual.iter().sum::<u32>(), parts.iter().sum::<u32>());
            prop_assert_eq!(dual_to_charge(&dual).unwrap(), parts);
        }
    }
}
