use super::monomial::QPMonomial;
use super::weight::{Partner, WeightSpec};
use crate::error::{EngineError, Result};
use crate::lie_data::RootSystemData;

/// Energy gap between adjacent quasi-particles of equal charge:
/// `m_{p+1} ≤ m_p − 2n`.
pub fn c1_satisfied(block: &[(u32, i64)]) -> bool {
    block.windows(2).all(|w| w[0].0 != w[1].0 || w[1].1 <= w[0].1 - 2 * w[0].0 as i64)
}

/// Largest admissible mode for a charge-`n` quasi-particle at position `p`
/// (1-based) of color `color`, given the charges of all colors.
pub fn c2_bound_from_charges(
    partners: &[Partner],
    charges: &dyn Fn(usize) -> Vec<u32>,
    spec: &WeightSpec,
    color: usize,
    p: usize,
    n: u32,
) -> i64 {
    let n64 = n as i64;
    let mut b = -n64 - 2 * (p as i64 - 1) * n64;
    for partner in partners {
        for c in charges(partner.color) {
            b += (partner.mult as i64 * c as i64).min(n64);
        }
    }
    b - spec.rectangular_shift(color, n) as i64
}

fn check_position(m: &QPMonomial, color: usize, p: usize) -> Result<()> {
    if color == 0 || color > m.rank() {
        return Err(EngineError::InvalidArgument(format!("color {color} out of range 1..={}", m.rank())));
    }
    if p == 0 || p > m.block(color).len() {
        return Err(EngineError::InvalidArgument(format!(
            "position {p} out of range for color {color} with {} quasi-particles",
            m.block(color).len()
        )));
    }
    Ok(())
}

/// Maximal admissible `m_{p,i}` for the quasi-particle at position `p` of
/// color `color` in `m`.
pub fn c2_bound(rs: &RootSystemData, spec: &WeightSpec, m: &QPMonomial, color: usize, p: usize) -> Result<i64> {
    if m.rank() != rs.rank() {
        return Err(EngineError::RankMismatch { left: rs.rank(), right: m.rank() });
    }
    check_position(m, color, p)?;
    let partners = spec.partners(rs)?;
    let charges = |c: usize| m.block(c).iter().map(|(n, _)| *n).collect::<Vec<u32>>();
    let n = m.block(color)[p - 1].0;
    Ok(c2_bound_from_charges(&partners[color - 1], &charges, spec, color, p, n))
}

/// Every charge of color `i` is at most `kν_i`.
pub fn c3_satisfied(rs: &RootSystemData, k: u32, m: &QPMonomial) -> bool {
    (1..=m.rank().min(rs.rank())).all(|i| m.block(i).iter().all(|(n, _)| *n <= k * rs.nu_of(i)))
}

/// All difference conditions of the chosen mode.
pub fn satisfies_all(rs: &RootSystemData, spec: &WeightSpec, m: &QPMonomial) -> Result<bool> {
    if m.rank() != rs.rank() {
        return Err(EngineError::RankMismatch { left: rs.rank(), right: m.rank() });
    }
    let partners = spec.partners(rs)?;
    if let Some(k) = spec.level() {
        if !c3_satisfied(rs, k, m) {
            return Ok(false);
        }
    }
    let charges = |c: usize| m.block(c).iter().map(|(n, _)| *n).collect::<Vec<u32>>();
    for i in 1..=m.rank() {
        let block = m.block(i);
        if !c1_satisfied(block) {
            return Ok(false);
        }
        for (p, &(n, mode)) in block.iter().enumerate() {
            if mode > c2_bound_from_charges(&partners[i - 1], &charges, spec, i, p + 1, n) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_data::{build_root_system, AlgebraSpec, Family};

    fn rs(f: Family, l: usize) -> RootSystemData {
        build_root_system(AlgebraSpec::new(f, l).unwrap()).unwrap()
    }

    #[test]
    fn c1_examples() {
        assert!(c1_satisfied(&[(1, -1), (1, -3)]));
        assert!(!c1_satisfied(&[(1, -1), (1, -2)]));
        assert!(c1_satisfied(&[(2, -5)]));
        assert!(c1_satisfied(&[(2, -2), (1, -1)]));
    }

    #[test]
    fn c2_f4_cross_term() {
        let f4 = rs(Family::F, 4);
        let m = QPMonomial::new(vec![vec![], vec![(1, -1)], vec![(2, -1)], vec![]]).unwrap();
        assert_eq!(c2_bound(&f4, &WeightSpec::Standard { k: 1 }, &m, 3, 1).unwrap(), 0);
    }

    #[test]
    fn c2_first_color_has_no_cross_term() {
        let a3 = rs(Family::A, 3);
        let m = QPMonomial::new(vec![vec![(3, -9)], vec![(1, -1)], vec![]]).unwrap();
        assert_eq!(c2_bound(&a3, &WeightSpec::GenericVerma, &m, 1, 1).unwrap(), -3);
    }

    #[test]
    fn c2_rectangular_shift() {
        let d4 = rs(Family::D, 4);
        let m = QPMonomial::new(vec![vec![(2, -3)], vec![], vec![], vec![]]).unwrap();
        let w = WeightSpec::Rectangular { k0: 1, j: 1, kj: 1 };
        assert_eq!(c2_bound(&d4, &w, &m, 1, 1).unwrap(), -3);
        assert!(c2_bound(&d4, &WeightSpec::Rectangular { k0: 1, j: 2, kj: 1 }, &m, 1, 1).is_err());
    }

    #[test]
    fn c2_rejects_alt_e_outside_e() {
        let d4 = rs(Family::D, 4);
        let m = QPMonomial::new(vec![vec![(1, -1)], vec![], vec![], vec![]]).unwrap();
        assert!(c2_bound(&d4, &WeightSpec::AltE { k: 1 }, &m, 1, 1).is_err());
    }

    #[test]
    fn c2_position_term() {
        let a1 = rs(Family::A, 1);
        let m = QPMonomial::new(vec![vec![(2, -2), (1, -1), (1, -3)]]).unwrap();
        let w = WeightSpec::GenericVerma;
        assert_eq!(c2_bound(&a1, &w, &m, 1, 1).unwrap(), -2);
        assert_eq!(c2_bound(&a1, &w, &m, 1, 2).unwrap(), -3);
        assert_eq!(c2_bound(&a1, &w, &m, 1, 3).unwrap(), -5);
    }

    #[test]
    fn rectangular_matches_standard_below_k0() {
        let d5 = rs(Family::D, 5);
        for n in 1..=3u32 {
            let m = QPMonomial::new(vec![vec![(n, -9)], vec![(2, -1)], vec![], vec![(1, -1)], vec![(n, -9)]]).unwrap();
            for (color, j) in [(1, 1), (5, 5), (5, 4)] {
                let rect = WeightSpec::Rectangular { k0: 3, j, kj: 1 };
                assert_eq!(
                    c2_bound(&d5, &rect, &m, color, 1).unwrap(),
                    c2_bound(&d5, &WeightSpec::Standard { k: 3 }, &m, color, 1).unwrap()
                );
            }
        }
    }

    #[test]
    fn c3_examples() {
        let f4 = rs(Family::F, 4);
        let m3 = QPMonomial::new(vec![vec![], vec![], vec![(2, -1)], vec![]]).unwrap();
        let m1 = QPMonomial::new(vec![vec![(2, -1)], vec![], vec![], vec![]]).unwrap();
        assert!(c3_satisfied(&f4, 1, &m3));
        assert!(!c3_satisfied(&f4, 1, &m1));
        assert!(c3_satisfied(&f4, 1, &QPMonomial::empty(4)));
    }

    #[test]
    fn satisfies_all_examples() {
        let a1 = rs(Family::A, 1);
        let w = WeightSpec::Standard { k: 1 };
        let ok = QPMonomial::new(vec![vec![(1, -1), (1, -3)]]).unwrap();
        let capped = QPMonomial::new(vec![vec![(2, -4)]]).unwrap();
        assert!(satisfies_all(&a1, &w, &ok).unwrap());
        assert!(!satisfies_all(&a1, &w, &capped).unwrap());
        assert!(satisfies_all(&a1, &WeightSpec::GenericVerma, &capped).unwrap());
        for spec in [WeightSpec::GenericVerma, w] {
            assert!(satisfies_all(&a1, &spec, &QPMonomial::empty(1)).unwrap());
        }
    }
}
