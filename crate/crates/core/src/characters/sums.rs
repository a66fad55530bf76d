use crate::error::{EngineError, Result};
use crate::lie_data::RootSystemData;
use crate::qp_enum::{DualChargeCounts, EnergyForm, Partner, WeightSpec};
use crate::series::{inv_q_pochhammer_coeffs, KeyPacker, PackedAccumulator, TruncatedSeries};

/// The exponent of `q` in the sum sides, split into its three parts.
#[derive(Debug, Clone)]
pub struct ExponentForm {
    partners: Vec<Vec<Partner>>,
    rect: Option<(u32, usize)>,
}

/// Value of an [`ExponentForm`] on one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentParts {
    pub diagonal: i64,
    pub cross: i64,
    pub rectangular: i64,
}

impl ExponentParts {
    pub fn total(&self) -> i64 {
        self.diagonal - self.cross + self.rectangular
    }
}

impl ExponentForm {
    pub fn new(rs: &RootSystemData, spec: &WeightSpec) -> Result<Self> {
        let rect = match *spec {
            WeightSpec::Rectangular { k0, j, .. } => Some((k0, j)),
            _ => None,
        };
        Ok(ExponentForm { partners: spec.partners(rs)?, rect })
    }

    pub fn evaluate(&self, r: &DualChargeCounts) -> ExponentParts {
        self.evaluate_counts(&r.0)
    }

    /// Same as [`evaluate`](Self::evaluate) on the nonzero parts `r_i` of
    /// each color.
    pub fn evaluate_counts(&self, r: &[Vec<u32>]) -> ExponentParts {
        let diagonal = r.iter().flatten().map(|&v| (v as i64).pow(2)).sum();
        let mut cross = 0i64;
        for (ri, ps) in r.iter().zip(&self.partners) {
            for p in ps {
                let mu = p.mult as usize;
                let outer = &r[p.color - 1];
                for (s, &v) in ri.iter().enumerate() {
                    // r_i^{(s+1)} pairs with r_j^{(t)} for t = ⌈(s+1)/μ⌉
                    if let Some(&w) = outer.get(s / mu) {
                        cross += v as i64 * w as i64;
                    }
                }
            }
        }
        let rectangular = match self.rect {
            Some((k0, j)) => r[j - 1].iter().skip(k0 as usize).map(|&v| v as i64).sum(),
            None => 0,
        };
        ExponentParts { diagonal, cross, rectangular }
    }
}

struct Shard {
    acc: PackedAccumulator,
    error: Option<EngineError>,
    counts: Vec<Vec<u32>>,
    color_type: Vec<u32>,
    poly: Vec<u64>,
    tmp: Vec<u64>,
}

/// `Σ_r q^{E(r)} y^{n(r)} ∏_i ∏_t 1/(q;q)_{r_i^{(t)} − r_i^{(t+1)}}` over the
/// configurations admitted by `spec`.
pub fn sum_side(rs: &RootSystemData, spec: &WeightSpec, truncation: u32) -> Result<TruncatedSeries> {
    spec.validate(rs)?;
    let form = EnergyForm::new(rs, spec)?;
    let exponent = ExponentForm::new(rs, spec)?;
    let packer = KeyPacker::for_character(&rs.highest_root, truncation)?;
    let pochhammer: Vec<Vec<u64>> = (0..=truncation)
        .map(|r| {
            inv_q_pochhammer_coeffs(r, truncation)
                .iter()
                .map(|c| c.to_u64().expect("partition counts fit in u64"))
                .collect()
        })
        .collect();
    let l = rs.rank();
    let shard = form.fold_configs(
        truncation,
        || Shard {
            acc: PackedAccumulator::new(truncation),
            error: None,
            counts: vec![Vec::new(); l],
            color_type: vec![0; l],
            poly: Vec::new(),
            tmp: Vec::new(),
        },
        |sh, r, energy| {
            if sh.error.is_some() {
                return;
            }
            for (i, ri) in sh.counts.iter_mut().enumerate() {
                r.counts_into(i + 1, ri);
            }
            let e = exponent.evaluate_counts(&sh.counts).total();
            if e < 0 || e != energy as i64 {
                sh.error = Some(EngineError::MinimalEnergy(format!(
                    "config {:?}: exponent {e}, enumerator energy {energy}",
                    sh.counts
                )));
                return;
            }
            r.color_type_into(&mut sh.color_type);
            let Some(key) = packer.pack(&sh.color_type) else {
                sh.error = Some(EngineError::InvalidArgument(format!(
                    "color type {:?} exceeds the packed range {:?}",
                    sh.color_type,
                    packer.caps()
                )));
                return;
            };
            let slack = (truncation - energy) as usize;
            if slack == 0 {
                sh.acc.add_u64(energy, key, 1);
                return;
            }
            sh.poly.clear();
            sh.poly.resize(slack + 1, 0);
            sh.poly[0] = 1;
            for ri in &sh.counts {
                for (t, &v) in ri.iter().enumerate() {
                    let next = ri.get(t + 1).copied().unwrap_or(0);
                    let d = (v - next).min(truncation) as usize;
                    if d > 0 {
                        mul_trunc(&mut sh.poly, &pochhammer[d], &mut sh.tmp);
                    }
                }
            }
            for (j, &c) in sh.poly.iter().enumerate() {
                if c != 0 {
                    sh.acc.add_u64(energy + j as u32, key, c);
                }
            }
        },
        |mut a, b| {
            a.acc.merge(b.acc);
            a.error = a.error.or(b.error);
            a
        },
    );
    match shard.error {
        Some(e) => Err(e),
        None => Ok(shard.acc.into_series(&packer)),
    }
}

fn mul_trunc(a: &mut [u64], b: &[u64], tmp: &mut Vec<u64>) {
    tmp.clear();
    tmp.resize(a.len(), 0);
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(a.len() - i) {
            tmp[i + j] = x
                .checked_mul(y)
                .and_then(|v| v.checked_add(tmp[i + j]))
                .expect("per-configuration count fits in u64");
        }
    }
    a.copy_from_slice(tmp);
}

/// Character of the principal subspace of `L(kΛ_0)` as a fermionic sum.
pub fn char_l_sum(rs: &RootSystemData, k: u32, truncation: u32) -> Result<TruncatedSeries> {
    sum_side(rs, &WeightSpec::Standard { k }, truncation)
}

/// Character of the principal subspace of `N(kΛ_0)` as a fermionic sum over
/// finitely supported configurations.
pub fn char_n_sum(rs: &RootSystemData, truncation: u32) -> Result<TruncatedSeries> {
    sum_side(rs, &WeightSpec::GenericVerma, truncation)
}

/// Character of the principal subspace of `L(k_0Λ_0 + k_jΛ_j)`.
pub fn char_rect_sum(rs: &RootSystemData, k0: u32, j: usize, kj: u32, truncation: u32) -> Result<TruncatedSeries> {
    sum_side(rs, &WeightSpec::Rectangular { k0, j, kj }, truncation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_data::{build_root_system, AlgebraSpec, Family};

    fn rs(f: Family, l: usize) -> RootSystemData {
        build_root_system(AlgebraSpec::new(f, l).unwrap()).unwrap()
    }

    fn terms(rank: usize, m: u32, t: &[(u32, &[u32], i64)]) -> TruncatedSeries {
        TruncatedSeries::from_terms(rank, m, t.iter().map(|(q, y, c)| (*q, y.to_vec(), (*c).into()))).unwrap()
    }

    #[test]
    fn a1_level_one() {
        let a1 = rs(Family::A, 1);
        let got = char_l_sum(&a1, 1, 5).unwrap();
        let want = terms(
            1,
            5,
            &[(0, &[0], 1), (1, &[1], 1), (2, &[1], 1), (3, &[1], 1), (4, &[1], 1), (4, &[2], 1), (5, &[1], 1), (5, &[2], 1)],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn a1_level_two_y_squared() {
        let a1 = rs(Family::A, 1);
        let got = char_l_sum(&a1, 2, 5).unwrap();
        let col: Vec<i64> = (0..=5).map(|q| got.coeff(q, &[2]).try_into().unwrap()).collect();
        assert_eq!(col, vec![0, 0, 1, 1, 2, 2]);
    }

    #[test]
    fn a1_verma() {
        let a1 = rs(Family::A, 1);
        assert_eq!(char_n_sum(&a1, 3).unwrap().to_text(), "1 + q*y1 + q^2*y1 + q^2*y1^2 + q^3*y1 + q^3*y1^2 + q^3*y1^3");
    }

    #[test]
    fn zero_truncation_is_one() {
        for (f, l) in [(Family::A, 3), (Family::F, 4), (Family::G, 2)] {
            let r = rs(f, l);
            assert_eq!(char_l_sum(&r, 2, 0).unwrap(), TruncatedSeries::one(l, 0));
            assert_eq!(char_n_sum(&r, 0).unwrap(), TruncatedSeries::one(l, 0));
        }
        let d4 = rs(Family::D, 4);
        assert_eq!(char_rect_sum(&d4, 1, 1, 1, 0).unwrap(), TruncatedSeries::one(4, 0));
    }

    #[test]
    fn d4_rectangular_examples() {
        let d4 = rs(Family::D, 4);
        let s = char_rect_sum(&d4, 1, 1, 1, 6).unwrap();
        assert_eq!(s.coeff(1, &[1, 0, 0, 0]), 1.into());
        // r_1 = (1, 1): exponent 1 + 1 + 1, one partition of zero
        let form = ExponentForm::new(&d4, &WeightSpec::Rectangular { k0: 1, j: 1, kj: 1 }).unwrap();
        let parts = form.evaluate(&DualChargeCounts(vec![vec![1, 1], vec![], vec![], vec![]]));
        assert_eq!(parts, ExponentParts { diagonal: 2, cross: 0, rectangular: 1 });
        assert_eq!(s.coeff(3, &[2, 0, 0, 0]), 1.into());
        assert_eq!(s.coeff(2, &[2, 0, 0, 0]), 0.into());
    }

    #[test]
    fn rectangular_rejects_f4() {
        assert!(char_rect_sum(&rs(Family::F, 4), 1, 1, 1, 3).is_err());
    }

    #[test]
    fn f4_cross_term_uses_doubled_range() {
        let f4 = rs(Family::F, 4);
        let form = ExponentForm::new(&f4, &WeightSpec::Standard { k: 1 }).unwrap();
        let r = DualChargeCounts(vec![vec![], vec![1], vec![1, 1], vec![1, 1]]);
        let parts = form.evaluate(&r);
        // r_2^{(1)}(r_3^{(1)} + r_3^{(2)}) + r_3^{(1)} r_4^{(1)} + r_3^{(2)} r_4^{(2)}
        assert_eq!(parts.cross, 2 + 2);
        assert_eq!(parts.diagonal, 5);
    }
}
