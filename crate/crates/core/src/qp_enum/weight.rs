use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::lie_data::{Family, RootSystemData};

/// Which module's principal subspace is being enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum WeightSpec {
    /// Generalized Verma module `N(kΛ_0)`; no charge cap.
    GenericVerma,
    /// Standard module `L(kΛ_0)`.
    Standard { k: u32 },
    /// `L(k_0Λ_0 + k_jΛ_j)` with `Λ_j` of level one.
    Rectangular { k0: u32, j: usize, kj: u32 },
    /// `L(kΛ_0)` in type `E` with the alternative color ordering.
    AltE { k: u32 },
}

/// Colors `(i_1, …, i_l)`, partners `(i″_3, …, i″_l)` and the designated
/// `(j, k)` pair of the alternative `E_l` bases.
struct AltETable {
    order: &'static [usize],
    partner: &'static [usize],
    double: (usize, usize),
}

fn alt_e_table(rank: usize) -> Option<AltETable> {
    match rank {
        8 => Some(AltETable { order: &[1, 7, 2, 3, 4, 5, 6, 8], partner: &[1, 2, 3, 4, 5, 5], double: (7, 2) }),
        7 => Some(AltETable { order: &[1, 6, 5, 4, 3, 2, 7], partner: &[6, 5, 4, 3, 3], double: (6, 1) }),
        6 => Some(AltETable { order: &[6, 5, 4, 3, 2, 1], partner: &[5, 4, 3, 2], double: (4, 1) }),
        _ => None,
    }
}

/// One cross term of the energy bound: color `partner` enters with charges
/// scaled by `mult`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Partner {
    pub color: usize,
    pub mult: u32,
}

impl WeightSpec {
    pub fn name(&self) -> &'static str {
        match self {
            WeightSpec::GenericVerma => "verma",
            WeightSpec::Standard { .. } => "standard",
            WeightSpec::Rectangular { .. } => "rectangular",
            WeightSpec::AltE { .. } => "alt-e",
        }
    }

    /// Level of the weight; `None` for the generalized Verma module.
    pub fn level(&self) -> Option<u32> {
        match *self {
            WeightSpec::GenericVerma => None,
            WeightSpec::Standard { k } | WeightSpec::AltE { k } => Some(k),
            WeightSpec::Rectangular { k0, kj, .. } => Some(k0 + kj),
        }
    }

    /// Checks the weight against the algebra.
    pub fn validate(&self, rs: &RootSystemData) -> Result<()> {
        match *self {
            WeightSpec::GenericVerma => Ok(()),
            WeightSpec::Standard { k } => positive("k", k),
            WeightSpec::AltE { k } => {
                positive("k", k)?;
                if rs.spec.family() != Family::E {
                    return Err(EngineError::InvalidWeight(format!(
                        "alternative E bases need type E, got {}",
                        rs.spec
                    )));
                }
                Ok(())
            }
            WeightSpec::Rectangular { k0, j, kj } => {
                positive("k0", k0)?;
                positive("kj", kj)?;
                if rs.level_one_nodes.is_empty() {
                    return Err(EngineError::InvalidWeight(format!("{} has no rectangular weights", rs.spec)));
                }
                if !rs.level_one_nodes.contains(&j) {
                    return Err(EngineError::InvalidWeight(format!(
                        "node {j} is not a level-one node of {} (allowed: {:?})",
                        rs.spec, rs.level_one_nodes
                    )));
                }
                Ok(())
            }
        }
    }

    /// Charge cap `kν_i` for `color`, if any.
    pub fn charge_cap(&self, rs: &RootSystemData, color: usize) -> Option<u32> {
        self.level().map(|k| k * rs.nu_of(color))
    }

    /// Cross-term partners of every color (index `color − 1`).
    pub fn partners(&self, rs: &RootSystemData) -> Result<Vec<Vec<Partner>>> {
        self.validate(rs)?;
        let l = rs.rank();
        let mut out = vec![Vec::new(); l];
        match self {
            WeightSpec::AltE { .. } => {
                let table = alt_e_table(l).expect("validated type E");
                for jj in 3..=l {
                    let color = table.order[jj - 1];
                    out[color - 1].push(Partner { color: table.partner[jj - 3], mult: 1 });
                    if jj == table.double.0 {
                        out[color - 1].push(Partner { color: table.order[table.double.1 - 1], mult: 1 });
                    }
                }
            }
            _ => {
                for i in 2..=l {
                    let ip = rs.i_prime_of(i).expect("i′ defined for i ≥ 2");
                    out[i - 1].push(Partner { color: ip, mult: rs.mu_of(i).expect("μ defined") });
                }
            }
        }
        Ok(out)
    }

    /// `Σ_{t=1}^{n} δ_{i, j_t}` for a quasi-particle of color `color` and
    /// charge `n`; zero outside the rectangular mode.
    pub fn rectangular_shift(&self, color: usize, charge: u32) -> u32 {
        match *self {
            WeightSpec::Rectangular { k0, j, kj } if color == j => charge.min(k0 + kj).saturating_sub(k0),
            _ => 0,
        }
    }
}

fn positive(name: &str, v: u32) -> Result<()> {
    if v == 0 {
        Err(EngineError::InvalidWeight(format!("{name} must be at least 1")))
    } else {
        Ok(())
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::GenericVerma => write!(f, "verma"),
            WeightSpec::Standard { k } => write!(f, "standard(k={k})"),
            WeightSpec::Rectangular { k0, j, kj } => write!(f, "rectangular(k0={k0},j={j},kj={kj})"),
            WeightSpec::AltE { k } => write!(f, "alt-e(k={k})"),
        }
    }
}
