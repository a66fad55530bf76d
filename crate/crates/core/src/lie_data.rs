//! Root-system data for the finite simple Lie algebras under the labeling used
//! throughout the crate.
//!
//! Simple roots are labeled so that `nu` is non-decreasing along `1..=l`:
//! for `B_l` the short root is `α_l`, for `C_l` the long root is `α_1`, for
//! `F_4` the short roots are `α_3, α_4` and for `G_2` the short root is `α_2`.
//! `D_l` is a path `1..l-1` with node `l` attached to `l-2`; `E_6` and `E_7`
//! attach node `l` to node 3 and `E_8` attaches node 8 to node 5.
//!
//! Colors (node labels) are 1-based wherever they appear as labels
//! (`i_prime`, `mu`, `level_one_nodes`); vectors indexed by color use position
//! `i - 1`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};

/// Hard cap on the number of positive roots explored before a Cartan matrix
/// is declared not of finite type.
pub const ROOT_CAP: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            "F" | "f" => Ok(Family::F),
            "G" | "g" => Ok(Family::G),
            other => Err(EngineError::InvalidAlgebra(format!("unknown family {other:?}"))),
        }
    }
}

/// A finite simple Lie algebra given by Cartan family and rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct AlgebraSpec {
    family: Family,
    rank: usize,
}

#[derive(Deserialize)]
struct RawSpec {
    family: Family,
    rank: usize,
}

impl TryFrom<RawSpec> for AlgebraSpec {
    type Error = EngineError;

    fn try_from(raw: RawSpec) -> Result<Self> {
        AlgebraSpec::new(raw.family, raw.rank)
    }
}

impl AlgebraSpec {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(AlgebraSpec { family, rank })
        } else {
            Err(EngineError::InvalidAlgebra(format!("{family}{rank} is not a valid type")))
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }

    /// Closed-form number of positive roots.
    pub fn positive_root_count(&self) -> usize {
        let l = self.rank;
        match self.family {
            Family::A => l * (l + 1) / 2,
            Family::B | Family::C => l * l,
            Family::D => l * (l - 1),
            Family::E => match l {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }

    /// Dimension of the algebra.
    pub fn dimension(&self) -> usize {
        let l = self.rank;
        match self.family {
            Family::A => l * (l + 2),
            Family::B | Family::C => l * (2 * l + 1),
            Family::D => l * (2 * l - 1),
            Family::E => match l {
                6 => 78,
                7 => 133,
                _ => 248,
            },
            Family::F => 52,
            Family::G => 14,
        }
    }

    /// Diagram edges as 1-based node pairs `(i′, i)` with `i′ < i`.
    fn edges(&self) -> Vec<(usize, usize)> {
        let l = self.rank;
        match self.family {
            Family::D => {
                let mut e: Vec<_> = (2..l).map(|i| (i - 1, i)).collect();
                e.push((l - 2, l));
                e
            }
            Family::E => {
                let mut e: Vec<_> = (2..l).map(|i| (i - 1, i)).collect();
                e.push((if l == 8 { 5 } else { 3 }, l));
                e
            }
            _ => (2..=l).map(|i| (i - 1, i)).collect(),
        }
    }

    fn nu(&self) -> Vec<u32> {
        let l = self.rank;
        match self.family {
            Family::A | Family::D | Family::E => vec![1; l],
            Family::B => (1..=l).map(|i| if i == l { 2 } else { 1 }).collect(),
            Family::C => (1..=l).map(|i| if i == 1 { 1 } else { 2 }).collect(),
            Family::F => vec![1, 1, 2, 2],
            Family::G => vec![1, 3],
        }
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// Cartan data, positive roots and the index maps used by the difference
/// conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootSystemData {
    #[serde(flatten)]
    pub spec: AlgebraSpec,
    /// `cartan[i][j] = 2⟨α_i, α_j⟩ / ⟨α_i, α_i⟩`.
    pub cartan: Vec<Vec<i64>>,
    pub nu: Vec<u32>,
    /// `i ↦ i′` for `i = 2..=l`.
    #[serde(serialize_with = "serialize_label_map")]
    pub i_prime: BTreeMap<usize, usize>,
    /// `i ↦ ν_i / ν_{i′}` for `i = 2..=l`.
    #[serde(serialize_with = "serialize_label_map")]
    pub mu: BTreeMap<usize, u32>,
    /// Coefficient vectors over the simple roots, ascending height then
    /// lexicographic.
    pub positive_roots: Vec<Vec<u32>>,
    pub highest_root: Vec<u32>,
    pub level_one_nodes: Vec<usize>,
}

fn serialize_label_map<S, V>(map: &BTreeMap<usize, V>, s: S) -> std::result::Result<S::Ok, S::Error>
where
    S: serde::Serializer,
    V: Serialize,
{
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(map.len()))?;
    for (k, v) in map {
        m.serialize_entry(&k.to_string(), v)?;
    }
    m.end()
}

impl RootSystemData {
    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn nu_of(&self, color: usize) -> u32 {
        self.nu[color - 1]
    }

    pub fn i_prime_of(&self, color: usize) -> Option<usize> {
        self.i_prime.get(&color).copied()
    }

    pub fn mu_of(&self, color: usize) -> Option<u32> {
        self.mu.get(&color).copied()
    }

    /// Whether nodes `a` and `b` (1-based) are joined in the diagram.
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a != b && self.cartan[a - 1][b - 1] != 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("root data serializes")
    }
}

/// Build the full root-system record for `spec`.
pub fn build_root_system(spec: AlgebraSpec) -> Result<RootSystemData> {
    let l = spec.rank;
    let nu = spec.nu();
    let edges = spec.edges();

    // 6⟨α_i, α_j⟩ as integers; long roots have squared length 2.
    let mut form = vec![vec![0i64; l]; l];
    for i in 0..l {
        form[i][i] = 12 / nu[i] as i64;
    }
    for &(a, b) in &edges {
        let v = -6 / nu[a - 1].min(nu[b - 1]) as i64;
        form[a - 1][b - 1] = v;
        form[b - 1][a - 1] = v;
    }
    let cartan: Vec<Vec<i64>> = (0..l)
        .map(|i| (0..l).map(|j| 2 * form[i][j] / form[i][i]).collect())
        .collect();

    let mut i_prime = BTreeMap::new();
    let mut mu = BTreeMap::new();
    for i in 2..=l {
        let ip = match spec.family {
            Family::D if i == l => l - 2,
            Family::E if i == l => {
                if l == 8 {
                    5
                } else {
                    3
                }
            }
            _ => i - 1,
        };
        i_prime.insert(i, ip);
        mu.insert(i, nu[i - 1] / nu[ip - 1]);
    }

    let positive_roots = enumerate_positive_roots(&cartan)?;
    let highest_root = positive_roots
        .iter()
        .max_by_key(|r| r.iter().sum::<u32>())
        .cloned()
        .expect("at least one simple root");

    Ok(RootSystemData {
        spec,
        cartan,
        nu,
        i_prime,
        mu,
        positive_roots,
        highest_root,
        level_one_nodes: level_one_fundamental_nodes(spec),
    })
}

/// Positive roots of a finite-type Cartan matrix, by closure under simple
/// root strings. Returns roots sorted by height, then lexicographically.
pub fn enumerate_positive_roots(cartan: &[Vec<i64>]) -> Result<Vec<Vec<u32>>> {
    let l = cartan.len();
    if l == 0 {
        return Err(EngineError::NotFiniteType("empty matrix".into()));
    }
    for (i, row) in cartan.iter().enumerate() {
        if row.len() != l {
            return Err(EngineError::NotFiniteType("matrix is not square".into()));
        }
        if row[i] != 2 {
            return Err(EngineError::NotFiniteType(format!("diagonal entry {i} is not 2")));
        }
        for j in 0..l {
            if i != j && (!(-3..=0).contains(&row[j]) || (row[j] == 0) != (cartan[j][i] == 0)) {
                return Err(EngineError::NotFiniteType(format!("bad off-diagonal entry ({i},{j})")));
            }
        }
    }

    let unit = |i: usize| -> Vec<u32> { (0..l).map(|j| u32::from(i == j)).collect() };
    let mut seen: HashSet<Vec<u32>> = (0..l).map(unit).collect();
    let mut all: Vec<Vec<u32>> = (0..l).map(unit).collect();
    let mut layer = all.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for root in &layer {
            for i in 0..l {
                // Length of the α_i-string below `root`.
                let mut down = 0i64;
                let mut probe = root.clone();
                while probe[i] > 0 {
                    probe[i] -= 1;
                    if seen.contains(&probe) {
                        down += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..l).map(|j| root[j] as i64 * cartan[i][j]).sum();
                if down - pairing > 0 {
                    let mut up = root.clone();
                    up[i] += 1;
                    if seen.insert(up.clone()) {
                        next.push(up.clone());
                        all.push(up);
                        if all.len() > ROOT_CAP {
                            return Err(EngineError::NotFiniteType(format!(
                                "more than {ROOT_CAP} positive roots"
                            )));
                        }
                    }
                }
            }
        }
        layer = next;
    }
    all.sort_by(|a, b| {
        let ha: u32 = a.iter().sum();
        let hb: u32 = b.iter().sum();
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
    Ok(all)
}

/// Nodes `j` whose fundamental weight `Λ_j` has level one, for the types that
/// admit rectangular weights; empty otherwise.
pub fn level_one_fundamental_nodes(spec: AlgebraSpec) -> Vec<usize> {
    let l = spec.rank;
    match (spec.family, l) {
        (Family::D, _) => vec![1, l - 1, l],
        (Family::E, 6) => vec![1, 6],
        (Family::E, 7) => vec![1],
        _ => Vec::new(),
    }
}

/// Whether rectangular weights are available for `spec`.
pub fn supports_rectangular(spec: AlgebraSpec) -> bool {
    !level_one_fundamental_nodes(spec).is_empty()
}
