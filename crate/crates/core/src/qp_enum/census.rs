use std::cmp::Ordering;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::conditions::c1_satisfied;
use super::configs::EnergyForm;
use super::dual::DualChargeCounts;
use super::monomial::{compare_monomials, QPMonomial};
use super::weight::{Partner, WeightSpec};
use crate::error::{EngineError, Result};
use crate::lie_data::{AlgebraSpec, RootSystemData};
use crate::series::{KeyPacker, PackedAccumulator, TruncatedSeries};

/// Default number of monomials above which listings are suppressed.
pub const DEFAULT_LIST_GUARD: usize = 10_000;

/// Whether [`enumerate_census`] also lists monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Listing {
    Off,
    /// List only when the total count is at most the guard.
    Guarded(usize),
    Forced,
}

/// Counts of basis monomials by `(q`-degree, color type`)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub spec: AlgebraSpec,
    pub mode: WeightSpec,
    pub truncation: u32,
    /// Counts stored as a series: the coefficient of `q^m y^n` is the
    /// number of monomials of energy `m` and color type `n`.
    pub counts: TruncatedSeries,
    pub monomials: Option<Vec<QPMonomial>>,
    /// Number of dual-charge configurations visited.
    pub configs: u64,
}

impl Census {
    pub fn total(&self) -> num_bigint::BigInt {
        self.counts.iter().map(|(_, c)| c.clone()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("census serializes")
    }
}

#[derive(Serialize)]
struct Entry<'a> {
    q: u32,
    color_type: &'a [u32],
    count: String,
}

impl Serialize for Census {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Census", 5)?;
        st.serialize_field("spec", &self.spec)?;
        st.serialize_field("mode", &self.mode)?;
        st.serialize_field("M", &self.truncation)?;
        let entries: Vec<Entry> = self
            .counts
            .iter()
            .map(|(k, c)| Entry { q: k.q, color_type: &k.y, count: c.to_string() })
            .collect();
        st.serialize_field("entries", &entries)?;
        if let Some(list) = &self.monomials {
            let triples: Vec<Vec<(usize, u32, i64)>> = list.iter().map(|m| m.triples()).collect();
            st.serialize_field("monomials", &triples)?;
        }
        st.end()
    }
}

/// Everything needed to expand one dual-charge configuration.
struct Expander<'a> {
    rs: &'a RootSystemData,
    spec: &'a WeightSpec,
    partners: Vec<Vec<Partner>>,
}

/// Charges and per-position `(c₂)` bounds for one configuration.
#[derive(Default)]
struct Layout {
    charges: Vec<Vec<u32>>,
    bounds: Vec<Vec<i64>>,
    base: i64,
}

impl<'a> Expander<'a> {
    fn new(rs: &'a RootSystemData, spec: &'a WeightSpec) -> Result<Self> {
        Ok(Expander { rs, spec, partners: spec.partners(rs)? })
    }

    /// Fills `out` from the dual counts `r`; `false` when a charge exceeds
    /// its cap.
    fn fill(&self, r: &[Vec<u32>], out: &mut Layout) -> bool {
        let l = r.len();
        out.charges.resize_with(l, Vec::new);
        out.bounds.resize_with(l, Vec::new);
        for (ri, ci) in r.iter().zip(out.charges.iter_mut()) {
            ci.clear();
            let mut t = ri.len();
            for p in 1..=ri.first().copied().unwrap_or(0) {
                while t > 0 && ri[t - 1] < p {
                    t -= 1;
                }
                ci.push(t as u32);
            }
        }
        if let Some(k) = self.spec.level() {
            for (i, c) in out.charges.iter().enumerate() {
                if c.first().is_some_and(|&n| n > k * self.rs.nu_of(i + 1)) {
                    return false;
                }
            }
        }
        let mut base = 0i64;
        for i in 1..=l {
            let mut bounds = std::mem::take(&mut out.bounds[i - 1]);
            bounds.clear();
            for (p, &n) in out.charges[i - 1].iter().enumerate() {
                let n64 = n as i64;
                let mut b = -n64 - 2 * p as i64 * n64;
                for partner in &self.partners[i - 1] {
                    let mu = partner.mult as i64;
                    for &c in &out.charges[partner.color - 1] {
                        b += (mu * c as i64).min(n64);
                    }
                }
                b -= self.spec.rectangular_shift(i, n) as i64;
                base -= b;
                bounds.push(b);
            }
            out.bounds[i - 1] = bounds;
        }
        out.base = base;
        true
    }

    fn layout(&self, r: &DualChargeCounts) -> Option<Layout> {
        let mut out = Layout::default();
        self.fill(&r.0, &mut out).then_some(out)
    }
}

/// Number of mode assignments for one color with total excess
/// `e = Σ(b_p − m_p)`, for `e = 0..=slack`, subject to `m_p ≤ b_p` and `(c₁)`.
fn color_profile(charges: &[u32], bounds: &[i64], slack: usize, out: &mut [u64]) {
    let w = slack + 1;
    // dp[e * w + d]: excess e so far, last excess d
    let mut dp = vec![0u64; w * w];
    let mut next = vec![0u64; w * w];
    for d in 0..w {
        dp[d * w + d] = 1;
    }
    for p in 1..charges.len() {
        next.fill(0);
        let (n, b) = (charges[p], bounds[p]);
        let (prev_n, prev_b) = (charges[p - 1], bounds[p - 1]);
        for e in 0..w {
            for dp_prev in 0..w {
                let c = dp[e * w + dp_prev];
                if c == 0 {
                    continue;
                }
                let prev = (prev_n, prev_b - dp_prev as i64);
                for d in 0..w - e {
                    if !c1_satisfied(&[prev, (n, b - d as i64)]) {
                        continue;
                    }
                    let slot = &mut next[(e + d) * w + d];
                    *slot = slot.checked_add(c).expect("per-configuration count fits in u64");
                }
            }
        }
        std::mem::swap(&mut dp, &mut next);
    }
    out.fill(0);
    for e in 0..w {
        out[e] = dp[e * w..(e + 1) * w].iter().sum();
    }
}

fn convolve_into(acc: &mut [u64], b: &[u64], tmp: &mut [u64]) {
    tmp.fill(0);
    let len = acc.len();
    for (i, &x) in acc.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            tmp[i + j] = tmp[i + j]
                .checked_add(x.checked_mul(y).expect("per-configuration count fits in u64"))
                .expect("per-configuration count fits in u64");
        }
    }
    acc.copy_from_slice(tmp);
}

/// Excess profile of a filled layout; `acc[0]` counts the monomials at the
/// base energy.
fn layout_profile(layout: &Layout, slack: usize, acc: &mut Vec<u64>) {
    acc.clear();
    acc.resize(slack + 1, 0);
    acc[0] = 1;
    if slack == 0 {
        for (c, b) in layout.charges.iter().zip(&layout.bounds) {
            for p in 1..c.len() {
                if !c1_satisfied(&[(c[p - 1], b[p - 1]), (c[p], b[p])]) {
                    acc[0] = 0;
                }
            }
        }
        return;
    }
    let mut prof = vec![0u64; slack + 1];
    let mut tmp = vec![0u64; slack + 1];
    for (c, b) in layout.charges.iter().zip(&layout.bounds) {
        if c.is_empty() {
            continue;
        }
        color_profile(c, b, slack, &mut prof);
        convolve_into(acc, &prof, &mut tmp);
    }
}

/// Census contribution of one configuration: its base energy `Σ(−b_p)` and
/// the number of monomials at each excess `0..=truncation − base`. `None`
/// when the configuration violates the charge cap or lies above the
/// truncation.
pub fn config_energy_profile(
    rs: &RootSystemData,
    spec: &WeightSpec,
    r: &DualChargeCounts,
    truncation: u32,
) -> Result<Option<(i64, Vec<u64>)>> {
    let ex = Expander::new(rs, spec)?;
    let Some(layout) = ex.layout(r) else { return Ok(None) };
    if layout.base > truncation as i64 {
        return Ok(None);
    }
    let mut acc = Vec::new();
    layout_profile(&layout, (truncation as i64 - layout.base) as usize, &mut acc);
    Ok(Some((layout.base, acc)))
}

struct Shard {
    acc: PackedAccumulator,
    configs: u64,
    error: Option<EngineError>,
    layout: Layout,
    r: Vec<Vec<u32>>,
    profile: Vec<u64>,
    color_type: Vec<u32>,
}

/// Counts all basis monomials of total energy at most `truncation`.
pub fn enumerate_census(rs: &RootSystemData, spec: &WeightSpec, truncation: u32) -> Result<Census> {
    enumerate_census_with(rs, spec, truncation, Listing::Off)
}

/// [`enumerate_census`] with an optional monomial listing.
pub fn enumerate_census_with(rs: &RootSystemData, spec: &WeightSpec, truncation: u32, listing: Listing) -> Result<Census> {
    spec.validate(rs)?;
    let form = EnergyForm::new(rs, spec)?;
    let ex = Expander::new(rs, spec)?;
    let packer = KeyPacker::for_character(&rs.highest_root, truncation)?;
    let l = rs.rank();
    let shard = form.fold_configs(
        truncation,
        || Shard {
            acc: PackedAccumulator::new(truncation),
            configs: 0,
            error: None,
            layout: Layout::default(),
            r: vec![Vec::new(); l],
            profile: Vec::new(),
            color_type: vec![0; l],
        },
        |sh, view, energy| {
            if sh.error.is_some() {
                return;
            }
            sh.configs += 1;
            for (i, ri) in sh.r.iter_mut().enumerate() {
                view.counts_into(i + 1, ri);
            }
            if !ex.fill(&sh.r, &mut sh.layout) {
                sh.error = Some(EngineError::MinimalEnergy(format!(
                    "config {:?} with exponent {energy} breaks the charge cap",
                    sh.r
                )));
                return;
            }
            if sh.layout.base != energy as i64 {
                sh.error = Some(EngineError::MinimalEnergy(format!(
                    "config {:?}: minimal energy {}, exponent {energy}",
                    sh.r, sh.layout.base
                )));
                return;
            }
            layout_profile(&sh.layout, (truncation - energy) as usize, &mut sh.profile);
            if sh.profile[0] == 0 {
                sh.error = Some(EngineError::MinimalEnergy(format!("config {:?}: minimal energy not attained", sh.r)));
                return;
            }
            for (o, c) in sh.color_type.iter_mut().zip(&sh.layout.charges) {
                *o = c.iter().sum();
            }
            let Some(key) = packer.pack(&sh.color_type) else {
                sh.error = Some(EngineError::InvalidArgument(format!(
                    "color type {:?} exceeds the packed range {:?}",
                    sh.color_type,
                    packer.caps()
                )));
                return;
            };
            for (e, &c) in sh.profile.iter().enumerate() {
                if c != 0 {
                    sh.acc.add_u64(energy + e as u32, key, c);
                }
            }
        },
        |mut a, b| {
            a.acc.merge(b.acc);
            a.configs += b.configs;
            a.error = a.error.or(b.error);
            a
        },
    );
    if let Some(e) = shard.error {
        return Err(e);
    }
    let counts = shard.acc.into_series(&packer);
    let mut census = Census { spec: rs.spec, mode: *spec, truncation, counts, monomials: None, configs: shard.configs };
    let guard = match listing {
        Listing::Off => return Ok(census),
        Listing::Guarded(g) => Some(g),
        Listing::Forced => None,
    };
    if let Some(g) = guard {
        if census.total() > num_bigint::BigInt::from(g) {
            return Ok(census);
        }
    }
    let mut list = Vec::new();
    for_each_monomial(rs, spec, truncation, |m| list.push(m.clone()))?;
    sort_monomials(&mut list);
    census.monomials = Some(list);
    Ok(census)
}

/// Canonical listing order: color type, then [`compare_monomials`].
pub fn sort_monomials(list: &mut [QPMonomial]) {
    list.sort_by(|a, b| {
        a.color_type()
            .cmp(&b.color_type())
            .then_with(|| compare_monomials(a, b).unwrap_or(Ordering::Equal))
    });
}

/// Lists monomials, failing when there are more than `guard`.
pub fn list_monomials(rs: &RootSystemData, spec: &WeightSpec, truncation: u32, guard: usize) -> Result<Vec<QPMonomial>> {
    let census = enumerate_census_with(rs, spec, truncation, Listing::Guarded(guard))?;
    census.monomials.ok_or(EngineError::ListingTooLarge { guard })
}

/// Streams every basis monomial of total energy at most `truncation`.
pub fn for_each_monomial<F: FnMut(&QPMonomial)>(rs: &RootSystemData, spec: &WeightSpec, truncation: u32, mut f: F) -> Result<()> {
    spec.validate(rs)?;
    let form = EnergyForm::new(rs, spec)?;
    let ex = Expander::new(rs, spec)?;
    let l = rs.rank();
    form.for_each_config(truncation, |r, _| {
        let Some(layout) = ex.layout(r) else { return };
        if layout.base > truncation as i64 {
            return;
        }
        let slack = (truncation as i64 - layout.base) as usize;
        let mut blocks: Vec<Vec<(u32, i64)>> = vec![Vec::new(); l];
        fill(&layout, 0, 0, slack, &mut blocks, &mut f);
    });
    Ok(())
}

fn fill<F: FnMut(&QPMonomial)>(
    layout: &Layout,
    color: usize,
    p: usize,
    slack: usize,
    blocks: &mut Vec<Vec<(u32, i64)>>,
    f: &mut F,
) {
    if color == layout.charges.len() {
        let m = QPMonomial::new(blocks.clone()).expect("charges ordered");
        f(&m);
        return;
    }
    if p == layout.charges[color].len() {
        fill(layout, color + 1, 0, slack, blocks, f);
        return;
    }
    let n = layout.charges[color][p];
    let b = layout.bounds[color][p];
    for d in 0..=slack {
        let m = b - d as i64;
        if let Some(&prev) = blocks[color].last() {
            if !c1_satisfied(&[prev, (n, m)]) {
                continue;
            }
        }
        blocks[color].push((n, m));
        fill(layout, color, p + 1, slack - d, blocks, f);
        blocks[color].pop();
    }
}

/// The census as a series in `q, y_1, …, y_l`.
pub fn census_to_series(census: &Census) -> TruncatedSeries {
    census.counts.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_data::{build_root_system, Family};
    use crate::qp_enum::conditions::satisfies_all;
    use crate::series::LevelAccumulator;

    fn rs(f: Family, l: usize) -> RootSystemData {
        build_root_system(AlgebraSpec::new(f, l).unwrap()).unwrap()
    }

    #[test]
    fn a1_level_one() {
        let a1 = rs(Family::A, 1);
        let c = enumerate_census_with(&a1, &WeightSpec::Standard { k: 1 }, 4, Listing::Forced).unwrap();
        let want = TruncatedSeries::from_terms(
            1,
            4,
            [(0, vec![0], 1), (1, vec![1], 1), (2, vec![1], 1), (3, vec![1], 1), (4, vec![1], 1), (4, vec![2], 1)]
                .map(|(q, y, c)| (q, y, c.into())),
        )
        .unwrap();
        assert_eq!(c.counts, want);
        let list: Vec<_> = c.monomials.unwrap().iter().map(|m| m.triples()).collect();
        assert_eq!(
            list,
            vec![
                vec![],
                vec![(1, 1, 4)],
                vec![(1, 1, 3)],
                vec![(1, 1, 2)],
                vec![(1, 1, 1)],
                vec![(1, 1, 1), (1, 1, 3)],
            ]
        );
    }

    #[test]
    fn a1_verma() {
        let a1 = rs(Family::A, 1);
        let c = enumerate_census(&a1, &WeightSpec::GenericVerma, 2).unwrap();
        assert_eq!(c.counts.to_text(), "1 + q*y1 + q^2*y1 + q^2*y1^2");
    }

    #[test]
    fn zero_truncation() {
        for (f, l) in [(Family::F, 4), (Family::E, 6), (Family::B, 3)] {
            let r = rs(f, l);
            let c = enumerate_census(&r, &WeightSpec::GenericVerma, 0).unwrap();
            assert_eq!(c.counts, TruncatedSeries::one(l, 0));
        }
    }

    #[test]
    fn listing_respects_guard() {
        let a1 = rs(Family::A, 1);
        let c = enumerate_census_with(&a1, &WeightSpec::GenericVerma, 6, Listing::Guarded(3)).unwrap();
        assert!(c.monomials.is_none());
        assert_eq!(list_monomials(&a1, &WeightSpec::GenericVerma, 6, 3), Err(EngineError::ListingTooLarge { guard: 3 }));
    }

    #[test]
    fn streamed_monomials_satisfy_conditions_and_match_counts() {
        let cases = [
            (rs(Family::B, 2), WeightSpec::Standard { k: 2 }, 6),
            (rs(Family::G, 2), WeightSpec::GenericVerma, 4),
            (rs(Family::C, 3), WeightSpec::Standard { k: 1 }, 5),
            (rs(Family::D, 4), WeightSpec::Rectangular { k0: 1, j: 4, kj: 1 }, 4),
            (rs(Family::E, 6), WeightSpec::AltE { k: 1 }, 3),
        ];
        for (r, spec, m) in cases {
            let census = enumerate_census(&r, &spec, m).unwrap();
            let mut acc = LevelAccumulator::new(r.rank(), m);
            for_each_monomial(&r, &spec, m, |mono| {
                assert!(satisfies_all(&r, &spec, mono).unwrap());
                assert_eq!(mono.dual_counts().to_charges(), mono.charge_type().0);
                acc.add_one(mono.total_energy() as u32, &mono.color_type());
            })
            .unwrap();
            assert_eq!(acc.into_series(), census.counts, "{} {spec}", r.spec);
        }
    }

    /// Every monomial in a box of modes, filtered by the conditions alone.
    #[test]
    fn brute_force_over_modes() {
        let a2 = rs(Family::A, 2);
        let spec = WeightSpec::Standard { k: 1 };
        let m = 4u32;
        let census = enumerate_census(&a2, &spec, m).unwrap();
        let mut acc = LevelAccumulator::new(2, m);
        // charges are at most 1 at level one, at most two particles per color
        let modes: Vec<i64> = (-5..=3).collect();
        let mut blocks_per_color: Vec<Vec<(u32, i64)>> = vec![vec![]];
        for &a in &modes {
            blocks_per_color.push(vec![(1, a)]);
            for &b in &modes {
                blocks_per_color.push(vec![(1, a), (1, b)]);
            }
        }
        for b1 in &blocks_per_color {
            for b2 in &blocks_per_color {
                let mono = QPMonomial::new(vec![b1.clone(), b2.clone()]).unwrap();
                let e = mono.total_energy();
                if (0..=m as i64).contains(&e) && satisfies_all(&a2, &spec, &mono).unwrap() {
                    acc.add_one(e as u32, &mono.color_type());
                }
            }
        }
        assert_eq!(acc.into_series(), census.counts);
    }

    #[test]
    fn census_json_shape() {
        let a1 = rs(Family::A, 1);
        let c = enumerate_census_with(&a1, &WeightSpec::Standard { k: 1 }, 1, Listing::Forced).unwrap();
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"spec":{"family":"A","rank":1},"mode":{"mode":"standard","k":1},"M":1,"entries":[{"q":0,"color_type":[0],"count":"1"},{"q":1,"color_type":[1],"count":"1"}],"monomials":[[],[[1,1,1]]]}"#
        );
    }
}
