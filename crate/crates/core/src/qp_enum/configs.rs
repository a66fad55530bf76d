//! Dual-charge configurations of bounded minimal energy.
//!
//! The minimal energy of a configuration `r` is
//! `Σ_i Σ_t (r_i^{(t)})² − Σ_i Σ_{(s,μ)} Σ_t Σ_{p<μ} r_s^{(t)} r_i^{(μt−p)}`
//! plus, for rectangular weights, `Σ_{t>k_0} r_j^{(t)}`. The quadratic part
//! splits into identical blocks: block `u` holds `r_i^{(t)}` for
//! `ν_i(u−1) < t ≤ ν_i u`. Each block is searched with a Fincke–Pohst
//! enumeration against the remaining budget.

use num_rational::Ratio;
use rayon::prelude::*;

use super::dual::DualChargeCounts;
use super::weight::WeightSpec;
use crate::error::{EngineError, Result};
use crate::lie_data::RootSystemData;

/// The block quadratic form together with caps and the rectangular term.
#[derive(Debug, Clone)]
pub struct EnergyForm {
    nu: Vec<u32>,
    offsets: Vec<usize>,
    /// `2G` on one block; `Q2(x) = xᵀ(2G)x = 2·energy`.
    gram2: Vec<Vec<i64>>,
    /// Upper-triangular Cholesky factor of `2G`.
    chol: Vec<Vec<f64>>,
    /// For the first slot of each color, the index of that color's last slot.
    slot_color_start: Vec<Option<usize>>,
    max_blocks: Option<u32>,
    /// `(k_0, slot of color j)` for rectangular weights.
    rect: Option<(u32, usize)>,
}

impl EnergyForm {
    pub fn new(rs: &RootSystemData, spec: &WeightSpec) -> Result<Self> {
        let partners = spec.partners(rs)?;
        let l = rs.rank();
        let nu = rs.nu.clone();
        let mut offsets = Vec::with_capacity(l + 1);
        let mut acc = 0usize;
        for &v in &nu {
            offsets.push(acc);
            acc += v as usize;
        }
        offsets.push(acc);
        let n = acc;
        let mut gram2 = vec![vec![0i64; n]; n];
        for (x, row) in gram2.iter_mut().enumerate() {
            row[x] = 2;
        }
        for i in 1..=l {
            for partner in &partners[i - 1] {
                let s = partner.color;
                let mu = partner.mult as usize;
                if nu[i - 1] as usize != mu * nu[s - 1] as usize {
                    return Err(EngineError::InvalidArgument(format!(
                        "partner {s} of color {i} has incompatible multiplicity {mu}"
                    )));
                }
                for a in 1..=nu[s - 1] as usize {
                    let sa = offsets[s - 1] + a - 1;
                    for b in mu * (a - 1) + 1..=mu * a {
                        let ib = offsets[i - 1] + b - 1;
                        gram2[sa][ib] -= 1;
                        gram2[ib][sa] -= 1;
                    }
                }
            }
        }
        check_positive_definite(&gram2)?;
        let chol = cholesky(&gram2);
        let mut slot_color_start = vec![None; n];
        for i in 0..l {
            slot_color_start[offsets[i]] = Some(offsets[i + 1] - 1);
        }
        let rect = match *spec {
            WeightSpec::Rectangular { k0, j, .. } => Some((k0, offsets[j - 1])),
            _ => None,
        };
        Ok(EnergyForm { nu, offsets, gram2, chol, slot_color_start, max_blocks: spec.level(), rect })
    }

    pub fn block_size(&self) -> usize {
        self.gram2.len()
    }

    pub fn gram2(&self) -> &[Vec<i64>] {
        &self.gram2
    }

    pub fn max_blocks(&self) -> Option<u32> {
        self.max_blocks
    }

    fn q2(&self, x: &[u32]) -> i64 {
        let mut s = 0i64;
        for (a, row) in self.gram2.iter().enumerate() {
            if x[a] == 0 {
                continue;
            }
            let dot: i64 = row.iter().zip(x).map(|(g, &v)| g * v as i64).sum();
            s += x[a] as i64 * dot;
        }
        s
    }

    fn linear(&self, block: u32, x: &[u32]) -> i64 {
        match self.rect {
            Some((k0, slot)) if block > k0 => x[slot] as i64,
            _ => 0,
        }
    }

    /// Exact minimal energy of a configuration.
    pub fn energy(&self, r: &DualChargeCounts) -> i64 {
        let blocks = self.to_blocks(r);
        blocks.iter().enumerate().map(|(u, x)| self.q2(x) / 2 + self.linear(u as u32 + 1, x)).sum()
    }

    fn to_blocks(&self, r: &DualChargeCounts) -> Vec<Vec<u32>> {
        let count = (0..self.nu.len())
            .map(|i| r.0[i].len().div_ceil(self.nu[i] as usize))
            .max()
            .unwrap_or(0);
        (0..count)
            .map(|u| {
                let mut x = vec![0u32; self.block_size()];
                for (i, &v) in self.nu.iter().enumerate() {
                    for a in 0..v as usize {
                        x[self.offsets[i] + a] = r.0[i].get(u * v as usize + a).copied().unwrap_or(0);
                    }
                }
                x
            })
            .collect()
    }

    /// Visits every configuration with minimal energy at most `budget`,
    /// together with that energy, in a deterministic order.
    pub fn walk_configs<F: FnMut(&ConfigView, u32)>(&self, budget: u32, visit: F) {
        let mut w = Walker::new(self, budget, self.block_limit(), visit);
        w.extend(0, 0);
    }

    /// [`EnergyForm::walk_configs`] with owned dual counts.
    pub fn for_each_config<F: FnMut(&DualChargeCounts, u32)>(&self, budget: u32, mut visit: F) {
        self.walk_configs(budget, |view, e| visit(&view.to_dual(), e));
    }

    fn block_limit(&self) -> u32 {
        self.max_blocks.unwrap_or(u32::MAX)
    }

    /// Parallel fold over all configurations with minimal energy at most
    /// `budget`, split by the first block.
    pub fn fold_configs<A, I, V, R>(&self, budget: u32, init: I, visit: V, merge: R) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        V: Fn(&mut A, &ConfigView, u32) + Sync + Send,
        R: Fn(A, A) -> A + Sync + Send,
    {
        let n = self.block_size();
        let mut root = init();
        let mut first: Vec<(Vec<u32>, u32)> = Vec::new();
        {
            let mut w = Walker::new(self, budget, self.block_limit().min(1), |view: &ConfigView, e| {
                if view.nblocks == 0 {
                    visit(&mut root, view, e);
                } else {
                    first.push((view.blocks.to_vec(), e));
                }
            });
            w.extend(0, 0);
        }
        let limit = self.block_limit();
        let rest = first
            .into_par_iter()
            .fold(&init, |mut acc, (x, e)| {
                let mut w = Walker::new(self, budget, limit, |view: &ConfigView, en| visit(&mut acc, view, en));
                w.buf[..n].copy_from_slice(&x);
                w.extend(1, e as i64);
                drop(w);
                acc
            })
            .reduce(&init, &merge);
        merge(root, rest)
    }
}

/// Borrowed view of one configuration during a walk.
pub struct ConfigView<'a> {
    form: &'a EnergyForm,
    blocks: &'a [u32],
    nblocks: usize,
}

impl ConfigView<'_> {
    pub fn rank(&self) -> usize {
        self.form.nu.len()
    }

    /// `r_color^{(t)}`, `t` 1-based.
    #[inline]
    pub fn get(&self, color: usize, t: usize) -> u32 {
        if t == 0 {
            return 0;
        }
        let nu = self.form.nu[color - 1] as usize;
        let u = (t - 1) / nu;
        if u >= self.nblocks {
            return 0;
        }
        self.blocks[u * self.form.block_size() + self.form.offsets[color - 1] + (t - 1) % nu]
    }

    /// Number of nonzero entries of `r_color`.
    pub fn support(&self, color: usize) -> usize {
        let nu = self.form.nu[color - 1] as usize;
        let mut t = self.nblocks * nu;
        while t > 0 && self.get(color, t) == 0 {
            t -= 1;
        }
        t
    }

    /// Writes the nonzero part of `r_color` into `out`.
    pub fn counts_into(&self, color: usize, out: &mut Vec<u32>) {
        out.clear();
        let n = self.form.block_size();
        let (lo, hi) = (self.form.offsets[color - 1], self.form.offsets[color]);
        for u in 0..self.nblocks {
            for &v in &self.blocks[u * n + lo..u * n + hi] {
                if v == 0 {
                    return;
                }
                out.push(v);
            }
        }
    }

    /// `n_i = Σ_t r_i^{(t)}` for every color.
    pub fn color_type_into(&self, out: &mut [u32]) {
        out.fill(0);
        let n = self.form.block_size();
        for u in 0..self.nblocks {
            let x = &self.blocks[u * n..(u + 1) * n];
            for (i, o) in out.iter_mut().enumerate() {
                *o += x[self.form.offsets[i]..self.form.offsets[i + 1]].iter().sum::<u32>();
            }
        }
    }

    pub fn to_dual(&self) -> DualChargeCounts {
        let mut r = vec![Vec::new(); self.rank()];
        for (i, ri) in r.iter_mut().enumerate() {
            self.counts_into(i + 1, ri);
        }
        DualChargeCounts(r)
    }
}

struct Walker<'a, F> {
    form: &'a EnergyForm,
    budget: i64,
    block_limit: u32,
    buf: Vec<u32>,
    visit: F,
}

impl<'a, F: FnMut(&ConfigView, u32)> Walker<'a, F> {
    fn new(form: &'a EnergyForm, budget: u32, block_limit: u32, visit: F) -> Self {
        // every nonzero block costs at least one unit of energy
        let depth = (budget as usize).min(block_limit as usize) + 1;
        Walker { form, budget: budget as i64, block_limit, buf: vec![0; depth * form.block_size()], visit }
    }

    fn extend(&mut self, nblocks: usize, used: i64) {
        let n = self.form.block_size();
        let view = ConfigView { form: self.form, blocks: &self.buf[..nblocks * n], nblocks };
        (self.visit)(&view, used as u32);
        if nblocks as u32 >= self.block_limit || self.budget - used < 1 {
            return;
        }
        if nblocks > 0 {
            let last = &self.buf[(nblocks - 1) * n..nblocks * n];
            if self.form.offsets[1..].iter().all(|&end| last[end - 1] == 0) {
                return;
            }
        }
        self.buf[nblocks * n..(nblocks + 1) * n].fill(0);
        let rem = 2.0 * (self.budget - used) as f64;
        self.fp(nblocks, n, rem, used);
    }

    fn fp(&mut self, u: usize, k: usize, rem: f64, used: i64) {
        let form = self.form;
        let n = form.block_size();
        let base = u * n;
        if k == 0 {
            let x = &self.buf[base..base + n];
            if x.iter().all(|&v| v == 0) {
                return;
            }
            let q2 = form.q2(x);
            let e = used + q2 / 2 + form.linear(u as u32 + 1, x);
            if q2 <= 2 * (self.budget - used) && e <= self.budget {
                self.extend(u + 1, e);
            }
            return;
        }
        let k = k - 1;
        let row = &form.chol[k];
        let rkk = row[k];
        let mut c = 0.0;
        for (r, &x) in row[k + 1..].iter().zip(&self.buf[base + k + 1..base + n]) {
            c += r * x as f64;
        }
        c /= rkk;
        let half = rem.max(0.0).sqrt() / rkk + 1e-7;
        let lo_f = (-c - half).ceil().max(0.0);
        let hi_f = (-c + half).floor();
        if hi_f < lo_f {
            return;
        }
        let mut lo = lo_f as u32;
        let mut hi = hi_f.min(u32::MAX as f64) as u32;
        match form.slot_color_start[k] {
            Some(last) if u > 0 => hi = hi.min(self.buf[base - n + last]),
            Some(_) => {}
            None => {}
        }
        if k + 1 < n && form.slot_color_start[k + 1].is_none() {
            lo = lo.max(self.buf[base + k + 1]);
        }
        for v in lo..=hi {
            self.buf[base + k] = v;
            let t = rkk * (v as f64 + c);
            let next = rem - t * t;
            if next >= -1e-6 {
                self.fp(u, k, next, used);
            }
        }
        self.buf[base + k] = 0;
    }
}

/// Exact `LDLᵀ` over the rationals; every pivot must be positive.
fn check_positive_definite(m: &[Vec<i64>]) -> Result<()> {
    let n = m.len();
    let mut a: Vec<Vec<Ratio<i128>>> = m.iter().map(|r| r.iter().map(|&v| Ratio::from_integer(v as i128)).collect()).collect();
    for k in 0..n {
        let pivot = a[k][k];
        if pivot <= Ratio::from_integer(0) {
            return Err(EngineError::NotPositiveDefinite(format!("pivot {k} is {pivot}")));
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest {
            let f = row[k] / pivot;
            for (x, &p) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *x -= f * p;
            }
        }
    }
    Ok(())
}

fn cholesky(m: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut r = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i..n {
            let s: f64 = m[i][j] as f64 - (0..i).map(|k| r[k][i] * r[k][j]).sum::<f64>();
            if i == j {
                r[i][i] = s.sqrt();
            } else {
                r[i][j] = s / r[i][i];
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_data::{build_root_system, AlgebraSpec, Family};
    use std::collections::BTreeSet;

    fn rs(f: Family, l: usize) -> RootSystemData {
        build_root_system(AlgebraSpec::new(f, l).unwrap()).unwrap()
    }

    fn collect(form: &EnergyForm, m: u32) -> BTreeSet<(Vec<Vec<u32>>, u32)> {
        let mut out = BTreeSet::new();
        form.for_each_config(m, |r, e| {
            assert!(out.insert((r.0.clone(), e)), "duplicate config {:?}", r.0);
        });
        out
    }

    fn partitions(max_len: usize, max_part: u32, out: &mut Vec<Vec<u32>>) {
        fn go(prefix: &mut Vec<u32>, cap: u32, max_len: usize, out: &mut Vec<Vec<u32>>) {
            out.push(prefix.clone());
            if prefix.len() == max_len {
                return;
            }
            for v in 1..=cap {
                prefix.push(v);
                go(prefix, v, max_len, out);
                prefix.pop();
            }
        }
        go(&mut Vec::new(), max_part, max_len, out);
    }

    /// Direct evaluation of the exponent over a box of configurations.
    fn brute(rs: &RootSystemData, spec: &WeightSpec, m: u32, len: usize, part: u32) -> BTreeSet<(Vec<Vec<u32>>, u32)> {
        let form = EnergyForm::new(rs, spec).unwrap();
        let partners = spec.partners(rs).unwrap();
        let mut per_color = Vec::new();
        for i in 1..=rs.rank() {
            let mut ps = Vec::new();
            let cap = spec.level().map(|k| (k * rs.nu_of(i)) as usize).unwrap_or(len).min(len);
            partitions(cap, part, &mut ps);
            per_color.push(ps);
        }
        let mut out = BTreeSet::new();
        let mut idx = vec![0usize; rs.rank()];
        loop {
            let r: Vec<Vec<u32>> = idx.iter().enumerate().map(|(i, &j)| per_color[i][j].clone()).collect();
            let get = |i: usize, t: usize| if t == 0 { 0 } else { r[i - 1].get(t - 1).copied().unwrap_or(0) as i64 };
            let mut e: i64 = r.iter().flatten().map(|&v| (v as i64).pow(2)).sum();
            for i in 1..=rs.rank() {
                for p in &partners[i - 1] {
                    let mu = p.mult as usize;
                    for t in 1..=len {
                        for q in 0..mu {
                            e -= get(p.color, t) * get(i, mu * t - q);
                        }
                    }
                }
            }
            if let WeightSpec::Rectangular { k0, j, .. } = *spec {
                e += r[j - 1].iter().skip(k0 as usize).map(|&v| v as i64).sum::<i64>();
            }
            let d = DualChargeCounts(r.clone());
            assert_eq!(form.energy(&d), e);
            if e <= m as i64 {
                out.insert((r, e as u32));
            }
            let mut c = 0;
            loop {
                if c == idx.len() {
                    return out;
                }
                idx[c] += 1;
                if idx[c] < per_color[c].len() {
                    break;
                }
                idx[c] = 0;
                c += 1;
            }
        }
    }

    #[test]
    fn matches_box_search() {
        let cases = [
            (rs(Family::A, 1), WeightSpec::GenericVerma, 6, 6, 6),
            (rs(Family::A, 2), WeightSpec::GenericVerma, 4, 4, 4),
            (rs(Family::B, 2), WeightSpec::Standard { k: 2 }, 4, 4, 4),
            (rs(Family::C, 2), WeightSpec::GenericVerma, 3, 7, 3),
            (rs(Family::G, 2), WeightSpec::GenericVerma, 3, 9, 3),
            (rs(Family::G, 2), WeightSpec::Standard { k: 1 }, 4, 3, 4),
            (rs(Family::D, 4), WeightSpec::Rectangular { k0: 1, j: 3, kj: 1 }, 3, 2, 3),
        ];
        for (rs, spec, m, len, part) in cases {
            let form = EnergyForm::new(&rs, &spec).unwrap();
            assert_eq!(collect(&form, m), brute(&rs, &spec, m, len, part), "{} {spec}", rs.spec);
        }
    }

    #[test]
    fn a1_level_two_configs() {
        let a1 = rs(Family::A, 1);
        let form = EnergyForm::new(&a1, &WeightSpec::Standard { k: 2 }).unwrap();
        let got = collect(&form, 4);
        let want: BTreeSet<_> = [(vec![vec![]], 0), (vec![vec![1]], 1), (vec![vec![1, 1]], 2), (vec![vec![2]], 4)]
            .into_iter()
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn parallel_fold_matches_sequential() {
        let f4 = rs(Family::F, 4);
        let form = EnergyForm::new(&f4, &WeightSpec::GenericVerma).unwrap();
        let seq = collect(&form, 5);
        let par = form.fold_configs(
            5,
            BTreeSet::new,
            |acc, r, e| {
                acc.insert((r.to_dual().0, e));
            },
            |mut a, b| {
                a.extend(b);
                a
            },
        );
        assert_eq!(seq, par);
    }

    #[test]
    fn pd_check_rejects_indefinite() {
        assert!(check_positive_definite(&[vec![2, -2], vec![-2, 2]]).is_err());
        assert!(check_positive_definite(&[vec![2, -1], vec![-1, 2]]).is_ok());
    }

    #[test]
    fn forms_are_positive_definite_everywhere() {
        let specs = [
            (Family::A, 5),
            (Family::B, 4),
            (Family::C, 4),
            (Family::D, 6),
            (Family::E, 6),
            (Family::E, 7),
            (Family::E, 8),
            (Family::F, 4),
            (Family::G, 2),
        ];
        for (f, l) in specs {
            let r = rs(f, l);
            assert!(EnergyForm::new(&r, &WeightSpec::GenericVerma).is_ok(), "{f}{l}");
        }
        for l in 6..=8 {
            assert!(EnergyForm::new(&rs(Family::E, l), &WeightSpec::AltE { k: 1 }).is_ok());
        }
    }
}
