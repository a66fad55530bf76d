use rayon::prelude::*;

use crate::error::Result;
use crate::lie_data::RootSystemData;
use crate::series::{KeyPacker, PackedAccumulator, TruncatedSeries};

/// Counts multisets of pairs `(α, n)`, `α > 0`, `n ≥ 1`, `Σn ≤ truncation`,
/// one at a time, recording `q^{Σn} y^{Σα}` for each.
pub fn pbw_census(rs: &RootSystemData, truncation: u32) -> Result<TruncatedSeries> {
    let packer = KeyPacker::for_character(&rs.highest_root, truncation)?;
    // pairs sorted by mode, then root order
    let pairs: Vec<(u32, u64)> = (1..=truncation)
        .flat_map(|n| {
            rs.positive_roots
                .iter()
                .map(|r| (n, packer.pack(r).expect("a root fits its own cap")))
                .collect::<Vec<_>>()
        })
        .collect();
    let threads = rayon::current_num_threads().max(1);
    let min_len = (pairs.len() / (4 * threads)).max(1);
    let mut root = PackedAccumulator::new(truncation);
    root.add_u64(0, 0, 1);
    let rest = (0..pairs.len())
        .into_par_iter()
        .with_min_len(min_len)
        .fold(
            || PackedAccumulator::new(truncation),
            |mut acc, first| {
                let (n, key) = pairs[first];
                walk(&pairs, first, n, truncation, key, &mut acc);
                acc
            },
        )
        .reduce(
            || PackedAccumulator::new(truncation),
            |mut a, b| {
                a.merge(b);
                a
            },
        );
    root.merge(rest);
    Ok(root.into_series(&packer))
}

/// Records the current multiset, then every extension by pairs at index
/// `from` or later. Keys add fieldwise since no field exceeds its cap.
fn walk(pairs: &[(u32, u64)], from: usize, used: u32, truncation: u32, key: u64, acc: &mut PackedAccumulator) {
    acc.add_u64(used, key, 1);
    for idx in from..pairs.len() {
        let (n, k) = pairs[idx];
        if used + n > truncation {
            break;
        }
        walk(pairs, idx, used + n, truncation, key + k, acc);
    }
}
