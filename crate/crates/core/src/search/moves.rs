//! Exhaustive segment neighbourhoods.
//!
//! Each selected monomer gets one digit of a base-12 generator string; a
//! digit picks the basis vector from the monomer's chain predecessor (the
//! fixed anchor before its run, or the previously placed point). Points are
//! placed in chain order; a run that contains the first monomer is placed in
//! reverse from the fixed monomer after it. A digit that lands on an occupied
//! point, or too far from the fixed monomer the run has to rejoin, is skipped
//! together with every completion of the prefix.

use crate::heuristics::Move;
use crate::hp::Conformation;
use crate::lattice::{lattice_distance, LatticePoint, BASIS};
use smallvec::SmallVec;

#[derive(Debug, Clone, Copy)]
struct Slot {
    index: usize,
    /// Fixed point this slot steps from; `None` means the previous slot.
    anchor: Option<LatticePoint>,
    /// Fixed point the run must reach, and the number of steps left to it.
    target: Option<(LatticePoint, i64)>,
}

/// Maximal runs of consecutive indices in a sorted index list.
pub(crate) fn runs(indices: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &i in indices {
        match out.last_mut() {
            Some(last) if last.1 + 1 == i => last.1 = i,
            _ => out.push((i, i)),
        }
    }
    out
}

fn slots(conf: &Conformation, indices: &[usize]) -> Option<Vec<Slot>> {
    let n = conf.len();
    let mut slots = Vec::with_capacity(indices.len());
    for (a, b) in runs(indices) {
        if a > 0 {
            let target = (b + 1 < n).then(|| conf.position(b + 1));
            for k in a..=b {
                slots.push(Slot {
                    index: k,
                    anchor: (k == a).then(|| conf.position(a - 1)),
                    target: target.map(|t| (t, (b + 1 - k) as i64)),
                });
            }
        } else if b + 1 < n {
            for k in (a..=b).rev() {
                slots.push(Slot {
                    index: k,
                    anchor: (k == b).then(|| conf.position(b + 1)),
                    target: None,
                });
            }
        } else {
            // The whole chain is selected: nothing to anchor to.
            return None;
        }
    }
    Some(slots)
}

/// Calls `emit` with every feasible placement of the selected monomers,
/// identity included, until it returns false. Returns the number of
/// placements visited.
fn for_each_placement(
    conf: &Conformation,
    indices: &[usize],
    mut emit: impl FnMut(&[Slot], &[LatticePoint]) -> bool,
) -> u64 {
    debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
    if indices.is_empty() || indices.last().is_some_and(|&i| i >= conf.len()) {
        return 0;
    }
    let Some(slots) = slots(conf, indices) else {
        return 0;
    };
    let mut selected = vec![false; conf.len()];
    for &i in indices {
        selected[i] = true;
    }

    let k = slots.len();
    let mut digits = vec![0u8; k];
    let mut placed = vec![LatticePoint::ORIGIN; k];
    let mut depth = 0usize;
    let mut count = 0u64;
    loop {
        if digits[depth] as usize == BASIS.len() {
            if depth == 0 {
                break;
            }
            depth -= 1;
            digits[depth] += 1;
            continue;
        }
        let slot = slots[depth];
        let base = slot.anchor.unwrap_or_else(|| placed[depth - 1]);
        let pt = base + BASIS[digits[depth] as usize];

        let occupied = conf.occupant(pt).is_some_and(|j| !selected[j]) || placed[..depth].contains(&pt);
        let reachable = slot.target.is_none_or(|(t, steps)| lattice_distance(pt, t) <= steps);
        if occupied || !reachable {
            // skip: discard every completion of this prefix
            digits[depth] += 1;
            continue;
        }
        placed[depth] = pt;
        if depth + 1 == k {
            count += 1;
            if !emit(&slots, &placed) {
                break;
            }
            digits[depth] += 1;
        } else {
            depth += 1;
            digits[depth] = 0;
        }
    }
    count
}

/// All feasible simultaneous repositionings of `indices` (sorted), with every
/// other monomer fixed. Entries that keep a monomer in place are dropped from
/// each move and the identity placement is excluded.
pub fn generate_moves(conf: &Conformation, indices: &[usize]) -> Vec<Move> {
    let mut out = Vec::new();
    for_each_placement(conf, indices, |slots, placed| {
        let mut changes: SmallVec<[(usize, LatticePoint); 8]> = slots
            .iter()
            .zip(placed)
            .filter(|(s, &p)| conf.position(s.index) != p)
            .map(|(s, &p)| (s.index, p))
            .collect();
        if !changes.is_empty() {
            changes.sort_unstable_by_key(|c| c.0);
            out.push(Move::from_sorted(changes));
        }
        true
    });
    out
}

/// Number of feasible placements of `indices`, identity included.
pub fn count_placements(conf: &Conformation, indices: &[usize]) -> u64 {
    for_each_placement(conf, indices, |_, _| true)
}

/// `count_placements`, but stops after `cap + 1` placements.
pub fn count_placements_capped(conf: &Conformation, indices: &[usize], cap: u64) -> u64 {
    let mut seen = 0u64;
    for_each_placement(conf, indices, |_, _| {
        seen += 1;
        seen <= cap
    })
}
