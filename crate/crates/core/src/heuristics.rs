//! The three guiding objectives and their exact incremental evaluation.
//!
//! All accumulators are integers. The centroid objective is kept scaled by
//! the number of H monomers, `n_H * sum |p - c|^2 = n_H * sum |p|^2 - |sum p|^2`,
//! which orders moves identically to the rational value.

use crate::hp::{Conformation, HpSequence};
use crate::lattice::{is_neighbor, squared_distance, LatticePoint};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move places monomer {index} on an occupied point")]
    Collision { index: usize },
    #[error("move breaks the chain between {i} and {j}")]
    ChainBroken { i: usize, j: usize },
    #[error("move indices must be strictly increasing and in range")]
    Malformed,
}

/// Selects one of the guiding objectives. All are minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HeuristicKind {
    /// HP contact energy (maximizes non-consecutive H-H contacts).
    Contacts,
    /// Sum of squared distances over non-consecutive H-H pairs.
    AllPairDistance,
    /// Sum of squared distances of H monomers to their centroid, scaled by `n_H`.
    CentroidDistance,
}

impl HeuristicKind {
    pub const ALL: [HeuristicKind; 3] =
        [HeuristicKind::Contacts, HeuristicKind::AllPairDistance, HeuristicKind::CentroidDistance];

    pub fn short_name(self) -> &'static str {
        match self {
            HeuristicKind::Contacts => "h1",
            HeuristicKind::AllPairDistance => "h2",
            HeuristicKind::CentroidDistance => "h3",
        }
    }
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for HeuristicKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "h1" | "contacts" => Ok(HeuristicKind::Contacts),
            "h2" | "allpair" => Ok(HeuristicKind::AllPairDistance),
            "h3" | "centroid" => Ok(HeuristicKind::CentroidDistance),
            _ => Err(format!("unknown heuristic {s:?} (expected h1, h2 or h3)")),
        }
    }
}

/// A simultaneous repositioning of some monomers; everything else stays put.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    changes: SmallVec<[(usize, LatticePoint); 8]>,
}

impl Move {
    /// Builds a move from `(index, new point)` pairs; sorts by index.
    pub fn new(changes: impl IntoIterator<Item = (usize, LatticePoint)>) -> Self {
        let mut changes: SmallVec<[(usize, LatticePoint); 8]> = changes.into_iter().collect();
        changes.sort_unstable_by_key(|c| c.0);
        Self { changes }
    }

    pub(crate) fn from_sorted(changes: SmallVec<[(usize, LatticePoint); 8]>) -> Self {
        debug_assert!(changes.windows(2).all(|w| w[0].0 < w[1].0));
        Self { changes }
    }

    pub fn changes(&self) -> &[(usize, LatticePoint)] {
        &self.changes
    }

    pub fn len(&self) -> usize {
        self.changes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }

    /// Indices whose position actually changes.
    pub fn moved_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.changes.iter().map(|c| c.0)
    }

    /// Drops entries that leave a monomer where it already is.
    pub fn canonical(mut self, conf: &Conformation) -> Self {
        self.changes.retain(|c| conf.position(c.0) != c.1);
        self
    }

    #[inline]
    fn contains(&self, index: usize) -> bool {
        match self.changes.len() {
            0..=8 => self.changes.iter().any(|c| c.0 == index),
            _ => self.changes.binary_search_by_key(&index, |c| c.0).is_ok(),
        }
    }

    #[inline]
    fn position_after(&self, conf: &Conformation, index: usize) -> LatticePoint {
        self.changes
            .iter()
            .find(|c| c.0 == index)
            .map_or_else(|| conf.position(index), |c| c.1)
    }

    /// Checks that applying the move to `conf` yields a feasible walk.
    pub fn check_feasible(&self, conf: &Conformation) -> Result<(), MoveError> {
        let n = conf.len();
        if self.changes.windows(2).any(|w| w[0].0 >= w[1].0) || self.changes.iter().any(|c| c.0 >= n) {
            return Err(MoveError::Malformed);
        }
        for (a, &(i, p)) in self.changes.iter().enumerate() {
            if let Some(j) = conf.occupant(p) {
                if j != i && !self.contains(j) {
                    return Err(MoveError::Collision { index: i });
                }
            }
            if self.changes[a + 1..].iter().any(|c| c.1 == p) {
                return Err(MoveError::Collision { index: i });
            }
            if i > 0 && !is_neighbor(self.position_after(conf, i - 1), p) {
                return Err(MoveError::ChainBroken { i: i - 1, j: i });
            }
            if i + 1 < n && !is_neighbor(p, self.position_after(conf, i + 1)) {
                return Err(MoveError::ChainBroken { i, j: i + 1 });
            }
        }
        Ok(())
    }
}

/// Exact change of every accumulator under one move.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HeuristicDeltas {
    pub contact_energy: i64,
    pub allpair_sum: i64,
    pub consecutive_sum: i64,
    pub h_coord_sum: [i64; 3],
    pub h_norm_sum: i64,
    /// Change of the `n_H`-scaled centroid objective.
    pub centroid_scaled: i64,
}

impl HeuristicDeltas {
    /// Change of the objective selected by `kind`.
    #[inline]
    pub fn get(&self, kind: HeuristicKind) -> i64 {
        match kind {
            HeuristicKind::Contacts => self.contact_energy,
            HeuristicKind::AllPairDistance => self.allpair_sum - self.consecutive_sum,
            HeuristicKind::CentroidDistance => self.centroid_scaled,
        }
    }
}

/// Integer accumulators from which all three objectives are read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicState {
    /// HP energy; the contacts objective.
    pub contact_energy: i64,
    /// Sum of `d^2` over all unordered H-H pairs.
    pub allpair_sum: i64,
    /// Sum of `d^2` over H-H pairs adjacent in the chain.
    pub consecutive_sum: i64,
    /// Sum of the H positions.
    pub h_coord_sum: [i64; 3],
    /// Sum of `|p|^2` over H positions.
    pub h_norm_sum: i64,
    h_count: i64,
}

fn coords(p: LatticePoint) -> [i64; 3] {
    [p.x as i64, p.y as i64, p.z as i64]
}

fn dot(a: [i64; 3], b: [i64; 3]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl HeuristicState {
    /// Computes every accumulator by direct summation.
    pub fn recompute(conf: &Conformation, seq: &HpSequence) -> Self {
        let h = seq.h_indices();
        let mut contacts = 0;
        let mut allpair_sum = 0;
        let mut consecutive_sum = 0;
        for (a, &i) in h.iter().enumerate() {
            for &j in &h[a + 1..] {
                let d2 = squared_distance(conf.position(i), conf.position(j));
                allpair_sum += d2;
                if j == i + 1 {
                    consecutive_sum += d2;
                } else if is_neighbor(conf.position(i), conf.position(j)) {
                    contacts += 1;
                }
            }
        }
        let mut h_coord_sum = [0i64; 3];
        let mut h_norm_sum = 0;
        for &i in h {
            let p = conf.position(i);
            let c = coords(p);
            for k in 0..3 {
                h_coord_sum[k] += c[k];
            }
            h_norm_sum += p.norm_sq();
        }
        Self {
            contact_energy: -contacts,
            allpair_sum,
            consecutive_sum,
            h_coord_sum,
            h_norm_sum,
            h_count: h.len() as i64,
        }
    }

    /// Current value of the objective selected by `kind`.
    pub fn value(&self, kind: HeuristicKind) -> i64 {
        match kind {
            HeuristicKind::Contacts => self.contact_energy,
            HeuristicKind::AllPairDistance => self.allpair_sum - self.consecutive_sum,
            HeuristicKind::CentroidDistance => self.centroid_scaled(),
        }
    }

    /// `n_H * h3`, exactly.
    pub fn centroid_scaled(&self) -> i64 {
        self.h_count * self.h_norm_sum - dot(self.h_coord_sum, self.h_coord_sum)
    }

    pub fn h_count(&self) -> i64 {
        self.h_count
    }

    /// Deltas of all accumulators if `mv` were executed. Touches only pairs
    /// involving moved monomers; neither `self` nor `conf` is modified.
    pub fn simulate(&self, conf: &Conformation, seq: &HpSequence, mv: &Move) -> HeuristicDeltas {
        let changes = mv.changes();
        let mut old_contacts = 0i64;
        let mut new_contacts = 0i64;
        let mut d_coord = [0i64; 3];
        let mut d_norm = 0i64;

        for (a, &(i, np)) in changes.iter().enumerate() {
            if !seq.is_h(i) {
                continue;
            }
            let op = conf.position(i);
            for q in op.neighbors() {
                if let Some(j) = conf.occupant(q) {
                    if i.abs_diff(j) > 1 && seq.is_h(j) && (j > i || !mv.contains(j)) {
                        old_contacts += 1;
                    }
                }
            }
            for q in np.neighbors() {
                if let Some(j) = conf.occupant(q) {
                    if i.abs_diff(j) > 1 && seq.is_h(j) && !mv.contains(j) {
                        new_contacts += 1;
                    }
                }
            }
            for &(j, nq) in &changes[a + 1..] {
                if j > i + 1 && seq.is_h(j) && is_neighbor(np, nq) {
                    new_contacts += 1;
                }
            }
            let (oc, nc) = (coords(op), coords(np));
            for k in 0..3 {
                d_coord[k] += nc[k] - oc[k];
            }
            d_norm += np.norm_sq() - op.norm_sq();
        }

        // Chain-adjacent H-H pairs touched by the move, each counted once.
        let mut d_consecutive = 0i64;
        let mut next_pair = 0usize;
        for &(i, _) in changes {
            for lo in i.saturating_sub(1).max(next_pair)..=i {
                if lo + 1 >= conf.len() {
                    break;
                }
                if seq.is_h(lo) && seq.is_h(lo + 1) {
                    let before = squared_distance(conf.position(lo), conf.position(lo + 1));
                    let after = squared_distance(mv.position_after(conf, lo), mv.position_after(conf, lo + 1));
                    d_consecutive += after - before;
                }
            }
            next_pair = i + 1;
        }

        let s = self.h_coord_sum;
        let s_new = [s[0] + d_coord[0], s[1] + d_coord[1], s[2] + d_coord[2]];
        let d_sq = dot(s_new, s_new) - dot(s, s);
        let scaled = self.h_count * d_norm - d_sq;
        HeuristicDeltas {
            contact_energy: old_contacts - new_contacts,
            // Lagrange identity: sum over pairs |p_i - p_j|^2 = n_H sum |p|^2 - |sum p|^2.
            allpair_sum: scaled,
            consecutive_sum: d_consecutive,
            h_coord_sum: d_coord,
            h_norm_sum: d_norm,
            centroid_scaled: scaled,
        }
    }

    /// Applies `mv` to `conf` and updates every accumulator.
    pub fn execute(&mut self, conf: &mut Conformation, seq: &HpSequence, mv: &Move) -> Result<HeuristicDeltas, MoveError> {
        mv.check_feasible(conf)?;
        let d = self.simulate(conf, seq, mv);
        self.apply(&d);
        conf.relocate(mv.changes());
        Ok(d)
    }

    fn apply(&mut self, d: &HeuristicDeltas) {
        self.contact_energy += d.contact_energy;
        self.allpair_sum += d.allpair_sum;
        self.consecutive_sum += d.consecutive_sum;
        for k in 0..3 {
            self.h_coord_sum[k] += d.h_coord_sum[k];
        }
        self.h_norm_sum += d.h_norm_sum;
    }
}
