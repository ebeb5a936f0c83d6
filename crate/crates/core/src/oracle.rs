//! Brute-force ground truth for small cases.
//!
//! [`enumerate_optimal`] walks every self-avoiding conformation of a short
//! chain; [`neighborhood_oracle`] lists every feasible repositioning of a few
//! selected monomers by trying all nearby lattice points and validating the
//! resulting walk. Neither shares code with the search's move generator.

use crate::heuristics::Move;
use crate::hp::{validate_positions, Conformation, HpSequence};
use crate::lattice::{is_neighbor, LatticePoint, BASIS};
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

/// Longest chain [`enumerate_optimal`] accepts.
pub const MAX_ENUMERATION_LENGTH: usize = 9;
/// Most selected monomers [`neighborhood_oracle`] accepts.
pub const MAX_ORACLE_SELECTION: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("sequence length {n} exceeds the enumeration bound {max}")]
    TooLong { n: usize, max: usize },
    #[error("selection of {k} monomers exceeds the oracle bound {max}")]
    SelectionTooLarge { k: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub optimal_energy: i64,
    /// Walks reaching the optimum (orbits of walks under symmetry reduction).
    pub optimizer_count: u64,
    /// Complete walks examined.
    pub enumerated: u64,
}

/// The 48 signed coordinate permutations, each as a direction relabelling.
/// Every one of them maps the basis set onto itself.
pub fn lattice_symmetries() -> Vec<[u8; 12]> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::with_capacity(48);
    for perm in PERMS {
        for signs in 0..8u8 {
            let map = |v: LatticePoint| {
                let c = [v.x, v.y, v.z];
                let s = |k: usize| if signs & (1 << k) != 0 { -1 } else { 1 };
                LatticePoint::new(s(0) * c[perm[0]], s(1) * c[perm[1]], s(2) * c[perm[2]])
            };
            let table: [u8; 12] = std::array::from_fn(|d| {
                let img = map(BASIS[d]);
                BASIS.iter().position(|&b| b == img).expect("symmetry preserves the basis") as u8
            });
            out.push(table);
        }
    }
    out
}

struct Enumerator<'a> {
    seq: &'a HpSequence,
    /// Non-identity symmetries fixing direction 0; used for canonical pruning.
    stabilizer: Vec<[u8; 12]>,
    dirs: Vec<u8>,
    points: Vec<LatticePoint>,
    occupied: FxHashSet<LatticePoint>,
    best: i64,
    count: u64,
    enumerated: u64,
}

impl Enumerator<'_> {
    /// False if some symmetry maps the direction prefix to a smaller one.
    fn prefix_is_canonical(&self) -> bool {
        'sym: for g in &self.stabilizer {
            for &d in &self.dirs {
                let img = g[d as usize];
                if img < d {
                    return false;
                }
                if img > d {
                    continue 'sym;
                }
            }
        }
        true
    }

    fn extend(&mut self, energy: i64) {
        let n = self.seq.len();
        let i = self.points.len();
        if i == n {
            self.enumerated += 1;
            if energy < self.best {
                self.best = energy;
                self.count = 1;
            } else if energy == self.best {
                self.count += 1;
            }
            return;
        }
        let last = self.points[i - 1];
        for d in 0..BASIS.len() as u8 {
            if i == 1 && d != 0 {
                break;
            }
            let p = last + BASIS[d as usize];
            if self.occupied.contains(&p) {
                continue;
            }
            self.dirs.push(d);
            if self.prefix_is_canonical() {
                let mut e = energy;
                if self.seq.is_h(i) {
                    for j in 0..i.saturating_sub(1) {
                        if self.seq.is_h(j) && is_neighbor(self.points[j], p) {
                            e -= 1;
                        }
                    }
                }
                self.points.push(p);
                self.occupied.insert(p);
                self.extend(e);
                self.occupied.remove(&p);
                self.points.pop();
            }
            self.dirs.pop();
        }
    }
}

/// Exact minimum energy over all self-avoiding walks, first step fixed to
/// `v_1`. With `symmetry_reduction` only walks that are lexicographically
/// minimal under the symmetries fixing `v_1` are visited.
pub fn enumerate_optimal(seq: &HpSequence, symmetry_reduction: bool) -> Result<OracleResult, OracleError> {
    let n = seq.len();
    if n > MAX_ENUMERATION_LENGTH {
        return Err(OracleError::TooLong { n, max: MAX_ENUMERATION_LENGTH });
    }
    let stabilizer = if symmetry_reduction {
        let identity: [u8; 12] = std::array::from_fn(|d| d as u8);
        lattice_symmetries().into_iter().filter(|g| g[0] == 0 && *g != identity).collect()
    } else {
        Vec::new()
    };
    let mut e = Enumerator {
        seq,
        stabilizer,
        dirs: Vec::with_capacity(n),
        points: vec![LatticePoint::ORIGIN],
        occupied: FxHashSet::from_iter([LatticePoint::ORIGIN]),
        best: i64::MAX,
        count: 0,
        enumerated: 0,
    };
    e.extend(0);
    Ok(OracleResult { optimal_energy: e.best, optimizer_count: e.count, enumerated: e.enumerated })
}

/// All lattice points within `radius` steps of `center`, by breadth-first search.
fn ball(center: LatticePoint, radius: usize) -> Vec<LatticePoint> {
    let mut dist: FxHashMap<LatticePoint, usize> = FxHashMap::default();
    let mut queue = VecDeque::from([center]);
    dist.insert(center, 0);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du == radius {
            continue;
        }
        for v in BASIS.iter().map(|&b| u + b) {
            if !dist.contains_key(&v) {
                dist.insert(v, du + 1);
                queue.push_back(v);
            }
        }
    }
    let mut pts: Vec<LatticePoint> = dist.into_keys().collect();
    pts.sort_unstable();
    pts
}

/// Every feasible simultaneous repositioning of `indices`, identity excluded;
/// each move lists only monomers that actually change position.
pub fn neighborhood_oracle(conf: &Conformation, indices: &[usize]) -> Result<Vec<Move>, OracleError> {
    if indices.len() > MAX_ORACLE_SELECTION {
        return Err(OracleError::SelectionTooLarge { k: indices.len(), max: MAX_ORACLE_SELECTION });
    }
    let n = conf.len();
    let mut selected = vec![false; n];
    for &i in indices {
        selected[i] = true;
    }
    if selected.iter().all(|&s| s) {
        return Ok(Vec::new());
    }
    // Each selected monomer stays within chain distance of the nearest fixed one.
    let candidates: Vec<Vec<LatticePoint>> = indices
        .iter()
        .map(|&i| {
            let (fixed, d) = (0..n)
                .filter(|&j| !selected[j])
                .map(|j| (j, j.abs_diff(i)))
                .min_by_key(|&(_, d)| d)
                .expect("some monomer is fixed");
            ball(conf.position(fixed), d)
        })
        .collect();

    let mut out = Vec::new();
    let mut positions = conf.positions().to_vec();
    place(conf, indices, &candidates, 0, &mut positions, &mut out);
    Ok(out)
}

fn place(
    conf: &Conformation,
    indices: &[usize],
    candidates: &[Vec<LatticePoint>],
    k: usize,
    positions: &mut [LatticePoint],
    out: &mut Vec<Move>,
) {
    if k == indices.len() {
        if validate_positions(positions).is_feasible() {
            let mv = Move::new(indices.iter().map(|&i| (i, positions[i]))).canonical(conf);
            if !mv.is_empty() {
                out.push(mv);
            }
        }
        return;
    }
    let i = indices[k];
    for &p in &candidates[k] {
        // Cheap necessary condition; the complete walk is validated above.
        if i > 0 && !is_neighbor(positions[i - 1], p) {
            continue;
        }
        positions[i] = p;
        place(conf, indices, candidates, k + 1, positions, out);
    }
    positions[i] = conf.position(i);
}
