#![allow(dead_code)]

use hpfcc::hp::Monomer;
use hpfcc::search::{generate_moves, random_walk};
use hpfcc::{Conformation, HeuristicState, HpSequence, LatticePoint};
use rand::seq::index::sample;
use rand::Rng;

pub fn random_sequence<R: Rng>(rng: &mut R, n: usize) -> HpSequence {
    let m = (0..n).map(|_| if rng.random_bool(0.5) { Monomer::H } else { Monomer::P }).collect();
    HpSequence::new(m).unwrap()
}

/// Sorted distinct indices: a contiguous window half of the time, otherwise
/// a scattered sample.
pub fn random_selection<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let k = k.min(n);
    let mut v: Vec<usize> = if rng.random_bool(0.5) {
        let start = rng.random_range(0..=n - k);
        (start..start + k).collect()
    } else {
        sample(rng, n, k).into_vec()
    };
    v.sort_unstable();
    v
}

/// Applies `steps` uniformly chosen moves of random 1-3 monomer selections.
pub fn scramble<R: Rng>(rng: &mut R, conf: &mut Conformation, seq: &HpSequence, steps: usize) {
    let mut state = HeuristicState::recompute(conf, seq);
    let n = conf.len();
    for _ in 0..steps {
        let k = rng.random_range(1..=3usize.min(n));
        let sel = random_selection(rng, n, k);
        let moves = generate_moves(conf, &sel);
        if moves.is_empty() {
            continue;
        }
        let mv = &moves[rng.random_range(0..moves.len())];
        state.execute(conf, seq, mv).unwrap();
    }
}

/// Random self-avoiding walk, then compacted by random moves so that
/// collisions and contacts are common.
pub fn random_conformation<R: Rng>(rng: &mut R, seq: &HpSequence, steps: usize) -> Conformation {
    let mut c = random_walk(seq.len(), rng).unwrap();
    scramble(rng, &mut c, seq, steps);
    c
}

fn d2(p: LatticePoint, q: LatticePoint) -> i64 {
    let (dx, dy, dz) = ((p.x - q.x) as i64, (p.y - q.y) as i64, (p.z - q.z) as i64);
    dx * dx + dy * dy + dz * dz
}

/// HP energy by scanning every pair: lattice neighbours are exactly the
/// points at squared distance 2.
pub fn pair_scan_energy(positions: &[LatticePoint], seq: &HpSequence) -> i64 {
    let n = positions.len();
    let mut e = 0;
    for i in 0..n {
        for j in i + 2..n {
            if seq.is_h(i) && seq.is_h(j) && d2(positions[i], positions[j]) == 2 {
                e -= 1;
            }
        }
    }
    e
}

/// Objective values computed from their definitions.
#[derive(Debug, PartialEq, Eq)]
pub struct Objectives {
    pub h1: i64,
    pub h2: i64,
    /// `n_H^2 * h3`, from distances to the centroid scaled by `n_H`.
    pub h3_scaled_sq: i64,
}

pub fn objectives(positions: &[LatticePoint], seq: &HpSequence) -> Objectives {
    let h: Vec<LatticePoint> = (0..positions.len()).filter(|&i| seq.is_h(i)).map(|i| positions[i]).collect();
    let nh = h.len() as i64;
    let mut h2 = 0;
    for i in 0..positions.len() {
        for j in i + 2..positions.len() {
            if seq.is_h(i) && seq.is_h(j) {
                h2 += d2(positions[i], positions[j]);
            }
        }
    }
    let s = h.iter().fold((0i64, 0i64, 0i64), |a, p| (a.0 + p.x as i64, a.1 + p.y as i64, a.2 + p.z as i64));
    let h3_scaled_sq = h
        .iter()
        .map(|p| {
            let (x, y, z) = (nh * p.x as i64 - s.0, nh * p.y as i64 - s.1, nh * p.z as i64 - s.2);
            x * x + y * y + z * z
        })
        .sum();
    Objectives { h1: pair_scan_energy(positions, seq), h2, h3_scaled_sq }
}

pub fn state_objectives(state: &HeuristicState) -> Objectives {
    use hpfcc::HeuristicKind::*;
    Objectives {
        h1: state.value(Contacts),
        h2: state.value(AllPairDistance),
        h3_scaled_sq: state.h_count() * state.value(CentroidDistance),
    }
}
