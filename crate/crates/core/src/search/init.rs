use super::moves::generate_moves;
use super::params::SearchParams;
use super::select::TabuList;
use super::SearchError;
use crate::heuristics::{HeuristicKind, HeuristicState};
use crate::hp::{Conformation, HpSequence};
use crate::lattice::{LatticePoint, BASIS};
use rand::seq::SliceRandom;
use rand::Rng;
use rustc_hash::FxHashSet;

/// Backtracking steps allowed before giving up on a start walk.
const MAX_BACKTRACKS: u64 = 1_000_000;

/// Self-avoiding walk of `n` points from the origin, built by randomized
/// depth-first extension with backtracking.
pub fn random_walk<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Conformation, SearchError> {
    let n = n.max(1);
    let mut points = vec![LatticePoint::ORIGIN];
    let mut occupied: FxHashSet<LatticePoint> = FxHashSet::default();
    occupied.insert(LatticePoint::ORIGIN);
    // Per placed point: shuffled directions for its successor and a cursor.
    let mut orders: Vec<([u8; 12], usize)> = Vec::with_capacity(n);
    let fresh = |rng: &mut R| {
        let mut d: [u8; 12] = std::array::from_fn(|k| k as u8);
        d.shuffle(rng);
        (d, 0usize)
    };
    orders.push(fresh(rng));
    let mut backtracks = 0u64;

    while points.len() < n {
        let top = orders.last_mut().expect("at least the origin is placed");
        if top.1 == 12 {
            backtracks += 1;
            if backtracks > MAX_BACKTRACKS || points.len() == 1 {
                return Err(SearchError::InitializationFailed);
            }
            orders.pop();
            let p = points.pop().expect("non-empty");
            occupied.remove(&p);
            continue;
        }
        let dir = top.0[top.1];
        top.1 += 1;
        let next = *points.last().expect("non-empty") + BASIS[dir as usize];
        if occupied.insert(next) {
            points.push(next);
            orders.push(fresh(rng));
        }
    }
    Conformation::new(points).map_err(|_| SearchError::InitializationFailed)
}

/// Greedy single-residue improvement: each iteration executes the best
/// contact-energy move over all non-tabu monomers, then makes it tabu.
pub fn warm_up<R: Rng + ?Sized>(
    conf: &mut Conformation,
    seq: &HpSequence,
    params: &SearchParams,
    iterations: u64,
    rng: &mut R,
) -> Result<(), SearchError> {
    let n = seq.len();
    let mut state = HeuristicState::recompute(conf, seq);
    let mut tabu = TabuList::new(n);
    let (lo, hi) = params.tenure_range(n);
    for it in 1..=iterations {
        let mut best: Option<(i64, crate::heuristics::Move)> = None;
        let mut ties = 0u32;
        for i in (0..n).filter(|&i| !tabu.is_tabu(i, it)) {
            for mv in generate_moves(conf, &[i]) {
                let d = state.simulate(conf, seq, &mv).get(HeuristicKind::Contacts);
                match &best {
                    Some((bd, _)) if d > *bd => {}
                    Some((bd, _)) if d == *bd => {
                        ties += 1;
                        if rng.random_range(0..ties) == 0 {
                            best = Some((d, mv));
                        }
                    }
                    _ => {
                        ties = 1;
                        best = Some((d, mv));
                    }
                }
            }
        }
        let Some((_, mv)) = best else { continue };
        state.execute(conf, seq, &mv)?;
        for i in mv.moved_indices() {
            tabu.make_tabu(i, it + rng.random_range(lo..=hi));
        }
    }
    Ok(())
}

/// Random start walk, optionally improved by `params.warmup_iterations` of
/// greedy single-residue search.
pub fn initialize_conformation<R: Rng + ?Sized>(
    seq: &HpSequence,
    params: &SearchParams,
    rng: &mut R,
) -> Result<Conformation, SearchError> {
    let mut conf = random_walk(seq.len(), rng)?;
    if params.warmup_iterations > 0 {
        warm_up(&mut conf, seq, params, params.warmup_iterations, rng)?;
    }
    Ok(conf)
}
