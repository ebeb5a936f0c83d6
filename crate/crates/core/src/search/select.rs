use super::moves::{count_placements, count_placements_capped};
use super::params::SearchParams;
use crate::heuristics::HeuristicKind;
use crate::hp::Conformation;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Re-draws allowed before an iteration gives up on finding a segment.
pub const SELECTION_ATTEMPTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SegmentKind {
    /// One contiguous window.
    Single,
    /// Several short windows from different parts of the chain.
    Multiple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentSelection {
    pub kind: SegmentKind,
    /// Selected monomer indices, strictly increasing.
    pub indices: Vec<usize>,
}

/// Iteration-indexed tabu record for single monomers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TabuList {
    expiry: Vec<u64>,
}

impl TabuList {
    pub fn new(n: usize) -> Self {
        Self { expiry: vec![0; n] }
    }

    /// Tabu at iteration `t` iff the recorded expiry is at least `t`.
    #[inline]
    pub fn is_tabu(&self, index: usize, iteration: u64) -> bool {
        self.expiry[index] >= iteration && self.expiry[index] > 0
    }

    pub fn make_tabu(&mut self, index: usize, until: u64) {
        self.expiry[index] = until;
    }

    pub fn expiry(&self, index: usize) -> u64 {
        self.expiry[index]
    }
}

pub fn select_segment_type<R: Rng + ?Sized>(rng: &mut R) -> SegmentKind {
    if rng.random_bool(0.5) {
        SegmentKind::Single
    } else {
        SegmentKind::Multiple
    }
}

pub fn select_heuristic<R: Rng + ?Sized>(rng: &mut R) -> HeuristicKind {
    HeuristicKind::ALL[rng.random_range(0..HeuristicKind::ALL.len())]
}

/// Effective single-window width for a chain of `n` monomers.
pub fn single_window_size(segment_size: usize, params: &SearchParams, n: usize) -> usize {
    segment_size.min(params.max_single_segment_size).min(n.saturating_sub(1))
}

/// Total positions re-optimized in multiple-segment mode.
pub fn multiple_total_size(segment_size: usize, n: usize) -> usize {
    segment_size.min((n / 4).max(1)).min(n.saturating_sub(1))
}

/// The contiguous window of `width` indices around `center`: starts at
/// `center - width/2`, shifted to stay inside `0..n`.
pub fn window_around(center: usize, width: usize, n: usize) -> std::ops::Range<usize> {
    let start = center.saturating_sub(width / 2).min(n - width);
    start..start + width
}

/// Draws the monomers to re-optimize this iteration, or `None` when every
/// attempt hits a tabu index.
pub fn select_segment_variables<R: Rng + ?Sized>(
    conf: &Conformation,
    tabu: &TabuList,
    iteration: u64,
    segment_size: usize,
    kind: SegmentKind,
    params: &SearchParams,
    rng: &mut R,
) -> Option<SegmentSelection> {
    let n = conf.len();
    match kind {
        SegmentKind::Single => {
            let width = single_window_size(segment_size, params, n);
            if width == 0 {
                return None;
            }
            for _ in 0..SELECTION_ATTEMPTS {
                let center = rng.random_range(0..n);
                let window = window_around(center, width, n);
                if window.clone().all(|i| !tabu.is_tabu(i, iteration)) {
                    let indices = shrink_to_budget(conf, center, width, params.max_single_neighborhood);
                    return Some(SegmentSelection { kind, indices });
                }
            }
            None
        }
        SegmentKind::Multiple => {
            let total = multiple_total_size(segment_size, n);
            if total == 0 {
                return None;
            }
            let sub = params.multi_sub_segment_size.min(total);
            let mut starts: Vec<usize> = (0..=n - sub).collect();
            for _ in 0..SELECTION_ATTEMPTS {
                starts.shuffle(rng);
                if let Some(mut picked) = pick_runs(&starts, total, sub, tabu, iteration) {
                    trim_to_budget(conf, &mut picked, params.max_multiple_neighborhood);
                    let mut indices: Vec<usize> = picked.iter().flat_map(|r| r.clone()).collect();
                    indices.sort_unstable();
                    return Some(SegmentSelection { kind, indices });
                }
            }
            None
        }
    }
}

/// Greedily takes windows in `starts` order until `total` positions are
/// covered. Windows are tabu-free and separated by at least one unselected
/// monomer. Result is in draw order.
fn pick_runs(
    starts: &[usize],
    total: usize,
    sub: usize,
    tabu: &TabuList,
    iteration: u64,
) -> Option<Vec<std::ops::Range<usize>>> {
    let mut picked: Vec<std::ops::Range<usize>> = Vec::new();
    let mut covered = 0;
    for &s in starts {
        if covered == total {
            break;
        }
        let len = sub.min(total - covered);
        let run = s..s + len;
        if run.clone().any(|i| tabu.is_tabu(i, iteration)) {
            continue;
        }
        if picked.iter().any(|r| run.start <= r.end && r.start <= run.end) {
            continue;
        }
        covered += len;
        picked.push(run);
    }
    (covered == total).then_some(picked)
}

/// Narrows the window around `center` until its placement count fits the
/// budget. Each narrower window lies inside the previous one.
fn shrink_to_budget(conf: &Conformation, center: usize, mut width: usize, budget: u64) -> Vec<usize> {
    let n = conf.len();
    loop {
        let indices: Vec<usize> = window_around(center, width, n).collect();
        if width == 1 || count_placements_capped(conf, &indices, budget) <= budget {
            return indices;
        }
        width -= 1;
    }
}

fn trim_to_budget(conf: &Conformation, picked: &mut Vec<std::ops::Range<usize>>, budget: u64) {
    let counts: Vec<u64> = picked
        .iter()
        .map(|r| count_placements(conf, &r.clone().collect::<Vec<_>>()).max(1))
        .collect();
    let mut keep = picked.len();
    let product = |k: usize| counts[..k].iter().fold(1u64, |acc, &c| acc.saturating_mul(c));
    while keep > 1 && product(keep) > budget {
        keep -= 1;
    }
    picked.truncate(keep);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn window_convention() {
        assert_eq!(window_around(10, 6, 48), 7..13);
        assert_eq!(window_around(0, 6, 48), 0..6);
        assert_eq!(window_around(47, 6, 48), 42..48);
        assert_eq!(window_around(5, 1, 48), 5..6);
    }

    #[test]
    fn oversized_windows_shrink_inside_the_budget() {
        let conf = Conformation::straight(20);
        let params = SearchParams { max_single_neighborhood: 500, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let sel = select_segment_variables(&conf, &TabuList::new(20), 1, 6, SegmentKind::Single, &params, &mut rng)
                .unwrap();
            assert!(count_placements(&conf, &sel.indices) <= 500 || sel.indices.len() == 1);
            assert!(sel.indices.windows(2).all(|w| w[1] == w[0] + 1));
        }
        // A free chain end of six would need about a million placements.
        let sel = shrink_to_budget(&conf, 0, 6, 500);
        assert!(sel.len() < 6 && sel[0] == 0);
    }

    #[test]
    fn all_tabu_gives_no_selection() {
        let conf = Conformation::straight(10);
        let mut tabu = TabuList::new(10);
        for i in 0..10 {
            tabu.make_tabu(i, 100);
        }
        let params = SearchParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for kind in [SegmentKind::Single, SegmentKind::Multiple] {
            assert_eq!(select_segment_variables(&conf, &tabu, 5, 1, kind, &params, &mut rng), None);
        }
        assert!(select_segment_variables(&conf, &tabu, 101, 1, SegmentKind::Single, &params, &mut rng).is_some());
    }

    #[test]
    fn single_window_avoids_tabu() {
        let conf = Conformation::straight(48);
        let mut tabu = TabuList::new(48);
        tabu.make_tabu(20, 10);
        let params = SearchParams { max_single_neighborhood: u64::MAX, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let sel = select_segment_variables(&conf, &tabu, 1, 6, SegmentKind::Single, &params, &mut rng).unwrap();
            assert_eq!(sel.indices.len(), 6);
            assert!(sel.indices.windows(2).all(|w| w[1] == w[0] + 1));
            assert!(!sel.indices.contains(&20));
        }
    }

    #[test]
    fn multiple_selection_is_spread_out() {
        let conf = Conformation::straight(48);
        let mut tabu = TabuList::new(48);
        tabu.make_tabu(7, 10);
        let params = SearchParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let sel = select_segment_variables(&conf, &tabu, 1, 3, SegmentKind::Multiple, &params, &mut rng).unwrap();
            assert_eq!(sel.indices.len(), 3);
            assert!(sel.indices.windows(2).all(|w| w[1] >= w[0] + 2));
            assert!(!sel.indices.contains(&7));
        }
    }

    #[test]
    fn type_and_heuristic_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let singles = (0..10_000).filter(|_| select_segment_type(&mut rng) == SegmentKind::Single).count();
        assert!((4500..=5500).contains(&singles), "{singles}");
        let mut counts = [0usize; 3];
        for _ in 0..10_000 {
            let k = select_heuristic(&mut rng);
            counts[HeuristicKind::ALL.iter().position(|&h| h == k).unwrap()] += 1;
        }
        for c in counts {
            assert!((3000..=3700).contains(&c), "{counts:?}");
        }
    }

    #[test]
    fn seeded_draws_repeat() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..32).map(|_| (select_segment_type(&mut rng), select_heuristic(&mut rng))).collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
        assert_ne!(draw(5), draw(6));
    }
}
