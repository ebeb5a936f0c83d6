//! Hybrid segment local search.
//!
//! Each iteration draws a segment type (one contiguous window or several
//! scattered short windows), picks non-tabu monomers to fill it, enumerates
//! every feasible repositioning of those monomers, and executes the move that
//! is best under a randomly drawn heuristic. The global best is tracked on the
//! true HP energy. On stagnation the segment grows; a new global best resets it.

mod init;
mod moves;
mod params;
mod select;

pub use init::{initialize_conformation, random_walk, warm_up};
pub use moves::{count_placements, count_placements_capped, generate_moves};
pub use params::{ParamError, SearchParams, StableFactor, StagnationSchedule};
pub use select::{
    multiple_total_size, select_heuristic, select_segment_type, select_segment_variables, single_window_size,
    window_around, SegmentKind, SegmentSelection, TabuList, SELECTION_ATTEMPTS,
};

use crate::heuristics::{HeuristicKind, HeuristicState, Move, MoveError};
use crate::hp::{Conformation, HpSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};
use thiserror::Error;

/// Release builds fully validate the conformation every this many iterations.
const RELEASE_VALIDATION_PERIOD: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("could not build a self-avoiding start walk")]
    InitializationFailed,
    #[error("generator produced an infeasible move: {0}")]
    InfeasibleMove(#[from] MoveError),
    #[error("conformation became infeasible at iteration {iteration}: {report}")]
    Corrupted { iteration: u64, report: String },
    #[error("conformation length {found} does not match sequence length {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Params(#[from] ParamError),
}

/// One point of the search-progress curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: u64,
    pub elapsed_ms: u64,
    pub current_energy: i64,
    pub best_energy: i64,
}

/// What a single iteration did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub kind: SegmentKind,
    pub selection: Option<SegmentSelection>,
    pub heuristic: Option<HeuristicKind>,
    pub neighborhood_size: usize,
    pub executed: Option<Move>,
    pub improved: bool,
    pub segment_grew: bool,
}

/// Complete state of one search run.
#[derive(Debug, Clone)]
pub struct SearchState {
    seq: HpSequence,
    params: SearchParams,
    conformation: Conformation,
    heuristics: HeuristicState,
    tabu: TabuList,
    iteration: u64,
    schedule: StagnationSchedule,
    best_energy: i64,
    best_conformation: Conformation,
    trace: Vec<TraceRecord>,
    started: Instant,
}

impl SearchState {
    pub fn new(seq: HpSequence, conformation: Conformation, params: SearchParams) -> Result<Self, SearchError> {
        params.validate()?;
        if conformation.len() != seq.len() {
            return Err(SearchError::LengthMismatch { expected: seq.len(), found: conformation.len() });
        }
        let heuristics = HeuristicState::recompute(&conformation, &seq);
        let best_energy = heuristics.contact_energy;
        let mut state = Self {
            tabu: TabuList::new(seq.len()),
            schedule: StagnationSchedule::new(&params),
            best_conformation: conformation.clone(),
            seq,
            params,
            conformation,
            heuristics,
            iteration: 0,
            best_energy,
            trace: Vec::new(),
            started: Instant::now(),
        };
        state.push_trace();
        Ok(state)
    }

    pub fn sequence(&self) -> &HpSequence {
        &self.seq
    }

    pub fn params(&self) -> &SearchParams {
        &self.params
    }

    pub fn conformation(&self) -> &Conformation {
        &self.conformation
    }

    pub fn heuristics(&self) -> &HeuristicState {
        &self.heuristics
    }

    pub fn tabu(&self) -> &TabuList {
        &self.tabu
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn schedule(&self) -> &StagnationSchedule {
        &self.schedule
    }

    pub fn current_energy(&self) -> i64 {
        self.heuristics.contact_energy
    }

    pub fn best_energy(&self) -> i64 {
        self.best_energy
    }

    pub fn best_conformation(&self) -> &Conformation {
        &self.best_conformation
    }

    pub fn trace(&self) -> &[TraceRecord] {
        &self.trace
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }

    fn push_trace(&mut self) {
        self.trace.push(TraceRecord {
            iteration: self.iteration,
            elapsed_ms: self.started.elapsed().as_millis() as u64,
            current_energy: self.heuristics.contact_energy,
            best_energy: self.best_energy,
        });
    }

    /// One iteration: select, enumerate, simulate, execute, update tabu and
    /// stagnation bookkeeping.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<StepOutcome, SearchError> {
        self.iteration += 1;
        let kind = select_segment_type(rng);
        let selection = select_segment_variables(
            &self.conformation,
            &self.tabu,
            self.iteration,
            self.schedule.segment_size(),
            kind,
            &self.params,
            rng,
        );
        let mut outcome = StepOutcome {
            kind,
            selection: None,
            heuristic: None,
            neighborhood_size: 0,
            executed: None,
            improved: false,
            segment_grew: false,
        };

        if let Some(sel) = selection {
            let moves = generate_moves(&self.conformation, &sel.indices);
            outcome.neighborhood_size = moves.len();
            outcome.selection = Some(sel);
            if !moves.is_empty() {
                let heuristic = self.params.pinned_heuristic.unwrap_or_else(|| select_heuristic(rng));
                outcome.heuristic = Some(heuristic);
                let chosen = self.best_move(&moves, heuristic, rng);
                let mv = &moves[chosen];
                self.heuristics.execute(&mut self.conformation, &self.seq, mv)?;
                self.check_feasible()?;

                let (lo, hi) = self.params.tenure_range(self.seq.len());
                for i in mv.moved_indices() {
                    let tenure = rng.random_range(lo..=hi);
                    self.tabu.make_tabu(i, self.iteration + tenure);
                }
                if self.heuristics.contact_energy < self.best_energy {
                    self.best_energy = self.heuristics.contact_energy;
                    self.best_conformation = self.conformation.clone();
                    outcome.improved = true;
                }
                outcome.executed = Some(moves[chosen].clone());
            }
        }

        outcome.segment_grew = self.schedule.record(outcome.improved);
        if outcome.improved {
            self.push_trace();
        }
        Ok(outcome)
    }

    /// Index of a move with minimum delta; ties broken uniformly at random.
    fn best_move<R: Rng + ?Sized>(&self, moves: &[Move], heuristic: HeuristicKind, rng: &mut R) -> usize {
        let mut best = 0;
        let mut best_delta = i64::MAX;
        let mut ties = 0u32;
        for (k, mv) in moves.iter().enumerate() {
            let d = self.heuristics.simulate(&self.conformation, &self.seq, mv).get(heuristic);
            if d < best_delta {
                best_delta = d;
                best = k;
                ties = 1;
            } else if d == best_delta {
                ties += 1;
                if rng.random_range(0..ties) == 0 {
                    best = k;
                }
            }
        }
        best
    }

    fn check_feasible(&self) -> Result<(), SearchError> {
        if cfg!(debug_assertions) || self.iteration % RELEASE_VALIDATION_PERIOD == 0 {
            let report = self.conformation.validate();
            if !report.is_feasible() {
                return Err(SearchError::Corrupted { iteration: self.iteration, report: report.to_string() });
            }
        }
        Ok(())
    }

    fn should_stop(&self) -> bool {
        self.params.max_iterations.is_some_and(|m| self.iteration >= m)
            || self.params.wall_clock_budget.is_some_and(|b| self.started.elapsed() >= b)
            || self.params.target_energy.is_some_and(|t| self.best_energy <= t)
    }

    /// Runs until the iteration limit, time budget or target is reached.
    pub fn run<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<(), SearchError> {
        while !self.should_stop() {
            self.step(rng)?;
        }
        if self.trace.last().is_some_and(|t| t.iteration < self.iteration) {
            self.push_trace();
        }
        Ok(())
    }

    pub fn into_result(self) -> RunResult {
        RunResult {
            best_energy: self.best_energy,
            best_conformation: self.best_conformation,
            iterations: self.iteration,
            elapsed: self.started.elapsed(),
            trace: self.trace,
        }
    }
}

/// Output of a complete run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub best_energy: i64,
    pub best_conformation: Conformation,
    pub iterations: u64,
    pub elapsed: Duration,
    pub trace: Vec<TraceRecord>,
}

/// Builds a start walk from `params.rng_seed` and runs the search on it.
pub fn lws_run(seq: &HpSequence, params: &SearchParams) -> Result<RunResult, SearchError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let start = initialize_conformation(seq, params, &mut rng)?;
    let mut state = SearchState::new(seq.clone(), start, params.clone())?;
    state.run(&mut rng)?;
    Ok(state.into_result())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::{energy, parse_sequence};

    fn params(iters: u64, seed: u64) -> SearchParams {
        SearchParams { max_iterations: Some(iters), rng_seed: seed, ..Default::default() }
    }

    #[test]
    fn zero_iterations_returns_start() {
        let seq = parse_sequence("HPHPPHHPHH").unwrap();
        let p = params(0, 3);
        let r = lws_run(&seq, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let start = initialize_conformation(&seq, &p, &mut rng).unwrap();
        assert_eq!(r.best_conformation, start);
        assert_eq!(r.best_energy, energy(&start, &seq).unwrap());
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn finds_bent_optimum_for_hhh() {
        let seq = parse_sequence("HHH").unwrap();
        let r = lws_run(&seq, &params(1000, 1)).unwrap();
        assert_eq!(r.best_energy, -1);
        assert_eq!(energy(&r.best_conformation, &seq).unwrap(), -1);
    }

    #[test]
    fn best_is_monotone_and_bookkeeping_holds() {
        let seq = parse_sequence("HPHPPHHPHPPHPHHPPHPH").unwrap();
        let p = params(3000, 11);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let start = initialize_conformation(&seq, &p, &mut rng).unwrap();
        let mut st = SearchState::new(seq.clone(), start, p).unwrap();
        let mut best = st.best_energy();
        for _ in 0..3000 {
            let before_tabu = st.tabu().clone();
            let it = st.iteration() + 1;
            let out = st.step(&mut rng).unwrap();
            assert!(st.best_energy() <= best);
            assert!(st.best_energy() <= st.current_energy());
            best = st.best_energy();
            if let Some(mv) = &out.executed {
                for i in mv.moved_indices() {
                    assert!(!before_tabu.is_tabu(i, it), "moved tabu index {i}");
                    assert!(st.tabu().expiry(i) >= it + 4);
                }
            }
            if out.improved {
                assert_eq!(st.schedule().segment_size(), 1);
                assert_eq!(st.schedule().max_stable(), 1000);
            }
            assert_eq!(energy(st.best_conformation(), &seq).unwrap(), st.best_energy());
        }
        assert!(st.trace().windows(2).all(|w| w[0].iteration < w[1].iteration));
    }

    #[test]
    fn identical_seed_gives_identical_trace() {
        let seq = parse_sequence("HPHPPHHPHPPHPHHPPHPHHHPPHPH").unwrap();
        let strip = |r: RunResult| {
            (r.best_energy, r.best_conformation, r.trace.iter().map(|t| (t.iteration, t.current_energy, t.best_energy)).collect::<Vec<_>>())
        };
        let a = strip(lws_run(&seq, &params(4000, 21)).unwrap());
        let b = strip(lws_run(&seq, &params(4000, 21)).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn pinned_heuristic_is_used() {
        let seq = parse_sequence("HPHPPHHPHH").unwrap();
        let p = SearchParams { pinned_heuristic: Some(HeuristicKind::AllPairDistance), ..params(200, 2) };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let start = initialize_conformation(&seq, &p, &mut rng).unwrap();
        let mut st = SearchState::new(seq, start, p).unwrap();
        for _ in 0..200 {
            let out = st.step(&mut rng).unwrap();
            assert!(out.heuristic.is_none_or(|h| h == HeuristicKind::AllPairDistance));
        }
    }

    #[test]
    fn target_energy_stops_early() {
        let seq = parse_sequence("HHHH").unwrap();
        let p = SearchParams { max_iterations: Some(1_000_000), target_energy: Some(-1), rng_seed: 4, ..Default::default() };
        let r = lws_run(&seq, &p).unwrap();
        assert!(r.best_energy <= -1);
        assert!(r.iterations < 1_000_000);
    }
}
