//! Protein structure prediction on the face-centred cubic lattice under the
//! HP energy model.
//!
//! The solver is a segment-based hybrid local search: each iteration
//! exhaustively re-places one contiguous window or several scattered monomers,
//! guided by one of three heuristics (contact energy, all-pair H-H distance,
//! distance to the hydrophobic centroid), with a tabu list over monomers and
//! segment growth on stagnation.
//!
//! Modules:
//! - [`lattice`]: FCC basis, neighbour relation, distances.
//! - [`hp`]: sequences, conformations, validation, energy.
//! - [`heuristics`]: incremental integer objectives and moves.
//! - [`search`]: the segment search itself.
//! - [`oracle`]: brute-force optima and neighbourhoods for small cases.
//! - [`bench`]: instance files, batch runs, statistics and exports.

pub mod bench;
pub mod heuristics;
pub mod hp;
pub mod lattice;
pub mod oracle;
pub mod search;

pub use heuristics::{HeuristicKind, HeuristicState, Move};
pub use hp::{energy, parse_sequence, Conformation, HpSequence, Monomer};
pub use lattice::{LatticePoint, BASIS};
pub use search::{lws_run, RunResult, SearchParams, SearchState};
