//! Brute-force oracles: equilibria, candidate sets, potentials, fixed points.

pub mod candidates;
pub mod corpus;
pub mod fixed_point;
pub mod nash;
pub mod potential;
pub mod correspondence;

pub use candidates::{bayesian_candidate_set, candidate_set, CandidateSet};
pub use corpus::{congestion_corpus, random_bayesian_game, random_congestion_game};
pub use fixed_point::{fixed_point_solve, SCAN_INTERVALS};
pub use nash::{enumerate_bne, enumerate_nash, enumerate_strategies, is_bne, is_nash, is_tie_stable_nash};
pub use potential::{apply_moves, collision_free_check, potential};
pub use correspondence::{
    bayesian_correspondence_check, is_self_fulfilling, correspondence_check, BayesianCorrespondenceReport,
    CorrespondenceReport, Violation,
};
