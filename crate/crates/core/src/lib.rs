//! Multiplex graph matching matched filters.
//!
//! * [`multiplex`]: multiplex graphs, padding schemes, the matching objective
//! * [`assignment`]: exact linear assignment
//! * [`mfaq`]: the Frank-Wolfe multiplex matcher
//! * [`filter`]: random-restart template search and ranking
//! * [`generators`]: random multiplex instances with known alignments
//! * [`lab`]: matchability statistics, brute-force oracles, experiment sweeps
//! * [`io`]: text formats shared by the CLI and the C ABI

pub mod assignment;
pub mod cli;
pub mod error;
pub mod filter;
pub mod generators;
pub mod io;
pub mod lab;
pub mod mfaq;
pub mod multiplex;
pub mod rng;

pub use assignment::{solve_lap_max, solve_lap_max_constrained, Permutation};
pub use error::{Error, Result};
pub use filter::{dedup_matchings, mgmmf, recovered_signal_stats, MatchRanking, RankedMatch};
pub use mfaq::{mfaq, DoublyStochasticMatrix, SeedSpec, SolveTrace, SolverConfig};
pub use multiplex::{
    embed_oplus_zero, objective, pad, validate_multiplex, Channel, ChannelWeights, MultiplexGraph,
    PaddedMultiplex, PaddingScheme, RawChannel, Role,
};
