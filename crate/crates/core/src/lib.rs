//! Consistent, low-adaptive and distributed algorithms for maximizing a monotone
//! submodular function under a cardinality constraint.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure function of
//! its inputs and a [`RandomTape`]; the only shared mutable state is the
//! [`QueryLedger`] that counts oracle queries and adaptive rounds. File formats,
//! thread pools and the command line live in the companion `smcc` crate.
//!
//! Module map:
//!
//! * [`oracle`]: objectives, instrumented evaluation, marginal restriction and
//!   compressed marginal summaries.
//! * [`randomness`]: addressable random tapes and ground-set permutations.
//! * [`centralized`]: greedy, threshold greedy, `ThreshSeqMod`, LAG and LTC.
//! * [`cluster`]: the simulated MapReduce cluster.
//! * [`distributed`]: R-DASH, G-DASH, T-DASH, L-Dist, RandGreeDI and MED.
//! * [`data`]: graph/similarity data and seeded generators.
//! * [`verify`]: brute-force optima, consistency trials and property checks.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod centralized;
pub mod cluster;
pub mod data;
pub mod distributed;
mod error;
mod math;
pub mod oracle;
pub mod randomness;
pub mod verify;

pub use centralized::{OrderedSolution, Status};
pub use cluster::{Cluster, ClusterConfig, Executor, Sequential};
pub use distributed::{MrAlgorithm, RunReport};
pub use error::{Error, Result};
pub use oracle::{Objective, QueryLedger, SubmodularInstance};
pub use randomness::RandomTape;
