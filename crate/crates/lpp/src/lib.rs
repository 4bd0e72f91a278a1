//! Maximal path weights in the complete directed graph on the integer
//! line with i.i.d. random edge weights.
//!
//! The crate provides, bottom up:
//!
//! * edge-weight laws with `-inf` atoms, their standing-condition
//!   validation and sampling ([`model`]);
//! * last-passage DP solvers for maximal path weights, positive-edge
//!   weights and path lengths, plus a brute-force enumeration oracle
//!   ([`dp`], [`oracle`]);
//! * detection of skeleton and renewal vertices on sampled windows and
//!   extraction of regeneration cycles ([`regen`]);
//! * compound-renewal estimation: moments, cumulant generating
//!   functions, the rate function by constrained optimization, 2-D
//!   Legendre transforms, size-biased residual vectors and forward
//!   simulation ([`crp`]);
//! * Monte Carlo experiments comparing the law of the maximal weight
//!   against its local and integro-local asymptotics ([`harness`]);
//! * configuration, deterministic seeding and result serialization
//!   ([`config`], [`seed`], [`report`]).

pub mod config;
pub mod crp;
pub mod dp;
pub mod error;
pub mod harness;
pub mod model;
pub mod oracle;
pub mod regen;
pub mod report;
pub mod seed;
pub mod stats;
pub mod weight;
pub mod window;

pub use error::{Error, Result};
pub use weight::Weight;
