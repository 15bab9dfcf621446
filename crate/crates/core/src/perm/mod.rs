//! Permutation groups on `{0, ..., n - 1}`.

mod chain;
mod group;
mod orbit;
mod permutation;
mod subgroups;

use thiserror::Error;

pub use chain::{ChainConfig, StabilizerChain};
pub use group::{GeneratedGroup, Orbit, Transitivity};
pub use permutation::{compose, Permutation};
pub use subgroups::{
    cyclic_sylow2_witness, index_two_subgroups, normal_closure, odd_order_core, Sylow2Witness,
};

pub(crate) use permutation::two_adic_exponent_of_cycles;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("domain sizes differ: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("image array is not a bijection")]
    NotBijection,
    #[error("point {point} outside domain of size {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("cannot parse permutation: {0}")]
    Parse(String),
    #[error("empty point set")]
    EmptySubset,
    #[error("no normal 2-complement: {0}")]
    NoNormalComplement(String),
}
