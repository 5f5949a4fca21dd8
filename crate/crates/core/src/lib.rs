//! Generalized stadium billiards: the billiard map, its symbolic coding, constructive
//! realization of itineraries, and lower bounds on topological entropy.

// `!(x > 0.0)` style checks are deliberate: they reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coding;
pub mod freearc;
pub mod geometry;
pub mod sft;
pub mod shooting;
pub mod unfolding;
