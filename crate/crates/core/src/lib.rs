//! Exact search and verification toolkit for r-cross-intersecting families
//! of vectors over mixed-radix product domains.
//!
//! Two families A, B of points in S_p = [p_1] x ... x [p_n] are
//! r-cross-intersecting when every a in A and b in B agree in at least r
//! coordinates. The crate computes the extremal value of |A| * |B| on small
//! domains (exhaustively or through monotone support systems), evaluates the
//! known upper bounds, builds the Hamming-ball pairs that are conjectured to
//! be optimal, and cross-checks all of it with randomized suites.

pub mod balls;
pub mod bounds;
pub mod commgame;
pub mod compress;
pub mod domain;
mod error;
pub mod family;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
