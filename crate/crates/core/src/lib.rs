//! Construction and classification of binary doubly even self-dual codes
//! up to permutation equivalence.

pub mod catalog;
pub mod classify;
pub mod code;
pub mod construct;
pub mod equiv;
pub mod error;
pub mod gf2;
pub mod perm;
pub mod quad;

pub use code::{LinearCode, WeightDistribution};
pub use error::{Error, Result};
pub use perm::{PermGroup, Permutation};
