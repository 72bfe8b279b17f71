//! Finite groups as Cayley tables, extensions by cyclic groups of prime
//! order, and the machinery for sweeping them against structural theorems.

pub mod arith;
pub mod aut;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod extension;
pub mod families;
pub mod group;
pub mod iso;
pub mod ok;
pub mod presentation;
pub mod subgroup;
pub mod verify;

pub use error::{GroupError, Result};
pub use group::{Family, Group};
