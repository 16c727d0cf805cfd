//! Computational tools for finite orthogonal groups: quadratic spaces,
//! the O/SO/K/T/Ω subgroup lattice, orthogonal decompositions of isometries,
//! reality deciders, explicit constructions and Frobenius-Schur indicators.

pub mod algebra;
pub mod characters;
pub mod constructions;
pub mod decomp;
pub mod error;
pub mod forms;
pub mod group;
pub mod ogroup;
pub mod reality;
pub mod verify;

pub use error::{Error, Result};
