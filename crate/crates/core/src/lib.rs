//! Exact computation with quasimodular forms, quasimodular Hecke algebras
//! and the Hopf algebras acting on them.

pub mod error;
pub mod exactq;
pub mod forms;
pub mod heckealg;
pub mod hopfsym;
pub mod lattice;
pub mod quasimod;
pub mod suites;
pub mod twisted;

pub use error::{Error, Result};
