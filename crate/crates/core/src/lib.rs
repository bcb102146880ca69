//! Exact Shimura lifts of half-integral weight modular forms given by their
//! Fourier expansions.

pub mod characters;
pub mod cli;
pub mod fixtures;
pub mod plusspace;
pub mod qseries;
mod intpoly;
pub mod scalars;
pub mod shimura;
pub mod verify;
pub mod weilrep;
