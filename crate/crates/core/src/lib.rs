//! Exact computation of the `S_n`-coloring invariant of flat virtual knots.
//!
//! The pipeline runs Gauss code -> [`gauss::GaussDiagram`] -> coloring
//! matrix over the truncated ring [`sring::SElem`] -> `(k, k)`
//! quasideterminant -> coloring polynomials. All arithmetic is exact.

pub mod catalog;
pub mod cli;
pub mod coloring;
pub mod gauss;
pub mod laurent;
pub mod ncmatrix;
pub mod semiquandle;
pub mod sring;
