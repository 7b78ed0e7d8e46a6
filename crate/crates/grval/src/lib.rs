//! Exact symbolic computation with valuation filtrations on noncommutative
//! algebras: Gauss valuations and principal symbols on PBW algebras over
//! valued fields, good-reduction verdicts via Hilbert-function comparison,
//! lattices over discrete valuation rings, and Lie-algebra reduction.
//!
//! All arithmetic is exact (arbitrary-precision rationals, prime fields,
//! rational function fields); there is no floating point anywhere.

pub mod cli;
pub mod field;
pub mod lattice;
pub mod ncpoly;
pub mod parser;
pub mod pbw;
pub mod reduction;
pub mod specfile;
pub mod valfilt;
pub mod valued_field;

mod util;

/// Version tag embedded in every machine-readable input and output format.
pub const FORMAT_VERSION: u32 = 1;
