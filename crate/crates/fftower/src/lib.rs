//! Exact computational laboratory for the recursive Artin-Schreier tower
//! defined by y^2 + y = x/(x^2 + x + 1) over GF(2^s).
//!
//! The crate decides, level by level and without floating point, how every
//! rational place of the base line splits in the tower; it tallies rational
//! place counts, accumulates the genus through Riemann-Hurwitz, verifies a
//! catalog of closed-form identities in the tower quotient ring, and
//! cross-checks the place engine against an independent residue-pattern
//! predictor and a brute-force chain oracle.

pub mod census;
pub mod engine;
pub mod gf;
pub mod series;
pub mod symbolic;
