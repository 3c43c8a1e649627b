//! Exact and numerical calculator for non-Archimedean K-stability invariants
//! of Kähler classes on curves and surfaces.
//!
//! - [`lattice`]: intersection lattices, Zariski decomposition, volumes.
//! - [`model`]: blow-up models of `X × P¹` over a curve.
//! - [`plfun`]: PL functions, envelopes and Monge–Ampère measures.
//! - [`invariants`]: DF, Mabuchi and J invariants and their functionals.
//! - [`beta`]: volume profiles, Legendre energies and β-invariants.

pub mod beta;
pub mod corpus;
pub mod error;
pub mod invariants;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod model;
pub mod plfun;
pub mod rational;

pub use error::{Error, ErrorKind, Result};
pub use lattice::{DivClass, IntersectionLattice, TestCurve, ZariskiResult};
pub use model::{CurveData, DivisorialPoint, SncModel};
pub use plfun::{ModelContext, NaMeasure, VerticalDivisor};
pub use rational::Q;
