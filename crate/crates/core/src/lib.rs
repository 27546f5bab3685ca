//! Exact arithmetic for divisor classes on blow-ups of the projective
//! plane, and the machinery to machine-verify exceptional collections of
//! line bundles on them.
//!
//! The crate is organized around five layers:
//!
//! * [`lattice`] — the Picard lattice `Z H ⊕ Z E_1 ⊕ … ⊕ Z E_n` with its
//!   intersection form, isometries (the canonical involution, Cremona
//!   reflections, point permutations), and (-1)-class enumeration.
//! * [`euler`] — Riemann–Roch Euler characteristics, the Euler pairing,
//!   numerical exceptionality, and the K-group basis (maximal length) test.
//! * [`linsys`] — linear systems of plane curves with fat-point conditions:
//!   Cremona standard-form reduction, expected dimensions, and a
//!   finite-field interpolation oracle with rigorous vanishing certificates.
//! * [`heights`] — relative heights, pseudoheights, the not-full criterion,
//!   and the presilting Ext-vanishing check.
//! * [`verifier`] — the six-stage verification pipeline producing a
//!   structured, replayable report, plus an isometry-orbit search.
//!
//! All values are immutable after construction and every operation is a
//! pure function of its inputs (given an explicit oracle configuration), so
//! everything here is safe to use from any number of threads.

pub mod error;
pub mod euler;
pub mod field;
pub mod heights;
pub mod lattice;
pub mod linsys;
pub mod verifier;

pub use error::{Error, Result};
pub use euler::{chi_divisor, euler_pairing, Collection, GramMatrix};
pub use heights::{CohomologyOracle, HeightValue};
pub use lattice::{DivisorClass, LatticeIsometry, MinusOneClass};
pub use linsys::{Certificate, CohomologyVector, OracleConfig, SectionCount};
pub use verifier::{TheoremConfig, VerificationReport};
