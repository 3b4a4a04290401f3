//! Admissible fan subsolutions for the two-dimensional barotropic Euler
//! Riemann problem with symmetric contact-discontinuity data.
//!
//! The crate builds an explicit five-region subsolution for any strictly
//! increasing pressure law, checks the full algebraic system it must satisfy,
//! and provides diagnostics: an exact certificate that three regions cannot
//! work, a grid scan for four regions, and a feasibility map in `(a, ε)`.

pub mod cli;
pub mod error;
pub mod explorer;
pub mod infeasibility;
pub mod pressure;
pub mod reduction;
pub mod selector;
pub mod states;
pub mod verifier;

pub use error::{Error, Result};
pub use pressure::{PotentialContext, PressureLaw};
pub use reduction::{reduce, FanSubsolution, SymmetricParameters};
pub use selector::{construct, Construction, SelectorOptions};
pub use states::{FanState, SymmetricContactDatum, TracelessSym2};
pub use verifier::{verify, Tolerances, VerificationReport};
