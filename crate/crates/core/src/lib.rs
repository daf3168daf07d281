//! Compressed-sensing measurement matrices built from random orbits of
//! finite-group representations.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`] finite groups as dense index sets, sampling sets, the affine group;
//! * [`representation`] unitary and projective representations;
//! * [`sensing`] generator vectors and orbit measurement matrices;
//! * [`analysis`] the exact orbit constant, restricted isometry constants and
//!   the measurement budget;
//! * [`recovery`] iterative hard thresholding and orthogonal matching pursuit;
//! * [`experiment`] configs, phase-transition sweeps and the verification suite.

pub mod analysis;
pub mod error;
pub mod experiment;
pub mod group;
pub mod linalg;
pub mod recovery;
pub mod representation;
pub mod rng;
pub mod sensing;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};
