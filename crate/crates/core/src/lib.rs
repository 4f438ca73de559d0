//! Classify regular grammars by an entropy measure — exact string counting on
//! one side, the spectrum of the summed transition matrix on the other — and
//! relate the resulting grammar classes to what first- and second-order
//! recurrent cells can represent and learn.
//!
//! The crate is organized around five subsystems:
//!
//! * [`automata`] — DFA construction (Tomita 1–7, strictly-local and
//!   strictly-piecewise avoiders, seeded random machines), Hopcroft
//!   minimization with canonical numbering, transition matrices, text/DOT
//!   serialization.
//! * [`complexity`] — accepted-string counting (exact, arbitrary precision),
//!   the per-length entropy curve, growth-rate and spectral classifiers, and
//!   ring-plot data.
//! * [`datagen`] — labeled string datasets under the experiment sampling
//!   protocols, with a line-oriented file format.
//! * [`neural`] — seven recurrent cells with hand-derived gradients, the
//!   analytic DFA-to-second-order construction, first-order fits, and the
//!   unified cell with its emulation configurations.
//! * [`harness`] — RMSprop training loops, F1/BCR evaluation, weight-norm
//!   traces, and budget-matched grids.

pub mod automata;
pub mod complexity;
pub mod datagen;
pub mod eigen;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod neural;

pub use error::{Error, Result};
