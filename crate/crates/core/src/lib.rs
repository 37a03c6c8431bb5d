//! Structure-matrix toolkit for metric 2-step nilpotent Lie algebras.
//!
//! A tuple `C ∈ so(q)^p` of skew-symmetric matrices determines a metric
//! 2-step nilpotent Lie algebra `N_C`. Geometric properties of the
//! left-invariant metric translate into conditions on the moment maps of the
//! `GL_q × GL_p` action on `so(q)^p`:
//!
//! * Ricci Yang-Mills soliton (symmetric type) ⇔ `GL_q`-distinguished,
//! * Ricci soliton ⇔ `GL_q × GL_p`-distinguished,
//! * geodesically flow invariant ⇔ `SL_q`-minimal.
//!
//! Modules, bottom up: [`algebra`] (tuples, brackets), [`actions`] (group
//! and Lie-algebra actions, fingerprints), [`moment`] (moment maps),
//! [`soliton`] (certificates), [`flow`] (gradient flow of `‖m_G‖²`),
//! [`catalogue`] (example families), [`cli`] (files and reports).

pub mod actions;
pub mod algebra;
pub mod catalogue;
pub mod cli;
pub mod error;
pub mod flow;
pub mod moment;
pub mod soliton;

pub use algebra::{StructureTuple, ValidationReport};
pub use error::{Error, Result};
pub use moment::Group;
pub use soliton::{Certificate, Mode};
