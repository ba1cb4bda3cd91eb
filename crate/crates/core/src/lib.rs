//! Exact verification workbench for coupled 1-form/2-form nonabelian gauge
//! theories in four dimensions.
//!
//! Layers, bottom up:
//! - [`scalar`], [`forms`]: exact exterior calculus over two coefficient rings
//! - [`structure`]: coupling tensors, their algebraic relations, presets and
//!   the linear solver for admissible symmetric couplings
//! - [`fields`]: curvatures, Chern-Simons 3-forms and gauge variations
//! - [`actions`]: Lagrangians, exact first variations and the identities
//!   checked on them
//! - [`duality`]: flat connections from group-valued maps and dual-side
//!   identities
//! - [`suite`]: named verification suites used by the CLI and acceptance tests

pub mod actions;
pub mod duality;
pub mod error;
pub mod exppoly;
pub mod fields;
pub mod forms;
pub mod jet;
pub mod fourier;
pub mod linalg;
pub mod rational;
pub mod scalar;
pub mod structure;
pub mod suite;

pub use error::{Error, Result};
pub use forms::{Form, InternalForm, Signature, Space, TorusIntegral};
pub use rational::Q;
pub use scalar::{ExpPoly, Fourier, Scalar};
pub use structure::CouplingData;
