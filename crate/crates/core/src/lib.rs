//! Most-probable transition paths of small-noise diffusions in the
//! long-time limit of the Onsager-Machlup functional.
//!
//! The graph of the minimizer is found as an extremal of the geometric
//! (Maupertuis) action at the energy `E = max U`, where
//! `U = -eps div b - |b|^2 / 2` is the path potential. [`solver`] relaxes a
//! discrete, equal-arclength [`path::Path`] toward that extremal while
//! climbing `E` at the path's highest node.

pub mod action;
pub mod error;
pub mod model;
pub mod oracle;
pub mod path;
pub mod solver;
mod tridiag;

pub use action::{ActionReport, LambdaProfile};
pub use error::{Error, Result};
pub use model::{AnyModel, GradientSource, Model, ModelKind};
pub use path::Path;
pub use solver::{Reparametrization, Scheme, SolverConfig, Status, Trace};

/// Library version recorded in run records.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
