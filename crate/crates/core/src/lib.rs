//! Lower bounds on the free distance growth rate of protograph-based LDPC
//! convolutional code ensembles, computed from tail-biting unwrappings.
//!
//! Pipeline: [`protograph`] base matrices are split by a cut ([`unwrap`]),
//! wrapped into tail-biting graphs, and the asymptotic weight enumerator
//! ([`wenum`]) locates `delta_min` of each wrap; [`bounds`] turns a sweep over
//! the unwrapping factor into a bound on `delta_free`.

pub mod bounds;
pub mod config;
pub mod error;
pub mod gf2;
pub mod io;
pub mod lift;
pub mod matrix;
pub mod protograph;
pub mod unwrap;
pub mod verify;
pub mod wenum;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use matrix::IntMatrix;
pub use protograph::{regular_protograph, Protograph};
