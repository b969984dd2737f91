//! Integrals of the complete elliptic integrals `K`, `E` and the theta-function
//! lattice sums they encode.
//!
//! The numeric path (`specfun`, `lseries`, `quadrature`, `lattice`) runs in
//! binary64; the `symbolic` layer is exact over the rationals. `registry`
//! ties both to a catalogue of closed-form identities and a verifier.

pub mod error;
pub mod lattice;
pub mod lseries;
pub mod quadrature;
pub mod registry;
pub mod specfun;
pub mod symbolic;

pub use error::{Error, Result};
