//! Exact and p-adic kernels for character sums, Gauss sums, finite-field and
//! p-adic hypergeometric functions, Kloosterman sheaf sums and the
//! coefficients of two weight-four eta-product newforms, with a harness that
//! checks the identities relating them prime by prime.

pub mod characters;
pub mod error;
pub mod finite_hypergeom;
pub mod gamma;
pub mod gauss;
pub mod kloosterman;
pub mod modforms;
pub mod padic_hypergeom;
#[cfg(test)]
mod properties;
pub mod residue;
pub mod verify;

pub use error::{Error, Result};
pub use residue::{make_context, PPowerRational, PrimeContext, Residue, ScaledResidue};
