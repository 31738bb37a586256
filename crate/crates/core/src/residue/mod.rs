//! Arithmetic in Z/p^N, Teichmuller lifts, discrete logarithms and the
//! finite-precision p-adic value types the rest of the crate builds on.

mod context;
mod rational;
mod scaled;

pub use context::{
    is_prime, make_context, prime_factors, primes_in, primitive_root, ContextOptions, PrimeContext, Residue,
    DEFAULT_GAMMA_BUDGET,
};
pub(crate) use context::{inv_mod, mul_mod};
pub use rational::PPowerRational;
pub use scaled::{ScaledResidue, EXACT};
