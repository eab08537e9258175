//! Monodromy of matrix tuples over prime fields.
//!
//! The crate realises local systems on the punctured line as tuples of
//! invertible matrices over `F_ℓ`, builds new tuples by middle convolution
//! and quadratic twisting, classifies local monodromy in the symplectic and
//! orthogonal groups, and certifies "big" monodromy from generator data.
//! Every certificate can be checked against an exact stabiliser-chain
//! computation of the generated group.

pub mod certifier;
pub mod classical;
pub mod convolution;
mod error;
pub mod families;
pub mod group;
pub mod linalg;

pub use error::{Error, Result};
pub use linalg::{BilinearForm, JordanData, Matrix, Parity, Prime, Subspace};
