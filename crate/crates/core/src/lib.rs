//! Finite models of affine buildings of type A~n and their quotients, the
//! boundary relation systems on K0 classes, and exact orders and bounds for
//! the class of the identity `[I]`.
//!
//! Orders computed here live in the *universal relation group*: the free
//! abelian group on the labelled generators modulo exactly the listed
//! relations. The true K0 group is a further quotient, so every order
//! reported is an upper bound for the order of `[I]` in K0.

pub mod cli;
pub mod complexes;
pub mod error;
pub mod exactint;
pub mod fqlinalg;
pub mod incidence;
pub mod ktheory;
pub mod padic;
pub mod spherical;
pub mod weyl;

pub use error::{Error, Result};
