//! Finite abelian groups, group rings, characters and the truncated
//! algebras O[G][t]/(p^N, t^M).

pub mod character;
pub mod cyclo;
pub mod group;
pub mod ring;
pub mod scalar;
pub mod trunc;

pub use character::{char_transform, enumerate_characters, idempotent, inverse_char_transform, Character};
pub use cyclo::{CycloField, CycloRational};
pub use group::AbGroup;
pub use ring::GroupRingElem;
pub use scalar::Scalar;
pub use trunc::{TruncAlgebra, TruncElem};
