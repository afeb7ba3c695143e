//! Exact combinatorics for affine Weyl groups of types A and D at level `e`:
//! alcove geometry, Kazhdan-Lusztig polynomials, and the layer
//! multiplicities of q-Weyl and q-Specht modules they predict.

pub mod alcove;
pub mod error;
pub mod kl;
pub mod mult;
pub mod parabolic;
pub mod partition;
pub mod poly;
pub mod root;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use kl::{KlKind, KlTable};
pub use mult::{LayerTable, MultEngine, QConvention};
pub use partition::Partition;
pub use poly::QPoly;
pub use root::{Family, RootDatum, Weight};
pub use weyl::{AffineElement, GroupContext, Side};
