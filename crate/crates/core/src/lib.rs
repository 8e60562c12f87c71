//! Connectivity systems over finite ground sets, their profiles, flowers
//! (anemones and daisies), the abstraction of separations onto sets of
//! profiles with its tree decomposition, and the matroid connectivity
//! calculus.

pub mod error;
pub mod connsys;
pub mod seps;
pub mod cyclic;
pub mod profiles;
pub mod flowers;
pub mod matroid;
pub mod abstraction;
pub mod corpus;

pub use connsys::{ConnectivitySystem, GroundSet, Order, SubsetMask};
pub use error::{Error, Result};
pub use flowers::{classify, FlowerKind, Pseudoflower};
pub use profiles::{enumerate_profiles, Profile, ProfileFamily};
