//! Stabilizer-code laboratory.
//!
//! Builds surface-code layouts (planar patches, holes, twist-defect
//! dislocations, triangular and toric codes, generic CSS input), runs
//! measurement-based Clifford-gate protocols on a stabilizer tableau
//! simulator, decodes noisy syndromes with minimum-weight perfect matching
//! and evaluates closed-form resource-overhead estimates.

pub mod builders;
pub mod dense;
pub mod layout;
pub mod logical;
pub mod gf2;
pub mod pauli;
pub mod protocol;
pub mod tableau;

pub use pauli::{in_group, PauliError, PauliKind, PauliString, Phase};
pub use tableau::{Outcome, SimError, StabilizerSim};
