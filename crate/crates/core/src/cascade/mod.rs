//! Singularity cascades: local series pushed through the equation one lattice step at a time.

pub mod engine;
pub mod seed;
pub mod verdict;

pub use engine::{
    cascade_step, polynomial_blowup, run_cascade, run_cascade_dir, BlowupReport, Direction, PatternEntry, SingularityPattern,
};
pub use seed::{seed_local_data, LocalData, Seed, SeedKind};
pub use verdict::{confinement_report, gamma_of, ConfinementVerdict, VerdictKind, Witness};
