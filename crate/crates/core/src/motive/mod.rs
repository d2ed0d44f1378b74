//! Abstract p-adic 1-motives with a finite abelian group action: torsion
//! points, transition maps, Tate modules, the ± splitting, and the module
//! attached to the T-modification.

pub mod delta;
pub mod one_motive;
pub mod torsion;

pub use delta::{delta_module, DeltaModule};
pub use one_motive::{parse_fraction, random_motive, IntMatrix, MotiveMorphism, PadicOneMotive};
pub use torsion::{
    morphism_on_torsion, split_pm, split_pm_tate, tate_module, torsion_points, transition_down, transition_up,
    PmSplit, TateModule, TorsionGroup, TorsionPmSplit, TransitionMap,
};
