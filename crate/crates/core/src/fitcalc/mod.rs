//! Fitting ideals, canonical ideal forms over finite truncations, finite
//! modules, γ-modules and the duality and four-term identities.

pub mod checks;
pub mod gamma;
pub mod howell;
pub mod ideal;
pub mod matrix;
pub mod module;
pub mod presentation;

pub use checks::{check_base_change, check_four_term, FourTermSequence, FourTermVerdict};
pub use gamma::{fit_gamma_module, fit_gamma_module_minors, GammaModule};
pub use ideal::IdealHandle;
pub use matrix::RingMatrix;
pub use module::{FiniteModule, ModuleMap};
pub use presentation::Presentation;
