//! The truncated equivariant Iwasawa algebra Zp[G][[t]]: ι, t_n, μ and λ,
//! Weierstrass preparation, level projections and interpolation.

pub mod interpolate;
pub mod series;
pub mod weierstrass;

pub use interpolate::{interpolate_from_values, interpolation_nodes, Interpolation};
pub use series::{gamma_power_exact, gamma_power_padic, project_level, EqSeries};
pub use weierstrass::{
    associated_check, mu_invariant, weierstrass_prepare, weierstrass_series, AdmissibleQuotient, CharWeierstrass,
    EqWeierstrass, MuReport,
};
