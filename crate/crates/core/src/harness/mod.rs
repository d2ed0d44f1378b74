//! Fixture ingestion, deterministic reports and the verification
//! predicates built on the computational modules.

pub mod brumer_stark;
pub mod checks;
pub mod coates_sinnott;
pub mod emc;
pub mod fixture;
pub mod report;

pub use brumer_stark::brumer_stark_check;
pub use checks::{integrality_battery, run_fixture, twist_check, IntegralityConfig, TwistConfig};
pub use coates_sinnott::{coates_sinnott_check, default_battery};
pub use emc::{emc_shape_suite, EmcConfig};
pub use fixture::{ingest_fixture, parse_fixture, ClassModuleFixture, CohFixture, Fixture, Provenance};
pub use report::{bundle, emit_report, render, CheckReport, HypothesisRecord};
