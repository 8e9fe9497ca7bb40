//! Built-in case data: the incident ledger, the per-ward 2x2 shift tables and
//! the two aggregate scenarios, plus the scenario document format and a
//! consistency checker that reports (but never reconciles) disagreements
//! between them.

mod consistency;
mod ledger;
mod scenario;
mod wards;

pub use consistency::{consistency_report, Finding, Status};
pub use ledger::{
    builtin_ledger, ledger_to_toml, load_ledger, set_count, DataSet, IncidentLedgerEntry, Verdict,
};
pub use scenario::{
    builtin_scenario, builtin_scenarios, load_scenario, CaseScenario, ScenarioDocument,
    FORMAT_VERSION,
};
pub use wards::{
    aggregate, builtin_ward_table, builtin_ward_tables, load_ward_tables, ward_tables_to_toml,
    Variant, Ward, WardRecord,
};

/// Data files shipped alongside the programmatic constants.
pub mod fixtures {
    pub const LEDGER_TOML: &str = include_str!("../../data/ledger.toml");
    pub const WARDS_TOML: &str = include_str!("../../data/wards.toml");
    pub const GGJ7_TOML: &str = include_str!("../../data/ggj7.toml");
    pub const GGJ13_TOML: &str = include_str!("../../data/ggj13.toml");
}
