//! Recomputes every reference value from case data and compares.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::case_data::{
    builtin_scenario, builtin_ward_table, load_scenario, load_ward_tables, CaseScenario, Variant,
    Ward,
};
use crate::error::{Error, Result};
use crate::exact_tests::{sensitivity_sweep, ContingencyTable};
use crate::mixture_model::rate_ratio_exceedance;
use crate::reference as r;
use crate::simulation::{simulate_mixture_tail, simulate_rate_ratio, SimConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tolerance {
    Absolute,
    Relative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub label: String,
    pub computed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub tolerance_kind: Tolerance,
    pub pass: bool,
}

impl ReportEntry {
    pub fn new(
        label: impl Into<String>,
        computed: f64,
        expected: f64,
        tolerance: f64,
        tolerance_kind: Tolerance,
    ) -> Self {
        let error = match tolerance_kind {
            Tolerance::Absolute => (computed - expected).abs(),
            Tolerance::Relative => ((computed - expected) / expected).abs(),
        };
        ReportEntry {
            label: label.into(),
            computed,
            expected,
            tolerance,
            tolerance_kind,
            pass: error <= tolerance,
        }
    }
}

/// Reference-value comparisons plus Monte Carlo and identity cross-checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproductionReport {
    pub reference_version: u32,
    pub entries: Vec<ReportEntry>,
    pub cross_checks: Vec<ReportEntry>,
}

impl ReproductionReport {
    pub fn pass(&self) -> bool {
        self.entries
            .iter()
            .chain(&self.cross_checks)
            .all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries
            .iter()
            .chain(&self.cross_checks)
            .filter(|e| !e.pass)
    }
}

fn write_rows(f: &mut fmt::Formatter<'_>, rows: &[ReportEntry]) -> fmt::Result {
    for e in rows {
        let kind = match e.tolerance_kind {
            Tolerance::Absolute => "abs",
            Tolerance::Relative => "rel",
        };
        writeln!(
            f,
            "{:<44} {:>22.15e} {:>22.15e} {:>8.1e} {} {}",
            e.label,
            e.computed,
            e.expected,
            e.tolerance,
            kind,
            if e.pass { "PASS" } else { "FAIL" }
        )?;
    }
    Ok(())
}

impl fmt::Display for ReproductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<44} {:>22} {:>22} {:>12} result",
            "quantity", "computed", "reference", "tolerance"
        )?;
        write_rows(f, &self.entries)?;
        writeln!(f)?;
        writeln!(f, "cross-checks")?;
        write_rows(f, &self.cross_checks)?;
        let passed = self
            .entries
            .iter()
            .chain(&self.cross_checks)
            .filter(|e| e.pass)
            .count();
        write!(
            f,
            "\n{passed}/{} checks passed",
            self.entries.len() + self.cross_checks.len()
        )
    }
}

/// Case data the reproduction starts from.
#[derive(Debug, Clone, PartialEq)]
pub struct ReproductionInputs {
    pub ggj7: CaseScenario,
    pub ggj13: CaseScenario,
    pub jkz_original: ContingencyTable,
}

impl ReproductionInputs {
    pub fn builtin() -> Self {
        ReproductionInputs {
            ggj7: builtin_scenario("GGJ7").expect("built-in"),
            ggj13: builtin_scenario("GGJ13").expect("built-in"),
            jkz_original: builtin_ward_table("jkz-original").expect("built-in").table,
        }
    }

    /// Builds inputs from the text of `wards.toml`, `ggj7.toml` and `ggj13.toml`.
    pub fn from_documents(wards: &str, ggj7: &str, ggj13: &str) -> Result<Self> {
        let jkz_original = load_ward_tables(wards)?
            .into_iter()
            .find(|w| w.ward == Ward::Jkz && w.variant == Variant::Original)
            .ok_or_else(|| Error::Validation("ward file has no original JKZ table".into()))?
            .table;
        Ok(ReproductionInputs {
            ggj7: load_scenario(ggj7)?,
            ggj13: load_scenario(ggj13)?,
            jkz_original,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarloSettings {
    pub replications: u64,
    pub seed: u64,
}

impl Default for MonteCarloSettings {
    fn default() -> Self {
        MonteCarloSettings {
            replications: r::MC_REPLICATIONS,
            seed: crate::simulation::DEFAULT_SEED,
        }
    }
}

pub fn reproduce(
    inputs: &ReproductionInputs,
    mc: MonteCarloSettings,
) -> Result<ReproductionReport> {
    use Tolerance::*;

    let ggj7 = inputs.ggj7.model()?;
    let ggj13 = inputs.ggj13.model()?;
    let mut entries = vec![
        ReportEntry::new(
            format!(
                "P(N >= {}), {}",
                inputs.ggj7.suspect_incidents, inputs.ggj7.name
            ),
            inputs.ggj7.tail_probability()?,
            r::GGJ7_TAIL,
            r::GGJ7_TAIL_TOL,
            Absolute,
        ),
        ReportEntry::new(
            format!(
                "P(N >= {}), {}",
                inputs.ggj13.suspect_incidents, inputs.ggj13.name
            ),
            inputs.ggj13.tail_probability()?,
            r::GGJ13_TAIL,
            r::GGJ13_TAIL_TOL,
            Absolute,
        ),
        ReportEntry::new(
            format!("expected count t*mu, {}", inputs.ggj7.name),
            ggj7.expected_count(),
            r::GGJ7_EXPECTED_COUNT,
            r::GGJ7_EXPECTED_COUNT_TOL,
            Absolute,
        ),
    ];

    for ((k, p), want) in ggj7
        .tail_curve(r::TAIL_CURVE.len() as u64)
        .iter()
        .zip(r::TAIL_CURVE)
    {
        entries.push(ReportEntry::new(
            format!("tail curve P(N >= {k})"),
            p,
            want,
            r::TAIL_CURVE_TOL,
            Absolute,
        ));
    }

    let rows = sensitivity_sweep(
        &inputs.jkz_original,
        r::SENSITIVITY_INVERSE_P.len() as u64 - 1,
    )?;
    for (row, want) in rows.iter().zip(r::SENSITIVITY_INVERSE_P) {
        entries.push(ReportEntry::new(
            format!("1/p, JKZ original, {} moved out", row.moved_out),
            row.inverse_p,
            want,
            r::SENSITIVITY_REL_TOL,
            Relative,
        ));
    }

    let mut cross_checks = vec![ReportEntry::new(
        "rate ratio >= 2, closed form",
        rate_ratio_exceedance(2.0)?,
        r::RATE_RATIO_TWO,
        0.0,
        Absolute,
    )];

    let cfg = SimConfig::mixture(mc.replications, mc.seed, ggj7)?;
    let ratio = simulate_rate_ratio(&cfg, 2.0)?;
    cross_checks.push(ReportEntry::new(
        "rate ratio >= 2, Monte Carlo (4 s.e.)",
        ratio.point,
        r::RATE_RATIO_TWO,
        r::MC_SIGMAS * ratio.std_error,
        Absolute,
    ));
    for (label, scenario, model) in [
        (&inputs.ggj7.name, &inputs.ggj7, ggj7),
        (&inputs.ggj13.name, &inputs.ggj13, ggj13),
    ] {
        let cfg = SimConfig::mixture(mc.replications, mc.seed, model)?;
        let n = scenario.suspect_incidents;
        let est = simulate_mixture_tail(&cfg, n)?;
        cross_checks.push(ReportEntry::new(
            format!("P(N >= {n}), {label}, Monte Carlo (4 s.e.)"),
            est.point,
            model.tail_probability(n),
            r::MC_SIGMAS * est.std_error,
            Absolute,
        ));
    }

    Ok(ReproductionReport {
        reference_version: r::REFERENCE_VERSION,
        entries,
        cross_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> MonteCarloSettings {
        MonteCarloSettings {
            replications: 100_000,
            seed: 5,
        }
    }

    #[test]
    fn builtin_inputs_pass() {
        let report = reproduce(&ReproductionInputs::builtin(), quick()).unwrap();
        assert_eq!(report.entries.len(), 26);
        let failures: Vec<_> = report.failures().collect();
        assert!(failures.is_empty(), "{failures:?}");
        assert!(report.pass());
    }

    #[test]
    fn corrupted_table_fails() {
        let mut inputs = ReproductionInputs::builtin();
        inputs.jkz_original = ContingencyTable::new(8, 134, 1, 886);
        let report = reproduce(&inputs, quick()).unwrap();
        assert!(!report.pass());
        let failed: Vec<_> = report.failures().map(|e| e.label.clone()).collect();
        assert!(failed.iter().all(|l| l.starts_with("1/p")), "{failed:?}");
    }

    #[test]
    fn relative_tolerance_entry() {
        let e = ReportEntry::new("x", 1001.0, 1000.0, 1e-3, Tolerance::Relative);
        assert!(e.pass);
        let e = ReportEntry::new("x", 1001.5, 1000.0, 1e-3, Tolerance::Relative);
        assert!(!e.pass);
    }
}
