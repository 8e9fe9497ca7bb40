use std::fmt;

use serde::{Deserialize, Serialize};

use super::ledger::{set_count, DataSet, IncidentLedgerEntry};
use super::scenario::CaseScenario;
use super::wards::{Variant, Ward, WardRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Consistent,
    Discrepancy,
}

/// One cross-check between two sources of the same count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub check: String,
    pub expected: u64,
    pub found: u64,
    pub status: Status,
    pub note: String,
}

impl Finding {
    fn compare(check: impl Into<String>, expected: u64, found: u64, note: &str) -> Self {
        Finding {
            check: check.into(),
            expected,
            found,
            status: if expected == found {
                Status::Consistent
            } else {
                Status::Discrepancy
            },
            note: note.to_string(),
        }
    }

    pub fn is_discrepancy(&self) -> bool {
        self.status == Status::Discrepancy
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Consistent => "ok  ",
            Status::Discrepancy => "FLAG",
        };
        write!(
            f,
            "[{tag}] {}: expected {}, found {}",
            self.check, self.expected, self.found
        )?;
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

fn ledger_count(ledger: &[IncidentLedgerEntry], set: DataSet, ward: Ward) -> u64 {
    ledger
        .iter()
        .filter(|e| e.ward == ward && e.in_set(set))
        .map(|e| u64::from(e.count))
        .sum()
}

/// Cross-checks ledger, ward tables and scenarios against one another.
///
/// Nothing is corrected; every comparison is returned with its status.
pub fn consistency_report(
    ledger: &[IncidentLedgerEntry],
    wards: &[WardRecord],
    scenarios: &[CaseScenario],
) -> Vec<Finding> {
    let mut findings = Vec::new();

    for variant in [Variant::Original, Variant::Corrected] {
        let tables: Vec<&WardRecord> = wards.iter().filter(|w| w.variant == variant).collect();
        if tables.is_empty() {
            continue;
        }
        let shifts: u64 = tables.iter().map(|w| w.table.total_shifts()).sum();
        let suspect_shifts: u64 = tables.iter().map(|w| w.table.suspect_shifts()).sum();
        let incidents: u64 = tables.iter().map(|w| w.table.total_incidents()).sum();
        let suspect_incidents: u64 = tables.iter().map(|w| w.table.suspect_with).sum();

        for s in scenarios {
            findings.push(Finding::compare(
                format!("{} total shifts vs {variant} ward tables", s.name),
                s.total_shifts,
                shifts,
                "",
            ));
            if variant != Variant::Corrected {
                continue;
            }
            findings.push(Finding::compare(
                format!("{} suspect shifts vs corrected ward tables", s.name),
                s.suspect_shifts,
                suspect_shifts,
                "",
            ));
            findings.push(Finding::compare(
                format!("{} total incidents vs corrected ward tables", s.name),
                s.total_incidents,
                incidents,
                "",
            ));
            findings.push(Finding::compare(
                format!("{} suspect incidents vs corrected ward tables", s.name),
                s.suspect_incidents,
                suspect_incidents,
                "",
            ));
        }
    }

    for s in scenarios {
        let set = match s.name.to_ascii_uppercase().as_str() {
            "GGJ7" => DataSet::Ggj7,
            "GGJ13" => DataSet::Ggj13,
            _ => continue,
        };
        findings.push(Finding::compare(
            format!("{} suspect incidents vs ledger {set} flags", s.name),
            s.suspect_incidents,
            set_count(ledger, set),
            "",
        ));
    }

    for w in wards.iter().filter(|w| w.variant == Variant::Corrected) {
        findings.push(Finding::compare(
            format!(
                "{} corrected suspect incidents vs ledger GGJ7 flags",
                w.ward
            ),
            w.table.suspect_with,
            ledger_count(ledger, DataSet::Ggj7, w.ward),
            "",
        ));
    }

    let outside: Vec<String> = ledger
        .iter()
        .filter(|e| e.in_set(DataSet::Ggj7) && !e.in_set(DataSet::Ggj13))
        .map(|e| e.display_name())
        .collect();
    findings.push(Finding::compare(
        "ledger GGJ7 entries missing from GGJ13",
        0,
        outside.len() as u64,
        &outside.join(", "),
    ));

    let dropped_in_ggj = ledger
        .iter()
        .filter(|e| e.is_dropped() && (e.in_set(DataSet::Ggj7) || e.in_set(DataSet::Ggj13)))
        .count();
    findings.push(Finding::compare(
        "dropped ledger entries still in a GGJ set",
        0,
        dropped_in_ggj as u64,
        "",
    ));

    findings
}
