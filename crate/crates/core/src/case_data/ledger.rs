use std::collections::BTreeSet;
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::wards::Ward;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Murder,
    Attempt,
    None,
}

/// The incident sets used by the different statistical analyses of the case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DataSet {
    E9,
    E8,
    E7,
    #[serde(rename = "GGJ7")]
    Ggj7,
    #[serde(rename = "GGJ13")]
    Ggj13,
}

impl DataSet {
    pub const ALL: [DataSet; 5] = [
        DataSet::E9,
        DataSet::E8,
        DataSet::E7,
        DataSet::Ggj7,
        DataSet::Ggj13,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DataSet::E9 => "E9",
            DataSet::E8 => "E8",
            DataSet::E7 => "E7",
            DataSet::Ggj7 => "GGJ7",
            DataSet::Ggj13 => "GGJ13",
        }
    }
}

impl fmt::Display for DataSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One row of the incident ledger.
///
/// `count` is 1 for an individual incident; the aggregate "Unknown RKZ-42"
/// row stands for four incidents without individual dates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncidentLedgerEntry {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date: Option<NaiveDate>,
    pub ward: Ward,
    pub verdict: Verdict,
    pub in_sets: BTreeSet<DataSet>,
    #[serde(default)]
    pub remark: String,
    #[serde(default = "one")]
    pub count: u32,
}

fn one() -> u32 {
    1
}

impl IncidentLedgerEntry {
    /// Label with the date in `dd/mm/yy` form, e.g. `Amber(04/09/01)`.
    pub fn display_name(&self) -> String {
        match self.date {
            Some(d) => format!("{}({})", self.label, d.format("%d/%m/%y")),
            None => self.label.clone(),
        }
    }

    pub fn in_set(&self, set: DataSet) -> bool {
        self.in_sets.contains(&set)
    }

    pub fn is_dropped(&self) -> bool {
        self.remark
            .split(',')
            .any(|r| r.trim().eq_ignore_ascii_case("dropped"))
    }

    pub fn validate(&self) -> Result<()> {
        if self.label.trim().is_empty() {
            return Err(Error::Validation("ledger entry with empty label".into()));
        }
        if self.count == 0 {
            return Err(Error::Validation(format!(
                "ledger entry {} has count 0",
                self.display_name()
            )));
        }
        if self.is_dropped() && (self.in_set(DataSet::Ggj7) || self.in_set(DataSet::Ggj13)) {
            return Err(Error::Validation(format!(
                "ledger entry {} is marked dropped but belongs to a GGJ set",
                self.display_name()
            )));
        }
        Ok(())
    }
}

/// Number of incidents (respecting `count`) flagged for `set`.
pub fn set_count(ledger: &[IncidentLedgerEntry], set: DataSet) -> u64 {
    ledger
        .iter()
        .filter(|e| e.in_set(set))
        .map(|e| u64::from(e.count))
        .sum()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LedgerDocument {
    format_version: u32,
    entries: Vec<IncidentLedgerEntry>,
}

pub fn load_ledger(text: &str) -> Result<Vec<IncidentLedgerEntry>> {
    let doc: LedgerDocument = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    super::scenario::check_version(doc.format_version)?;
    for e in &doc.entries {
        e.validate()?;
    }
    Ok(doc.entries)
}

pub fn ledger_to_toml(entries: &[IncidentLedgerEntry]) -> String {
    let doc = LedgerDocument {
        format_version: super::FORMAT_VERSION,
        entries: entries.to_vec(),
    };
    toml::to_string(&doc).expect("ledger serializes")
}

fn entry(
    label: &str,
    date: Option<(i32, u32, u32)>,
    ward: Ward,
    verdict: Verdict,
    sets: &[DataSet],
    remark: &str,
    count: u32,
) -> IncidentLedgerEntry {
    IncidentLedgerEntry {
        label: label.to_string(),
        date: date.map(|(y, m, d)| NaiveDate::from_ymd_opt(y, m, d).expect("valid date")),
        ward,
        verdict,
        in_sets: sets.iter().copied().collect(),
        remark: remark.to_string(),
        count,
    }
}

/// All recorded incidents, in ledger order.
pub fn builtin_ledger() -> Vec<IncidentLedgerEntry> {
    use DataSet::*;
    const ALL: &[DataSet] = &[E9, E8, E7, Ggj7, Ggj13];
    const ELFFERS_AND_GGJ13: &[DataSet] = &[E9, E8, E7, Ggj13];
    let (jkz, r41, r42, ley) = (Ward::Jkz, Ward::Rkz41, Ward::Rkz42, Ward::Leyenburg);
    let (m, a, n) = (Verdict::Murder, Verdict::Attempt, Verdict::None);
    vec![
        entry("Eda", Some((2000, 9, 18)), jkz, a, &[], "Dropped", 1),
        entry("Ka I", Some((2000, 10, 10)), jkz, n, &[], "New, out", 1),
        entry("Jouad", Some((2000, 10, 10)), jkz, m, ALL, "", 1),
        entry("Ka II", Some((2000, 10, 25)), jkz, m, ALL, "", 1),
        entry(
            "Kemal I",
            Some((2000, 10, 27)),
            jkz,
            n,
            ELFFERS_AND_GGJ13,
            "",
            1,
        ),
        entry(
            "Kemal II",
            Some((2000, 12, 20)),
            jkz,
            n,
            ELFFERS_AND_GGJ13,
            "",
            1,
        ),
        entry("Sadia", Some((2001, 1, 17)), jkz, n, &[], "Moved, out", 1),
        entry("Achmad I", Some((2001, 1, 25)), jkz, a, ALL, "", 1),
        entry(
            "Achmad II",
            Some((2001, 2, 23)),
            jkz,
            m,
            &[E9, E8],
            "Moved, out",
            1,
        ),
        entry("Kemal III", Some((2001, 3, 2)), jkz, n, &[], "New, out", 1),
        entry("Sarah", Some((2001, 4, 18)), jkz, n, &[E9], "Dropped", 1),
        entry("Achraf", Some((2001, 9, 1)), jkz, a, ALL, "", 1),
        entry("Amber", Some((2001, 9, 4)), jkz, m, ALL, "", 1),
        entry(
            "Zonneveld",
            Some((1997, 11, 27)),
            r41,
            m,
            &[Ggj7, Ggj13],
            "",
            1,
        ),
        entry("Wang", Some((1997, 11, 12)), r42, m, &[Ggj7, Ggj13], "", 1),
        entry("De Koning", Some((1997, 5, 9)), ley, m, &[], "Dropped", 1),
        entry("Unknown RKZ-42", None, r42, n, &[Ggj13], "Extra", 4),
    ]
}
