use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::scenario::{builtin_scenario_definition, CaseScenario};
use crate::error::{Error, Result};
use crate::exact_tests::ContingencyTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Ward {
    #[serde(rename = "JKZ")]
    Jkz,
    #[serde(rename = "RKZ41")]
    Rkz41,
    #[serde(rename = "RKZ42")]
    Rkz42,
    Leyenburg,
}

impl Ward {
    pub fn name(self) -> &'static str {
        match self {
            Ward::Jkz => "JKZ",
            Ward::Rkz41 => "RKZ-41",
            Ward::Rkz42 => "RKZ-42",
            Ward::Leyenburg => "Leyenburg",
        }
    }

    fn slug(self) -> &'static str {
        match self {
            Ward::Jkz => "jkz",
            Ward::Rkz41 => "rkz41",
            Ward::Rkz42 => "rkz42",
            Ward::Leyenburg => "leyenburg",
        }
    }
}

impl fmt::Display for Ward {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Original,
    Corrected,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Original => "original",
            Variant::Corrected => "corrected",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One ward's 2x2 shift table in one data variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "FlatWard", into = "FlatWard")]
pub struct WardRecord {
    pub ward: Ward,
    pub variant: Variant,
    pub table: ContingencyTable,
}

impl WardRecord {
    /// Lookup key such as `jkz-original` or `rkz42-corrected`.
    pub fn key(&self) -> String {
        format!("{}-{}", self.ward.slug(), self.variant.name())
    }
}

/// Flat on-disk form of a [`WardRecord`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct FlatWard {
    ward: Ward,
    variant: Variant,
    suspect_with: u64,
    suspect_without: u64,
    others_with: u64,
    others_without: u64,
}

impl From<FlatWard> for WardRecord {
    fn from(w: FlatWard) -> Self {
        WardRecord {
            ward: w.ward,
            variant: w.variant,
            table: ContingencyTable::new(
                w.suspect_with,
                w.suspect_without,
                w.others_with,
                w.others_without,
            ),
        }
    }
}

impl From<WardRecord> for FlatWard {
    fn from(w: WardRecord) -> Self {
        FlatWard {
            ward: w.ward,
            variant: w.variant,
            suspect_with: w.table.suspect_with,
            suspect_without: w.table.suspect_without,
            others_with: w.table.others_with,
            others_without: w.table.others_without,
        }
    }
}

/// The six ward tables: JKZ, RKZ-42 and RKZ-41, each original and corrected.
pub fn builtin_ward_tables() -> Vec<WardRecord> {
    let rec = |ward, variant, t: [u64; 4]| WardRecord {
        ward,
        variant,
        table: ContingencyTable::new(t[0], t[1], t[2], t[3]),
    };
    vec![
        rec(Ward::Jkz, Variant::Original, [8, 134, 0, 887]),
        rec(Ward::Jkz, Variant::Corrected, [7, 135, 4, 883]),
        rec(Ward::Rkz42, Variant::Original, [5, 53, 9, 272]),
        rec(Ward::Rkz42, Variant::Corrected, [1, 57, 9, 272]),
        rec(Ward::Rkz41, Variant::Original, [1, 0, 4, 361]),
        rec(Ward::Rkz41, Variant::Corrected, [1, 2, 4, 359]),
    ]
}

/// Looks up a built-in table by key (`jkz-original`, `rkz41-corrected`, ...).
pub fn builtin_ward_table(key: &str) -> Option<WardRecord> {
    let key = key.to_ascii_lowercase().replace('_', "-");
    builtin_ward_tables().into_iter().find(|w| w.key() == key)
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "original" => Ok(Variant::Original),
            "corrected" => Ok(Variant::Corrected),
            other => Err(Error::Validation(format!("unknown variant `{other}`"))),
        }
    }
}

pub(crate) fn check_ward_list(wards: &[WardRecord]) -> Result<()> {
    if wards.is_empty() {
        return Err(Error::Validation("no ward tables supplied".into()));
    }
    let mut seen = BTreeSet::new();
    for w in wards {
        if !seen.insert(w.ward) {
            return Err(Error::Validation(format!(
                "ward {} listed more than once",
                w.ward
            )));
        }
    }
    let variants: BTreeSet<Variant> = wards.iter().map(|w| w.variant).collect();
    if variants.len() > 1 {
        return Err(Error::Validation(
            "ward tables mix original and corrected variants".into(),
        ));
    }
    Ok(())
}

pub(crate) fn check_shift_sums(
    wards: &[WardRecord],
    suspect_shifts: u64,
    total_shifts: u64,
) -> Result<()> {
    let suspect: u64 = wards.iter().map(|w| w.table.suspect_shifts()).sum();
    let total: u64 = wards.iter().map(|w| w.table.total_shifts()).sum();
    if total != total_shifts {
        return Err(Error::Mismatch {
            what: "total shifts".into(),
            declared: total_shifts,
            computed: total,
        });
    }
    if suspect != suspect_shifts {
        return Err(Error::Mismatch {
            what: "suspect shifts".into(),
            declared: suspect_shifts,
            computed: suspect,
        });
    }
    Ok(())
}

/// Combines one table per ward into a built-in scenario (`GGJ7` or `GGJ13`).
///
/// Shift counts are summed over the wards and must equal the scenario's
/// declared counts. Incident counts come from the scenario definition; the
/// total is additionally checked against the ward sums for scenarios whose
/// total is consistent with the tables (GGJ7).
pub fn aggregate(wards: &[WardRecord], scenario_name: &str) -> Result<CaseScenario> {
    check_ward_list(wards)?;
    let def = builtin_scenario_definition(scenario_name).ok_or_else(|| {
        Error::Validation(format!(
            "unknown scenario `{scenario_name}` (expected GGJ7 or GGJ13)"
        ))
    })?;
    let scenario = def.scenario;
    check_shift_sums(wards, scenario.suspect_shifts, scenario.total_shifts)?;
    if def.total_matches_wards {
        let incidents: u64 = wards.iter().map(|w| w.table.total_incidents()).sum();
        if incidents != scenario.total_incidents {
            return Err(Error::Mismatch {
                what: format!("{} total incidents", scenario.name),
                declared: scenario.total_incidents,
                computed: incidents,
            });
        }
    }
    Ok(scenario)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WardDocument {
    format_version: u32,
    wards: Vec<WardRecord>,
}

pub fn load_ward_tables(text: &str) -> Result<Vec<WardRecord>> {
    let doc: WardDocument = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    super::scenario::check_version(doc.format_version)?;
    Ok(doc.wards)
}

pub fn ward_tables_to_toml(wards: &[WardRecord]) -> String {
    let doc = WardDocument {
        format_version: super::FORMAT_VERSION,
        wards: wards.to_vec(),
    };
    toml::to_string(&doc).expect("ward tables serialize")
}
