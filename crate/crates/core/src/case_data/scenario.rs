use serde::{Deserialize, Serialize};

use super::wards::{check_shift_sums, check_ward_list, WardRecord};
use crate::error::{Error, Result};
use crate::exact_tests::ContingencyTable;
use crate::mixture_model::MixedPoissonModel;

/// Current version of every TOML document this crate reads and writes.
pub const FORMAT_VERSION: u32 = 1;

/// The four integers that parameterize an analysis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseScenario {
    pub name: String,
    pub suspect_shifts: u64,
    pub suspect_incidents: u64,
    pub total_shifts: u64,
    pub total_incidents: u64,
}

impl CaseScenario {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| {
            Err(Error::Validation(format!(
                "scenario `{}`: {msg}",
                self.name
            )))
        };
        if self.name.trim().is_empty() {
            return Err(Error::Validation("scenario name is empty".into()));
        }
        if self.suspect_shifts == 0 {
            return fail("suspect_shifts must be positive".into());
        }
        if self.total_incidents == 0 {
            return fail("total_incidents must be positive".into());
        }
        if self.suspect_shifts > self.total_shifts {
            return fail(format!(
                "suspect_shifts {} exceeds total_shifts {}",
                self.suspect_shifts, self.total_shifts
            ));
        }
        if self.suspect_incidents > self.total_incidents {
            return fail(format!(
                "suspect_incidents {} exceeds total_incidents {}",
                self.suspect_incidents, self.total_incidents
            ));
        }
        if self.suspect_incidents > self.suspect_shifts {
            return fail(format!(
                "suspect_incidents {} exceeds suspect_shifts {}",
                self.suspect_incidents, self.suspect_shifts
            ));
        }
        let other_incidents = self.total_incidents - self.suspect_incidents;
        let other_shifts = self.total_shifts - self.suspect_shifts;
        if other_incidents > other_shifts {
            return fail(format!(
                "{other_incidents} incidents outside the suspect's shifts exceed the {other_shifts} such shifts"
            ));
        }
        Ok(())
    }

    /// Per-shift incident rate `total_incidents / total_shifts`.
    pub fn rate(&self) -> f64 {
        self.total_incidents as f64 / self.total_shifts as f64
    }

    /// Mixed model with exponential intensities (`rho = 1`), the scenario's
    /// rate, and exposure equal to the suspect's shift count.
    pub fn model(&self) -> Result<MixedPoissonModel> {
        MixedPoissonModel::from_counts(
            self.total_incidents,
            self.total_shifts,
            self.suspect_shifts as f64,
        )
    }

    /// Probability of at least the observed number of incidents under the mixed model.
    pub fn tail_probability(&self) -> Result<f64> {
        Ok(self.model()?.tail_probability(self.suspect_incidents))
    }

    /// Pooled 2x2 table implied by the four counts. Requires a valid scenario.
    pub fn to_table(&self) -> ContingencyTable {
        ContingencyTable::new(
            self.suspect_incidents,
            self.suspect_shifts - self.suspect_incidents,
            self.total_incidents - self.suspect_incidents,
            (self.total_shifts - self.suspect_shifts)
                - (self.total_incidents - self.suspect_incidents),
        )
    }

    pub fn to_document(&self) -> ScenarioDocument {
        ScenarioDocument {
            scenario: self.clone(),
            wards: Vec::new(),
        }
    }
}

pub(crate) struct ScenarioDefinition {
    pub scenario: CaseScenario,
    /// Whether the declared total incident count should equal the ward sums.
    pub total_matches_wards: bool,
}

pub(crate) fn builtin_scenario_definition(name: &str) -> Option<ScenarioDefinition> {
    let scenario = |name: &str, suspect_incidents, total_incidents| CaseScenario {
        name: name.to_string(),
        suspect_shifts: 203,
        suspect_incidents,
        total_shifts: 1734,
        total_incidents,
    };
    match name.to_ascii_uppercase().as_str() {
        "GGJ7" => Some(ScenarioDefinition {
            scenario: scenario("GGJ7", 7, 26),
            total_matches_wards: true,
        }),
        // Four RKZ-42 incidents are added back on top of the corrected tables.
        "GGJ13" => Some(ScenarioDefinition {
            scenario: scenario("GGJ13", 13, 30),
            total_matches_wards: false,
        }),
        _ => None,
    }
}

pub fn builtin_scenario(name: &str) -> Option<CaseScenario> {
    builtin_scenario_definition(name).map(|d| d.scenario)
}

pub fn builtin_scenarios() -> Vec<CaseScenario> {
    ["GGJ7", "GGJ13"]
        .iter()
        .filter_map(|n| builtin_scenario(n))
        .collect()
}

/// A scenario plus optional per-ward tables, as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioDocument {
    pub scenario: CaseScenario,
    pub wards: Vec<WardRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenarioDocument {
    format_version: u32,
    name: String,
    suspect_shifts: u64,
    suspect_incidents: u64,
    total_shifts: u64,
    total_incidents: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    wards: Vec<WardRecord>,
}

pub(crate) fn check_version(version: u32) -> Result<()> {
    if version != FORMAT_VERSION {
        return Err(Error::Validation(format!(
            "unsupported format_version {version} (this build reads version {FORMAT_VERSION})"
        )));
    }
    Ok(())
}

impl ScenarioDocument {
    /// Parses and validates a scenario document. Ward tables, when present,
    /// must not repeat a ward or mix variants, and their shift counts must sum
    /// to the declared totals. Incident-count disagreements are left to
    /// [`super::consistency_report`].
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawScenarioDocument =
            toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        check_version(raw.format_version)?;
        let doc = ScenarioDocument {
            scenario: CaseScenario {
                name: raw.name,
                suspect_shifts: raw.suspect_shifts,
                suspect_incidents: raw.suspect_incidents,
                total_shifts: raw.total_shifts,
                total_incidents: raw.total_incidents,
            },
            wards: raw.wards,
        };
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if !self.wards.is_empty() {
            check_ward_list(&self.wards)?;
            check_shift_sums(
                &self.wards,
                self.scenario.suspect_shifts,
                self.scenario.total_shifts,
            )?;
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        let s = &self.scenario;
        let raw = RawScenarioDocument {
            format_version: FORMAT_VERSION,
            name: s.name.clone(),
            suspect_shifts: s.suspect_shifts,
            suspect_incidents: s.suspect_incidents,
            total_shifts: s.total_shifts,
            total_incidents: s.total_incidents,
            wards: self.wards.clone(),
        };
        toml::to_string(&raw).expect("scenario serializes")
    }
}

/// Parses a scenario document and returns its validated scenario.
pub fn load_scenario(text: &str) -> Result<CaseScenario> {
    ScenarioDocument::parse(text).map(|d| d.scenario)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case_data::{builtin_ward_tables, Variant};

    const GGJ7_DOC: &str = r#"
format_version = 1
name = "GGJ7"
suspect_shifts = 203
suspect_incidents = 7
total_shifts = 1734
total_incidents = 26
"#;

    #[test]
    fn loads_ggj7() {
        assert_eq!(
            load_scenario(GGJ7_DOC).unwrap(),
            builtin_scenario("GGJ7").unwrap()
        );
    }

    #[test]
    fn rejects_suspect_incidents_above_total() {
        let doc = GGJ7_DOC.replace("suspect_incidents = 7", "suspect_incidents = 27");
        assert!(matches!(load_scenario(&doc), Err(Error::Validation(_))));
    }

    #[test]
    fn parse_errors_carry_location() {
        let doc = GGJ7_DOC.replace("total_shifts = 1734", "total_shifts = ");
        match load_scenario(&doc) {
            Err(Error::Parse(msg)) => assert!(msg.contains("line 6"), "{msg}"),
            other => panic!("expected parse error, got {other:?}"),
        }
        let doc = GGJ7_DOC.replace("total_shifts", "total_shfits");
        assert!(matches!(load_scenario(&doc), Err(Error::Parse(_))));
        let doc = GGJ7_DOC.replace("suspect_shifts = 203", "suspect_shifts = -203");
        assert!(matches!(load_scenario(&doc), Err(Error::Parse(_))));
    }

    #[test]
    fn rejects_unknown_version() {
        let doc = GGJ7_DOC.replace("format_version = 1", "format_version = 2");
        assert!(matches!(load_scenario(&doc), Err(Error::Validation(_))));
    }

    #[test]
    fn round_trip_with_wards() {
        let mut doc = builtin_scenario("GGJ13").unwrap().to_document();
        assert_eq!(ScenarioDocument::parse(&doc.to_toml()).unwrap(), doc);
        doc.wards = builtin_ward_tables()
            .into_iter()
            .filter(|w| w.variant == Variant::Corrected)
            .collect();
        let text = doc.to_toml();
        assert_eq!(ScenarioDocument::parse(&text).unwrap(), doc);
    }

    #[test]
    fn ward_shift_sums_are_enforced() {
        let mut doc = builtin_scenario("GGJ7").unwrap().to_document();
        doc.wards = builtin_ward_tables()
            .into_iter()
            .filter(|w| w.variant == Variant::Original)
            .collect();
        let err = ScenarioDocument::parse(&doc.to_toml()).unwrap_err();
        assert!(matches!(
            err,
            Error::Mismatch {
                declared: 203,
                computed: 201,
                ..
            }
        ));
    }

    #[test]
    fn pooled_table_and_model() {
        let s = builtin_scenario("GGJ7").unwrap();
        let t = s.to_table();
        assert_eq!(t, ContingencyTable::new(7, 196, 19, 1512));
        assert_eq!(t.total_shifts(), 1734);
        assert!((s.tail_probability().unwrap() - 0.13690).abs() < 5e-6);
        assert!((s.rate() - 26.0 / 1734.0).abs() < 1e-18);
    }
}
