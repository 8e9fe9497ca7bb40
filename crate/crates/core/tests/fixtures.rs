use incidence::case_data::fixtures::{GGJ13_TOML, GGJ7_TOML, LEDGER_TOML, WARDS_TOML};
use incidence::case_data::{
    builtin_ledger, builtin_scenario, builtin_scenarios, builtin_ward_tables, consistency_report,
    ledger_to_toml, load_ledger, load_scenario, load_ward_tables, set_count, ward_tables_to_toml,
    CaseScenario, DataSet, ScenarioDocument, Variant,
};
use proptest::prelude::*;

#[test]
fn shipped_files_match_constants() {
    assert_eq!(load_ledger(LEDGER_TOML).unwrap(), builtin_ledger());
    assert_eq!(load_ward_tables(WARDS_TOML).unwrap(), builtin_ward_tables());
    assert_eq!(
        load_scenario(GGJ7_TOML).unwrap(),
        builtin_scenario("GGJ7").unwrap()
    );
    assert_eq!(
        load_scenario(GGJ13_TOML).unwrap(),
        builtin_scenario("GGJ13").unwrap()
    );
}

#[test]
fn serializers_round_trip_builtins() {
    let ledger = builtin_ledger();
    assert_eq!(load_ledger(&ledger_to_toml(&ledger)).unwrap(), ledger);
    let wards = builtin_ward_tables();
    assert_eq!(
        load_ward_tables(&ward_tables_to_toml(&wards)).unwrap(),
        wards
    );
    for s in builtin_scenarios() {
        assert_eq!(load_scenario(&s.to_document().to_toml()).unwrap(), s);
    }
}

#[test]
fn ward_sums() {
    for variant in [Variant::Original, Variant::Corrected] {
        let shifts: u64 = builtin_ward_tables()
            .iter()
            .filter(|w| w.variant == variant)
            .map(|w| w.table.total_shifts())
            .sum();
        assert_eq!(shifts, 1734, "{variant}");
    }
    let corrected: Vec<u64> = builtin_ward_tables()
        .iter()
        .filter(|w| w.variant == Variant::Corrected)
        .map(|w| w.table.total_incidents())
        .collect();
    assert_eq!(corrected, vec![11, 10, 5]);
}

#[test]
fn ledger_set_containment() {
    let ledger = builtin_ledger();
    assert_eq!(set_count(&ledger, DataSet::Ggj7), 7);
    assert!(ledger
        .iter()
        .filter(|e| e.in_set(DataSet::Ggj7))
        .all(|e| e.in_set(DataSet::Ggj13)));
}

#[test]
fn report_flags_suspect_incident_gap() {
    let findings = consistency_report(
        &builtin_ledger(),
        &builtin_ward_tables(),
        &builtin_scenarios(),
    );
    let gap = findings
        .iter()
        .find(|f| f.check == "GGJ7 suspect incidents vs corrected ward tables")
        .unwrap();
    assert!(gap.is_discrepancy());
    assert_eq!((gap.expected, gap.found), (7, 9));
}

#[test]
fn scenario_document_with_corrected_wards_loads() {
    let wards = builtin_ward_tables()
        .into_iter()
        .filter(|w| w.variant == Variant::Corrected)
        .collect();
    let doc = ScenarioDocument {
        scenario: builtin_scenario("GGJ7").unwrap(),
        wards,
    };
    assert_eq!(ScenarioDocument::parse(&doc.to_toml()).unwrap(), doc);
}

#[test]
fn parse_errors_carry_location() {
    let err = load_scenario("format_version = 1\nname = \"x\"\nsuspect_shifts = -3\n").unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
}

fn scenario_strategy() -> impl Strategy<Value = CaseScenario> {
    (
        1u64..5000,
        1u64..5000,
        0u64..1000,
        0u64..1000,
        "[A-Za-z0-9 _-]{1,12}",
    )
        .prop_map(|(a, b, c, d, name)| {
            let total_shifts = a + b;
            let total_incidents = (c + d).clamp(1, total_shifts);
            let suspect_shifts = a;
            let suspect_incidents = c.min(total_incidents).min(suspect_shifts);
            CaseScenario {
                name,
                suspect_shifts,
                suspect_incidents,
                total_shifts,
                total_incidents,
            }
        })
}

proptest! {
    #[test]
    fn scenario_round_trip(s in scenario_strategy()) {
        prop_assume!(s.validate().is_ok());
        let text = s.to_document().to_toml();
        prop_assert_eq!(load_scenario(&text).unwrap(), s);
    }
}
