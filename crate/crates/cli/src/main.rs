//! `incidents`: recompute the reference values, query tails and exact tests,
//! run Monte Carlo cross-checks and validate case data.
//!
//! Exit status: 0 on success, 1 when a reproduction check fails, 2 on a
//! usage or input error.

mod fraction;
mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use incidence::case_data::{
    builtin_ledger, builtin_scenario, builtin_scenarios, builtin_ward_table, builtin_ward_tables,
    consistency_report, load_scenario, CaseScenario, ScenarioDocument,
};
use incidence::distributions::HypergeomParams;
use incidence::exact_tests::{sensitivity_sweep, ContingencyTable};
use incidence::mixture_model::{rate_ratio_exceedance, MixedPoissonModel};
use incidence::reference::{MC_REPLICATIONS, MC_SIGMAS};
use incidence::report::{reproduce, MonteCarloSettings, ReproductionInputs};
use incidence::simulation::{
    simulate_allocation, simulate_mixture_tail, simulate_rate_ratio, SimConfig, SimEstimate,
    DEFAULT_SEED,
};

use fraction::Real;
use output::{num, Format};

#[derive(Parser)]
#[command(
    name = "incidents",
    version,
    about = "Incident-rate tails and exact tests for shift data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute every reference value and report pass/fail.
    Reproduce(ReproduceArgs),
    /// Upper tail P(N >= n) of the Gamma-mixed Poisson model.
    Tail(TailArgs),
    /// One-sided exact p-values as incidents are moved off the suspect's shifts.
    Sensitivity(SensitivityArgs),
    /// Tail curve P(N >= k), k = 1..=k_max, as plot data.
    Figure1(FigureArgs),
    /// Monte Carlo estimates.
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// Scenario documents.
    #[command(subcommand)]
    Scenario(ScenarioCommand),
}

#[derive(Args)]
struct McArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = MC_REPLICATIONS)]
    reps: u64,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(flatten)]
    mc: McArgs,
    /// Directory holding wards.toml, ggj7.toml and ggj13.toml to use instead
    /// of the built-in data.
    #[arg(long, value_name = "DIR")]
    fixtures: Option<PathBuf>,
    /// Print only failures and the summary line.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct TailArgs {
    /// Per-shift rate; accepts fractions such as 26/1734.
    #[arg(long, required_unless_present = "scenario")]
    mu: Option<Real>,
    /// Exposure (number of the suspect's shifts).
    #[arg(long, required_unless_present = "scenario")]
    t: Option<Real>,
    /// Gamma shape; 1 gives exponential intensities.
    #[arg(long, default_value = "1")]
    rho: Real,
    /// Observed count; defaults to the scenario's suspect incidents.
    #[arg(long, required_unless_present = "scenario")]
    n: Option<u64>,
    /// Built-in scenario name or scenario file supplying mu, t and n.
    #[arg(long, conflicts_with_all = ["mu", "t"])]
    scenario: Option<String>,
    /// Also print the quadrature value and a Monte Carlo estimate.
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    mc: McArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct SensitivityArgs {
    /// Built-in table (e.g. jkz-original), built-in scenario, or scenario file.
    table: String,
    #[arg(long, default_value_t = 8)]
    max_moved: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct FigureArgs {
    #[arg(long, default_value_t = 14, value_parser = clap::value_parser!(u64).range(1..))]
    k_max: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Built-in scenario name or scenario file (default GGJ7).
    #[arg(long, default_value = "GGJ7")]
    scenario: String,
}

#[derive(Subcommand)]
enum SimulateCommand {
    /// P(N >= n) under the mixed model.
    Mixture {
        #[arg(long)]
        mu: Real,
        #[arg(long)]
        t: Real,
        #[arg(long, default_value = "1")]
        rho: Real,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Probability that two exponential rates differ by a factor of at least k.
    RateRatio {
        #[arg(long, default_value = "2")]
        k: Real,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Exact-test tail by drawing shifts without replacement.
    Allocation {
        /// Built-in table, built-in scenario, or scenario file.
        table: String,
        /// Defaults to the table's incidents on the suspect's shifts.
        #[arg(long)]
        observed: Option<u64>,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// Cross-check a scenario file (or the built-in data) against the ledger
    /// and ward tables. Discrepancies are reported, not corrected.
    Validate {
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print a built-in scenario as a scenario document.
    Show {
        name: String,
        /// Include the corrected ward tables.
        #[arg(long)]
        wards: bool,
    },
}

#[derive(Debug)]
enum Failure {
    /// Bad arguments or unreadable input; exit 2.
    Usage(String),
    /// A reproduction check failed; exit 1.
    Check,
}

impl From<incidence::Error> for Failure {
    fn from(e: incidence::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Reproduce(a) => cmd_reproduce(a),
        Command::Tail(a) => cmd_tail(a),
        Command::Sensitivity(a) => cmd_sensitivity(a),
        Command::Figure1(a) => cmd_figure1(a),
        Command::Simulate(c) => cmd_simulate(c),
        Command::Scenario(c) => cmd_scenario(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn builtin_names() -> String {
    let mut names: Vec<String> = builtin_ward_tables().iter().map(|w| w.key()).collect();
    names.extend(builtin_scenarios().into_iter().map(|s| s.name));
    names.join(", ")
}

fn resolve_scenario(name: &str) -> Result<CaseScenario, Failure> {
    if let Some(s) = builtin_scenario(name) {
        return Ok(s);
    }
    let path = Path::new(name);
    if path.is_file() {
        return load_scenario(&read(path)?)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())));
    }
    let builtins: Vec<String> = builtin_scenarios().into_iter().map(|s| s.name).collect();
    Err(Failure::Usage(format!(
        "unknown scenario `{name}`; built-in scenarios: {}",
        builtins.join(", ")
    )))
}

fn resolve_table(name: &str) -> Result<ContingencyTable, Failure> {
    if let Some(w) = builtin_ward_table(name) {
        return Ok(w.table);
    }
    if let Some(s) = builtin_scenario(name) {
        return Ok(s.to_table());
    }
    let path = Path::new(name);
    if path.is_file() {
        return load_scenario(&read(path)?)
            .map(|s| s.to_table())
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())));
    }
    Err(Failure::Usage(format!(
        "unknown table `{name}`; built-in tables: {}",
        builtin_names()
    )))
}

fn cmd_reproduce(a: ReproduceArgs) -> CliResult {
    let inputs = match &a.fixtures {
        None => ReproductionInputs::builtin(),
        Some(dir) => ReproductionInputs::from_documents(
            &read(&dir.join("wards.toml"))?,
            &read(&dir.join("ggj7.toml"))?,
            &read(&dir.join("ggj13.toml"))?,
        )?,
    };
    let mc = MonteCarloSettings {
        replications: a.mc.reps,
        seed: a.mc.seed,
    };
    let report = reproduce(&inputs, mc)?;
    if a.quiet {
        for e in report.failures() {
            println!(
                "FAIL {}: computed {}, reference {}",
                e.label,
                num(e.computed),
                num(e.expected)
            );
        }
        let total = report.entries.len() + report.cross_checks.len();
        let failed = report.failures().count();
        println!("{}/{total} checks passed", total - failed);
    } else {
        output::reproduction(a.format, &report)?;
    }
    if report.pass() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

#[derive(Serialize)]
struct TailRecord {
    rho: f64,
    mu: f64,
    t: f64,
    n: u64,
    probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadrature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    monte_carlo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    monte_carlo_std_error: Option<f64>,
}

fn cmd_tail(a: TailArgs) -> CliResult {
    let (mu, t, n) = match &a.scenario {
        Some(name) => {
            let s = resolve_scenario(name)?;
            (
                s.rate(),
                s.suspect_shifts as f64,
                a.n.unwrap_or(s.suspect_incidents),
            )
        }
        None => (
            a.mu.expect("required by clap").0,
            a.t.expect("required by clap").0,
            a.n.expect("required by clap"),
        ),
    };
    let model = MixedPoissonModel::new(a.rho.0, mu, t)?;
    let mut rec = TailRecord {
        rho: model.rho(),
        mu,
        t,
        n,
        probability: model.tail_probability(n),
        quadrature: None,
        monte_carlo: None,
        monte_carlo_std_error: None,
    };
    if a.check {
        rec.quadrature = Some(model.tail_by_quadrature(n));
        let est = simulate_mixture_tail(&SimConfig::mixture(a.mc.reps, a.mc.seed, model)?, n)?;
        rec.monte_carlo = Some(est.point);
        rec.monte_carlo_std_error = Some(est.std_error);
    }
    match a.format {
        Format::Table => {
            println!("P(N >= {n}) = {}", num(rec.probability));
            if let Some(q) = rec.quadrature {
                println!(
                    "quadrature  = {}  (difference {:.3e})",
                    num(q),
                    q - rec.probability
                );
            }
            if let (Some(p), Some(se)) = (rec.monte_carlo, rec.monte_carlo_std_error) {
                println!(
                    "monte carlo = {} +/- {}  ({} reps, seed {})",
                    num(p),
                    num(se),
                    a.mc.reps,
                    a.mc.seed
                );
            }
            Ok(())
        }
        f => output::records(f, &[rec]),
    }
}

#[derive(Serialize)]
struct SensitivityRecord {
    moved_out: u64,
    table: String,
    p_value: f64,
    inverse_p: f64,
    inverse_p_rounded: u64,
}

fn cmd_sensitivity(a: SensitivityArgs) -> CliResult {
    let base = resolve_table(&a.table)?;
    let rows = sensitivity_sweep(&base, a.max_moved)?;
    let records: Vec<SensitivityRecord> = rows
        .iter()
        .map(|r| SensitivityRecord {
            moved_out: r.moved_out,
            table: base.with_moved_out(r.moved_out).expect("swept").to_string(),
            p_value: r.p_value,
            inverse_p: r.inverse_p,
            inverse_p_rounded: r.inverse_p_rounded(),
        })
        .collect();
    match a.format {
        Format::Table => {
            println!(
                "{:>5}  {:<16} {:>12}  {:>24}  {:>24}",
                "moved", "table", "1/p", "1/p (full)", "p"
            );
            for r in &records {
                println!(
                    "{:>5}  {:<16} {:>12}  {:>24}  {:>24}",
                    r.moved_out,
                    r.table,
                    r.inverse_p_rounded,
                    num(r.inverse_p),
                    num(r.p_value)
                );
            }
            Ok(())
        }
        f => output::records(f, &records),
    }
}

#[derive(Serialize)]
struct CurvePoint {
    k: u64,
    probability: f64,
}

fn cmd_figure1(a: FigureArgs) -> CliResult {
    let model = resolve_scenario(&a.scenario)?.model()?;
    let points: Vec<CurvePoint> = model
        .tail_curve(a.k_max)
        .iter()
        .map(|(k, probability)| CurvePoint { k, probability })
        .collect();
    match a.format {
        Format::Table => {
            for p in &points {
                println!("{:>3}  {}", p.k, num(p.probability));
            }
            Ok(())
        }
        f => output::records(f, &points),
    }
}

#[derive(Serialize)]
struct SimRecord {
    quantity: String,
    estimate: f64,
    std_error: f64,
    replications: u64,
    seed: u64,
    analytic: f64,
    z_score: f64,
}

fn sim_record(quantity: String, est: SimEstimate, seed: u64, analytic: f64) -> SimRecord {
    SimRecord {
        quantity,
        estimate: est.point,
        std_error: est.std_error,
        replications: est.replications,
        seed,
        analytic,
        z_score: est.z_score(analytic),
    }
}

fn cmd_simulate(c: SimulateCommand) -> CliResult {
    let (rec, format) = match c {
        SimulateCommand::Mixture {
            mu,
            t,
            rho,
            n,
            mc,
            format,
        } => {
            let model = MixedPoissonModel::new(rho.0, mu.0, t.0)?;
            let est = simulate_mixture_tail(&SimConfig::mixture(mc.reps, mc.seed, model)?, n)?;
            let q = format!("P(N >= {n})");
            (
                sim_record(q, est, mc.seed, model.tail_probability(n)),
                format,
            )
        }
        SimulateCommand::RateRatio { k, mc, format } => {
            let exact = rate_ratio_exceedance(k.0)?;
            let model = MixedPoissonModel::new(1.0, 1.0, 1.0)?;
            let est = simulate_rate_ratio(&SimConfig::mixture(mc.reps, mc.seed, model)?, k.0)?;
            let q = format!("P(rate ratio >= {})", num(k.0));
            (sim_record(q, est, mc.seed, exact), format)
        }
        SimulateCommand::Allocation {
            table,
            observed,
            mc,
            format,
        } => {
            let table = resolve_table(&table)?;
            let observed = observed.unwrap_or(table.suspect_with);
            let params: HypergeomParams = table.null_distribution();
            let est =
                simulate_allocation(&SimConfig::allocation(mc.reps, mc.seed, params)?, observed)?;
            let analytic = params.tail(observed);
            let q = format!("P(X >= {observed}), table {table}");
            (sim_record(q, est, mc.seed, analytic), format)
        }
    };
    match format {
        Format::Table => {
            println!("{}", rec.quantity);
            println!(
                "  estimate  {} +/- {}",
                num(rec.estimate),
                num(rec.std_error)
            );
            println!("  analytic  {}", num(rec.analytic));
            println!(
                "  z         {:.3} ({} reps, seed {}{})",
                rec.z_score,
                rec.replications,
                rec.seed,
                if rec.z_score <= MC_SIGMAS {
                    ""
                } else {
                    ", outside 4 s.e."
                }
            );
            Ok(())
        }
        f => output::records(f, &[rec]),
    }
}

fn cmd_scenario(c: ScenarioCommand) -> CliResult {
    match c {
        ScenarioCommand::Validate { file, format } => {
            let (scenarios, wards) = match &file {
                None => (builtin_scenarios(), builtin_ward_tables()),
                Some(path) => {
                    let doc = ScenarioDocument::parse(&read(path)?)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    let wards = if doc.wards.is_empty() {
                        builtin_ward_tables()
                    } else {
                        doc.wards
                    };
                    (vec![doc.scenario], wards)
                }
            };
            let findings = consistency_report(&builtin_ledger(), &wards, &scenarios);
            match format {
                Format::Table => {
                    for f in &findings {
                        println!("{f}");
                    }
                    let flagged = findings.iter().filter(|f| f.is_discrepancy()).count();
                    println!("{} checks, {flagged} discrepancies flagged", findings.len());
                    Ok(())
                }
                f => output::records(f, &findings),
            }
        }
        ScenarioCommand::Show { name, wards } => {
            let scenario = builtin_scenario(&name).ok_or_else(|| {
                let names: Vec<String> = builtin_scenarios().into_iter().map(|s| s.name).collect();
                Failure::Usage(format!(
                    "unknown scenario `{name}`; built-in scenarios: {}",
                    names.join(", ")
                ))
            })?;
            let mut doc = scenario.to_document();
            if wards {
                doc.wards = builtin_ward_tables()
                    .into_iter()
                    .filter(|w| w.variant == incidence::case_data::Variant::Corrected)
                    .collect();
            }
            print!("{}", doc.to_toml());
            Ok(())
        }
    }
}
