//! Experiment runner for the `linoptics` simulator.
//!
//! Every subcommand maps to one experiment and produces either a JSON
//! report (schema version `"1"`, see `schemas/report.schema.json`) or a CSV
//! table. Randomness comes from ChaCha20: run `k` of an experiment uses
//! stream `k` of `ChaCha20Rng::seed_from_u64(seed)`, so raising `--shots`
//! never changes the draws of earlier runs, and the same arguments always
//! produce the same bytes.

pub mod args;
pub mod catalog;
pub mod experiments;
pub mod report;

use std::time::Instant;

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

use args::{Cli, Command, Format};
use experiments::Globals;
use report::{flatten, ConfigEcho, ExperimentReport, Outcome, Table, SCHEMA_VERSION};

fn params<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("arguments serialize")
}

/// Runs the selected experiment and returns the subcommand name, its
/// parameter echo and outcome.
pub fn execute(command: &Command, g: &Globals) -> Result<(&'static str, Value, Outcome)> {
    use experiments as e;
    Ok(match command {
        Command::List => unreachable!("list has no outcome"),
        Command::Hom(a) => ("hom", params(a), e::hom(a, g)?),
        Command::G2(a) => ("g2", params(a), e::g2(a, g)?),
        Command::DoubleSlit(a) => ("double-slit", params(a), e::double_slit(a, g)?),
        Command::Bb84(a) => ("bb84", params(a), e::bb84(a, g)?),
        Command::Teleport(a) => ("teleport", params(a), e::teleport(a, g)?),
        Command::Repeater(a) => ("repeater", params(a), e::repeater(a, g)?),
        Command::NsGate(a) => ("ns-gate", params(a), e::ns_gate_cmd(a, g)?),
        Command::CzGate(a) => ("cz-gate", params(a), e::cz_gate_cmd(a, g)?),
        Command::Fusion(a) => ("fusion", params(a), e::fusion(a, g)?),
        Command::ClusterMbqc(a) => ("cluster-mbqc", params(a), e::cluster_mbqc(a, g)?),
        Command::NoonScaling(a) => ("noon-scaling", params(a), e::noon_scaling(a, g)?),
        Command::Squeeze(a) => ("squeeze", params(a), e::squeeze(a, g)?),
        Command::Micrometer(a) => ("micrometer", params(a), e::micrometer(a, g)?),
    })
}

/// Full report for one invocation, wall time included only on request.
pub fn report(cli: &Cli) -> Result<(ExperimentReport, Outcome)> {
    let g = Globals {
        seed: cli.seed,
        shots: cli.shots,
        cutoff: cli.cutoff,
    };
    let start = Instant::now();
    let (name, params, outcome) = execute(&cli.command, &g)?;
    let wall = start.elapsed().as_secs_f64();
    let report = ExperimentReport {
        schema_version: SCHEMA_VERSION,
        experiment: name.to_string(),
        config: ConfigEcho {
            seed: cli.seed,
            shots: outcome.shots,
            cutoff: outcome.cutoff,
            params,
        },
        results: outcome.results.clone(),
        truncation_residual: outcome.truncation_residual,
        wall_time_s: cli.timing.then_some(wall),
    };
    Ok((report, outcome))
}

/// The bytes the binary writes for `cli`.
pub fn render(cli: &Cli) -> Result<String> {
    if let Command::List = cli.command {
        let entries = catalog::catalog();
        return Ok(match cli.format.unwrap_or(Format::Json) {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&entries)?;
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut t = Table::new(vec!["name", "ref", "default_format", "summary"]);
                for e in entries {
                    t.push(vec![e.name.into(), e.reference.into(), e.default_format.into(), e.summary.into()]);
                }
                t.to_csv()
            }
        });
    }
    let (report, outcome) = report(cli)?;
    Ok(match cli.format.unwrap_or(outcome.default_format) {
        Format::Json => report.to_json(),
        Format::Csv => outcome.table.unwrap_or_else(|| flatten(&outcome.results)).to_csv(),
    })
}
