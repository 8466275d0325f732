use std::any::TypeId;

use clap::CommandFactory;
use serde::Serialize;

use crate::args::Cli;

#[derive(Debug, Clone, Serialize)]
pub struct ParamSchema {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub default: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<String>,
    pub help: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub summary: String,
    /// Topic the experiment reproduces.
    #[serde(rename = "ref")]
    pub reference: &'static str,
    pub default_format: &'static str,
    /// Whether `--shots` sets a repetition count.
    pub uses_shots: bool,
    /// Whether `--cutoff` sets the Fock truncation.
    pub uses_cutoff: bool,
    pub params: Vec<ParamSchema>,
}

struct Meta {
    name: &'static str,
    reference: &'static str,
    csv: bool,
    shots: bool,
    cutoff: bool,
}

const META: [Meta; 13] = [
    Meta { name: "hom", reference: "Hong-Ou-Mandel interference", csv: true, shots: false, cutoff: true },
    Meta { name: "g2", reference: "photon statistics and second-order coherence", csv: true, shots: true, cutoff: true },
    Meta { name: "double-slit", reference: "double-slit interference of single photons", csv: true, shots: true, cutoff: false },
    Meta { name: "bb84", reference: "BB84 quantum key distribution", csv: false, shots: true, cutoff: false },
    Meta { name: "teleport", reference: "quantum teleportation", csv: false, shots: true, cutoff: false },
    Meta { name: "repeater", reference: "channel loss and quantum repeaters", csv: false, shots: true, cutoff: false },
    Meta { name: "ns-gate", reference: "nonlinear sign gate", csv: false, shots: false, cutoff: false },
    Meta { name: "cz-gate", reference: "linear-optical controlled-Z gate", csv: false, shots: false, cutoff: false },
    Meta { name: "fusion", reference: "type-I and type-II fusion gates", csv: false, shots: false, cutoff: false },
    Meta { name: "cluster-mbqc", reference: "cluster states and one-way computation", csv: false, shots: true, cutoff: false },
    Meta { name: "noon-scaling", reference: "shot-noise and Heisenberg limits", csv: true, shots: true, cutoff: false },
    Meta { name: "squeeze", reference: "quadratures and squeezed light", csv: true, shots: false, cutoff: true },
    Meta { name: "micrometer", reference: "fringe-counting micrometer", csv: false, shots: true, cutoff: false },
];

fn kind_of(arg: &clap::Arg) -> &'static str {
    let id = arg.get_value_parser().type_id();
    if !arg.get_possible_values().is_empty() {
        "enum"
    } else if id == TypeId::of::<f64>() {
        "real"
    } else if id == TypeId::of::<bool>() {
        "flag"
    } else if [TypeId::of::<u64>(), TypeId::of::<u32>(), TypeId::of::<usize>()]
        .into_iter()
        .any(|t| id == t)
    {
        "integer"
    } else {
        "string"
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    let cmd = Cli::command();
    META.iter()
        .map(|m| {
            let sub = cmd.find_subcommand(m.name).expect("catalog names match subcommands");
            let params = sub
                .get_arguments()
                .filter(|a| !a.is_global_set() && a.get_long().is_some() && a.get_id() != "help")
                .map(|a| {
                    let defaults: Vec<String> =
                        a.get_default_values().iter().map(|v| v.to_string_lossy().into_owned()).collect();
                    ParamSchema {
                        name: a.get_long().unwrap_or_default().to_string(),
                        kind: kind_of(a),
                        default: (!defaults.is_empty()).then(|| defaults.join(",")),
                        values: a.get_possible_values().iter().map(|v| v.get_name().to_string()).collect(),
                        help: a.get_help().map(|h| h.to_string()).unwrap_or_default(),
                    }
                })
                .collect();
            CatalogEntry {
                name: m.name.to_string(),
                summary: sub.get_about().map(|s| s.to_string()).unwrap_or_default(),
                reference: m.reference,
                default_format: if m.csv { "csv" } else { "json" },
                uses_shots: m.shots,
                uses_cutoff: m.cutoff,
                params,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirteen_entries_with_refs() {
        let c = catalog();
        assert_eq!(c.len(), 13);
        assert!(c.iter().all(|e| !e.reference.is_empty() && !e.summary.is_empty()));
        let names: Vec<_> = Cli::command()
            .get_subcommands()
            .map(|s| s.get_name().to_string())
            .filter(|n| n != "list" && n != "help")
            .collect();
        assert_eq!(names, c.iter().map(|e| e.name.clone()).collect::<Vec<_>>());
    }

    #[test]
    fn parameter_types() {
        let c = catalog();
        let hom = &c[0];
        let tau = hom.params.iter().find(|p| p.name == "tau-max").unwrap();
        assert_eq!((tau.kind, tau.default.as_deref()), ("real", Some("3")));
        let input = hom.params.iter().find(|p| p.name == "input").unwrap();
        assert_eq!(input.kind, "enum");
        assert_eq!(input.values, ["pair", "coherent"]);
        let steps = hom.params.iter().find(|p| p.name == "tau-steps").unwrap();
        assert_eq!(steps.kind, "integer");
    }
}
