//! JSON and CSV renderings. Field order and row order are fixed, so equal
//! inputs give equal bytes.

use serde::Serialize;

use wsk_core::mult::{TableKind, LayerTable};
use wsk_core::verify::Report;
use wsk_core::{Family, GroupContext, QConvention};

pub const TABLE_SCHEMA: &str = "wsk.table.v1";
pub const ORBIT_SCHEMA: &str = "wsk.orbit.v1";
pub const BASEPOINT_CONVENTION: &str = "Cminus=w0.C";

#[derive(Serialize)]
struct Flags {
    outside_proven_range: bool,
    assumes_james: bool,
    assumes_bipartite: bool,
}

#[derive(Serialize)]
struct Context {
    family: Family,
    rank: usize,
    e: i64,
    flags: Flags,
}

#[derive(Serialize)]
struct Entry {
    label: Vec<i64>,
    mult: u64,
}

#[derive(Serialize)]
struct Layer {
    i: usize,
    entries: Vec<Entry>,
}

#[derive(Serialize)]
struct Metadata {
    q_convention: QConvention,
    basepoint_convention: &'static str,
    kind: TableKind,
    filtration: &'static str,
}

#[derive(Serialize)]
struct TableDoc {
    schema: &'static str,
    context: Context,
    lambda: Vec<i64>,
    layers: Vec<Layer>,
    metadata: Metadata,
}

pub fn table_json(t: &LayerTable) -> anyhow::Result<String> {
    let doc = TableDoc {
        schema: TABLE_SCHEMA,
        context: Context {
            family: t.family,
            rank: t.rank,
            e: t.e,
            flags: Flags {
                outside_proven_range: t.flags.outside_proven_range,
                assumes_james: t.flags.assumes_james,
                assumes_bipartite: t.flags.assumes_bipartite,
            },
        },
        lambda: t.highest.as_array(),
        layers: t
            .layers
            .iter()
            .enumerate()
            .map(|(i, l)| Layer {
                i,
                entries: l.iter().map(|x| Entry { label: x.label.as_array(), mult: x.mult }).collect(),
            })
            .collect(),
        metadata: Metadata {
            q_convention: t.flags.q_convention,
            basepoint_convention: BASEPOINT_CONVENTION,
            kind: t.kind,
            filtration: t.filtration(),
        },
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// One row per nonzero entry: `i,label,mult`, label as `(3,1)` or `w:(1,0)`.
pub fn table_csv(t: &LayerTable) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["i", "label", "mult"])?;
    for (i, layer) in t.layers.iter().enumerate() {
        for x in layer {
            w.write_record([i.to_string(), x.label.to_string(), x.mult.to_string()])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Serialize)]
struct OrbitDoc<'a> {
    schema: &'static str,
    family: Family,
    rank: usize,
    e: i64,
    lambda: Vec<i64>,
    class: &'a [Vec<i64>],
}

pub fn orbit(format: crate::Format, ctx: &GroupContext, lambda: Vec<i64>, class: &[Vec<i64>]) -> crate::CmdResult<String> {
    match format {
        crate::Format::Json => {
            let doc = OrbitDoc {
                schema: ORBIT_SCHEMA,
                family: ctx.family(),
                rank: ctx.rank(),
                e: ctx.e(),
                lambda,
                class,
            };
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        crate::Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["label"])?;
            for c in class {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                w.write_record([format!("({})", parts.join(","))])?;
            }
            Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)?)
        }
    }
}

pub fn reports_json(reports: &[Report]) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(reports)? + "\n")
}

pub fn reports_csv(reports: &[Report]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["suite", "context", "cases_checked", "failures", "inconclusive"])?;
    for r in reports {
        w.write_record([
            r.suite.clone(),
            r.context.clone(),
            r.cases_checked.to_string(),
            r.failures.len().to_string(),
            r.inconclusive.len().to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
