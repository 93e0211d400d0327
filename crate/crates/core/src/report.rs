//! CSV artifacts of a planning run.

use std::io::Write;

use crate::dro::{Mode, PlanningSolution, ReformulationReport};
use crate::error::PlanError;
use crate::model::CostFamily;

/// Fixed six-decimal rendering; magnitudes below 1e-9 print as 0 so that
/// round-off never shows up as `-0.000000`.
pub fn num(v: f64) -> String {
    if v.abs() < 1e-9 {
        "0".to_string()
    } else {
        format!("{v:.6}")
    }
}

fn csv_err(e: csv::Error) -> PlanError {
    PlanError::Io(std::io::Error::other(e))
}

fn write_all<W: Write, I, R>(writer: W, header: &[&str], rows: I) -> Result<(), PlanError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Cost breakdown: the eight headline items, the two electricity items and
/// the total.
pub fn write_costs<W: Write>(sol: &PlanningSolution, writer: W) -> Result<(), PlanError> {
    let mut rows: Vec<[String; 2]> = CostFamily::ALL
        .iter()
        .map(|&f| [f.label().to_string(), num(sol.cost(f))])
        .collect();
    rows.push(["Total".to_string(), num(sol.total_cost)]);
    write_all(writer, &["item", "cost"], rows)
}

pub fn write_production<W: Write>(sol: &PlanningSolution, writer: W) -> Result<(), PlanError> {
    write_all(
        writer,
        &["unit", "node", "t", "p2g", "supply", "discharge", "charge"],
        sol.production.iter().map(|r| {
            [
                r.unit.clone(),
                r.node.clone(),
                r.t.to_string(),
                num(r.p2g),
                num(r.supply),
                num(r.discharge),
                num(r.charge),
            ]
        }),
    )
}

pub fn write_capture<W: Write>(sol: &PlanningSolution, writer: W) -> Result<(), PlanError> {
    write_all(
        writer,
        &["unit", "node", "t", "capture"],
        sol.capture.iter().map(|r| {
            [
                r.unit.clone(),
                r.node.clone(),
                r.t.to_string(),
                num(r.capture),
            ]
        }),
    )
}

/// One row per asset: HRS, P2G and storage per node, then pipelines.
pub fn write_siting<W: Write>(sol: &PlanningSolution, writer: W) -> Result<(), PlanError> {
    let bit = |b: bool| if b { "1" } else { "0" }.to_string();
    let mut rows = Vec::new();
    for c in &sol.capacities {
        rows.push(["hrs".to_string(), c.node.clone(), bit(c.w_hy), num(c.h_hy)]);
        rows.push([
            "p2g".to_string(),
            c.node.clone(),
            bit(c.w_p2g),
            num(c.h_p2g),
        ]);
        rows.push(["hs".to_string(), c.node.clone(), bit(c.w_hs), num(c.h_hs)]);
    }
    for (id, built) in &sol.pipelines {
        rows.push([
            "pipeline".to_string(),
            id.clone(),
            bit(*built),
            String::new(),
        ]);
    }
    write_all(writer, &["asset", "id", "built", "capacity"], rows)
}

/// Per-unit outcome with its empirical and worst-case probability.
pub fn write_distribution<W: Write>(sol: &PlanningSolution, writer: W) -> Result<(), PlanError> {
    write_all(
        writer,
        &["unit", "outcome", "empirical", "worst_case"],
        (0..sol.unit_labels.len()).map(|u| {
            [
                sol.unit_labels[u].clone(),
                num(sol.outcomes[u]),
                format!("{:.12}", sol.empirical[u]),
                format!("{:.12}", sol.worst_case[u]),
            ]
        }),
    )
}

pub fn write_counts<W: Write>(reports: &[ReformulationReport], writer: W) -> Result<(), PlanError> {
    write_all(
        writer,
        &ReformulationReport::HEADER,
        reports.iter().map(|r| r.record()),
    )
}

/// Outcome of one mode in a comparison run.
#[derive(Debug)]
pub struct CompareRow<'a> {
    pub mode: Mode,
    pub result: Result<&'a PlanningSolution, &'a PlanError>,
}

/// One row per mode with the cost breakdown. Failed modes keep their row
/// with the status filled in and the numbers left empty.
pub fn write_compare<W: Write>(rows: &[CompareRow<'_>], writer: W) -> Result<(), PlanError> {
    let mut header = vec!["mode", "status", "objective", "total"];
    header.extend(CostFamily::ALL.iter().map(|f| f.label()));
    header.extend(["pattern", "epsilon"]);
    let records = rows.iter().map(|row| {
        let mut rec = vec![row.mode.label().to_string()];
        match row.result {
            Ok(sol) => {
                rec.push("optimal".to_string());
                rec.push(num(sol.objective));
                rec.push(num(sol.total_cost));
                rec.extend(CostFamily::ALL.iter().map(|&f| num(sol.cost(f))));
                rec.push(sol.pattern.bits());
                rec.push(sol.epsilon.map(num).unwrap_or_default());
            }
            Err(e) => {
                rec.push(format!("failed: {e}"));
                rec.extend(std::iter::repeat_n(
                    String::new(),
                    2 + CostFamily::ALL.len() + 2,
                ));
            }
        }
        rec
    });
    write_all(writer, &header, records)
}

/// Wall times, kept apart from the deterministic CSVs.
pub fn write_timings<W: Write>(rows: &[(String, f64)], writer: W) -> Result<(), PlanError> {
    write_all(
        writer,
        &["run", "seconds"],
        rows.iter().map(|(k, s)| [k.clone(), format!("{s:.3}")]),
    )
}
