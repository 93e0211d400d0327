//! MPS (fixed layout) and CPLEX-style LP text writers.
//!
//! Both writers walk variables and rows in registration order and format
//! numbers with the shortest round-trip representation, so two exports of the
//! same model are byte-identical.

use std::collections::HashSet;
use std::io::Write;

use crate::error::ExportError;
use crate::model::{MilpModel, Sense, VarKind};

/// Width of name fields in the MPS layout.
pub const MPS_NAME_WIDTH: usize = 12;

const OBJ_ROW: &str = "COST";

/// How column names ended up in an MPS file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnNaming {
    /// Registry names, truncated to [`MPS_NAME_WIDTH`] characters.
    Truncated,
    /// Truncation collided, so columns are written as `C<index>`.
    Positional,
}

/// Picks MPS column names: truncated registry names when they stay unique
/// and contain no whitespace, positional names otherwise.
pub fn mps_column_names(model: &MilpModel) -> (Vec<String>, ColumnNaming) {
    let mut seen = HashSet::new();
    let mut names = Vec::with_capacity(model.num_vars());
    let mut ok = true;
    for v in model.variables() {
        let short: String = v.name.chars().take(MPS_NAME_WIDTH).collect();
        if short.is_empty()
            || short.chars().any(char::is_whitespace)
            || short == OBJ_ROW
            || !seen.insert(short.clone())
        {
            ok = false;
            break;
        }
        names.push(short);
    }
    if ok {
        (names, ColumnNaming::Truncated)
    } else {
        let names = (0..model.num_vars()).map(|i| format!("C{i:07}")).collect();
        (names, ColumnNaming::Positional)
    }
}

fn row_name(index: usize) -> String {
    format!("R{index:07}")
}

fn num(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

fn entry(out: &mut Vec<u8>, field1: &str, name: &str, row: &str, value: f64) {
    let _ = writeln!(
        out,
        " {field1:<2} {name:<w$}  {row:<w$}  {}",
        num(value),
        w = MPS_NAME_WIDTH
    );
}

/// Renders the model as fixed-layout MPS. Rows are named `R<index>` and the
/// objective row `COST`; binaries are bracketed by `INTORG`/`INTEND` markers.
pub fn mps_string(model: &MilpModel) -> String {
    let (cols, naming) = mps_column_names(model);
    let mut out = Vec::<u8>::new();
    let _ = writeln!(
        out,
        "* columns: {}",
        match naming {
            ColumnNaming::Truncated => "registry names",
            ColumnNaming::Positional => "positional names",
        }
    );
    let name: String = model
        .name()
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let _ = writeln!(
        out,
        "NAME          {}",
        if name.is_empty() { "MODEL" } else { &name }
    );
    let _ = writeln!(out, "ROWS");
    let _ = writeln!(out, " N  {OBJ_ROW}");
    for c in model.constraints() {
        let s = match c.sense {
            Sense::Le => "L",
            Sense::Eq => "E",
            Sense::Ge => "G",
        };
        let _ = writeln!(out, " {s}  {}", row_name(c.id.index()));
    }

    // Column-major view of the rows.
    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); model.num_vars()];
    for c in model.constraints() {
        for &(v, a) in &c.terms {
            by_col[v.index()].push((c.id.index(), a));
        }
    }
    let obj = model.objective_coefficients();

    let _ = writeln!(out, "COLUMNS");
    let mut in_int = false;
    for v in model.variables() {
        let is_int = v.kind == VarKind::Binary;
        if is_int && !in_int {
            let _ = writeln!(out, "    MARKER{:w$}'MARKER'{:w$}'INTORG'", "", "", w = 10);
            in_int = true;
        } else if !is_int && in_int {
            let _ = writeln!(out, "    MARKER{:w$}'MARKER'{:w$}'INTEND'", "", "", w = 10);
            in_int = false;
        }
        let col = &cols[v.id.index()];
        let i = v.id.index();
        if obj[i] != 0.0 {
            entry(&mut out, "", col, OBJ_ROW, obj[i]);
        }
        for &(r, a) in &by_col[i] {
            entry(&mut out, "", col, &row_name(r), a);
        }
        if obj[i] == 0.0 && by_col[i].is_empty() {
            // Keep the column declared so BOUNDS can refer to it.
            entry(&mut out, "", col, OBJ_ROW, 0.0);
        }
    }
    if in_int {
        let _ = writeln!(out, "    MARKER{:w$}'MARKER'{:w$}'INTEND'", "", "", w = 10);
    }

    let _ = writeln!(out, "RHS");
    if model.objective_constant() != 0.0 {
        entry(&mut out, "", "RHS", OBJ_ROW, -model.objective_constant());
    }
    for c in model.constraints() {
        if c.rhs != 0.0 {
            entry(&mut out, "", "RHS", &row_name(c.id.index()), c.rhs);
        }
    }

    let _ = writeln!(out, "BOUNDS");
    for v in model.variables() {
        let col = &cols[v.id.index()];
        let (l, u) = (v.lower, v.upper);
        if l == u {
            entry(&mut out, "FX", "BND", col, l);
            continue;
        }
        match (l.is_finite(), u.is_finite()) {
            (false, false) => {
                let _ = writeln!(out, " FR BND           {col}");
            }
            (false, true) => {
                let _ = writeln!(out, " MI BND           {col}");
                entry(&mut out, "UP", "BND", col, u);
            }
            (true, fin_u) => {
                if l != 0.0 {
                    entry(&mut out, "LO", "BND", col, l);
                }
                if fin_u {
                    entry(&mut out, "UP", "BND", col, u);
                }
            }
        }
    }
    let _ = writeln!(out, "ENDATA");
    String::from_utf8(out).expect("MPS output is ASCII")
}

/// Writes [`mps_string`] to `writer`.
pub fn export_mps<W: Write>(model: &MilpModel, mut writer: W) -> Result<(), ExportError> {
    writer.write_all(mps_string(model).as_bytes())?;
    Ok(())
}

fn lp_terms(out: &mut String, terms: impl Iterator<Item = (String, f64)>) {
    let mut on_line = 0;
    let mut any = false;
    for (name, a) in terms {
        if on_line == 6 {
            out.push_str("\n   ");
            on_line = 0;
        }
        let sign = if a < 0.0 { '-' } else { '+' };
        out.push_str(&format!(" {sign} {} {name}", num(a.abs())));
        on_line += 1;
        any = true;
    }
    if !any {
        out.push_str(" 0");
    }
}

/// Renders the model in CPLEX LP text format. Rows are labelled
/// `<tag>_<index>` so the tag structure is visible when reading the file.
pub fn lp_string(model: &MilpModel) -> String {
    let vars = model.variables();
    let obj = model.objective_coefficients();
    let mut out = String::new();
    out.push_str(&format!("\\ model {}\n", model.name()));
    if model.objective_constant() != 0.0 {
        out.push_str(&format!(
            "\\ objective constant {}\n",
            num(model.objective_constant())
        ));
    }
    out.push_str("Minimize\n obj:");
    lp_terms(
        &mut out,
        obj.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, &c)| (vars[i].name.clone(), c)),
    );
    out.push_str("\nSubject To\n");
    for c in model.constraints() {
        let label = if c.tag.is_empty() {
            "r"
        } else {
            c.tag.as_str()
        };
        out.push_str(&format!(" {label}_{}:", c.id.index()));
        lp_terms(
            &mut out,
            c.terms
                .iter()
                .map(|&(v, a)| (vars[v.index()].name.clone(), a)),
        );
        let s = match c.sense {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        };
        out.push_str(&format!(" {s} {}\n", num(c.rhs)));
    }
    out.push_str("Bounds\n");
    for v in vars {
        let (l, u) = (v.lower, v.upper);
        let name = &v.name;
        if l == u {
            out.push_str(&format!(" {name} = {}\n", num(l)));
        } else if !l.is_finite() && !u.is_finite() {
            out.push_str(&format!(" {name} free\n"));
        } else if !l.is_finite() {
            out.push_str(&format!(" -inf <= {name} <= {}\n", num(u)));
        } else if u.is_finite() {
            out.push_str(&format!(" {} <= {name} <= {}\n", num(l), num(u)));
        } else if l != 0.0 {
            out.push_str(&format!(" {name} >= {}\n", num(l)));
        }
    }
    let bins: Vec<&str> = vars
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.name.as_str())
        .collect();
    if !bins.is_empty() {
        out.push_str("Binaries\n");
        for chunk in bins.chunks(8) {
            out.push(' ');
            out.push_str(&chunk.join(" "));
            out.push('\n');
        }
    }
    out.push_str("End\n");
    out
}

pub fn export_lp<W: Write>(model: &MilpModel, mut writer: W) -> Result<(), ExportError> {
    writer.write_all(lp_string(model).as_bytes())?;
    Ok(())
}
