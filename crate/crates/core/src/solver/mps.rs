//! MPS reading and writing.
//!
//! Fixed format puts fields at columns 2-3, 5-12, 15-22, 25-36, 40-47 and
//! 50-61 (one entry per line). Free format separates fields by single
//! spaces and allows long names. The reader tokenises on whitespace, so it
//! accepts both layouts as long as names contain no blanks.
//!
//! The objective constant is carried as the negated RHS of the objective
//! row. RANGES is never written and rejected on read.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{RowFamily, Sense, SubproblemModel, VarKind};

const OBJECTIVE_ROW: &str = "COST";
const RHS_SET: &str = "RHS";
const BOUND_SET: &str = "BND";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MpsFormat {
    #[default]
    Fixed,
    Free,
}

fn check_name(name: &str, what: &str, format: MpsFormat) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace()) {
        return Err(Error::Solver(format!("{what} name `{name}` is empty or contains blanks")));
    }
    if name.starts_with('$') || name.starts_with('*') {
        return Err(Error::Solver(format!("{what} name `{name}` starts with a reserved character")));
    }
    if format == MpsFormat::Fixed && name.len() > 8 {
        return Err(Error::Solver(format!(
            "{what} name `{name}` exceeds 8 characters; use the free format"
        )));
    }
    Ok(())
}

fn number(v: f64, format: MpsFormat) -> String {
    let plain = format!("{v}");
    if format == MpsFormat::Free || plain.len() <= 12 {
        return plain;
    }
    // Closest 12-character rendering among fixed and scientific notation.
    (0..12)
        .flat_map(|p| [format!("{v:.p$}"), format!("{v:.p$e}")])
        .filter(|s| s.len() <= 12)
        .min_by(|a, b| {
            let err = |s: &String| (s.parse::<f64>().unwrap_or(f64::INFINITY) - v).abs();
            err(a).total_cmp(&err(b)).then(a.len().cmp(&b.len()))
        })
        .unwrap_or(plain)
}

struct Writer {
    out: String,
    format: MpsFormat,
}

impl Writer {
    fn line(&mut self, fields: [&str; 6]) {
        let mut line = String::new();
        match self.format {
            MpsFormat::Fixed => {
                // Field start columns, 1-based.
                const START: [usize; 6] = [2, 5, 15, 25, 40, 50];
                for (f, start) in fields.iter().zip(START) {
                    if f.is_empty() {
                        continue;
                    }
                    while line.len() < start - 1 {
                        line.push(' ');
                    }
                    line.push_str(f);
                }
            }
            MpsFormat::Free => {
                line.push(' ');
                line.push_str(&fields.iter().filter(|f| !f.is_empty()).copied().collect::<Vec<_>>().join(" "));
                if fields[0].is_empty() {
                    line.insert(0, ' ');
                }
            }
        }
        self.out.push_str(line.trim_end());
        self.out.push('\n');
    }

    fn entry(&mut self, code: &str, set: &str, name: &str, value: Option<f64>) {
        let v = value.map(|v| number(v, self.format)).unwrap_or_default();
        self.line([code, set, name, &v, "", ""]);
    }

    fn entry_bound(&mut self, code: &str, column: &str, value: f64) {
        self.entry(code, BOUND_SET, column, Some(value));
    }
}

/// Serialises `model` under the given problem name.
pub fn write_mps(model: &SubproblemModel, name: &str, format: MpsFormat) -> Result<String> {
    model.validate()?;
    check_name(name, "problem", format)?;
    let mut seen = HashSet::new();
    seen.insert(OBJECTIVE_ROW);
    for r in &model.rows {
        check_name(&r.name, "row", format)?;
        if !seen.insert(r.name.as_str()) {
            return Err(Error::Duplicate {
                kind: "row name",
                key: r.name.clone(),
            });
        }
    }
    let mut seen = HashSet::new();
    for c in &model.columns {
        check_name(&c.name, "column", format)?;
        if !seen.insert(c.name.as_str()) {
            return Err(Error::Duplicate {
                kind: "column name",
                key: c.name.clone(),
            });
        }
    }

    let mut by_column: Vec<Vec<(usize, f64)>> = vec![Vec::new(); model.num_columns()];
    for (i, r) in model.rows.iter().enumerate() {
        for &(j, a) in &r.coeffs {
            by_column[j].push((i, a));
        }
    }

    let mut w = Writer {
        out: String::new(),
        format,
    };
    let _ = writeln!(w.out, "NAME          {name}");
    w.out.push_str("ROWS\n");
    w.line(["N", OBJECTIVE_ROW, "", "", "", ""]);
    for r in &model.rows {
        let code = match r.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        w.line([code, &r.name, "", "", "", ""]);
    }

    w.out.push_str("COLUMNS\n");
    let mut in_marker = false;
    let mut markers = 0usize;
    for (j, c) in model.columns.iter().enumerate() {
        let binary = c.kind == VarKind::Binary;
        if binary != in_marker {
            let tag = if binary { "'INTORG'" } else { "'INTEND'" };
            let label = format!("MARKER{:02}", markers / 2).chars().take(8).collect::<String>();
            w.line(["", &label, "'MARKER'", "", tag, ""]);
            markers += 1;
            in_marker = binary;
        }
        let cost = model.objective[j];
        if cost != 0.0 || by_column[j].is_empty() {
            w.entry("", &c.name, OBJECTIVE_ROW, Some(cost));
        }
        for &(i, a) in &by_column[j] {
            w.entry("", &c.name, &model.rows[i].name, Some(a));
        }
    }
    if in_marker {
        let label = format!("MARKER{:02}", markers / 2);
        w.line(["", &label, "'MARKER'", "", "'INTEND'", ""]);
    }

    w.out.push_str("RHS\n");
    if model.objective_constant != 0.0 {
        w.entry("", RHS_SET, OBJECTIVE_ROW, Some(-model.objective_constant));
    }
    for r in &model.rows {
        if r.rhs != 0.0 {
            w.entry("", RHS_SET, &r.name, Some(r.rhs));
        }
    }

    w.out.push_str("BOUNDS\n");
    for c in &model.columns {
        let (lo, hi) = (c.lower, c.upper);
        match c.kind {
            VarKind::Binary if lo == 0.0 && hi == 1.0 => {
                w.line(["BV", BOUND_SET, &c.name, "", "", ""]);
            }
            _ if lo == hi => w.entry_bound("FX", &c.name, lo),
            VarKind::Binary => {
                w.entry_bound("LO", &c.name, lo);
                w.entry_bound("UP", &c.name, hi);
            }
            VarKind::Continuous => {
                if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
                    w.line(["FR", BOUND_SET, &c.name, "", "", ""]);
                    continue;
                }
                if lo == f64::NEG_INFINITY {
                    w.line(["MI", BOUND_SET, &c.name, "", "", ""]);
                } else if lo != 0.0 {
                    w.entry_bound("LO", &c.name, lo);
                }
                if hi.is_finite() {
                    w.entry_bound("UP", &c.name, hi);
                }
            }
        }
    }
    w.out.push_str("ENDATA\n");
    Ok(w.out)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Section {
    Start,
    Rows,
    Columns,
    Rhs,
    Bounds,
    End,
}

struct Reader {
    line: usize,
}

impl Reader {
    fn error(&self, field: &str, message: impl Into<String>) -> Error {
        Error::Parse {
            source_name: "mps".into(),
            line: self.line,
            column: field.into(),
            message: message.into(),
        }
    }

    fn number(&self, field: &str, token: &str) -> Result<f64> {
        token
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.error(field, format!("`{token}` is not a finite number")))
    }
}

/// Parses MPS text (fixed or free layout) back into a model.
pub fn read_mps(text: &str) -> Result<SubproblemModel> {
    let mut rd = Reader { line: 0 };
    let mut section = Section::Start;
    let mut model = SubproblemModel::default();
    let mut objective_row: Option<String> = None;
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut coeffs: Vec<BTreeMap<usize, f64>> = Vec::new();
    let mut integer = false;

    for (k, raw) in text.lines().enumerate() {
        rd.line = k + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') && !raw.starts_with('\t') {
            let header = tokens[0];
            let next = match header {
                "NAME" => {
                    if section != Section::Start {
                        return Err(rd.error("section", "NAME must come first"));
                    }
                    model.name = tokens.get(1).map(|s| s.to_string()).unwrap_or_default();
                    Section::Start
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::End,
                "RANGES" => return Err(rd.error("section", "RANGES is not supported")),
                other => return Err(rd.error("section", format!("unknown section `{other}`"))),
            };
            if next != Section::Start && next <= section && !(next == Section::End && section == Section::End) {
                return Err(rd.error("section", format!("section `{header}` out of order")));
            }
            if next == Section::Columns && objective_row.is_none() {
                return Err(rd.error("ROWS", "no objective (N) row declared"));
            }
            if section == Section::Columns && next != Section::Columns && integer {
                return Err(rd.error("COLUMNS", "INTORG marker without INTEND"));
            }
            section = next;
            if section == Section::End {
                break;
            }
            continue;
        }
        match section {
            Section::Start | Section::End => {
                return Err(rd.error("section", "data line outside any section"))
            }
            Section::Rows => {
                let [code, name] = tokens[..] else {
                    return Err(rd.error("ROWS", "expected `type name`"));
                };
                if row_index.contains_key(name) || objective_row.as_deref() == Some(name) {
                    return Err(rd.error("ROWS", format!("duplicate row `{name}`")));
                }
                let sense = match code {
                    "N" => {
                        if objective_row.is_some() {
                            return Err(rd.error("ROWS", "more than one N row"));
                        }
                        objective_row = Some(name.to_string());
                        continue;
                    }
                    "L" => Sense::Le,
                    "G" => Sense::Ge,
                    "E" => Sense::Eq,
                    other => return Err(rd.error("ROWS", format!("unknown row type `{other}`"))),
                };
                row_index.insert(name.to_string(), model.rows.len());
                model.add_row(name, RowFamily::Other, [], sense, 0.0);
            }
            Section::Columns => {
                if tokens.len() >= 2 && tokens[1] == "'MARKER'" {
                    match tokens.get(2).copied() {
                        Some("'INTORG'") if !integer => integer = true,
                        Some("'INTEND'") if integer => integer = false,
                        _ => return Err(rd.error("COLUMNS", "unbalanced or malformed MARKER")),
                    }
                    continue;
                }
                if tokens.len() != 3 && tokens.len() != 5 {
                    return Err(rd.error("COLUMNS", "expected `column row value [row value]`"));
                }
                let name = tokens[0];
                let j = match col_index.get(name) {
                    Some(&j) if j + 1 == model.columns.len() => j,
                    Some(_) => {
                        return Err(rd.error("COLUMNS", format!("column `{name}` is not contiguous")))
                    }
                    None => {
                        let kind = if integer { VarKind::Binary } else { VarKind::Continuous };
                        let upper = if integer { 1.0 } else { f64::INFINITY };
                        let j = model.add_column(name, kind, 0.0, upper, 0.0);
                        col_index.insert(name.to_string(), j);
                        coeffs.push(BTreeMap::new());
                        j
                    }
                };
                for pair in tokens[1..].chunks(2) {
                    let value = rd.number("COLUMNS", pair[1])?;
                    if objective_row.as_deref() == Some(pair[0]) {
                        model.objective[j] += value;
                    } else {
                        let &i = row_index
                            .get(pair[0])
                            .ok_or_else(|| rd.error("COLUMNS", format!("unknown row `{}`", pair[0])))?;
                        *coeffs[j].entry(i).or_insert(0.0) += value;
                    }
                }
            }
            Section::Rhs => {
                let pairs = match tokens.len() {
                    3 | 5 => &tokens[1..],
                    2 | 4 => &tokens[..],
                    _ => return Err(rd.error("RHS", "expected `[set] row value [row value]`")),
                };
                for pair in pairs.chunks(2) {
                    let value = rd.number("RHS", pair[1])?;
                    if objective_row.as_deref() == Some(pair[0]) {
                        model.objective_constant = -value;
                    } else {
                        let &i = row_index
                            .get(pair[0])
                            .ok_or_else(|| rd.error("RHS", format!("unknown row `{}`", pair[0])))?;
                        model.rows[i].rhs = value;
                    }
                }
            }
            Section::Bounds => {
                if tokens.len() < 3 || tokens.len() > 4 {
                    return Err(rd.error("BOUNDS", "expected `type set column [value]`"));
                }
                let code = tokens[0];
                let name = tokens[2];
                let &j = col_index
                    .get(name)
                    .ok_or_else(|| rd.error("BOUNDS", format!("unknown column `{name}`")))?;
                let value = match tokens.get(3) {
                    Some(t) => Some(rd.number("BOUNDS", t)?),
                    None => None,
                };
                let needs_value = matches!(code, "UP" | "LO" | "FX");
                if needs_value && value.is_none() {
                    return Err(rd.error("BOUNDS", format!("{code} bound needs a value")));
                }
                let c = &mut model.columns[j];
                match code {
                    "UP" => c.upper = value.unwrap_or_default(),
                    "LO" => c.lower = value.unwrap_or_default(),
                    "FX" => {
                        c.lower = value.unwrap_or_default();
                        c.upper = c.lower;
                    }
                    "FR" => {
                        c.lower = f64::NEG_INFINITY;
                        c.upper = f64::INFINITY;
                    }
                    "MI" => c.lower = f64::NEG_INFINITY,
                    "PL" => c.upper = f64::INFINITY,
                    "BV" => {
                        c.kind = VarKind::Binary;
                        c.lower = 0.0;
                        c.upper = 1.0;
                    }
                    other => return Err(rd.error("BOUNDS", format!("unsupported bound type `{other}`"))),
                }
                if c.kind == VarKind::Binary && (c.lower < 0.0 || c.upper > 1.0) {
                    return Err(rd.error("BOUNDS", format!("integer column `{name}` is not binary")));
                }
            }
        }
    }
    if section != Section::End {
        return Err(Error::Parse {
            source_name: "mps".into(),
            line: text.lines().count(),
            column: "ENDATA".into(),
            message: "missing ENDATA".into(),
        });
    }
    for (j, col) in coeffs.into_iter().enumerate() {
        for (i, a) in col {
            model.rows[i].coeffs.push((j, a));
        }
    }
    for r in &mut model.rows {
        r.coeffs.retain(|&(_, a)| a != 0.0);
    }
    model.validate()?;
    Ok(model)
}
