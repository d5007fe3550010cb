//! CSV formats for objects and users.
//!
//! ```text
//! # gmco objects v1
//! object_id,Cuisine,Attire,obj:rating
//! o1,Eastern,Business casual,4.5
//! o2,French|Greek,Formal,3
//! ```
//!
//! Cells hold one label or several separated by `|`. In the users file a
//! lone `-` marks indifference. Columns after the id may appear in any order;
//! objective columns carry an `obj:` prefix. Lines starting with `#` are
//! ignored.

use super::{Domain, ObjectRecord, UserPrefs};
use crate::error::{Error, Result};
use crate::hierarchy::NodeId;

pub const OBJECTS_HEADER: &str = "# gmco objects v1";
pub const USERS_HEADER: &str = "# gmco users v1";

const INDIFFERENT: &str = "-";

enum Column {
    Attr(usize),
    Objective(usize),
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes())
}

fn data_err(file: &str, line: u64, msg: impl Into<String>) -> Error {
    Error::Data {
        file: file.to_string(),
        line: line as usize,
        msg: msg.into(),
    }
}

fn csv_err(file: &str, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    data_err(file, line, e.to_string())
}

/// Maps header columns to attributes; returns the objective names in column
/// order.
fn columns(
    header: &csv::StringRecord,
    domain: &Domain,
    id_col: &str,
    file: &str,
    allow_objective: bool,
) -> Result<(Vec<Column>, Vec<String>)> {
    let line = header.position().map(|p| p.line()).unwrap_or(1);
    match header.get(0) {
        Some(h) if h == id_col => {}
        other => {
            return Err(data_err(
                file,
                line,
                format!("first column must be `{id_col}`, found `{}`", other.unwrap_or("")),
            ))
        }
    }
    let mut cols = Vec::new();
    let mut seen = vec![false; domain.dims()];
    let mut objective = Vec::new();
    for name in header.iter().skip(1) {
        if let Some(obj) = name.strip_prefix("obj:") {
            if !allow_objective {
                return Err(data_err(file, line, format!("unexpected objective column `{name}`")));
            }
            cols.push(Column::Objective(objective.len()));
            objective.push(obj.to_string());
            continue;
        }
        let k = domain
            .attribute_index(name)
            .map_err(|e| data_err(file, line, e.to_string()))?;
        if std::mem::replace(&mut seen[k], true) {
            return Err(data_err(file, line, format!("column `{name}` repeated")));
        }
        cols.push(Column::Attr(k));
    }
    if let Some(k) = seen.iter().position(|s| !s) {
        return Err(data_err(
            file,
            line,
            format!("missing column `{}`", domain.attribute(k).name()),
        ));
    }
    Ok((cols, objective))
}

fn parse_cell(domain: &Domain, k: usize, cell: &str) -> std::result::Result<Vec<NodeId>, String> {
    let h = &domain.attribute(k).hierarchy;
    cell.split('|')
        .map(|l| h.require(l.trim()).map_err(|e| e.to_string()))
        .collect()
}

/// Parses an objects file. Objective columns found in the header replace the
/// domain's objective attribute list.
pub fn parse_objects(text: &str, domain: &mut Domain, file: &str) -> Result<Vec<ObjectRecord>> {
    let mut rdr = reader(text);
    let header = rdr.headers().map_err(|e| csv_err(file, e))?.clone();
    let (cols, objective) = columns(&header, domain, "object_id", file, true)?;
    domain.set_objective(objective);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(file, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let id = rec[0].to_string();
        let mut o = ObjectRecord {
            id,
            values: vec![Vec::new(); domain.dims()],
            objective: vec![0.0; domain.objective().len()],
        };
        for (col, cell) in cols.iter().zip(rec.iter().skip(1)) {
            match *col {
                Column::Attr(k) => {
                    o.values[k] = parse_cell(domain, k, cell).map_err(|m| data_err(file, line, m))?
                }
                Column::Objective(a) => {
                    o.objective[a] = cell
                        .parse()
                        .map_err(|_| data_err(file, line, format!("bad number `{cell}`")))?
                }
            }
        }
        domain
            .check_object(&o)
            .map_err(|e| data_err(file, line, e.to_string()))?;
        out.push(o);
    }
    Ok(out)
}

pub fn parse_users(text: &str, domain: &Domain, file: &str) -> Result<Vec<UserPrefs>> {
    let mut rdr = reader(text);
    let header = rdr.headers().map_err(|e| csv_err(file, e))?.clone();
    let (cols, _) = columns(&header, domain, "user_id", file, false)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(file, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let mut u = UserPrefs {
            id: rec[0].to_string(),
            prefs: vec![None; domain.dims()],
        };
        for (col, cell) in cols.iter().zip(rec.iter().skip(1)) {
            if let Column::Attr(k) = *col {
                if cell != INDIFFERENT {
                    u.prefs[k] =
                        Some(parse_cell(domain, k, cell).map_err(|m| data_err(file, line, m))?);
                }
            }
        }
        domain
            .check_user(&u)
            .map_err(|e| data_err(file, line, e.to_string()))?;
        out.push(u);
    }
    Ok(out)
}

fn cell(domain: &Domain, k: usize, values: &[NodeId]) -> String {
    let h = &domain.attribute(k).hierarchy;
    values
        .iter()
        .map(|&v| h.label(v))
        .collect::<Vec<_>>()
        .join("|")
}

fn finish(header: &str, rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");
    format!("{header}\n{body}")
}

pub fn write_objects(domain: &Domain, objects: &[ObjectRecord]) -> String {
    let mut head = vec!["object_id".to_string()];
    head.extend(domain.attributes().iter().map(|a| a.name().to_string()));
    head.extend(domain.objective().iter().map(|n| format!("obj:{n}")));
    let mut rows = vec![head];
    for o in objects {
        let mut r = vec![o.id.clone()];
        r.extend((0..domain.dims()).map(|k| cell(domain, k, &o.values[k])));
        r.extend(o.objective.iter().map(|x| x.to_string()));
        rows.push(r);
    }
    finish(OBJECTS_HEADER, rows)
}

pub fn write_users(domain: &Domain, users: &[UserPrefs]) -> String {
    let mut head = vec!["user_id".to_string()];
    head.extend(domain.attributes().iter().map(|a| a.name().to_string()));
    let mut rows = vec![head];
    for u in users {
        let mut r = vec![u.id.clone()];
        r.extend(u.prefs.iter().enumerate().map(|(k, p)| match p {
            None => INDIFFERENT.to_string(),
            Some(v) => cell(domain, k, v),
        }));
        rows.push(r);
    }
    finish(USERS_HEADER, rows)
}
