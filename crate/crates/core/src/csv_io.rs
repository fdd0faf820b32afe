//! Plain comma-separated input. No quoting: a cell can never contain a
//! comma, and quote characters are rejected outright.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::table::{CategoricalValue, RelationalTable};

pub fn load_csv(path: impl AsRef<Path>, has_tid_column: bool) -> Result<RelationalTable> {
    let text = fs::read_to_string(path)?;
    parse_csv(&text, has_tid_column)
}

/// Parses CSV text. The first line names the dimensions. The first column
/// holds transaction ids when `has_tid_column` is set or its header is `TID`
/// (any case); otherwise ids are `T1..Tm`. Cells are trimmed and an empty
/// cell is missing. Blank lines are skipped.
pub fn parse_csv(text: &str, has_tid_column: bool) -> Result<RelationalTable> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut lines = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l));

    let (header_line, header) = match lines.next() {
        Some((n, l)) if !l.trim().is_empty() => (n, split_line(n, l)?),
        _ => return Err(Error::EmptyInput),
    };
    let tid = has_tid_column || header[0].eq_ignore_ascii_case("TID");
    let names: Vec<String> = header[usize::from(tid)..]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if names.is_empty() {
        return Err(parse_error(header_line, "no dimension columns"));
    }
    for (i, name) in names.iter().enumerate() {
        if name.is_empty() {
            return Err(parse_error(header_line, "empty dimension name"));
        }
        if names[..i].contains(name) {
            return Err(parse_error(
                header_line,
                &format!("duplicate dimension name {name:?}"),
            ));
        }
    }

    let mut ids = Vec::new();
    let mut rows = Vec::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells = split_line(n, line)?;
        if cells.len() != header.len() {
            return Err(parse_error(
                n,
                &format!("expected {} cells, found {}", header.len(), cells.len()),
            ));
        }
        let (id, values) = if tid {
            (cells[0].to_string(), &cells[1..])
        } else {
            (format!("T{}", rows.len() + 1), &cells[..])
        };
        let row = values
            .iter()
            .map(|c| {
                if c.is_empty() {
                    Ok(None)
                } else {
                    CategoricalValue::new(c).map(Some)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        ids.push(id);
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    RelationalTable::new(ids, names, rows)
}

fn split_line(line_no: usize, line: &str) -> Result<Vec<&str>> {
    if line.contains('"') {
        return Err(parse_error(line_no, "quoted fields are not supported"));
    }
    Ok(line.split(',').map(str::trim).collect())
}

fn parse_error(line: usize, reason: &str) -> Error {
    Error::Parse {
        line,
        reason: reason.to_string(),
    }
}

/// Serialises a table with a leading `TID` column, the inverse of
/// [`parse_csv`].
pub fn write_csv(table: &RelationalTable) -> Result<String> {
    let check = |s: &str| -> Result<()> {
        if s.contains([',', '"', '\n', '\r']) || s.trim() != s {
            Err(Error::InvalidTable(format!(
                "{s:?} cannot be written as a plain CSV cell"
            )))
        } else {
            Ok(())
        }
    };
    let mut out = String::from("TID");
    for name in table.dimension_names() {
        check(name)?;
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (id, row) in table.transaction_ids().iter().zip(table.rows()) {
        check(id)?;
        out.push_str(id);
        for cell in row {
            out.push(',');
            if let Some(v) = cell {
                check(v.as_str())?;
                out.push_str(v.as_str());
            }
        }
        out.push('\n');
    }
    Ok(out)
}
