use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::number::{format_q, parse_q};

/// Parses a square distance matrix, one row per line, comma separated.
///
/// Entries are integers, decimals or `a/b`; blank and `#` lines are skipped.
pub fn parse_distance_csv(text: &str) -> Result<FiniteMetricSpace> {
    let mut rows = Vec::new();
    let mut first_line = 0;
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if rows.is_empty() {
            first_line = i + 1;
        }
        let row = t
            .split(',')
            .map(|x| parse_q(x).map_err(|e| Error::ParseAt { line: i + 1, message: e.to_string() }))
            .collect::<Result<Vec<_>>>()?;
        if let Some(prev) = rows.first().map(Vec::len) {
            if row.len() != prev {
                return Err(Error::ParseAt { line: i + 1, message: format!("expected {prev} entries, found {}", row.len()) });
            }
        }
        rows.push(row);
    }
    if rows.first().is_some_and(|r| r.len() != rows.len()) {
        return Err(Error::ParseAt {
            line: first_line,
            message: format!("matrix has {} rows of {} entries", rows.len(), rows[0].len()),
        });
    }
    FiniteMetricSpace::new(rows)
}

pub fn write_distance_csv(metric: &FiniteMetricSpace) -> String {
    let mut s = String::new();
    for i in 0..metric.len() {
        let row: Vec<String> = metric.row(i).iter().map(format_q).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}
