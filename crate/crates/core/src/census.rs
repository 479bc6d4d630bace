//! The census fixture: one record per published table row, matched against
//! the computed enumeration modulo τ.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::cyclo::{canonical, CensusEntry, CycloError, ParamPair};
use crate::exactlin::{parse_rat, Rat};

/// The shipped fixture.
pub const DEFAULT_FIXTURE: &str = include_str!("../data/census.tsv");

/// Row counts of Tables 1–7.
pub const TABLE_SIZES: [usize; 7] = [7, 11, 2, 23, 4, 20, 10];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: invalid parameters: {source}")]
    Params { line: usize, source: CycloError },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureRow {
    pub table_id: u8,
    pub row_no: u32,
    /// Parameters as printed (sorted on load).
    pub params: ParamPair,
    pub attribution: String,
}

fn parse_list(s: &str, line: usize) -> Result<Vec<Rat>, FixtureError> {
    s.split_whitespace()
        .map(|t| {
            parse_rat(t).map_err(|e| FixtureError::Parse {
                line,
                msg: e.to_string(),
            })
        })
        .collect()
}

/// Parses the tab-separated fixture. Blank lines and `#` comments are
/// skipped.
pub fn load_fixture(text: &str) -> Result<Vec<FixtureRow>, FixtureError> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 5 {
            return Err(FixtureError::Parse {
                line,
                msg: format!("expected 5 tab-separated fields, found {}", fields.len()),
            });
        }
        let table_id: u8 = fields[0]
            .trim()
            .parse()
            .ok()
            .filter(|t| (1..=7).contains(t))
            .ok_or_else(|| FixtureError::Parse {
                line,
                msg: format!("bad table id {:?}", fields[0]),
            })?;
        let row_no: u32 = fields[1].trim().parse().map_err(|_| FixtureError::Parse {
            line,
            msg: format!("bad row number {:?}", fields[1]),
        })?;
        let alpha = parse_list(fields[2], line)?;
        let beta = parse_list(fields[3], line)?;
        let params =
            ParamPair::new(alpha, beta).map_err(|source| FixtureError::Params { line, source })?;
        rows.push(FixtureRow {
            table_id,
            row_no,
            params,
            attribution: fields[4].trim().to_string(),
        });
    }
    Ok(rows)
}

/// Differences between the enumeration and the fixture.
#[derive(Clone, Debug, Default, PartialEq, Eq, Error)]
pub struct Mismatch {
    /// Computed orbits with no fixture row.
    pub missing: Vec<ParamPair>,
    /// Fixture rows whose orbit was not computed.
    pub unexpected: Vec<(u8, u32)>,
    /// Fixture rows hitting an orbit already claimed by an earlier row.
    pub duplicates: Vec<(u8, u32)>,
    /// Tables whose row count is off, as (table, expected, found).
    pub table_sizes: Vec<(u8, usize, usize)>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fixture does not match the enumeration")?;
        for p in &self.missing {
            writeln!(f, "- computed, not in fixture: {p}")?;
        }
        for (t, r) in &self.unexpected {
            writeln!(f, "+ fixture table {t} row {r}: not a census orbit")?;
        }
        for (t, r) in &self.duplicates {
            writeln!(f, "+ fixture table {t} row {r}: orbit already listed")?;
        }
        for (t, e, n) in &self.table_sizes {
            writeln!(f, "! table {t}: expected {e} rows, found {n}")?;
        }
        Ok(())
    }
}

/// Matches each census entry to its fixture row modulo τ. On success the
/// result gives, for entry `i`, the index of its row in `rows`.
pub fn reconcile(entries: &[CensusEntry], rows: &[FixtureRow]) -> Result<Vec<usize>, Mismatch> {
    let index: BTreeMap<ParamPair, usize> = entries
        .iter()
        .enumerate()
        .map(|(i, e)| (canonical(&e.params), i))
        .collect();
    let mut assigned: Vec<Option<usize>> = vec![None; entries.len()];
    let mut m = Mismatch::default();
    for (r, row) in rows.iter().enumerate() {
        match index.get(&canonical(&row.params)) {
            None => m.unexpected.push((row.table_id, row.row_no)),
            Some(&i) if assigned[i].is_some() => m.duplicates.push((row.table_id, row.row_no)),
            Some(&i) => assigned[i] = Some(r),
        }
    }
    for (i, a) in assigned.iter().enumerate() {
        if a.is_none() {
            m.missing.push(entries[i].params.clone());
        }
    }
    for (t, &expected) in TABLE_SIZES.iter().enumerate() {
        let t = t as u8 + 1;
        let found = rows.iter().filter(|r| r.table_id == t).count();
        if found != expected {
            m.table_sizes.push((t, expected, found));
        }
    }
    if m == Mismatch::default() {
        Ok(assigned.into_iter().map(|a| a.expect("checked")).collect())
    } else {
        Err(m)
    }
}
