//! Study CSV ingestion.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::effects::TwoByTwoTable;

/// The three small trials used throughout the examples and tests.
pub const BUNDLED_STUDIES: &str = include_str!("../../data/studies.csv");

const HEADER: [&str; 6] = ["study", "outcome", "n_t", "e_t", "n_c", "e_c"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StudyRecord {
    pub study: String,
    pub outcome: String,
    pub n_t: u64,
    pub e_t: u64,
    pub n_c: u64,
    pub e_c: u64,
}

impl StudyRecord {
    pub fn label(&self) -> String {
        format!("{} {}", self.study, self.outcome)
    }

    /// Validated table; degenerate counts map to exit code 3.
    pub fn table(&self) -> Result<TwoByTwoTable, CliError> {
        TwoByTwoTable::new(self.n_t, self.e_t, self.n_c, self.e_c)
            .map_err(|e| CliError::from(e).context(&self.label()))
    }
}

pub fn parse_records<R: Read>(reader: R) -> Result<Vec<StudyRecord>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| CliError::usage(format!("malformed CSV: {e}")))?;
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(CliError::usage(format!(
            "malformed CSV: header must be `{}`, found `{}`",
            HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    rdr.deserialize()
        .enumerate()
        .map(|(i, r)| {
            r.map_err(|e| CliError::usage(format!("malformed CSV at record {}: {e}", i + 1)))
        })
        .collect()
}

/// Records from `path`, or the bundled data when `path` is `None`.
pub fn load_records(path: Option<&Path>) -> Result<Vec<StudyRecord>, CliError> {
    match path {
        None => parse_records(BUNDLED_STUDIES.as_bytes()),
        Some(p) => {
            let file = std::fs::File::open(p)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", p.display())))?;
            parse_records(file)
        }
    }
}

pub fn find<'a>(
    records: &'a [StudyRecord],
    study: &str,
    outcome: &str,
) -> Result<&'a StudyRecord, CliError> {
    records
        .iter()
        .find(|r| r.study.eq_ignore_ascii_case(study) && r.outcome.eq_ignore_ascii_case(outcome))
        .ok_or_else(|| CliError::usage(format!("no row for study `{study}`, outcome `{outcome}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_data_parses() {
        let r = load_records(None).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(find(&r, "stamina", "acs").unwrap().n_t, 111);
    }

    #[test]
    fn bad_header_is_usage_error() {
        let e = parse_records("a,b\n1,2\n".as_bytes()).unwrap_err();
        assert_eq!(e.code, 2);
    }

    #[test]
    fn bad_count_is_usage_error() {
        let e =
            parse_records("study,outcome,n_t,e_t,n_c,e_c\nX,Y,10,x,10,2\n".as_bytes()).unwrap_err();
        assert_eq!(e.code, 2);
    }

    #[test]
    fn zero_cell_is_degenerate() {
        let r = parse_records("study,outcome,n_t,e_t,n_c,e_c\nX,Y,10,0,10,2\n".as_bytes()).unwrap();
        assert_eq!(r[0].table().unwrap_err().code, 3);
    }
}
