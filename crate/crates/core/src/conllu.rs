//! Minimal CoNLL-U reader: `(FORM, LEMMA)` for every syntactic word.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenRecord {
    pub form: String,
    pub lemma: String,
}

pub fn read_tokens(path: &Path) -> Result<Vec<TokenRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_tokens(BufReader::new(file), &path.display().to_string())
}

/// Parses CoNLL-U from a reader. Comments, blank lines, multiword ranges
/// (`3-4`) and empty nodes (`5.1`) are skipped.
pub fn parse_tokens<R: BufRead>(reader: R, source_name: &str) -> Result<Vec<TokenRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(Path::new(source_name), e))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(Error::format(
                source_name,
                Some(i + 1),
                format!("expected 10 tab-separated columns, found {}", cols.len()),
            ));
        }
        if !cols[0].bytes().all(|b| b.is_ascii_digit()) {
            continue;
        }
        out.push(TokenRecord {
            form: cols[1].to_owned(),
            lemma: cols[2].to_owned(),
        });
    }
    Ok(out)
}
