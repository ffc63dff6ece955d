//! Pretrained word vectors in the plain-text format
//!
//! ```text
//! <count> <dim>
//! <token> <v1> <v2> ... <vdim>
//! ```
//!
//! Row order is taken as frequency order, so capping the vocabulary at `N`
//! means reading only the first `N` distinct tokens.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct VocabEntry {
    pub form: String,
    pub vector: Vec<f32>,
    /// 0-based data row in the source file.
    pub rank: usize,
    norm: f64,
}

impl VocabEntry {
    pub fn new(form: impl Into<String>, vector: Vec<f32>, rank: usize) -> Self {
        let norm = l2_norm(&vector);
        VocabEntry {
            form: form.into(),
            vector,
            rank,
            norm,
        }
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }
}

/// An ordered, deduplicated set of word vectors of one dimension.
#[derive(Debug, Clone, Default)]
pub struct Vocabulary {
    entries: Vec<VocabEntry>,
    dim: usize,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn empty(dim: usize) -> Self {
        Vocabulary {
            entries: Vec::new(),
            dim,
            index: HashMap::new(),
        }
    }

    /// Builds a vocabulary from `(form, vector)` pairs in rank order.
    /// Duplicate forms keep their first occurrence.
    pub fn from_pairs<I, S>(dim: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: Into<String>,
    {
        let mut vocab = Vocabulary::empty(dim);
        for (rank, (form, vector)) in pairs.into_iter().enumerate() {
            if vector.len() != dim {
                return Err(Error::usage(format!(
                    "vector of dimension {} in a vocabulary of dimension {dim}",
                    vector.len()
                )));
            }
            vocab.push(VocabEntry::new(form, vector, rank));
        }
        Ok(vocab)
    }

    fn push(&mut self, entry: VocabEntry) -> bool {
        if self.index.contains_key(&entry.form) {
            return false;
        }
        self.index.insert(entry.form.clone(), self.entries.len());
        self.entries.push(entry);
        true
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn get(&self, idx: usize) -> &VocabEntry {
        &self.entries[idx]
    }

    /// Position of `form` in the vocabulary.
    pub fn position(&self, form: &str) -> Option<usize> {
        self.index.get(form).copied()
    }

    pub fn lookup(&self, form: &str) -> Option<&VocabEntry> {
        self.position(form).map(|i| &self.entries[i])
    }

    pub fn contains(&self, form: &str) -> bool {
        self.index.contains_key(form)
    }

    /// Writes the vocabulary back out in the text vector format.
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.entries.len(), self.dim)?;
        for e in &self.entries {
            out.write_all(e.form.as_bytes())?;
            for x in &e.vector {
                write!(out, " {x}")?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Loads the first `min(n_max, count)` distinct tokens from a vector file.
pub fn load_vectors(path: &Path, n_max: usize) -> Result<Vocabulary> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_vectors(BufReader::new(file), n_max, &path.display().to_string())
}

/// Reader-based core of [`load_vectors`]; `source_name` labels errors.
pub fn read_vectors<R: BufRead>(mut reader: R, n_max: usize, source_name: &str) -> Result<Vocabulary> {
    let fmt_err = |line: usize, msg: String| Error::format(source_name, Some(line), msg);
    let io_err = |e: std::io::Error| Error::io(Path::new(source_name), e);

    let mut line = String::new();
    if reader.read_line(&mut line).map_err(io_err)? == 0 {
        return Err(Error::format(source_name, None, "empty vector file"));
    }
    let header: Vec<&str> = line.split_ascii_whitespace().collect();
    let (count, dim) = match header.as_slice() {
        [c, d] => match (c.parse::<usize>(), d.parse::<usize>()) {
            (Ok(c), Ok(d)) => (c, d),
            _ => return Err(fmt_err(1, format!("malformed header {:?}", line.trim_end()))),
        },
        _ => return Err(fmt_err(1, format!("malformed header {:?}", line.trim_end()))),
    };

    let mut vocab = Vocabulary::empty(dim);
    let wanted = n_max.min(count);
    let mut rows = 0usize;
    while vocab.len() < wanted && rows < count {
        line.clear();
        if reader.read_line(&mut line).map_err(io_err)? == 0 {
            return Err(fmt_err(
                rows + 1,
                format!("header declares {count} rows but the file ends after {rows}"),
            ));
        }
        let lineno = rows + 2;
        let body = line.trim_end_matches(['\n', '\r']);
        // tokens may contain non-ASCII whitespace (e.g. U+00A0), so only
        // ASCII separators delimit fields
        let body = body.trim_end_matches([' ', '\t']);
        let (token, rest) = match body.find([' ', '\t']) {
            Some(i) => (&body[..i], &body[i + 1..]),
            None => (body, ""),
        };
        if token.is_empty() {
            return Err(fmt_err(lineno, "row has an empty token".into()));
        }
        let mut vector = Vec::with_capacity(dim);
        for field in rest.split_ascii_whitespace() {
            let x: f32 = field
                .parse()
                .map_err(|_| fmt_err(lineno, format!("cannot parse {field:?} as a number")))?;
            vector.push(x);
        }
        if vector.len() != dim {
            return Err(fmt_err(
                lineno,
                format!("expected {dim} values after the token, found {}", vector.len()),
            ));
        }
        vocab.push(VocabEntry::new(token, vector, rows));
        rows += 1;
    }
    Ok(vocab)
}

fn l2_norm(v: &[f32]) -> f64 {
    v.iter().map(|&x| f64::from(x) * f64::from(x)).sum::<f64>().sqrt()
}

fn dot(u: &[f32], v: &[f32]) -> f64 {
    u.iter().zip(v).map(|(&a, &b)| f64::from(a) * f64::from(b)).sum()
}

/// Cosine similarity; 0 when either vector has zero norm.
pub fn cosine(u: &[f32], v: &[f32]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::usage(format!(
            "cosine of vectors with dimensions {} and {}",
            u.len(),
            v.len()
        )));
    }
    Ok(cosine_with_norms(u, l2_norm(u), v, l2_norm(v)))
}

/// Cosine with precomputed norms. Dimensions must agree.
pub(crate) fn cosine_with_norms(u: &[f32], nu: f64, v: &[f32], nv: f64) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    (dot(u, v) / (nu * nv)).clamp(-1.0, 1.0)
}

/// Cosine between two vocabulary entries.
pub fn entry_cosine(a: &VocabEntry, b: &VocabEntry) -> f64 {
    cosine_with_norms(&a.vector, a.norm, &b.vector, b.norm)
}

/// Fraction of `tokens` (with multiplicity) missing from `vocab`. 0 for no tokens.
pub fn oov_rate<'a, I>(vocab: &Vocabulary, tokens: I) -> f64
where
    I: IntoIterator<Item = &'a str>,
{
    let (mut total, mut missing) = (0usize, 0usize);
    for t in tokens {
        total += 1;
        if !vocab.contains(t) {
            missing += 1;
        }
    }
    if total == 0 {
        0.0
    } else {
        missing as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Cursor;

    fn read(text: &str, n: usize) -> Result<Vocabulary> {
        read_vectors(Cursor::new(text.as_bytes()), n, "test.vec")
    }

    #[test]
    fn truncates_to_cap() {
        let v = read("3 2\na 1 0\nb 0 1\nc 1 1\n", 2).unwrap();
        assert_eq!(v.dim(), 2);
        let forms: Vec<_> = v.entries().iter().map(|e| e.form.as_str()).collect();
        assert_eq!(forms, ["a", "b"]);
        assert_eq!(v.get(1).rank, 1);
    }

    #[test]
    fn zero_cap_keeps_dim() {
        let v = read("3 2\na 1 0\nb 0 1\nc 1 1\n", 0).unwrap();
        assert!(v.is_empty());
        assert_eq!(v.dim(), 2);
    }

    #[test]
    fn arity_error_reports_line() {
        let err = read("2 2\na 1 0\nx 1.0\n", 10).unwrap_err();
        match err {
            Error::Format { line, .. } => assert_eq!(line, Some(3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_and_empty_errors() {
        assert!(matches!(read("", 5), Err(Error::Format { line: None, .. })));
        assert!(matches!(read("abc\n", 5), Err(Error::Format { line: Some(1), .. })));
        assert!(matches!(read("3 x\n", 5), Err(Error::Format { .. })));
        assert!(matches!(read("3 2\na 1 0\n", 5), Err(Error::Format { .. })));
        assert!(matches!(read("1 1\na zz\n", 5), Err(Error::Format { line: Some(2), .. })));
    }

    #[test]
    fn duplicates_keep_first_and_trailing_space_ok() {
        let v = read("3 1\na 1 \na 2 \nb 3 \n", 10).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v.lookup("a").unwrap().vector, vec![1.0]);
        assert_eq!(v.lookup("b").unwrap().rank, 2);
    }

    #[test]
    fn nbsp_stays_in_token() {
        let v = read("1 1\nx\u{a0}y 0.5\n", 10).unwrap();
        assert!(v.contains("x\u{a0}y"));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_vectors(Path::new("/nonexistent/vectors.vec"), 10).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn cosine_examples() {
        let v = [0.3f32, -1.2, 2.0];
        let neg: Vec<f32> = v.iter().map(|x| -x).collect();
        assert!((cosine(&v, &v).unwrap() - 1.0).abs() < 1e-12);
        assert!((cosine(&v, &neg).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 0.0]).unwrap(), 0.0);
        assert!(cosine(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn oov_rate_examples() {
        let ab = Vocabulary::from_pairs(1, [("a", vec![1.0]), ("b", vec![1.0])]).unwrap();
        assert_eq!(oov_rate(&ab, ["a", "a", "b"]), 0.0);
        let a = Vocabulary::from_pairs(1, [("a", vec![1.0])]).unwrap();
        assert_eq!(oov_rate(&a, ["a", "b", "b", "c"]), 0.75);
        assert_eq!(oov_rate(&Vocabulary::empty(1), ["x"]), 1.0);
    }

    proptest! {
        #[test]
        fn cosine_properties(
            pairs in prop::collection::vec((-10.0f32..10.0, -10.0f32..10.0), 1..20),
            alpha in 0.01f32..100.0,
        ) {
            let u: Vec<f32> = pairs.iter().map(|p| p.0).collect();
            let v: Vec<f32> = pairs.iter().map(|p| p.1).collect();
            let c = cosine(&u, &v).unwrap();
            prop_assert!(c.abs() <= 1.0 + 1e-12);
            prop_assert!((c - cosine(&v, &u).unwrap()).abs() < 1e-12);
            let scaled: Vec<f32> = u.iter().map(|x| x * alpha).collect();
            // f32 scaling rounds each component, hence the looser bound
            prop_assert!((cosine(&scaled, &v).unwrap() - c).abs() < 1e-5);
        }

        #[test]
        fn write_then_read_preserves_entries(
            rows in prop::collection::vec(("[a-z]{1,6}", prop::collection::vec(-1e3f32..1e3, 3)), 0..12)
        ) {
            let v = Vocabulary::from_pairs(3, rows).unwrap();
            let mut buf = Vec::new();
            v.write_to(&mut buf).unwrap();
            let back = read_vectors(Cursor::new(buf), usize::MAX, "mem").unwrap();
            prop_assert_eq!(back.len(), v.len());
            for (a, b) in v.entries().iter().zip(back.entries()) {
                prop_assert_eq!(&a.form, &b.form);
                prop_assert_eq!(&a.vector, &b.vector);
            }
        }
    }
}
