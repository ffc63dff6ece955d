//! Word-form simplification: case folding, ASCII transliteration and
//! removal of non-initial vowels.
//!
//! The simplified variant feeds both the string similarity (which averages
//! raw and simplified Jaro-Winkler) and the stem used for hyperclusters.

use std::fmt;

use unicode_normalization::UnicodeNormalization;

const VOWELS: &[u8] = b"aeiouy";

/// A form after simplification. Always ASCII, lowercase, and free of vowels
/// past the first position. May be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SimplifiedForm(String);

impl SimplifiedForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for SimplifiedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for SimplifiedForm {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Full Unicode case folding.
pub fn fold_case(s: &str) -> String {
    caseless::default_case_fold_str(s)
}

/// Compatibility decomposition followed by dropping everything that is not
/// ASCII. Combining marks go away with the rest, so accented Latin letters
/// reduce to their base letter; scripts without a decomposition vanish.
pub fn transliterate(s: &str) -> String {
    s.nfkd().filter(char::is_ascii).collect()
}

/// `simplify(form) = drop_noninitial_vowels(transliterate(fold_case(form)))`.
pub fn simplify(form: &str) -> SimplifiedForm {
    let mut ascii = transliterate(&fold_case(form));
    // compatibility decompositions can surface uppercase ASCII (e.g. U+210C)
    ascii.make_ascii_lowercase();
    let mut out = String::with_capacity(ascii.len());
    for (i, b) in ascii.bytes().enumerate() {
        if i == 0 || !VOWELS.contains(&b) {
            out.push(b as char);
        }
    }
    SimplifiedForm(out)
}
