//! Word-form distance: `1 - J * (C + 1) / 2`, where `J` is the averaged
//! raw/simplified Jaro-Winkler similarity and `C` the embedding cosine.

use std::fmt;
use std::str::FromStr;

use crate::embeddings::{entry_cosine, Vocabulary};
use crate::error::{Error, Result};
use crate::strsim::{jaro_winkler_chars, JwParams};
use crate::textnorm::simplify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DistanceMode {
    /// String similarity times shifted cosine.
    #[default]
    Combined,
    JwOnly,
    CosOnly,
}

impl DistanceMode {
    pub const ALL: [DistanceMode; 3] = [DistanceMode::Combined, DistanceMode::JwOnly, DistanceMode::CosOnly];

    pub fn as_str(self) -> &'static str {
        match self {
            DistanceMode::Combined => "combined",
            DistanceMode::JwOnly => "jw_only",
            DistanceMode::CosOnly => "cos_only",
        }
    }
}

impl fmt::Display for DistanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DistanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "combined" => Ok(DistanceMode::Combined),
            "jw_only" => Ok(DistanceMode::JwOnly),
            "cos_only" => Ok(DistanceMode::CosOnly),
            other => Err(Error::usage(format!(
                "unknown distance mode {other:?} (expected combined, jw_only or cos_only)"
            ))),
        }
    }
}

/// All tunables of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// Merge threshold on average-linkage distance.
    pub t: f64,
    /// Stem length, in characters of the simplified form.
    pub k: usize,
    /// Vocabulary cap.
    pub n: usize,
    pub mode: DistanceMode,
    pub jw: JwParams,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            t: 0.4,
            k: 3,
            n: 100_000,
            mode: DistanceMode::Combined,
            jw: JwParams::default(),
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.t) {
            return Err(Error::usage(format!("t must lie in [0, 1], got {}", self.t)));
        }
        if self.k < 1 {
            return Err(Error::usage("K must be at least 1"));
        }
        self.jw.validate()
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t={} K={} N={} mode={} jw.prefix_scale={} jw.max_prefix={} jw.boost_threshold={}",
            self.t, self.k, self.n, self.mode, self.jw.prefix_scale, self.jw.max_prefix, self.jw.boost_threshold
        )
    }
}

/// A form with its character sequences and vocabulary slot resolved, so that
/// repeated distance evaluations do no allocation.
#[derive(Debug, Clone)]
pub struct PreparedForm {
    pub form: String,
    raw: Vec<char>,
    simple: Vec<char>,
    slot: Option<usize>,
}

impl PreparedForm {
    pub fn new(form: &str, vocab: &Vocabulary) -> Self {
        PreparedForm {
            form: form.to_owned(),
            raw: form.chars().collect(),
            simple: simplify(form).as_str().chars().collect(),
            slot: vocab.position(form),
        }
    }

    pub fn has_vector(&self) -> bool {
        self.slot.is_some()
    }
}

/// Averaged raw/simplified Jaro-Winkler of two prepared forms.
pub fn prepared_jw(a: &PreparedForm, b: &PreparedForm, jw: &JwParams) -> f64 {
    (jaro_winkler_chars(&a.raw, &b.raw, jw) + jaro_winkler_chars(&a.simple, &b.simple, jw)) / 2.0
}

/// Combines a string similarity and an optional cosine under `mode` for two
/// distinct forms. `cos` is `None` when either form has no vector.
pub fn combine(jw_sim: f64, cos: Option<f64>, mode: DistanceMode) -> f64 {
    let factor = cos.map(|c| ((c + 1.0) / 2.0).clamp(0.0, 1.0));
    let d = match mode {
        DistanceMode::Combined => 1.0 - jw_sim * factor.unwrap_or(1.0),
        DistanceMode::JwOnly => 1.0 - jw_sim,
        DistanceMode::CosOnly => match factor {
            Some(f) => 1.0 - f,
            None => 1.0,
        },
    };
    d.clamp(0.0, 1.0)
}

pub fn prepared_distance(a: &PreparedForm, b: &PreparedForm, vocab: &Vocabulary, p: &Params) -> f64 {
    // self-cosine can round just below 1
    if a.form == b.form {
        return 0.0;
    }
    let cos = match (a.slot, b.slot) {
        (Some(i), Some(j)) => Some(entry_cosine(vocab.get(i), vocab.get(j))),
        _ => None,
    };
    let jw_sim = if p.mode == DistanceMode::CosOnly {
        0.0
    } else {
        prepared_jw(a, b, &p.jw)
    };
    combine(jw_sim, cos, p.mode)
}

/// Distance between two word forms; forms without a vector fall back to
/// string similarity alone.
pub fn pair_distance(a: &str, b: &str, vocab: &Vocabulary, p: &Params) -> f64 {
    prepared_distance(&PreparedForm::new(a, vocab), &PreparedForm::new(b, vocab), vocab, p)
}
