//! Jaro and Jaro-Winkler similarity, plus the raw/simplified average used as
//! the string half of the word-form distance.
//!
//! All functions operate on Unicode scalar values and are total: two empty
//! strings are identical (1.0), an empty string against a nonempty one has
//! similarity 0.0.

use crate::error::{Error, Result};
use crate::textnorm::simplify;

/// Winkler prefix-boost constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JwParams {
    /// Weight of each shared prefix character.
    pub prefix_scale: f64,
    /// Longest prefix that earns a boost.
    pub max_prefix: usize,
    /// The boost is applied only when the Jaro score is at least this.
    pub boost_threshold: f64,
}

impl Default for JwParams {
    fn default() -> Self {
        JwParams {
            prefix_scale: 0.1,
            max_prefix: 4,
            boost_threshold: 0.7,
        }
    }
}

impl JwParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=0.25).contains(&self.prefix_scale) {
            return Err(Error::usage(format!(
                "prefix_scale must lie in [0, 0.25], got {}",
                self.prefix_scale
            )));
        }
        if !self.boost_threshold.is_finite() {
            return Err(Error::usage("boost_threshold must be finite"));
        }
        Ok(())
    }
}

const STACK_FLAGS: usize = 64;

/// Jaro similarity over character slices.
pub fn jaro_chars(a: &[char], b: &[char]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    if a.len() <= STACK_FLAGS && b.len() <= STACK_FLAGS {
        let mut fa = [false; STACK_FLAGS];
        let mut fb = [false; STACK_FLAGS];
        jaro_with_flags(a, b, &mut fa[..a.len()], &mut fb[..b.len()])
    } else {
        let mut fa = vec![false; a.len()];
        let mut fb = vec![false; b.len()];
        jaro_with_flags(a, b, &mut fa, &mut fb)
    }
}

fn jaro_with_flags(a: &[char], b: &[char], fa: &mut [bool], fb: &mut [bool]) -> f64 {
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut matches = 0usize;
    for (i, &ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !fb[j] && b[j] == ca {
                fa[i] = true;
                fb[j] = true;
                matches += 1;
                break;
            }
        }
    }
    if matches == 0 {
        return 0.0;
    }

    let mut half_transpositions = 0usize;
    let mut k = 0usize;
    for (i, &ca) in a.iter().enumerate() {
        if !fa[i] {
            continue;
        }
        while !fb[k] {
            k += 1;
        }
        if ca != b[k] {
            half_transpositions += 1;
        }
        k += 1;
    }

    let m = matches as f64;
    let t = half_transpositions as f64 / 2.0;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

/// Jaro-Winkler similarity over character slices.
pub fn jaro_winkler_chars(a: &[char], b: &[char], p: &JwParams) -> f64 {
    let sim = jaro_chars(a, b);
    if sim < p.boost_threshold {
        return sim;
    }
    let prefix = a
        .iter()
        .zip(b)
        .take(p.max_prefix)
        .take_while(|(x, y)| x == y)
        .count();
    (sim + prefix as f64 * p.prefix_scale * (1.0 - sim)).min(1.0)
}

pub fn jaro(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    jaro_chars(&a, &b)
}

pub fn jaro_winkler(a: &str, b: &str, p: &JwParams) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    jaro_winkler_chars(&a, &b, p)
}

/// Mean of the Jaro-Winkler score on the raw pair and on the simplified pair.
pub fn avg_jw(a: &str, b: &str, p: &JwParams) -> f64 {
    let raw = jaro_winkler(a, b, p);
    let simple = jaro_winkler(simplify(a).as_str(), simplify(b).as_str(), p);
    (raw + simple) / 2.0
}
