//! Token-level clustering evaluation against gold lemmas: v-measure, the two
//! form baselines, the stem-limited oracle and error reduction.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use crate::cluster::{AssignSession, Lexicon};
use crate::conllu::TokenRecord;
use crate::embeddings::{oov_rate, Vocabulary};
use crate::error::{Error, Result};
use crate::hypercluster::stem;

/// One opaque label per token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<u32>,
}

impl Labeling {
    /// Interns arbitrary keys into dense label ids in first-seen order.
    pub fn from_keys<I, K>(keys: I) -> Self
    where
        I: IntoIterator<Item = K>,
        K: Hash + Eq,
    {
        let mut ids: HashMap<K, u32> = HashMap::new();
        let labels = keys
            .into_iter()
            .map(|k| {
                let next = ids.len() as u32;
                *ids.entry(k).or_insert(next)
            })
            .collect();
        Labeling { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VMeasure {
    pub homogeneity: f64,
    pub completeness: f64,
    pub v_measure: f64,
}

impl VMeasure {
    pub fn error(&self) -> f64 {
        1.0 - self.v_measure
    }
}

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    -counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            p * p.ln()
        })
        .sum::<f64>()
}

/// Homogeneity, completeness and their harmonic mean (natural-log entropies).
pub fn v_measure(gold: &Labeling, pred: &Labeling) -> Result<VMeasure> {
    if gold.len() != pred.len() {
        return Err(Error::usage(format!(
            "labelings differ in length: {} vs {}",
            gold.len(),
            pred.len()
        )));
    }
    if gold.is_empty() {
        return Err(Error::usage("cannot score empty labelings"));
    }
    let n = gold.len() as f64;
    let mut joint: HashMap<(u32, u32), usize> = HashMap::new();
    let mut gold_counts: HashMap<u32, usize> = HashMap::new();
    let mut pred_counts: HashMap<u32, usize> = HashMap::new();
    for (&g, &p) in gold.labels.iter().zip(&pred.labels) {
        *joint.entry((g, p)).or_default() += 1;
        *gold_counts.entry(g).or_default() += 1;
        *pred_counts.entry(p).or_default() += 1;
    }
    let h_gold = entropy(gold_counts.values().copied(), n);
    let h_pred = entropy(pred_counts.values().copied(), n);
    // H(gold|pred) = H(gold, pred) - H(pred), and symmetrically
    let h_joint = entropy(joint.values().copied(), n);
    let homogeneity = if h_gold == 0.0 {
        1.0
    } else {
        (1.0 - (h_joint - h_pred) / h_gold).clamp(0.0, 1.0)
    };
    let completeness = if h_pred == 0.0 {
        1.0
    } else {
        (1.0 - (h_joint - h_gold) / h_pred).clamp(0.0, 1.0)
    };
    let v_measure = if homogeneity + completeness > 0.0 {
        2.0 * homogeneity * completeness / (homogeneity + completeness)
    } else {
        0.0
    };
    Ok(VMeasure {
        homogeneity,
        completeness,
        v_measure,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMode {
    /// The form is its own lemma.
    Form,
    /// The first five characters of the form.
    Form5,
}

impl BaselineMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BaselineMode::Form => "form",
            BaselineMode::Form5 => "form5",
        }
    }
}

impl fmt::Display for BaselineMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn baseline_label(form: &str, mode: BaselineMode) -> &str {
    match mode {
        BaselineMode::Form => form,
        BaselineMode::Form5 => match form.char_indices().nth(5) {
            Some((i, _)) => &form[..i],
            None => form,
        },
    }
}

pub fn baseline_labels(tokens: &[TokenRecord], mode: BaselineMode) -> Labeling {
    Labeling::from_keys(tokens.iter().map(|t| baseline_label(&t.form, mode)))
}

/// Oracle label namespace: a lemma label can never collide with a fallback
/// form label carrying the same string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleLabel<'a> {
    Lemma(&'a str),
    Form(&'a str),
}

pub fn oracle_label(token: &TokenRecord, k: usize) -> OracleLabel<'_> {
    if token.form == token.lemma || stem(&token.lemma, k) == stem(&token.form, k) {
        OracleLabel::Lemma(&token.lemma)
    } else {
        OracleLabel::Form(&token.form)
    }
}

/// The gold lemma wherever it shares the form's hypercluster, else the form.
pub fn oracle_labels(tokens: &[TokenRecord], k: usize) -> Labeling {
    Labeling::from_keys(tokens.iter().map(|t| oracle_label(t, k)))
}

pub fn gold_labels(tokens: &[TokenRecord]) -> Labeling {
    Labeling::from_keys(tokens.iter().map(|t| t.lemma.as_str()))
}

/// Position of `ours` on the scale from `base` (0) to `upper` (100).
/// `None` when the scale is degenerate.
pub fn error_reduction(base: f64, ours: f64, upper: f64) -> Option<f64> {
    if base == upper {
        None
    } else {
        Some((base - ours) / (base - upper) * 100.0)
    }
}

/// Outcome of one evaluation run. Errors are fractions `1 - v` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub tokens: usize,
    pub oov_rate: f64,
    pub ours: VMeasure,
    pub baseline_form_err: f64,
    pub baseline_form5_err: f64,
    pub baseline_mode: BaselineMode,
    pub baseline_err: f64,
    pub our_err: f64,
    pub oracle_err: f64,
    /// In percent; `None` when baseline and oracle coincide.
    pub error_reduction: Option<f64>,
}

impl EvalReport {
    pub const TSV_HEADER: &'static str = "treebank\tbaseline_mode\tbaseline_err\tour_err\toracle_err\terr_reduction";

    /// One results row; errors in percent with two decimals.
    pub fn tsv_row(&self, treebank: &str) -> String {
        let red = self
            .error_reduction
            .map(|r| format!("{r:.1}"))
            .unwrap_or_else(|| "n/a".into());
        format!(
            "{treebank}\t{}\t{:.2}\t{:.2}\t{:.2}\t{red}",
            self.baseline_mode,
            self.baseline_err * 100.0,
            self.our_err * 100.0,
            self.oracle_err * 100.0
        )
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tokens:            {}", self.tokens)?;
        writeln!(f, "oov rate:          {:.2}%", self.oov_rate * 100.0)?;
        writeln!(
            f,
            "ours:              h={:.4} c={:.4} v={:.4}",
            self.ours.homogeneity, self.ours.completeness, self.ours.v_measure
        )?;
        writeln!(f, "baseline form:     {:.2}%", self.baseline_form_err * 100.0)?;
        writeln!(f, "baseline form5:    {:.2}%", self.baseline_form5_err * 100.0)?;
        writeln!(f, "{:<19}{:.2}%", format!("baseline ({}):", self.baseline_mode), self.baseline_err * 100.0)?;
        writeln!(f, "our error:         {:.2}%", self.our_err * 100.0)?;
        writeln!(f, "oracle error:      {:.2}%", self.oracle_err * 100.0)?;
        match self.error_reduction {
            Some(r) => write!(f, "error reduction:   {r:.1}%"),
            None => write!(f, "error reduction:   n/a"),
        }
    }
}

/// Assigns every token (repeats included) through one [`AssignSession`] and
/// scores the result alongside both baselines and the oracle.
pub fn evaluate_run(tokens: &[TokenRecord], lex: &Lexicon, vocab: &Vocabulary) -> Result<EvalReport> {
    let k = lex.params().k;
    let gold = gold_labels(tokens);
    let mut session = AssignSession::new(lex, vocab);
    let pred = Labeling::from_keys(tokens.iter().map(|t| session.assign(&t.form)));

    let ours = v_measure(&gold, &pred)?;
    let baseline_form_err = v_measure(&gold, &baseline_labels(tokens, BaselineMode::Form))?.error();
    let baseline_form5_err = v_measure(&gold, &baseline_labels(tokens, BaselineMode::Form5))?.error();
    let (baseline_mode, baseline_err) = if baseline_form5_err < baseline_form_err {
        (BaselineMode::Form5, baseline_form5_err)
    } else {
        (BaselineMode::Form, baseline_form_err)
    };
    let oracle_err = v_measure(&gold, &oracle_labels(tokens, k))?.error();
    let our_err = ours.error();

    Ok(EvalReport {
        tokens: tokens.len(),
        oov_rate: oov_rate(vocab, tokens.iter().map(|t| t.form.as_str())),
        ours,
        baseline_form_err,
        baseline_form5_err,
        baseline_mode,
        baseline_err,
        our_err,
        oracle_err,
        error_reduction: error_reduction(baseline_err, our_err, oracle_err),
    })
}
