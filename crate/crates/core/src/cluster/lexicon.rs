use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{BufRead, Write};

use rayon::prelude::*;

use super::linkage::{agglomerate, CondensedDistances};
use crate::distance::{prepared_distance, DistanceMode, Params, PreparedForm};
use crate::embeddings::Vocabulary;
use crate::error::{Error, Result};
use crate::hypercluster::{partition, stem};

/// Blocks at least this large compute their distance rows in parallel.
const PARALLEL_ROWS_FROM: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClusterId(pub usize);

impl fmt::Display for ClusterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterMeta {
    pub stem: String,
    /// Member forms in rank order.
    pub members: Vec<String>,
}

/// A trained clustering: every vocabulary form mapped to a dense cluster id.
#[derive(Debug, Clone)]
pub struct Lexicon {
    params: Params,
    clusters: Vec<ClusterMeta>,
    index: HashMap<String, ClusterId>,
    by_stem: BTreeMap<String, Vec<ClusterId>>,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.clusters == other.clusters
    }
}

impl Lexicon {
    fn from_clusters(params: Params, clusters: Vec<ClusterMeta>) -> Result<Self> {
        let mut index = HashMap::new();
        let mut by_stem: BTreeMap<String, Vec<ClusterId>> = BTreeMap::new();
        for (i, c) in clusters.iter().enumerate() {
            let id = ClusterId(i);
            by_stem.entry(c.stem.clone()).or_default().push(id);
            for m in &c.members {
                if index.insert(m.clone(), id).is_some() {
                    return Err(Error::usage(format!("form {m:?} appears in more than one cluster")));
                }
            }
        }
        Ok(Lexicon {
            params,
            clusters,
            index,
            by_stem,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn num_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn num_forms(&self) -> usize {
        self.index.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.by_stem.len()
    }

    pub fn clusters(&self) -> &[ClusterMeta] {
        &self.clusters
    }

    pub fn cluster(&self, id: ClusterId) -> &ClusterMeta {
        &self.clusters[id.0]
    }

    /// Build-time cluster of `form`, if it was part of the vocabulary.
    pub fn cluster_of(&self, form: &str) -> Option<ClusterId> {
        self.index.get(form).copied()
    }

    pub fn clusters_with_stem(&self, stem: &str) -> &[ClusterId] {
        self.by_stem.get(stem).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Writes the TSV form: a `#params` header, then `form\tid\tstem` rows
    /// grouped by cluster id.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let p = &self.params;
        writeln!(out, "#params\tt={}\tK={}\tN={}\tmode={}", p.t, p.k, p.n, p.mode)?;
        for (i, c) in self.clusters.iter().enumerate() {
            for m in &c.members {
                writeln!(out, "{m}\t{i}\t{}", c.stem)?;
            }
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(reader: R, source_name: &str) -> Result<Self> {
        let fmt_err = |line: usize, msg: String| Error::format(source_name, Some(line), msg);
        let mut lines = reader.lines();
        let header = match lines.next() {
            Some(l) => l.map_err(|e| Error::io(std::path::Path::new(source_name), e))?,
            None => return Err(Error::format(source_name, None, "empty lexicon file")),
        };
        let params = parse_header(&header).map_err(|msg| fmt_err(1, msg))?;

        let mut clusters: Vec<ClusterMeta> = Vec::new();
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            let line = line.map_err(|e| Error::io(std::path::Path::new(source_name), e))?;
            let fields: Vec<&str> = line.split('\t').collect();
            let [form, id, stem] = fields.as_slice() else {
                return Err(fmt_err(lineno, format!("expected 3 tab-separated fields, found {}", fields.len())));
            };
            let id: usize = id
                .parse()
                .map_err(|_| fmt_err(lineno, format!("bad cluster id {id:?}")))?;
            if id == clusters.len() {
                clusters.push(ClusterMeta {
                    stem: (*stem).to_owned(),
                    members: Vec::new(),
                });
            } else if id + 1 != clusters.len() {
                return Err(fmt_err(lineno, format!("cluster id {id} out of sequence")));
            }
            let c = clusters.last_mut().expect("pushed above");
            if c.stem != *stem {
                return Err(fmt_err(lineno, format!("cluster {id} mixes stems {:?} and {stem:?}", c.stem)));
            }
            c.members.push((*form).to_owned());
        }
        Lexicon::from_clusters(params, clusters).map_err(|e| Error::format(source_name, None, e.to_string()))
    }
}

fn parse_header(line: &str) -> std::result::Result<Params, String> {
    let mut fields = line.split('\t');
    if fields.next() != Some("#params") {
        return Err(format!("expected a #params header, found {line:?}"));
    }
    let mut p = Params::default();
    let mut seen = [false; 4];
    for f in fields {
        let (key, value) = f.split_once('=').ok_or_else(|| format!("malformed field {f:?}"))?;
        let bad = || format!("bad value for {key}: {value:?}");
        match key {
            "t" => (p.t, seen[0]) = (value.parse().map_err(|_| bad())?, true),
            "K" => (p.k, seen[1]) = (value.parse().map_err(|_| bad())?, true),
            "N" => (p.n, seen[2]) = (value.parse().map_err(|_| bad())?, true),
            "mode" => (p.mode, seen[3]) = (value.parse::<DistanceMode>().map_err(|_| bad())?, true),
            other => return Err(format!("unknown header field {other:?}")),
        }
    }
    if seen.iter().any(|s| !s) {
        return Err("header must carry t, K, N and mode".into());
    }
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

fn block_distances(forms: &[PreparedForm], vocab: &Vocabulary, p: &Params) -> Result<CondensedDistances> {
    let n = forms.len();
    let row = |i: usize| -> Vec<f64> {
        (i + 1..n)
            .map(|j| prepared_distance(&forms[i], &forms[j], vocab, p))
            .collect()
    };
    let values: Vec<f64> = if n >= PARALLEL_ROWS_FROM {
        (0..n).into_par_iter().flat_map_iter(row).collect()
    } else {
        (0..n).flat_map(row).collect()
    };
    CondensedDistances::new(n, values)
}

/// Partitions the vocabulary by stem and clusters every block. Blocks are
/// processed on the current rayon pool; ids are assigned in stem order, then
/// by each cluster's smallest member rank.
pub fn build_model(vocab: &Vocabulary, p: &Params) -> Result<Lexicon> {
    p.validate()?;
    let blocks = partition(vocab, p.k);
    let per_block: Vec<Vec<ClusterMeta>> = blocks
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(stem, positions)| -> Result<Vec<ClusterMeta>> {
            let forms: Vec<PreparedForm> = positions
                .iter()
                .map(|&i| PreparedForm::new(&vocab.get(i).form, vocab))
                .collect();
            let dist = block_distances(&forms, vocab, p)?;
            Ok(agglomerate(&dist, p.t)?
                .into_iter()
                .map(|members| ClusterMeta {
                    stem: stem.to_owned(),
                    members: members.into_iter().map(|m| forms[m].form.clone()).collect(),
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Lexicon::from_clusters(*p, per_block.into_iter().flatten().collect())
}

/// Stateful assignment of forms to clusters. Unseen forms get one clustering
/// step against the clusters sharing their stem; clusters they create or
/// join are remembered for the rest of the session.
pub struct AssignSession<'a> {
    lex: &'a Lexicon,
    vocab: &'a Vocabulary,
    seen: HashMap<String, ClusterId>,
    /// Lazily prepared candidate clusters per stem.
    candidates: HashMap<String, Vec<(ClusterId, Vec<PreparedForm>)>>,
    next_id: usize,
}

impl<'a> AssignSession<'a> {
    pub fn new(lex: &'a Lexicon, vocab: &'a Vocabulary) -> Self {
        AssignSession {
            lex,
            vocab,
            seen: HashMap::new(),
            candidates: HashMap::new(),
            next_id: lex.num_clusters(),
        }
    }

    /// Number of clusters minted for unseen forms so far.
    pub fn fresh_clusters(&self) -> usize {
        self.next_id - self.lex.num_clusters()
    }

    pub fn assign(&mut self, form: &str) -> ClusterId {
        if let Some(id) = self.lex.cluster_of(form) {
            return id;
        }
        if let Some(&id) = self.seen.get(form) {
            return id;
        }
        let (lex, vocab) = (self.lex, self.vocab);
        let p = lex.params;
        let key = stem(form, p.k);
        let cands = self.candidates.entry(key.clone()).or_insert_with(|| {
            lex.clusters_with_stem(&key)
                .iter()
                .map(|&id| {
                    let members = lex.cluster(id).members.iter().map(|m| PreparedForm::new(m, vocab)).collect();
                    (id, members)
                })
                .collect()
        });

        let query = PreparedForm::new(form, vocab);
        let mut best: Option<(f64, usize)> = None;
        for (slot, (_, members)) in cands.iter().enumerate() {
            let total: f64 = members.iter().map(|m| prepared_distance(&query, m, vocab, &p)).sum();
            let avg = total / members.len() as f64;
            if best.is_none_or(|(b, _)| avg < b) {
                best = Some((avg, slot));
            }
        }

        let id = match best {
            Some((avg, slot)) if avg < p.t => {
                let (id, members) = &mut cands[slot];
                members.push(query);
                *id
            }
            _ => {
                let id = ClusterId(self.next_id);
                self.next_id += 1;
                cands.push((id, vec![query]));
                id
            }
        };
        self.seen.insert(form.to_owned(), id);
        id
    }
}
