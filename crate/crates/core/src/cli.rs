//! Command-line front end: `build`, `assign` and `eval`.
//!
//! Exit codes: 0 success, 2 usage error, 3 input format error, 4 I/O error.
//! Result files and stdout are deterministic; timings and the parameter echo
//! go to stderr.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::cluster::{build_model, AssignSession, Lexicon};
use crate::conllu::read_tokens;
use crate::distance::{DistanceMode, Params};
use crate::embeddings::{load_vectors, Vocabulary};
use crate::error::{Error, Result};
use crate::evaluate::{evaluate_run, EvalReport};
use crate::hypercluster::partition;

#[derive(Debug, Parser)]
#[command(name = "lemmaclust", version, about = "Unsupervised lemmatization by word-form clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster the vocabulary of a vector file and write a lexicon TSV.
    Build {
        #[arg(long)]
        vectors: PathBuf,
        /// Lexicon output path.
        #[arg(long, visible_alias = "lexicon")]
        out: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        threads: ThreadArgs,
    },
    /// Read forms from stdin, one per line, and print `form<TAB>cluster_id`.
    Assign {
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        vectors: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Score a clustering against the gold lemmas of a CoNLL-U file.
    Eval {
        #[arg(long)]
        vectors: PathBuf,
        #[arg(long)]
        treebank: PathBuf,
        /// Prebuilt lexicon; built from the vectors when omitted.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Results TSV path; appended to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        threads: ThreadArgs,
    },
}

#[derive(Debug, Args, Clone, Default)]
pub struct ParamArgs {
    /// Merge threshold [default: 0.4]
    #[arg(long = "t")]
    pub t: Option<f64>,
    /// Stem length [default: 3]
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Vocabulary cap [default: 100000]
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// combined, jw_only or cos_only [default: combined]
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<DistanceMode>,
}

fn parse_mode(s: &str) -> std::result::Result<DistanceMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args, Clone, Default)]
pub struct ThreadArgs {
    /// Worker threads for building; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

impl ParamArgs {
    fn is_empty(&self) -> bool {
        self.t.is_none() && self.k.is_none() && self.n.is_none() && self.mode.is_none()
    }

    fn resolve(&self) -> Result<Params> {
        self.apply(Params::default())
    }

    fn apply(&self, base: Params) -> Result<Params> {
        let p = Params {
            t: self.t.unwrap_or(base.t),
            k: self.k.unwrap_or(base.k),
            n: self.n.unwrap_or(base.n),
            mode: self.mode.unwrap_or(base.mode),
            jw: base.jw,
        };
        p.validate()?;
        Ok(p)
    }

    /// Flags given alongside a lexicon must agree with its header.
    fn check_against(&self, lex: &Params) -> Result<()> {
        if self.is_empty() {
            return Ok(());
        }
        let requested = self.apply(*lex)?;
        if requested != *lex {
            return Err(Error::usage(format!(
                "parameters {requested} conflict with the lexicon's {lex}"
            )));
        }
        Ok(())
    }
}

/// Fully resolved inputs of one command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub vectors: PathBuf,
    pub treebank: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub params: Params,
    pub threads: usize,
}

impl RunConfig {
    pub fn new(vectors: impl Into<PathBuf>, params: Params) -> Self {
        RunConfig {
            vectors: vectors.into(),
            treebank: None,
            lexicon: None,
            out: None,
            params,
            threads: 0,
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::usage(format!("cannot start {} worker threads: {e}", self.threads)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildSummary {
    pub forms: usize,
    pub blocks: usize,
    pub largest_block: usize,
    pub clusters: usize,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

pub fn load_lexicon(path: &Path) -> Result<Lexicon> {
    Lexicon::read_tsv(open(path)?, &path.display().to_string())
}

fn build_lexicon(cfg: &RunConfig, vocab: &Vocabulary, log: &mut dyn Write) -> Result<(Lexicon, BuildSummary)> {
    let blocks = partition(vocab, cfg.params.k);
    let started = Instant::now();
    let lex = cfg.pool()?.install(|| build_model(vocab, &cfg.params))?;
    let summary = BuildSummary {
        forms: vocab.len(),
        blocks: blocks.len(),
        largest_block: blocks.largest_block(),
        clusters: lex.num_clusters(),
    };
    let _ = writeln!(
        log,
        "forms: {}  blocks: {} (largest {})  clusters: {}  time: {:.2}s",
        summary.forms,
        summary.blocks,
        summary.largest_block,
        summary.clusters,
        started.elapsed().as_secs_f64()
    );
    Ok((lex, summary))
}

fn load_vocab(cfg: &RunConfig, log: &mut dyn Write) -> Result<Vocabulary> {
    let started = Instant::now();
    let vocab = load_vectors(&cfg.vectors, cfg.params.n)?;
    let _ = writeln!(
        log,
        "loaded {} vectors of dimension {} in {:.2}s",
        vocab.len(),
        vocab.dim(),
        started.elapsed().as_secs_f64()
    );
    if vocab.is_empty() {
        let _ = writeln!(log, "warning: the vocabulary is empty (N={})", cfg.params.n);
    }
    Ok(vocab)
}

/// Builds the lexicon for `cfg.vectors` and writes it to `cfg.out`.
pub fn cmd_build(cfg: &RunConfig, log: &mut dyn Write) -> Result<BuildSummary> {
    let out = cfg
        .out
        .as_deref()
        .ok_or_else(|| Error::usage("build needs an output path"))?;
    let _ = writeln!(log, "params: {}", cfg.params);
    let vocab = load_vocab(cfg, log)?;
    let (lex, summary) = build_lexicon(cfg, &vocab, log)?;
    let mut w = create(out)?;
    lex.write_tsv(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(out, e))?;
    Ok(summary)
}

/// Streams assignments for the forms in `input`. Unseen forms keep their
/// cluster for the rest of the stream.
pub fn cmd_assign<R: BufRead, W: Write>(lex: &Lexicon, vocab: &Vocabulary, input: R, mut out: W) -> Result<usize> {
    let stdout_err = |e| Error::io(Path::new("<stdout>"), e);
    let mut session = AssignSession::new(lex, vocab);
    let mut n = 0;
    for line in input.lines() {
        let line = line.map_err(|e| Error::io(Path::new("<stdin>"), e))?;
        let form = line.strip_suffix('\r').unwrap_or(&line);
        if form.is_empty() {
            continue;
        }
        let id = session.assign(form);
        writeln!(out, "{form}\t{id}").map_err(stdout_err)?;
        n += 1;
    }
    out.flush().map_err(stdout_err)?;
    Ok(n)
}

/// Treebank name from a UD file name, e.g. `cs_pdt-ud-dev.conllu` → `cs_pdt`.
pub fn treebank_name(path: &Path) -> String {
    let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    match file.find("-ud-") {
        Some(i) => file[..i].to_owned(),
        None => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or(file),
    }
}

/// Evaluates on `cfg.treebank`, using `cfg.lexicon` if given or building one.
pub fn cmd_eval(cfg: &RunConfig, out: &mut dyn Write, log: &mut dyn Write) -> Result<EvalReport> {
    let treebank = cfg
        .treebank
        .as_deref()
        .ok_or_else(|| Error::usage("eval needs a treebank"))?;
    let _ = writeln!(log, "params: {}", cfg.params);
    let vocab = load_vocab(cfg, log)?;
    let lex = match &cfg.lexicon {
        Some(path) => load_lexicon(path)?,
        None => build_lexicon(cfg, &vocab, log)?.0,
    };
    let tokens = read_tokens(treebank)?;
    if tokens.is_empty() {
        return Err(Error::format(treebank.display().to_string(), None, "treebank has no tokens"));
    }
    let report = evaluate_run(&tokens, &lex, &vocab)?;

    let stdout_err = |e| Error::io(Path::new("<stdout>"), e);
    writeln!(out, "{report}").map_err(stdout_err)?;
    let row = format!("{}\n{}\n", EvalReport::TSV_HEADER, report.tsv_row(&treebank_name(treebank)));
    match &cfg.out {
        Some(path) => {
            let mut w = create(path)?;
            w.write_all(row.as_bytes())
                .and_then(|_| w.flush())
                .map_err(|e| Error::io(path, e))?;
        }
        None => {
            writeln!(out).and_then(|_| out.write_all(row.as_bytes())).map_err(stdout_err)?;
        }
    }
    Ok(report)
}

fn dispatch(cli: Cli) -> Result<()> {
    let stderr = &mut io::stderr();
    match cli.command {
        Command::Build {
            vectors,
            out,
            params,
            threads,
        } => {
            let cfg = RunConfig {
                out: Some(out),
                threads: threads.threads,
                ..RunConfig::new(vectors, params.resolve()?)
            };
            cmd_build(&cfg, stderr).map(drop)
        }
        Command::Assign {
            lexicon,
            vectors,
            params,
        } => {
            let lex = load_lexicon(&lexicon)?;
            params.check_against(lex.params())?;
            let cfg = RunConfig {
                lexicon: Some(lexicon),
                ..RunConfig::new(vectors, *lex.params())
            };
            let _ = writeln!(stderr, "params: {}", cfg.params);
            let vocab = load_vocab(&cfg, stderr)?;
            let stdin = io::stdin();
            let stdout = io::stdout();
            cmd_assign(&lex, &vocab, stdin.lock(), BufWriter::new(stdout.lock())).map(drop)
        }
        Command::Eval {
            vectors,
            treebank,
            lexicon,
            out,
            params,
            threads,
        } => {
            let resolved = match &lexicon {
                Some(path) => {
                    let lex = load_lexicon(path)?;
                    params.check_against(lex.params())?;
                    *lex.params()
                }
                None => params.resolve()?,
            };
            let cfg = RunConfig {
                treebank: Some(treebank),
                lexicon,
                out,
                threads: threads.threads,
                ..RunConfig::new(vectors, resolved)
            };
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            cmd_eval(&cfg, &mut lock, stderr).map(drop)
        }
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn treebank_names() {
        assert_eq!(treebank_name(Path::new("/ud/cs_pdt-ud-dev.conllu")), "cs_pdt");
        assert_eq!(treebank_name(Path::new("tiny.conllu")), "tiny");
    }

    #[test]
    fn params_resolution() {
        let args = ParamArgs {
            t: Some(0.3),
            ..ParamArgs::default()
        };
        let p = args.resolve().unwrap();
        assert_eq!((p.t, p.k, p.n, p.mode), (0.3, 3, 100_000, DistanceMode::Combined));
        assert!(ParamArgs { k: Some(0), ..ParamArgs::default() }.resolve().is_err());

        let lex = Params::default();
        assert!(ParamArgs::default().check_against(&lex).is_ok());
        assert!(ParamArgs { k: Some(3), ..ParamArgs::default() }.check_against(&lex).is_ok());
        assert!(args.check_against(&lex).is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["lemmaclust", "build"]), 2);
        assert_eq!(run(["lemmaclust", "build", "--vectors", "x", "--out", "y", "--mode", "bogus"]), 2);
        assert_eq!(run(["lemmaclust", "build", "--vectors", "x", "--out", "y", "--t", "3"]), 2);
    }

    #[test]
    fn missing_vectors_exit_4() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("lex.tsv");
        let code = run([
            "lemmaclust",
            "build",
            "--vectors",
            "/definitely/missing.vec",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 4);
    }
}
