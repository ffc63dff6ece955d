use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lemmaclust"))
}

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build_micro(dir: &Path) -> PathBuf {
    let lex = dir.join("micro.tsv");
    let vectors = fixture("micro.vec");
    let out = run(&["build", "--vectors", s(&vectors), "--out", s(&lex)], "");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    lex
}

#[test]
fn build_writes_lexicon_and_echoes_params() {
    let dir = tempfile::tempdir().unwrap();
    let vectors = fixture("micro.vec");
    let lex = dir.path().join("lex.tsv");
    let out = run(&["build", "--vectors", s(&vectors), "--lexicon", s(&lex), "--t", "0.4"], "");
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("params: t=0.4 K=3 N=100000 mode=combined"), "{stderr}");
    assert!(stderr.contains("blocks: 4"), "{stderr}");
    assert!(stderr.contains("clusters: 5"), "{stderr}");

    let text = std::fs::read_to_string(&lex).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("#params\tt=0.4\tK=3\tN=100000\tmode=combined"));
    // stems in order: g, pln, wlk, wnt
    let rows: Vec<&str> = lines.collect();
    assert_eq!(
        rows,
        [
            "go\t0\tg",
            "plant\t1\tpln",
            "plants\t1\tpln",
            "planted\t1\tpln",
            "plantain\t2\tpln",
            "walk\t3\twlk",
            "walks\t3\twlk",
            "walked\t3\twlk",
            "went\t4\twnt",
        ]
    );
}

#[test]
fn build_with_zero_cap_warns() {
    let dir = tempfile::tempdir().unwrap();
    let lex = dir.path().join("empty.tsv");
    let vectors = fixture("micro.vec");
    let out = run(&["build", "--vectors", s(&vectors), "--out", s(&lex), "--N", "0"], "");
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert_eq!(
        std::fs::read_to_string(&lex).unwrap(),
        "#params\tt=0.4\tK=3\tN=0\tmode=combined\n"
    );
}

#[test]
fn assign_streams_ids() {
    let dir = tempfile::tempdir().unwrap();
    let lex = build_micro(dir.path());
    let vectors = fixture("micro.vec");
    let args = ["assign", "--lexicon", s(&lex), "--vectors", s(&vectors)];

    let out = run(&args, "walked\nwalking\nzebra\nzebra\ngo\n");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "walked\t3\nwalking\t3\nzebra\t5\nzebra\t5\ngo\t0\n"
    );

    let empty = run(&args, "");
    assert!(empty.status.success());
    assert!(empty.stdout.is_empty());
}

#[test]
fn assign_rejects_conflicting_params() {
    let dir = tempfile::tempdir().unwrap();
    let lex = build_micro(dir.path());
    let vectors = fixture("micro.vec");
    let out = run(&["assign", "--lexicon", s(&lex), "--vectors", s(&vectors), "--t", "0.2"], "go\n");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_reports_and_is_deterministic() {
    let vectors = fixture("micro.vec");
    let treebank = fixture("micro.conllu");
    let mut outputs = Vec::new();
    for threads in ["1", "4", "8"] {
        let out = run(
            &["eval", "--vectors", s(&vectors), "--treebank", s(&treebank), "--threads", threads],
            "",
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(out.stdout);
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let text = String::from_utf8(outputs.pop().unwrap()).unwrap();
    assert!(text.contains("oov rate:"), "{text}");
    assert!(text.contains("treebank\tbaseline_mode\tbaseline_err\tour_err\toracle_err\terr_reduction"));
    let row = text.lines().last().unwrap();
    let cols: Vec<&str> = row.split('\t').collect();
    assert_eq!(cols[0], "micro");
    // the clustering equals the oracle labeling on this corpus
    assert_eq!(cols[3], cols[4]);
    assert_eq!(cols[5], "100.0");
}

#[test]
fn eval_modes_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let vectors = fixture("micro.vec");
    let treebank = fixture("micro.conllu");
    let mut ours = Vec::new();
    for mode in ["combined", "jw_only", "cos_only"] {
        let path = dir.path().join(format!("{mode}.tsv"));
        let out = run(
            &["eval", "--vectors", s(&vectors), "--treebank", s(&treebank), "--mode", mode, "--out", s(&path)],
            "",
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        let row: Vec<String> = text.lines().nth(1).unwrap().split('\t').map(String::from).collect();
        ours.push(row[3].parse::<f64>().unwrap());
    }
    // string similarity alone cannot keep "plantain" away from "plant"
    assert!(ours[0] <= ours[1], "{ours:?}");
}

#[test]
fn eval_with_prebuilt_lexicon_matches_on_the_fly() {
    let dir = tempfile::tempdir().unwrap();
    let lex = build_micro(dir.path());
    let vectors = fixture("micro.vec");
    let treebank = fixture("micro.conllu");
    let a = run(&["eval", "--vectors", s(&vectors), "--treebank", s(&treebank)], "");
    let b = run(
        &["eval", "--vectors", s(&vectors), "--treebank", s(&treebank), "--lexicon", s(&lex)],
        "",
    );
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.vec");
    std::fs::write(&bad, "2 3\nx 1 2\n").unwrap();
    let lex = dir.path().join("lex.tsv");
    let out = run(&["build", "--vectors", s(&bad), "--out", s(&lex)], "");
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = run(&["build", "--vectors", "/missing/file.vec", "--out", s(&lex)], "");
    assert_eq!(out.status.code(), Some(4));

    let out = run(&["build", "--vectors", s(&bad)], "");
    assert_eq!(out.status.code(), Some(2));

    let vectors = fixture("micro.vec");
    let out = run(
        &["eval", "--vectors", s(&vectors), "--treebank", s(&fixture("micro.vec"))],
        "",
    );
    assert_eq!(out.status.code(), Some(3));
}
