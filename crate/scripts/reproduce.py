#!/usr/bin/env python3
"""Full-data reproduction run.

Evaluates every treebank listed in expected_table.tsv and compares the
error columns against the expected values. With --modes, also reruns all
three distance modes and compares the mean/median errors against
expected_modes.tsv.

Needs data that is not shipped with the repository:

  * UD 2.3 treebanks (https://universaldependencies.org/), unpacked under
    --ud-root. The dev file of each treebank is found by name,
    e.g. cs_pdt-ud-dev.conllu.
  * Pretrained FastText .vec files (https://fasttext.cc/), one per
    language, in --vectors-dir. The file name is given by --vectors-pattern
    with {lang} replaced by the treebank's language code (cs, en, ...).

Exit status is 0 when every compared value is within --tolerance
percentage points, 1 otherwise.
"""

import argparse
import csv
import statistics
import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
ERR_COLUMNS = ("baseline_err", "our_err", "oracle_err")


def read_tsv(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f, delimiter="\t"))


def find_dev_file(ud_root, treebank):
    matches = sorted(ud_root.rglob(f"{treebank}-ud-dev.conllu"))
    return matches[0] if matches else None


def run_eval(binary, vectors, treebank, mode, threads):
    cmd = [
        str(binary), "eval",
        "--vectors", str(vectors),
        "--treebank", str(treebank),
        "--mode", mode,
        "--threads", str(threads),
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        raise SystemExit(f"eval failed for {treebank} (exit {proc.returncode})")
    lines = proc.stdout.strip().splitlines()
    header = lines.index(next(l for l in lines if l.startswith("treebank\t")))
    return dict(zip(lines[header].split("\t"), lines[header + 1].split("\t")))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--ud-root", type=Path, required=True)
    ap.add_argument("--vectors-dir", type=Path, required=True)
    ap.add_argument("--vectors-pattern", default="wiki.{lang}.vec")
    ap.add_argument("--binary", type=Path, default=HERE.parent / "target/release/lemmaclust")
    ap.add_argument("--threads", type=int, default=0)
    ap.add_argument("--tolerance", type=float, default=0.5)
    ap.add_argument("--modes", action="store_true", help="also rerun the distance-mode comparison")
    ap.add_argument("--only", nargs="*", help="restrict to these treebanks")
    args = ap.parse_args()

    if not args.binary.exists():
        raise SystemExit(f"{args.binary} not found; run `cargo build --release` first")

    expected = read_tsv(HERE / "expected_table.tsv")
    if args.only:
        expected = [row for row in expected if row["treebank"] in args.only]

    modes = ["combined", "jw_only", "cos_only"] if args.modes else ["combined"]
    results = {m: {} for m in modes}
    failures = 0
    missing = []

    for row in expected:
        name = row["treebank"]
        dev = find_dev_file(args.ud_root, name)
        vectors = args.vectors_dir / args.vectors_pattern.format(lang=name.split("_")[0])
        if dev is None or not vectors.exists():
            missing.append(name)
            print(f"{name:<12} SKIP (missing {'treebank' if dev is None else vectors.name})")
            continue
        for mode in modes:
            results[mode][name] = run_eval(args.binary, vectors, dev, mode, args.threads)
        got = results["combined"][name]
        diffs = {c: float(got[c]) - float(row[c]) for c in ERR_COLUMNS}
        ok = all(abs(d) <= args.tolerance for d in diffs.values())
        failures += not ok
        detail = "  ".join(f"{c} {got[c]} (exp {row[c]}, {diffs[c]:+.2f})" for c in ERR_COLUMNS)
        print(f"{name:<12} {'PASS' if ok else 'FAIL'}  {detail}  err_red {got['err_reduction']} (exp {row['err_reduction']})")

    if args.modes and not missing:
        for row in read_tsv(HERE / "expected_modes.tsv"):
            errs = [float(r["our_err"]) for r in results[row["mode"]].values()]
            mean, median = statistics.mean(errs), statistics.median(errs)
            ok = abs(mean - float(row["mean_err"])) <= args.tolerance and abs(
                median - float(row["median_err"])
            ) <= args.tolerance
            failures += not ok
            print(
                f"mode {row['mode']:<9} {'PASS' if ok else 'FAIL'}  mean {mean:.2f} (exp {row['mean_err']})"
                f"  median {median:.2f} (exp {row['median_err']})"
            )
    elif args.modes:
        print("mode comparison skipped: it needs all 28 treebanks")

    print(f"{len(expected) - len(missing)} evaluated, {len(missing)} skipped, {failures} outside ±{args.tolerance} pp")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
