#!/usr/bin/env python3
"""Regenerates the small checked-in test fixtures under crates/core/tests/fixtures."""
import math
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "crates" / "core" / "tests" / "fixtures"


def unit(v):
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def write_vec(path, rows, dim):
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{len(rows)} {dim}\n")
        for form, vec in rows:
            f.write(form + " " + " ".join(f"{x:.4f}" for x in vec) + " \n")


def synthetic200():
    rng = random.Random(20190601)
    dim = 16
    cons, vows = "bcdfghklmnprstvz", "aeiou"
    suffixes = ["", "s", "ed", "ing", "er"]
    roots = set()
    while len(roots) < 40:
        roots.add("".join(rng.choice(cons) + rng.choice(vows) for _ in range(rng.randint(2, 3))) + rng.choice(cons))
    rows = []
    for root in sorted(roots):
        center = unit([rng.gauss(0, 1) for _ in range(dim)])
        for suf in suffixes:
            noise = [rng.gauss(0, 0.25) for _ in range(dim)]
            rows.append((root + suf, [c + e for c, e in zip(center, noise)]))
    rng.shuffle(rows)
    write_vec(OUT / "synthetic200.vec", rows, dim)


def micro():
    # one axis per lemma; small off-axis perturbations keep within-family
    # cosine above 0.8 and cross-family cosine below 0.2
    axes = {"walk": 0, "plant": 1, "go": 2, "plantain": 3}
    forms = [
        ("walk", "walk", [0.00, 0.05, 0.00, 0.00]),
        ("walks", "walk", [0.00, 0.00, 0.05, 0.00]),
        ("walked", "walk", [0.00, 0.00, 0.00, 0.05]),
        ("plant", "plant", [0.05, 0.00, 0.00, 0.00]),
        ("plants", "plant", [0.00, 0.00, 0.05, 0.00]),
        ("planted", "plant", [0.00, 0.00, 0.00, 0.05]),
        ("go", "go", [0.05, 0.00, 0.00, 0.00]),
        ("went", "go", [0.00, 0.05, 0.00, 0.00]),
        ("plantain", "plantain", [0.00, 0.05, 0.00, 0.00]),
    ]
    rows = []
    for form, lemma, pert in forms:
        v = list(pert)
        v[axes[lemma]] += 1.0
        rows.append((form, v))
    write_vec(OUT / "micro.vec", rows, 4)

    sentences = [
        [("I", "I"), ("walk", "walk"), ("and", "and"), ("go", "go")],
        [("she", "she"), ("walks", "walk"), ("and", "and"), ("walked", "walk")],
        [("we", "we"), ("went", "go"), ("walking", "walk")],
        [("plants", "plant"), ("planted", "plant"), ("plant", "plant")],
        [("he", "he"), ("went", "go"), ("plantain", "plantain")],
    ]
    # only the nine family forms are scored; the glue words are omitted so the
    # expected errors depend on the families alone
    with open(OUT / "micro.conllu", "w", encoding="utf-8") as f:
        for si, sent in enumerate(sentences, 1):
            kept = [(w, l) for w, l in sent if l in axes]
            f.write(f"# sent_id = {si}\n")
            f.write("# text = " + " ".join(w for w, _ in sent) + "\n")
            for i, (w, l) in enumerate(kept, 1):
                f.write(f"{i}\t{w}\t{l}\t_\t_\t_\t0\t_\t_\t_\n")
            f.write("\n")


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    synthetic200()
    micro()
