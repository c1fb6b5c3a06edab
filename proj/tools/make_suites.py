#!/usr/bin/env python3
"""Regenerates the small benchmark suites under data/suites/."""
import itertools
import pathlib
import shutil

ROOT = pathlib.Path(__file__).resolve().parent.parent / "data" / "suites"

BW_HYPS = [
    "(on a b) (on b c) (on c d)",
    "(on d c) (on c b) (on b a)",
    "(on a b) (on c d)",
    "(on b c) (on d a)",
    "(on c a) (on a d)",
    "(on b d) (on d a)",
    "(on a c) (on c b)",
    "(on d b) (on b c)",
]

BW_INITS = {
    "table": "(arm-empty) (on-table a) (on-table b) (on-table c) (on-table d) "
             "(clear a) (clear b) (clear c) (clear d)",
    "towers": "(arm-empty) (on-table a) (on-table c) (on b a) (on d c) (clear b) (clear d)",
    "stack": "(arm-empty) (on-table a) (on b a) (on c b) (on d c) (clear d)",
}

GRID_HYPS = ["(at c44)", "(at c14)", "(at c41)", "(at c33)", "(at c24)"]
GRID_STARTS = {"corner": "c11", "centre": "c22"}


def write_instance(suite, name, template, hyps, truth):
    d = suite / name
    d.mkdir(parents=True)
    (d / "template.pddl").write_text(template)
    (d / "hyps.dat").write_text("\n".join(hyps) + "\n")
    (d / "real_hyp.dat").write_text(truth + "\n")


def blocksworld():
    suite = ROOT / "blocksworld"
    suite.mkdir(parents=True)
    shutil.copy(ROOT.parent / "blocksworld" / "domain.pddl", suite / "domain.pddl")
    for init_name, init in BW_INITS.items():
        template = (
            f"(define (problem bw-{init_name})\n  (:domain blocksworld)\n"
            f"  (:objects a b c d)\n  (:init {init})\n"
            "  (:goal (and <HYPOTHESIS>)))\n"
        )
        for i, h in enumerate(BW_HYPS):
            write_instance(suite, f"{init_name}-{i}", template, BW_HYPS, h)


def grid():
    suite = ROOT / "grid"
    suite.mkdir(parents=True)
    shutil.copy(ROOT.parent / "grid" / "domain.pddl", suite / "domain.pddl")
    cells = [f"c{r}{c}" for r in range(1, 5) for c in range(1, 5)]
    adj = []
    for r, c in itertools.product(range(1, 5), repeat=2):
        for dr, dc in ((0, 1), (1, 0), (0, -1), (-1, 0)):
            if 1 <= r + dr <= 4 and 1 <= c + dc <= 4:
                adj.append(f"(adj c{r}{c} c{r + dr}{c + dc})")
    for start_name, start in GRID_STARTS.items():
        template = (
            f"(define (problem grid-{start_name})\n  (:domain grid)\n"
            f"  (:objects {' '.join(cells)} - cell)\n"
            f"  (:init (at {start})\n    {' '.join(adj)})\n"
            "  (:goal (and <HYPOTHESIS>)))\n"
        )
        for i, h in enumerate(GRID_HYPS):
            write_instance(suite, f"{start_name}-{i}", template, GRID_HYPS, h)


if __name__ == "__main__":
    if ROOT.exists():
        shutil.rmtree(ROOT)
    blocksworld()
    grid()
