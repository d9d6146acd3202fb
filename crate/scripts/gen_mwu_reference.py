#!/usr/bin/env python3
"""Regenerates tests/fixtures/mwu_reference.json.

Draws 100 random sample pairs (mixed sizes, heavy ties, and continuous
values) and records scipy's two-sided asymptotic Mann-Whitney U with
continuity correction for each. The JSON is committed so the test suite
has a fixed external reference without needing Python at test time.
"""

import json
import pathlib
import random

from scipy.stats import mannwhitneyu

OUT = pathlib.Path(__file__).resolve().parent.parent / (
    "crates/harness/tests/fixtures/mwu_reference.json"
)


def sample(rng: random.Random, n: int) -> list[float]:
    kind = rng.randrange(3)
    if kind == 0:  # small integers: many ties
        return [float(rng.randrange(0, 6)) for _ in range(n)]
    if kind == 1:  # shifted normals
        mu = rng.uniform(-1.0, 1.0)
        return [rng.gauss(mu, 1.0) for _ in range(n)]
    # mixed: integer grid plus occasional continuous values
    return [
        float(rng.randrange(0, 20)) if rng.random() < 0.7 else rng.uniform(0.0, 20.0)
        for _ in range(n)
    ]


def main() -> None:
    rng = random.Random(20240214)
    cases = []
    for _ in range(100):
        a = sample(rng, rng.randrange(2, 41))
        b = sample(rng, rng.randrange(2, 41))
        res = mannwhitneyu(a, b, alternative="two-sided", method="asymptotic")
        cases.append({"a": a, "b": b, "u": float(res.statistic), "p": float(res.pvalue)})
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(cases, indent=1) + "\n")
    print(f"wrote {OUT} with {len(cases)} cases")


if __name__ == "__main__":
    main()
