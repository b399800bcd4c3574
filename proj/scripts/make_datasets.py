#!/usr/bin/env python3
#
# Project glassmol - Copyright 2026 The GlassMol Authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Builds the bundled proxy task datasets.

The public benchmark downloads are not reachable from the build
environment, so each task is approximated by a fixed-size sample of
approved drugs labelled with a published ADMET model's predicted
probability thresholded at 0.5. Sizes follow the public task sizes.

usage: make_datasets.py [drugbank_approved.csv] [out_dir]
"""

import csv
import random
import sys
from pathlib import Path

DEFAULT_SOURCE = "/tmp/pk4/admet_ai-1.4.0/admet_ai/resources/data/drugbank_approved.csv"

# task id -> (source column, sample size, sampling seed)
TASKS = {
    "dili": ("DILI", 475, 11),
    "hia": ("HIA_Hou", 578, 12),
    "bioavailability": ("Bioavailability_Ma", 640, 13),
}

MAX_SMILES_LENGTH = 150  # drops large peptides and macrocycles


def main():
    source = Path(sys.argv[1] if len(sys.argv) > 1 else DEFAULT_SOURCE)
    out_dir = Path(sys.argv[2] if len(sys.argv) > 2 else Path(__file__).parent.parent / "data" / "tasks")
    with source.open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    rows = [r for r in rows if r["smiles"] and len(r["smiles"]) <= MAX_SMILES_LENGTH]
    rows.sort(key=lambda r: r["id"])
    for task, (column, size, seed) in TASKS.items():
        picked = random.Random(seed).sample(rows, size)
        picked.sort(key=lambda r: r["id"])
        path = out_dir / f"{task}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["smiles", "label", "drugbank_id", "score"])
            for r in picked:
                score = float(r[column])
                w.writerow([r["smiles"], int(score > 0.5), r["id"], f"{score:.6f}"])
        positives = sum(float(r[column]) > 0.5 for r in picked)
        print(f"{task}: {size} rows, {positives} positive -> {path}")


if __name__ == "__main__":
    main()
