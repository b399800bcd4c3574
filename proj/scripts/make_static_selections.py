#!/usr/bin/env python3
# Project glassmol - Copyright 2026 The GlassMol Authors.
# SPDX-License-Identifier: Apache-2.0
"""Freeze the offline concept selections in data/selections.

Each task has a full relevance ranking of the 48-concept pool, written by
hand from the task text under the select_concepts.v1 output contract. The
K=40 file is the bundled default; prefixes at other K feed the K sweep.
"""

import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "selections"
POOL_VERSION = "glassmol-pool-v1"
KS = (10, 20, 30, 40, 48)
DEFAULT_K = 40

# Generic relevance order used to fill in behind each task's priorities.
BASE = [
    "crippen_logp", "tpsa", "molecular_weight", "hbd", "hba",
    "rotatable_bonds", "aromatic_ring_count", "qed", "fraction_csp3",
    "formal_charge_sum", "heavy_atom_count", "ring_count",
    "heterocycle_count", "aromatic_heterocycle_count", "ring_nitrogen_count",
    "lipinski_violations", "crippen_mr", "tertiary_amine", "carboxylic_acid",
    "amide", "hydroxyl", "halide", "aniline", "nitro", "sulfonamide", "ester",
    "ether", "methoxy", "primary_amine", "secondary_amine", "piperazine",
    "ketone", "nitrile", "aldehyde", "nitrogen_count", "oxygen_count",
    "halogen_count", "sulfur_count", "carbon_count", "ro5_pass",
    "flexibility", "wiener_index", "zagreb_m1", "zagreb_m2", "graph_diameter",
    "max_ring_size", "ring_oxygen_count", "qed_unweighted",
]

# (front: most relevant first, back: least relevant last)
TASKS = {
    "dili": (
        ["crippen_logp", "molecular_weight", "aniline", "nitro", "halide",
         "carboxylic_acid", "sulfonamide", "methoxy", "ketone", "piperazine",
         "aldehyde", "aromatic_ring_count", "tpsa", "hba", "hbd", "qed",
         "halogen_count", "aromatic_heterocycle_count"],
        ["carbon_count", "flexibility", "max_ring_size", "wiener_index",
         "zagreb_m2", "graph_diameter", "ring_oxygen_count", "qed_unweighted"],
    ),
    "hia": (
        ["tpsa", "hbd", "hba", "crippen_logp", "molecular_weight",
         "rotatable_bonds", "lipinski_violations", "ro5_pass",
         "formal_charge_sum", "carboxylic_acid", "qed", "hydroxyl",
         "fraction_csp3", "aromatic_ring_count", "sulfonamide",
         "primary_amine"],
        ["nitrile", "aldehyde", "wiener_index", "zagreb_m2",
         "graph_diameter", "ring_oxygen_count", "max_ring_size",
         "qed_unweighted"],
    ),
    "bioavailability": (
        ["tpsa", "crippen_logp", "molecular_weight", "hbd", "hba",
         "rotatable_bonds", "lipinski_violations", "qed", "fraction_csp3",
         "aromatic_ring_count", "formal_charge_sum", "carboxylic_acid",
         "ro5_pass", "ester", "amide", "hydroxyl"],
        ["zagreb_m1", "zagreb_m2", "wiener_index", "graph_diameter",
         "nitrile", "aldehyde", "max_ring_size", "qed_unweighted"],
    ),
    "bbb": (
        ["tpsa", "hbd", "crippen_logp", "molecular_weight", "formal_charge_sum",
         "carboxylic_acid", "tertiary_amine", "hba", "rotatable_bonds",
         "qed", "aromatic_ring_count", "hydroxyl", "fraction_csp3",
         "secondary_amine", "sulfonamide", "lipinski_violations"],
        ["aldehyde", "nitrile", "zagreb_m2", "wiener_index", "graph_diameter",
         "ring_oxygen_count", "max_ring_size", "qed_unweighted"],
    ),
    "pgp": (
        ["molecular_weight", "crippen_logp", "aromatic_ring_count",
         "tertiary_amine", "hba", "tpsa", "heavy_atom_count", "ring_count",
         "piperazine", "methoxy", "rotatable_bonds", "crippen_mr",
         "ring_nitrogen_count", "hbd", "ether", "amide"],
        ["aldehyde", "nitrile", "sulfur_count", "zagreb_m2", "graph_diameter",
         "ring_oxygen_count", "max_ring_size", "qed_unweighted"],
    ),
    "cyp2c9": (
        ["crippen_logp", "aromatic_ring_count", "carboxylic_acid",
         "sulfonamide", "halide", "molecular_weight", "formal_charge_sum",
         "tpsa", "hba", "hbd", "aromatic_heterocycle_count", "fraction_csp3",
         "sulfur_count", "halogen_count", "amide", "ether"],
        ["aldehyde", "nitrile", "wiener_index", "zagreb_m2", "graph_diameter",
         "ring_oxygen_count", "max_ring_size", "qed_unweighted"],
    ),
    "cyp2d6": (
        ["tertiary_amine", "secondary_amine", "aromatic_ring_count",
         "crippen_logp", "formal_charge_sum", "piperazine", "tpsa",
         "molecular_weight", "ring_nitrogen_count", "carboxylic_acid",
         "hbd", "hba", "fraction_csp3", "methoxy", "primary_amine",
         "heterocycle_count"],
        ["aldehyde", "nitrile", "wiener_index", "zagreb_m2", "graph_diameter",
         "ring_oxygen_count", "max_ring_size", "qed_unweighted"],
    ),
    "cyp3a4": (
        ["molecular_weight", "crippen_logp", "aromatic_ring_count",
         "heavy_atom_count", "ring_count", "tpsa", "hba", "crippen_mr",
         "rotatable_bonds", "aromatic_heterocycle_count", "tertiary_amine",
         "piperazine", "methoxy", "halide", "amide", "ether"],
        ["aldehyde", "nitrile", "wiener_index", "zagreb_m2", "graph_diameter",
         "ring_oxygen_count", "max_ring_size", "qed_unweighted"],
    ),
    "cyp2c9_subs": (
        ["carboxylic_acid", "crippen_logp", "aromatic_ring_count",
         "sulfonamide", "formal_charge_sum", "molecular_weight", "tpsa",
         "hba", "hbd", "amide", "halide", "fraction_csp3", "ether",
         "aromatic_heterocycle_count", "sulfur_count", "methoxy"],
        ["aldehyde", "nitrile", "wiener_index", "zagreb_m2", "graph_diameter",
         "ring_oxygen_count", "max_ring_size", "qed_unweighted"],
    ),
    "cyp2d6_subs": (
        ["tertiary_amine", "secondary_amine", "primary_amine",
         "aromatic_ring_count", "crippen_logp", "formal_charge_sum",
         "methoxy", "piperazine", "molecular_weight", "tpsa",
         "ring_nitrogen_count", "hbd", "hba", "fraction_csp3", "ether",
         "hydroxyl"],
        ["aldehyde", "nitrile", "wiener_index", "zagreb_m2", "graph_diameter",
         "ring_oxygen_count", "max_ring_size", "qed_unweighted"],
    ),
    "cyp3a4_subs": (
        ["molecular_weight", "crippen_logp", "heavy_atom_count", "ring_count",
         "rotatable_bonds", "tpsa", "hba", "crippen_mr", "tertiary_amine",
         "aromatic_ring_count", "amide", "ester", "methoxy", "ether",
         "fraction_csp3", "heterocycle_count"],
        ["aldehyde", "nitrile", "wiener_index", "zagreb_m2", "graph_diameter",
         "ring_oxygen_count", "max_ring_size", "qed_unweighted"],
    ),
    "herg": (
        ["crippen_logp", "tertiary_amine", "aromatic_ring_count", "piperazine",
         "formal_charge_sum", "molecular_weight", "halide", "secondary_amine",
         "carboxylic_acid", "tpsa", "hbd", "ring_nitrogen_count",
         "rotatable_bonds", "halogen_count", "fraction_csp3",
         "heavy_atom_count"],
        ["aldehyde", "nitrile", "wiener_index", "zagreb_m2", "graph_diameter",
         "ring_oxygen_count", "max_ring_size", "qed_unweighted"],
    ),
    "ames": (
        ["nitro", "aniline", "aromatic_ring_count", "aldehyde", "halide",
         "aromatic_heterocycle_count", "fraction_csp3", "primary_amine",
         "ring_nitrogen_count", "crippen_logp", "molecular_weight",
         "nitrogen_count", "halogen_count", "tpsa", "ketone"],
        ["carboxylic_acid", "sulfonamide", "wiener_index", "zagreb_m2",
         "graph_diameter", "ring_oxygen_count", "max_ring_size",
         "qed_unweighted"],
    ),
}


def ranking(front, back):
    middle = [n for n in BASE if n not in front and n not in back]
    order = front + middle + list(back)
    assert sorted(order) == sorted(BASE) and len(set(order)) == len(BASE), front
    return order


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for task, (front, back) in sorted(TASKS.items()):
        order = ranking(front, back)
        for k in KS:
            doc = {
                "format": "glassmol-selection v1",
                "task_id": task,
                "method": "static",
                "k": k,
                "pool_version": POOL_VERSION,
                "names": order[:k],
                "provenance": {
                    "prompt": "select_concepts.v1",
                    "source": "curated offline from the task text under the "
                              "prompt's output contract; no endpoint was "
                              "reachable when the registry was frozen",
                    "timestamp": "2026-10-15T00:00:00Z",
                },
            }
            name = f"{task}.json" if k == DEFAULT_K else f"{task}.k{k}.json"
            (OUT / name).write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
