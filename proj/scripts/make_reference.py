#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Freeze reference descriptor values for the descriptor oracle test.

Run once with RDKit installed; the output CSV is committed and read by the
C++ tests, which never need RDKit themselves.

    python3 scripts/make_reference.py > data/reference/descriptor_reference.csv
"""

import csv
import io
import sys
from pathlib import Path

import rdkit
from rdkit import Chem
from rdkit.Chem import Crippen, Descriptors, Lipinski, rdMolDescriptors

MOLECULES = [
    ("aspirin", "CC(=O)Oc1ccccc1C(=O)O"),
    ("caffeine", "Cn1c(=O)c2c(ncn2C)n(C)c1=O"),
    ("famciclovir", "CC(=O)OCC(CCn1cnc2cnc(N)nc21)COC(C)=O"),
    ("mitomycin_c", "CO[C@@]12[C@H](COC(N)=O)C3=C(C(=O)C(C)=C(N)C3=O)N1C[C@@H]1N[C@@H]12"),
    ("ibuprofen", "CC(C)Cc1ccc(C(C)C(=O)O)cc1"),
    ("paracetamol", "CC(=O)Nc1ccc(O)cc1"),
    ("nicotine", "CN1CCC[C@H]1c1cccnc1"),
    ("metformin", "CN(C)C(=N)NC(=N)N"),
    ("diazepam", "CN1C(=O)CN=C(c2ccccc2)c2cc(Cl)ccc21"),
    ("ciprofloxacin", "O=C(O)c1cn(C2CC2)c2cc(N3CCNCC3)c(F)cc2c1=O"),
    ("chloramphenicol", "O=C(N[C@H](CO)[C@H](O)c1ccc([N+](=O)[O-])cc1)C(Cl)Cl"),
    ("sulfamethoxazole", "Cc1cc(NS(=O)(=O)c2ccc(N)cc2)no1"),
    ("imatinib", "Cc1ccc(NC(=O)c2ccc(CN3CCN(C)CC3)cc2)cc1Nc1nccc(-c2cccnc2)n1"),
    ("morphine", "CN1CC[C@]23c4c5ccc(O)c4O[C@H]2[C@@H](O)C=C[C@H]3[C@H]1C5"),
    ("atenolol", "CC(C)NCC(O)COc1ccc(CC(N)=O)cc1"),
    ("lidocaine", "CCN(CC)CC(=O)Nc1c(C)cccc1C"),
    ("fluoxetine", "CNCCC(Oc1ccc(C(F)(F)F)cc1)c1ccccc1"),
    ("nitrofurantoin", "O=C1CN(/N=C/c2ccc([N+](=O)[O-])o2)C(=O)N1"),
    ("venlafaxine", "COc1ccc(C(CN(C)C)C2(O)CCCCC2)cc1"),
    ("trimethoprim", "COc1cc(Cc2cnc(N)nc2N)cc(OC)c1OC"),
]

ROOT = Path(__file__).resolve().parent.parent


def fragment_patterns():
    out = {}
    with open(ROOT / "data" / "tables" / "fragments.tsv") as f:
        lines = [l for l in f if not l.startswith("#")]
    for row in csv.DictReader(lines, delimiter="\t"):
        out[row["name"]] = Chem.MolFromSmarts(row["pattern"])
    return out


def ring_atoms(mol, z):
    return sum(1 for a in mol.GetAtoms() if a.GetAtomicNum() == z and a.IsInRing())


def rotatable(mol, amide):
    # Single non-ring bonds between non-terminal atoms, amide C-N removed.
    pattern = Chem.MolFromSmarts("[!D1]-&!@[!D1]")
    bonds = {tuple(sorted(m)) for m in mol.GetSubstructMatches(pattern, uniquify=False)}
    amides = {tuple(sorted((m[0], m[2]))) for m in mol.GetSubstructMatches(amide, uniquify=False)}
    return len(bonds - amides)


def main():
    frags = fragment_patterns()
    columns = ["name", "smiles", "molecular_weight", "tpsa", "crippen_logp",
               "heavy_atom_count", "hbd", "hba", "ring_count",
               "aromatic_ring_count", "heterocycle_count",
               "aromatic_heterocycle_count", "ring_nitrogen_count",
               "ring_oxygen_count", "rotatable_bonds"] + list(frags)
    buf = io.StringIO()
    buf.write(f"# glassmol descriptor reference, rdkit {rdkit.__version__}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for name, smiles in MOLECULES:
        mol = Chem.MolFromSmiles(smiles)
        row = {
            "name": name,
            "smiles": Chem.MolToSmiles(mol),
            "molecular_weight": round(Descriptors.MolWt(mol), 4),
            "tpsa": round(rdMolDescriptors.CalcTPSA(mol), 4),
            "crippen_logp": round(Crippen.MolLogP(mol), 4),
            "heavy_atom_count": mol.GetNumHeavyAtoms(),
            "hbd": Lipinski.NHOHCount(mol),
            "hba": Lipinski.NOCount(mol),
            # True SSSR size; the symmetrized ring set differs on bridged systems.
            "ring_count": len(Chem.GetSSSR(mol)),
            "aromatic_ring_count": rdMolDescriptors.CalcNumAromaticRings(mol),
            "heterocycle_count": rdMolDescriptors.CalcNumHeterocycles(mol),
            "aromatic_heterocycle_count": rdMolDescriptors.CalcNumAromaticHeterocycles(mol),
            "ring_nitrogen_count": ring_atoms(mol, 7),
            "ring_oxygen_count": ring_atoms(mol, 8),
            "rotatable_bonds": rotatable(mol, frags["amide"]),
        }
        for fname, patt in frags.items():
            row[fname] = len(mol.GetSubstructMatches(patt))
        w.writerow([row[c] for c in columns])
    sys.stdout.write(buf.getvalue())


if __name__ == "__main__":
    main()
