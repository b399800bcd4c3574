//
// Project glassmol - Copyright 2026 The GlassMol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "glassmol/chem/molecule.hpp"
#include "glassmol/chem/rings.hpp"

namespace glassmol::testing {

// Relabels atoms by a random permutation and shuffles bond order, then
// re-runs ring perception: the same molecule as seen through another input
// atom ordering.
inline chem::MolecularGraph permute_atoms(const chem::MolecularGraph &g,
                                          std::mt19937_64 &rng) {
  const int n = g.num_atoms();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<chem::Atom> atoms(n);
  for (int i = 0; i < n; ++i)
    atoms[perm[i]] = g.atom(i);
  std::vector<chem::Bond> bonds;
  for (const chem::Bond &b : g.bonds()) {
    chem::Bond nb{perm[b.a], perm[b.b], b.order};
    if (rng() & 1)
      std::swap(nb.a, nb.b);
    bonds.push_back(nb);
  }
  std::shuffle(bonds.begin(), bonds.end(), rng);
  chem::MolecularGraph out(std::move(atoms), std::move(bonds),
                           g.source_smiles());
  out.set_rings(chem::perceive_rings(out));
  return out;
}

// A small drug-like corpus used by property tests.
inline const std::vector<const char *> &drug_corpus() {
  static const std::vector<const char *> corpus = {
      "CC(=O)Oc1ccccc1C(=O)O",
      "Cn1c(=O)c2c(ncn2C)n(C)c1=O",
      "CC(=O)OCC(COC(C)=O)CCn1cnc2cnc(N)nc21",
      "COC12C(COC(N)=O)C3=C(N1CC1NC12)C(=O)C(C)=C(N)C3=O",
      "CC(C)Cc1ccc(C(C)C(=O)O)cc1",
      "CC(=O)Nc1ccc(O)cc1",
      "CN1CCCC1c1cccnc1",
      "CN(C)C(=N)N=C(N)N",
      "CN1C(=O)CN=C(c2ccccc2)c2cc(Cl)ccc21",
      "O=C(O)c1cn(C2CC2)c2cc(N3CCNCC3)c(F)cc2c1=O",
      "O=C(NC(CO)C(O)c1ccc([N+](=O)[O-])cc1)C(Cl)Cl",
      "Cc1cc(NS(=O)(=O)c2ccc(N)cc2)no1",
      "Cc1ccc(NC(=O)c2ccc(CN3CCN(C)CC3)cc2)cc1Nc1nccc(-c2cccnc2)n1",
      "CN1CCC23c4c5ccc(O)c4OC2C(O)C=CC3C1C5",
      "CC(C)NCC(O)COc1ccc(CC(N)=O)cc1",
      "CCN(CC)CC(=O)Nc1c(C)cccc1C",
      "CNCCC(Oc1ccc(C(F)(F)F)cc1)c1ccccc1",
      "O=C1CN(N=Cc2ccc([N+](=O)[O-])o2)C(=O)N1",
      "COc1ccc(C(CN(C)C)C2(O)CCCCC2)cc1",
      "c1ccc2c(c1)ccc1ccccc12",
      "C1CC2CCC1C2",
      "C12C3C4C1C5C2C3C45",
      "[Na+].[O-]C(=O)c1ccccc1",
      "OCC1OC(O)C(O)C(O)C1O",
  };
  return corpus;
}

// Fresh directory under the system temp root, removed on scope exit.
class TempDir {
public:
  explicit TempDir(const std::string &tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("glassmol_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const {
    return path_ / name;
  }

private:
  std::filesystem::path path_;
};

} // namespace glassmol::testing
