#pragma once

#include <string>
#include <vector>

#include "csfs/selection.hpp"

namespace csfs {

// Upper-triangular L x L grid of feature sets built from a pairwise table.
//
//   diagonal[p]   = {f : table(p,q)[f] > tau for every q != p}
//   offdiag(p,q)  = {f : table(p,q)[f] > tau} \ (diagonal[p] u diagonal[q])
//
// Off-diagonal cells are stored for p < q only, in the table's pair order.
// Empty cells are kept as empty sets.
struct ClassSpecificRelevanceMatrix {
  struct PairCell {
    ClassId p;
    ClassId q;
    FeatureSet features;
  };

  std::vector<std::string> classes;
  std::vector<std::string> features;
  double tau = 0.5;
  std::vector<FeatureSet> diagonal;
  std::vector<PairCell> offdiag;

  std::size_t num_classes() const { return classes.size(); }
  const FeatureSet& cell(ClassId p, ClassId q) const;
};

ClassSpecificRelevanceMatrix build_matrix(const PairwiseRelevanceTable& table,
                                          const RelevanceThreshold& th = {});

// diag(p) u diag(q) u M(p,q): the pair's relevant set, recovered from the
// matrix alone.
FeatureSet pair_relevant_set(const ClassSpecificRelevanceMatrix& matrix, ClassId p, ClassId q);
FeatureSet pair_relevant_set(const ClassSpecificRelevanceMatrix& matrix, const std::string& p,
                             const std::string& q);

}  // namespace csfs
