#include "csfs/relevance_matrix.hpp"

#include <algorithm>
#include <iterator>

#include "csfs/error.hpp"

namespace csfs {

namespace {

FeatureSet set_union(const FeatureSet& a, const FeatureSet& b) {
  FeatureSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ClassId lookup(const ClassSpecificRelevanceMatrix& matrix, const std::string& name) {
  auto it = std::find(matrix.classes.begin(), matrix.classes.end(), name);
  if (it == matrix.classes.end()) throw DataError("unknown class '" + name + "'");
  return static_cast<ClassId>(it - matrix.classes.begin());
}

}  // namespace

const FeatureSet& ClassSpecificRelevanceMatrix::cell(ClassId p, ClassId q) const {
  if (p == q) return diagonal.at(p);
  if (p > q) std::swap(p, q);
  for (const auto& c : offdiag) {
    if (c.p == p && c.q == q) return c.features;
  }
  throw DataError("pair not present in relevance matrix");
}

ClassSpecificRelevanceMatrix build_matrix(const PairwiseRelevanceTable& table,
                                          const RelevanceThreshold& th) {
  validate(th);
  const std::size_t L = table.num_classes();
  const std::size_t m = table.num_features();
  if (L < 2) throw DataError("relevance matrix needs at least 2 classes");
  if (table.scores.size() != L * (L - 1) / 2) throw DataError("pairwise table has wrong row count");

  ClassSpecificRelevanceMatrix out;
  out.classes = table.classes;
  out.features = table.features;
  out.tau = th.tau;
  out.diagonal.resize(L);

  for (ClassId p = 0; p < L; ++p) {
    for (std::size_t j = 0; j < m; ++j) {
      bool everywhere = true;
      for (ClassId q = 0; q < L && everywhere; ++q) {
        if (q != p) everywhere = th.relevant(table.score(p, q, j));
      }
      if (everywhere) out.diagonal[p].push_back(j);
    }
  }

  for (auto [p, q] : class_pairs(L)) {
    const FeatureSet joined = set_union(out.diagonal[p], out.diagonal[q]);
    FeatureSet extra;
    for (std::size_t j = 0; j < m; ++j) {
      if (th.relevant(table.score(p, q, j)) && !std::binary_search(joined.begin(), joined.end(), j)) {
        extra.push_back(j);
      }
    }
    out.offdiag.push_back({p, q, std::move(extra)});
  }
  return out;
}

FeatureSet pair_relevant_set(const ClassSpecificRelevanceMatrix& matrix, ClassId p, ClassId q) {
  if (p == q) throw DataError("pair_relevant_set needs two distinct classes");
  if (p >= matrix.num_classes() || q >= matrix.num_classes()) throw DataError("unknown class");
  return set_union(set_union(matrix.diagonal[p], matrix.diagonal[q]), matrix.cell(p, q));
}

FeatureSet pair_relevant_set(const ClassSpecificRelevanceMatrix& matrix, const std::string& p,
                             const std::string& q) {
  return pair_relevant_set(matrix, lookup(matrix, p), lookup(matrix, q));
}

}  // namespace csfs
