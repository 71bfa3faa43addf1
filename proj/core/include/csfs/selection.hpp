#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "csfs/dataset.hpp"
#include "csfs/measures.hpp"
#include "csfs/parallel.hpp"

namespace csfs {

enum class Strategy { kGlobal, kOvA, kOvE, kDOvE };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& name);  // global|ova|ove|dove

// Class-independent ranking: one score per feature.
struct GlobalRanking {
  std::vector<std::string> classes;
  std::vector<std::string> features;
  std::vector<double> scores;
};

// L x m matrix of per-class relevance scores (row per class, in class order).
struct ClassSpecificRanking {
  std::vector<std::string> classes;
  std::vector<std::string> features;
  Strategy strategy = Strategy::kOvA;
  std::vector<std::vector<double>> scores;

  std::size_t num_classes() const { return classes.size(); }
  std::size_t num_features() const { return features.size(); }
};

// One row per unordered class pair (p < q in class order), ordered
// lexicographically: AB, AC, AD, BC, BD, CD for four classes.
struct PairwiseRelevanceTable {
  std::vector<std::string> classes;
  std::vector<std::string> features;
  std::vector<std::pair<ClassId, ClassId>> pairs;
  std::vector<std::vector<double>> scores;

  std::size_t num_classes() const { return classes.size(); }
  std::size_t num_features() const { return features.size(); }
  // Row index of the unordered pair {p, q}.
  std::size_t pair_index(ClassId p, ClassId q) const;
  double score(ClassId p, ClassId q, std::size_t feature) const {
    return scores[pair_index(p, q)][feature];
  }
};

// All unordered pairs over L classes, in table row order.
std::vector<std::pair<ClassId, ClassId>> class_pairs(std::size_t num_classes);

enum class AggregateKind { kMean, kMin, kMax };

struct AggregateSpec {
  AggregateKind kind = AggregateKind::kMean;
};

std::string to_string(AggregateKind kind);
AggregateKind parse_aggregate(const std::string& name);  // mean|min|max

// Relevance test is strictly `score > tau`.
struct RelevanceThreshold {
  double tau = 0.5;

  bool relevant(double score) const { return score > tau; }
};

void validate(const RelevanceThreshold& th);

struct SelectionContext {
  ExecutionOptions exec;
  MeasureCounter* counter = nullptr;
};

GlobalRanking rank_global(const Dataset& d, const MeasureSpec& spec,
                          const SelectionContext& ctx = {});

// One-versus-All: scores[p][j] = measure(binarize(d, p), j).
ClassSpecificRanking ova(const Dataset& d, const MeasureSpec& spec,
                         const SelectionContext& ctx = {});

// Deep One-versus-Each: every unordered pair measured once.
PairwiseRelevanceTable dove(const Dataset& d, const MeasureSpec& spec,
                            const SelectionContext& ctx = {});

ClassSpecificRanking aggregate_pairwise(const PairwiseRelevanceTable& table,
                                        const AggregateSpec& agg = {});

// One-versus-Each, defined as aggregate_pairwise(dove(d)).
ClassSpecificRanking ove(const Dataset& d, const MeasureSpec& spec, const AggregateSpec& agg = {},
                         const SelectionContext& ctx = {});

// Class-independent view of a class-specific ranking: per-feature aggregate
// over classes.
GlobalRanking collapse(const ClassSpecificRanking& ranking, const AggregateSpec& agg = {});

using FeatureSet = std::vector<std::size_t>;

// {j : score_j > tau}, in feature order.
FeatureSet relevant_features(const GlobalRanking& ranking, const RelevanceThreshold& th);
std::vector<FeatureSet> relevant_features(const ClassSpecificRanking& ranking,
                                          const RelevanceThreshold& th);

}  // namespace csfs
