#include "csfs/selection.hpp"

#include <algorithm>
#include <limits>

#include "csfs/error.hpp"

namespace csfs {

namespace {

// Per-feature column binned once over the whole dataset, when the measure
// asks for global bins. Empty otherwise.
std::vector<std::uint32_t> global_column(const Dataset& d, std::size_t feature,
                                         const MeasureSpec& spec) {
  if (!spec.discretization.global) return {};
  std::vector<double> column(d.num_examples());
  for (std::size_t i = 0; i < column.size(); ++i) column[i] = d.value(i, feature);
  return discretize(column, spec.discretization);
}

double measure_on(const Dataset& d, const std::vector<std::uint32_t>& prebinned,
                  std::span<const std::size_t> rows, std::span<const ClassId> labels,
                  std::size_t feature, const MeasureSpec& spec, MeasureCounter* counter) {
  if (spec.discretization.global) {
    return measure_prebinned(prebinned, rows, labels, spec, counter);
  }
  return measure(d, rows, labels, feature, spec, counter);
}

}  // namespace

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kGlobal: return "global";
    case Strategy::kOvA: return "ova";
    case Strategy::kOvE: return "ove";
    case Strategy::kDOvE: return "dove";
  }
  return "?";
}

Strategy parse_strategy(const std::string& name) {
  if (name == "global") return Strategy::kGlobal;
  if (name == "ova") return Strategy::kOvA;
  if (name == "ove") return Strategy::kOvE;
  if (name == "dove") return Strategy::kDOvE;
  throw UsageError("unknown strategy '" + name + "' (expected global|ova|ove|dove)");
}

std::string to_string(AggregateKind kind) {
  switch (kind) {
    case AggregateKind::kMean: return "mean";
    case AggregateKind::kMin: return "min";
    case AggregateKind::kMax: return "max";
  }
  return "?";
}

AggregateKind parse_aggregate(const std::string& name) {
  if (name == "mean") return AggregateKind::kMean;
  if (name == "min") return AggregateKind::kMin;
  if (name == "max") return AggregateKind::kMax;
  throw UsageError("unknown aggregate '" + name + "' (expected mean|min|max)");
}

void validate(const RelevanceThreshold& th) {
  if (!(th.tau >= 0.0 && th.tau < 1.0)) throw UsageError("tau must lie in [0,1)");
}

std::vector<std::pair<ClassId, ClassId>> class_pairs(std::size_t num_classes) {
  std::vector<std::pair<ClassId, ClassId>> pairs;
  pairs.reserve(num_classes * (num_classes - 1) / 2);
  for (ClassId p = 0; p < num_classes; ++p) {
    for (ClassId q = p + 1; q < num_classes; ++q) pairs.emplace_back(p, q);
  }
  return pairs;
}

std::size_t PairwiseRelevanceTable::pair_index(ClassId p, ClassId q) const {
  const std::size_t L = classes.size();
  if (p == q || p >= L || q >= L) throw DataError("invalid class pair");
  if (p > q) std::swap(p, q);
  // Rows before p: sum_{i<p} (L-1-i).
  const std::size_t before = static_cast<std::size_t>(p) * (2 * L - p - 1) / 2;
  return before + (q - p - 1);
}

GlobalRanking rank_global(const Dataset& d, const MeasureSpec& spec, const SelectionContext& ctx) {
  validate(spec.discretization);
  d.require_multiclass();
  GlobalRanking out{d.classes(), d.feature_names(), std::vector<double>(d.num_features(), 0.0)};
  std::vector<std::size_t> rows(d.num_examples());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  parallel_for(d.num_features(), ctx.exec, [&](std::size_t j) {
    const auto pre = global_column(d, j, spec);
    out.scores[j] = measure_on(d, pre, rows, d.labels(), j, spec, ctx.counter);
  });
  return out;
}

ClassSpecificRanking ova(const Dataset& d, const MeasureSpec& spec, const SelectionContext& ctx) {
  validate(spec.discretization);
  d.require_multiclass();
  const std::size_t L = d.num_classes();
  const std::size_t m = d.num_features();

  std::vector<BinarizedView> views;
  views.reserve(L);
  for (ClassId p = 0; p < L; ++p) views.emplace_back(d, p);

  ClassSpecificRanking out{d.classes(), d.feature_names(), Strategy::kOvA,
                           std::vector<std::vector<double>>(L, std::vector<double>(m, 0.0))};
  parallel_for(m, ctx.exec, [&](std::size_t j) {
    const auto pre = global_column(d, j, spec);
    for (ClassId p = 0; p < L; ++p) {
      out.scores[p][j] = measure_on(d, pre, views[p].rows(), views[p].labels(), j, spec, ctx.counter);
    }
  });
  return out;
}

PairwiseRelevanceTable dove(const Dataset& d, const MeasureSpec& spec, const SelectionContext& ctx) {
  validate(spec.discretization);
  d.require_multiclass();
  const std::size_t m = d.num_features();

  PairwiseRelevanceTable out;
  out.classes = d.classes();
  out.features = d.feature_names();
  out.pairs = class_pairs(d.num_classes());

  std::vector<PairView> views;
  views.reserve(out.pairs.size());
  for (auto [p, q] : out.pairs) views.emplace_back(d, p, q);

  out.scores.assign(out.pairs.size(), std::vector<double>(m, 0.0));
  parallel_for(m, ctx.exec, [&](std::size_t j) {
    const auto pre = global_column(d, j, spec);
    for (std::size_t r = 0; r < views.size(); ++r) {
      out.scores[r][j] = measure_on(d, pre, views[r].rows(), views[r].labels(), j, spec, ctx.counter);
    }
  });
  return out;
}

ClassSpecificRanking aggregate_pairwise(const PairwiseRelevanceTable& table,
                                        const AggregateSpec& agg) {
  const std::size_t L = table.num_classes();
  const std::size_t m = table.num_features();
  if (L < 2) throw DataError("pairwise table needs at least 2 classes");
  if (table.scores.size() != L * (L - 1) / 2) throw DataError("pairwise table has wrong row count");

  ClassSpecificRanking out{table.classes, table.features, Strategy::kOvE,
                           std::vector<std::vector<double>>(L, std::vector<double>(m, 0.0))};
  for (ClassId p = 0; p < L; ++p) {
    for (std::size_t j = 0; j < m; ++j) {
      double acc = agg.kind == AggregateKind::kMin   ? std::numeric_limits<double>::infinity()
                   : agg.kind == AggregateKind::kMax ? -std::numeric_limits<double>::infinity()
                                                     : 0.0;
      for (ClassId q = 0; q < L; ++q) {
        if (q == p) continue;
        const double v = table.score(p, q, j);
        switch (agg.kind) {
          case AggregateKind::kMean: acc += v; break;
          case AggregateKind::kMin: acc = std::min(acc, v); break;
          case AggregateKind::kMax: acc = std::max(acc, v); break;
        }
      }
      if (agg.kind == AggregateKind::kMean) acc /= static_cast<double>(L - 1);
      out.scores[p][j] = acc;
    }
  }
  return out;
}

ClassSpecificRanking ove(const Dataset& d, const MeasureSpec& spec, const AggregateSpec& agg,
                         const SelectionContext& ctx) {
  return aggregate_pairwise(dove(d, spec, ctx), agg);
}

GlobalRanking collapse(const ClassSpecificRanking& ranking, const AggregateSpec& agg) {
  const std::size_t m = ranking.num_features();
  GlobalRanking out{ranking.classes, ranking.features, std::vector<double>(m, 0.0)};
  if (ranking.scores.empty()) return out;
  for (std::size_t j = 0; j < m; ++j) {
    double acc = ranking.scores[0][j];
    for (std::size_t p = 1; p < ranking.scores.size(); ++p) {
      const double v = ranking.scores[p][j];
      switch (agg.kind) {
        case AggregateKind::kMean: acc += v; break;
        case AggregateKind::kMin: acc = std::min(acc, v); break;
        case AggregateKind::kMax: acc = std::max(acc, v); break;
      }
    }
    if (agg.kind == AggregateKind::kMean) acc /= static_cast<double>(ranking.scores.size());
    out.scores[j] = acc;
  }
  return out;
}

FeatureSet relevant_features(const GlobalRanking& ranking, const RelevanceThreshold& th) {
  FeatureSet out;
  for (std::size_t j = 0; j < ranking.scores.size(); ++j) {
    if (th.relevant(ranking.scores[j])) out.push_back(j);
  }
  return out;
}

std::vector<FeatureSet> relevant_features(const ClassSpecificRanking& ranking,
                                          const RelevanceThreshold& th) {
  std::vector<FeatureSet> out;
  out.reserve(ranking.scores.size());
  for (const auto& row : ranking.scores) {
    FeatureSet set;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (th.relevant(row[j])) set.push_back(j);
    }
    out.push_back(std::move(set));
  }
  return out;
}

}  // namespace csfs
