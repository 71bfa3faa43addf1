#include "csfs/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>

#include "csfs/error.hpp"

namespace csfs {

Strategy default_strategy(Topology t) {
  switch (t) {
    case Topology::kTraditional: return Strategy::kGlobal;
    case Topology::kOneLayerOvA: return Strategy::kOvA;
    case Topology::kTwoLayerDOvE:
    case Topology::kThreeLayer: return Strategy::kDOvE;
  }
  return Strategy::kDOvE;
}

void validate(const Pipeline& p) {
  validate(p.measure.discretization);
  validate(p.scheme);
  const Topology t = p.scheme.topology;
  const bool ok = t == Topology::kOneLayerOvA
                      ? (p.strategy == Strategy::kOvA || p.strategy == Strategy::kOvE)
                      : p.strategy == default_strategy(t);
  if (!ok) {
    throw UsageError("strategy '" + to_string(p.strategy) + "' cannot feed topology '" +
                     to_string(t) + "'");
  }
}

SelectionArtifact select_artifact(const Dataset& d, const Pipeline& p, const SelectionContext& ctx) {
  validate(p);
  switch (p.scheme.topology) {
    case Topology::kTraditional:
      return rank_global(d, p.measure, ctx);
    case Topology::kOneLayerOvA:
      if (p.strategy == Strategy::kOvE) return ove(d, p.measure, p.aggregate, ctx);
      return ova(d, p.measure, ctx);
    case Topology::kTwoLayerDOvE:
      return dove(d, p.measure, ctx);
    case Topology::kThreeLayer:
      return build_matrix(dove(d, p.measure, ctx), p.scheme.threshold);
  }
  throw UsageError("unknown topology");
}

TrainedScheme fit(const Dataset& d, const Pipeline& p, const SelectionContext& ctx) {
  return build_scheme(d, p.scheme, select_artifact(d, p, ctx), ctx.exec);
}

std::vector<std::size_t> stratified_kfold(const Dataset& d, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw UsageError("k must be at least 2");
  auto part = partition_by_class(d);
  for (std::size_t c = 0; c < part.members.size(); ++c) {
    if (part.members[c].size() < k) {
      throw DataError("class '" + d.class_name(static_cast<ClassId>(c)) + "' has " +
                      std::to_string(part.members[c].size()) + " examples, fewer than k=" +
                      std::to_string(k) + "; lower k or merge rare classes");
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> folds(d.num_examples(), 0);
  std::size_t next = 0;
  for (auto& members : part.members) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t idx : members) {
      folds[idx] = next;
      next = (next + 1) % k;
    }
  }
  return folds;
}

EvaluationReport evaluate(const Dataset& d, const Pipeline& p, std::size_t k, std::uint64_t seed,
                          const ExecutionOptions& exec) {
  validate(p);
  d.require_multiclass();
  const std::size_t L = d.num_classes();

  EvaluationReport report;
  report.topology = p.scheme.topology;
  report.strategy = p.strategy;
  report.k = k;
  report.seed = seed;
  report.classes = d.classes();
  report.folds = stratified_kfold(d, k, seed);

  std::vector<std::vector<std::size_t>> train_rows(k), test_rows(k);
  for (std::size_t i = 0; i < d.num_examples(); ++i) {
    for (std::size_t fold = 0; fold < k; ++fold) {
      (report.folds[i] == fold ? test_rows : train_rows)[fold].push_back(i);
    }
  }

  // Folds run concurrently; whatever threads are left over go to selection
  // and node training inside each fold.
  const unsigned total = resolve_threads(exec.threads);
  const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(total, k));
  const ExecutionOptions inner{std::max(1u, total / outer)};

  std::vector<FoldResult> results(k);
  std::vector<std::vector<std::vector<std::size_t>>> confusions(
      k, std::vector<std::vector<std::size_t>>(L, std::vector<std::size_t>(L, 0)));
  parallel_for(k, {outer}, [&](std::size_t fold) {
    const Dataset train = d.subset(train_rows[fold]);
    MeasureCounter counter;
    const auto start = std::chrono::steady_clock::now();
    SelectionArtifact artifact = select_artifact(train, p, {inner, &counter});
    const TrainedScheme scheme = build_scheme(train, p.scheme, artifact, inner);

    FoldResult& result = results[fold];
    result.fold = fold;
    result.train_size = train_rows[fold].size();
    result.test_size = test_rows[fold].size();
    for (std::size_t r : test_rows[fold]) {
      const auto pred = predict(scheme, d.row(r));
      ++confusions[fold][d.label(r)][pred.label];
      if (pred.label == d.label(r)) ++result.correct;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    result.instrumentation = {counter.calls.load(), counter.examples.load(), elapsed.count()};
    result.artifact = std::move(artifact);
    result.warnings = scheme.warnings;
  });

  report.confusion.assign(L, std::vector<std::size_t>(L, 0));
  for (std::size_t fold = 0; fold < k; ++fold) {
    for (std::size_t a = 0; a < L; ++a)
      for (std::size_t b = 0; b < L; ++b) report.confusion[a][b] += confusions[fold][a][b];
    const auto& inst = results[fold].instrumentation;
    report.instrumentation.measure_calls += inst.measure_calls;
    report.instrumentation.examples_touched += inst.examples_touched;
    report.instrumentation.wall_seconds += inst.wall_seconds;
  }
  report.per_fold = std::move(results);

  std::size_t correct = 0;
  report.recall.assign(L, 0.0);
  for (std::size_t c = 0; c < L; ++c) {
    std::size_t row_total = 0;
    for (std::size_t q = 0; q < L; ++q) row_total += report.confusion[c][q];
    correct += report.confusion[c][c];
    report.recall[c] = row_total == 0 ? 0.0
                                      : static_cast<double>(report.confusion[c][c]) /
                                            static_cast<double>(row_total);
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(d.num_examples());
  return report;
}

std::string format_report_table(const EvaluationReport& r) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "topology %s, strategy %s, k=%zu, seed=%llu\n",
                to_string(r.topology).c_str(), to_string(r.strategy).c_str(), r.k,
                static_cast<unsigned long long>(r.seed));
  out += buf;
  std::snprintf(buf, sizeof buf, "accuracy %.4f\n\n", r.accuracy);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-12s %8s  ", "class", "recall");
  out += buf;
  for (const auto& c : r.classes) {
    std::snprintf(buf, sizeof buf, "%8.8s", c.c_str());
    out += buf;
  }
  out += '\n';
  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    std::snprintf(buf, sizeof buf, "%-12.12s %8.4f  ", r.classes[c].c_str(), r.recall[c]);
    out += buf;
    for (std::size_t v : r.confusion[c]) {
      std::snprintf(buf, sizeof buf, "%8zu", v);
      out += buf;
    }
    out += '\n';
  }
  std::snprintf(buf, sizeof buf, "\nmeasure calls %llu, examples touched %llu\n",
                static_cast<unsigned long long>(r.instrumentation.measure_calls),
                static_cast<unsigned long long>(r.instrumentation.examples_touched));
  out += buf;
  return out;
}

}  // namespace csfs
