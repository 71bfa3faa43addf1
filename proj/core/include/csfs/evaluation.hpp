#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csfs/dataset.hpp"
#include "csfs/schemes.hpp"
#include "csfs/selection.hpp"

namespace csfs {

// Everything needed to go from a training set to a trained scheme.
struct Pipeline {
  MeasureSpec measure;
  // Selection strategy. Only the one-layer topology has a choice (ova|ove);
  // the others imply global, dove, and dove + matrix respectively.
  Strategy strategy = Strategy::kDOvE;
  AggregateSpec aggregate;
  SchemeSpec scheme;
};

// Strategy a topology uses when none is given.
Strategy default_strategy(Topology t);
// Throws UsageError when the strategy cannot feed the topology.
void validate(const Pipeline& p);

// Runs the selection step of `p` on `d` and returns the artifact its
// topology consumes.
SelectionArtifact select_artifact(const Dataset& d, const Pipeline& p, const SelectionContext& ctx = {});

TrainedScheme fit(const Dataset& d, const Pipeline& p, const SelectionContext& ctx = {});

// Fold index in [0,k) per example. Each class is shuffled with the seed and
// dealt round-robin, continuing from where the previous class stopped, so
// per-fold class counts differ by at most one.
std::vector<std::size_t> stratified_kfold(const Dataset& d, std::size_t k, std::uint64_t seed);

struct InstrumentationReport {
  std::uint64_t measure_calls = 0;
  std::uint64_t examples_touched = 0;
  double wall_seconds = 0.0;
};

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t correct = 0;
  InstrumentationReport instrumentation;
  SelectionArtifact artifact;
  std::vector<std::string> warnings;
};

struct EvaluationReport {
  Topology topology = Topology::kThreeLayer;
  Strategy strategy = Strategy::kDOvE;
  std::size_t k = 5;
  std::uint64_t seed = 0;
  std::vector<std::string> classes;
  double accuracy = 0.0;
  std::vector<double> recall;                      // per class
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::vector<std::size_t> folds;                  // fold of each example
  std::vector<FoldResult> per_fold;
  InstrumentationReport instrumentation;           // summed over folds
};

// k-fold stratified cross-validation. Selection and training are refit on
// each training partition; the held-out fold is only ever predicted.
EvaluationReport evaluate(const Dataset& d, const Pipeline& p, std::size_t k, std::uint64_t seed,
                          const ExecutionOptions& exec = {});

// Fixed-width text rendering of a report.
std::string format_report_table(const EvaluationReport& r);

}  // namespace csfs
