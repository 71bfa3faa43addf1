#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "csfs/dataset.hpp"

namespace csfs {

enum class Binning { kEqualWidth, kEqualFrequency };

struct DiscretizationSpec {
  Binning method = Binning::kEqualFrequency;
  std::size_t bins = 4;
  // Bin edges from the whole dataset column instead of from each view.
  bool global = false;
};

enum class MeasureKind { kSymmetricUncertainty, kNormalizedInformationGain };

struct MeasureSpec {
  MeasureKind kind = MeasureKind::kSymmetricUncertainty;
  DiscretizationSpec discretization;
};

void validate(const DiscretizationSpec& spec);

std::string to_string(MeasureKind kind);
std::string to_string(Binning method);
MeasureKind parse_measure_kind(const std::string& name);  // "su" | "nig"
Binning parse_binning(const std::string& name);           // "ew" | "ef"

// Maps each value to a bin in [0, bins). Equal-width splits [min,max] into
// equal intervals. Equal-frequency puts a value in bin floor(bins * r / n),
// r being the number of strictly smaller values, so tied values always share
// a bin and the result does not depend on row order.
std::vector<std::uint32_t> discretize(std::span<const double> column, const DiscretizationSpec& spec);

// Shannon quantities in bits over discrete symbol codes.
double entropy(std::span<const std::uint32_t> x);
double mutual_information(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y);
double joint_entropy(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y);

// 2 I(x;y) / (H(x) + H(y)), or 0 when both are constant.
double symmetric_uncertainty(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y);

// I(x;y) / H(y), with y the class labels; 0 when y is constant.
double normalized_information_gain(std::span<const std::uint32_t> x,
                                   std::span<const std::uint32_t> y);

// Re-codes arbitrary symbols as dense codes in first-occurrence order.
template <typename T>
std::vector<std::uint32_t> encode_symbols(std::span<const T> symbols) {
  std::map<T, std::uint32_t> codes;
  std::vector<std::uint32_t> out;
  out.reserve(symbols.size());
  for (const auto& s : symbols) {
    auto [it, inserted] = codes.try_emplace(s, static_cast<std::uint32_t>(codes.size()));
    out.push_back(it->second);
  }
  return out;
}

// Counts measure invocations and the examples they touch. Safe to bump from
// concurrent workers.
struct MeasureCounter {
  std::atomic<std::uint64_t> calls{0};
  std::atomic<std::uint64_t> examples{0};

  void reset() {
    calls = 0;
    examples = 0;
  }
};

// Scores feature j over the examples `rows` labelled by `labels` (parallel
// arrays). Result is in [0,1].
double measure(const Dataset& d, std::span<const std::size_t> rows,
               std::span<const ClassId> labels, std::size_t feature,
               const MeasureSpec& spec, MeasureCounter* counter = nullptr);

double measure(const BinarizedView& view, std::size_t feature, const MeasureSpec& spec,
               MeasureCounter* counter = nullptr);
double measure(const PairView& view, std::size_t feature, const MeasureSpec& spec,
               MeasureCounter* counter = nullptr);

// Same as measure() but with a column already discretized over the whole
// dataset (the --global-bins path). `binned` has n entries.
double measure_prebinned(std::span<const std::uint32_t> binned, std::span<const std::size_t> rows,
                         std::span<const ClassId> labels, const MeasureSpec& spec,
                         MeasureCounter* counter = nullptr);

}  // namespace csfs
