#include "csfs/measures.hpp"

#include <algorithm>
#include <cmath>

#include "csfs/error.hpp"

namespace csfs {

namespace {

// Entropy-like sums are accumulated over sorted terms so the result is
// exactly invariant to symbol relabelling and to row order.
double sum_sorted(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

double entropy_from_counts(std::span<const std::uint64_t> counts, std::uint64_t n) {
  std::vector<double> terms;
  terms.reserve(counts.size());
  const double total = static_cast<double>(n);
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    const double count = static_cast<double>(c);
    terms.push_back((count / total) * std::log2(total / count));
  }
  return sum_sorted(terms);
}

std::vector<std::uint64_t> histogram(std::span<const std::uint32_t> x) {
  std::uint32_t top = 0;
  for (auto v : x) top = std::max(top, v);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(top) + 1, 0);
  for (auto v : x) ++counts[v];
  return counts;
}

void check_pair(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) {
  if (x.size() != y.size()) throw DataError("symbol vectors differ in length");
  if (x.empty()) throw DataError("empty symbol vector");
}

struct JointCounts {
  std::vector<std::uint64_t> x;
  std::vector<std::uint64_t> y;
  std::vector<std::uint64_t> xy;  // row-major x by y
};

JointCounts joint_counts(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) {
  JointCounts jc{histogram(x), histogram(y), {}};
  const std::size_t ny = jc.y.size();
  jc.xy.assign(jc.x.size() * ny, 0);
  for (std::size_t i = 0; i < x.size(); ++i) ++jc.xy[x[i] * ny + y[i]];
  return jc;
}

double mutual_information_from(const JointCounts& jc, std::uint64_t n) {
  // sum p(x,y) log2 [ c(x,y) n / (c(x) c(y)) ]: product joints give ratios of
  // exactly 1, and x = y reproduces the entropy terms bit for bit.
  const std::size_t ny = jc.y.size();
  const double total = static_cast<double>(n);
  std::vector<double> terms;
  for (std::size_t a = 0; a < jc.x.size(); ++a) {
    for (std::size_t b = 0; b < ny; ++b) {
      const std::uint64_t c = jc.xy[a * ny + b];
      if (c == 0) continue;
      const double ratio = static_cast<double>(c * n) / static_cast<double>(jc.x[a] * jc.y[b]);
      terms.push_back((static_cast<double>(c) / total) * std::log2(ratio));
    }
  }
  return std::max(0.0, sum_sorted(terms));
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

double score(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y, MeasureKind kind) {
  switch (kind) {
    case MeasureKind::kSymmetricUncertainty:
      return symmetric_uncertainty(x, y);
    case MeasureKind::kNormalizedInformationGain:
      return normalized_information_gain(x, y);
  }
  throw UsageError("unknown measure kind");
}

}  // namespace

void validate(const DiscretizationSpec& spec) {
  if (spec.bins < 2) throw UsageError("bin count must be at least 2");
}

std::string to_string(MeasureKind kind) {
  return kind == MeasureKind::kSymmetricUncertainty ? "su" : "nig";
}

std::string to_string(Binning method) {
  return method == Binning::kEqualWidth ? "ew" : "ef";
}

MeasureKind parse_measure_kind(const std::string& name) {
  if (name == "su") return MeasureKind::kSymmetricUncertainty;
  if (name == "nig") return MeasureKind::kNormalizedInformationGain;
  throw UsageError("unknown measure '" + name + "' (expected su|nig)");
}

Binning parse_binning(const std::string& name) {
  if (name == "ew") return Binning::kEqualWidth;
  if (name == "ef") return Binning::kEqualFrequency;
  throw UsageError("unknown binning '" + name + "' (expected ew|ef)");
}

std::vector<std::uint32_t> discretize(std::span<const double> column, const DiscretizationSpec& spec) {
  validate(spec);
  const std::size_t n = column.size();
  std::vector<std::uint32_t> bins(n, 0);
  if (n == 0) return bins;
  const auto k = static_cast<std::uint32_t>(spec.bins);

  if (spec.method == Binning::kEqualWidth) {
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    const double low = *lo;
    const double width = *hi - *lo;
    if (width <= 0.0) return bins;
    for (std::size_t i = 0; i < n; ++i) {
      const double pos = (column[i] - low) / width * static_cast<double>(k);
      bins[i] = std::min(k - 1, static_cast<std::uint32_t>(pos));
    }
    return bins;
  }

  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < n; ++i) {
    const auto below = static_cast<std::uint64_t>(
        std::lower_bound(sorted.begin(), sorted.end(), column[i]) - sorted.begin());
    bins[i] = static_cast<std::uint32_t>(below * k / n);
  }
  return bins;
}

double entropy(std::span<const std::uint32_t> x) {
  if (x.empty()) throw DataError("entropy of an empty vector");
  const auto counts = histogram(x);
  return entropy_from_counts(counts, x.size());
}

double joint_entropy(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) {
  check_pair(x, y);
  const auto jc = joint_counts(x, y);
  return entropy_from_counts(jc.xy, x.size());
}

double mutual_information(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) {
  check_pair(x, y);
  return mutual_information_from(joint_counts(x, y), x.size());
}

double symmetric_uncertainty(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) {
  check_pair(x, y);
  const auto jc = joint_counts(x, y);
  const double hx = entropy_from_counts(jc.x, x.size());
  const double hy = entropy_from_counts(jc.y, x.size());
  const double denom = hx + hy;
  if (denom <= 0.0) return 0.0;
  return clamp_unit(2.0 * mutual_information_from(jc, x.size()) / denom);
}

double normalized_information_gain(std::span<const std::uint32_t> x,
                                   std::span<const std::uint32_t> y) {
  check_pair(x, y);
  const auto jc = joint_counts(x, y);
  const double hy = entropy_from_counts(jc.y, x.size());
  if (hy <= 0.0) return 0.0;
  return clamp_unit(mutual_information_from(jc, x.size()) / hy);
}

double measure(const Dataset& d, std::span<const std::size_t> rows,
               std::span<const ClassId> labels, std::size_t feature,
               const MeasureSpec& spec, MeasureCounter* counter) {
  if (rows.empty()) throw DataError("measure over an empty view");
  if (rows.size() != labels.size()) throw DataError("view rows and labels differ in length");
  if (feature >= d.num_features()) throw DataError("feature index out of range");
  if (counter) {
    counter->calls.fetch_add(1, std::memory_order_relaxed);
    counter->examples.fetch_add(rows.size(), std::memory_order_relaxed);
  }

  std::vector<std::uint32_t> binned;
  if (spec.discretization.global) {
    std::vector<double> column(d.num_examples());
    for (std::size_t i = 0; i < column.size(); ++i) column[i] = d.value(i, feature);
    const auto all = discretize(column, spec.discretization);
    binned.reserve(rows.size());
    for (std::size_t r : rows) binned.push_back(all[r]);
  } else {
    std::vector<double> column;
    column.reserve(rows.size());
    for (std::size_t r : rows) column.push_back(d.value(r, feature));
    binned = discretize(column, spec.discretization);
  }
  return score(binned, labels, spec.kind);
}

double measure(const BinarizedView& view, std::size_t feature, const MeasureSpec& spec,
               MeasureCounter* counter) {
  return measure(view.dataset(), view.rows(), view.labels(), feature, spec, counter);
}

double measure(const PairView& view, std::size_t feature, const MeasureSpec& spec,
               MeasureCounter* counter) {
  return measure(view.dataset(), view.rows(), view.labels(), feature, spec, counter);
}

double measure_prebinned(std::span<const std::uint32_t> binned, std::span<const std::size_t> rows,
                         std::span<const ClassId> labels, const MeasureSpec& spec,
                         MeasureCounter* counter) {
  if (rows.empty()) throw DataError("measure over an empty view");
  if (rows.size() != labels.size()) throw DataError("view rows and labels differ in length");
  if (counter) {
    counter->calls.fetch_add(1, std::memory_order_relaxed);
    counter->examples.fetch_add(rows.size(), std::memory_order_relaxed);
  }
  std::vector<std::uint32_t> restricted;
  restricted.reserve(rows.size());
  for (std::size_t r : rows) restricted.push_back(binned[r]);
  return score(restricted, labels, spec.kind);
}

}  // namespace csfs
