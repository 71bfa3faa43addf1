#include "csfs/synth.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "csfs/error.hpp"

namespace csfs {

namespace {

void check_shape(std::size_t n, std::size_t classes) {
  if (classes < 2) throw UsageError("synthetic data needs at least 2 classes");
  if (n < classes) throw UsageError("synthetic data needs at least one example per class");
}

std::vector<std::string> example_ids(std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back("e" + std::to_string(i + 1));
  return ids;
}

std::vector<ClassId> round_robin(std::size_t n, std::size_t classes) {
  std::vector<ClassId> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<ClassId>(i % classes);
  return labels;
}

std::vector<std::string> class_names(std::size_t classes) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < classes; ++c) names.push_back(synth_class_name(c));
  return names;
}

}  // namespace

std::string synth_class_name(std::size_t index) {
  if (index < 26) return std::string(1, static_cast<char>('A' + index));
  return "C" + std::to_string(index + 1);
}

Dataset synth_planted(const PlantedSpec& spec) {
  check_shape(spec.n, spec.classes);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<std::string> features = {"specific_A", "global"};
  for (std::size_t k = 0; k < spec.noise; ++k) features.push_back("noise" + std::to_string(k + 1));
  const std::size_t m = features.size();

  const auto labels = round_robin(spec.n, spec.classes);
  std::vector<double> values(spec.n * m);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const ClassId c = labels[i];
    double* row = values.data() + i * m;
    row[0] = noise(rng) + (c == 0 ? spec.shift : 0.0);
    row[1] = noise(rng) + spec.spacing * static_cast<double>(c);
    for (std::size_t k = 0; k < spec.noise; ++k) row[2 + k] = noise(rng);
  }
  return Dataset(example_ids(spec.n), std::move(features), std::move(values), labels,
                 class_names(spec.classes));
}

Dataset synth_blobs(const BlobSpec& spec) {
  check_shape(spec.n, spec.classes);
  if (spec.features == 0) throw UsageError("blobs need at least one feature");
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<std::vector<double>> centers(spec.features, std::vector<double>(spec.classes));
  for (auto& center : centers) {
    std::vector<std::size_t> perm(spec.classes);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t c = 0; c < spec.classes; ++c) {
      center[c] = spec.separation * static_cast<double>(perm[c]);
    }
  }

  std::vector<std::string> features;
  for (std::size_t j = 0; j < spec.features; ++j) features.push_back("f" + std::to_string(j + 1));
  const auto labels = round_robin(spec.n, spec.classes);
  std::vector<double> values(spec.n * spec.features);
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = 0; j < spec.features; ++j) {
      values[i * spec.features + j] = centers[j][labels[i]] + noise(rng);
    }
  }
  return Dataset(example_ids(spec.n), std::move(features), std::move(values), labels,
                 class_names(spec.classes));
}

Dataset synth_noise(const NoiseSpec& spec) {
  check_shape(spec.n, spec.classes);
  if (spec.features == 0) throw UsageError("noise data needs at least one feature");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<std::string> features;
  for (std::size_t j = 0; j < spec.features; ++j) features.push_back("f" + std::to_string(j + 1));
  auto labels = round_robin(spec.n, spec.classes);
  std::shuffle(labels.begin(), labels.end(), rng);
  // First occurrence order must be A, B, ... so class ids match the names.
  std::vector<ClassId> remap(spec.classes, 0);
  std::vector<bool> seen(spec.classes, false);
  ClassId next = 0;
  for (ClassId& c : labels) {
    if (!seen[c]) {
      seen[c] = true;
      remap[c] = next++;
    }
    c = remap[c];
  }
  std::vector<double> values(spec.n * spec.features);
  for (double& v : values) v = uniform(rng);
  return Dataset(example_ids(spec.n), std::move(features), std::move(values), labels,
                 class_names(spec.classes));
}

}  // namespace csfs
