#include "csfs/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csfs/error.hpp"

namespace csfs {

namespace {

std::vector<double> softmax(std::vector<double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& v : logits) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : logits) v /= total;
  return logits;
}

}  // namespace

std::string to_string(BaseKind kind) {
  return kind == BaseKind::kGaussianNaiveBayes ? "gnb" : "centroid";
}

BaseKind parse_base_kind(const std::string& name) {
  if (name == "gnb") return BaseKind::kGaussianNaiveBayes;
  if (name == "centroid") return BaseKind::kNearestCentroid;
  throw UsageError("unknown base classifier '" + name + "' (expected gnb|centroid)");
}

void validate(const BaseClassifierSpec& spec) {
  if (!(spec.smoothing > 0.0)) throw UsageError("smoothing must be positive");
  if (!(spec.temperature > 0.0)) throw UsageError("temperature must be positive");
}

std::size_t argmax_first(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

TrainedNode train_node(const Dataset& d, std::span<const std::size_t> examples,
                       std::span<const ClassId> local_labels, std::vector<std::string> class_names,
                       const FeatureSet& features, const BaseClassifierSpec& spec) {
  validate(spec);
  if (features.empty()) throw DataError("cannot train a node on an empty feature subset");
  if (examples.size() != local_labels.size()) throw DataError("examples and labels differ in length");
  const std::size_t k = class_names.size();
  const std::size_t f = features.size();
  if (k < 2) throw DataError("a node needs at least two classes");

  std::vector<std::size_t> counts(k, 0);
  for (ClassId c : local_labels) {
    if (c >= k) throw DataError("node-local label out of range");
    ++counts[c];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) throw DataError("node class '" + class_names[c] + "' has no training examples");
  }

  TrainedNode node;
  node.kind = spec.kind;
  node.features = features;
  node.class_names = std::move(class_names);
  node.temperature = spec.temperature;
  node.priors.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    node.priors[c] = static_cast<double>(counts[c]) / static_cast<double>(examples.size());
  }

  node.means.assign(k, std::vector<double>(f, 0.0));
  for (std::size_t i = 0; i < examples.size(); ++i) {
    for (std::size_t j = 0; j < f; ++j) node.means[local_labels[i]][j] += d.value(examples[i], features[j]);
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (double& v : node.means[c]) v /= static_cast<double>(counts[c]);
  }
  if (spec.kind == BaseKind::kNearestCentroid) return node;

  node.variances.assign(k, std::vector<double>(f, 0.0));
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const ClassId c = local_labels[i];
    for (std::size_t j = 0; j < f; ++j) {
      const double dev = d.value(examples[i], features[j]) - node.means[c][j];
      node.variances[c][j] += dev * dev;
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (double& v : node.variances[c]) v /= static_cast<double>(counts[c]);
  }

  // Floor relative to the widest feature across all of the node's examples.
  double widest = 0.0;
  for (std::size_t j = 0; j < f; ++j) {
    double mean = 0.0;
    for (std::size_t r : examples) mean += d.value(r, features[j]);
    mean /= static_cast<double>(examples.size());
    double var = 0.0;
    for (std::size_t r : examples) {
      const double dev = d.value(r, features[j]) - mean;
      var += dev * dev;
    }
    widest = std::max(widest, var / static_cast<double>(examples.size()));
  }
  const double floor = widest > 0.0 ? spec.smoothing * widest : spec.smoothing;
  for (auto& per_class : node.variances) {
    for (double& v : per_class) v = std::max(v, floor);
  }
  return node;
}

std::vector<double> TrainedNode::predict_scores(std::span<const double> x) const {
  if (x.size() != features.size()) {
    throw DataError("node expects " + std::to_string(features.size()) + " features, got " +
                    std::to_string(x.size()));
  }
  const std::size_t k = class_names.size();
  std::vector<double> logits(k, 0.0);
  if (kind == BaseKind::kNearestCentroid) {
    for (std::size_t c = 0; c < k; ++c) {
      double sq = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double dev = x[j] - means[c][j];
        sq += dev * dev;
      }
      logits[c] = -std::sqrt(sq) / temperature;
    }
    return softmax(std::move(logits));
  }
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (std::size_t c = 0; c < k; ++c) {
    double ll = std::log(priors[c]);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double var = variances[c][j];
      const double dev = x[j] - means[c][j];
      ll += -0.5 * std::log(kTwoPi * var) - dev * dev / (2.0 * var);
    }
    logits[c] = ll;
  }
  return softmax(std::move(logits));
}

std::vector<double> TrainedNode::predict_row(std::span<const double> row) const {
  std::vector<double> x;
  x.reserve(features.size());
  for (std::size_t j : features) {
    if (j >= row.size()) throw DataError("feature index outside the input row");
    x.push_back(row[j]);
  }
  return predict_scores(x);
}

}  // namespace csfs
