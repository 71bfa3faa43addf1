#pragma once

#include <span>
#include <string>
#include <vector>

#include "csfs/dataset.hpp"
#include "csfs/selection.hpp"

namespace csfs {

enum class BaseKind { kGaussianNaiveBayes, kNearestCentroid };

std::string to_string(BaseKind kind);
BaseKind parse_base_kind(const std::string& name);  // gnb|centroid

struct BaseClassifierSpec {
  BaseKind kind = BaseKind::kGaussianNaiveBayes;
  // GNB variance floor, relative to the largest feature variance in the
  // node's training data (absolute when every feature is constant).
  double smoothing = 1e-9;
  // Softmax temperature applied to negative centroid distances.
  double temperature = 1.0;
};

void validate(const BaseClassifierSpec& spec);

// A fitted classifier over a fixed feature subset and a small local class set
// (two classes for one-vs-rest and pairwise nodes, L for the traditional
// node). Immutable once trained.
struct TrainedNode {
  BaseKind kind = BaseKind::kGaussianNaiveBayes;
  FeatureSet features;                       // indices into the full feature vector
  std::vector<std::string> class_names;      // local classes, in order
  std::vector<double> priors;                // local label frequencies
  std::vector<std::vector<double>> means;    // [class][feature]; centroids for nearest-centroid
  std::vector<std::vector<double>> variances;  // [class][feature]; GNB only
  double temperature = 1.0;

  std::size_t num_classes() const { return class_names.size(); }

  // Probability distribution over the local classes. `x` holds only the
  // node's features, in `features` order.
  std::vector<double> predict_scores(std::span<const double> x) const;
  // Same, reading the node's features out of a full m-length row.
  std::vector<double> predict_row(std::span<const double> row) const;

  bool operator==(const TrainedNode&) const = default;
};

// Fits a node on `examples` of `d` with node-local labels in
// [0, class_names.size()). Throws DataError when a local class has no
// example or the feature subset is empty.
TrainedNode train_node(const Dataset& d, std::span<const std::size_t> examples,
                       std::span<const ClassId> local_labels, std::vector<std::string> class_names,
                       const FeatureSet& features, const BaseClassifierSpec& spec);

// Index of the largest entry; ties go to the lowest index.
std::size_t argmax_first(std::span<const double> scores);

}  // namespace csfs
