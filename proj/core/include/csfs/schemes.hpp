#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "csfs/classifiers.hpp"
#include "csfs/dataset.hpp"
#include "csfs/parallel.hpp"
#include "csfs/relevance_matrix.hpp"
#include "csfs/selection.hpp"

namespace csfs {

enum class Topology { kTraditional, kOneLayerOvA, kTwoLayerDOvE, kThreeLayer };

std::string to_string(Topology t);
Topology parse_topology(const std::string& name);  // traditional|one-layer|two-layer|three-layer

// What happens to a discriminative node whose feature set is empty.
enum class EmptyNodePolicy {
  kNeutral,  // node stays and always outputs 0.5
  kOmit,     // node is left out of its classes' averages
};

std::string to_string(EmptyNodePolicy p);
EmptyNodePolicy parse_empty_policy(const std::string& name);  // neutral|omit

struct SchemeSpec {
  Topology topology = Topology::kThreeLayer;
  RelevanceThreshold threshold;
  BaseClassifierSpec base;
  EmptyNodePolicy empty_policy = EmptyNodePolicy::kNeutral;
  // Weight of the diagonal node relative to each pairwise node when a
  // three-layer scheme integrates a class's inputs.
  double diag_weight = 1.0;
};

void validate(const SchemeSpec& spec);

using SelectionArtifact = std::variant<GlobalRanking, ClassSpecificRanking, PairwiseRelevanceTable,
                                       ClassSpecificRelevanceMatrix>;

// Artifact each topology is built from.
const char* required_artifact(Topology t);

enum class NodeRole {
  kMulticlass,   // traditional: all classes at once
  kOneVsRest,    // one-layer: class p against the rest
  kPairwise,     // two-layer: class p against class q
  kDiagonal,     // three-layer first layer: class p against the rest on diag(p)
  kOffDiagonal,  // three-layer second layer: p against q on M(p,q)
};

std::string to_string(NodeRole r);
NodeRole parse_node_role(const std::string& name);

struct SchemeNode {
  NodeRole role = NodeRole::kMulticlass;
  ClassId p = 0;
  ClassId q = 0;  // meaningful for pairwise roles only
  FeatureSet features;
  bool fallback = false;  // features came from the top-score fallback
  std::optional<TrainedNode> model;

  bool empty() const { return features.empty(); }
  bool pairwise() const { return role == NodeRole::kPairwise || role == NodeRole::kOffDiagonal; }
};

struct TrainedScheme {
  Topology topology = Topology::kThreeLayer;
  std::vector<std::string> classes;
  std::vector<std::string> features;
  std::vector<double> priors;  // training class frequencies, for tie-breaks
  double tau = 0.5;
  BaseClassifierSpec base;
  EmptyNodePolicy empty_policy = EmptyNodePolicy::kNeutral;
  double diag_weight = 1.0;
  std::vector<SchemeNode> nodes;
  std::vector<std::string> warnings;

  std::size_t num_classes() const { return classes.size(); }
  // Discriminative nodes, including empty ones; aggregation units excluded.
  std::size_t count_nodes() const { return nodes.size(); }
  // Per-class units that read node outputs (0 for the traditional scheme).
  std::size_t count_aggregation_units() const {
    return topology == Topology::kTraditional ? 0 : classes.size();
  }
};

TrainedScheme build_scheme(const Dataset& d, const SchemeSpec& spec,
                           const SelectionArtifact& artifact, const ExecutionOptions& exec = {});

struct Prediction {
  ClassId label = 0;
  std::vector<double> scores;  // one per class, class order
};

// Each node's probability for its first local class (p, or POS). Empty
// nodes report the neutral 0.5. Not defined for the traditional topology.
std::vector<double> node_outputs(const TrainedScheme& s, std::span<const double> row);

// Integrates node outputs into per-class scores and a decision:
//   one-layer   score(p) = out(node p)
//   two-layer   score(p) = mean over q != p of P_(p,q)(p)
//   three-layer score(p) = (w s_diag(p) + sum_q P_(p,q)(p)) / (w + L - 1)
// Empty nodes count as 0.5 under the neutral policy and drop out of the
// average under omit. Ties go to the larger training prior, then class order.
Prediction combine(const TrainedScheme& s, std::span<const double> outputs);

Prediction predict(const TrainedScheme& s, std::span<const double> row);

}  // namespace csfs
