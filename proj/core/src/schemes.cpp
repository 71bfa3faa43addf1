#include "csfs/schemes.hpp"

#include <cmath>

#include "csfs/error.hpp"

namespace csfs {

namespace {

constexpr double kNeutral = 0.5;

template <typename Artifact>
void require_same_axes(const Dataset& d, const Artifact& a) {
  if (a.classes != d.classes()) throw DataError("artifact classes do not match the dataset classes");
  if (a.features != d.feature_names()) {
    throw DataError("artifact features do not match the dataset features");
  }
}

template <typename T>
const T& expect(const SelectionArtifact& artifact, Topology t) {
  if (const T* a = std::get_if<T>(&artifact)) return *a;
  throw UsageError("topology '" + to_string(t) + "' requires a " + required_artifact(t));
}

std::vector<double> class_priors(const Dataset& d) {
  std::vector<double> priors(d.num_classes(), 0.0);
  for (ClassId c : d.labels()) priors[c] += 1.0;
  for (double& p : priors) p /= static_cast<double>(d.num_examples());
  return priors;
}

std::vector<std::size_t> all_rows(const Dataset& d) {
  std::vector<std::size_t> rows(d.num_examples());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return rows;
}

std::string not_class(const std::string& name) { return "!" + name; }

SchemeNode make_node(NodeRole role, ClassId p, ClassId q, FeatureSet features) {
  SchemeNode node;
  node.role = role;
  node.p = p;
  node.q = q;
  node.features = std::move(features);
  return node;
}

FeatureSet top_feature(std::span<const double> scores) {
  return {argmax_first(scores)};
}

void train_nodes(const Dataset& d, TrainedScheme& s, const ExecutionOptions& exec) {
  const auto rows = all_rows(d);
  parallel_for(s.nodes.size(), exec, [&](std::size_t i) {
    SchemeNode& node = s.nodes[i];
    if (node.empty()) return;
    switch (node.role) {
      case NodeRole::kMulticlass:
        node.model = train_node(d, rows, d.labels(), d.classes(), node.features, s.base);
        break;
      case NodeRole::kOneVsRest:
      case NodeRole::kDiagonal: {
        BinarizedView view(d, node.p);
        node.model = train_node(d, view.rows(), view.labels(),
                                {d.class_name(node.p), not_class(d.class_name(node.p))},
                                node.features, s.base);
        break;
      }
      case NodeRole::kPairwise:
      case NodeRole::kOffDiagonal: {
        PairView view(d, node.p, node.q);
        std::vector<ClassId> local(view.labels().size());
        for (std::size_t k = 0; k < local.size(); ++k) local[k] = view.labels()[k] == node.p ? 0 : 1;
        node.model = train_node(d, view.rows(), local,
                                {d.class_name(node.p), d.class_name(node.q)}, node.features,
                                s.base);
        break;
      }
    }
  });
}

// Under omit, every class must keep at least one non-empty input.
void require_inputs_per_class(const TrainedScheme& s) {
  if (s.empty_policy != EmptyNodePolicy::kOmit) return;
  std::vector<bool> fed(s.num_classes(), false);
  for (const auto& node : s.nodes) {
    if (node.empty()) continue;
    fed[node.p] = true;
    if (node.pairwise()) fed[node.q] = true;
  }
  for (std::size_t c = 0; c < fed.size(); ++c) {
    if (!fed[c]) {
      throw DataError("class '" + s.classes[c] +
                      "' has no non-empty node under the omit policy");
    }
  }
}

Prediction decide(const TrainedScheme& s, std::vector<double> scores) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best] || (scores[c] == scores[best] && s.priors[c] > s.priors[best])) {
      best = c;
    }
  }
  return {static_cast<ClassId>(best), std::move(scores)};
}

void require_finite_row(const TrainedScheme& s, std::span<const double> row) {
  if (row.size() != s.features.size()) {
    throw DataError("scheme expects " + std::to_string(s.features.size()) + " features, got " +
                    std::to_string(row.size()));
  }
  for (double v : row) {
    if (!std::isfinite(v)) throw DataError("non-finite value in prediction input");
  }
}

}  // namespace

std::string to_string(Topology t) {
  switch (t) {
    case Topology::kTraditional: return "traditional";
    case Topology::kOneLayerOvA: return "one-layer";
    case Topology::kTwoLayerDOvE: return "two-layer";
    case Topology::kThreeLayer: return "three-layer";
  }
  return "?";
}

Topology parse_topology(const std::string& name) {
  if (name == "traditional") return Topology::kTraditional;
  if (name == "one-layer" || name == "one-layer-ova") return Topology::kOneLayerOvA;
  if (name == "two-layer" || name == "two-layer-dove") return Topology::kTwoLayerDOvE;
  if (name == "three-layer") return Topology::kThreeLayer;
  throw UsageError("unknown topology '" + name +
                   "' (expected traditional|one-layer|two-layer|three-layer)");
}

std::string to_string(EmptyNodePolicy p) { return p == EmptyNodePolicy::kNeutral ? "neutral" : "omit"; }

EmptyNodePolicy parse_empty_policy(const std::string& name) {
  if (name == "neutral") return EmptyNodePolicy::kNeutral;
  if (name == "omit") return EmptyNodePolicy::kOmit;
  throw UsageError("unknown empty-node policy '" + name + "' (expected neutral|omit)");
}

std::string to_string(NodeRole r) {
  switch (r) {
    case NodeRole::kMulticlass: return "multiclass";
    case NodeRole::kOneVsRest: return "one-vs-rest";
    case NodeRole::kPairwise: return "pairwise";
    case NodeRole::kDiagonal: return "diagonal";
    case NodeRole::kOffDiagonal: return "off-diagonal";
  }
  return "?";
}

NodeRole parse_node_role(const std::string& name) {
  if (name == "multiclass") return NodeRole::kMulticlass;
  if (name == "one-vs-rest") return NodeRole::kOneVsRest;
  if (name == "pairwise") return NodeRole::kPairwise;
  if (name == "diagonal") return NodeRole::kDiagonal;
  if (name == "off-diagonal") return NodeRole::kOffDiagonal;
  throw DataError("unknown node role '" + name + "'");
}

const char* required_artifact(Topology t) {
  switch (t) {
    case Topology::kTraditional: return "global ranking";
    case Topology::kOneLayerOvA: return "class-specific ranking";
    case Topology::kTwoLayerDOvE: return "pairwise relevance table";
    case Topology::kThreeLayer: return "class-specific relevance matrix";
  }
  return "?";
}

void validate(const SchemeSpec& spec) {
  validate(spec.threshold);
  validate(spec.base);
  if (!(spec.diag_weight > 0.0) || !std::isfinite(spec.diag_weight)) {
    throw UsageError("diag weight must be a positive finite number");
  }
}

TrainedScheme build_scheme(const Dataset& d, const SchemeSpec& spec,
                           const SelectionArtifact& artifact, const ExecutionOptions& exec) {
  validate(spec);
  d.require_multiclass();
  const std::size_t L = d.num_classes();

  TrainedScheme s;
  s.topology = spec.topology;
  s.classes = d.classes();
  s.features = d.feature_names();
  s.priors = class_priors(d);
  s.tau = spec.threshold.tau;
  s.base = spec.base;
  s.empty_policy = spec.empty_policy;
  s.diag_weight = spec.diag_weight;

  switch (spec.topology) {
    case Topology::kTraditional: {
      const auto& ranking = expect<GlobalRanking>(artifact, spec.topology);
      require_same_axes(d, ranking);
      SchemeNode node = make_node(NodeRole::kMulticlass, 0, 0, relevant_features(ranking, spec.threshold));
      if (node.features.empty()) {
        node.features = top_feature(ranking.scores);
        node.fallback = true;
        s.warnings.push_back("no globally relevant feature; falling back to '" +
                             d.feature_names()[node.features[0]] + "'");
      }
      s.nodes.push_back(std::move(node));
      break;
    }
    case Topology::kOneLayerOvA: {
      const auto& ranking = expect<ClassSpecificRanking>(artifact, spec.topology);
      require_same_axes(d, ranking);
      const auto sets = relevant_features(ranking, spec.threshold);
      for (ClassId p = 0; p < L; ++p) {
        SchemeNode node = make_node(NodeRole::kOneVsRest, p, p, sets[p]);
        if (node.features.empty()) {
          node.features = top_feature(ranking.scores[p]);
          node.fallback = true;
          s.warnings.push_back("class '" + d.class_name(p) + "' has no relevant feature; falling back to '" +
                               d.feature_names()[node.features[0]] + "'");
        }
        s.nodes.push_back(std::move(node));
      }
      break;
    }
    case Topology::kTwoLayerDOvE: {
      const auto& table = expect<PairwiseRelevanceTable>(artifact, spec.topology);
      require_same_axes(d, table);
      for (auto [p, q] : table.pairs) {
        SchemeNode node = make_node(NodeRole::kPairwise, p, q, {});
        const auto& row = table.scores[table.pair_index(p, q)];
        for (std::size_t j = 0; j < row.size(); ++j) {
          if (spec.threshold.relevant(row[j])) node.features.push_back(j);
        }
        s.nodes.push_back(std::move(node));
      }
      break;
    }
    case Topology::kThreeLayer: {
      const auto& matrix = expect<ClassSpecificRelevanceMatrix>(artifact, spec.topology);
      require_same_axes(d, matrix);
      for (ClassId p = 0; p < L; ++p) {
        s.nodes.push_back(make_node(NodeRole::kDiagonal, p, p, matrix.diagonal[p]));
      }
      for (const auto& cell : matrix.offdiag) {
        s.nodes.push_back(make_node(NodeRole::kOffDiagonal, cell.p, cell.q, cell.features));
      }
      break;
    }
  }

  for (const auto& node : s.nodes) {
    if (!node.empty()) continue;
    std::string where = "'" + d.class_name(node.p) + "'";
    if (node.pairwise()) where = "('" + d.class_name(node.p) + "','" + d.class_name(node.q) + "')";
    s.warnings.push_back(to_string(node.role) + " node " + where + " has an empty feature set (" +
                         to_string(spec.empty_policy) + ")");
  }
  require_inputs_per_class(s);
  train_nodes(d, s, exec);
  return s;
}

std::vector<double> node_outputs(const TrainedScheme& s, std::span<const double> row) {
  if (s.topology == Topology::kTraditional) {
    throw UsageError("node outputs are defined for layered topologies only");
  }
  require_finite_row(s, row);
  std::vector<double> out(s.nodes.size(), kNeutral);
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const auto& node = s.nodes[i];
    if (node.empty()) continue;
    if (!node.model) throw DataError("scheme node has not been trained");
    out[i] = node.model->predict_row(row)[0];
  }
  return out;
}

Prediction combine(const TrainedScheme& s, std::span<const double> outputs) {
  if (s.topology == Topology::kTraditional) {
    throw UsageError("combine is defined for layered topologies only");
  }
  if (outputs.size() != s.nodes.size()) throw DataError("one output per node is required");
  const std::size_t L = s.num_classes();
  std::vector<double> total(L, 0.0);
  std::vector<double> weight(L, 0.0);
  const bool omit = s.empty_policy == EmptyNodePolicy::kOmit;

  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const auto& node = s.nodes[i];
    if (node.empty() && omit) continue;
    const double out = node.empty() ? kNeutral : outputs[i];
    if (node.pairwise()) {
      total[node.p] += out;
      weight[node.p] += 1.0;
      total[node.q] += 1.0 - out;
      weight[node.q] += 1.0;
    } else {
      const double w = node.role == NodeRole::kDiagonal ? s.diag_weight : 1.0;
      total[node.p] += w * out;
      weight[node.p] += w;
    }
  }

  std::vector<double> scores(L, kNeutral);
  for (std::size_t c = 0; c < L; ++c) {
    if (weight[c] > 0.0) scores[c] = total[c] / weight[c];
  }
  return decide(s, std::move(scores));
}

Prediction predict(const TrainedScheme& s, std::span<const double> row) {
  if (s.topology == Topology::kTraditional) {
    require_finite_row(s, row);
    const auto& node = s.nodes.at(0);
    if (!node.model) throw DataError("scheme node has not been trained");
    return decide(s, node.model->predict_row(row));
  }
  return combine(s, node_outputs(s, row));
}

}  // namespace csfs
