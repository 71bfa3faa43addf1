#include "csfs/io.hpp"

#include <algorithm>
#include <fstream>
#include <system_error>
#include <unistd.h>

#include "csfs/error.hpp"
#include "csfs/format.hpp"
#include "json.hpp"

namespace csfs {

using Json = nlohmann::ordered_json;

namespace {

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json names(const FeatureSet& set, const std::vector<std::string>& features) {
  Json out = Json::array();
  for (std::size_t j : set) out.push_back(features.at(j));
  return out;
}

Json pair_names(ClassId p, ClassId q, const std::vector<std::string>& classes) {
  return Json::array({classes.at(p), classes.at(q)});
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DataError(std::string("missing key '") + key + "'");
  return j.at(key);
}

std::vector<std::string> string_list(const Json& j, const char* what) {
  if (!j.is_array()) throw DataError(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw DataError(std::string(what) + " must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<double> number_list(const Json& j, const char* what) {
  if (!j.is_array()) throw DataError(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw DataError(std::string(what) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::vector<double>> score_rows(const Json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) {
    throw DataError("scores must hold " + std::to_string(rows) + " rows");
  }
  std::vector<std::vector<double>> out;
  for (const auto& row : j) {
    auto values = number_list(row, "score row");
    if (values.size() != cols) throw DataError("score row length does not match feature count");
    for (double v : values) {
      if (!(v >= 0.0 && v <= 1.0)) throw DataError("scores must lie in [0,1]");
    }
    out.push_back(std::move(values));
  }
  return out;
}

std::size_t index_of(const std::vector<std::string>& list, const std::string& name, const char* what) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i] == name) return i;
  }
  throw DataError(std::string("unknown ") + what + " '" + name + "'");
}

FeatureSet feature_set(const Json& j, const std::vector<std::string>& features) {
  FeatureSet out;
  for (const auto& name : string_list(j, "feature set")) out.push_back(index_of(features, name, "feature"));
  std::sort(out.begin(), out.end());
  return out;
}

Json base_ranking(const std::vector<std::string>& classes, const std::vector<std::string>& features,
                  const std::string& strategy) {
  Json j;
  j["classes"] = classes;
  j["features"] = features;
  j["strategy"] = strategy;
  return j;
}

Json node_params(const TrainedNode& n) {
  Json j;
  j["kind"] = to_string(n.kind);
  j["classes"] = n.class_names;
  j["priors"] = n.priors;
  j["means"] = n.means;
  if (n.kind == BaseKind::kGaussianNaiveBayes) {
    j["variances"] = n.variances;
  } else {
    j["temperature"] = n.temperature;
  }
  return j;
}

TrainedNode parse_node_params(const Json& j, const FeatureSet& features) {
  TrainedNode n;
  n.kind = parse_base_kind(field(j, "kind").get<std::string>());
  n.features = features;
  n.class_names = string_list(field(j, "classes"), "node classes");
  n.priors = number_list(field(j, "priors"), "node priors");
  const std::size_t k = n.class_names.size();
  if (k < 2 || n.priors.size() != k) throw DataError("node class/prior mismatch");
  auto matrix = [&](const char* key) {
    const Json& rows = field(j, key);
    if (!rows.is_array() || rows.size() != k) throw DataError(std::string("node ") + key + " shape");
    std::vector<std::vector<double>> out;
    for (const auto& r : rows) {
      auto v = number_list(r, key);
      if (v.size() != features.size()) throw DataError(std::string("node ") + key + " width");
      out.push_back(std::move(v));
    }
    return out;
  };
  n.means = matrix("means");
  if (n.kind == BaseKind::kGaussianNaiveBayes) {
    n.variances = matrix("variances");
    for (const auto& row : n.variances) {
      for (double v : row) {
        if (!(v > 0.0)) throw DataError("node variances must be positive");
      }
    }
  } else {
    n.temperature = field(j, "temperature").get<double>();
    if (!(n.temperature > 0.0)) throw DataError("node temperature must be positive");
  }
  return n;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed document: ") + e.what());
  } catch (const UsageError& e) {
    // Unknown enum names inside a document are data problems, not usage.
    throw DataError(std::string("malformed document: ") + e.what());
  }
}

PairwiseRelevanceTable table_from(const Json& j) {
  PairwiseRelevanceTable t;
  t.classes = string_list(field(j, "classes"), "classes");
  t.features = string_list(field(j, "features"), "features");
  const std::size_t L = t.classes.size();
  if (L < 2) throw DataError("pairwise table needs at least 2 classes");
  t.pairs = class_pairs(L);
  const Json& pairs = field(j, "pairs");
  if (!pairs.is_array() || pairs.size() != t.pairs.size()) {
    throw DataError("pairs must list all " + std::to_string(t.pairs.size()) + " class pairs");
  }
  const auto rows = score_rows(field(j, "scores"), t.pairs.size(), t.features.size());
  t.scores.assign(t.pairs.size(), {});
  std::vector<bool> filled(t.pairs.size(), false);
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto pq = string_list(pairs[r], "pair");
    if (pq.size() != 2) throw DataError("each pair must name two classes");
    const auto p = static_cast<ClassId>(index_of(t.classes, pq[0], "class"));
    const auto q = static_cast<ClassId>(index_of(t.classes, pq[1], "class"));
    const std::size_t slot = t.pair_index(p, q);
    if (filled[slot]) throw DataError("pair listed twice");
    filled[slot] = true;
    t.scores[slot] = rows[r];
  }
  return t;
}

ClassSpecificRelevanceMatrix matrix_from(const Json& j) {
  ClassSpecificRelevanceMatrix m;
  m.classes = string_list(field(j, "classes"), "classes");
  m.features = string_list(field(j, "features"), "features");
  m.tau = field(j, "tau").get<double>();
  const std::size_t L = m.classes.size();
  if (L < 2) throw DataError("relevance matrix needs at least 2 classes");
  const Json& diag = field(j, "diagonal");
  m.diagonal.resize(L);
  for (std::size_t c = 0; c < L; ++c) m.diagonal[c] = feature_set(field(diag, m.classes[c].c_str()), m.features);
  const Json& off = field(j, "offdiag");
  const auto pairs = class_pairs(L);
  if (!off.is_array() || off.size() != pairs.size()) {
    throw DataError("offdiag must list all " + std::to_string(pairs.size()) + " class pairs");
  }
  std::vector<FeatureSet> cells(pairs.size());
  std::vector<bool> filled(pairs.size(), false);
  for (const auto& cell : off) {
    const auto pq = string_list(field(cell, "pair"), "pair");
    if (pq.size() != 2) throw DataError("each pair must name two classes");
    auto p = static_cast<ClassId>(index_of(m.classes, pq[0], "class"));
    auto q = static_cast<ClassId>(index_of(m.classes, pq[1], "class"));
    if (p == q) throw DataError("offdiag pair repeats a class");
    if (p > q) std::swap(p, q);
    const std::size_t slot = static_cast<std::size_t>(
        std::find(pairs.begin(), pairs.end(), std::make_pair(p, q)) - pairs.begin());
    if (filled[slot]) throw DataError("offdiag pair listed twice");
    filled[slot] = true;
    cells[slot] = feature_set(field(cell, "features"), m.features);
  }
  for (std::size_t s = 0; s < pairs.size(); ++s) {
    m.offdiag.push_back({pairs[s].first, pairs[s].second, std::move(cells[s])});
  }
  return m;
}

SelectionArtifact artifact_from(const Json& j) {
  if (j.contains("diagonal")) return matrix_from(j);
  if (j.contains("pairs")) return table_from(j);
  const auto strategy = parse_strategy(field(j, "strategy").get<std::string>());
  auto classes = string_list(field(j, "classes"), "classes");
  auto features = string_list(field(j, "features"), "features");
  if (strategy == Strategy::kGlobal) {
    auto rows = score_rows(field(j, "scores"), 1, features.size());
    return GlobalRanking{std::move(classes), std::move(features), std::move(rows[0])};
  }
  if (strategy == Strategy::kDOvE) throw DataError("dove output must carry \"pairs\"");
  auto rows = score_rows(field(j, "scores"), classes.size(), features.size());
  return ClassSpecificRanking{std::move(classes), std::move(features), strategy, std::move(rows)};
}

std::string csv_header(const char* lead, const std::vector<std::string>& features) {
  std::string out = lead;
  for (const auto& f : features) {
    out += ',';
    out += csv_field(f);
  }
  out += '\n';
  return out;
}

void append_row(std::string& out, const std::vector<double>& row) {
  for (double v : row) {
    out += ',';
    out += format_double(v);
  }
  out += '\n';
}

std::string joined(const FeatureSet& set, const std::vector<std::string>& features) {
  std::string out;
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (k) out += ';';
    out += features[set[k]];
  }
  return out;
}

}  // namespace

std::string to_json(const GlobalRanking& r, const RankingJsonOptions& opt) {
  Json j = base_ranking(r.classes, r.features, "global");
  if (opt.collapsed_from) j["collapsed_from"] = to_string(*opt.collapsed_from);
  if (opt.aggregate) j["aggregate"] = to_string(*opt.aggregate);
  j["scores"] = Json::array({r.scores});
  return dump(j);
}

std::string to_json(const ClassSpecificRanking& r, const RankingJsonOptions& opt) {
  Json j = base_ranking(r.classes, r.features, to_string(r.strategy));
  if (opt.aggregate) j["aggregate"] = to_string(*opt.aggregate);
  j["scores"] = r.scores;
  return dump(j);
}

std::string to_json(const PairwiseRelevanceTable& t) {
  Json j = base_ranking(t.classes, t.features, "dove");
  Json pairs = Json::array();
  for (auto [p, q] : t.pairs) pairs.push_back(pair_names(p, q, t.classes));
  j["pairs"] = std::move(pairs);
  j["scores"] = t.scores;
  return dump(j);
}

std::string to_json(const ClassSpecificRelevanceMatrix& m) {
  Json j;
  j["classes"] = m.classes;
  j["features"] = m.features;
  j["tau"] = m.tau;
  Json diag = Json::object();
  for (std::size_t c = 0; c < m.classes.size(); ++c) diag[m.classes[c]] = names(m.diagonal[c], m.features);
  j["diagonal"] = std::move(diag);
  Json off = Json::array();
  for (const auto& cell : m.offdiag) {
    Json entry;
    entry["pair"] = pair_names(cell.p, cell.q, m.classes);
    entry["features"] = names(cell.features, m.features);
    off.push_back(std::move(entry));
  }
  j["offdiag"] = std::move(off);
  return dump(j);
}

std::string to_json(const SelectionArtifact& a) {
  return std::visit([](const auto& v) { return to_json(v); }, a);
}

std::string to_json(const TrainedScheme& s) {
  Json j;
  j["format"] = "csfs-scheme";
  j["version"] = 1;
  j["topology"] = to_string(s.topology);
  j["classes"] = s.classes;
  j["features"] = s.features;
  j["priors"] = s.priors;
  j["tau"] = s.tau;
  Json base;
  base["kind"] = to_string(s.base.kind);
  base["smoothing"] = s.base.smoothing;
  base["temperature"] = s.base.temperature;
  j["base"] = std::move(base);
  Json agg;
  agg["empty_policy"] = to_string(s.empty_policy);
  agg["diag_weight"] = s.diag_weight;
  agg["units"] = s.count_aggregation_units();
  j["aggregation"] = std::move(agg);
  Json nodes = Json::array();
  for (const auto& n : s.nodes) {
    Json node;
    node["role"] = to_string(n.role);
    node["classes"] = n.pairwise() ? pair_names(n.p, n.q, s.classes)
                      : n.role == NodeRole::kMulticlass ? Json(s.classes)
                                                        : Json::array({s.classes.at(n.p)});
    node["features"] = names(n.features, s.features);
    node["empty"] = n.empty();
    node["fallback"] = n.fallback;
    node["params"] = n.model ? node_params(*n.model) : Json(nullptr);
    nodes.push_back(std::move(node));
  }
  j["nodes"] = std::move(nodes);
  j["warnings"] = s.warnings;
  return dump(j);
}

std::string to_json(const EvaluationReport& r, bool include_timing) {
  Json j;
  j["topology"] = to_string(r.topology);
  j["strategy"] = to_string(r.strategy);
  j["k"] = r.k;
  j["seed"] = r.seed;
  j["classes"] = r.classes;
  j["accuracy"] = r.accuracy;
  Json recall = Json::object();
  for (std::size_t c = 0; c < r.classes.size(); ++c) recall[r.classes[c]] = r.recall[c];
  j["recall"] = std::move(recall);
  j["confusion"] = r.confusion;
  j["folds"] = r.folds;
  Json folds = Json::array();
  for (const auto& f : r.per_fold) {
    Json fold;
    fold["fold"] = f.fold;
    fold["train_size"] = f.train_size;
    fold["test_size"] = f.test_size;
    fold["accuracy"] = f.test_size == 0 ? 0.0
                                        : static_cast<double>(f.correct) / static_cast<double>(f.test_size);
    fold["measure_calls"] = f.instrumentation.measure_calls;
    fold["examples_touched"] = f.instrumentation.examples_touched;
    if (include_timing) fold["wall_seconds"] = f.instrumentation.wall_seconds;
    fold["warnings"] = f.warnings;
    folds.push_back(std::move(fold));
  }
  j["per_fold"] = std::move(folds);
  Json inst;
  inst["measure_calls"] = r.instrumentation.measure_calls;
  inst["examples_touched"] = r.instrumentation.examples_touched;
  if (include_timing) inst["wall_seconds"] = r.instrumentation.wall_seconds;
  j["instrumentation"] = std::move(inst);
  return dump(j);
}

std::string to_csv(const GlobalRanking& r) {
  std::string out = csv_header("class", r.features);
  out += "global";
  append_row(out, r.scores);
  return out;
}

std::string to_csv(const ClassSpecificRanking& r) {
  std::string out = csv_header("class", r.features);
  for (std::size_t c = 0; c < r.scores.size(); ++c) {
    out += csv_field(r.classes[c]);
    append_row(out, r.scores[c]);
  }
  return out;
}

std::string to_csv(const PairwiseRelevanceTable& t) {
  std::string out = csv_header("class_p,class_q", t.features);
  for (std::size_t r = 0; r < t.pairs.size(); ++r) {
    out += csv_field(t.classes[t.pairs[r].first]) + "," + csv_field(t.classes[t.pairs[r].second]);
    append_row(out, t.scores[r]);
  }
  return out;
}

std::string to_csv(const ClassSpecificRelevanceMatrix& m) {
  std::string out = "class_p,class_q,features\n";
  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    out += csv_field(m.classes[c]) + "," + csv_field(m.classes[c]) + "," +
           csv_field(joined(m.diagonal[c], m.features)) + "\n";
  }
  for (const auto& cell : m.offdiag) {
    out += csv_field(m.classes[cell.p]) + "," + csv_field(m.classes[cell.q]) + "," +
           csv_field(joined(cell.features, m.features)) + "\n";
  }
  return out;
}

std::string to_csv(const SelectionArtifact& a) {
  return std::visit([](const auto& v) { return to_csv(v); }, a);
}

SelectionArtifact parse_artifact(const std::string& json) {
  const Json j = parse_json(json);
  return guarded([&] { return artifact_from(j); });
}

PairwiseRelevanceTable parse_pairwise_table(const std::string& json) {
  auto artifact = parse_artifact(json);
  if (auto* t = std::get_if<PairwiseRelevanceTable>(&artifact)) return std::move(*t);
  throw DataError("expected a pairwise relevance table (output of rank --strategy dove)");
}

TrainedScheme parse_scheme(const std::string& json) {
  const Json j = parse_json(json);
  return guarded([&] {
    if (field(j, "format").get<std::string>() != "csfs-scheme") throw DataError("not a scheme manifest");
    if (field(j, "version").get<int>() != 1) throw DataError("unsupported scheme version");
    TrainedScheme s;
    s.topology = parse_topology(field(j, "topology").get<std::string>());
    s.classes = string_list(field(j, "classes"), "classes");
    s.features = string_list(field(j, "features"), "features");
    s.priors = number_list(field(j, "priors"), "priors");
    if (s.priors.size() != s.classes.size()) throw DataError("one prior per class is required");
    s.tau = field(j, "tau").get<double>();
    const Json& base = field(j, "base");
    s.base.kind = parse_base_kind(field(base, "kind").get<std::string>());
    s.base.smoothing = field(base, "smoothing").get<double>();
    s.base.temperature = field(base, "temperature").get<double>();
    const Json& agg = field(j, "aggregation");
    s.empty_policy = parse_empty_policy(field(agg, "empty_policy").get<std::string>());
    s.diag_weight = field(agg, "diag_weight").get<double>();
    for (const auto& node : field(j, "nodes")) {
      SchemeNode n;
      n.role = parse_node_role(field(node, "role").get<std::string>());
      const auto cls = string_list(field(node, "classes"), "node classes");
      if (n.pairwise()) {
        if (cls.size() != 2) throw DataError("pairwise node must name two classes");
        n.p = static_cast<ClassId>(index_of(s.classes, cls[0], "class"));
        n.q = static_cast<ClassId>(index_of(s.classes, cls[1], "class"));
      } else if (n.role != NodeRole::kMulticlass) {
        if (cls.size() != 1) throw DataError("one-vs-rest node must name one class");
        n.p = n.q = static_cast<ClassId>(index_of(s.classes, cls[0], "class"));
      }
      n.features = feature_set(field(node, "features"), s.features);
      n.fallback = field(node, "fallback").get<bool>();
      const Json& params = field(node, "params");
      if (!n.empty()) {
        if (params.is_null()) throw DataError("non-empty node without parameters");
        n.model = parse_node_params(params, n.features);
      }
      s.nodes.push_back(std::move(n));
    }
    if (s.nodes.empty()) throw DataError("scheme has no nodes");
    if (j.contains("warnings")) s.warnings = string_list(j.at("warnings"), "warnings");
    return s;
  });
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw DataError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DataError("cannot move output into '" + path.string() + "'");
  }
}

}  // namespace csfs
