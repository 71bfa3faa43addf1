#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "csfs/evaluation.hpp"
#include "csfs/relevance_matrix.hpp"
#include "csfs/schemes.hpp"
#include "csfs/selection.hpp"

namespace csfs {

// JSON documents. Every writer emits two-space indented JSON with a trailing
// newline; equal inputs give byte-identical text.
//
//   ranking  {"classes","features","strategy":"global|ova|ove","scores":[[...]]}
//            global rankings carry a single score row
//   table    same keys with "strategy":"dove" plus "pairs":[["A","B"],...]
//   matrix   {"classes","features","tau","diagonal":{"A":[...]},
//             "offdiag":[{"pair":["A","B"],"features":[...]}]}
//   scheme   {"format":"csfs-scheme","version":1,"topology",...,"nodes":[...]}
struct RankingJsonOptions {
  std::optional<AggregateKind> aggregate;   // recorded for ove / collapsed output
  std::optional<Strategy> collapsed_from;   // set when a global ranking came from --collapse
};

std::string to_json(const GlobalRanking& r, const RankingJsonOptions& opt = {});
std::string to_json(const ClassSpecificRanking& r, const RankingJsonOptions& opt = {});
std::string to_json(const PairwiseRelevanceTable& t);
std::string to_json(const ClassSpecificRelevanceMatrix& m);
std::string to_json(const SelectionArtifact& a);
std::string to_json(const TrainedScheme& s);
std::string to_json(const EvaluationReport& r, bool include_timing = false);

std::string to_csv(const GlobalRanking& r);
std::string to_csv(const ClassSpecificRanking& r);
std::string to_csv(const PairwiseRelevanceTable& t);
std::string to_csv(const ClassSpecificRelevanceMatrix& m);
std::string to_csv(const SelectionArtifact& a);

// Reads any of the selection documents above; the kind is recognised from
// its keys. Throws DataError on malformed input.
SelectionArtifact parse_artifact(const std::string& json);
PairwiseRelevanceTable parse_pairwise_table(const std::string& json);
TrainedScheme parse_scheme(const std::string& json);

// Writes via a temporary file in the same directory and renames it into
// place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace csfs
