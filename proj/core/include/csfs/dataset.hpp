#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace csfs {

using ClassId = std::uint32_t;

// A labeled tabular dataset: n examples x m real-valued features plus one
// class label per example. Immutable after construction.
//
// Class order is the order in which labels were first seen; every per-class
// output of the library follows it.
class Dataset {
 public:
  Dataset() = default;

  // Validates and takes ownership. `values` is row-major n x m. `labels[i]`
  // indexes into `classes`. Throws DataError on any invariant violation.
  Dataset(std::vector<std::string> example_ids,
          std::vector<std::string> feature_names,
          std::vector<double> values,
          std::vector<ClassId> labels,
          std::vector<std::string> classes);

  // Builds class list in first-occurrence order from string labels.
  static Dataset from_labels(std::vector<std::string> example_ids,
                             std::vector<std::string> feature_names,
                             std::vector<double> values,
                             const std::vector<std::string>& labels);

  std::size_t num_examples() const { return labels_.size(); }
  std::size_t num_features() const { return features_.size(); }
  std::size_t num_classes() const { return classes_.size(); }

  const std::vector<std::string>& example_ids() const { return examples_; }
  const std::vector<std::string>& feature_names() const { return features_; }
  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<ClassId>& labels() const { return labels_; }
  std::span<const double> raw_values() const { return values_; }

  double value(std::size_t example, std::size_t feature) const {
    return values_[example * features_.size() + feature];
  }
  // values(e_i): the full feature vector of one example.
  std::span<const double> row(std::size_t example) const {
    return {values_.data() + example * features_.size(), features_.size()};
  }
  ClassId label(std::size_t example) const { return labels_[example]; }
  const std::string& class_name(ClassId c) const { return classes_[c]; }

  std::optional<ClassId> find_class(const std::string& name) const;
  ClassId class_id(const std::string& name) const;  // throws DataError
  std::optional<std::size_t> find_feature(const std::string& name) const;

  // Copy restricted to `rows` (in the given order). The class list is kept
  // whole so class ids stay aligned with the parent, even if some class has
  // no example left.
  Dataset subset(std::span<const std::size_t> rows) const;

  // Throws DataError unless there are >= 2 classes and each has an example.
  void require_multiclass() const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<std::string> examples_;
  std::vector<std::string> features_;
  std::vector<double> values_;
  std::vector<ClassId> labels_;
  std::vector<std::string> classes_;
};

// Per-class example index lists (D_c). Lists are in dataset order.
struct ClassPartition {
  std::vector<std::vector<std::size_t>> members;

  std::size_t count(ClassId c) const { return members[c].size(); }
  std::vector<std::size_t> counts() const;
};

ClassPartition partition_by_class(const Dataset& d);

// Class p versus everything else. Covers all n examples; positives carry
// local label 0, negatives local label 1.
class BinarizedView {
 public:
  static constexpr ClassId kPositive = 0;
  static constexpr ClassId kNegative = 1;

  BinarizedView(const Dataset& d, ClassId positive);

  const Dataset& dataset() const { return *data_; }
  ClassId positive_class() const { return positive_; }
  std::span<const std::size_t> rows() const { return rows_; }
  std::span<const ClassId> labels() const { return labels_; }
  std::size_t positive_count() const { return positives_; }

 private:
  const Dataset* data_;
  ClassId positive_;
  std::vector<std::size_t> rows_;
  std::vector<ClassId> labels_;
  std::size_t positives_ = 0;
};

BinarizedView binarize(const Dataset& d, const std::string& positive);

// Examples of classes p and q only (D_p u D_q), in dataset order. Local
// labels are the original class ids, so (p,q) and (q,p) are the same view.
class PairView {
 public:
  PairView(const Dataset& d, ClassId p, ClassId q);

  const Dataset& dataset() const { return *data_; }
  ClassId first() const { return p_; }
  ClassId second() const { return q_; }
  std::span<const std::size_t> rows() const { return rows_; }
  std::span<const ClassId> labels() const { return labels_; }

 private:
  const Dataset* data_;
  ClassId p_;
  ClassId q_;
  std::vector<std::size_t> rows_;
  std::vector<ClassId> labels_;
};

PairView pair_view(const Dataset& d, const std::string& p, const std::string& q);

enum class Imputation { kNone, kMean };

struct CsvLoadOptions {
  // Column name or 0-based index; empty selects the last column.
  std::string label;
  // Optional column holding example identifiers; otherwise e1..en.
  std::string id_column;
  Imputation impute = Imputation::kNone;
};

Dataset load_csv(const std::filesystem::path& path, const CsvLoadOptions& options = {});
Dataset parse_csv(const std::string& text, const CsvLoadOptions& options = {});

// Raw CSV table: header plus string cells. Used for prediction inputs, where
// the label column may be absent.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

CsvTable parse_csv_table(const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// Parses one numeric cell. Returns nullopt for missing markers (empty, NA,
// NaN, ?), throws DataError for anything else that is not a finite real.
std::optional<double> parse_cell(const std::string& cell, std::size_t line,
                                 const std::string& column);

std::string write_csv(const Dataset& d);

}  // namespace csfs
