#include "csfs/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "csfs/error.hpp"
#include "csfs/format.hpp"

namespace csfs {

namespace {

template <typename T>
void require_unique(const std::vector<T>& items, const char* what) {
  std::unordered_set<T> seen;
  for (const auto& item : items) {
    if (!seen.insert(item).second) {
      throw DataError(std::string("duplicate ") + what + " '" + item + "'");
    }
  }
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool is_missing_marker(const std::string& s) {
  return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "nan" ||
         s == "NAN" || s == "?";
}

}  // namespace

Dataset::Dataset(std::vector<std::string> example_ids,
                 std::vector<std::string> feature_names,
                 std::vector<double> values, std::vector<ClassId> labels,
                 std::vector<std::string> classes)
    : examples_(std::move(example_ids)),
      features_(std::move(feature_names)),
      values_(std::move(values)),
      labels_(std::move(labels)),
      classes_(std::move(classes)) {
  if (examples_.size() != labels_.size()) {
    throw DataError("example id count does not match label count");
  }
  if (values_.size() != labels_.size() * features_.size()) {
    throw DataError("value matrix shape does not match n x m");
  }
  require_unique(features_, "feature name");
  require_unique(examples_, "example id");
  require_unique(classes_, "class label");
  for (ClassId c : labels_) {
    if (c >= classes_.size()) throw DataError("label outside the class list");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      const std::size_t m = features_.size();
      throw DataError("non-finite value at example '" + examples_[k / m] +
                      "', feature '" + features_[k % m] + "'");
    }
  }
}

Dataset Dataset::from_labels(std::vector<std::string> example_ids,
                             std::vector<std::string> feature_names,
                             std::vector<double> values,
                             const std::vector<std::string>& labels) {
  std::vector<std::string> classes;
  std::unordered_map<std::string, ClassId> index;
  std::vector<ClassId> ids;
  ids.reserve(labels.size());
  for (const auto& label : labels) {
    auto [it, inserted] = index.try_emplace(label, static_cast<ClassId>(classes.size()));
    if (inserted) classes.push_back(label);
    ids.push_back(it->second);
  }
  return Dataset(std::move(example_ids), std::move(feature_names),
                 std::move(values), std::move(ids), std::move(classes));
}

std::optional<ClassId> Dataset::find_class(const std::string& name) const {
  auto it = std::find(classes_.begin(), classes_.end(), name);
  if (it == classes_.end()) return std::nullopt;
  return static_cast<ClassId>(it - classes_.begin());
}

ClassId Dataset::class_id(const std::string& name) const {
  auto c = find_class(name);
  if (!c) throw DataError("unknown class label '" + name + "'");
  return *c;
}

std::optional<std::size_t> Dataset::find_feature(const std::string& name) const {
  auto it = std::find(features_.begin(), features_.end(), name);
  if (it == features_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - features_.begin());
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  const std::size_t m = features_.size();
  std::vector<std::string> ids;
  std::vector<double> values;
  std::vector<ClassId> labels;
  ids.reserve(rows.size());
  values.reserve(rows.size() * m);
  labels.reserve(rows.size());
  for (std::size_t r : rows) {
    ids.push_back(examples_.at(r));
    auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
    labels.push_back(labels_[r]);
  }
  return Dataset(std::move(ids), features_, std::move(values), std::move(labels), classes_);
}

void Dataset::require_multiclass() const {
  if (classes_.size() < 2) {
    throw DataError("at least 2 distinct classes are required, found " +
                    std::to_string(classes_.size()));
  }
  std::vector<std::size_t> counts(classes_.size(), 0);
  for (ClassId c : labels_) ++counts[c];
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) throw DataError("class '" + classes_[c] + "' has no examples");
  }
}

std::vector<std::size_t> ClassPartition::counts() const {
  std::vector<std::size_t> out;
  out.reserve(members.size());
  for (const auto& list : members) out.push_back(list.size());
  return out;
}

ClassPartition partition_by_class(const Dataset& d) {
  ClassPartition part;
  part.members.resize(d.num_classes());
  for (std::size_t i = 0; i < d.num_examples(); ++i) {
    part.members[d.label(i)].push_back(i);
  }
  return part;
}

BinarizedView::BinarizedView(const Dataset& d, ClassId positive)
    : data_(&d), positive_(positive) {
  if (positive >= d.num_classes()) throw DataError("unknown positive class");
  rows_.resize(d.num_examples());
  labels_.resize(d.num_examples());
  for (std::size_t i = 0; i < d.num_examples(); ++i) {
    rows_[i] = i;
    const bool pos = d.label(i) == positive;
    labels_[i] = pos ? kPositive : kNegative;
    positives_ += pos ? 1 : 0;
  }
}

BinarizedView binarize(const Dataset& d, const std::string& positive) {
  return BinarizedView(d, d.class_id(positive));
}

PairView::PairView(const Dataset& d, ClassId p, ClassId q) : data_(&d), p_(p), q_(q) {
  if (p >= d.num_classes() || q >= d.num_classes()) throw DataError("unknown class in pair");
  if (p == q) throw DataError("pair view needs two distinct classes");
  for (std::size_t i = 0; i < d.num_examples(); ++i) {
    const ClassId c = d.label(i);
    if (c == p || c == q) {
      rows_.push_back(i);
      labels_.push_back(c);
    }
  }
}

PairView pair_view(const Dataset& d, const std::string& p, const std::string& q) {
  return PairView(d, d.class_id(p), d.class_id(q));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvTable parse_csv_table(const std::string& text) {
  CsvTable table;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_quoted = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_field = [&] {
    record.push_back(field_quoted ? field : trim(field));
    field.clear();
    field_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = record.size() == 1 && record[0].empty();
    if (!blank) {
      if (table.header.empty()) {
        table.header = std::move(record);
      } else {
        if (record.size() != table.header.size()) {
          throw DataError("line " + std::to_string(record_line) + ": expected " +
                          std::to_string(table.header.size()) + " fields, found " +
                          std::to_string(record.size()));
        }
        table.rows.push_back(std::move(record));
        table.line_numbers.push_back(record_line);
      }
    }
    record.clear();
    record_line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
    } else if (ch == '"' && trim(field).empty()) {
      field.clear();
      in_quotes = true;
      field_quoted = true;
    } else if (ch == ',') {
      end_field();
    } else if (ch == '\n') {
      ++line;
      end_record();
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  if (in_quotes) throw DataError("unterminated quoted field");
  if (!field.empty() || !record.empty()) end_record();
  if (table.header.empty()) throw DataError("CSV input has no header row");
  return table;
}

std::optional<double> parse_cell(const std::string& cell, std::size_t line,
                                 const std::string& column) {
  if (is_missing_marker(cell)) return std::nullopt;
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw DataError("line " + std::to_string(line) + ", column '" + column +
                    "': cannot parse '" + cell + "' as a finite real");
  }
  return value;
}

namespace {

std::size_t resolve_column(const std::vector<std::string>& header,
                           const std::string& spec, const char* role) {
  auto it = std::find(header.begin(), header.end(), spec);
  if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
  const bool numeric = !spec.empty() && std::all_of(spec.begin(), spec.end(),
                                                    [](char c) { return c >= '0' && c <= '9'; });
  if (numeric) {
    const std::size_t index = std::stoul(spec);
    if (index < header.size()) return index;
  }
  throw DataError(std::string(role) + " column '" + spec + "' not found");
}

}  // namespace

Dataset parse_csv(const std::string& text, const CsvLoadOptions& options) {
  const CsvTable table = parse_csv_table(text);
  const auto& header = table.header;
  if (header.size() < 2) throw DataError("CSV needs a label column and at least one feature");

  const std::size_t label_col = options.label.empty()
                                    ? header.size() - 1
                                    : resolve_column(header, options.label, "label");
  std::optional<std::size_t> id_col;
  if (!options.id_column.empty()) {
    id_col = resolve_column(header, options.id_column, "id");
    if (*id_col == label_col) throw DataError("id column and label column coincide");
  }

  std::vector<std::size_t> feature_cols;
  std::vector<std::string> features;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == label_col || (id_col && c == *id_col)) continue;
    feature_cols.push_back(c);
    features.push_back(header[c]);
  }
  if (features.empty()) throw DataError("CSV has no feature columns");

  const std::size_t n = table.rows.size();
  const std::size_t m = features.size();
  std::vector<double> values(n * m, 0.0);
  std::vector<std::vector<std::size_t>> missing(m);
  std::vector<std::string> labels;
  std::vector<std::string> ids;
  labels.reserve(n);
  ids.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = table.rows[i];
    const std::size_t line = table.line_numbers[i];
    if (rec[label_col].empty()) {
      throw DataError("line " + std::to_string(line) + ": empty class label");
    }
    labels.push_back(rec[label_col]);
    ids.push_back(id_col ? rec[*id_col] : "e" + std::to_string(i + 1));
    for (std::size_t j = 0; j < m; ++j) {
      const auto& cell = rec[feature_cols[j]];
      auto v = parse_cell(cell, line, features[j]);
      if (!v) {
        if (options.impute == Imputation::kNone) {
          throw DataError("line " + std::to_string(line) + ", column '" + features[j] +
                          "': missing value '" + cell + "' (use --impute mean)");
        }
        missing[j].push_back(i);
        continue;
      }
      values[i * m + j] = *v;
    }
  }

  for (std::size_t j = 0; j < m; ++j) {
    if (missing[j].empty()) continue;
    const std::size_t present = n - missing[j].size();
    if (present == 0) throw DataError("column '" + features[j] + "' has no values to impute from");
    double sum = 0.0;
    std::size_t next_missing = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (next_missing < missing[j].size() && missing[j][next_missing] == i) {
        ++next_missing;
        continue;
      }
      sum += values[i * m + j];
    }
    const double mean = sum / static_cast<double>(present);
    for (std::size_t i : missing[j]) values[i * m + j] = mean;
  }

  Dataset d = Dataset::from_labels(std::move(ids), std::move(features), std::move(values), labels);
  if (d.num_classes() < 2) {
    throw DataError("at least 2 distinct classes are required, found " +
                    std::to_string(d.num_classes()));
  }
  return d;
}

Dataset load_csv(const std::filesystem::path& path, const CsvLoadOptions& options) {
  return parse_csv(read_text_file(path), options);
}

std::string write_csv(const Dataset& d) {
  std::string out;
  for (const auto& f : d.feature_names()) {
    out += csv_field(f);
    out += ',';
  }
  out += "class\n";
  for (std::size_t i = 0; i < d.num_examples(); ++i) {
    for (double v : d.row(i)) {
      out += format_double(v);
      out += ',';
    }
    out += csv_field(d.class_name(d.label(i)));
    out += '\n';
  }
  return out;
}

}  // namespace csfs
