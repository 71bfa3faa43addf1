#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "csfs/dataset.hpp"
#include "csfs/error.hpp"
#include "csfs/evaluation.hpp"
#include "csfs/format.hpp"
#include "csfs/io.hpp"
#include "csfs/relevance_matrix.hpp"
#include "csfs/schemes.hpp"
#include "csfs/selection.hpp"
#include "csfs/synth.hpp"

namespace csfs::cli {

namespace {

// Raw flag values, validated and converted after parsing.
struct Flags {
  std::string input;
  std::string output = "-";
  std::string format = "json";
  std::string label;
  std::string id_column;
  std::string impute = "none";
  std::string measure = "su";
  std::string binning = "ef";
  std::size_t bins = 4;
  bool global_bins = false;
  unsigned threads = 0;

  std::string strategy;
  std::string aggregate = "mean";
  bool collapse = false;
  double tau = 0.5;

  std::string topology = "three-layer";
  std::string artifact;
  std::string base = "gnb";
  double smoothing = 1e-9;
  double temperature = 1.0;
  std::string empty_policy = "neutral";
  double diag_weight = 1.0;

  std::string scheme;

  std::size_t k = 5;
  std::uint64_t seed = 0;
  std::string dump_artifacts;
  bool timing = false;

  std::string kind = "planted";
  std::size_t n = 400;
  std::size_t classes = 4;
  std::size_t features = 4;
  std::size_t noise = 6;
  double shift = 4.0;
  double spacing = 4.0;
  double separation = 8.0;
};

void add_output(CLI::App* cmd, Flags& f, bool with_format) {
  cmd->add_option("-o,--output", f.output, "Output file ('-' for stdout)");
  if (with_format) {
    cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  }
}

void add_data(CLI::App* cmd, Flags& f) {
  cmd->add_option("input", f.input, "Input CSV")->required();
  cmd->add_option("--label", f.label, "Label column name or 0-based index (default: last column)");
  cmd->add_option("--id-column", f.id_column, "Column holding example identifiers");
  cmd->add_option("--impute", f.impute, "Missing value handling")->check(CLI::IsMember({"none", "mean"}));
}

void add_measure(CLI::App* cmd, Flags& f) {
  cmd->add_option("--measure", f.measure, "Relevance measure")->check(CLI::IsMember({"su", "nig"}));
  cmd->add_option("--bins", f.bins, "Discretization bins")->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--binning", f.binning, "Binning method")->check(CLI::IsMember({"ew", "ef"}));
  cmd->add_flag("--global-bins", f.global_bins, "Bin each feature once over the whole dataset");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
}

void add_scheme(CLI::App* cmd, Flags& f) {
  cmd->add_option("--topology", f.topology, "Classification scheme")
      ->check(CLI::IsMember({"traditional", "one-layer", "two-layer", "three-layer"}));
  cmd->add_option("--strategy", f.strategy, "Selection strategy (one-layer: ova|ove)")
      ->check(CLI::IsMember({"global", "ova", "ove", "dove"}));
  cmd->add_option("--aggregate", f.aggregate, "Pairwise aggregate for ove")
      ->check(CLI::IsMember({"mean", "min", "max"}));
  cmd->add_option("--tau", f.tau, "Relevance threshold (score > tau)");
  cmd->add_option("--base", f.base, "Base classifier")->check(CLI::IsMember({"gnb", "centroid"}));
  cmd->add_option("--smoothing", f.smoothing, "GNB relative variance floor");
  cmd->add_option("--temperature", f.temperature, "Nearest-centroid softmax temperature");
  cmd->add_option("--empty-policy", f.empty_policy, "Nodes with no features")
      ->check(CLI::IsMember({"neutral", "omit"}));
  cmd->add_option("--diag-weight", f.diag_weight, "Three-layer weight of the diagonal node");
}

Dataset load(const Flags& f) {
  CsvLoadOptions opt;
  opt.label = f.label;
  opt.id_column = f.id_column;
  opt.impute = f.impute == "mean" ? Imputation::kMean : Imputation::kNone;
  return load_csv(f.input, opt);
}

MeasureSpec measure_spec(const Flags& f) {
  MeasureSpec spec;
  spec.kind = parse_measure_kind(f.measure);
  spec.discretization.method = parse_binning(f.binning);
  spec.discretization.bins = f.bins;
  spec.discretization.global = f.global_bins;
  validate(spec.discretization);
  return spec;
}

Pipeline pipeline(const Flags& f) {
  Pipeline p;
  p.measure = measure_spec(f);
  p.aggregate.kind = parse_aggregate(f.aggregate);
  p.scheme.topology = parse_topology(f.topology);
  p.scheme.threshold.tau = f.tau;
  p.scheme.base.kind = parse_base_kind(f.base);
  p.scheme.base.smoothing = f.smoothing;
  p.scheme.base.temperature = f.temperature;
  p.scheme.empty_policy = parse_empty_policy(f.empty_policy);
  p.scheme.diag_weight = f.diag_weight;
  p.strategy = f.strategy.empty() ? default_strategy(p.scheme.topology) : parse_strategy(f.strategy);
  validate(p);
  return p;
}

void emit(const Flags& f, const std::string& content, std::ostream& out) {
  if (f.output.empty() || f.output == "-") {
    out << content;
  } else {
    write_file_atomic(f.output, content);
  }
}

void report_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

int cmd_rank(const Flags& f, std::ostream& out) {
  const Strategy strategy = f.strategy.empty() ? Strategy::kOvA : parse_strategy(f.strategy);
  const AggregateSpec agg{parse_aggregate(f.aggregate)};
  const MeasureSpec spec = measure_spec(f);
  if (f.collapse && strategy != Strategy::kOvA && strategy != Strategy::kOvE) {
    throw UsageError("--collapse applies to ova and ove rankings only");
  }
  const Dataset d = load(f);
  const SelectionContext ctx{{f.threads}, nullptr};
  const bool csv = f.format == "csv";

  switch (strategy) {
    case Strategy::kGlobal: {
      const auto r = rank_global(d, spec, ctx);
      emit(f, csv ? to_csv(r) : to_json(r), out);
      break;
    }
    case Strategy::kDOvE: {
      const auto t = dove(d, spec, ctx);
      emit(f, csv ? to_csv(t) : to_json(t), out);
      break;
    }
    case Strategy::kOvA:
    case Strategy::kOvE: {
      const auto r = strategy == Strategy::kOvA ? ova(d, spec, ctx) : ove(d, spec, agg, ctx);
      RankingJsonOptions opt;
      if (strategy == Strategy::kOvE) opt.aggregate = agg.kind;
      if (f.collapse) {
        const auto g = collapse(r, agg);
        opt.aggregate = agg.kind;
        opt.collapsed_from = strategy;
        emit(f, csv ? to_csv(g) : to_json(g, opt), out);
      } else {
        emit(f, csv ? to_csv(r) : to_json(r, opt), out);
      }
      break;
    }
  }
  return kOk;
}

int cmd_matrix(const Flags& f, std::ostream& out) {
  const RelevanceThreshold th{f.tau};
  validate(th);
  const auto table = parse_pairwise_table(read_text_file(f.input));
  const auto m = build_matrix(table, th);
  emit(f, f.format == "csv" ? to_csv(m) : to_json(m), out);
  return kOk;
}

int cmd_train(const Flags& f, std::ostream& out, std::ostream& err) {
  const Pipeline p = pipeline(f);
  const Dataset d = load(f);
  const ExecutionOptions exec{f.threads};
  TrainedScheme s;
  if (f.artifact.empty()) {
    s = fit(d, p, {exec, nullptr});
  } else {
    s = build_scheme(d, p.scheme, parse_artifact(read_text_file(f.artifact)), exec);
  }
  report_warnings(s.warnings, err);
  emit(f, to_json(s), out);
  return kOk;
}

int cmd_predict(const Flags& f, std::ostream& out) {
  const TrainedScheme s = parse_scheme(read_text_file(f.scheme));
  const CsvTable table = parse_csv_table(read_text_file(f.input));

  std::vector<std::size_t> columns;
  for (const auto& name : s.features) {
    auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) throw DataError("input lacks feature column '" + name + "'");
    columns.push_back(static_cast<std::size_t>(it - table.header.begin()));
  }
  std::optional<std::size_t> id_col;
  if (!f.id_column.empty()) {
    auto it = std::find(table.header.begin(), table.header.end(), f.id_column);
    if (it == table.header.end()) throw DataError("id column '" + f.id_column + "' not found");
    id_col = static_cast<std::size_t>(it - table.header.begin());
  }

  std::string csv = "example_id,predicted";
  for (const auto& c : s.classes) csv += "," + csv_field("score_" + c);
  csv += '\n';
  std::vector<double> row(columns.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& rec = table.rows[i];
    for (std::size_t j = 0; j < columns.size(); ++j) {
      auto v = parse_cell(rec[columns[j]], table.line_numbers[i], s.features[j]);
      if (!v) {
        throw DataError("line " + std::to_string(table.line_numbers[i]) + ", column '" +
                        s.features[j] + "': missing value");
      }
      row[j] = *v;
    }
    const auto pred = predict(s, row);
    csv += csv_field(id_col ? rec[*id_col] : "e" + std::to_string(i + 1));
    csv += "," + csv_field(s.classes[pred.label]);
    for (double v : pred.scores) csv += "," + format_double(v);
    csv += '\n';
  }
  emit(f, csv, out);
  return kOk;
}

int cmd_evaluate(const Flags& f, std::ostream& out, std::ostream& err) {
  const Pipeline p = pipeline(f);
  const Dataset d = load(f);
  const auto report = evaluate(d, p, f.k, f.seed, {f.threads});
  if (!f.dump_artifacts.empty()) {
    std::filesystem::create_directories(f.dump_artifacts);
    for (const auto& fold : report.per_fold) {
      const auto path = std::filesystem::path(f.dump_artifacts) /
                        ("fold" + std::to_string(fold.fold) + ".json");
      write_file_atomic(path, to_json(fold.artifact));
    }
  }
  for (const auto& fold : report.per_fold) {
    for (const auto& w : fold.warnings) err << "warning: fold " << fold.fold << ": " << w << '\n';
  }
  emit(f, to_json(report, f.timing), out);
  err << format_report_table(report);
  if (f.timing) err << "wall time " << report.instrumentation.wall_seconds << " s\n";
  return kOk;
}

int cmd_synth(const Flags& f, std::ostream& out) {
  Dataset d;
  if (f.kind == "planted") {
    d = synth_planted({f.n, f.classes, f.noise, f.shift, f.spacing, f.seed});
  } else if (f.kind == "blobs") {
    d = synth_blobs({f.n, f.classes, f.features, f.separation, f.seed});
  } else {
    d = synth_noise({f.n, f.classes, f.features, f.seed});
  }
  emit(f, write_csv(d), out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Class-specific feature selection and ensemble classification", "csfs"};
  app.require_subcommand(1);

  auto* rank = app.add_subcommand("rank", "Rank features (global, ova, ove, dove)");
  add_data(rank, f);
  add_measure(rank, f);
  rank->add_option("--strategy", f.strategy, "global|ova|ove|dove (default ova)")
      ->check(CLI::IsMember({"global", "ova", "ove", "dove"}));
  rank->add_option("--aggregate", f.aggregate, "Pairwise aggregate for ove and --collapse")
      ->check(CLI::IsMember({"mean", "min", "max"}));
  rank->add_flag("--collapse", f.collapse, "Reduce a class-specific ranking to a global one");
  add_output(rank, f, true);

  auto* dove_cmd = app.add_subcommand("dove", "Pairwise relevance table (rank --strategy dove)");
  add_data(dove_cmd, f);
  add_measure(dove_cmd, f);
  add_output(dove_cmd, f, true);

  auto* matrix = app.add_subcommand("matrix", "Build the class-specific relevance matrix from a dove table");
  matrix->add_option("input", f.input, "Pairwise table JSON")->required();
  matrix->add_option("--tau", f.tau, "Relevance threshold (score > tau)");
  add_output(matrix, f, true);

  auto* train = app.add_subcommand("train", "Train a classification scheme");
  add_data(train, f);
  add_measure(train, f);
  add_scheme(train, f);
  train->add_option("--artifact", f.artifact, "Selection artifact JSON (computed from the data when absent)");
  add_output(train, f, false);

  auto* pred = app.add_subcommand("predict", "Predict with a trained scheme");
  pred->add_option("input", f.input, "Input CSV")->required();
  pred->add_option("--scheme", f.scheme, "Scheme JSON written by train")->required();
  pred->add_option("--id-column", f.id_column, "Column holding example identifiers");
  add_output(pred, f, false);

  auto* eval = app.add_subcommand("evaluate", "Stratified k-fold evaluation of a pipeline");
  add_data(eval, f);
  add_measure(eval, f);
  add_scheme(eval, f);
  eval->add_option("--k", f.k, "Number of folds")->check(CLI::Range(2, 1 << 20));
  eval->add_option("--seed", f.seed, "Fold assignment seed")->required();
  eval->add_option("--dump-artifacts", f.dump_artifacts, "Directory for per-fold selection artifacts");
  eval->add_flag("--timing", f.timing, "Include wall time in the report (breaks byte-identical output)");
  add_output(eval, f, false);

  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic dataset");
  synth->add_option("--kind", f.kind, "planted|blobs|noise")->check(CLI::IsMember({"planted", "blobs", "noise"}));
  synth->add_option("--seed", f.seed, "Random seed")->required();
  synth->add_option("--n", f.n, "Number of examples");
  synth->add_option("--classes", f.classes, "Number of classes");
  synth->add_option("--features", f.features, "Feature count (blobs, noise)");
  synth->add_option("--noise", f.noise, "Noise feature count (planted)");
  synth->add_option("--shift", f.shift, "Class-A shift in sd units (planted)");
  synth->add_option("--spacing", f.spacing, "Class spacing of the global feature (planted)");
  synth->add_option("--separation", f.separation, "Blob centre spacing (blobs)");
  add_output(synth, f, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (rank->parsed()) return cmd_rank(f, out);
    if (dove_cmd->parsed()) {
      f.strategy = "dove";
      return cmd_rank(f, out);
    }
    if (matrix->parsed()) return cmd_matrix(f, out);
    if (train->parsed()) return cmd_train(f, out, err);
    if (pred->parsed()) return cmd_predict(f, out);
    if (eval->parsed()) return cmd_evaluate(f, out, err);
    if (synth->parsed()) return cmd_synth(f, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace csfs::cli
