// hinfraud command-line driver: generate -> inspect-paths -> run -> evaluate
// -> bench, plus train/predict/dump-features plumbing.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "hinfraud/bench.hpp"
#include "hinfraud/collective.hpp"
#include "hinfraud/datagen.hpp"
#include "hinfraud/dataset.hpp"
#include "hinfraud/error.hpp"
#include "hinfraud/log.hpp"
#include "hinfraud/rng.hpp"

using namespace hinfraud;

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::string log_level = "info";
};

std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return buffer;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorKind::io_error, "cannot write " + path.string());
  return out;
}

struct ClassifierFlags {
  std::string kind = "random_forest";
  int trees = 100;
  int depth = 12;
  double feature_subsample = 0.0;
  int epochs = 200;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  double threshold = 0.5;
  bool class_weighting = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--classifier", kind, "Base classifier: random_forest or logistic_regression")
        ->check(CLI::IsMember(
            {"random_forest", "logistic_regression", "rf", "lr", "forest", "logistic"}));
    cmd->add_option("--trees", trees, "Random forest: number of trees");
    cmd->add_option("--depth", depth, "Random forest: maximum tree depth");
    cmd->add_option("--feature-subsample", feature_subsample,
                    "Random forest: fraction of features tried per split (0 = sqrt)");
    cmd->add_option("--epochs", epochs, "Logistic regression: gradient descent epochs");
    cmd->add_option("--lr", learning_rate, "Logistic regression: learning rate");
    cmd->add_option("--l2", l2, "Logistic regression: L2 penalty");
    cmd->add_option("--threshold", threshold, "Decision threshold (proba >= threshold is fraud)");
    cmd->add_flag("--class-weighting", class_weighting, "Reweight classes to balance the loss");
  }

  ClassifierSpec spec(std::uint64_t seed) const {
    ClassifierSpec s;
    s.kind = classifier_kind_from_string(kind).value_or(ClassifierKind::random_forest);
    s.tree_count = trees;
    s.max_depth = depth;
    s.feature_subsample = feature_subsample;
    s.epochs = epochs;
    s.learning_rate = learning_rate;
    s.l2 = l2;
    s.threshold = threshold;
    s.class_weighting = class_weighting;
    s.seed = seed;
    return s;
  }
};

std::string describe(const ClassifierSpec& spec) {
  if (spec.kind == ClassifierKind::logistic_regression) {
    return fmt("logistic_regression (lr=%g, epochs=%d, l2=%g, threshold=%g)", spec.learning_rate,
               spec.epochs, spec.l2, spec.threshold);
  }
  return fmt("random_forest (trees=%d, depth=%d, threshold=%g)", spec.tree_count, spec.max_depth,
             spec.threshold);
}

// ---- generate ----

int cmd_generate(const GlobalOptions& global, const std::string& config_path,
                 const std::string& out_dir, bool seed_given) {
  GenConfig config;
  if (!config_path.empty()) config = GenConfig::from_json_file(config_path);
  if (seed_given || config_path.empty()) config.seed = global.seed;
  const auto summary = generate(config, out_dir);
  std::printf("generated %u transactions into %s\n", summary.transactions, out_dir.c_str());
  std::printf("fraud rate: %.4f (expected %.4f), risky transactions: %u\n",
              static_cast<double>(summary.fraud_count) / summary.transactions,
              summary.expected_fraud_rate, summary.risky_transaction_count);
  return 0;
}

// ---- inspect-paths ----

int cmd_inspect_paths(const std::string& data_dir) {
  const auto schema = HinSchema::from_json_file(fs::path(data_dir) / "schema.json");
  // counts are enough here; edges are not loaded
  std::vector<std::uint32_t> counts(schema.node_type_count(), 0);
  for (std::uint32_t t = 0; t < schema.node_type_count(); ++t) {
    const auto& name = schema.node_type(t).name;
    const auto path = fs::path(data_dir) / "nodes" / (name + ".txt");
    std::ifstream in(path);
    if (!in) raise(ErrorKind::io_error, "cannot open node file " + path.string());
    std::string line;
    std::uint32_t count = 0;
    while (std::getline(in, line)) {
      if (!line.empty() && line != "\r") ++count;
    }
    counts[t] = count;
  }

  const auto traces = enumerate_downsized(schema, counts);
  std::printf("node counts:");
  for (std::uint32_t t = 0; t < schema.node_type_count(); ++t) {
    std::printf(" %s=%u", schema.node_type(t).name.c_str(), counts[t]);
  }
  std::printf("\n\ndownsized traces (%zu):\n", traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    std::string rendering = schema.node_type(traces[i].node_types[0]).name;
    for (std::size_t k = 0; k < traces[i].links.size(); ++k) {
      rendering += "→" + schema.link_name(traces[i].links[k]) + "→" +
                   schema.node_type(traces[i].node_types[k + 1]).name;
    }
    std::printf("  [%2zu] %-7s %s\n", i, trace_is_simple(schema, traces[i]) ? "simple" : "complex",
                rendering.c_str());
  }

  const auto pairs = pair_traces(traces, schema);
  std::printf("\nmeta-path pairs (c = %zu):\n", pairs.size());
  for (std::size_t c = 0; c < pairs.size(); ++c) {
    std::printf("  z_%-3zu (%zu,%zu) %s\n", c, pairs[c].left, pairs[c].right,
                pairs[c].semantics.c_str());
  }
  return 0;
}

// ---- shared dataset plumbing ----

void write_predictions(const fs::path& path, const Dataset& dataset,
                       const std::vector<std::uint32_t>& indices, std::span<const double> proba,
                       std::span<const std::uint8_t> labels) {
  auto out = open_out(path);
  out << "txn_id,proba,label\n";
  const auto& txns = dataset.hin.nodes(dataset.hin.schema().target_type());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out << txns.id_of(indices[k]) << ',' << fmt("%.9g", proba[k]) << ','
        << static_cast<int>(labels[k]) << '\n';
  }
}

// ---- dump-features ----

int cmd_dump_features(const GlobalOptions& global, const std::string& data_dir,
                      const std::string& out_file, bool no_self_exclusion) {
  Dataset dataset = load_dataset(data_dir);
  const PathSet paths = build_paths(dataset.hin, global.threads);

  std::vector<double> y(dataset.labels.y.begin(), dataset.labels.y.end());
  FeatureOptions options;
  options.self_exclusion = !no_self_exclusion;
  double rate = 0.0;
  for (const auto v : dataset.labels.y) rate += v;
  options.prior =
      dataset.labels.y.empty() ? 0.0 : rate / static_cast<double>(dataset.labels.y.size());

  const Matrix meta = compute_all_features(paths, y, options, global.threads);
  const auto duplicates = duplicate_columns(meta);

  auto out = open_out(out_file);
  out << "txn_id";
  for (std::size_t j = 0; j < dataset.features.cols(); ++j) out << ",x_" << j;
  for (std::size_t c = 0; c < meta.cols(); ++c) out << ",z_" << c;
  out << '\n';
  const auto& txns = dataset.hin.nodes(dataset.hin.schema().target_type());
  for (std::size_t i = 0; i < dataset.features.rows(); ++i) {
    out << txns.id_of(static_cast<std::uint32_t>(i));
    for (const double v : dataset.features.row(i)) out << ',' << fmt("%.17g", v);
    for (std::size_t c = 0; c < meta.cols(); ++c) out << ',' << fmt("%.17g", meta(i, c));
    out << '\n';
  }

  auto prov = open_out(out_file + ".provenance.csv");
  prov << "z_col,left,right,end_type,semantics,duplicate_of\n";
  for (std::size_t c = 0; c < paths.pairs.size(); ++c) {
    const auto& pair = paths.pairs[c];
    prov << "z_" << c << ',' << pair.left << ',' << pair.right << ','
         << dataset.hin.schema().node_type(pair.end_type).name << ',' << pair.semantics << ',';
    if (duplicates[c] != c) prov << "z_" << duplicates[c];
    prov << '\n';
  }
  std::printf("wrote %zu base and %zu meta columns for %zu transactions to %s\n",
              dataset.features.cols(), meta.cols(), dataset.features.rows(), out_file.c_str());
  return 0;
}

// ---- train / predict ----

int cmd_train(const GlobalOptions& global, const std::string& data_dir,
              const ClassifierFlags& flags, double test_fraction, const std::string& model_out) {
  Dataset dataset = load_dataset(data_dir);
  LabelState labels = make_label_state(dataset.labels, test_fraction);
  const auto spec = flags.spec(derive_seed(global.seed, "train"));
  const auto baseline = run_baseline(dataset.features, labels, spec, global.threads);
  baseline.model.save(model_out);
  std::printf("trained %s on %zu transactions, saved to %s\n", describe(spec).c_str(),
              labels.train_indices().size(), model_out.c_str());
  return 0;
}

int cmd_predict(const std::string& data_dir, const std::string& model_file,
                const std::string& out_file, const std::string& rows, double test_fraction,
                double threshold) {
  Dataset dataset = load_dataset(data_dir);
  const auto model = TrainedModel::load(model_file);

  std::vector<std::uint32_t> indices;
  if (rows == "all") {
    indices.resize(dataset.features.rows());
    for (std::uint32_t i = 0; i < indices.size(); ++i) indices[i] = i;
  } else {
    indices = make_label_state(dataset.labels, test_fraction).test_indices();
  }
  const Matrix x = dataset.features.select_rows(indices);
  const auto proba = predict_proba(model, x);
  const auto labels = labels_from_proba(proba, threshold);
  write_predictions(out_file, dataset, indices, proba, labels);
  std::printf("wrote %zu predictions to %s\n", indices.size(), out_file.c_str());
  return 0;
}

// ---- run ----

std::string metrics_row(const std::optional<Metrics>& m) {
  if (!m) return "-,-,-,-";
  return fmt("%.6f,%.6f,%.6f,%.6f", m->recall, m->precision, m->f_score, m->accuracy);
}

int cmd_run(const GlobalOptions& global, const std::string& data_dir, const ClassifierFlags& flags,
            int max_iters, double epsilon, double test_fraction, bool no_self_exclusion,
            bool soft_labels, const std::string& out_dir) {
  Dataset dataset = load_dataset(data_dir);
  const auto paths_started = std::chrono::steady_clock::now();
  const PathSet paths = build_paths(dataset.hin, global.threads);
  const double paths_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - paths_started).count();
  LabelState labels = make_label_state(dataset.labels, test_fraction);

  LoopConfig config;
  config.max_iterations = max_iters;
  config.early_stop_fraction = epsilon;
  config.classifier = flags.spec(derive_seed(global.seed, "collective"));
  config.self_exclusion = !no_self_exclusion;
  config.soft_labels = soft_labels;
  config.threads = global.threads;

  const auto started = std::chrono::steady_clock::now();
  const auto result = run_collective(paths, dataset.features, labels, config, dataset.labels.y);
  const double total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const auto test_idx = labels.test_indices();
  fs::create_directories(out_dir);
  write_predictions(fs::path(out_dir) / "predictions.csv", dataset, test_idx,
                    result.final_test_proba, result.final_test_labels);

  {
    auto out = open_out(fs::path(out_dir) / "history.csv");
    out << "iteration,label_change,recall,precision,f_score,accuracy\n";
    for (const auto& record : result.history.iterations) {
      out << record.iteration << ',';
      if (record.label_change) out << fmt("%.6f", *record.label_change);
      out << ',' << metrics_row(record.metrics) << '\n';
    }
  }

  // deterministic run summary; wall clock lives in timings.txt
  {
    auto out = open_out(fs::path(out_dir) / "report.txt");
    out << "collective run report\n";
    out << "data: " << data_dir << '\n';
    out << "classifier: " << describe(config.classifier) << '\n';
    out << "seed: " << global.seed << '\n';
    out << "max_iterations: " << config.max_iterations << " epsilon: " << fmt("%g", epsilon) << '\n';
    out << "test_fraction: " << fmt("%g", test_fraction) << '\n';
    out << "self_exclusion: " << (config.self_exclusion ? "on" : "off") << '\n';
    out << "label_mode: " << (config.soft_labels ? "soft" : "hard") << '\n';
    out << "feature aggregation reads the shared label vector: train ground truth plus the "
           "current test predictions\n";
    out << "transactions: " << dataset.features.rows() << " (train "
        << labels.train_indices().size() << ", test " << test_idx.size() << ")\n";
    out << "meta-path pairs: " << paths.pairs.size() << '\n';
    out << '\n';
    out << "iter,label_change,recall,precision,f_score,accuracy,relaimpr_recall,relaimpr_f\n";
    const auto& base = result.history.iterations[0].metrics;
    for (const auto& record : result.history.iterations) {
      out << record.iteration << ',';
      if (record.label_change) out << fmt("%.6f", *record.label_change);
      out << ',' << metrics_row(record.metrics);
      if (record.metrics && base && base->recall > 0.0 && base->f_score > 0.0) {
        out << ',' << fmt("%+.4f%%", rela_impr(record.metrics->recall, base->recall)) << ','
            << fmt("%+.4f%%", rela_impr(record.metrics->f_score, base->f_score));
      } else {
        out << ",-,-";
      }
      out << '\n';
    }
    out << '\n';
    if (result.history.converged()) {
      out << "converged_at: " << result.history.converged_at << '\n';
    } else {
      out << "converged_at: none"
          << (result.non_convergence_warning ? " (warning: label change never fell below epsilon)"
                                             : "")
          << '\n';
    }
  }

  {
    auto out = open_out(fs::path(out_dir) / "timings.txt");
    out << fmt("paths_seconds: %.3f\n", paths_seconds);
    out << fmt("features_seconds: %.3f\n", result.history.seconds_features);
    out << fmt("fit_seconds: %.3f\n", result.history.seconds_fit);
    out << fmt("predict_seconds: %.3f\n", result.history.seconds_predict);
    out << fmt("total_seconds: %.3f\n", total_seconds);
  }

  const auto& final_metrics = result.history.iterations.back().metrics;
  if (final_metrics) {
    std::printf("final: recall=%.4f precision=%.4f f=%.4f accuracy=%.4f (%zu iterations)\n",
                final_metrics->recall, final_metrics->precision, final_metrics->f_score,
                final_metrics->accuracy, result.history.iterations.size() - 1);
  }
  std::printf("report written to %s\n", (fs::path(out_dir) / "report.txt").c_str());
  return 0;
}

// ---- evaluate ----

int cmd_evaluate_predictions(const std::string& data_dir, const std::string& predictions_file) {
  Dataset dataset = load_dataset(data_dir);
  const auto& txns = dataset.hin.nodes(dataset.hin.schema().target_type());

  std::ifstream in(predictions_file);
  if (!in) raise(ErrorKind::io_error, "cannot open predictions " + predictions_file);
  std::string line;
  if (!std::getline(in, line) || line.rfind("txn_id,proba,label", 0) != 0) {
    raise(ErrorKind::parse_error, "predictions file needs the header txn_id,proba,label");
  }
  std::vector<std::uint8_t> truth;
  std::vector<std::uint8_t> predicted;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.rfind(',');
    if (c1 == std::string::npos || c2 == c1) {
      raise(ErrorKind::parse_error, "bad predictions row: " + line);
    }
    const auto id = line.substr(0, c1);
    const auto index = txns.index_of(id);
    if (!index) {
      raise(ErrorKind::unknown_node_id, "prediction for unknown transaction '" + id + "'");
    }
    truth.push_back(dataset.labels.y[*index]);
    predicted.push_back(line.substr(c2 + 1) == "1" ? 1 : 0);
  }
  const auto m = compute_metrics(truth, predicted);
  std::printf("predictions,%zu,%.6f,%.6f,%.6f,%.6f\n", truth.size(), m.recall, m.precision,
              m.f_score, m.accuracy);
  return 0;
}

int cmd_evaluate(const GlobalOptions& global, const std::string& data_dir,
                 const ClassifierFlags& flags, int windows, int max_iters, double epsilon,
                 bool no_self_exclusion, int case_study_window, std::size_t sample_size,
                 double alpha, const std::string& out_dir) {
  Dataset dataset = load_dataset(data_dir);
  const PathSet paths = build_paths(dataset.hin, global.threads);
  const auto splits = sliding_window_split(dataset.labels.timestamps, windows);

  fs::create_directories(out_dir);
  auto report = open_out(fs::path(out_dir) / "eval_report.txt");
  report << "window,model,transactions_train,transactions_test,recall,precision,f_score,accuracy,"
            "relaimpr_recall,relaimpr_f\n";

  for (int w = 0; w < windows; ++w) {
    LabelState labels = make_label_state(dataset.labels, splits[w].train_idx, splits[w].test_idx);
    // the window must not see transactions from its future
    std::vector<std::uint8_t> keep(labels.size(), 0);
    for (const auto i : splits[w].train_idx) keep[i] = 1;
    for (const auto i : splits[w].test_idx) keep[i] = 1;
    const PathSet window_paths = paths.masked_rows(keep);

    LoopConfig config;
    config.max_iterations = max_iters;
    config.early_stop_fraction = epsilon;
    config.classifier = flags.spec(derive_seed(global.seed, "evaluate.window", w));
    config.self_exclusion = !no_self_exclusion;
    config.threads = global.threads;

    const auto result =
        run_collective(window_paths, dataset.features, labels, config, dataset.labels.y);
    const auto& base = result.history.iterations.front().metrics;
    const auto& final_m = result.history.iterations.back().metrics;
    const auto row = [&](const char* model, const std::optional<Metrics>& m, bool with_impr) {
      report << 'W' << (w + 1) << ',' << model << ',' << splits[w].train_idx.size() << ','
             << splits[w].test_idx.size() << ',' << metrics_row(m);
      if (with_impr && base && m && base->recall > 0.0 && base->f_score > 0.0) {
        report << ',' << fmt("%+.4f%%", rela_impr(m->recall, base->recall)) << ','
               << fmt("%+.4f%%", rela_impr(m->f_score, base->f_score));
      } else {
        report << ",-,-";
      }
      report << '\n';
    };
    row("baseline", base, false);
    row("collective", final_m, true);

    if (w + 1 == case_study_window) {
      // significance case study on the settled feature table
      std::vector<std::uint32_t> sampled(splits[w].test_idx);
      Rng rng(derive_seed(global.seed, "evaluate.case_study"));
      if (sampled.size() > sample_size) {
        for (std::size_t k = 0; k < sample_size; ++k) {
          const auto pick = k + rng.next_below(sampled.size() - k);
          std::swap(sampled[k], sampled[pick]);
        }
        sampled.resize(sample_size);
      }
      auto sig = open_out(fs::path(out_dir) / "significance.csv");
      sig << "z_col,semantics,t,df,p,significant\n";
      for (std::size_t c = 0; c < paths.pairs.size(); ++c) {
        std::vector<double> values;
        std::vector<std::uint8_t> groups;
        for (const auto i : sampled) {
          values.push_back(result.final_meta(i, c));
          groups.push_back(dataset.labels.y[i]);
        }
        double t = 0.0;
        double df = 0.0;
        double p = 1.0;
        bool significant = false;
        try {
          const auto r = welch_t_test(values, groups);
          t = r.t;
          df = r.df;
          p = r.p;
          significant = p < alpha;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::degenerate_group) throw;
        }
        sig << "z_" << c << ',' << paths.pairs[c].semantics << ',' << fmt("%.6g", t) << ','
            << fmt("%.6g", df) << ',' << fmt("%.6g", p) << ',' << (significant ? "yes" : "no")
            << '\n';
      }
    }
  }
  std::printf("evaluation report written to %s\n", (fs::path(out_dir) / "eval_report.txt").c_str());
  return 0;
}

// ---- bench ----

int cmd_bench(const GlobalOptions& global, const std::string& data_dir, const std::string& out_file,
              int repeats, const std::string& mode, std::size_t dense_cap,
              const std::vector<std::size_t>& pair_filter, bool scaling) {
  Dataset dataset = load_dataset(data_dir);
  const PathSet paths = build_paths(dataset.hin, global.threads);
  std::vector<double> y(dataset.labels.y.begin(), dataset.labels.y.end());
  double prior = 0.0;
  for (const auto v : dataset.labels.y) prior += v;
  prior /= static_cast<double>(dataset.labels.y.empty() ? 1 : dataset.labels.y.size());

  if (scaling) {
    // timings for the whole feature pass, serial vs parallel columns
    FeatureOptions opt;
    opt.prior = prior;
    for (const unsigned threads : {1u, effective_threads(global.threads)}) {
      const auto started = std::chrono::steady_clock::now();
      const auto meta = compute_all_features(paths, y, opt, threads);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
              .count();
      std::printf("all %zu feature columns with %u thread(s): %.2f ms\n", meta.cols(), threads, ms);
    }
    return 0;
  }

  BenchOptions options;
  options.repeats = repeats;
  options.dense_values_cap = dense_cap;

  std::vector<BenchMode> modes;
  if (mode == "both" || mode == "dense") modes.push_back(BenchMode::dense);
  if (mode == "both" || mode == "decomposed") modes.push_back(BenchMode::decomposed);

  auto out = open_out(out_file);
  out << "pair,mode,semantics,ms_median,peak_values,checksum\n";
  std::printf("%-4s %-52s %12s %12s  speedup (log scale)\n", "pair", "semantics", "dense_ms",
              "decomp_ms");
  for (std::size_t c = 0; c < paths.pairs.size(); ++c) {
    if (!pair_filter.empty() &&
        std::find(pair_filter.begin(), pair_filter.end(), c) == pair_filter.end()) {
      continue;
    }
    std::map<BenchMode, BenchResult> results;
    for (const auto m : modes) {
      try {
        results[m] = benchmark_pair(paths, c, m, y, prior, options);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::oracle_cap_exceeded) throw;
        HINFRAUD_LOG_WARN("pair %zu: dense mode skipped (%s)", c, e.what());
      }
    }
    for (const auto m : modes) {
      if (!results.count(m)) continue;
      const auto& r = results.at(m);
      out << c << ',' << to_string(m) << ',' << paths.pairs[c].semantics << ','
          << fmt("%.4f", r.wall_ms_median) << ',' << r.peak_intermediate_values << ','
          << fmt("%016llx", static_cast<unsigned long long>(r.checksum)) << '\n';
    }
    if (results.count(BenchMode::dense) && results.count(BenchMode::decomposed)) {
      const double dense_ms = results.at(BenchMode::dense).wall_ms_median;
      const double decomp_ms = std::max(1e-6, results.at(BenchMode::decomposed).wall_ms_median);
      const double ratio = dense_ms / decomp_ms;
      const int bars =
          std::max(0, static_cast<int>(std::lround(10.0 * std::log10(std::max(1.0, ratio)))));
      std::string semantics = paths.pairs[c].semantics;
      if (semantics.size() > 52) semantics = semantics.substr(0, 49) + "...";
      std::printf("%-4zu %-52s %12.4f %12.4f  %6.1fx %s\n", c, semantics.c_str(), dense_ms,
                  decomp_ms, ratio, std::string(static_cast<std::size_t>(bars), '#').c_str());
    }
  }
  std::printf("bench report written to %s\n", out_file.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective fraud detection over typed transaction graphs"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Root seed; every random stream derives from it");
  app.add_option("--threads", global.threads, "Worker threads (0 = all cores)");
  app.add_option("--log-level", global.log_level, "error, warn, info or debug")
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}));

  auto* generate_cmd = app.add_subcommand("generate", "Generate a synthetic dataset directory");
  std::string gen_config;
  std::string gen_out;
  generate_cmd->add_option("--config", gen_config, "Generator config JSON")->check(CLI::ExistingFile);
  generate_cmd->add_option("--out-dir", gen_out, "Output dataset directory")->required();

  auto* inspect_cmd = app.add_subcommand("inspect-paths", "List downsized traces and their pairings");
  std::string inspect_data;
  inspect_cmd->add_option("--data", inspect_data, "Dataset directory")->required();

  auto* dump_cmd = app.add_subcommand("dump-features", "Write [X, Z] with a provenance sidecar");
  std::string dump_data;
  std::string dump_out = "features_dump.csv";
  bool dump_no_exclusion = false;
  dump_cmd->add_option("--data", dump_data, "Dataset directory")->required();
  dump_cmd->add_option("--out", dump_out, "Output CSV path");
  dump_cmd->add_flag("--no-self-exclusion", dump_no_exclusion,
                     "Let a transaction's own label enter its features");

  auto* train_cmd = app.add_subcommand("train", "Fit a base classifier on the train partition");
  std::string train_data;
  std::string train_model = "model.json";
  double train_fraction = 0.25;
  ClassifierFlags train_flags;
  train_cmd->add_option("--data", train_data, "Dataset directory")->required();
  train_cmd->add_option("--model-out", train_model, "Model output path");
  train_cmd->add_option("--test-fraction", train_fraction, "Chronological holdout fraction");
  train_flags.attach(train_cmd);

  auto* predict_cmd = app.add_subcommand("predict", "Apply a saved model");
  std::string predict_data;
  std::string predict_model;
  std::string predict_out = "predictions.csv";
  std::string predict_rows = "test";
  double predict_fraction = 0.25;
  double predict_threshold = 0.5;
  predict_cmd->add_option("--data", predict_data, "Dataset directory")->required();
  predict_cmd->add_option("--model", predict_model, "Model JSON path")->required();
  predict_cmd->add_option("--out", predict_out, "Predictions output path");
  predict_cmd->add_option("--rows", predict_rows, "Rows to score: test or all")
      ->check(CLI::IsMember({"test", "all"}));
  predict_cmd->add_option("--test-fraction", predict_fraction, "Chronological holdout fraction");
  predict_cmd->add_option("--threshold", predict_threshold, "Decision threshold");

  auto* run_cmd = app.add_subcommand("run", "Collective prediction loop");
  std::string run_data;
  std::string run_out = "run_out";
  int run_iters = 10;
  double run_epsilon = 0.001;
  double run_fraction = 0.25;
  bool run_no_exclusion = false;
  bool run_soft = false;
  ClassifierFlags run_flags;
  run_cmd->add_option("--data", run_data, "Dataset directory")->required();
  run_cmd->add_option("--out-dir", run_out, "Directory for report, history and predictions");
  run_cmd->add_option("--max-iters", run_iters, "Maximum collective iterations");
  run_cmd->add_option("--epsilon", run_epsilon, "Early-stop label-change fraction");
  run_cmd->add_option("--test-fraction", run_fraction, "Chronological holdout fraction");
  run_cmd->add_flag("--no-self-exclusion", run_no_exclusion,
                    "Let a transaction's own label enter its features");
  run_cmd->add_flag("--soft-labels", run_soft,
                    "Aggregate predicted probabilities instead of hard labels");
  run_flags.attach(run_cmd);

  auto* eval_cmd =
      app.add_subcommand("evaluate", "Sliding-window evaluation and significance study");
  std::string eval_data;
  std::string eval_out = "eval_out";
  std::string eval_predictions;
  int eval_windows = 7;
  int eval_iters = 10;
  double eval_epsilon = 0.001;
  bool eval_no_exclusion = false;
  int eval_case_window = 1;
  std::size_t eval_sample = 1000;
  double eval_alpha = 0.05;
  ClassifierFlags eval_flags;
  eval_cmd->add_option("--data", eval_data, "Dataset directory")->required();
  eval_cmd->add_option("--out-dir", eval_out, "Directory for the evaluation reports");
  eval_cmd->add_option("--predictions", eval_predictions,
                       "Score a saved predictions file instead of running windows");
  eval_cmd->add_option("--windows", eval_windows, "Number of sliding windows");
  eval_cmd->add_option("--max-iters", eval_iters, "Collective iterations per window");
  eval_cmd->add_option("--epsilon", eval_epsilon, "Early-stop label-change fraction");
  eval_cmd->add_flag("--no-self-exclusion", eval_no_exclusion,
                     "Let a transaction's own label enter its features");
  eval_cmd->add_option("--case-study-window", eval_case_window,
                       "Window whose converged features get the significance test");
  eval_cmd->add_option("--sample", eval_sample, "Test transactions sampled for the case study");
  eval_cmd->add_option("--alpha", eval_alpha, "Significance level");
  eval_flags.attach(eval_cmd);

  auto* bench_cmd = app.add_subcommand("bench", "Compare dense vs decomposed feature computation");
  std::string bench_data;
  std::string bench_out = "bench_report.csv";
  int bench_repeats = 5;
  std::string bench_mode = "both";
  std::size_t bench_cap = 150000000;
  std::vector<std::size_t> bench_pairs;
  bench_cmd->add_option("--data", bench_data, "Dataset directory")->required();
  bench_cmd->add_option("--pair", bench_pairs, "Restrict to these pair indices");
  bench_cmd->add_option("--out", bench_out, "Report CSV path");
  bench_cmd->add_option("--repeats", bench_repeats, "Timed repetitions (median reported)");
  bench_cmd->add_option("--mode", bench_mode, "dense, decomposed or both")
      ->check(CLI::IsMember({"dense", "decomposed", "both"}));
  bench_cmd->add_option("--dense-cap", bench_cap, "Stored-value cap for the dense product");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  set_log_level(global.log_level);
  try {
    if (generate_cmd->parsed()) {
      return cmd_generate(global, gen_config, gen_out, app.count("--seed") > 0);
    }
    if (inspect_cmd->parsed()) return cmd_inspect_paths(inspect_data);
    if (dump_cmd->parsed()) return cmd_dump_features(global, dump_data, dump_out, dump_no_exclusion);
    if (train_cmd->parsed()) {
      return cmd_train(global, train_data, train_flags, train_fraction, train_model);
    }
    if (predict_cmd->parsed()) {
      return cmd_predict(predict_data, predict_model, predict_out, predict_rows, predict_fraction,
                         predict_threshold);
    }
    if (run_cmd->parsed()) {
      return cmd_run(global, run_data, run_flags, run_iters, run_epsilon, run_fraction,
                     run_no_exclusion, run_soft, run_out);
    }
    if (eval_cmd->parsed()) {
      if (!eval_predictions.empty()) return cmd_evaluate_predictions(eval_data, eval_predictions);
      return cmd_evaluate(global, eval_data, eval_flags, eval_windows, eval_iters, eval_epsilon,
                          eval_no_exclusion, eval_case_window, eval_sample, eval_alpha, eval_out);
    }
    if (bench_cmd->parsed()) {
      return cmd_bench(global, bench_data, bench_out, bench_repeats, bench_mode, bench_cap,
                       bench_pairs);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return is_validation_error(e.kind()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 1;
}
