#include "hinfraud/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "hinfraud/error.hpp"
#include "hinfraud/parallel.hpp"
#include "hinfraud/rng.hpp"

namespace hinfraud {

std::string_view to_string(ClassifierKind kind) {
  return kind == ClassifierKind::logistic_regression ? "logistic_regression" : "random_forest";
}

std::optional<ClassifierKind> classifier_kind_from_string(std::string_view name) {
  if (name == "logistic_regression" || name == "logistic" || name == "lr") {
    return ClassifierKind::logistic_regression;
  }
  if (name == "random_forest" || name == "forest" || name == "rf") {
    return ClassifierKind::random_forest;
  }
  return std::nullopt;
}

void ClassifierSpec::validate() const {
  if (epochs < 1) raise(ErrorKind::config_invalid, "epochs must be >= 1");
  if (tree_count < 1) raise(ErrorKind::config_invalid, "tree count must be >= 1");
  if (max_depth < 1) raise(ErrorKind::config_invalid, "max depth must be >= 1");
  if (!(threshold >= 0.0) || !(threshold <= 1.0)) {
    // thresholds above 1 are allowed only through predict_labels' explicit argument
    raise(ErrorKind::config_invalid, "threshold must lie in [0, 1]");
  }
  if (!(learning_rate > 0.0)) raise(ErrorKind::config_invalid, "learning rate must be positive");
  if (l2 < 0.0) raise(ErrorKind::config_invalid, "l2 must be >= 0");
  if (feature_subsample < 0.0 || feature_subsample > 1.0) {
    raise(ErrorKind::config_invalid, "feature subsample must lie in [0, 1]");
  }
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_training_input(const Matrix& x, std::span<const std::uint8_t> y) {
  if (x.rows() != y.size()) raise(ErrorKind::length_mismatch, "rows of X vs labels");
  if (x.rows() == 0) raise(ErrorKind::config_invalid, "empty training set");
  bool has_fraud = false;
  bool has_normal = false;
  for (const auto label : y) (label != 0 ? has_fraud : has_normal) = true;
  if (!has_fraud || !has_normal) {
    raise(ErrorKind::single_class_training_set, "training labels contain a single class");
  }
  for (const double v : x.data()) {
    if (!std::isfinite(v)) raise(ErrorKind::non_finite_feature, "non-finite value in features");
  }
}

std::pair<double, double> class_weights(std::span<const std::uint8_t> y, bool enabled) {
  if (!enabled) return {1.0, 1.0};
  const auto n = static_cast<double>(y.size());
  double n1 = 0.0;
  for (const auto label : y) n1 += label;
  const double n0 = n - n1;
  return {n / (2.0 * n0), n / (2.0 * n1)};
}

// ---- logistic regression ----

TrainedModel fit_logistic(const ClassifierSpec& spec, const Matrix& x,
                          std::span<const std::uint8_t> y) {
  const std::size_t n = x.rows();
  const std::size_t f = x.cols();
  const auto [w0, w1] = class_weights(y, spec.class_weighting);

  std::vector<double> weights(f, 0.0);
  double bias = 0.0;
  std::vector<double> gradient(f);
  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    std::fill(gradient.begin(), gradient.end(), 0.0);
    double bias_gradient = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = x.row(i);
      double score = bias;
      for (std::size_t j = 0; j < f; ++j) score += weights[j] * row[j];
      const double sample_weight = y[i] != 0 ? w1 : w0;
      const double residual = sample_weight * (sigmoid(score) - static_cast<double>(y[i]));
      for (std::size_t j = 0; j < f; ++j) gradient[j] += residual * row[j];
      bias_gradient += residual;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < f; ++j) {
      weights[j] -= spec.learning_rate * (gradient[j] * inv_n + spec.l2 * weights[j]);
    }
    bias -= spec.learning_rate * bias_gradient * inv_n;
  }

  TrainedModel model;
  model.kind = ClassifierKind::logistic_regression;
  model.feature_count = f;
  model.weights = std::move(weights);
  model.bias = bias;
  return model;
}

// ---- random forest ----
//
// Split search runs on per-fit quantile bins (at most 256 per feature); split
// thresholds are placed midway between the adjacent observed bin extremes so
// prediction reproduces the training partition exactly.

struct BinnedFeature {
  std::vector<std::uint16_t> codes;      // per training row
  std::vector<double> upper_threshold;   // real threshold for "code <= q"
  std::uint16_t bin_count = 0;
};

BinnedFeature bin_feature(std::span<const double> column) {
  constexpr std::size_t kMaxBins = 256;
  const std::size_t n = column.size();
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<double> edges;  // bin b holds values in (edges[b-1], edges[b]]
  if (sorted.size() <= kMaxBins) {
    edges = sorted;
  } else {
    edges.reserve(kMaxBins);
    for (std::size_t b = 1; b <= kMaxBins; ++b) {
      edges.push_back(sorted[b * sorted.size() / kMaxBins - 1]);
    }
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }

  BinnedFeature out;
  out.bin_count = static_cast<std::uint16_t>(edges.size());
  out.codes.resize(n);
  std::vector<double> bin_min(edges.size(), std::numeric_limits<double>::infinity());
  std::vector<double> bin_max(edges.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = std::lower_bound(edges.begin(), edges.end(), column[i]);
    const auto code = static_cast<std::uint16_t>(
        it == edges.end() ? edges.size() - 1 : static_cast<std::size_t>(it - edges.begin()));
    out.codes[i] = code;
    bin_min[code] = std::min(bin_min[code], column[i]);
    bin_max[code] = std::max(bin_max[code], column[i]);
  }
  out.upper_threshold.resize(edges.size());
  for (std::size_t b = 0; b < edges.size(); ++b) {
    double next_min = std::numeric_limits<double>::infinity();
    for (std::size_t nb = b + 1; nb < edges.size(); ++nb) {
      if (bin_min[nb] != std::numeric_limits<double>::infinity()) {
        next_min = bin_min[nb];
        break;
      }
    }
    const double own_max = bin_max[b] == -std::numeric_limits<double>::infinity() ? edges[b] : bin_max[b];
    out.upper_threshold[b] =
        next_min == std::numeric_limits<double>::infinity() ? own_max : 0.5 * (own_max + next_min);
  }
  return out;
}

struct TreeBuilder {
  const std::vector<BinnedFeature>& bins;
  std::span<const std::uint8_t> y;
  const ClassifierSpec& spec;
  double weight0 = 1.0;
  double weight1 = 1.0;
  std::size_t mtry = 1;
  Rng rng;
  std::vector<TreeNode> nodes;
  std::vector<std::uint32_t> feature_pool;

  TreeBuilder(const std::vector<BinnedFeature>& bins_, std::span<const std::uint8_t> y_,
              const ClassifierSpec& spec_, double w0, double w1, std::size_t mtry_,
              std::uint64_t seed)
      : bins(bins_), y(y_), spec(spec_), weight0(w0), weight1(w1), mtry(mtry_), rng(seed) {
    feature_pool.resize(bins.size());
    std::iota(feature_pool.begin(), feature_pool.end(), 0u);
  }

  std::int32_t build(std::vector<std::uint32_t>& samples, int depth) {
    double count0 = 0.0;
    double count1 = 0.0;
    for (const auto i : samples) (y[i] != 0 ? count1 : count0) += y[i] != 0 ? weight1 : weight0;
    const double total = count0 + count1;
    const double fraud_fraction = total > 0.0 ? count1 / total : 0.0;

    const auto make_leaf = [&]() {
      nodes.push_back(TreeNode{-1, 0.0, -1, -1, fraud_fraction});
      return static_cast<std::int32_t>(nodes.size() - 1);
    };
    if (depth >= spec.max_depth || samples.size() < 2 || count0 == 0.0 || count1 == 0.0) {
      return make_leaf();
    }

    // draw the candidate features for this node
    for (std::size_t k = 0; k < mtry; ++k) {
      const auto pick = k + rng.next_below(feature_pool.size() - k);
      std::swap(feature_pool[k], feature_pool[pick]);
    }

    double best_score = std::numeric_limits<double>::infinity();
    std::uint32_t best_feature = 0;
    std::uint16_t best_bin = 0;
    std::vector<double> left0(256), left1(256);
    for (std::size_t k = 0; k < mtry; ++k) {
      const auto feature = feature_pool[k];
      const auto& binned = bins[feature];
      const auto b = static_cast<std::uint16_t>(binned.bin_count);
      std::fill(left0.begin(), left0.begin() + b, 0.0);
      std::fill(left1.begin(), left1.begin() + b, 0.0);
      for (const auto i : samples) {
        const auto code = binned.codes[i];
        (y[i] != 0 ? left1[code] : left0[code]) += y[i] != 0 ? weight1 : weight0;
      }
      double acc0 = 0.0;
      double acc1 = 0.0;
      for (std::uint16_t q = 0; q + 1 < b; ++q) {
        acc0 += left0[q];
        acc1 += left1[q];
        const double nl = acc0 + acc1;
        const double nr = total - nl;
        if (nl <= 0.0 || nr <= 0.0) continue;
        const double r0 = count0 - acc0;
        const double r1 = count1 - acc1;
        // weighted Gini impurity of the partition
        const double gini_left = 1.0 - (acc0 * acc0 + acc1 * acc1) / (nl * nl);
        const double gini_right = 1.0 - (r0 * r0 + r1 * r1) / (nr * nr);
        const double score = (nl * gini_left + nr * gini_right) / total;
        if (score < best_score) {
          best_score = score;
          best_feature = feature;
          best_bin = q;
        }
      }
    }
    if (!std::isfinite(best_score)) return make_leaf();

    const double parent_gini = 1.0 - (count0 * count0 + count1 * count1) / (total * total);
    if (best_score >= parent_gini - 1e-12) return make_leaf();

    std::vector<std::uint32_t> left_samples;
    std::vector<std::uint32_t> right_samples;
    const auto& codes = bins[best_feature].codes;
    for (const auto i : samples) {
      (codes[i] <= best_bin ? left_samples : right_samples).push_back(i);
    }
    samples.clear();
    samples.shrink_to_fit();

    const auto node_index = static_cast<std::int32_t>(nodes.size());
    nodes.push_back(TreeNode{static_cast<std::int32_t>(best_feature),
                             bins[best_feature].upper_threshold[best_bin], -1, -1, fraud_fraction});
    const auto left_child = build(left_samples, depth + 1);
    const auto right_child = build(right_samples, depth + 1);
    nodes[node_index].left = left_child;
    nodes[node_index].right = right_child;
    return node_index;
  }
};

TrainedModel fit_forest(const ClassifierSpec& spec, const Matrix& x,
                        std::span<const std::uint8_t> y, unsigned threads) {
  const std::size_t n = x.rows();
  const std::size_t f = x.cols();
  const auto [w0, w1] = class_weights(y, spec.class_weighting);
  const std::size_t mtry =
      spec.feature_subsample > 0.0
          ? std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(spec.feature_subsample * f)), 1, f)
          : std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(f)))), 1, f);

  std::vector<BinnedFeature> bins(f);
  std::vector<double> column(n);
  for (std::size_t j = 0; j < f; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = x(i, j);
    bins[j] = bin_feature(column);
  }

  TrainedModel model;
  model.kind = ClassifierKind::random_forest;
  model.feature_count = f;
  model.trees.resize(spec.tree_count);
  parallel_for(static_cast<std::size_t>(spec.tree_count), threads, [&](std::size_t t) {
    Rng boot(derive_seed(spec.seed, "forest.bootstrap", t));
    std::vector<std::uint32_t> samples(n);
    for (std::size_t i = 0; i < n; ++i) samples[i] = static_cast<std::uint32_t>(boot.next_below(n));
    TreeBuilder builder(bins, y, spec, w0, w1, mtry, derive_seed(spec.seed, "forest.splits", t));
    builder.build(samples, 0);
    model.trees[t] = std::move(builder.nodes);
  });
  return model;
}

double tree_leaf_value(const std::vector<TreeNode>& tree, std::span<const double> row) {
  std::int32_t at = 0;
  while (tree[at].feature >= 0) {
    at = row[tree[at].feature] <= tree[at].threshold ? tree[at].left : tree[at].right;
  }
  return tree[at].leaf_value;
}

}  // namespace

TrainedModel fit(const ClassifierSpec& spec, const Matrix& x, std::span<const std::uint8_t> y,
                 unsigned threads) {
  spec.validate();
  check_training_input(x, y);
  if (spec.kind == ClassifierKind::logistic_regression) return fit_logistic(spec, x, y);
  return fit_forest(spec, x, y, threads);
}

std::vector<double> predict_proba(const TrainedModel& model, const Matrix& x) {
  if (x.cols() != model.feature_count) {
    raise(ErrorKind::shape_mismatch, "model was fit on " + std::to_string(model.feature_count) +
                                         " features, input has " + std::to_string(x.cols()));
  }
  std::vector<double> proba(x.rows(), 0.0);
  if (model.kind == ClassifierKind::logistic_regression) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const auto row = x.row(i);
      double score = model.bias;
      for (std::size_t j = 0; j < row.size(); ++j) score += model.weights[j] * row[j];
      proba[i] = sigmoid(score);
    }
    return proba;
  }
  const double inv_trees = 1.0 / static_cast<double>(model.trees.size());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    double votes = 0.0;
    for (const auto& tree : model.trees) {
      if (tree_leaf_value(tree, row) >= 0.5) votes += 1.0;
    }
    proba[i] = votes * inv_trees;
  }
  return proba;
}

std::vector<std::uint8_t> labels_from_proba(std::span<const double> proba, double threshold) {
  std::vector<std::uint8_t> labels(proba.size(), 0);
  for (std::size_t i = 0; i < proba.size(); ++i) labels[i] = proba[i] >= threshold ? 1 : 0;
  return labels;
}

std::vector<std::uint8_t> predict_labels(const TrainedModel& model, const Matrix& x,
                                         double threshold) {
  const auto proba = predict_proba(model, x);
  return labels_from_proba(proba, threshold);
}

double logistic_loss(const Matrix& x, std::span<const std::uint8_t> y,
                     std::span<const double> weights, double bias, double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    double score = bias;
    for (std::size_t j = 0; j < row.size(); ++j) score += weights[j] * row[j];
    // numerically stable log(1 + exp(.))
    const double softplus = score > 0.0 ? score + std::log1p(std::exp(-score)) : std::log1p(std::exp(score));
    loss += softplus - static_cast<double>(y[i]) * score;
  }
  loss /= static_cast<double>(x.rows());
  double penalty = 0.0;
  for (const double w : weights) penalty += w * w;
  return loss + 0.5 * l2 * penalty;
}

std::vector<double> logistic_loss_gradient(const Matrix& x, std::span<const std::uint8_t> y,
                                           std::span<const double> weights, double bias, double l2,
                                           double* bias_gradient) {
  std::vector<double> gradient(weights.size(), 0.0);
  double bias_grad = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    double score = bias;
    for (std::size_t j = 0; j < row.size(); ++j) score += weights[j] * row[j];
    const double residual = sigmoid(score) - static_cast<double>(y[i]);
    for (std::size_t j = 0; j < row.size(); ++j) gradient[j] += residual * row[j];
    bias_grad += residual;
  }
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  for (std::size_t j = 0; j < gradient.size(); ++j) {
    gradient[j] = gradient[j] * inv_n + l2 * weights[j];
  }
  if (bias_gradient != nullptr) *bias_gradient = bias_grad * inv_n;
  return gradient;
}

// ---- serialization ----

std::string TrainedModel::to_json_text() const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["kind"] = std::string(to_string(kind));
  j["feature_count"] = feature_count;
  if (kind == ClassifierKind::logistic_regression) {
    j["weights"] = weights;
    j["bias"] = bias;
  } else {
    nlohmann::json trees_json = nlohmann::json::array();
    for (const auto& tree : trees) {
      nlohmann::json nodes = nlohmann::json::array();
      for (const auto& node : tree) {
        nodes.push_back({node.feature, node.threshold, node.left, node.right, node.leaf_value});
      }
      trees_json.push_back(std::move(nodes));
    }
    j["trees"] = std::move(trees_json);
  }
  return j.dump() + "\n";
}

TrainedModel TrainedModel::from_json_text(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) raise(ErrorKind::parse_error, "model file is not valid JSON");
  if (j.value("format_version", 0) != 1) {
    raise(ErrorKind::parse_error, "unsupported model format version");
  }
  TrainedModel model;
  const auto kind = classifier_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) raise(ErrorKind::parse_error, "unknown classifier kind in model file");
  model.kind = *kind;
  model.feature_count = j.at("feature_count").get<std::size_t>();
  if (model.kind == ClassifierKind::logistic_regression) {
    model.weights = j.at("weights").get<std::vector<double>>();
    model.bias = j.at("bias").get<double>();
    if (model.weights.size() != model.feature_count) {
      raise(ErrorKind::parse_error, "weight count does not match feature count");
    }
  } else {
    for (const auto& tree_json : j.at("trees")) {
      std::vector<TreeNode> tree;
      for (const auto& node_json : tree_json) {
        TreeNode node;
        node.feature = node_json.at(0).get<std::int32_t>();
        node.threshold = node_json.at(1).get<double>();
        node.left = node_json.at(2).get<std::int32_t>();
        node.right = node_json.at(3).get<std::int32_t>();
        node.leaf_value = node_json.at(4).get<double>();
        tree.push_back(node);
      }
      model.trees.push_back(std::move(tree));
    }
    if (model.trees.empty()) raise(ErrorKind::parse_error, "forest model has no trees");
  }
  return model;
}

void TrainedModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorKind::io_error, "cannot write model file " + path.string());
  out << to_json_text();
}

TrainedModel TrainedModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::io_error, "cannot open model file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

}  // namespace hinfraud
