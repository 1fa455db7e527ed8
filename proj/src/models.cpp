#include "ido/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "ido/rng.hpp"
#include "ido/serialize.hpp"

namespace ido {

namespace {

// Logits are clamped so the logistic output stays strictly inside (0, 1).
double sigmoid(double z) {
  z = std::clamp(z, -36.0, 36.0);
  return 1.0 / (1.0 + std::exp(-z));
}

void require_binary_labels(const Matrix& features,
                           const std::vector<int>& labels) {
  if (features.rows() < 2) throw ConfigError("training needs at least 2 rows");
  if (static_cast<Eigen::Index>(labels.size()) != features.rows()) {
    throw ConfigError("training: feature/label row mismatch");
  }
  bool has0 = false;
  bool has1 = false;
  for (int label : labels) {
    if (label == 0) {
      has0 = true;
    } else if (label == 1) {
      has1 = true;
    } else {
      throw ConfigError("training: labels must be 0 or 1");
    }
  }
  if (!has0 || !has1) {
    throw ConfigError("training: labels are single-class; need both 0 and 1");
  }
}

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[uniform_index(rng, i)]);
  }
  return order;
}

}  // namespace

// ---------------------------------------------------------------------------
// MLP

double MlpModel::predict(const Vector& x) const {
  const Vector hidden =
      (hidden_weights * x + hidden_bias).cwiseMax(0.0);
  return sigmoid(output_weights.dot(hidden) + output_bias);
}

BlackBox MlpModel::as_black_box() const {
  return BlackBox{dims(), [model = *this](const Vector& x) {
                    return model.predict(x);
                  }};
}

MlpModel mlp_train(const Matrix& features, const std::vector<int>& labels,
                   int epochs, double learning_rate, std::uint64_t seed) {
  require_binary_labels(features, labels);
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();
  const Eigen::Index h = kMlpHiddenUnits;

  Rng rng(seed);
  MlpModel model;
  model.hidden_weights = Matrix(h, d);
  model.hidden_bias = Vector::Zero(h);
  model.output_weights = Vector(h);
  model.output_bias = 0.0;
  const double limit1 = std::sqrt(6.0 / static_cast<double>(d + h));
  for (Eigen::Index r = 0; r < h; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      model.hidden_weights(r, c) = uniform_in(rng, -limit1, limit1);
    }
  }
  const double limit2 = std::sqrt(6.0 / static_cast<double>(h + 1));
  for (Eigen::Index r = 0; r < h; ++r) {
    model.output_weights[r] = uniform_in(rng, -limit2, limit2);
  }

  Vector targets(n);
  for (Eigen::Index i = 0; i < n; ++i) targets[i] = labels[static_cast<std::size_t>(i)];

  for (int epoch = 0; epoch < epochs; ++epoch) {
    const auto order = shuffled_indices(static_cast<std::size_t>(n), rng);
    for (Eigen::Index start = 0; start < n; start += kMlpBatchSize) {
      const Eigen::Index size = std::min<Eigen::Index>(kMlpBatchSize, n - start);
      Matrix batch(size, d);
      Vector y(size);
      for (Eigen::Index r = 0; r < size; ++r) {
        const auto row = static_cast<Eigen::Index>(order[static_cast<std::size_t>(start + r)]);
        batch.row(r) = features.row(row);
        y[r] = targets[row];
      }

      const Matrix pre = (batch * model.hidden_weights.transpose()).rowwise() +
                         model.hidden_bias.transpose();
      const Matrix hidden = pre.cwiseMax(0.0);
      Vector prob = hidden * model.output_weights;
      prob.array() += model.output_bias;
      for (Eigen::Index r = 0; r < size; ++r) prob[r] = sigmoid(prob[r]);

      // Cross-entropy gradient through the logistic output.
      const Vector dlogit = (prob - y) / static_cast<double>(size);
      const Vector grad_out_w = hidden.transpose() * dlogit;
      const double grad_out_b = dlogit.sum();
      Matrix dhidden = dlogit * model.output_weights.transpose();
      dhidden = (pre.array() > 0.0).select(dhidden, 0.0);
      const Matrix grad_hid_w = dhidden.transpose() * batch;
      const Vector grad_hid_b = dhidden.colwise().sum();

      model.output_weights -= learning_rate * grad_out_w;
      model.output_bias -= learning_rate * grad_out_b;
      model.hidden_weights -= learning_rate * grad_hid_w;
      model.hidden_bias -= learning_rate * grad_hid_b;
    }
  }
  return model;
}

// ---------------------------------------------------------------------------
// Decision trees

double DecisionTree::predict(const Vector& x) const {
  int at = 0;
  while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
    const TreeNode& node = nodes[static_cast<std::size_t>(at)];
    at = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return nodes[static_cast<std::size_t>(at)].value;
}

double TreeEnsemble::predict(const Vector& x) const {
  double sum = 0.0;
  for (const auto& tree : trees) sum += tree.predict(x);
  return sum / static_cast<double>(trees.size());
}

BlackBox TreeEnsemble::as_black_box() const {
  return BlackBox{feature_count, [model = *this](const Vector& x) {
                    return model.predict(x);
                  }};
}

namespace {

struct TreeBuilder {
  const Matrix& features;
  const std::vector<int>& labels;
  int max_depth;
  int features_per_split;
  Rng& rng;
  std::vector<TreeNode> nodes;

  double positive_fraction(const std::vector<Eigen::Index>& rows) const {
    double pos = 0.0;
    for (auto r : rows) pos += labels[static_cast<std::size_t>(r)];
    return pos / static_cast<double>(rows.size());
  }

  static double gini(double p) { return 2.0 * p * (1.0 - p); }

  int build(std::vector<Eigen::Index>& rows, int depth) {
    const int index = static_cast<int>(nodes.size());
    nodes.emplace_back();
    const double p = positive_fraction(rows);
    if (depth >= max_depth || rows.size() < 2 || p == 0.0 || p == 1.0) {
      nodes[static_cast<std::size_t>(index)].value = p;
      return index;
    }

    // Random feature subset, then an exact Gini sweep over each candidate.
    const auto d = static_cast<std::size_t>(features.cols());
    std::vector<int> candidates(d);
    std::iota(candidates.begin(), candidates.end(), 0);
    for (int k = 0; k < features_per_split; ++k) {
      const auto pick = k + static_cast<int>(uniform_index(rng, d - static_cast<std::size_t>(k)));
      std::swap(candidates[static_cast<std::size_t>(k)], candidates[static_cast<std::size_t>(pick)]);
    }

    const double parent = gini(p);
    const auto n = static_cast<double>(rows.size());
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = parent - 1e-12;
    std::vector<std::pair<double, int>> sorted(rows.size());
    for (int k = 0; k < features_per_split; ++k) {
      const int feature = candidates[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < rows.size(); ++i) {
        sorted[i] = {features(rows[i], feature), labels[static_cast<std::size_t>(rows[i])]};
      }
      std::sort(sorted.begin(), sorted.end());
      double left_pos = 0.0;
      const double total_pos = p * n;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        left_pos += sorted[i].second;
        if (sorted[i].first == sorted[i + 1].first) continue;
        const double nl = static_cast<double>(i + 1);
        const double nr = n - nl;
        const double score =
            (nl * gini(left_pos / nl) + nr * gini((total_pos - left_pos) / nr)) / n;
        if (score < best_score) {
          best_score = score;
          best_feature = feature;
          best_threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
        }
      }
    }

    if (best_feature < 0) {
      nodes[static_cast<std::size_t>(index)].value = p;
      return index;
    }

    std::vector<Eigen::Index> left_rows;
    std::vector<Eigen::Index> right_rows;
    for (auto r : rows) {
      (features(r, best_feature) <= best_threshold ? left_rows : right_rows)
          .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int left = build(left_rows, depth + 1);
    const int right = build(right_rows, depth + 1);
    TreeNode& node = nodes[static_cast<std::size_t>(index)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left;
    node.right = right;
    return index;
  }
};

}  // namespace

TreeEnsemble forest_train(const Matrix& features, const std::vector<int>& labels,
                          int n_trees, int max_depth, std::uint64_t seed) {
  require_binary_labels(features, labels);
  if (n_trees < 1) throw ConfigError("forest_train: n_trees must be >= 1");
  if (max_depth < 1) throw ConfigError("forest_train: max_depth must be >= 1");
  const auto n = static_cast<std::size_t>(features.rows());
  const auto d = static_cast<double>(features.cols());
  const int per_split = static_cast<int>(std::ceil(std::sqrt(d)));

  TreeEnsemble ensemble;
  ensemble.feature_count = features.cols();
  ensemble.trees.reserve(static_cast<std::size_t>(n_trees));
  for (int t = 0; t < n_trees; ++t) {
    Rng rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(t + 1));
    std::vector<Eigen::Index> rows(n);
    for (auto& row : rows) {
      row = static_cast<Eigen::Index>(uniform_index(rng, n));
    }
    TreeBuilder builder{features, labels, max_depth, per_split, rng, {}};
    builder.build(rows, 0);
    ensemble.trees.push_back(DecisionTree{std::move(builder.nodes)});
  }
  return ensemble;
}

// ---------------------------------------------------------------------------
// Kernel density

double kde_eval(const KdeModel& model, const Vector& x) {
  if (!(model.bandwidth > 0.0)) throw ConfigError("kde: bandwidth must be > 0");
  if (x.size() != model.dims()) {
    throw ConfigError("kde: point dimension mismatch");
  }
  const auto n = static_cast<double>(model.support.rows());
  const auto d = static_cast<double>(model.dims());
  const double h = model.bandwidth;
  const double log_norm =
      -0.5 * d * std::log(2.0 * M_PI) - d * std::log(h);
  const double inv_two_h2 = 1.0 / (2.0 * h * h);
  const Vector sq_dist =
      (model.support.rowwise() - x.transpose()).rowwise().squaredNorm();
  const double kernel_sum = (-inv_two_h2 * sq_dist.array()).exp().sum();
  return std::exp(log_norm) * kernel_sum / n;
}

BlackBox KdeModel::as_black_box() const {
  return BlackBox{dims(), [model = *this](const Vector& x) {
                    return kde_eval(model, x);
                  }};
}

BlackBox density_weighted(BlackBox f, KdeModel density) {
  if (f.dims != density.dims()) {
    throw ConfigError("density_weighted: dimension mismatch");
  }
  const Eigen::Index dims = f.dims;
  return BlackBox{dims, [f = std::move(f), density = std::move(density)](
                            const Vector& x) {
                    return f.fn(x) * kde_eval(density, x);
                  }};
}

// ---------------------------------------------------------------------------
// Analytic test functions

BlackBox constant_fn(Eigen::Index dims, double value) {
  return BlackBox{dims, [value](const Vector&) { return value; }};
}

BlackBox linear_fn(Vector weights, double offset) {
  const Eigen::Index dims = weights.size();
  return BlackBox{dims, [weights = std::move(weights), offset](const Vector& x) {
                    return weights.dot(x) + offset;
                  }};
}

BlackBox quadratic_bowl(Vector center, double scale) {
  const Eigen::Index dims = center.size();
  return BlackBox{dims, [center = std::move(center), scale](const Vector& x) {
                    return scale - (x - center).squaredNorm();
                  }};
}

BlackBox gaussian_bump(Vector center, double width, double height) {
  const Eigen::Index dims = center.size();
  return BlackBox{dims, [center = std::move(center), width, height](const Vector& x) {
                    return height *
                           std::exp(-(x - center).squaredNorm() / (2.0 * width * width));
                  }};
}

// ---------------------------------------------------------------------------
// Metrics

double roc_auc(const std::vector<int>& labels, const Vector& scores) {
  const auto n = labels.size();
  if (static_cast<std::size_t>(scores.size()) != n) {
    throw ConfigError("roc_auc: label/score size mismatch");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[static_cast<Eigen::Index>(a)] < scores[static_cast<Eigen::Index>(b)];
  });

  double positives = 0.0;
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[static_cast<Eigen::Index>(order[j + 1])] ==
                            scores[static_cast<Eigen::Index>(order[i])]) {
      ++j;
    }
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) {
        positives += 1.0;
        rank_sum += avg_rank;
      }
    }
    i = j + 1;
  }
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw ConfigError("roc_auc: needs both classes");
  }
  return (rank_sum - positives * (positives + 1.0) / 2.0) /
         (positives * negatives);
}

double accuracy(const std::vector<int>& labels, const Vector& scores,
                double threshold) {
  if (static_cast<std::size_t>(scores.size()) != labels.size()) {
    throw ConfigError("accuracy: label/score size mismatch");
  }
  double hits = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int predicted = scores[static_cast<Eigen::Index>(i)] >= threshold ? 1 : 0;
    if (predicted == labels[i]) hits += 1.0;
  }
  return hits / static_cast<double>(labels.size());
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

using nlohmann::json;

json mlp_to_json(const MlpModel& m) {
  return json{{"hidden_weights", to_json_array(m.hidden_weights)},
              {"hidden_bias", to_json_array(m.hidden_bias)},
              {"output_weights", to_json_array(m.output_weights)},
              {"output_bias", m.output_bias}};
}

MlpModel mlp_from_json(const json& j) {
  MlpModel m;
  m.hidden_weights = matrix_from_json(j.at("hidden_weights"));
  m.hidden_bias = vector_from_json(j.at("hidden_bias"));
  m.output_weights = vector_from_json(j.at("output_weights"));
  m.output_bias = j.at("output_bias").get<double>();
  return m;
}

json forest_to_json(const TreeEnsemble& f) {
  json trees = json::array();
  for (const auto& tree : f.trees) {
    json nodes = json::array();
    for (const auto& node : tree.nodes) {
      nodes.push_back(json{{"feature", node.feature},
                           {"threshold", node.threshold},
                           {"value", node.value},
                           {"left", node.left},
                           {"right", node.right}});
    }
    trees.push_back(json{{"nodes", std::move(nodes)}});
  }
  return json{{"feature_count", f.feature_count}, {"trees", std::move(trees)}};
}

TreeEnsemble forest_from_json(const json& j) {
  TreeEnsemble f;
  f.feature_count = j.at("feature_count").get<Eigen::Index>();
  for (const auto& jt : j.at("trees")) {
    DecisionTree tree;
    for (const auto& jn : jt.at("nodes")) {
      TreeNode node;
      node.feature = jn.at("feature").get<int>();
      node.threshold = jn.at("threshold").get<double>();
      node.value = jn.at("value").get<double>();
      node.left = jn.at("left").get<int>();
      node.right = jn.at("right").get<int>();
      tree.nodes.push_back(node);
    }
    f.trees.push_back(std::move(tree));
  }
  return f;
}

json kde_to_json(const KdeModel& k) {
  return json{{"bandwidth", k.bandwidth}, {"support", to_json_array(k.support)}};
}

KdeModel kde_from_json(const json& j) {
  KdeModel k;
  k.bandwidth = j.at("bandwidth").get<double>();
  k.support = matrix_from_json(j.at("support"));
  return k;
}

}  // namespace

BlackBox SavedModel::as_black_box() const {
  return std::visit([](const auto& m) { return m.as_black_box(); }, model);
}

const KdeModel& SavedModel::kde() const {
  if (const auto* k = std::get_if<KdeModel>(&model)) return *k;
  throw ConfigError("model '" + kind + "' is not a density");
}

void save_model(const std::filesystem::path& path, const SavedModel& model) {
  json j;
  j["kind"] = model.kind;
  j["schema"] = model.schema;
  if (const auto* m = std::get_if<MlpModel>(&model.model)) {
    j["model"] = mlp_to_json(*m);
  } else if (const auto* f = std::get_if<TreeEnsemble>(&model.model)) {
    j["model"] = forest_to_json(*f);
  } else {
    j["model"] = kde_to_json(std::get<KdeModel>(model.model));
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

SavedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("model JSON '" + path.string() + "': " + e.what());
  }
  SavedModel model;
  try {
    model.kind = j.at("kind").get<std::string>();
    model.schema = j.at("schema").get<FeatureSchema>();
    const auto& jm = j.at("model");
    if (model.kind == "mlp") {
      model.model = mlp_from_json(jm);
    } else if (model.kind == "forest") {
      model.model = forest_from_json(jm);
    } else if (model.kind == "kde") {
      model.model = kde_from_json(jm);
    } else {
      throw ConfigError("unknown model kind '" + model.kind + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError("model JSON '" + path.string() + "': " + e.what());
  }
  validate(model.schema);
  if (model.as_black_box().dims != model.schema.size()) {
    throw ConfigError("model '" + path.string() +
                      "' dimension disagrees with its schema");
  }
  return model;
}

}  // namespace ido
