#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "ido/domain.hpp"

namespace ido {

/// Evaluation contract the optimizer consumes. `fn` must be pure: the same
/// input always yields the same value, with no side effects.
struct BlackBox {
  Eigen::Index dims = 0;
  std::function<double(const Vector&)> fn;

  double operator()(const Vector& x) const { return fn(x); }
};

// ---------------------------------------------------------------------------
// Trainable models

/// One-hidden-layer perceptron [D, 16, 1]: rectifier hidden units, logistic
/// output, so eval(x) is strictly inside (0, 1).
struct MlpModel {
  Matrix hidden_weights;  // H x D
  Vector hidden_bias;     // H
  Vector output_weights;  // H
  double output_bias = 0.0;

  Eigen::Index dims() const { return hidden_weights.cols(); }
  double predict(const Vector& x) const;
  BlackBox as_black_box() const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  double value = 0.0;  // leaf: fraction of positive training rows
  int left = -1;
  int right = -1;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  double predict(const Vector& x) const;
};

/// Bagged CART ensemble; prediction is the mean of per-tree leaf fractions,
/// hence always in [0, 1].
struct TreeEnsemble {
  Eigen::Index feature_count = 0;
  std::vector<DecisionTree> trees;

  double predict(const Vector& x) const;
  BlackBox as_black_box() const;
};

/// Isotropic Gaussian kernel density with H = bandwidth * I over the support
/// rows; includes the (2 pi)^(-D/2) h^(-D) normalization so it integrates
/// to 1.
struct KdeModel {
  Matrix support;  // N x D
  double bandwidth = 0.2;

  Eigen::Index dims() const { return support.cols(); }
  BlackBox as_black_box() const;
};

inline constexpr int kMlpHiddenUnits = 16;
inline constexpr int kMlpEpochs = 200;
inline constexpr double kMlpLearningRate = 0.01;
inline constexpr int kMlpBatchSize = 32;
inline constexpr int kForestTrees = 100;
inline constexpr int kForestMaxDepth = 6;

/// Mini-batch SGD on binary cross-entropy; deterministic given seed.
/// Throws ConfigError when labels are single-class.
MlpModel mlp_train(const Matrix& features, const std::vector<int>& labels,
                   int epochs = kMlpEpochs, double learning_rate = kMlpLearningRate,
                   std::uint64_t seed = 0);

/// Bagged CART: bootstrap rows, Gini splits over a random ceil(sqrt(D))
/// feature subset per node, leaf value = positive fraction.
TreeEnsemble forest_train(const Matrix& features, const std::vector<int>& labels,
                          int n_trees = kForestTrees, int max_depth = kForestMaxDepth,
                          std::uint64_t seed = 0);

double kde_eval(const KdeModel& model, const Vector& x);

/// Pointwise product f(x) * density(x); the optimizer consumes it like any
/// other black box.
BlackBox density_weighted(BlackBox f, KdeModel density);

// ---------------------------------------------------------------------------
// Analytic test functions

BlackBox constant_fn(Eigen::Index dims, double value);
BlackBox linear_fn(Vector weights, double offset);
/// scale - sum_i (x_i - center_i)^2
BlackBox quadratic_bowl(Vector center, double scale);
/// height * exp(-|x - center|^2 / (2 width^2))
BlackBox gaussian_bump(Vector center, double width, double height = 1.0);

// ---------------------------------------------------------------------------
// Metrics

/// Area under the ROC curve via the rank statistic (ties get average rank).
double roc_auc(const std::vector<int>& labels, const Vector& scores);
double accuracy(const std::vector<int>& labels, const Vector& scores,
                double threshold = 0.5);

// ---------------------------------------------------------------------------
// Serialization

/// A trained model bundled with the feature schema it was trained on, so an
/// optimization run needs no access to the raw data.
struct SavedModel {
  std::string kind;  // "mlp" | "forest" | "kde"
  FeatureSchema schema;
  std::variant<MlpModel, TreeEnsemble, KdeModel> model;

  Eigen::Index dims() const { return schema.size(); }
  BlackBox as_black_box() const;
  const KdeModel& kde() const;
};

void save_model(const std::filesystem::path& path, const SavedModel& model);
SavedModel load_model(const std::filesystem::path& path);

}  // namespace ido
