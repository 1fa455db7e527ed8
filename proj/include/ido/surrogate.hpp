#pragma once

#include "ido/domain.hpp"
#include "ido/rng.hpp"

namespace ido {

/// Number of coefficients of a degree-2 polynomial in `dims` variables:
/// P = 1 + D + D(D+1)/2.
inline Eigen::Index coefficient_count(Eigen::Index dims) {
  return 1 + dims + dims * (dims + 1) / 2;
}

/// Position of the pair (i, j), i <= j, in the packed upper triangle laid out
/// lexicographically: (0,0)..(0,D-1), (1,1)..(1,D-1), ..., (D-1,D-1).
inline Eigen::Index packed_index(Eigen::Index dims, Eigen::Index i,
                                 Eigen::Index j) {
  if (i > j) std::swap(i, j);
  return i * dims - i * (i - 1) / 2 + (j - i);
}

/// Degree-2 polynomial g(x) = constant + sum_i linear[i] x_i
/// + sum_{i<=j} quad(i,j) x_i x_j.
struct QuadraticSurrogate {
  double constant = 0.0;
  Vector linear;  // length D
  Vector quad;    // packed upper triangle, length D(D+1)/2

  static QuadraticSurrogate zero(Eigen::Index dims);

  Eigen::Index dims() const { return linear.size(); }

  double quad_at(Eigen::Index i, Eigen::Index j) const {
    return quad[packed_index(dims(), i, j)];
  }
  double& quad_at(Eigen::Index i, Eigen::Index j) {
    return quad[packed_index(dims(), i, j)];
  }

  double evaluate(const Vector& x) const;
};

struct SampleBatch {
  Matrix inputs;   // K x D, rows inside the generating box
  Vector outputs;  // K
};

/// Draws `count` points, each dim independently uniform on
/// [c_j - s_j, c_j + s_j]; FixedValue dims emit exactly the pinned value.
/// Deterministic given the engine state.
Matrix sample_box(const BoxDomain& domain, const FeatureSchema& schema,
                  int count, Rng& rng);

/// K x P matrix with columns [1, x_1..x_D, x_i x_j for i <= j lexicographic].
Matrix design_matrix(const Matrix& inputs);

/// Least-squares fit of the degree-2 surrogate over the design matrix,
/// minimizing |Xw - y|^2 + ridge |w'|^2 where w' excludes the intercept.
/// ridge = 0 requires a full-rank design; otherwise throws ConfigError
/// instructing ridge > 0.
QuadraticSurrogate fit(const SampleBatch& batch, double ridge);

}  // namespace ido
