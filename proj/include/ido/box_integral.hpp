#pragma once

#include "ido/domain.hpp"
#include "ido/surrogate.hpp"

namespace ido {

struct MeanAndGrad {
  double mean = 0.0;
  Vector d_center;  // length D
  Vector d_half;    // length D
};

/// Volume-normalized mean of the surrogate over the box:
///   M(c, s) = d + sum_i a_i c_i + sum_{i<j} b_ij c_i c_j
///           + sum_i b_ii (c_i^2 + s_i^2 / 3).
/// The raw integral's volume factor prod 2 s_k cancels against the 1/Vol
/// normalization, so it is never formed. Throws std::invalid_argument on a
/// non-positive half-length.
double box_mean(const QuadraticSurrogate& s, const BoxDomain& domain);

/// box_mean plus its analytic gradient:
///   d mean / d c_k = a_k + sum_{j != k} b_kj c_j + 2 b_kk c_k
///   d mean / d s_k = (2/3) b_kk s_k.
MeanAndGrad box_mean_grad(const QuadraticSurrogate& s, const BoxDomain& domain);

}  // namespace ido
