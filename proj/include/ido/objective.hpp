#pragma once

#include "ido/box_integral.hpp"
#include "ido/domain.hpp"
#include "ido/surrogate.hpp"

namespace ido {

/// Decomposition of the per-iteration objective
///   value = mode(surrogate_mean) + gain_half
///         - pen_center - pen_binary - pen_cat_width - pen_group_sum
/// together with its analytic gradient. Fixed dims contribute to the
/// surrogate mean but carry zero gradient entries and are excluded from the
/// penalty sums.
struct ObjectiveReport {
  double value = 0.0;
  double surrogate_mean = 0.0;
  double gain_half = 0.0;      // lambda * sum s_i^2 over free numeric dims
  double pen_center = 0.0;     // beta * sum c_i^2 over free numeric dims
  double pen_binary = 0.0;     // mu * sum (c(1-c))^2 over free one-hot dims
  double pen_cat_width = 0.0;  // omega * sum s^2 over free one-hot dims
  double pen_group_sum = 0.0;  // gamma * sum_groups (sum c_p - 1)^2
  Vector grad_center;
  Vector grad_half;
};

ObjectiveReport evaluate(const QuadraticSurrogate& s, const BoxDomain& domain,
                         const FeatureSchema& schema, const PenaltyWeights& w,
                         const ObjectiveMode& mode);

}  // namespace ido
