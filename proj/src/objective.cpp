#include "ido/objective.hpp"

namespace ido {

ObjectiveReport evaluate(const QuadraticSurrogate& s, const BoxDomain& domain,
                         const FeatureSchema& schema, const PenaltyWeights& w,
                         const ObjectiveMode& mode) {
  validate(w);
  if (schema.size() != domain.dims()) {
    throw ConfigError("evaluate: domain/schema dimension mismatch");
  }
  const Eigen::Index d = domain.dims();
  const MeanAndGrad mg = box_mean_grad(s, domain);
  const std::vector<bool> mask = free_mask(schema);

  ObjectiveReport report;
  report.surrogate_mean = mg.mean;
  report.grad_center = Vector::Zero(d);
  report.grad_half = Vector::Zero(d);

  // Mode transform of the surrogate mean and its chain-rule factor.
  double transformed = 0.0;
  double chain = 0.0;
  if (std::holds_alternative<Maximize>(mode)) {
    transformed = mg.mean;
    chain = 1.0;
  } else if (std::holds_alternative<Minimize>(mode)) {
    transformed = -mg.mean;
    chain = -1.0;
  } else {
    const double target = std::get<TargetMean>(mode).target;
    transformed = -(mg.mean - target) * (mg.mean - target);
    chain = -2.0 * (mg.mean - target);
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    report.grad_center[i] = chain * mg.d_center[i];
    report.grad_half[i] = chain * mg.d_half[i];
  }

  for (Eigen::Index i = 0; i < d; ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    const DimSpec& spec = schema.dims[static_cast<std::size_t>(i)];
    const double c = domain.centers[i];
    const double h = domain.half_lengths[i];
    if (spec.kind == DimKind::Numeric) {
      report.gain_half += w.lambda * h * h;
      report.pen_center += w.beta * c * c;
      report.grad_half[i] += 2.0 * w.lambda * h;
      report.grad_center[i] -= 2.0 * w.beta * c;
    } else {
      const double binary = c * (1.0 - c);
      report.pen_binary += w.mu * binary * binary;
      report.pen_cat_width += w.omega * h * h;
      report.grad_center[i] -= 2.0 * w.mu * binary * (1.0 - 2.0 * c);
      report.grad_half[i] -= 2.0 * w.omega * h;
    }
  }

  // Group center sums: fixed centers enter as constants, gradients flow only
  // to free dims; a fully fixed group contributes nothing.
  for (const auto& group : schema.groups) {
    bool any_free = false;
    double sum = 0.0;
    for (int p : group) {
      sum += domain.centers[p];
      any_free = any_free || mask[static_cast<std::size_t>(p)];
    }
    if (!any_free) continue;
    const double deviation = sum - 1.0;
    report.pen_group_sum += w.gamma * deviation * deviation;
    for (int p : group) {
      if (mask[static_cast<std::size_t>(p)]) {
        report.grad_center[p] -= 2.0 * w.gamma * deviation;
      }
    }
  }

  report.value = transformed + report.gain_half - report.pen_center -
                 report.pen_binary - report.pen_cat_width -
                 report.pen_group_sum;
  return report;
}

}  // namespace ido
