#include "ido/surrogate.hpp"

#include <cmath>
#include <string>

namespace ido {

QuadraticSurrogate QuadraticSurrogate::zero(Eigen::Index dims) {
  QuadraticSurrogate s;
  s.linear = Vector::Zero(dims);
  s.quad = Vector::Zero(dims * (dims + 1) / 2);
  return s;
}

double QuadraticSurrogate::evaluate(const Vector& x) const {
  const Eigen::Index d = dims();
  double value = constant + linear.dot(x);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j, ++k) {
      value += quad[k] * x[i] * x[j];
    }
  }
  return value;
}

Matrix sample_box(const BoxDomain& domain, const FeatureSchema& schema,
                  int count, Rng& rng) {
  if (count < 1) throw ConfigError("sample_box: count must be >= 1");
  const Eigen::Index d = domain.dims();
  if (d != schema.size()) {
    throw ConfigError("sample_box: domain/schema dimension mismatch");
  }
  Matrix points(count, d);
  for (int r = 0; r < count; ++r) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& constraint = schema.dims[static_cast<std::size_t>(j)].constraint;
      if (const auto* fv = std::get_if<FixedValue>(&constraint)) {
        points(r, j) = fv->value;
      } else {
        const double c = domain.centers[j];
        const double s = domain.half_lengths[j];
        points(r, j) = uniform_in(rng, c - s, c + s);
      }
    }
  }
  return points;
}

Matrix design_matrix(const Matrix& inputs) {
  const Eigen::Index rows = inputs.rows();
  const Eigen::Index d = inputs.cols();
  Matrix design(rows, coefficient_count(d));
  design.col(0).setOnes();
  design.middleCols(1, d) = inputs;
  Eigen::Index col = 1 + d;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j, ++col) {
      design.col(col) = inputs.col(i).cwiseProduct(inputs.col(j));
    }
  }
  return design;
}

QuadraticSurrogate fit(const SampleBatch& batch, double ridge) {
  const Eigen::Index rows = batch.inputs.rows();
  const Eigen::Index d = batch.inputs.cols();
  if (rows < 2) throw ConfigError("fit: need at least 2 samples");
  if (batch.outputs.size() != rows) {
    throw ConfigError("fit: inputs/outputs row mismatch");
  }
  if (ridge < 0.0) throw ConfigError("fit: ridge must be >= 0");

  const Matrix design = design_matrix(batch.inputs);
  const Eigen::Index p = design.cols();
  Vector coeffs;
  if (ridge == 0.0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(design);
    if (rows < p || qr.rank() < p) {
      throw ConfigError(
          "fit: singular design matrix (K=" + std::to_string(rows) +
          ", P=" + std::to_string(p) + "); set ridge > 0");
    }
    coeffs = qr.solve(batch.outputs);
  } else {
    // Normal equations with the intercept exempt from the penalty.
    Matrix gram = design.transpose() * design;
    gram.diagonal().tail(p - 1).array() += ridge;
    coeffs = gram.ldlt().solve(design.transpose() * batch.outputs);
  }

  QuadraticSurrogate s;
  s.constant = coeffs[0];
  s.linear = coeffs.segment(1, d);
  s.quad = coeffs.tail(p - 1 - d);
  return s;
}

}  // namespace ido
