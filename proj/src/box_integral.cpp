#include "ido/box_integral.hpp"

#include <stdexcept>
#include <string>

namespace ido {

namespace {

void check(const QuadraticSurrogate& s, const BoxDomain& domain) {
  if (s.dims() != domain.dims()) {
    throw std::invalid_argument("box_mean: surrogate/domain dimension mismatch");
  }
  for (Eigen::Index i = 0; i < domain.dims(); ++i) {
    if (!(domain.half_lengths[i] > 0.0)) {
      throw std::invalid_argument("box_mean: non-positive half_length at dim " +
                                  std::to_string(i));
    }
  }
}

}  // namespace

double box_mean(const QuadraticSurrogate& s, const BoxDomain& domain) {
  check(s, domain);
  const Eigen::Index d = s.dims();
  const Vector& c = domain.centers;
  const Vector& h = domain.half_lengths;
  double mean = s.constant + s.linear.dot(c);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    mean += s.quad[k] * (c[i] * c[i] + h[i] * h[i] / 3.0);
    ++k;  // (i, i)
    for (Eigen::Index j = i + 1; j < d; ++j, ++k) {
      mean += s.quad[k] * c[i] * c[j];
    }
  }
  return mean;
}

MeanAndGrad box_mean_grad(const QuadraticSurrogate& s, const BoxDomain& domain) {
  check(s, domain);
  const Eigen::Index d = s.dims();
  const Vector& c = domain.centers;
  const Vector& h = domain.half_lengths;

  MeanAndGrad out;
  out.mean = s.constant + s.linear.dot(c);
  out.d_center = s.linear;
  out.d_half = Vector::Zero(d);

  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double b_ii = s.quad[k];
    out.mean += b_ii * (c[i] * c[i] + h[i] * h[i] / 3.0);
    out.d_center[i] += 2.0 * b_ii * c[i];
    out.d_half[i] = 2.0 / 3.0 * b_ii * h[i];
    ++k;
    for (Eigen::Index j = i + 1; j < d; ++j, ++k) {
      const double b_ij = s.quad[k];
      out.mean += b_ij * c[i] * c[j];
      out.d_center[i] += b_ij * c[j];
      out.d_center[j] += b_ij * c[i];
    }
  }
  return out;
}

}  // namespace ido
