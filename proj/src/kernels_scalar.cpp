// Scalar reference kernels. Deliberately plain loops: this is the
// implementation the SIMD variants are equivalence-tested against.

#include <algorithm>
#include <cmath>
#include <limits>

#include "mirt/kernels.hpp"

namespace mirt::kernels {
namespace {

void s_add(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
}

void s_axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void s_mul(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void s_sub(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - y[i];
}

double s_dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double s_dot3(const double* w, const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * y[i];
  return acc;
}

double s_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double s_max(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

void s_sigmoid(const double* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::exp(-std::fabs(z[i]));
    out[i] = z[i] >= 0.0 ? 1.0 / (1.0 + t) : t / (1.0 + t);
  }
}

void s_log_sigmoid(const double* z, double sign, double* out, std::size_t n) {
  // log sigmoid(u) = -softplus(-u) = min(u,0) - log1p(exp(-|u|))
  for (std::size_t i = 0; i < n; ++i) {
    const double u = sign * z[i];
    out[i] = std::min(u, 0.0) - std::log1p(std::exp(-std::fabs(u)));
  }
}

void s_exp_shift(const double* v, double shift, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(v[i] + shift);
}

double s_log_sum_exp(const double* v, std::size_t n) {
  const double m = s_max(v, n);
  if (!std::isfinite(m)) return m;  // all -inf (or a +inf dominates)
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::exp(v[i] - m);
  return m + std::log(acc);
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend b = {
      "scalar", s_add,     s_axpy,        s_mul,       s_sub,
      s_dot,    s_dot3,    s_sum,         s_max,       s_sigmoid,
      s_log_sigmoid, s_exp_shift, s_log_sum_exp,
  };
  return b;
}

}  // namespace mirt::kernels
