#pragma once

// Univariate item response functions and the stable Bernoulli log-prob
// primitives everything else is built on. All functions here are pure.

#include <cmath>

#include "mirt/errors.hpp"

namespace mirt {

enum class ModelKind { Rasch, TwoPL, ThreePL, ScalarProduct, Independent, Gmirt };

enum class Response : signed char { Incorrect = 0, Correct = 1, NotAdministered = -1 };

inline bool administered(Response r) { return r != Response::NotAdministered; }

// Stable scalar helpers shared across the library.
inline double sigmoid(double z) {
  const double t = std::exp(-std::fabs(z));
  return z >= 0.0 ? 1.0 / (1.0 + t) : t / (1.0 + t);
}

// log sigmoid(z), no cancellation for |z| large
inline double log_sigmoid(double z) {
  return std::fmin(z, 0.0) - std::log1p(std::exp(-std::fabs(z)));
}

inline double logit(double p) { return std::log(p) - std::log1p(-p); }

// (a, b, c) logistic item; Rasch pins a = 1, c = 0 and TwoPL pins c = 0.
struct UnivariateItem {
  ModelKind kind = ModelKind::TwoPL;
  double a = 1.0;  // discrimination, > 0
  double b = 0.0;  // difficulty
  double c = 0.0;  // lower asymptote, in [0, 1)

  UnivariateItem() = default;
  UnivariateItem(ModelKind kind_, double a_, double b_, double c_) : kind(kind_), a(a_), b(b_), c(c_) {
    validate();
  }

  static UnivariateItem rasch(double b) { return {ModelKind::Rasch, 1.0, b, 0.0}; }
  static UnivariateItem two_pl(double a, double b) { return {ModelKind::TwoPL, a, b, 0.0}; }
  static UnivariateItem three_pl(double a, double b, double c) { return {ModelKind::ThreePL, a, b, c}; }

  void validate() const {
    if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
      throw InvalidArgument("univariate item: requires finite parameters with a > 0");
    if (!(c >= 0.0 && c < 1.0)) throw InvalidArgument("univariate item: requires 0 <= c < 1");
    if (kind == ModelKind::Rasch && (a != 1.0 || c != 0.0))
      throw InvalidArgument("Rasch item: requires a = 1 and c = 0");
    if (kind == ModelKind::TwoPL && c != 0.0) throw InvalidArgument("2PL item: requires c = 0");
    if (kind != ModelKind::Rasch && kind != ModelKind::TwoPL && kind != ModelKind::ThreePL)
      throw InvalidArgument("univariate item: kind must be Rasch, TwoPL or ThreePL");
  }
};

// P(correct | theta) = c + (1-c) sigmoid(a (theta - b)); range (c, 1)
inline double irf(double theta, const UnivariateItem& item) {
  return item.c + (1.0 - item.c) * sigmoid(item.a * (theta - item.b));
}

// dP/dtheta = a (1-c) s (1-s), always positive
inline double irf_derivative(double theta, const UnivariateItem& item) {
  const double z = item.a * (theta - item.b);
  return item.a * (1.0 - item.c) * sigmoid(z) * sigmoid(-z);
}

// log P(x | p). NotAdministered contributes no factor. p in {0,1} with a
// conflicting response is a domain error rather than a silent -inf.
inline double log_bernoulli(double p, Response x) {
  if (x == Response::NotAdministered) return 0.0;
  if (x == Response::Correct) {
    if (p <= 0.0) throw std::domain_error("log_bernoulli: p = 0 with a correct response");
    return std::log(p);
  }
  if (p >= 1.0) throw std::domain_error("log_bernoulli: p = 1 with an incorrect response");
  return std::log1p(-p);
}

}  // namespace mirt
