#include "mirt/models.hpp"

#include <cmath>
#include <limits>

namespace mirt {

namespace {

void require_dim(const Vector& theta, int d, const char* what) {
  if (theta.size() != d) throw InvalidArgument(std::string(what) + ": ability dimension mismatch");
}

}  // namespace

ScalarProductItem::ScalarProductItem(Vector a_, double b_) : a(std::move(a_)), b(b_) {
  if (a.size() < 1 || !a.allFinite() || !std::isfinite(b))
    throw InvalidArgument("scalar-product item: parameters must be finite, D >= 1");
  if (a.norm() == 0.0)
    throw InvalidArgument("scalar-product item: a = 0 is degenerate (constant surface)");
}

IndependentItem::IndependentItem(Vector a_, Vector b_) : a(std::move(a_)), b(std::move(b_)) {
  if (a.size() < 1 || a.size() != b.size() || !a.allFinite() || !b.allFinite())
    throw InvalidArgument("independent item: a and b must be finite with equal dimension");
  if ((a.array() <= 0.0).any())
    throw InvalidArgument("independent item: requires a_d > 0 for every dimension");
}

GmirtItem::GmirtItem(Vector direction_, UnivariateItem link_)
    : direction(std::move(direction_)), link(link_) {
  if (direction.size() < 1 || !direction.allFinite())
    throw InvalidArgument("gmirt item: direction must be finite, D >= 1");
  const double norm = direction.norm();
  if (norm == 0.0) throw InvalidArgument("gmirt item: direction = 0");
  direction /= norm;
  if (norm != 1.0) {
    // fold the removed scale into the link slope; Rasch links become 2PL
    link.a *= norm;
    if (link.kind == ModelKind::Rasch && link.a != 1.0) link.kind = ModelKind::TwoPL;
  }
  link.validate();
}

GmirtItem GmirtItem::from_scalar_product(const ScalarProductItem& item) {
  const double norm = item.a.norm();
  // logit <a|theta> + b = norm * (<a/norm | theta> - (-b/norm))
  return GmirtItem(item.a / norm, UnivariateItem::two_pl(norm, -item.b / norm));
}

CoordinateChange::CoordinateChange(Matrix G_) : G(std::move(G_)) {
  if (G.rows() != G.cols() || G.rows() < 1 || !G.allFinite())
    throw InvalidArgument("coordinate change: G must be a finite square matrix");
  Eigen::FullPivLU<Matrix> lu(G);
  if (!lu.isInvertible()) throw InvalidArgument("coordinate change: G is singular");
  G_inverse = lu.inverse();
}

CoordinateChange CoordinateChange::inverse() const { return CoordinateChange(G_inverse); }

int item_dim(const Item& item) {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UnivariateItem>)
          return 1;
        else
          return m.dim();
      },
      item);
}

double sp_eval(const Vector& theta, const ScalarProductItem& item) {
  require_dim(theta, item.dim(), "sp_eval");
  return sigmoid(item.a.dot(theta) + item.b);
}

double sp_response_prob(Response x, const Vector& theta, const ScalarProductItem& item) {
  require_dim(theta, item.dim(), "sp_response_prob");
  if (!administered(x))
    throw InvalidArgument("sp_response_prob: response must be 0 or 1 (filter NotAdministered)");
  const double sign = x == Response::Correct ? 1.0 : -1.0;
  return sigmoid(sign * (item.a.dot(theta) + item.b));
}

double indep_eval(const Vector& theta, const IndependentItem& item) {
  require_dim(theta, item.dim(), "indep_eval");
  double p = 1.0;
  for (int d = 0; d < item.dim(); ++d) p *= sigmoid(item.a[d] * (theta[d] - item.b[d]));
  return p;
}

double gmirt_eval(const Vector& theta, const GmirtItem& item) {
  require_dim(theta, item.dim(), "gmirt_eval");
  return irf(item.direction.dot(theta), item.link);
}

Vector change_coordinates(const Vector& theta_prime, const CoordinateChange& G) {
  require_dim(theta_prime, G.dim(), "change_coordinates");
  return G.G * theta_prime;
}

ScalarProductItem sp_pullback(const ScalarProductItem& item, const CoordinateChange& G) {
  if (G.dim() != item.dim()) throw InvalidArgument("sp_pullback: dimension mismatch");
  return ScalarProductItem(G.G.transpose() * item.a, item.b);
}

Vector model_gradient(const ScalarProductItem& item, const Vector& theta) {
  const double f = sp_eval(theta, item);
  return f * (1.0 - f) * item.a;
}

Vector model_gradient(const IndependentItem& item, const Vector& theta) {
  require_dim(theta, item.dim(), "model_gradient");
  const int D = item.dim();
  double f = 1.0;
  Vector s(D);
  for (int d = 0; d < D; ++d) {
    s[d] = sigmoid(item.a[d] * (theta[d] - item.b[d]));
    f *= s[d];
  }
  Vector g(D);
  for (int d = 0; d < D; ++d) g[d] = f * item.a[d] * (1.0 - s[d]);
  return g;
}

Vector model_gradient(const GmirtItem& item, const Vector& theta) {
  require_dim(theta, item.dim(), "model_gradient");
  return irf_derivative(item.direction.dot(theta), item.link) * item.direction;
}

Vector model_gradient(const Item& item, const Vector& theta) {
  return std::visit(
      [&](const auto& m) -> Vector {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UnivariateItem>) {
          require_dim(theta, 1, "model_gradient");
          Vector g(1);
          g[0] = irf_derivative(theta[0], m);
          return g;
        } else {
          return model_gradient(m, theta);
        }
      },
      item);
}

namespace {

// log P and log(1-P) for the guessing-floor logistic, stable at both tails
double log_prob_3pl(double z, double c, bool correct) {
  if (!correct) return std::log1p(-c) + log_sigmoid(-z);
  if (c == 0.0) return log_sigmoid(z);
  if (z < -30.0) return std::log(c) + std::log1p((1.0 - c) * std::exp(z) / c);
  return std::log(c + (1.0 - c) * sigmoid(z));
}

}  // namespace

double item_prob(const Item& item, const Vector& theta) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UnivariateItem>) {
          require_dim(theta, 1, "item_prob");
          return irf(theta[0], m);
        } else if constexpr (std::is_same_v<T, ScalarProductItem>) {
          return sp_eval(theta, m);
        } else if constexpr (std::is_same_v<T, IndependentItem>) {
          return indep_eval(theta, m);
        } else {
          return gmirt_eval(theta, m);
        }
      },
      item);
}

double item_log_prob(const Item& item, const Vector& theta, bool correct) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UnivariateItem>) {
          require_dim(theta, 1, "item_log_prob");
          return log_prob_3pl(m.a * (theta[0] - m.b), m.c, correct);
        } else if constexpr (std::is_same_v<T, ScalarProductItem>) {
          require_dim(theta, m.dim(), "item_log_prob");
          const double z = m.a.dot(theta) + m.b;
          return log_sigmoid(correct ? z : -z);
        } else if constexpr (std::is_same_v<T, IndependentItem>) {
          require_dim(theta, m.dim(), "item_log_prob");
          const int D = m.dim();
          if (correct) {
            double acc = 0.0;
            for (int d = 0; d < D; ++d) acc += log_sigmoid(m.a[d] * (theta[d] - m.b[d]));
            return acc;
          }
          // 1 - prod s_d = sum_d (1 - s_d) prod_{d' < d} s_{d'}, term-wise in logs
          double lse = -std::numeric_limits<double>::infinity();
          double prefix = 0.0;
          for (int d = 0; d < D; ++d) {
            const double z = m.a[d] * (theta[d] - m.b[d]);
            const double term = prefix + log_sigmoid(-z);
            const double hi = std::fmax(lse, term), lo = std::fmin(lse, term);
            lse = std::isinf(hi) && hi < 0 ? lo : hi + std::log1p(std::exp(lo - hi));
            prefix += log_sigmoid(z);
          }
          return lse;
        } else {
          require_dim(theta, m.dim(), "item_log_prob");
          const double mu = m.direction.dot(theta);
          return log_prob_3pl(m.link.a * (mu - m.link.b), m.link.c, correct);
        }
      },
      item);
}

ItemBank::ItemBank(std::vector<Item> items_, int dimension_)
    : items(std::move(items_)), dimension(dimension_) {
  if (dimension < 1) throw InvalidArgument("item bank: dimension must be >= 1");
  for (const Item& it : items) {
    if (item_dim(it) != dimension)
      throw InvalidArgument("item bank: item dimension differs from bank dimension");
  }
}

}  // namespace mirt
