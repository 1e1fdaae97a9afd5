#pragma once

// Multidimensional response models: scalar-product, dimension-wise
// independent, and the generic projection-plus-link construction. Ability
// vectors transform by G under a change of coordinates, discrimination
// vectors by G^T; the pullback keeps the scalar-product family closed.

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "mirt/irt.hpp"

namespace mirt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Logit is <a|theta> + b. `a` lives in the dual space: it transforms with
// G^T where ability coordinates transform with G.
struct ScalarProductItem {
  Vector a;       // nonzero
  double b = 0.0;

  ScalarProductItem() = default;
  ScalarProductItem(Vector a_, double b_);
  int dim() const { return static_cast<int>(a.size()); }
};

// Product of per-dimension logistic factors; requires a_d > 0.
struct IndependentItem {
  Vector a;
  Vector b;

  IndependentItem() = default;
  IndependentItem(Vector a_, Vector b_);
  int dim() const { return static_cast<int>(a.size()); }
};

// Univariate link composed with projection onto `direction`. Construction
// normalizes the direction to unit length and folds the removed scale into
// the link's discrimination, so (direction, link) is a unique representation.
struct GmirtItem {
  Vector direction;  // unit length after construction
  UnivariateItem link;

  GmirtItem() = default;
  GmirtItem(Vector direction_, UnivariateItem link_);
  int dim() const { return static_cast<int>(direction.size()); }

  // The scalar-product item (a, b) seen as projection + 2PL link.
  static GmirtItem from_scalar_product(const ScalarProductItem& item);
};

// Invertible basis change theta = G * theta'.
struct CoordinateChange {
  Matrix G;
  Matrix G_inverse;

  explicit CoordinateChange(Matrix G_);
  int dim() const { return static_cast<int>(G.rows()); }
  CoordinateChange inverse() const;
};

using Item = std::variant<UnivariateItem, ScalarProductItem, IndependentItem, GmirtItem>;

int item_dim(const Item& item);

double sp_eval(const Vector& theta, const ScalarProductItem& item);
// P(x | theta) = sigmoid((2x-1)(<a|theta> + b)); x must be 0/1
double sp_response_prob(Response x, const Vector& theta, const ScalarProductItem& item);
double indep_eval(const Vector& theta, const IndependentItem& item);
double gmirt_eval(const Vector& theta, const GmirtItem& item);

Vector change_coordinates(const Vector& theta_prime, const CoordinateChange& G);
// item' with a' = G^T a, b' = b; sp_eval(theta', item') == sp_eval(G theta', item)
ScalarProductItem sp_pullback(const ScalarProductItem& item, const CoordinateChange& G);

Vector model_gradient(const ScalarProductItem& item, const Vector& theta);
Vector model_gradient(const IndependentItem& item, const Vector& theta);
Vector model_gradient(const GmirtItem& item, const Vector& theta);
Vector model_gradient(const Item& item, const Vector& theta);

// Response probability / stable log-probabilities for any item kind.
// Univariate items take a 1-vector theta.
double item_prob(const Item& item, const Vector& theta);
double item_log_prob(const Item& item, const Vector& theta, bool correct);

// A homogeneous-dimension collection of items (kinds may mix).
struct ItemBank {
  std::vector<Item> items;
  int dimension = 1;

  ItemBank() = default;
  ItemBank(std::vector<Item> items_, int dimension_);
  int size() const { return static_cast<int>(items.size()); }
};

}  // namespace mirt
