#pragma once

#include "symplift/core.hpp"

#include <cmath>
#include <vector>

namespace symplift {

// ---------------------------------------------------------------------------
// Forward-mode algorithmic differentiation
// ---------------------------------------------------------------------------
//
// Vector-mode dual numbers: value plus a row of partial derivatives with
// respect to the seeded inputs. Dimensions here are tiny (<= 6), so the dense
// gradient row is cheap and keeps Jacobian extraction to a single pass.

struct Dual {
  double val = 0.0;
  Eigen::RowVectorXd grad;  // empty grad means "constant"

  Dual() = default;
  Dual(double v) : val(v) {}  // NOLINT: implicit promotion of constants
  Dual(double v, Eigen::RowVectorXd g) : val(v), grad(std::move(g)) {}

  bool constant() const { return grad.size() == 0; }
};

namespace detail {
inline Eigen::RowVectorXd add_grads(const Dual& a, const Dual& b) {
  if (a.constant()) return b.grad;
  if (b.constant()) return a.grad;
  return a.grad + b.grad;
}
}  // namespace detail

inline Dual operator+(const Dual& a, const Dual& b) {
  return {a.val + b.val, detail::add_grads(a, b)};
}
inline Dual operator-(const Dual& a) {
  return {-a.val, a.constant() ? a.grad : Eigen::RowVectorXd(-a.grad)};
}
inline Dual operator-(const Dual& a, const Dual& b) { return a + (-b); }
inline Dual operator*(const Dual& a, const Dual& b) {
  Eigen::RowVectorXd g;
  if (!a.constant() && !b.constant()) g = a.grad * b.val + b.grad * a.val;
  else if (!a.constant()) g = a.grad * b.val;
  else if (!b.constant()) g = b.grad * a.val;
  return {a.val * b.val, std::move(g)};
}
inline Dual operator/(const Dual& a, const Dual& b) {
  Eigen::RowVectorXd g;
  const double inv = 1.0 / b.val;
  if (!a.constant() && !b.constant()) g = a.grad * inv - b.grad * (a.val * inv * inv);
  else if (!a.constant()) g = a.grad * inv;
  else if (!b.constant()) g = -b.grad * (a.val * inv * inv);
  return {a.val * inv, std::move(g)};
}

inline Dual sin(const Dual& a) {
  return {std::sin(a.val), a.constant() ? a.grad : Eigen::RowVectorXd(a.grad * std::cos(a.val))};
}
inline Dual cos(const Dual& a) {
  return {std::cos(a.val), a.constant() ? a.grad : Eigen::RowVectorXd(-a.grad * std::sin(a.val))};
}
inline Dual exp(const Dual& a) {
  const double e = std::exp(a.val);
  return {e, a.constant() ? a.grad : Eigen::RowVectorXd(a.grad * e)};
}
inline Dual sqrt(const Dual& a) {
  const double r = std::sqrt(a.val);
  return {r, a.constant() ? a.grad : Eigen::RowVectorXd(a.grad * (0.5 / r))};
}

using DualVec = std::vector<Dual>;

/// Seed the identity Jacobian at x: component i carries gradient e_i.
inline DualVec seed(const Vec& x) {
  DualVec out(static_cast<std::size_t>(x.size()));
  for (int i = 0; i < x.size(); ++i) {
    Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(x.size());
    g[i] = 1.0;
    out[static_cast<std::size_t>(i)] = Dual(x[i], std::move(g));
  }
  return out;
}

inline DualVec constants(const Vec& x) {
  DualVec out(static_cast<std::size_t>(x.size()));
  for (int i = 0; i < x.size(); ++i) out[static_cast<std::size_t>(i)] = Dual(x[i]);
  return out;
}

inline Vec values(const DualVec& d) {
  Vec v(static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) v[static_cast<int>(i)] = d[i].val;
  return v;
}

/// Extract the m-by-n Jacobian from m dual outputs seeded on n inputs.
inline Mat jacobian_of(const DualVec& out, int input_dim) {
  Mat J = Mat::Zero(static_cast<int>(out.size()), input_dim);
  for (std::size_t r = 0; r < out.size(); ++r) {
    if (!out[r].constant()) J.row(static_cast<int>(r)) = out[r].grad;
  }
  return J;
}

}  // namespace symplift
