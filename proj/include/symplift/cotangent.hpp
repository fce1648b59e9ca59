#pragma once

#include "symplift/group.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace symplift::cotangent {

using geo::Chart;
using geo::ChartPtr;
using geo::OneForm;
using geo::Point;
using geo::SmoothMap;
using geo::TwoForm;
using geo::VectorField;
using groups::ActionSpec;

// ---------------------------------------------------------------------------
// The bundle T*Q over a chart Q
// ---------------------------------------------------------------------------
//
// Total coordinates are ordered (q_1..q_n, p_1..p_n). Fiber periods are only
// set for quotient models (cylinder, torus); plain T*Q has line fibers.

struct CotangentChart {
  ChartPtr base;
  ChartPtr total;
  int n = 0;

  explicit CotangentChart(ChartPtr base_chart,
                          std::vector<std::optional<double>> fiber_periods = {})
      : base(std::move(base_chart)), n(base->dim()) {
    if (fiber_periods.empty()) fiber_periods.assign(static_cast<std::size_t>(n), std::nullopt);
    if (fiber_periods.size() != static_cast<std::size_t>(n))
      throw Error("CotangentChart: one fiber period per base coordinate");
    std::vector<std::optional<double>> periods;
    periods.reserve(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) periods.push_back(base->period(i));
    for (auto& p : fiber_periods) periods.push_back(p);
    total = geo::make_chart(Chart(2 * n, std::move(periods), base->name() + "*"));
  }
};

struct CotangentPoint {
  Point q;
  Vec p;

  CotangentPoint() = default;
  CotangentPoint(Point base, Vec fiber) : q(std::move(base)), p(std::move(fiber)) {
    if (p.size() != q.dim()) throw ChartMismatchError("CotangentPoint: fiber dimension");
  }
};

inline Point to_total(const CotangentChart& ct, const CotangentPoint& pt) {
  Vec x(2 * ct.n);
  x.head(ct.n) = pt.q.coords;
  x.tail(ct.n) = pt.p;
  return Point(ct.total, std::move(x));
}

inline CotangentPoint from_total(const CotangentChart& ct, const Point& x) {
  return CotangentPoint(Point(ct.base, x.coords.head(ct.n)), x.coords.tail(ct.n));
}

// ---------------------------------------------------------------------------
// Basic fields on T*Q
// ---------------------------------------------------------------------------

inline Point project(const CotangentPoint& pt) { return pt.q; }

inline SmoothMap projection_map(const CotangentChart& ct) {
  const int n = ct.n;
  Mat J(n, 2 * n);
  J << Mat::Identity(n, n), Mat::Zero(n, n);
  return SmoothMap(
      ct.total, ct.base, [n](const Vec& x) { return Vec(x.head(n)); },
      [n](const DualVec& x) { return DualVec(x.begin(), x.begin() + n); },
      [J](const Vec&) { return J; });
}

/// theta = sum_i p_i dq_i, as a covector at pt.
inline Vec liouville(const CotangentChart& ct, const CotangentPoint& pt) {
  Vec theta = Vec::Zero(2 * ct.n);
  theta.head(ct.n) = pt.p;
  return theta;
}

inline OneForm liouville_form(const CotangentChart& ct) {
  const int n = ct.n;
  return OneForm(
      ct.total,
      [n](const Vec& x) {
        Vec theta = Vec::Zero(2 * n);
        theta.head(n) = x.tail(n);
        return theta;
      },
      [n](const DualVec& x) {
        DualVec theta(static_cast<std::size_t>(2 * n), Dual(0.0));
        for (int i = 0; i < n; ++i) theta[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(n + i)];
        return theta;
      });
}

/// omega_Q = -d theta_Q in blocks: omega(dq_i, dp_j) = delta_ij.
inline Mat canonical_matrix(int n) {
  Mat omega = Mat::Zero(2 * n, 2 * n);
  omega.topRightCorner(n, n) = Mat::Identity(n, n);
  omega.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return omega;
}

inline TwoForm canonical_symplectic(const CotangentChart& ct) {
  return TwoForm::constant(ct.total, canonical_matrix(ct.n));
}

inline Mat canonical_symplectic(const CotangentChart& ct, const CotangentPoint&) {
  return canonical_matrix(ct.n);
}

// ---------------------------------------------------------------------------
// Magnetic terms
// ---------------------------------------------------------------------------

/// A closed 2-form beta on the base; closedness is certified numerically at
/// construction (residual of the coordinate 3-form d beta at sample points).
struct MagneticTerm {
  TwoForm beta;
  double closedness_residual = 0.0;

  MagneticTerm(TwoForm b, const std::vector<Vec>& sample_points, double step = 1e-5,
               double tol = 1e-8)
      : beta(std::move(b)) {
    const int n = beta.chart()->dim();
    for (const Vec& q : sample_points) {
      // (d beta)_{ijk} = d_i beta_{jk} - d_j beta_{ik} + d_k beta_{ij}
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (int k = j + 1; k < n; ++k) {
            auto partial = [&](int dir, int r, int c) {
              Vec qp = q, qm = q;
              qp[dir] += step;
              qm[dir] -= step;
              return (beta.eval_raw(qp)(r, c) - beta.eval_raw(qm)(r, c)) / (2.0 * step);
            };
            const double d = partial(i, j, k) - partial(j, i, k) + partial(k, i, j);
            closedness_residual = std::max(closedness_residual, std::abs(d));
          }
    }
    if (closedness_residual > tol)
      throw NotClosedError("MagneticTerm: d beta residual " + format_g17(closedness_residual));
  }
};

/// omega_{Q,beta} = omega_Q + pi_Q^* beta: beta lands in the q-q block.
inline Mat magnetic_symplectic(const CotangentChart& ct, const MagneticTerm& beta,
                               const CotangentPoint& pt) {
  require_same_chart(beta.beta.chart(), ct.base, "magnetic_symplectic");
  Mat omega = canonical_matrix(ct.n);
  omega.topLeftCorner(ct.n, ct.n) += beta.beta(pt.q);
  return omega;
}

inline TwoForm magnetic_form(const CotangentChart& ct, const MagneticTerm& beta) {
  require_same_chart(beta.beta.chart(), ct.base, "magnetic_form");
  const int n = ct.n;
  auto b = beta.beta;
  ChartPtr base = ct.base;
  return TwoForm(ct.total, [n, b, base](const Vec& x) {
    Mat omega = canonical_matrix(n);
    omega.topLeftCorner(n, n) += b(Point(base, x.head(n)));
    return omega;
  });
}

// ---------------------------------------------------------------------------
// Cotangent lifts
// ---------------------------------------------------------------------------
//
//   (T*phi)_g alpha_q = T*_{phi_g(q)} phi_{g^-1} (alpha_q)
//
// In coordinates: base goes to phi_g(q), fiber to J_{phi_{g^-1}}(phi_g(q))^T p.

inline CotangentPoint cotangent_lift(const ActionSpec& phi, const CotangentChart& ct,
                                     const Vec& g, const CotangentPoint& pt) {
  require_same_chart(phi.base, ct.base, "cotangent_lift");
  const Point base_image = phi(g, pt.q);
  const Vec ginv = phi.group.inverse(g);
  const Mat M = geo::best_jacobian(phi.map_for(ginv), base_image);
  Vec p_new = M.transpose() * pt.p;
  require_finite(p_new, "cotangent_lift");
  return CotangentPoint(base_image, std::move(p_new));
}

/// (T*phi)_g as a map on the total chart. Carries a dual evaluator and an
/// analytic Jacobian when the action's q-Jacobian is constant in q (all
/// built-ins); otherwise only the plain evaluator, and callers differentiate
/// it by central differences.
inline SmoothMap cotangent_lift_map(const ActionSpec& phi, const CotangentChart& ct,
                                    const Vec& g) {
  require_same_chart(phi.base, ct.base, "cotangent_lift_map");
  const int n = ct.n;
  const Vec ginv = phi.group.inverse(g);
  auto eval = [phi, ct, n, g](const Vec& x) {
    CotangentPoint pt(Point(ct.base, x.head(n)), x.tail(n));
    CotangentPoint out = cotangent_lift(phi, ct, g, pt);
    Vec y(2 * n);
    y.head(n) = out.q.coords;
    y.tail(n) = out.p;
    return y;
  };
  SmoothMap::DualFn dual;
  SmoothMap::JacFn jac;
  if (phi.jacobian_constant_in_q && phi.jacobian_q) {
    const Mat Mt = phi.jacobian_q(ginv, phi.group.identity).transpose();
    if (phi.apply_dual) {
      auto ad = phi.apply_dual;
      dual = [ad, g, Mt, n](const DualVec& x) {
        DualVec q(x.begin(), x.begin() + n);
        DualVec out = ad(g, q);
        out.resize(static_cast<std::size_t>(2 * n), Dual(0.0));
        for (int i = 0; i < n; ++i) {
          Dual acc(0.0);
          for (int j = 0; j < n; ++j) acc = acc + Dual(Mt(i, j)) * x[static_cast<std::size_t>(n + j)];
          out[static_cast<std::size_t>(n + i)] = acc;
        }
        return out;
      };
    }
    if (phi.jacobian_q) {
      auto aj = phi.jacobian_q;
      jac = [aj, g, Mt, n](const Vec& q2n) {
        Mat J = Mat::Zero(2 * n, 2 * n);
        J.topLeftCorner(n, n) = aj(g, q2n.head(n));
        J.bottomRightCorner(n, n) = Mt;
        return J;
      };
    }
  }
  return SmoothMap(ct.total, ct.total, std::move(eval), std::move(dual), std::move(jac),
                   phi.diff);
}

/// Package the lift as an action on the total chart, so the generic action
/// verifiers apply to it unchanged.
inline ActionSpec cotangent_lift_action(const ActionSpec& phi, const CotangentChart& ct) {
  ActionSpec lifted;
  lifted.name = phi.name + ".cotangent_lift";
  lifted.group = phi.group;
  lifted.base = ct.total;
  lifted.diff = phi.diff;
  lifted.apply = [phi, ct](const Vec& g, const Vec& x) {
    return cotangent_lift_map(phi, ct, g).eval_unreduced(x);
  };
  if (phi.jacobian_constant_in_q && phi.jacobian_q && phi.apply_dual) {
    lifted.apply_dual = [phi, ct](const Vec& g, const DualVec& x) {
      return cotangent_lift_map(phi, ct, g).eval_dual(x);
    };
    lifted.jacobian_q = [phi, ct](const Vec& g, const Vec& x) {
      return cotangent_lift_map(phi, ct, g).analytic_jacobian(x);
    };
    lifted.jacobian_constant_in_q = false;  // base block depends on q in general
  }
  return lifted;
}

// ---------------------------------------------------------------------------
// Fiber translations and vertical structure
// ---------------------------------------------------------------------------

/// t_alpha(gamma_q) = gamma_q + alpha(q)
inline CotangentPoint fiber_translation(const OneForm& alpha, const CotangentPoint& pt) {
  return CotangentPoint(pt.q, Vec(pt.p + alpha(pt.q)));
}

inline SmoothMap fiber_translation_map(const OneForm& alpha, const CotangentChart& ct) {
  require_same_chart(alpha.chart(), ct.base, "fiber_translation_map");
  const int n = ct.n;
  SmoothMap::DualFn dual;
  if (alpha.has_dual()) {
    dual = [alpha, n](const DualVec& x) {
      DualVec q(x.begin(), x.begin() + n);
      DualVec a = alpha.eval_dual(q);
      DualVec out = x;
      for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(n + i)] = x[static_cast<std::size_t>(n + i)] + a[static_cast<std::size_t>(i)];
      return out;
    };
  }
  return SmoothMap(
      ct.total, ct.total,
      [alpha, ct, n](const Vec& x) {
        Vec out = x;
        out.tail(n) += alpha.eval_raw(ct.base->reduce(x.head(n)));
        return out;
      },
      std::move(dual), nullptr, alpha.diff_config());
}

/// X_{pi_Q^* lambda}(beta_q) = d/dt|_0 (beta_q + t lambda(q)): zero base
/// components, lambda(q) in the fiber slots.
inline Vec vertical_lift(const CotangentChart& ct, const OneForm& lambda,
                         const CotangentPoint& pt) {
  require_same_chart(lambda.chart(), ct.base, "vertical_lift");
  Vec v = Vec::Zero(2 * ct.n);
  v.tail(ct.n) = lambda(pt.q);
  return v;
}

/// f(beta_q) = <beta_q, Y(q)>
inline double fiberwise_linear(const VectorField& y, const CotangentPoint& pt) {
  return pt.p.dot(y(pt.q));
}

// ---------------------------------------------------------------------------
// Classifying fibered symplectomorphisms of T*Q
// ---------------------------------------------------------------------------
//
// A diffeomorphism fibered over the identity is symplectic iff it is the
// translation t_alpha by a unique closed 1-form. recover_translation extracts
// the candidate alpha(q) = F(gamma_q) - gamma_q and certifies (a) independence
// of the fiber point and (b) closedness of the recovered form.

struct RecoveredTranslation {
  OneForm alpha;
  double welldef_residual = 0.0;    // spread of F(gamma)-gamma over fiber probes
  double closedness_residual = 0.0; // max ||d alpha|| at base samples
  bool certified = false;
  CheckReport report;
};

inline RecoveredTranslation recover_translation(const SmoothMap& F, const CotangentChart& ct,
                                                const std::vector<Vec>& base_points,
                                                double tol = 1e-6, int probes = 3,
                                                std::uint64_t seed = 42) {
  require_same_chart(F.domain(), ct.total, "recover_translation");
  const int n = ct.n;

  // probes from the seeded unit ball, shared across base points
  Rng rng(seed);
  std::vector<Vec> fiber_probes;
  fiber_probes.push_back(Vec::Zero(n));
  for (int k = 1; k < probes; ++k) {
    Vec v = rng.uniform_vec(n, -1.0, 1.0);
    const double norm = v.norm();
    if (norm > 1.0) v /= norm;
    fiber_probes.push_back(std::move(v));
  }

  RecoveredTranslation out;
  out.report.name = "recover_translation";
  out.report.anchor = "F symplectic and fibered over id  <=>  F = t_alpha, d alpha = 0";

  for (std::size_t qi = 0; qi < base_points.size(); ++qi) {
    const Vec& q = base_points[qi];
    Vec alpha0;
    for (std::size_t k = 0; k < fiber_probes.size(); ++k) {
      Point x = to_total(ct, CotangentPoint(Point(ct.base, q), fiber_probes[k]));
      Point y = F(x);
      if (ct.base->distance(y.coords.head(n), x.coords.head(n)) > tol)
        throw NotFiberedError("recover_translation: pi o F != pi at base sample " +
                              std::to_string(qi));
      Vec diff = y.coords.tail(n) - fiber_probes[k];
      for (int i = 0; i < n; ++i)
        if (ct.total->periodic(n + i)) diff[i] = min_image(diff[i], *ct.total->period(n + i));
      if (k == 0) {
        alpha0 = diff;
      } else {
        out.welldef_residual = std::max(out.welldef_residual, max_abs(Vec(diff - alpha0)));
      }
    }
  }
  if (out.welldef_residual > tol)
    throw IllDefinedError("recover_translation: F(gamma)-gamma depends on the fiber point, spread " +
                          format_g17(out.welldef_residual));

  // recovered form: evaluate F at the zero probe
  ChartPtr base = ct.base;
  auto Feval = F;
  const CotangentChart ctc = ct;
  out.alpha = OneForm(base, [Feval, ctc, n](const Vec& q) {
    Point x = to_total(ctc, CotangentPoint(Point(ctc.base, q), Vec::Zero(n)));
    return Vec(Feval(x).coords.tail(n));
  });

  for (std::size_t qi = 0; qi < base_points.size(); ++qi) {
    const double r = max_abs(geo::exterior_derivative(out.alpha, Point(base, base_points[qi])));
    out.report.record_part("closedness", r, "q=" + std::to_string(qi));
    out.closedness_residual = std::max(out.closedness_residual, r);
  }
  out.report.record_part("well_defined", out.welldef_residual, "");
  out.report.finish(tol);
  out.certified = out.report.pass;
  return out;
}

}  // namespace symplift::cotangent
