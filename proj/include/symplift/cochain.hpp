#pragma once

#include "symplift/cotangent.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace symplift::cohom {

using cotangent::CotangentChart;
using cotangent::CotangentPoint;
using geo::ChartPtr;
using geo::DiffConfig;
using geo::OneForm;
using geo::Point;
using geo::SmoothMap;
using geo::TwoForm;
using groups::ActionSpec;
using groups::SampleSet;

// ---------------------------------------------------------------------------
// Cochains valued in 1-forms
// ---------------------------------------------------------------------------
//
// An n-cochain maps n group elements to a 1-form on the base. Degree-0
// cochains ignore the group arguments. The constant-coefficient flag enables
// the exact exterior derivative; the dual evaluator (in q, group arguments
// fixed) enables the AD paths.

class FormCochain {
 public:
  using EvalFn = std::function<Vec(const std::vector<Vec>&, const Vec&)>;
  using DualFn = std::function<DualVec(const std::vector<Vec>&, const DualVec&)>;

  FormCochain() = default;
  FormCochain(int degree, ChartPtr chart, EvalFn eval, DualFn dual = nullptr,
              bool constant_coeff = false, DiffConfig cfg = {})
      : degree_(degree),
        chart_(std::move(chart)),
        eval_(std::move(eval)),
        dual_(std::move(dual)),
        constant_coeff_(constant_coeff),
        cfg_(cfg) {
    if (degree_ < 0) throw ArityError("FormCochain: degree must be >= 0");
  }

  static FormCochain from_one_form(const OneForm& alpha) {
    auto a = alpha;
    return FormCochain(
        0, alpha.chart(), [a](const std::vector<Vec>&, const Vec& q) { return a.eval_raw(q); },
        a.has_dual() ? DualFn([a](const std::vector<Vec>&, const DualVec& q) { return a.eval_dual(q); })
                     : nullptr,
        alpha.constant_coeff(), alpha.diff_config());
  }

  static FormCochain zero(int degree, ChartPtr chart) {
    const int n = chart->dim();
    return FormCochain(
        degree, std::move(chart), [n](const std::vector<Vec>&, const Vec&) { return Vec(Vec::Zero(n)); },
        [n](const std::vector<Vec>&, const DualVec&) { return DualVec(static_cast<std::size_t>(n), Dual(0.0)); },
        /*constant_coeff=*/true);
  }

  int degree() const { return degree_; }
  const ChartPtr& chart() const { return chart_; }
  bool constant_coeff() const { return constant_coeff_; }
  bool has_dual() const { return static_cast<bool>(dual_); }
  const DiffConfig& diff_config() const { return cfg_; }
  void set_diff_config(DiffConfig c) { cfg_ = c; }

  Vec operator()(const std::vector<Vec>& gs, const Vec& q) const {
    check_arity(gs);
    Vec v = eval_(gs, q);
    require_finite(v, "FormCochain::eval");
    return v;
  }

  DualVec eval_dual(const std::vector<Vec>& gs, const DualVec& q) const {
    check_arity(gs);
    return dual_(gs, q);
  }

  /// The 1-form A(g_1..g_n) with the group slots frozen.
  OneForm at(const std::vector<Vec>& gs) const {
    check_arity(gs);
    auto ev = eval_;
    OneForm::DualFn dual;
    if (dual_) {
      auto dl = dual_;
      dual = [dl, gs](const DualVec& q) { return dl(gs, q); };
    }
    return OneForm(chart_, [ev, gs](const Vec& q) { return ev(gs, q); }, std::move(dual),
                   constant_coeff_, cfg_);
  }

 private:
  void check_arity(const std::vector<Vec>& gs) const {
    if (static_cast<int>(gs.size()) != degree_)
      throw ArityError("FormCochain: expected " + std::to_string(degree_) + " group arguments, got " +
                       std::to_string(gs.size()));
  }

  int degree_ = 0;
  ChartPtr chart_;
  EvalFn eval_;
  DualFn dual_;
  bool constant_coeff_ = false;
  DiffConfig cfg_;
};

inline FormCochain cochain_sum(const FormCochain& a, const FormCochain& b) {
  if (a.degree() != b.degree()) throw ArityError("cochain_sum: degree mismatch");
  require_same_chart(a.chart(), b.chart(), "cochain_sum");
  FormCochain::DualFn dual;
  if (a.has_dual() && b.has_dual())
    dual = [a, b](const std::vector<Vec>& gs, const DualVec& q) {
      DualVec x = a.eval_dual(gs, q), y = b.eval_dual(gs, q);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = x[i] + y[i];
      return x;
    };
  return FormCochain(
      a.degree(), a.chart(),
      [a, b](const std::vector<Vec>& gs, const Vec& q) { return Vec(a(gs, q) + b(gs, q)); },
      std::move(dual), a.constant_coeff() && b.constant_coeff(), a.diff_config());
}

// ---------------------------------------------------------------------------
// The coboundary operator
// ---------------------------------------------------------------------------
//
//   (delta A)(g_1..g_{n+1}) = (-1)^{n+1} A(g_2..g_{n+1})
//                           + sum_i (-1)^{n+i+1} A(.., g_i g_{i+1}, ..)
//                           + phi*_{g_{n+1}} A(g_1..g_n)
//
// For n = 0 this is phi*_g alpha - alpha; for n = 1 it is
// A(g_2) - A(g_1 g_2) + phi*_{g_2} A(g_1).

inline Vec coboundary(const ActionSpec& phi, const FormCochain& a, const std::vector<Vec>& gs,
                      const Point& q) {
  const int n = a.degree();
  if (static_cast<int>(gs.size()) != n + 1)
    throw ArityError("coboundary: need degree+1 group arguments");
  require_same_chart(phi.base, a.chart(), "coboundary");

  auto sign = [](int k) { return (k % 2 == 0) ? 1.0 : -1.0; };
  Vec acc = sign(n + 1) * a(std::vector<Vec>(gs.begin() + 1, gs.end()), q.coords);
  for (int i = 1; i <= n; ++i) {
    std::vector<Vec> args;
    args.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < i - 1; ++k) args.push_back(gs[static_cast<std::size_t>(k)]);
    args.push_back(phi.group.multiply(gs[static_cast<std::size_t>(i - 1)], gs[static_cast<std::size_t>(i)]));
    for (int k = i + 1; k <= n; ++k) args.push_back(gs[static_cast<std::size_t>(k)]);
    acc += sign(n + i + 1) * a(args, q.coords);
  }
  acc += geo::pullback(a.at(std::vector<Vec>(gs.begin(), gs.end() - 1)), phi.map_for(gs.back()), q);
  return acc;
}

/// delta A packaged as a degree-(n+1) cochain, so that delta can be iterated
/// and coboundaries can be fed back into the verifiers.
inline FormCochain coboundary_cochain(const ActionSpec& phi, const FormCochain& a) {
  require_same_chart(phi.base, a.chart(), "coboundary_cochain");
  const bool const_out = a.constant_coeff() && phi.jacobian_constant_in_q && phi.jacobian_q;
  FormCochain::DualFn dual;
  if (a.has_dual() && phi.apply_dual && phi.jacobian_q && phi.jacobian_constant_in_q) {
    dual = [phi, a](const std::vector<Vec>& gs, const DualVec& q) {
      const int n = a.degree();
      auto sign = [](int k) { return (k % 2 == 0) ? 1.0 : -1.0; };
      auto axpy = [](DualVec& acc, double s, const DualVec& v) {
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = acc[i] + Dual(s) * v[i];
      };
      DualVec acc(q.size(), Dual(0.0));
      axpy(acc, sign(n + 1), a.eval_dual(std::vector<Vec>(gs.begin() + 1, gs.end()), q));
      for (int i = 1; i <= n; ++i) {
        std::vector<Vec> args;
        for (int k = 0; k < i - 1; ++k) args.push_back(gs[static_cast<std::size_t>(k)]);
        args.push_back(phi.group.multiply(gs[static_cast<std::size_t>(i - 1)], gs[static_cast<std::size_t>(i)]));
        for (int k = i + 1; k <= n; ++k) args.push_back(gs[static_cast<std::size_t>(k)]);
        axpy(acc, sign(n + i + 1), a.eval_dual(args, q));
      }
      // pullback term: J(g_last)^T A(g_1..g_n)(phi_{g_last}(q)), J constant in q
      const Vec& g = gs.back();
      const Mat Jt = phi.jacobian_q(g, phi.group.identity).transpose();
      DualVec moved = phi.apply_dual(g, q);
      DualVec av = a.eval_dual(std::vector<Vec>(gs.begin(), gs.end() - 1), moved);
      for (int i = 0; i < Jt.rows(); ++i) {
        Dual term(0.0);
        for (int j = 0; j < Jt.cols(); ++j) term = term + Dual(Jt(i, j)) * av[static_cast<std::size_t>(j)];
        acc[static_cast<std::size_t>(i)] = acc[static_cast<std::size_t>(i)] + term;
      }
      return acc;
    };
  }
  return FormCochain(
      a.degree() + 1, a.chart(),
      [phi, a](const std::vector<Vec>& gs, const Vec& q) {
        return coboundary(phi, a, gs, Point(phi.base, q));
      },
      std::move(dual), const_out, a.diff_config());
}

inline FormCochain coboundary_of(const ActionSpec& phi, const OneForm& alpha) {
  return coboundary_cochain(phi, FormCochain::from_one_form(alpha));
}

// ---------------------------------------------------------------------------
// Built-in cochains
// ---------------------------------------------------------------------------

/// The Heisenberg one-cocycle A(x0,y0,t0) = x0^2 dy + 2 x0 dt.
inline FormCochain heisenberg_cocycle(ChartPtr chart) {
  return FormCochain(
      1, std::move(chart),
      [](const std::vector<Vec>& gs, const Vec&) {
        Vec v(3);
        v << 0.0, gs[0][0] * gs[0][0], 2.0 * gs[0][0];
        return v;
      },
      [](const std::vector<Vec>& gs, const DualVec&) {
        return DualVec{Dual(0.0), Dual(gs[0][0] * gs[0][0]), Dual(2.0 * gs[0][0])};
      },
      /*constant_coeff=*/true);
}

/// A(g)(q) = g_1 * (q_2 dq_1): a demo cochain whose values are not closed.
inline FormCochain nonclosed_demo(ChartPtr chart) {
  const int n = chart->dim();
  return FormCochain(
      1, std::move(chart),
      [n](const std::vector<Vec>& gs, const Vec& q) {
        Vec v = Vec::Zero(n);
        v[0] = gs[0][0] * q[1];
        return v;
      },
      [n](const std::vector<Vec>& gs, const DualVec& q) {
        DualVec v(static_cast<std::size_t>(n), Dual(0.0));
        v[0] = Dual(gs[0][0]) * q[1];
        return v;
      });
}

// ---------------------------------------------------------------------------
// Cocycle and closedness verification
// ---------------------------------------------------------------------------

/// A(gh) = A(h) + phi*_h A(g) over all sampled (g, h, q); also A(e) = 0.
inline CheckReport is_cocycle(const ActionSpec& phi, const FormCochain& a, const SampleSet& s,
                              double tol) {
  if (a.degree() != 1) throw ArityError("is_cocycle: degree-1 cochain required");
  CheckReport rep;
  rep.name = "is_cocycle";
  rep.anchor = "A(gh) = A(h) + phi_h^* A(g)";
  for (std::size_t qi = 0; qi < s.base_points.size(); ++qi) {
    const Point q(phi.base, s.base_points[qi]);
    rep.record_part("identity_element", max_abs(a({phi.group.identity}, q.coords)),
                    "q=" + std::to_string(qi));
    for (std::size_t gi = 0; gi + 1 < s.group_elems.size(); gi += 2) {
      const Vec &g = s.group_elems[gi], &h = s.group_elems[gi + 1];
      const Vec lhs = a({phi.group.multiply(g, h)}, q.coords);
      const Vec rhs = a({h}, q.coords) + geo::pullback(a.at({g}), phi.map_for(h), q);
      rep.record_part("cocycle", max_abs(Vec(lhs - rhs)),
                      "g=" + std::to_string(gi) + " h=" + std::to_string(gi + 1) + " q=" + std::to_string(qi));
    }
  }
  return rep.finish(tol);
}

/// max || d(A(g)) || over sampled g and q.
inline CheckReport closed_valued(const FormCochain& a, const SampleSet& s, double tol) {
  CheckReport rep;
  rep.name = "closed_valued";
  rep.anchor = "d A(g) = 0";
  for (std::size_t gi = 0; gi < s.group_elems.size(); ++gi) {
    OneForm ag = a.at({s.group_elems[gi]});
    for (std::size_t qi = 0; qi < s.base_points.size(); ++qi) {
      const double r = max_abs(geo::exterior_derivative(ag, Point(a.chart(), s.base_points[qi])));
      rep.record_part("closedness", r, "g=" + std::to_string(gi) + " q=" + std::to_string(qi));
    }
  }
  return rep.finish(tol);
}

// ---------------------------------------------------------------------------
// Lifted actions  Phi^A_g = (T*phi)_g o t_{A(g)}
// ---------------------------------------------------------------------------

inline CotangentPoint lifted_action(const ActionSpec& phi, const CotangentChart& ct,
                                    const FormCochain& a, const Vec& g, const CotangentPoint& pt) {
  return cotangent::cotangent_lift(phi, ct, g, cotangent::fiber_translation(a.at({g}), pt));
}

inline SmoothMap lifted_action_map(const ActionSpec& phi, const CotangentChart& ct,
                                   const FormCochain& a, const Vec& g) {
  return geo::compose(cotangent::cotangent_lift_map(phi, ct, g),
                      cotangent::fiber_translation_map(a.at({g}), ct));
}

/// Phi^A as an action on the total chart, for the generic axiom verifiers.
inline ActionSpec lifted_action_spec(const ActionSpec& phi, const CotangentChart& ct,
                                     const FormCochain& a, std::string name = "lifted") {
  ActionSpec out;
  out.name = std::move(name);
  out.group = phi.group;
  out.base = ct.total;
  out.diff = phi.diff;
  out.apply = [phi, ct, a](const Vec& g, const Vec& x) {
    return lifted_action_map(phi, ct, a, g).eval_unreduced(x);
  };
  if (phi.jacobian_constant_in_q && phi.jacobian_q && phi.apply_dual && a.has_dual()) {
    out.apply_dual = [phi, ct, a](const Vec& g, const DualVec& x) {
      return lifted_action_map(phi, ct, a, g).eval_dual(x);
    };
  }
  return out;
}

/// Residual of (Phi^A_g)^* omega = omega, plus the defect identity: the
/// observed defect omega - (Phi^A_g)^* omega must equal
/// pi^*(d A(g)) + pi^*(beta - phi_g^* beta) whether or not A is closed.
inline CheckReport verify_lift_symplectic(const ActionSpec& phi, const CotangentChart& ct,
                                          const FormCochain& a, const TwoForm& omega,
                                          const SampleSet& s, double tol,
                                          const cotangent::MagneticTerm* beta = nullptr) {
  CheckReport rep;
  rep.name = "lift_symplectic";
  rep.anchor = "(Phi^A_g)* omega = omega - pi*(d A(g))";
  SmoothMap proj = cotangent::projection_map(ct);
  const std::size_t gmax = std::min<std::size_t>(s.group_elems.size(), 25);
  for (std::size_t gi = 0; gi < gmax; ++gi) {
    const Vec& g = s.group_elems[gi];
    SmoothMap lift = lifted_action_map(phi, ct, a, g);
    lift.set_diff_config(phi.diff);
    OneForm ag = a.at({g});
    for (std::size_t fi = 0; fi < std::min<std::size_t>(s.fiber_covectors.size(), 4); ++fi) {
      for (std::size_t qi = 0; qi < std::min<std::size_t>(s.base_points.size(), 4); ++qi) {
        Point q(ct.base, s.base_points[qi]);
        Point x = cotangent::to_total(ct, cotangent::CotangentPoint(q, s.fiber_covectors[fi]));
        const Mat Jpi = jacobian(proj, x);
        const Mat observed_defect = omega(x) - geo::pullback(omega, lift, x);

        Mat predicted = Jpi.transpose() * geo::exterior_derivative(ag, q) * Jpi;
        if (beta) {
          const Mat bq = beta->beta(q);
          const Mat pb = geo::pullback(beta->beta, phi.map_for(g), q);
          predicted += Jpi.transpose() * (bq - pb) * Jpi;
        }
        const std::string where =
            "g=" + std::to_string(gi) + " q=" + std::to_string(qi) + " p=" + std::to_string(fi);
        rep.record_part("symplectic", max_abs(observed_defect), where);
        rep.record_part("defect_gap", max_abs(Mat(observed_defect - predicted)), where);
      }
    }
  }
  // the verdict is about symplecticity; the defect gap is reported alongside
  double sym = 0.0, gap = 0.0;
  for (auto& [k, v] : rep.breakdown) {
    if (k == "symplectic") sym = v;
    if (k == "defect_gap") gap = v;
  }
  rep.max_residual = sym;
  rep.tol = tol;
  rep.pass = sym <= tol && gap <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Primitive reconstruction: the coboundary obstruction solver
// ---------------------------------------------------------------------------
//
// For a simply transitive action with chart map q -> g(q), phi_{g(q)}(q0) = q,
// a coboundary identity A(g) = phi*_g alpha - alpha pins alpha everywhere once
// alpha(q0) =: alpha0 is chosen:
//
//   alpha(q) = J_{phi_{g(q)}}(q0)^{-T} (A(g(q))(q0) + alpha0).
//
// Closedness of alpha, discretized by central differences at sampled base
// points, is a linear least-squares system in alpha0. A minimal RMS residual
// bounded away from zero certifies that A is not a coboundary at the sampling
// resolution; a small residual yields a concrete primitive, cross-validated on
// held-out group elements.

struct TransitiveChart {
  Vec q0;
  std::function<Vec(const Vec& q)> group_of;
};

struct PrimitiveFitOptions {
  double diff_step = 1e-3;      // closedness discretization on the transported form
  double tol_feasible = 1e-4;   // RMS feasibility threshold
  double svd_threshold = 1e-8;  // relative singular-value cutoff
};

struct PrimitiveFit {
  Vec alpha0;
  double rms = 0.0;
  double cond = 0.0;  // retained-spectrum condition of the normal equations
  bool ill_conditioned = false;
  bool feasible = false;
  bool nontrivial_certificate = false;
  std::optional<OneForm> alpha;
  double heldout_residual = 0.0;
  int rows = 0;
};

inline PrimitiveFit primitive_fit(const ActionSpec& phi, const FormCochain& a,
                                  const TransitiveChart& chart, const std::vector<Vec>& base_samples,
                                  const std::vector<Vec>& heldout_group,
                                  const std::vector<Vec>& heldout_base,
                                  PrimitiveFitOptions opts = {}) {
  if (!chart.group_of) throw NotTransitiveError("primitive_fit: action lacks a transitive chart map");
  if (a.degree() != 1) throw ArityError("primitive_fit: degree-1 cochain required");
  const int n = phi.base->dim();
  const Point q0(phi.base, chart.q0);

  for (const Vec& q : base_samples) {
    if (phi.base->distance(phi.base->reduce(phi.apply(chart.group_of(q), chart.q0)), phi.base->reduce(q)) > 1e-9)
      throw NotTransitiveError("primitive_fit: chart map does not carry q0 to the sample");
  }

  auto alpha_eval = [phi, a, chart, q0](const Vec& q, const Vec& alpha0) {
    const Vec g = chart.group_of(q);
    const Mat M = geo::best_jacobian(phi.map_for(g), q0);
    const Vec rhs = a({g}, q0.coords) + alpha0;
    return Vec(M.transpose().partialPivLu().solve(rhs));
  };

  // closedness rows at one base point for a given alpha0 seed
  auto rows_at = [&](const Vec& q, const Vec& alpha0) {
    Mat D(n, n);
    for (int i = 0; i < n; ++i) {
      Vec qp = q, qm = q;
      qp[i] += opts.diff_step;
      qm[i] -= opts.diff_step;
      D.row(i) = ((alpha_eval(qp, alpha0) - alpha_eval(qm, alpha0)) / (2.0 * opts.diff_step)).transpose();
    }
    Vec r(n * (n - 1) / 2);
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) r[k++] = D(i, j) - D(j, i);
    return r;
  };

  const int rows_per_point = n * (n - 1) / 2;
  const int m = static_cast<int>(base_samples.size()) * rows_per_point;
  Vec r0(m);
  Mat C(m, n);
  for (std::size_t s = 0; s < base_samples.size(); ++s)
    r0.segment(static_cast<int>(s) * rows_per_point, rows_per_point) = rows_at(base_samples[s], Vec::Zero(n));
  for (int k = 0; k < n; ++k) {
    Vec ek = Vec::Zero(n);
    ek[k] = 1.0;
    for (std::size_t s = 0; s < base_samples.size(); ++s)
      C.block(static_cast<int>(s) * rows_per_point, k, rows_per_point, 1) =
          rows_at(base_samples[s], ek) - r0.segment(static_cast<int>(s) * rows_per_point, rows_per_point);
  }

  Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& sv = svd.singularValues();
  const double cutoff = opts.svd_threshold * (sv.size() ? sv[0] : 0.0);
  PrimitiveFit fit;
  fit.rows = m;
  int kept = 0;
  Vec alpha0 = Vec::Zero(n);
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) {
      alpha0 += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(-r0) / sv[i]);
      ++kept;
    }
  }
  fit.alpha0 = alpha0;
  fit.ill_conditioned = kept < n;
  fit.cond = (kept > 0 && sv[kept - 1] > 0.0) ? sv[0] / sv[kept - 1]
                                              : std::numeric_limits<double>::infinity();
  fit.rms = std::sqrt(Vec(C * alpha0 + r0).squaredNorm() / static_cast<double>(m));
  fit.feasible = fit.rms <= opts.tol_feasible;
  fit.nontrivial_certificate = fit.rms >= 10.0 * opts.tol_feasible;

  if (fit.feasible) {
    Vec a0 = fit.alpha0;
    fit.alpha = OneForm(phi.base, [alpha_eval, a0](const Vec& q) { return alpha_eval(q, a0); });
    // cross-validate delta_phi alpha = A on held-out group elements
    for (const Vec& g : heldout_group) {
      SmoothMap mg = phi.map_for(g);
      for (const Vec& q : heldout_base) {
        const Point qq(phi.base, q);
        const Vec delta = geo::pullback(*fit.alpha, mg, qq) - (*fit.alpha)(qq);
        fit.heldout_residual = std::max(fit.heldout_residual, max_abs(Vec(delta - a({g}, q))));
      }
    }
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Cohomological equivalence (the classification round trip)
// ---------------------------------------------------------------------------
//
// Cocycles A and B define isomorphic lifted actions iff they differ by a
// coboundary. Given a closed witness alpha with B = A + delta alpha, the
// fibered symplectomorphism F = t_{-alpha} intertwines the two lifts:
// F o Phi^B_g = Phi^A_g o F.

inline CheckReport equivalence_map(const ActionSpec& phi, const CotangentChart& ct,
                                   const FormCochain& a, const FormCochain& b, const OneForm& alpha,
                                   const SampleSet& s, double tol) {
  require_same_chart(alpha.chart(), phi.base, "equivalence_map");
  CheckReport rep;
  rep.name = "equivalence_map";
  rep.anchor = "(A - B)(g) = delta(-alpha)(g);  t_{-alpha} intertwines Phi^A, Phi^B";

  // precondition: alpha closed
  for (const Vec& q : s.base_points) {
    const double r = max_abs(geo::exterior_derivative(alpha, Point(phi.base, q)));
    if (r > std::max(tol, 1e-8))
      throw NotClosedError("equivalence_map: witness form not closed, ||d alpha|| = " + format_g17(r));
  }

  OneForm neg_alpha(
      alpha.chart(), [alpha](const Vec& q) { return Vec(-alpha.eval_raw(q)); },
      alpha.has_dual() ? OneForm::DualFn([alpha](const DualVec& q) {
        DualVec v = alpha.eval_dual(q);
        for (auto& d : v) d = -d;
        return v;
      })
                       : nullptr,
      alpha.constant_coeff(), alpha.diff_config());
  SmoothMap F = cotangent::fiber_translation_map(neg_alpha, ct);
  TwoForm omega = cotangent::canonical_symplectic(ct);

  const std::size_t gmax = std::min<std::size_t>(s.group_elems.size(), 25);
  for (std::size_t gi = 0; gi < gmax; ++gi) {
    const Vec& g = s.group_elems[gi];
    SmoothMap mg = phi.map_for(g);
    SmoothMap phiA = lifted_action_map(phi, ct, a, g);
    SmoothMap phiB = lifted_action_map(phi, ct, b, g);
    for (std::size_t qi = 0; qi < std::min<std::size_t>(s.base_points.size(), 6); ++qi) {
      const Point q(phi.base, s.base_points[qi]);
      const std::string where = "g=" + std::to_string(gi) + " q=" + std::to_string(qi);

      // witness identity (A - B)(g) = alpha - phi_g^* alpha
      const Vec lhs = a({g}, q.coords) - b({g}, q.coords);
      const Vec rhs = alpha(q) - geo::pullback(alpha, mg, q);
      rep.record_part("witness_identity", max_abs(Vec(lhs - rhs)), where);

      for (std::size_t fi = 0; fi < std::min<std::size_t>(s.fiber_covectors.size(), 3); ++fi) {
        Point x = cotangent::to_total(
            ct, cotangent::CotangentPoint(q, s.fiber_covectors[fi]));
        rep.record_part("intertwine", geo::distance(F(phiB(x)), phiA(F(x))), where);
        rep.record_part("symplectic", max_abs(Mat(geo::pullback(omega, F, x) - omega(x))), where);
      }
    }
  }
  return rep.finish(tol);
}

}  // namespace symplift::cohom
