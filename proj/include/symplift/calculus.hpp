#pragma once

#include "symplift/chart.hpp"
#include "symplift/dual.hpp"

#include <functional>
#include <utility>

namespace symplift::geo {

// ---------------------------------------------------------------------------
// Differentiation configuration
// ---------------------------------------------------------------------------

enum class DiffStrategy { Analytic, ForwardAD, CentralDiff };

struct DiffConfig {
  DiffStrategy strategy = DiffStrategy::ForwardAD;
  double step = 1e-5;  // central-difference step, absolute
};

inline const char* to_string(DiffStrategy s) {
  switch (s) {
    case DiffStrategy::Analytic: return "analytic";
    case DiffStrategy::ForwardAD: return "ad";
    case DiffStrategy::CentralDiff: return "fd";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Smooth maps between charts
// ---------------------------------------------------------------------------
//
// The evaluator works on raw coordinates; outputs are reduced into the
// codomain chart. A map may carry a dual-number evaluator (for forward-mode
// AD) and/or an analytic Jacobian. Requesting a strategy the map cannot
// honour falls back down the chain analytic -> ad -> fd, so a scenario-wide
// override never aborts a run.

class SmoothMap {
 public:
  using EvalFn = std::function<Vec(const Vec&)>;
  using DualFn = std::function<DualVec(const DualVec&)>;
  using JacFn = std::function<Mat(const Vec&)>;

  SmoothMap() = default;
  SmoothMap(ChartPtr domain, ChartPtr codomain, EvalFn eval, DualFn dual = nullptr,
            JacFn jac = nullptr, DiffConfig cfg = {})
      : domain_(std::move(domain)),
        codomain_(std::move(codomain)),
        eval_(std::move(eval)),
        dual_(std::move(dual)),
        jac_(std::move(jac)),
        cfg_(cfg) {}

  const ChartPtr& domain() const { return domain_; }
  const ChartPtr& codomain() const { return codomain_; }
  const DiffConfig& diff_config() const { return cfg_; }
  void set_diff_config(DiffConfig c) { cfg_ = c; }
  bool has_dual() const { return static_cast<bool>(dual_); }
  bool has_analytic_jacobian() const { return static_cast<bool>(jac_); }

  Point operator()(const Point& x) const {
    if (*x.chart != *domain_) throw ChartMismatchError("SmoothMap: point not in domain");
    return Point(codomain_, eval_raw(x.coords));
  }

  /// Raw-coordinate evaluation, output reduced into the codomain chart.
  Vec eval_raw(const Vec& x) const {
    Vec y = codomain_->reduce(eval_(x));
    require_finite(y, "SmoothMap::eval");
    return y;
  }

  /// Unreduced evaluation; used by difference schemes that need to take
  /// minimal-image output differences themselves.
  Vec eval_unreduced(const Vec& x) const { return eval_(x); }

  DualVec eval_dual(const DualVec& x) const { return dual_(x); }
  Mat analytic_jacobian(const Vec& x) const { return jac_(x); }

 private:
  ChartPtr domain_, codomain_;
  EvalFn eval_;
  DualFn dual_;
  JacFn jac_;
  DiffConfig cfg_;
};

// ---------------------------------------------------------------------------
// jacobian
// ---------------------------------------------------------------------------

namespace detail {

inline Mat jacobian_fd(const SmoothMap& f, const Vec& x, double h) {
  const int n = f.domain()->dim();
  const int m = f.codomain()->dim();
  Mat J(m, n);
  for (int j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    Vec d = f.eval_unreduced(xp) - f.eval_unreduced(xm);
    // periodic output coordinates: difference along the minimal representative
    for (int i = 0; i < m; ++i)
      if (f.codomain()->periodic(i)) d[i] = min_image(d[i], *f.codomain()->period(i));
    J.col(j) = d / (2.0 * h);
  }
  require_finite(J, "jacobian (central differences)");
  return J;
}

inline Mat jacobian_ad(const SmoothMap& f, const Vec& x) {
  DualVec out = f.eval_dual(seed(x));
  Mat J = jacobian_of(out, static_cast<int>(x.size()));
  require_finite(J, "jacobian (forward AD)");
  return J;
}

}  // namespace detail

inline Mat jacobian(const SmoothMap& f, const Vec& x) {
  switch (f.diff_config().strategy) {
    case DiffStrategy::Analytic:
      if (f.has_analytic_jacobian()) {
        Mat J = f.analytic_jacobian(x);
        require_finite(J, "jacobian (analytic)");
        return J;
      }
      [[fallthrough]];
    case DiffStrategy::ForwardAD:
      if (f.has_dual()) return detail::jacobian_ad(f, x);
      [[fallthrough]];
    case DiffStrategy::CentralDiff:
      break;
  }
  return detail::jacobian_fd(f, x, f.diff_config().step);
}

inline Mat jacobian(const SmoothMap& f, const Point& x) {
  if (*x.chart != *f.domain()) throw ChartMismatchError("jacobian: point not in domain");
  return jacobian(f, x.coords);
}

/// Best-available Jacobian (analytic, else AD, else differences), independent
/// of the map's configured strategy. Inner transports use this so that an
/// outer difference scheme never differentiates through inner difference
/// noise.
inline Mat best_jacobian(SmoothMap f, const Point& x) {
  DiffConfig cfg = f.diff_config();
  cfg.strategy = DiffStrategy::Analytic;
  f.set_diff_config(cfg);
  return jacobian(f, x);
}

// ---------------------------------------------------------------------------
// Differential forms and vector fields
// ---------------------------------------------------------------------------

class OneForm {
 public:
  using EvalFn = std::function<Vec(const Vec&)>;
  using DualFn = std::function<DualVec(const DualVec&)>;

  OneForm() = default;
  OneForm(ChartPtr chart, EvalFn eval, DualFn dual = nullptr, bool constant_coeff = false,
          DiffConfig cfg = {})
      : chart_(std::move(chart)),
        eval_(std::move(eval)),
        dual_(std::move(dual)),
        constant_coeff_(constant_coeff),
        cfg_(cfg) {}

  static OneForm constant(ChartPtr chart, Vec coeffs) {
    Vec c = std::move(coeffs);
    return OneForm(std::move(chart), [c](const Vec&) { return c; },
                   [c](const DualVec&) { return constants(c); }, /*constant_coeff=*/true);
  }

  static OneForm zero(ChartPtr chart) {
    return constant(std::move(chart), Vec::Zero(chart ? chart->dim() : 0));
  }

  const ChartPtr& chart() const { return chart_; }
  bool constant_coeff() const { return constant_coeff_; }
  bool has_dual() const { return static_cast<bool>(dual_); }
  const DiffConfig& diff_config() const { return cfg_; }
  void set_diff_config(DiffConfig c) { cfg_ = c; }

  Vec operator()(const Point& x) const {
    if (*x.chart != *chart_) throw ChartMismatchError("OneForm: point not on chart");
    return eval_raw(x.coords);
  }
  Vec eval_raw(const Vec& x) const {
    Vec v = eval_(x);
    require_finite(v, "OneForm::eval");
    return v;
  }
  DualVec eval_dual(const DualVec& x) const { return dual_(x); }

 private:
  ChartPtr chart_;
  EvalFn eval_;
  DualFn dual_;
  bool constant_coeff_ = false;
  DiffConfig cfg_;
};

/// Antisymmetry of every evaluated value is asserted, never repaired: a
/// symmetric part signals a bug in pullback or assembly code.
class TwoForm {
 public:
  using EvalFn = std::function<Mat(const Vec&)>;

  TwoForm() = default;
  TwoForm(ChartPtr chart, EvalFn eval, bool constant_coeff = false)
      : chart_(std::move(chart)), eval_(std::move(eval)), constant_coeff_(constant_coeff) {}

  static TwoForm constant(ChartPtr chart, Mat value) {
    Mat m = std::move(value);
    return TwoForm(std::move(chart), [m](const Vec&) { return m; }, /*constant_coeff=*/true);
  }

  const ChartPtr& chart() const { return chart_; }
  bool constant_coeff() const { return constant_coeff_; }

  Mat operator()(const Point& x) const {
    if (*x.chart != *chart_) throw ChartMismatchError("TwoForm: point not on chart");
    return eval_raw(x.coords);
  }
  Mat eval_raw(const Vec& x) const {
    Mat m = eval_(x);
    require_finite(m, "TwoForm::eval");
    if (max_abs(Mat(m + m.transpose())) > 1e-12)
      throw NumericDomainError("TwoForm: value not antisymmetric");
    return m;
  }

 private:
  ChartPtr chart_;
  EvalFn eval_;
  bool constant_coeff_ = false;
};

class VectorField {
 public:
  using EvalFn = std::function<Vec(const Vec&)>;

  VectorField() = default;
  VectorField(ChartPtr chart, EvalFn eval) : chart_(std::move(chart)), eval_(std::move(eval)) {}

  static VectorField constant(ChartPtr chart, Vec value) {
    Vec v = std::move(value);
    return VectorField(std::move(chart), [v](const Vec&) { return v; });
  }

  const ChartPtr& chart() const { return chart_; }
  Vec operator()(const Point& x) const {
    if (*x.chart != *chart_) throw ChartMismatchError("VectorField: point not on chart");
    Vec v = eval_(x.coords);
    require_finite(v, "VectorField::eval");
    return v;
  }

 private:
  ChartPtr chart_;
  EvalFn eval_;
};

// ---------------------------------------------------------------------------
// Pullbacks
// ---------------------------------------------------------------------------
//
//   (F^* alpha)(x) = J(x)^T alpha(F(x))
//   (F^* Omega)(x) = J(x)^T Omega(F(x)) J(x)

inline Vec pullback(const OneForm& form, const SmoothMap& map, const Point& x) {
  require_same_chart(form.chart(), map.codomain(), "pullback(OneForm)");
  const Mat J = jacobian(map, x);
  return J.transpose() * form(map(x));
}

inline Mat pullback(const TwoForm& form, const SmoothMap& map, const Point& x) {
  require_same_chart(form.chart(), map.codomain(), "pullback(TwoForm)");
  const Mat J = jacobian(map, x);
  return J.transpose() * form(map(x)) * J;
}

/// F after G, with composed dual evaluators and chain-rule Jacobian when both
/// factors provide them.
inline SmoothMap compose(const SmoothMap& f, const SmoothMap& g) {
  require_same_chart(f.domain(), g.codomain(), "compose");
  SmoothMap::DualFn dual;
  if (f.has_dual() && g.has_dual())
    dual = [f, g](const DualVec& x) { return f.eval_dual(g.eval_dual(x)); };
  SmoothMap::JacFn jac;
  if (f.has_analytic_jacobian() && g.has_analytic_jacobian())
    jac = [f, g](const Vec& x) {
      return Mat(f.analytic_jacobian(g.eval_raw(x)) * g.analytic_jacobian(x));
    };
  return SmoothMap(
      g.domain(), f.codomain(), [f, g](const Vec& x) { return f.eval_unreduced(g.eval_raw(x)); },
      std::move(dual), std::move(jac), g.diff_config());
}

inline SmoothMap identity_map(ChartPtr chart) {
  return SmoothMap(
      chart, chart, [](const Vec& x) { return x; }, [](const DualVec& x) { return x; },
      [chart](const Vec&) { return Mat(Mat::Identity(chart->dim(), chart->dim())); });
}

// ---------------------------------------------------------------------------
// Exterior derivative of a 1-form:  (d alpha)_{ij} = d_i alpha_j - d_j alpha_i
// ---------------------------------------------------------------------------

inline Mat exterior_derivative(const OneForm& form, const Point& x) {
  if (*x.chart != *form.chart()) throw ChartMismatchError("exterior_derivative");
  const int n = form.chart()->dim();
  if (form.constant_coeff()) return Mat::Zero(n, n);

  Mat D(n, n);  // D(i,j) = d_i alpha_j
  if (form.has_dual()) {
    DualVec out = form.eval_dual(seed(x.coords));
    D = jacobian_of(out, n).transpose();
  } else {
    const double h = form.diff_config().step;
    for (int i = 0; i < n; ++i) {
      Vec xp = x.coords, xm = x.coords;
      xp[i] += h;
      xm[i] -= h;
      D.row(i) = (form.eval_raw(xp) - form.eval_raw(xm)).transpose() / (2.0 * h);
    }
  }
  require_finite(D, "exterior_derivative");
  return D - D.transpose();
}

// ---------------------------------------------------------------------------
// Interior product and the musical solve
// ---------------------------------------------------------------------------
//
// Contraction convention: (i_v Omega)_j = sum_i Omega_{ji} v_i, i.e. the
// matrix acting on the vector. Under this choice the vertical lift of a
// 1-form on the base contracts with the canonical two-form to +pi^* lambda,
// and fiberwise flows translate by +alpha; every identity downstream is
// verified against that orientation.

inline Vec interior_product(const Vec& v, const Mat& omega) {
  if (v.size() != omega.rows() || omega.rows() != omega.cols())
    throw ChartMismatchError("interior_product: shape mismatch");
  return omega * v;
}

/// Solve i_v Omega = xi for v. Nondegeneracy guard: |det| >= 1e-10 * ||Omega||^n.
inline Vec solve_musical(const Mat& omega, const Vec& xi) {
  if (xi.size() != omega.rows() || omega.rows() != omega.cols())
    throw ChartMismatchError("solve_musical: shape mismatch");
  const int n = static_cast<int>(omega.rows());
  const double scale = max_abs(omega);
  Eigen::FullPivLU<Mat> lu(omega);
  const double det = lu.determinant();
  const double floor = 1e-10 * std::pow(scale, n);
  if (scale == 0.0 || std::abs(det) < floor) {
    const double cond = (scale == 0.0) ? std::numeric_limits<double>::infinity()
                                       : std::pow(scale, n) / std::max(std::abs(det), 1e-300);
    throw SingularFormError("solve_musical: degenerate two-form", cond);
  }
  Vec v = lu.solve(xi);
  require_finite(v, "solve_musical");
  return v;
}

}  // namespace symplift::geo
