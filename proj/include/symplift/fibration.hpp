#pragma once

#include "symplift/cochain.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace symplift::fib {

using cotangent::CotangentChart;
using cotangent::MagneticTerm;
using geo::Chart;
using geo::ChartPtr;
using geo::OneForm;
using geo::Point;
using geo::SmoothMap;
using geo::TwoForm;
using groups::SampleSet;

// ---------------------------------------------------------------------------
// Complete Lagrangian fibrations
// ---------------------------------------------------------------------------
//
// Total space with a symplectic two-form and a projection whose fibers are
// Lagrangian. Completeness is asserted per scenario, never detected. All
// built-ins are coordinate fibrations: the projection takes the first n
// coordinates and the fiber is the last n.

struct LagrangianFibrationSpec {
  std::string name;
  ChartPtr total;
  ChartPtr base;
  SmoothMap projection;
  TwoForm omega;
  bool complete = false;
  bool coordinate_fibration = false;
  int n = 0;

  Point base_of(const Point& x) const { return projection(x); }
  Vec fiber_coords(const Point& x) const {
    if (!coordinate_fibration) throw Error(name + ": no explicit fiber coordinates");
    return x.coords.tail(n);
  }
  Point total_point(const Vec& base_coords, const Vec& fiber) const {
    Vec x(2 * n);
    x.head(n) = base_coords;
    x.tail(n) = fiber;
    return Point(total, std::move(x));
  }
};

/// T*Q with the canonical structure (fiber periods allowed, giving the
/// cylinder / torus quotient models).
inline LagrangianFibrationSpec canonical_fibration(const CotangentChart& ct, std::string name) {
  LagrangianFibrationSpec f;
  f.name = std::move(name);
  f.total = ct.total;
  f.base = ct.base;
  f.projection = cotangent::projection_map(ct);
  f.omega = cotangent::canonical_symplectic(ct);
  f.complete = true;
  f.coordinate_fibration = true;
  f.n = ct.n;
  return f;
}

inline LagrangianFibrationSpec cotangent_r1_fibration() {
  return canonical_fibration(CotangentChart(geo::make_chart(Chart::euclidean(1, "R1"))), "cotangent_r1");
}

inline LagrangianFibrationSpec cotangent_r2_fibration() {
  return canonical_fibration(CotangentChart(geo::make_chart(Chart::euclidean(2, "R2"))), "cotangent_r2");
}

/// T^2 = T*S^1 / Z dq: unit-period base circle, unit-period fiber circle.
inline LagrangianFibrationSpec cylinder_fibration() {
  CotangentChart ct(geo::make_chart(Chart::torus(1, 1.0, "S1")), {std::optional<double>(1.0)});
  return canonical_fibration(ct, "cylinder_s1");
}

/// T^4 = T*T^2 / Z^2: the quotient model with lattice {dq_1, dq_2}.
inline LagrangianFibrationSpec torus4_fibration() {
  CotangentChart ct(geo::make_chart(Chart::torus(2, 1.0, "T2")),
                    {std::optional<double>(1.0), std::optional<double>(1.0)});
  return canonical_fibration(ct, "torus4_model");
}

/// Cylinder with omega = (2 + cos(2 pi p)) dq ^ dp. The vertical field of a
/// constant one-form then depends on p along the flow, which is what the
/// integrator-order checks need; the flat cylinder's flows are exact at any
/// step count.
inline LagrangianFibrationSpec warped_cylinder_fibration() {
  CotangentChart ct(geo::make_chart(Chart::torus(1, 1.0, "S1")), {std::optional<double>(1.0)});
  LagrangianFibrationSpec f = canonical_fibration(ct, "warped_cylinder");
  f.omega = TwoForm(ct.total, [](const Vec& x) {
    const double w = 2.0 + std::cos(2.0 * M_PI * x[1]);
    Mat m(2, 2);
    m << 0.0, w, -w, 0.0;
    return m;
  });
  return f;
}

/// (T*Q, omega_Q + pi^* beta) -> Q; complete, with trivial isotropy.
inline LagrangianFibrationSpec magnetic_fibration(const CotangentChart& ct,
                                                  const MagneticTerm& beta) {
  LagrangianFibrationSpec f = canonical_fibration(ct, "magnetic");
  f.omega = cotangent::magnetic_form(ct, beta);
  return f;
}

// ---------------------------------------------------------------------------
// Verifying the Lagrangian-fiber condition: ker T pi = (ker T pi)^omega
// ---------------------------------------------------------------------------

inline CheckReport lagrangian_check(const LagrangianFibrationSpec& fib,
                                    const std::vector<Point>& samples, double tol) {
  CheckReport rep;
  rep.name = fib.name + ".lagrangian_fibers";
  rep.anchor = "ker T_x pi = (ker T_x pi)^omega";
  const int n = fib.base->dim();
  for (std::size_t xi = 0; xi < samples.size(); ++xi) {
    const Point& x = samples[xi];
    const Mat J = geo::best_jacobian(fib.projection, x);
    Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeFullV);
    int rank = 0;
    const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-10 * smax) ++rank;
    if (rank != n)
      throw RankError(fib.name + ": projection rank " + std::to_string(rank) + " != " +
                      std::to_string(n) + " at sample " + std::to_string(xi));
    const Mat kernel = svd.matrixV().rightCols(J.cols() - rank);
    const Mat omega = fib.omega(x);
    const Mat gram = kernel.transpose() * omega * kernel;
    rep.record(max_abs(gram), "x=" + std::to_string(xi));
  }
  return rep.finish(tol);
}

// ---------------------------------------------------------------------------
// Vertical fields and their flows
// ---------------------------------------------------------------------------

/// X with i_X omega = pi^* alpha; vertical by the Lagrangian-fiber condition.
inline Vec vertical_field(const LagrangianFibrationSpec& fib, const OneForm& alpha,
                          const Point& x) {
  require_same_chart(alpha.chart(), fib.base, "vertical_field");
  const Mat Jpi = geo::best_jacobian(fib.projection, x);
  const Vec xi = Jpi.transpose() * alpha(fib.base_of(x));
  return geo::solve_musical(fib.omega(x), xi);
}

struct FlowConfig {
  int steps = 200;  // RK4 steps for a unit time interval
};

/// Classical fourth-order Runge-Kutta for the vertical field, time t in
/// cfg.steps steps. Periodic coordinates are reduced at the end only.
inline Point flow(const LagrangianFibrationSpec& fib, const OneForm& alpha, const Point& x0,
                  double t, FlowConfig cfg = {}) {
  if (!fib.complete) throw Error(fib.name + ": flow requires a complete fibration");
  if (cfg.steps < 1) throw Error("FlowConfig: steps must be >= 1");
  auto field = [&](const Vec& x) { return vertical_field(fib, alpha, Point(fib.total, x)); };
  Vec x = x0.coords;
  const double dt = t / cfg.steps;
  for (int s = 0; s < cfg.steps; ++s) {
    const Vec k1 = field(x);
    const Vec k2 = field(x + 0.5 * dt * k1);
    const Vec k3 = field(x + 0.5 * dt * k2);
    const Vec k4 = field(x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    require_finite(x, "flow");
  }
  return Point(fib.total, x);
}

/// mu(alpha, x) = time-1 flow of the vertical field of alpha.
inline Point mu(const LagrangianFibrationSpec& fib, const OneForm& alpha, const Point& x,
                FlowConfig cfg = {}) {
  return flow(fib, alpha, x, 1.0, cfg);
}

/// mu with a fiber covector: the constant extension of alpha_q, which is
/// legitimate because mu only sees the value of the form at pi(x).
inline Point mu_covector(const LagrangianFibrationSpec& fib, const Vec& alpha_q, const Point& x,
                         FlowConfig cfg = {}) {
  return mu(fib, OneForm::constant(fib.base, alpha_q), x, cfg);
}

inline SmoothMap flow_map(const LagrangianFibrationSpec& fib, const OneForm& alpha, double t,
                          FlowConfig cfg = {}, double fd_step = 1e-5) {
  auto f = fib;
  return SmoothMap(
      fib.total, fib.total,
      [f, alpha, t, cfg](const Vec& x) { return flow(f, alpha, Point(f.total, x), t, cfg).coords; },
      nullptr, nullptr, geo::DiffConfig{geo::DiffStrategy::CentralDiff, fd_step});
}

/// Defect identity of the time-t flow: omega - F_t^* omega = t pi^*(d alpha).
/// The flow Jacobian is taken by central differences of the integrated map,
/// hence the coarse default tolerance.
inline CheckReport verify_flow_pullback(const LagrangianFibrationSpec& fib, const OneForm& alpha,
                                        double t, const std::vector<Point>& samples, double tol,
                                        FlowConfig cfg = {}) {
  CheckReport rep;
  rep.name = fib.name + ".flow_pullback";
  rep.anchor = "omega - (F_t^{X_{pi* alpha}})* omega = t pi*(d alpha)";
  SmoothMap F = flow_map(fib, alpha, t, cfg);
  for (std::size_t xi = 0; xi < samples.size(); ++xi) {
    const Point& x = samples[xi];
    const Mat observed = fib.omega(x) - geo::pullback(fib.omega, F, x);
    const Mat Jpi = geo::best_jacobian(fib.projection, x);
    const Mat predicted =
        t * (Jpi.transpose() * geo::exterior_derivative(alpha, fib.base_of(x)) * Jpi);
    rep.record_part("identity", max_abs(Mat(observed - predicted)), "x=" + std::to_string(xi));
    rep.record_part("defect_magnitude", max_abs(observed), "x=" + std::to_string(xi));
  }
  double identity = 0.0;
  for (auto& [k, v] : rep.breakdown)
    if (k == "identity") identity = v;
  rep.max_residual = identity;
  rep.tol = tol;
  rep.pass = identity <= tol;
  return rep;
}

/// Integrator-order probe: error against an N_ref-step reference must shrink
/// by ~2^4 per step doubling.
struct FlowOrderResult {
  double err_coarse = 0.0;
  double err_fine = 0.0;
  double ratio = 0.0;
};

inline FlowOrderResult flow_order_check(const LagrangianFibrationSpec& fib, const OneForm& alpha,
                                        const Point& x, double t, int n_coarse = 20,
                                        int n_ref = 400) {
  const Vec ref = flow(fib, alpha, x, t, {n_ref}).coords;
  FlowOrderResult r;
  r.err_coarse = fib.total->distance(flow(fib, alpha, x, t, {n_coarse}).coords, ref);
  r.err_fine = fib.total->distance(flow(fib, alpha, x, t, {2 * n_coarse}).coords, ref);
  r.ratio = r.err_coarse / r.err_fine;
  return r;
}

// ---------------------------------------------------------------------------
// The four defining properties of mu
// ---------------------------------------------------------------------------

inline CheckReport mu_properties(const LagrangianFibrationSpec& fib, const SampleSet& s,
                                 double tol, FlowConfig cfg = {}) {
  CheckReport rep;
  rep.name = fib.name + ".mu_properties";
  rep.anchor = "mu(alpha+beta,x) = mu(alpha,mu(beta,x)); pi-fibered; pointwise; fiber-transitive";
  const int n = fib.n;
  const std::size_t count = std::min(s.base_points.size(), s.fiber_covectors.size());

  for (std::size_t i = 0; i < count; ++i) {
    const Point x = fib.total_point(s.base_points[i], s.fiber_covectors[i]);
    const std::string where = "x=" + std::to_string(i);
    const Vec a = s.fiber_covectors[(i + 1) % count];
    const Vec b = s.fiber_covectors[(i + 2) % count];

    // additivity
    const Point lhs = mu_covector(fib, Vec(a + b), x, cfg);
    const Point rhs = mu_covector(fib, a, mu_covector(fib, b, x, cfg), cfg);
    rep.record_part("additivity", distance(lhs, rhs), where);

    // pi-fibered
    rep.record_part("fibered", distance(fib.base_of(mu_covector(fib, a, x, cfg)), fib.base_of(x)),
                    where);

    // only the value at pi(x) matters: perturb away from the base point
    {
      OneForm alpha = OneForm::constant(fib.base, a);
      const Vec q0 = fib.base_of(x).coords;
      OneForm beta(fib.base, [a, q0, n](const Vec& q) {
        double bump;
        if (n >= 1) {
          const double d = q[0] - q0[0];
          bump = std::sin(2.0 * M_PI * d);  // vanishes at q0, periodic-safe
        } else {
          bump = 0.0;
        }
        return Vec(a + bump * Vec::Ones(a.size()));
      });
      rep.record_part("pointwise", distance(mu(fib, alpha, x, cfg), mu(fib, beta, x, cfg)), where);
    }

    // transitivity, constructively via explicit fiber coordinates
    if (fib.coordinate_fibration) {
      const Vec target_fiber = s.fiber_covectors[(i + 3) % count];
      const Point xprime = fib.total_point(s.base_points[i], target_fiber);
      Vec delta = xprime.coords.tail(n) - x.coords.tail(n);
      for (int d = 0; d < n; ++d)
        if (fib.total->periodic(n + d)) delta[d] = min_image(delta[d], *fib.total->period(n + d));
      rep.record_part("transitivity", distance(mu_covector(fib, delta, x, cfg), xprime), where);
    }
  }
  return rep.finish(tol);
}

// ---------------------------------------------------------------------------
// Isotropy lattices
// ---------------------------------------------------------------------------

/// Constant-over-Q lattice of covectors, generators as matrix columns.
class Lattice {
 public:
  Lattice() = default;
  Lattice(int ambient_dim, Mat generators) : dim_(ambient_dim), gens_(std::move(generators)) {
    if (gens_.size() && gens_.rows() != dim_) throw Error("Lattice: generator dimension");
    if (k() > 0) {
      Eigen::JacobiSVD<Mat> svd(gens_);
      if (svd.singularValues()[k() - 1] < 1e-9 * svd.singularValues()[0])
        throw Error("Lattice: generators not independent");
      min_norm_ = gens_.colwise().norm().minCoeff();
    }
  }

  static Lattice trivial(int ambient_dim) { return Lattice(ambient_dim, Mat(ambient_dim, 0)); }

  int k() const { return static_cast<int>(gens_.cols()); }
  int dim() const { return dim_; }
  const Mat& generators() const { return gens_; }
  double min_norm() const { return min_norm_; }

  /// Reduce into the half-open fundamental domain [0,1)^k of the generators,
  /// ties snapped toward 0 so reduction is idempotent.
  Vec reduce(const Vec& p) const {
    if (k() == 0) return p;
    const Vec c = coords(p);
    Vec m(k());
    for (int i = 0; i < k(); ++i) {
      double mi = std::floor(c[i]);
      if (c[i] - mi > 1.0 - 1e-9) mi += 1.0;
      m[i] = mi;
    }
    return p - gens_ * m;
  }

  /// max-abs distance to the nearest lattice vector.
  double dist(const Vec& v) const {
    if (k() == 0) return max_abs(v);
    const Vec c = coords(v);
    Vec m(k());
    for (int i = 0; i < k(); ++i) m[i] = std::round(c[i]);
    return max_abs(Vec(v - gens_ * m));
  }

 private:
  Vec coords(const Vec& p) const {
    return (gens_.transpose() * gens_).ldlt().solve(gens_.transpose() * p);
  }

  int dim_ = 0;
  Mat gens_;
  double min_norm_ = 0.0;
};

struct ScanConfig {
  double box = 3.0;        // scan covectors in [-box, box]^k
  double step = 0.05;      // grid pitch
  double hit_tol = 0.02;   // return-to-start threshold on the grid
  double refine_tol = 1e-10;
  int probes = 3;          // extra fiber points confirming each generator
  FlowConfig flow{20};
};

namespace detail {

/// Fiber displacement of the time-1 flow along the constant covector c.
inline Vec mu_displacement(const LagrangianFibrationSpec& fib, const Vec& c, const Point& x,
                           const FlowConfig& cfg) {
  const Point y = fib::mu_covector(fib, c, x, cfg);
  Vec d = y.coords - x.coords;
  for (int i = 0; i < d.size(); ++i)
    if (fib.total->periodic(i)) d[i] = min_image(d[i], *fib.total->period(i));
  return d;
}

/// Newton refinement of a return candidate; the displacement of every
/// built-in is linear in c, so this converges in one or two steps.
inline Vec refine_return(const LagrangianFibrationSpec& fib, Vec c, const Point& x,
                         const ScanConfig& scan) {
  const int n = fib.n;
  for (int it = 0; it < 12; ++it) {
    const Vec g = mu_displacement(fib, c, x, scan.flow);
    if (max_abs(g) <= scan.refine_tol) break;
    Mat J(2 * n, n);
    const double h = 1e-4;
    for (int j = 0; j < n; ++j) {
      Vec cp = c, cm = c;
      cp[j] += h;
      cm[j] -= h;
      J.col(j) = (mu_displacement(fib, cp, x, scan.flow) - mu_displacement(fib, cm, x, scan.flow)) /
                 (2.0 * h);
    }
    const Vec step = J.colPivHouseholderQr().solve(-g);
    c += step;
    if (max_abs(step) < scan.refine_tol) break;
  }
  return c;
}

}  // namespace detail

struct IsotropyResult {
  Lattice lattice;
  int raw_hits = 0;
  double probe_residual = 0.0;  // worst return distance across verification probes
  double combo_residual = 0.0;  // worst distance of a hit to the generated lattice
};

/// Grid-scan the covector box for time-1 returns, refine each hit, and reduce
/// the hit set to primitive generators. Empty result (k = 0) is the correct
/// answer for plain T*Q. Requires explicit fiber coordinates and fiber
/// dimension <= 2.
inline IsotropyResult isotropy_lattice(const LagrangianFibrationSpec& fib, const Point& x,
                                       ScanConfig scan = {}) {
  if (!fib.coordinate_fibration) throw Error("isotropy_lattice: explicit fiber coordinates required");
  const int n = fib.n;
  if (n > 2) throw Error("isotropy_lattice: fiber dimension must be <= 2");
  IsotropyResult out;

  std::vector<Vec> hits;
  auto consider = [&](Vec c) {
    if (max_abs(c) < scan.step / 2.0) return;  // skip the trivial return
    if (max_abs(detail::mu_displacement(fib, c, x, scan.flow)) > scan.hit_tol) return;
    ++out.raw_hits;
    Vec refined = detail::refine_return(fib, c, x, scan);
    for (const Vec& h : hits)
      if (max_abs(Vec(h - refined)) < 1e-6) return;  // duplicate
    hits.push_back(std::move(refined));
  };

  const int steps = static_cast<int>(std::round(2.0 * scan.box / scan.step));
  if (n == 1) {
    for (int i = 0; i <= steps; ++i) consider(Vec::Constant(1, -scan.box + i * scan.step));
  } else {
    for (int i = 0; i <= steps; ++i)
      for (int j = 0; j <= steps; ++j) {
        Vec c(2);
        c << -scan.box + i * scan.step, -scan.box + j * scan.step;
        consider(std::move(c));
      }
  }

  if (hits.empty()) {
    out.lattice = Lattice::trivial(n);
    return out;
  }

  std::sort(hits.begin(), hits.end(), [](const Vec& a, const Vec& b) { return a.norm() < b.norm(); });

  std::vector<Vec> gens;
  gens.push_back(hits.front());
  if (n == 2) {
    for (const Vec& h : hits) {
      Mat pair(2, 2);
      pair << gens[0], h;
      if (std::abs(pair.determinant()) > 1e-6) {
        gens.push_back(h);
        break;
      }
    }
    if (gens.size() == 2) {
      // Gauss reduction to the shortest basis
      for (int it = 0; it < 16; ++it) {
        if (gens[1].norm() < gens[0].norm()) std::swap(gens[0], gens[1]);
        const double m = std::round(gens[1].dot(gens[0]) / gens[0].squaredNorm());
        if (m == 0.0) break;
        gens[1] -= m * gens[0];
      }
    }
  }
  // orient each generator with a positive leading component
  for (Vec& g : gens) {
    for (int i = 0; i < g.size(); ++i) {
      if (std::abs(g[i]) > 1e-9) {
        if (g[i] < 0) g = -g;
        break;
      }
    }
  }

  Mat gmat(n, static_cast<int>(gens.size()));
  for (std::size_t i = 0; i < gens.size(); ++i) gmat.col(static_cast<int>(i)) = gens[i];
  out.lattice = Lattice(n, gmat);

  // generator property must not depend on the probe fiber point
  Rng rng(1234);
  for (int pr = 0; pr < scan.probes; ++pr) {
    Vec fiber = x.coords.tail(n) + rng.uniform_vec(n, -0.9, 0.9);
    const Point probe = fib.total_point(x.coords.head(n), fiber);
    for (const Vec& g : gens)
      out.probe_residual =
          std::max(out.probe_residual, max_abs(detail::mu_displacement(fib, g, probe, scan.flow)));
  }
  for (const Vec& h : hits) out.combo_residual = std::max(out.combo_residual, out.lattice.dist(h));
  return out;
}

}  // namespace symplift::fib
