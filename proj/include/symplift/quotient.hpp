#pragma once

#include "symplift/fibration.hpp"

#include <string>
#include <utility>
#include <vector>

namespace symplift::fib {

using groups::ActionSpec;

// ---------------------------------------------------------------------------
// The symplectic reference T*Q / Lambda
// ---------------------------------------------------------------------------
//
// Fiber representatives live in the lattice fundamental domain; the reduced
// two-form pulls back to omega_Q under the quotient projection, so in
// representative coordinates it is the canonical block matrix. Only
// axis-aligned constant lattices are instantiated (every built-in is one).

inline std::vector<std::optional<double>> fiber_periods_of(const Lattice& lattice) {
  std::vector<std::optional<double>> periods(static_cast<std::size_t>(lattice.dim()));
  for (int j = 0; j < lattice.k(); ++j) {
    const Vec g = lattice.generators().col(j);
    int axis = -1;
    for (int i = 0; i < g.size(); ++i) {
      if (std::abs(g[i]) > 1e-9) {
        if (axis >= 0) throw Error("symplectic_reference: non-axis-aligned lattice unsupported");
        axis = i;
      }
    }
    if (axis < 0) throw Error("symplectic_reference: zero generator");
    periods[static_cast<std::size_t>(axis)] = std::abs(g[axis]);
  }
  return periods;
}

inline LagrangianFibrationSpec symplectic_reference(const ChartPtr& base, const Lattice& lattice,
                                                    std::string name = "reference") {
  CotangentChart ct(base, fiber_periods_of(lattice));
  return canonical_fibration(ct, std::move(name));
}

struct QuotientPoint {
  Point q;
  Vec rep;

  QuotientPoint() = default;
  QuotientPoint(Point base, Vec fiber_rep) : q(std::move(base)), rep(std::move(fiber_rep)) {}
};

inline Vec quotient_reduce(const Vec& p, const Lattice& lattice) { return lattice.reduce(p); }

// ---------------------------------------------------------------------------
// Sections
// ---------------------------------------------------------------------------

/// A section of a coordinate fibration, held as its fiber-coordinate
/// evaluator; pi o sigma = id by construction.
class Section {
 public:
  using EvalFn = std::function<Vec(const Vec&)>;
  using DualFn = std::function<DualVec(const DualVec&)>;

  Section() = default;
  Section(ChartPtr base, EvalFn eval, DualFn dual = nullptr)
      : base_(std::move(base)), eval_(std::move(eval)), dual_(std::move(dual)) {}

  static Section constant(ChartPtr base, Vec value) {
    Vec v = std::move(value);
    return Section(std::move(base), [v](const Vec&) { return v; },
                   [v](const DualVec&) { return constants(v); });
  }

  static Section zero(ChartPtr base, int fiber_dim) {
    return constant(std::move(base), Vec::Zero(fiber_dim));
  }

  static Section from_form(const OneForm& alpha) {
    auto a = alpha;
    return Section(alpha.chart(), [a](const Vec& q) { return a.eval_raw(q); },
                   a.has_dual() ? DualFn([a](const DualVec& q) { return a.eval_dual(q); }) : nullptr);
  }

  const ChartPtr& base() const { return base_; }
  bool has_dual() const { return static_cast<bool>(dual_); }

  Vec operator()(const Point& q) const {
    if (*q.chart != *base_) throw ChartMismatchError("Section: point not on base chart");
    Vec v = eval_(q.coords);
    require_finite(v, "Section::eval");
    return v;
  }
  Vec eval_raw(const Vec& q) const { return eval_(q); }
  DualVec eval_dual(const DualVec& q) const { return dual_(q); }

 private:
  ChartPtr base_;
  EvalFn eval_;
  DualFn dual_;
};

/// q -> (q, sigma(q)) into the fibration's total chart. Differentiating this
/// map across a fundamental-domain seam is safe: the difference scheme takes
/// minimal images on the periodic fiber coordinates.
inline SmoothMap graph_map(const Section& sigma, const LagrangianFibrationSpec& fib) {
  require_same_chart(sigma.base(), fib.base, "graph_map");
  const int n = fib.n;
  SmoothMap::DualFn dual;
  if (sigma.has_dual()) {
    dual = [sigma, n](const DualVec& q) {
      DualVec out = q;
      DualVec s = sigma.eval_dual(q);
      out.insert(out.end(), s.begin(), s.end());
      return out;
    };
  }
  return SmoothMap(
      fib.base, fib.total,
      [sigma, n](const Vec& q) {
        Vec x(2 * n);
        x.head(n) = q;
        x.tail(n) = sigma.eval_raw(q);
        return x;
      },
      std::move(dual));
}

/// t_sigma([gamma_q]) = [gamma_q] + sigma(q)
inline QuotientPoint quotient_translate(const Section& sigma, const QuotientPoint& pt,
                                        const Lattice& lattice) {
  return QuotientPoint(pt.q, lattice.reduce(Vec(pt.rep + sigma(pt.q))));
}

inline SmoothMap quotient_translate_map(const Section& sigma, const LagrangianFibrationSpec& fib) {
  require_same_chart(sigma.base(), fib.base, "quotient_translate_map");
  const int n = fib.n;
  ChartPtr base = fib.base;
  return SmoothMap(fib.total, fib.total, [sigma, base, n](const Vec& x) {
    Vec y = x;
    y.tail(n) += sigma.eval_raw(base->reduce(x.head(n)));
    return y;
  });
}

/// || sigma^* omega || at base samples; zero iff the section is Lagrangian.
inline CheckReport lagrangian_section_check(const Section& sigma,
                                            const LagrangianFibrationSpec& fib,
                                            const std::vector<Vec>& base_points, double tol) {
  CheckReport rep;
  rep.name = fib.name + ".lagrangian_section";
  rep.anchor = "sigma* omega = 0";
  SmoothMap graph = graph_map(sigma, fib);
  for (std::size_t qi = 0; qi < base_points.size(); ++qi) {
    const Point q(fib.base, base_points[qi]);
    if (distance(fib.base_of(graph(q)), q) > 1e-12)
      throw NotSectionError(fib.name + ": pi o sigma != id");
    rep.record(max_abs(geo::pullback(fib.omega, graph, q)), "q=" + std::to_string(qi));
  }
  return rep.finish(tol);
}

// ---------------------------------------------------------------------------
// The model isomorphism phi_sigma: T*Q/Lambda -> M
// ---------------------------------------------------------------------------

/// phi_sigma([alpha_q]) = mu_q(alpha_q, sigma(q))
inline Point model_iso(const LagrangianFibrationSpec& fib, const Section& sigma,
                       const QuotientPoint& pt, FlowConfig cfg = {}) {
  const Point start(fib.total, graph_map(sigma, fib).eval_raw(pt.q.coords));
  return mu_covector(fib, pt.rep, start, cfg);
}

inline SmoothMap model_iso_map(const LagrangianFibrationSpec& fib,
                               const LagrangianFibrationSpec& reference, const Section& sigma,
                               FlowConfig cfg = {}, double fd_step = 1e-5) {
  const int n = fib.n;
  auto f = fib;
  auto sg = sigma;
  return SmoothMap(
      reference.total, fib.total,
      [f, sg, n, cfg](const Vec& x) {
        const Vec q = x.head(n);
        Vec start(2 * n);
        start.head(n) = q;
        start.tail(n) = sg.eval_raw(q);
        return mu_covector(f, Vec(x.tail(n)), Point(f.total, start), cfg).coords;
      },
      nullptr, nullptr, geo::DiffConfig{geo::DiffStrategy::CentralDiff, fd_step});
}

/// phi_sigma^* omega = omega~ + pi~^*(sigma^* omega), for Lagrangian and
/// non-Lagrangian sections alike.
inline CheckReport verify_model_iso(const LagrangianFibrationSpec& fib,
                                    const LagrangianFibrationSpec& reference, const Section& sigma,
                                    const std::vector<Vec>& base_points,
                                    const std::vector<Vec>& reps, double tol, FlowConfig cfg = {}) {
  CheckReport rep;
  rep.name = fib.name + ".model_iso_pullback";
  rep.anchor = "phi_sigma* omega = omega~ + pi~*(sigma^* omega)";
  SmoothMap iso = model_iso_map(fib, reference, sigma, cfg);
  SmoothMap graph = graph_map(sigma, fib);
  for (std::size_t qi = 0; qi < base_points.size(); ++qi) {
    const Point q(fib.base, base_points[qi]);
    const Mat sigma_omega = geo::pullback(fib.omega, graph, q);
    for (std::size_t ri = 0; ri < reps.size(); ++ri) {
      const Point x = reference.total_point(base_points[qi], reps[ri]);
      const Mat lhs = geo::pullback(fib.omega, iso, x);
      const Mat Jpi = geo::best_jacobian(reference.projection, x);
      const Mat rhs = reference.omega(x) + Jpi.transpose() * sigma_omega * Jpi;
      rep.record(max_abs(Mat(lhs - rhs)), "q=" + std::to_string(qi) + " rep=" + std::to_string(ri));
    }
  }
  return rep.finish(tol);
}

// ---------------------------------------------------------------------------
// Classifying fibered symplectomorphisms of M
// ---------------------------------------------------------------------------
//
// A fibered diffeomorphism is symplectic iff it is F(x) = mu(sigma~(pi x), x)
// for a unique Lagrangian section sigma~ of the reference. recover_section
// inverts the defining relation in explicit fiber coordinates.

struct RecoveredSection {
  Section sigma;
  double constancy_residual = 0.0;
  double lagrangian_residual = 0.0;
  bool certified = false;
  CheckReport report;
};

inline RecoveredSection recover_section(const LagrangianFibrationSpec& fib, const Lattice& lattice,
                                        const SmoothMap& fhat, const std::vector<Vec>& base_points,
                                        double tol, int probes = 3, std::uint64_t seed = 42) {
  if (!fib.coordinate_fibration) throw Error("recover_section: explicit fiber coordinates required");
  require_same_chart(fhat.domain(), fib.total, "recover_section");
  const int n = fib.n;

  auto displacement = [&](const Point& x) {
    const Point y = fhat(x);
    if (distance(fib.base_of(y), fib.base_of(x)) > tol)
      throw NotFiberedError("recover_section: pi o F != pi");
    Vec d = y.coords.tail(n) - x.coords.tail(n);
    for (int i = 0; i < n; ++i)
      if (fib.total->periodic(n + i)) d[i] = min_image(d[i], *fib.total->period(n + i));
    return lattice.reduce(d);
  };

  RecoveredSection out;
  out.report.name = fib.name + ".recover_section";
  out.report.anchor = "F(x) = mu(sigma~(pi x), x), sigma~ Lagrangian";

  Rng rng(seed);
  for (std::size_t qi = 0; qi < base_points.size(); ++qi) {
    Vec ref;
    for (int pr = 0; pr < probes; ++pr) {
      Vec fiber = (pr == 0) ? Vec(Vec::Zero(n)) : Vec(rng.uniform_vec(n, -1.0, 1.0));
      const Vec d = displacement(fib.total_point(base_points[qi], fiber));
      if (pr == 0) {
        ref = d;
      } else {
        out.constancy_residual = std::max(out.constancy_residual, lattice.dist(Vec(d - ref)));
      }
    }
  }
  if (out.constancy_residual > tol)
    throw IllDefinedError("recover_section: fiber probes disagree, spread " +
                          format_g17(out.constancy_residual));

  auto f = fib;
  auto lat = lattice;
  auto fh = fhat;
  out.sigma = Section(fib.base, [f, lat, fh, n](const Vec& q) {
    const Point x = f.total_point(q, Vec::Zero(n));
    const Point y = fh(x);
    Vec d = y.coords.tail(n) - x.coords.tail(n);
    for (int i = 0; i < n; ++i)
      if (f.total->periodic(n + i)) d[i] = min_image(d[i], *f.total->period(n + i));
    return lat.reduce(d);
  });

  const LagrangianFibrationSpec reference = symplectic_reference(fib.base, lattice, fib.name + ".ref");
  CheckReport lag = lagrangian_section_check(out.sigma, reference, base_points, tol);
  out.lagrangian_residual = lag.max_residual;
  out.report.record_part("constancy", out.constancy_residual, "");
  out.report.record_part("lagrangian", out.lagrangian_residual, "");
  out.report.finish(tol);
  out.certified = out.report.pass;
  return out;
}

// ---------------------------------------------------------------------------
// Equivariance of mu under a symplectic lift
// ---------------------------------------------------------------------------

/// mu_{phi_g(q)}((T*phi)_g alpha_q, Phi_g(x)) = Phi_g(mu_q(alpha_q, x)), plus
/// invariance of the isotropy lattice under the cotangent transport.
inline CheckReport equivariance_mu(const LagrangianFibrationSpec& fib, const ActionSpec& lifted,
                                   const ActionSpec& phi, const Lattice& lattice,
                                   const groups::SampleSet& s, double tol, FlowConfig cfg = {}) {
  CheckReport rep;
  rep.name = fib.name + ".mu_equivariance";
  rep.anchor = "mu_{phi_g q}((T*phi)_g a, Phi_g x) = Phi_g(mu_q(a, x))";
  const std::size_t count = std::min(s.base_points.size(), s.fiber_covectors.size());
  for (std::size_t gi = 0; gi < std::min<std::size_t>(s.group_elems.size(), 10); ++gi) {
    const Vec& g = s.group_elems[gi];
    const Vec ginv = phi.group.inverse(g);
    for (std::size_t i = 0; i < count; ++i) {
      const Point x = fib.total_point(s.base_points[i], s.fiber_covectors[(i + 1) % count]);
      const Vec alpha_q = s.fiber_covectors[i];
      const Point q = fib.base_of(x);
      const std::string where = "g=" + std::to_string(gi) + " x=" + std::to_string(i);

      const Mat M = geo::best_jacobian(phi.map_for(ginv), phi(g, q));
      const Vec transported = M.transpose() * alpha_q;

      const Point lhs = mu_covector(fib, transported, Point(fib.total, lifted.apply(g, x.coords)), cfg);
      const Point rhs(fib.total, lifted.apply(g, mu_covector(fib, alpha_q, x, cfg).coords));
      rep.record_part("equivariance", distance(lhs, rhs), where);

      for (int j = 0; j < lattice.k(); ++j)
        rep.record_part("lattice_invariance",
                        lattice.dist(Vec(M.transpose() * lattice.generators().col(j))), where);
    }
  }
  return rep.finish(tol);
}

// ---------------------------------------------------------------------------
// Section-valued cochains
// ---------------------------------------------------------------------------
//
// The degree-n cochains valued in sections of the reference, with the
// coboundary transporting the last slot by the lifted action:
//   (delta Sigma)(g_1..g_{n+1})(q) = (-1)^{n+1} Sigma(g_2..)(q)
//     + sum_i (-1)^{n+i+1} Sigma(.., g_i g_{i+1}, ..)(q)
//     + J_{phi_{g_{n+1}}}(q)^T Sigma(g_1..g_n)(phi_{g_{n+1}}(q)),
// everything reduced modulo the lattice.

class SectionCochain {
 public:
  using EvalFn = std::function<Section(const std::vector<Vec>&)>;

  SectionCochain() = default;
  SectionCochain(int degree, ChartPtr base, EvalFn eval)
      : degree_(degree), base_(std::move(base)), eval_(std::move(eval)) {}

  static SectionCochain from_section(const Section& s) {
    auto sec = s;
    return SectionCochain(0, s.base(), [sec](const std::vector<Vec>&) { return sec; });
  }

  static SectionCochain zero(int degree, ChartPtr base, int fiber_dim) {
    Section z = Section::zero(base, fiber_dim);
    return SectionCochain(degree, std::move(base), [z](const std::vector<Vec>&) { return z; });
  }

  int degree() const { return degree_; }
  const ChartPtr& base() const { return base_; }

  Section operator()(const std::vector<Vec>& gs) const {
    if (static_cast<int>(gs.size()) != degree_)
      throw ArityError("SectionCochain: expected " + std::to_string(degree_) + " group arguments");
    return eval_(gs);
  }

 private:
  int degree_ = 0;
  ChartPtr base_;
  EvalFn eval_;
};

/// The value of (T~*phi)_{g^-1} o s o phi_g at q: transport of the section
/// value over phi_g(q) back to the fiber over q.
inline Vec transport_section_value(const ActionSpec& phi, const Lattice& lattice, const Section& s,
                                   const Vec& g, const Point& q) {
  const Mat J = geo::best_jacobian(phi.map_for(g), q);
  return lattice.reduce(Vec(J.transpose() * s(phi(g, q))));
}

inline Vec section_coboundary(const ActionSpec& phi, const Lattice& lattice,
                              const SectionCochain& sigma, const std::vector<Vec>& gs,
                              const Point& q) {
  const int n = sigma.degree();
  if (static_cast<int>(gs.size()) != n + 1)
    throw ArityError("section_coboundary: need degree+1 group arguments");
  auto sign = [](int k) { return (k % 2 == 0) ? 1.0 : -1.0; };

  Vec acc = sign(n + 1) * sigma(std::vector<Vec>(gs.begin() + 1, gs.end()))(q);
  for (int i = 1; i <= n; ++i) {
    std::vector<Vec> args;
    for (int k = 0; k < i - 1; ++k) args.push_back(gs[static_cast<std::size_t>(k)]);
    args.push_back(phi.group.multiply(gs[static_cast<std::size_t>(i - 1)], gs[static_cast<std::size_t>(i)]));
    for (int k = i + 1; k <= n; ++k) args.push_back(gs[static_cast<std::size_t>(k)]);
    acc += sign(n + i + 1) * sigma(args)(q);
  }
  acc += transport_section_value(phi, lattice, sigma(std::vector<Vec>(gs.begin(), gs.end() - 1)),
                                 gs.back(), q);
  return lattice.reduce(acc);
}

inline SectionCochain coboundary_section_cochain(const ActionSpec& phi, const Lattice& lattice,
                                                 const SectionCochain& sigma) {
  auto p = phi;
  auto lat = lattice;
  auto s = sigma;
  return SectionCochain(sigma.degree() + 1, sigma.base(), [p, lat, s](const std::vector<Vec>& gs) {
    ChartPtr base = s.base();
    return Section(base, [p, lat, s, gs, base](const Vec& q) {
      return section_coboundary(p, lat, s, gs, Point(base, q));
    });
  });
}

inline SectionCochain section_cochain_sum(const SectionCochain& a, const SectionCochain& b,
                                          const Lattice& lattice) {
  if (a.degree() != b.degree()) throw ArityError("section_cochain_sum: degree mismatch");
  auto lat = lattice;
  auto ca = a, cb = b;
  return SectionCochain(a.degree(), a.base(), [ca, cb, lat](const std::vector<Vec>& gs) {
    Section sa = ca(gs), sb = cb(gs);
    ChartPtr base = sa.base();
    return Section(base, [sa, sb, lat](const Vec& q) {
      return lat.reduce(Vec(sa.eval_raw(q) + sb.eval_raw(q)));
    });
  });
}

/// Sigma(gh) = Sigma(h) + (T~*phi)_{h^-1} o Sigma(g) o phi_h, modulo Lambda.
inline CheckReport section_cocycle_check(const ActionSpec& phi, const Lattice& lattice,
                                         const SectionCochain& sigma, const groups::SampleSet& s,
                                         double tol) {
  if (sigma.degree() != 1) throw ArityError("section_cocycle_check: degree-1 cochain required");
  CheckReport rep;
  rep.name = "section_cocycle";
  rep.anchor = "Sigma(gh) = Sigma(h) + (T~*phi)_{h^-1} o Sigma(g) o phi_h  (mod Lambda)";
  for (std::size_t gi = 0; gi + 1 < s.group_elems.size(); gi += 2) {
    const Vec &g = s.group_elems[gi], &h = s.group_elems[gi + 1];
    for (std::size_t qi = 0; qi < s.base_points.size(); ++qi) {
      const Point q(phi.base, s.base_points[qi]);
      const Vec lhs = sigma({phi.group.multiply(g, h)})(q);
      const Vec rhs = sigma({h})(q) + transport_section_value(phi, lattice, sigma({g}), h, q);
      rep.record(lattice.dist(Vec(lhs - rhs)),
                 "g=" + std::to_string(gi) + " h=" + std::to_string(gi + 1) + " q=" + std::to_string(qi));
    }
  }
  return rep.finish(tol);
}

// ---------------------------------------------------------------------------
// Sections from lifts, and lifted actions from sections
// ---------------------------------------------------------------------------

/// Sigma(g)(q) = (T~*phi)_{g^-1}(Phi~_g([0_q]))
inline Vec sigma_from_lift(const LagrangianFibrationSpec& fib, const Lattice& lattice,
                           const ActionSpec& lifted, const ActionSpec& phi, const Vec& g,
                           const Point& q) {
  const int n = fib.n;
  const Point zero = fib.total_point(q.coords, Vec::Zero(n));
  const Vec z = fib.total->reduce(lifted.apply(g, zero.coords));
  // transport the fiber value over phi_g(q) back to q
  const Mat J = geo::best_jacobian(phi.map_for(g), q);
  Vec fiber = z.tail(n);
  return lattice.reduce(Vec(J.transpose() * fiber));
}

inline SectionCochain sigma_cochain_from_lift(const LagrangianFibrationSpec& fib,
                                              const Lattice& lattice, const ActionSpec& lifted,
                                              const ActionSpec& phi) {
  auto f = fib;
  auto lat = lattice;
  auto lift = lifted;
  auto p = phi;
  return SectionCochain(1, fib.base, [f, lat, lift, p](const std::vector<Vec>& gs) {
    const Vec g = gs[0];
    ChartPtr base = f.base;
    return Section(base, [f, lat, lift, p, g, base](const Vec& q) {
      return sigma_from_lift(f, lat, lift, p, g, Point(base, q));
    });
  });
}

/// Companion identity: Phi~_g([gamma_q]) = (T~*phi)_g([gamma_q] + Sigma(g)(q)).
inline CheckReport verify_sigma_decomposition(const LagrangianFibrationSpec& fib,
                                              const Lattice& lattice, const ActionSpec& lifted,
                                              const ActionSpec& phi, const SectionCochain& sigma,
                                              const groups::SampleSet& s, double tol) {
  CheckReport rep;
  rep.name = fib.name + ".sigma_decomposition";
  rep.anchor = "Phi~_g([gamma]) = (T~*phi)_g([gamma]) + (T~*phi)_g(Sigma(g)(q))";
  const int n = fib.n;
  const std::size_t count = std::min(s.base_points.size(), s.fiber_covectors.size());
  for (std::size_t gi = 0; gi < std::min<std::size_t>(s.group_elems.size(), 10); ++gi) {
    const Vec& g = s.group_elems[gi];
    const Vec ginv = phi.group.inverse(g);
    for (std::size_t i = 0; i < count; ++i) {
      const Point q(fib.base, s.base_points[i]);
      const Point x = fib.total_point(s.base_points[i], s.fiber_covectors[i]);
      const Vec lhs = fib.total->reduce(lifted.apply(g, x.coords));

      const Vec translated = x.coords.tail(n) + sigma({g})(q);
      const Mat M = geo::best_jacobian(phi.map_for(ginv), phi(g, q));
      Vec rhs(2 * n);
      rhs.head(n) = phi(g, q).coords;
      rhs.tail(n) = M.transpose() * translated;
      rhs = fib.total->reduce(rhs);

      Vec diff = fib.total->min_image_diff(lhs, rhs);
      const double base_err = max_abs(Vec(diff.head(n)));
      rep.record(std::max(base_err, lattice.dist(Vec(diff.tail(n)))),
                 "g=" + std::to_string(gi) + " x=" + std::to_string(i));
    }
  }
  return rep.finish(tol);
}

/// Phi^Sigma_g(x) = Phi_g(mu(Sigma(g)(pi x), x))
inline Point sigma_lifted_action(const LagrangianFibrationSpec& fib, const ActionSpec& lifted,
                                 const SectionCochain& sigma, const Vec& g, const Point& x,
                                 FlowConfig cfg = {}) {
  const Point q = fib.base_of(x);
  const Point moved = mu_covector(fib, sigma({g})(q), x, cfg);
  return Point(fib.total, lifted.apply(g, moved.coords));
}

inline SmoothMap sigma_lifted_map(const LagrangianFibrationSpec& fib, const ActionSpec& lifted,
                                  const SectionCochain& sigma, const Vec& g, FlowConfig cfg = {},
                                  double fd_step = 1e-5) {
  auto f = fib;
  auto lift = lifted;
  auto sg = sigma;
  return SmoothMap(
      fib.total, fib.total,
      [f, lift, sg, g, cfg](const Vec& x) {
        return sigma_lifted_action(f, lift, sg, g, Point(f.total, x), cfg).coords;
      },
      nullptr, nullptr, geo::DiffConfig{geo::DiffStrategy::CentralDiff, fd_step});
}

struct SigmaLiftVerdict {
  CheckReport action;
  CheckReport symplectic;
};

/// Action axioms of Phi^Sigma (equivalent to the cocycle condition) and its
/// symplecticity (equivalent to Sigma taking Lagrangian values).
inline SigmaLiftVerdict verify_sigma_lifted(const LagrangianFibrationSpec& fib,
                                            const ActionSpec& lifted, const ActionSpec& phi,
                                            const SectionCochain& sigma, const groups::SampleSet& s,
                                            double tol_action, double tol_symplectic,
                                            FlowConfig cfg = {}) {
  SigmaLiftVerdict out;
  out.action.name = fib.name + ".sigma_lift_action_axioms";
  out.action.anchor = "Phi^Sigma_{gh} = Phi^Sigma_g o Phi^Sigma_h";
  out.symplectic.name = fib.name + ".sigma_lift_symplectic";
  out.symplectic.anchor = "(Phi^Sigma_g)* omega = omega";

  const std::size_t count = std::min(s.base_points.size(), s.fiber_covectors.size());
  for (std::size_t gi = 0; gi + 1 < std::min<std::size_t>(s.group_elems.size(), 12); gi += 2) {
    const Vec &g = s.group_elems[gi], &h = s.group_elems[gi + 1];
    for (std::size_t i = 0; i < count; ++i) {
      const Point x = fib.total_point(s.base_points[i], s.fiber_covectors[i]);
      const std::string where = "g=" + std::to_string(gi) + " x=" + std::to_string(i);
      const Point lhs = sigma_lifted_action(fib, lifted, sigma, phi.group.multiply(g, h), x, cfg);
      const Point rhs = sigma_lifted_action(fib, lifted, sigma, g,
                                            sigma_lifted_action(fib, lifted, sigma, h, x, cfg), cfg);
      out.action.record(distance(lhs, rhs), where);
    }
    SmoothMap map_g = sigma_lifted_map(fib, lifted, sigma, g, cfg);
    for (std::size_t i = 0; i < std::min<std::size_t>(count, 4); ++i) {
      const Point x = fib.total_point(s.base_points[i], s.fiber_covectors[i]);
      out.symplectic.record(max_abs(Mat(geo::pullback(fib.omega, map_g, x) - fib.omega(x))),
                            "g=" + std::to_string(gi) + " x=" + std::to_string(i));
    }
  }
  out.action.finish(tol_action);
  out.symplectic.finish(tol_symplectic);
  return out;
}

// ---------------------------------------------------------------------------
// Equivalence of section cocycles
// ---------------------------------------------------------------------------
//
// Sigma^2 = Sigma^1 + delta(sigma~) with sigma~ Lagrangian iff
// F(x) = mu(sigma~(pi x), x) is a fibered symplectomorphism intertwining
// Phi^{Sigma^1} and Phi^{Sigma^2}.

inline CheckReport sigma_equivalence(const LagrangianFibrationSpec& fib, const Lattice& lattice,
                                     const ActionSpec& lifted, const ActionSpec& phi,
                                     const SectionCochain& sigma1, const SectionCochain& sigma2,
                                     const Section& witness, const groups::SampleSet& s, double tol,
                                     FlowConfig cfg = {}) {
  CheckReport rep;
  rep.name = fib.name + ".sigma_equivalence";
  rep.anchor = "Sigma^2(g) - Sigma^1(g) = delta(sigma~)(g);  mu(sigma~, .) intertwines";

  {
    const LagrangianFibrationSpec reference =
        symplectic_reference(fib.base, lattice, fib.name + ".ref");
    CheckReport lag = lagrangian_section_check(witness, reference, s.base_points, std::max(tol, 1e-8));
    if (!lag.pass)
      throw NotLagrangianError("sigma_equivalence: witness section residual " +
                               format_g17(lag.max_residual));
  }

  SectionCochain delta = coboundary_section_cochain(phi, lattice, SectionCochain::from_section(witness));
  auto fhat = [&](const Point& x) {
    return mu_covector(fib, witness(fib.base_of(x)), x, cfg);
  };
  SmoothMap fhat_map(
      fib.total, fib.total,
      [fib, witness, cfg](const Vec& x) {
        Point p(fib.total, x);
        const LagrangianFibrationSpec& f = fib;
        return mu_covector(f, witness(f.base_of(p)), p, cfg).coords;
      },
      nullptr, nullptr, geo::DiffConfig{geo::DiffStrategy::CentralDiff, 1e-5});

  const std::size_t count = std::min(s.base_points.size(), s.fiber_covectors.size());
  for (std::size_t gi = 0; gi < std::min<std::size_t>(s.group_elems.size(), 10); ++gi) {
    const Vec& g = s.group_elems[gi];
    for (std::size_t qi = 0; qi < s.base_points.size(); ++qi) {
      const Point q(fib.base, s.base_points[qi]);
      const Vec lhs = sigma2({g})(q) - sigma1({g})(q);
      const Vec rhs = delta({g})(q);
      rep.record_part("witness_identity", lattice.dist(Vec(lhs - rhs)),
                      "g=" + std::to_string(gi) + " q=" + std::to_string(qi));
    }
    for (std::size_t i = 0; i < std::min<std::size_t>(count, 4); ++i) {
      const Point x = fib.total_point(s.base_points[i], s.fiber_covectors[i]);
      const std::string where = "g=" + std::to_string(gi) + " x=" + std::to_string(i);
      const Point a = fhat(sigma_lifted_action(fib, lifted, sigma1, g, x, cfg));
      const Point b = sigma_lifted_action(fib, lifted, sigma2, g, fhat(x), cfg);
      rep.record_part("intertwine", distance(a, b), where);
      rep.record_part("symplectic",
                      max_abs(Mat(geo::pullback(fib.omega, fhat_map, x) - fib.omega(x))), where);
    }
  }
  return rep.finish(tol);
}

}  // namespace symplift::fib
