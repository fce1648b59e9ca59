#pragma once

#include "symplift/calculus.hpp"
#include "symplift/report.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace symplift::groups {

using geo::Chart;
using geo::ChartPtr;
using geo::DiffConfig;
using geo::Point;
using geo::SmoothMap;

// ---------------------------------------------------------------------------
// Coordinate Lie groups
// ---------------------------------------------------------------------------
//
// Groups are global-chart coordinate groups: elements are vectors, the law and
// inverse are plain callables. No Lie-algebra layer; every group used here is
// R^m with a polynomial law.

struct GroupSpec {
  std::string name;
  int dim = 0;
  std::function<Vec(const Vec&, const Vec&)> multiply;
  std::function<Vec(const Vec&)> inverse;
  Vec identity;

  // samplers default to uniform on [-2, 2]^m
  double sample_lo = -2.0, sample_hi = 2.0;
  Vec sample(Rng& rng) const { return rng.uniform_vec(dim, sample_lo, sample_hi); }
};

// ---------------------------------------------------------------------------
// Left actions on a base chart
// ---------------------------------------------------------------------------
//
// apply(g, q) is smooth in q for each fixed g; the optional dual evaluator and
// analytic Jacobian make the AD / analytic differentiation paths available.
// jacobian_constant_in_q marks actions whose q-Jacobian does not depend on q
// (true for every built-in): for those, second-order quantities such as the
// Jacobian of a cotangent lift stay exact under first-order AD.

struct ActionSpec {
  std::string name;
  GroupSpec group;
  ChartPtr base;
  std::function<Vec(const Vec& g, const Vec& q)> apply;
  std::function<DualVec(const Vec& g, const DualVec& q)> apply_dual;  // optional
  std::function<Mat(const Vec& g, const Vec& q)> jacobian_q;          // optional analytic
  bool jacobian_constant_in_q = false;
  DiffConfig diff;

  Point operator()(const Vec& g, const Point& q) const {
    return Point(base, apply(g, q.coords));
  }

  /// The diffeomorphism phi_g as a SmoothMap on the base chart.
  SmoothMap map_for(const Vec& g) const {
    SmoothMap::DualFn dual;
    if (apply_dual) {
      auto ad = apply_dual;
      dual = [ad, g](const DualVec& q) { return ad(g, q); };
    }
    SmoothMap::JacFn jac;
    if (jacobian_q) {
      auto aj = jacobian_q;
      jac = [aj, g](const Vec& q) { return aj(g, q); };
    }
    auto ap = apply;
    return SmoothMap(base, base, [ap, g](const Vec& q) { return ap(g, q); }, std::move(dual),
                     std::move(jac), diff);
  }

  void set_diff_config(DiffConfig c) { diff = c; }
};

// ---------------------------------------------------------------------------
// Deterministic sample sets
// ---------------------------------------------------------------------------
//
// Materialized up front from the seed so that any consumer, in any order,
// sees identical data.

struct SampleSet {
  std::uint64_t seed = 42;
  std::vector<Vec> group_elems;
  std::vector<Vec> base_points;
  std::vector<Vec> fiber_covectors;
};

struct SampleCounts {
  int group = 50;
  int base = 50;
  int fiber = 50;
};

inline SampleSet make_samples(const GroupSpec& group, const Chart& base, int fiber_dim,
                              SampleCounts counts, std::uint64_t seed, double lo = -2.0,
                              double hi = 2.0) {
  SampleSet s;
  s.seed = seed;
  Rng rng(seed);
  for (int i = 0; i < counts.group; ++i) s.group_elems.push_back(group.sample(rng));
  for (int i = 0; i < counts.base; ++i) {
    Vec q(base.dim());
    for (int d = 0; d < base.dim(); ++d)
      q[d] = base.periodic(d) ? rng.uniform(0.0, *base.period(d)) : rng.uniform(lo, hi);
    s.base_points.push_back(std::move(q));
  }
  for (int i = 0; i < counts.fiber; ++i) s.fiber_covectors.push_back(rng.uniform_vec(fiber_dim, lo, hi));
  return s;
}

// ---------------------------------------------------------------------------
// Built-in groups and actions
// ---------------------------------------------------------------------------

/// Heisenberg group on R^3:  (x,y,t).(x',y',t') = (x+x', y+y', t+t'+x y').
inline GroupSpec heisenberg_group() {
  GroupSpec g;
  g.name = "heisenberg";
  g.dim = 3;
  g.identity = Vec::Zero(3);
  g.multiply = [](const Vec& a, const Vec& b) {
    Vec r(3);
    r << a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1];
    return r;
  };
  g.inverse = [](const Vec& a) {
    Vec r(3);
    r << -a[0], -a[1], -a[2] + a[0] * a[1];
    return r;
  };
  return g;
}

/// The Heisenberg group acting on itself by left translation:
/// phi_{(x0,y0,t0)}(x,y,t) = (x+x0, y+y0, t+t0+x0 y).
inline ActionSpec heisenberg_action() {
  ActionSpec a;
  a.name = "heisenberg";
  a.group = heisenberg_group();
  a.base = geo::make_chart(Chart::euclidean(3, "R3"));
  a.apply = [](const Vec& g, const Vec& q) {
    Vec r(3);
    r << q[0] + g[0], q[1] + g[1], q[2] + g[2] + g[0] * q[1];
    return r;
  };
  a.apply_dual = [](const Vec& g, const DualVec& q) {
    DualVec r(3);
    r[0] = q[0] + Dual(g[0]);
    r[1] = q[1] + Dual(g[1]);
    r[2] = q[2] + Dual(g[2]) + Dual(g[0]) * q[1];
    return r;
  };
  a.jacobian_q = [](const Vec& g, const Vec&) {
    Mat J = Mat::Identity(3, 3);
    J(2, 1) = g[0];
    return J;
  };
  a.jacobian_constant_in_q = true;
  return a;
}

/// G = (R^n, +) or a torus acting on a matching chart by translation.
inline ActionSpec translation_action(ChartPtr chart, std::string name = "translation") {
  ActionSpec a;
  a.name = std::move(name);
  const int n = chart->dim();
  a.group.name = a.name + "_group";
  a.group.dim = n;
  a.group.identity = Vec::Zero(n);
  a.group.multiply = [](const Vec& x, const Vec& y) { return Vec(x + y); };
  a.group.inverse = [](const Vec& x) { return Vec(-x); };
  a.base = std::move(chart);
  a.apply = [](const Vec& g, const Vec& q) { return Vec(q + g); };
  a.apply_dual = [](const Vec& g, const DualVec& q) {
    DualVec r(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) r[i] = q[i] + Dual(g[static_cast<int>(i)]);
    return r;
  };
  a.jacobian_q = [n](const Vec&, const Vec&) { return Mat(Mat::Identity(n, n)); };
  a.jacobian_constant_in_q = true;
  return a;
}

/// Rotations of the unit-period circle; the group is (R, +) acting mod 1.
inline ActionSpec rotation_s1_action() {
  return translation_action(geo::make_chart(Chart::torus(1, 1.0, "S1")), "rotation_s1");
}

/// Linear action scaling the first coordinate: phi_s(x, ...) = (e^s x, ...).
/// Used as the non-invariant counterexample in the magnetic scenario.
inline ActionSpec scaling_x_action(ChartPtr chart) {
  ActionSpec a;
  a.name = "scaling_x";
  const int n = chart->dim();
  a.group.name = "scaling_group";
  a.group.dim = 1;
  a.group.identity = Vec::Zero(1);
  a.group.multiply = [](const Vec& x, const Vec& y) { return Vec(x + y); };
  a.group.inverse = [](const Vec& x) { return Vec(-x); };
  a.group.sample_lo = -1.0;  // keep e^s conditioning mild
  a.group.sample_hi = 1.0;
  a.base = std::move(chart);
  a.apply = [](const Vec& g, const Vec& q) {
    Vec r = q;
    r[0] *= std::exp(g[0]);
    return r;
  };
  a.apply_dual = [](const Vec& g, const DualVec& q) {
    DualVec r = q;
    r[0] = Dual(std::exp(g[0])) * q[0];
    return r;
  };
  a.jacobian_q = [n](const Vec& g, const Vec&) {
    Mat J = Mat::Identity(n, n);
    J(0, 0) = std::exp(g[0]);
    return J;
  };
  a.jacobian_constant_in_q = true;
  return a;
}

// ---------------------------------------------------------------------------
// Axiom verification
// ---------------------------------------------------------------------------

inline CheckReport verify_group(const GroupSpec& g, const SampleSet& s, double tol) {
  CheckReport rep;
  rep.name = g.name + ".group_axioms";
  rep.anchor = "g e = e g = g, g g^-1 = e, (g h) k = g (h k)";
  const auto& el = s.group_elems;
  for (std::size_t i = 0; i < el.size(); ++i) {
    const Vec& x = el[i];
    const std::string where = "g=" + std::to_string(i);
    rep.record_part("left_identity", max_abs(Vec(g.multiply(g.identity, x) - x)), where);
    rep.record_part("right_identity", max_abs(Vec(g.multiply(x, g.identity) - x)), where);
    rep.record_part("inverse", max_abs(Vec(g.multiply(x, g.inverse(x)) - g.identity)), where);
    if (i + 2 < el.size()) {
      const Vec &y = el[i + 1], &z = el[i + 2];
      rep.record_part("associativity",
                      max_abs(Vec(g.multiply(g.multiply(x, y), z) - g.multiply(x, g.multiply(y, z)))),
                      where);
    }
  }
  return rep.finish(tol);
}

/// phi_e = id and phi_{gh} = phi_g o phi_h over the sample set.
inline CheckReport verify_action(const ActionSpec& phi, const SampleSet& s, double tol) {
  CheckReport rep;
  rep.name = phi.name + ".action_axioms";
  rep.anchor = "phi_e = id, phi_{gh} = phi_g o phi_h";
  const Chart& chart = *phi.base;
  for (std::size_t qi = 0; qi < s.base_points.size(); ++qi) {
    const Vec& q = s.base_points[qi];
    rep.record_part("identity", chart.distance(chart.reduce(phi.apply(phi.group.identity, q)), chart.reduce(q)),
                    "q=" + std::to_string(qi));
    for (std::size_t gi = 0; gi + 1 < s.group_elems.size() && gi < 8; ++gi) {
      const Vec &g = s.group_elems[gi], &h = s.group_elems[gi + 1];
      const Vec lhs = chart.reduce(phi.apply(phi.group.multiply(g, h), q));
      const Vec rhs = chart.reduce(phi.apply(g, chart.reduce(phi.apply(h, q))));
      rep.record_part("composition", chart.distance(lhs, rhs),
                      "g=" + std::to_string(gi) + " q=" + std::to_string(qi));
    }
  }
  return rep.finish(tol);
}

}  // namespace symplift::groups
