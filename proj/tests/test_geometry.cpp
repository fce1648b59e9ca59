#include <catch2/catch_amalgamated.hpp>

#include "symplift/calculus.hpp"
#include "symplift/group.hpp"

#include <cmath>

using namespace symplift;
using namespace symplift::geo;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}
Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("charts reduce periodic coordinates into [0, L)") {
  Chart circle = Chart::torus(1, 1.0);
  CHECK(circle.reduce(Vec::Constant(1, 1.7))[0] == Catch::Approx(0.7));
  CHECK(circle.reduce(Vec::Constant(1, -0.25))[0] == Catch::Approx(0.75));
  CHECK(circle.reduce(Vec::Constant(1, 3.0))[0] == 0.0);

  // minimal-image distance wraps the seam
  CHECK(circle.distance(Vec::Constant(1, 0.95), Vec::Constant(1, 0.05)) == Catch::Approx(0.1));
}

TEST_CASE("chart invariants are enforced") {
  CHECK_THROWS_AS(Chart::euclidean(0), Error);
  CHECK_THROWS_AS(Chart(1, {std::optional<double>(-2.0)}), Error);
}

TEST_CASE("jacobian of the identity map is the identity") {
  auto r3 = make_chart(Chart::euclidean(3));
  SmoothMap id = identity_map(r3);
  for (auto strategy : {DiffStrategy::Analytic, DiffStrategy::ForwardAD, DiffStrategy::CentralDiff}) {
    id.set_diff_config({strategy, 1e-5});
    Mat J = jacobian(id, Point(r3, vec3(0.3, -1.2, 2.0)));
    CHECK(max_abs(Mat(J - Mat::Identity(3, 3))) < 1e-9);
  }
}

TEST_CASE("jacobian of a Heisenberg left translation") {
  // phi_{(1,0,0)}(x,y,t) = (x+1, y, t+y)
  auto phi = groups::heisenberg_action();
  SmoothMap m = phi.map_for(vec3(1, 0, 0));
  Mat expected(3, 3);
  expected << 1, 0, 0, 0, 1, 0, 0, 1, 1;

  m.set_diff_config({DiffStrategy::CentralDiff, 1e-5});
  CHECK(max_abs(Mat(jacobian(m, Point(phi.base, vec3(0, 0, 0))) - expected)) < 1e-9);
  m.set_diff_config({DiffStrategy::ForwardAD, 1e-5});
  CHECK(max_abs(Mat(jacobian(m, Point(phi.base, vec3(0, 0, 0))) - expected)) == 0.0);
}

TEST_CASE("analytic and central-difference jacobians agree on (x,y) -> (x y, x^2)") {
  auto r2 = make_chart(Chart::euclidean(2));
  SmoothMap f(
      r2, r2, [](const Vec& v) { return vec2(v[0] * v[1], v[0] * v[0]); }, nullptr,
      [](const Vec& v) {
        Mat J(2, 2);
        J << v[1], v[0], 2 * v[0], 0;
        return J;
      },
      DiffConfig{DiffStrategy::Analytic, 1e-5});
  Point x(r2, vec2(2, 3));
  Mat Ja = jacobian(f, x);
  f.set_diff_config({DiffStrategy::CentralDiff, 1e-5});
  Mat Jd = jacobian(f, x);
  CHECK(max_abs(Mat(Ja - Jd)) < 1e-6);
}

TEST_CASE("jacobian consistency for built-in maps at 50 seeded points") {
  auto actions = {groups::heisenberg_action(), groups::translation_action(make_chart(Chart::euclidean(2)))};
  for (const auto& phi : actions) {
    Rng rng(42);
    for (int i = 0; i < 50; ++i) {
      Vec g = phi.group.sample(rng);
      Vec q = rng.uniform_vec(phi.base->dim(), -2, 2);
      SmoothMap m = phi.map_for(g);
      m.set_diff_config({DiffStrategy::Analytic, 1e-5});
      Mat Ja = jacobian(m, q);
      m.set_diff_config({DiffStrategy::CentralDiff, 1e-5});
      Mat Jd = jacobian(m, q);
      REQUIRE(max_abs(Mat(Ja - Jd)) <= 1e-5);
    }
  }
}

TEST_CASE("jacobian differences take minimal representatives on periodic outputs") {
  auto s1 = make_chart(Chart::torus(1, 1.0));
  // translation by 0.5 on the circle; naive differencing across the seam
  // would produce O(1/h) garbage
  SmoothMap f(s1, s1, [](const Vec& v) { return Vec(v.array() + 0.5); }, nullptr, nullptr,
              DiffConfig{DiffStrategy::CentralDiff, 1e-5});
  Mat J = jacobian(f, Point(s1, Vec::Constant(1, 0.5 - 1e-6)));
  CHECK(J(0, 0) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("non-finite evaluations raise a numeric-domain error") {
  auto r1 = make_chart(Chart::euclidean(1));
  SmoothMap f(r1, r1, [](const Vec& v) { return Vec(v.array().sqrt()); });
  CHECK_THROWS_AS(jacobian(f, Point(r1, Vec::Constant(1, 0.0))), NumericDomainError);
}

TEST_CASE("pullback by the identity returns the form's value") {
  auto r2 = make_chart(Chart::euclidean(2));
  SmoothMap id = identity_map(r2);
  OneForm alpha(r2, [](const Vec& v) { return vec2(v[1], v[0] * v[0]); });
  Point x(r2, vec2(1.5, -0.5));
  CHECK(max_abs(Vec(pullback(alpha, id, x) - alpha(x))) < 1e-15);

  Mat w(2, 2);
  w << 0, 1, -1, 0;
  TwoForm omega = TwoForm::constant(r2, w);
  CHECK(max_abs(Mat(pullback(omega, id, x) - w)) < 1e-15);
}

TEST_CASE("pullback of the Heisenberg cochain value reproduces the composition rule") {
  // phi*_{g1}(x0^2 dy + 2 x0 dt) = (x0^2 + 2 x0 x1) dy + 2 x0 dt
  auto phi = groups::heisenberg_action();
  const double x0 = 1.0, x1 = 2.0;
  OneForm a = OneForm::constant(phi.base, vec3(0, x0 * x0, 2 * x0));
  SmoothMap m = phi.map_for(vec3(x1, 0.4, -0.3));
  Rng rng(7);
  for (int i = 0; i < 5; ++i) {
    Vec q = rng.uniform_vec(3, -2, 2);
    Vec pb = pullback(a, m, Point(phi.base, q));
    CHECK(pb[0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(pb[1] == Catch::Approx(x0 * x0 + 2 * x0 * x1));  // = 5
    CHECK(pb[2] == Catch::Approx(2 * x0));                 // = 2
  }
}

TEST_CASE("translation pullback of a constant two-form is unchanged") {
  auto r2 = make_chart(Chart::euclidean(2));
  auto tr = groups::translation_action(r2);
  Mat w(2, 2);
  w << 0, 1, -1, 0;
  TwoForm omega = TwoForm::constant(r2, w);
  Mat pb = pullback(omega, tr.map_for(vec2(0.7, -1.1)), Point(r2, vec2(0.2, 0.9)));
  CHECK(max_abs(Mat(pb - w)) == 0.0);
}

TEST_CASE("pullback functoriality (F o G)* = G* F*") {
  auto phi = groups::heisenberg_action();
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    Vec g = phi.group.sample(rng), h = phi.group.sample(rng);
    Vec q = rng.uniform_vec(3, -2, 2);
    OneForm alpha(
        phi.base, [](const Vec& v) { return vec3(v[1], v[0] * v[2], v[0]); },
        [](const DualVec& v) { return DualVec{v[1], v[0] * v[2], v[0]}; });
    SmoothMap F = phi.map_for(g), G = phi.map_for(h);
    SmoothMap FG = compose(F, G);
    Point x(phi.base, q);
    Vec lhs = pullback(alpha, FG, x);
    // G*(F* alpha): pull back by F first, evaluated along G
    OneForm f_alpha(phi.base, [alpha, F](const Vec& v) {
      return pullback(alpha, F, Point(F.domain(), v));
    });
    Vec rhs = pullback(f_alpha, G, x);
    REQUIRE(max_abs(Vec(lhs - rhs)) < 1e-9);

    // the two-form version
    Mat w(3, 3);
    w << 0, 1, 0, -1, 0, 2, 0, -2, 0;
    TwoForm omega = TwoForm::constant(phi.base, w);
    Mat lhs2 = pullback(omega, FG, x);
    TwoForm f_omega(phi.base, [omega, F](const Vec& v) {
      return pullback(omega, F, Point(F.domain(), v));
    });
    Mat rhs2 = pullback(f_omega, G, x);
    REQUIRE(max_abs(Mat(lhs2 - rhs2)) < 1e-9);
  }
}

TEST_CASE("exterior derivative of x dy") {
  auto r2 = make_chart(Chart::euclidean(2));
  OneForm alpha(
      r2, [](const Vec& v) { return vec2(0.0, v[0]); },
      [](const DualVec& v) { return DualVec{Dual(0.0), v[0]}; });
  Mat d = exterior_derivative(alpha, Point(r2, vec2(0.3, 1.7)));
  CHECK(d(0, 1) == Catch::Approx(1.0));
  CHECK(d(1, 0) == Catch::Approx(-1.0));
  CHECK(d(0, 0) == 0.0);
  CHECK(d(1, 1) == 0.0);
}

TEST_CASE("constant-coefficient forms have exactly zero exterior derivative") {
  auto r3 = make_chart(Chart::euclidean(3));
  const double x0 = 1.3;
  OneForm a = OneForm::constant(r3, vec3(0, x0 * x0, 2 * x0));  // x0^2 dy + 2 x0 dt
  CHECK(max_abs(exterior_derivative(a, Point(r3, vec3(1, 2, 3)))) == 0.0);
  OneForm dy = OneForm::constant(r3, vec3(0, 1, 0));
  CHECK(max_abs(exterior_derivative(dy, Point(r3, vec3(-1, 0, 5)))) == 0.0);
}

TEST_CASE("d o d vanishes numerically on smooth scalars") {
  auto r2 = make_chart(Chart::euclidean(2));
  auto f = [](const Vec& v) { return std::sin(v[0]) * std::cos(v[1]) + v[0] * v[1] * v[1]; };
  const double h = 1e-4;
  OneForm df(
      r2,
      [f, h](const Vec& v) {
        Vec g(2);
        for (int i = 0; i < 2; ++i) {
          Vec vp = v, vm = v;
          vp[i] += h;
          vm[i] -= h;
          g[i] = (f(vp) - f(vm)) / (2 * h);
        }
        return g;
      },
      nullptr, false, DiffConfig{DiffStrategy::CentralDiff, h});
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    Point x(r2, rng.uniform_vec(2, -2, 2));
    REQUIRE(max_abs(exterior_derivative(df, x)) <= 1e-4);
  }
}

TEST_CASE("interior product: base cases and antisymmetry") {
  Mat w(2, 2);
  w << 0, 1, -1, 0;

  CHECK(max_abs(interior_product(Vec::Zero(2), w)) == 0.0);

  // contraction orientation: i_v Omega = Omega v
  Vec iv = interior_product(vec2(1, 0), w);
  CHECK(iv[0] == 0.0);
  CHECK(iv[1] == -1.0);

  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    Vec v = rng.uniform_vec(2, -2, 2);
    REQUIRE(std::abs(interior_product(v, w).dot(v)) < 1e-14);
  }
}

TEST_CASE("solve_musical round-trips and rejects degenerate forms") {
  Mat w(2, 2);
  w << 0, 1, -1, 0;

  CHECK(max_abs(solve_musical(w, Vec::Zero(2))) == 0.0);

  Vec xi = vec2(1, 0);
  Vec v = solve_musical(w, xi);
  CHECK(max_abs(Vec(interior_product(v, w) - xi)) < 1e-14);

  CHECK_THROWS_AS(solve_musical(Mat::Zero(2, 2), xi), SingularFormError);

  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    Vec x = rng.uniform_vec(2, -2, 2);
    Vec u = solve_musical(w, x);
    REQUIRE(max_abs(Vec(interior_product(u, w) - x)) <= 1e-10 * std::max(1.0, max_abs(x)));
  }
}

TEST_CASE("two-form antisymmetry is asserted, not repaired") {
  auto r2 = make_chart(Chart::euclidean(2));
  TwoForm bad(r2, [](const Vec&) {
    Mat m(2, 2);
    m << 0, 1, -0.5, 0;
    return m;
  });
  CHECK_THROWS_AS(bad(Point(r2, vec2(0, 0))), NumericDomainError);
}
