#include <catch2/catch_amalgamated.hpp>

#include "symplift/fibration.hpp"

#include <cmath>

using namespace symplift;
using namespace symplift::geo;
using namespace symplift::fib;

namespace {

Vec vec1(double a) { return Vec::Constant(1, a); }
Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}
Vec vec4(double a, double b, double c, double d) {
  Vec v(4);
  v << a, b, c, d;
  return v;
}

std::vector<Point> total_samples(const LagrangianFibrationSpec& fib, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) out.emplace_back(fib.total, rng.uniform_vec(2 * fib.n, -2, 2));
  return out;
}

cotangent::MagneticTerm beta_dxdy(const ChartPtr& base, double B = 1.0) {
  Mat m(2, 2);
  m << 0, B, -B, 0;
  return cotangent::MagneticTerm(TwoForm::constant(base, m), {vec2(0, 0), vec2(1, -1)});
}

}  // namespace

TEST_CASE("fibers are Lagrangian for the built-in fibrations") {
  for (const auto& fib : {cotangent_r2_fibration(), cylinder_fibration(), torus4_fibration(),
                          warped_cylinder_fibration()}) {
    CheckReport rep = lagrangian_check(fib, total_samples(fib, 20, 11), 1e-12);
    INFO(fib.name);
    REQUIRE(rep.pass);
  }

  auto r2 = make_chart(Chart::euclidean(2));
  cotangent::CotangentChart ct(r2);
  LagrangianFibrationSpec mag = magnetic_fibration(ct, beta_dxdy(r2));
  CHECK(lagrangian_check(mag, total_samples(mag, 20, 13), 1e-12).pass);
}

TEST_CASE("vertical fields are vertical and reduce to the vertical lift on T*Q") {
  auto fib = cotangent_r2_fibration();
  cotangent::CotangentChart ct(fib.base);
  OneForm lambda(
      fib.base, [](const Vec& q) { return vec2(q[1], std::sin(q[0])); },
      [](const DualVec& q) { return DualVec{q[1], sin(q[0])}; });

  CHECK(max_abs(vertical_field(fib, OneForm::zero(fib.base), Point(fib.total, vec4(1, 2, 3, 4)))) == 0.0);

  for (const Point& x : total_samples(fib, 30, 17)) {
    const Vec X = vertical_field(fib, lambda, x);
    REQUIRE(max_abs(Vec(geo::best_jacobian(fib.projection, x) * X)) <= 1e-9);
    const Vec lift = cotangent::vertical_lift(ct, lambda, cotangent::from_total(ct, x));
    REQUIRE(max_abs(Vec(X - lift)) <= 1e-10);
  }
}

TEST_CASE("cylinder vertical field of c dq points along the fiber with magnitude c") {
  auto fib = cylinder_fibration();
  const double c = -1.3;
  Vec X = vertical_field(fib, OneForm::constant(fib.base, vec1(c)), Point(fib.total, vec2(0.2, 0.7)));
  CHECK(X[0] == 0.0);
  CHECK(X[1] == Catch::Approx(c));
}

TEST_CASE("flows: zero time, translation oracle, loop closure") {
  auto fib = cotangent_r2_fibration();
  Rng rng(19);
  for (int i = 0; i < 10; ++i) {
    Point x(fib.total, rng.uniform_vec(4, -2, 2));
    const Vec a = rng.uniform_vec(2, -2, 2);

    CHECK(distance(flow(fib, OneForm::constant(fib.base, a), x, 0.0), x) == 0.0);

    // time-1 flow along a constant form is the fiber translation
    Point y = mu_covector(fib, a, x, {200});
    Vec expected = x.coords;
    expected.tail(2) += a;
    REQUIRE(fib.total->distance(y.coords, expected) <= 1e-10);
  }

  // fiber circle of period 1 closes after flowing by dq
  auto cyl = cylinder_fibration();
  Point x0(cyl.total, vec2(0.25, 0.6));
  Point back = mu_covector(cyl, vec1(1.0), x0, {200});
  CHECK(distance(back, x0) <= 1e-10);
}

TEST_CASE("incomplete fibrations refuse to flow") {
  auto fib = cotangent_r1_fibration();
  fib.complete = false;
  CHECK_THROWS_AS(mu_covector(fib, vec1(1.0), Point(fib.total, vec2(0, 0))), Error);
}

TEST_CASE("flow pullback defect identity") {
  auto fib = cotangent_r2_fibration();
  auto samples = total_samples(fib, 6, 23);

  // closed form: the flow is symplectic
  OneForm closed = OneForm::constant(fib.base, vec2(0.8, -0.3));
  CheckReport rep_closed = verify_flow_pullback(fib, closed, 1.0, samples, 1e-4, {50});
  CHECK(rep_closed.pass);
  for (auto& [k, v] : rep_closed.breakdown)
    if (k == "defect_magnitude") CHECK(v <= 1e-4);

  // alpha = y dx: defect is pi*(d alpha) with d(y dx) = -dx^dy
  OneForm ydx(
      fib.base, [](const Vec& q) { return vec2(q[1], 0.0); },
      [](const DualVec& q) { return DualVec{q[1], Dual(0.0)}; });
  CheckReport rep = verify_flow_pullback(fib, ydx, 1.0, samples, 1e-4, {50});
  CHECK(rep.pass);
  double defect = 0.0;
  for (auto& [k, v] : rep.breakdown)
    if (k == "defect_magnitude") defect = v;
  CHECK(defect == Catch::Approx(1.0).margin(1e-4));

  // t = 0: the flow is the identity
  CheckReport rep0 = verify_flow_pullback(fib, ydx, 0.0, samples, 1e-9, {1});
  CHECK(rep0.pass);
}

TEST_CASE("flow pullback identity holds at several times on the warped cylinder") {
  auto fib = warped_cylinder_fibration();
  std::vector<Point> samples;
  Rng rng(29);
  for (int i = 0; i < 4; ++i) samples.emplace_back(fib.total, rng.uniform_vec(2, 0, 1));
  OneForm alpha(
      fib.base, [](const Vec& q) { return vec1(0.4 + 0.2 * std::sin(2 * M_PI * q[0])); },
      [](const DualVec& q) { return DualVec{Dual(0.4) + Dual(0.2) * sin(Dual(2 * M_PI) * q[0])}; });
  for (double t : {0.0, 0.5, 1.0}) {
    CheckReport rep = verify_flow_pullback(fib, alpha, t, samples, 1e-4, {200});
    INFO("t = " << t);
    REQUIRE(rep.pass);
  }
}

TEST_CASE("mu properties hold on the canonical and cylinder fibrations") {
  auto heis = groups::translation_action(make_chart(Chart::euclidean(2)));
  {
    auto fib = cotangent_r2_fibration();
    groups::SampleSet s = groups::make_samples(heis.group, *fib.base, 2, {1, 10, 10}, 42);
    CheckReport rep = mu_properties(fib, s, 1e-9, {60});
    INFO(rep.argmax);
    REQUIRE(rep.pass);
  }
  {
    auto fib = cylinder_fibration();
    auto rot = groups::rotation_s1_action();
    groups::SampleSet s = groups::make_samples(rot.group, *fib.base, 1, {1, 8, 8}, 42);
    CheckReport rep = mu_properties(fib, s, 1e-8, {200});
    INFO(rep.argmax);
    REQUIRE(rep.pass);
  }
}

TEST_CASE("RK4 order: halving the step count scales the error by 2^4") {
  auto fib = warped_cylinder_fibration();
  OneForm alpha = OneForm::constant(fib.base, vec1(1.3));
  FlowOrderResult r = flow_order_check(fib, alpha, Point(fib.total, vec2(0.2, 0.35)), 1.0, 20, 400);
  CHECK(r.err_coarse > 1e-12);  // the warped field makes the error visible
  CHECK(r.ratio >= 8.0);
  CHECK(r.ratio <= 32.0);
}

TEST_CASE("lattice reduction and distances") {
  Lattice z_dq(1, Mat::Constant(1, 1, 1.0));
  CHECK(z_dq.reduce(vec1(1.7))[0] == Catch::Approx(0.7));
  CHECK(z_dq.reduce(vec1(-0.3))[0] == Catch::Approx(0.7));
  CHECK(z_dq.dist(vec1(2.0)) <= 1e-12);
  CHECK(z_dq.dist(vec1(2.4)) == Catch::Approx(0.4));

  // idempotence, including at the seam
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    Vec p = vec1(rng.uniform(-5, 5));
    Vec once = z_dq.reduce(p);
    REQUIRE(max_abs(Vec(z_dq.reduce(once) - once)) == 0.0);
    REQUIRE(once[0] >= 0.0);
    REQUIRE(once[0] < 1.0);
  }
  Vec tied = z_dq.reduce(vec1(1.0 - 1e-13));
  CHECK(tied[0] == Catch::Approx(0.0).margin(1e-12));

  CHECK(Lattice::trivial(2).dist(vec2(0.3, -0.4)) == Catch::Approx(0.4));
  CHECK_THROWS_AS(Lattice(2, (Mat(2, 2) << 1, 2, 1, 2).finished()), Error);
}

TEST_CASE("isotropy lattice of T*R^1 is trivial") {
  auto fib = cotangent_r1_fibration();
  IsotropyResult res = isotropy_lattice(fib, Point(fib.total, vec2(0.3, -0.8)));
  CHECK(res.lattice.k() == 0);
  CHECK(res.raw_hits == 0);
}

TEST_CASE("isotropy lattice of the cylinder is Z dq") {
  auto fib = cylinder_fibration();
  IsotropyResult res = isotropy_lattice(fib, Point(fib.total, vec2(0.2, 0.5)));
  REQUIRE(res.lattice.k() == 1);
  CHECK(std::abs(res.lattice.generators()(0, 0) - 1.0) <= 1e-6);
  CHECK(res.probe_residual <= 1e-6);
  CHECK(res.combo_residual <= 1e-6);
}

TEST_CASE("isotropy lattice of the 4-torus model is {dq1, dq2}") {
  auto fib = torus4_fibration();
  IsotropyResult res = isotropy_lattice(fib, Point(fib.total, vec4(0.1, 0.6, 0.3, 0.8)));
  REQUIRE(res.lattice.k() == 2);
  Mat expected = Mat::Identity(2, 2);
  CHECK(max_abs(Mat(res.lattice.generators() - expected)) <= 1e-6);
  CHECK(res.probe_residual <= 1e-6);
}

TEST_CASE("lagrangian_check rejects rank-deficient projections") {
  auto fib = cotangent_r1_fibration();
  fib.projection = SmoothMap(fib.total, fib.base, [](const Vec&) { return Vec(Vec::Zero(1)); });
  std::vector<Point> pts = {Point(fib.total, vec2(0.1, 0.2))};
  CHECK_THROWS_AS(lagrangian_check(fib, pts, 1e-9), RankError);
}

TEST_CASE("distinct reduced translations move fiber points apart") {
  // sampled stand-in for freeness of the reduced action
  auto fib = cylinder_fibration();
  Rng rng(83);
  for (int i = 0; i < 30; ++i) {
    const double c1 = rng.uniform(0.0, 1.0), c2 = rng.uniform(0.0, 1.0);
    const Point x(fib.total, vec2(rng.uniform(0, 1), rng.uniform(0, 1)));
    const double gap = distance(mu_covector(fib, vec1(c1), x, {50}), mu_covector(fib, vec1(c2), x, {50}));
    const double expected = std::abs(min_image(c1 - c2, 1.0));
    REQUIRE(std::abs(gap - expected) <= 1e-10);
  }
}

TEST_CASE("the magnetic fibration has trivial isotropy") {
  auto r2 = make_chart(Chart::euclidean(2));
  cotangent::CotangentChart ct(r2);
  LagrangianFibrationSpec mag = magnetic_fibration(ct, beta_dxdy(r2));
  IsotropyResult res = isotropy_lattice(mag, Point(mag.total, vec4(0.4, -0.2, 1.0, 0.5)));
  CHECK(res.lattice.k() == 0);
}
