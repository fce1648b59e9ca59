#pragma once

#include "symplift/core.hpp"

#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace symplift::geo {

// ---------------------------------------------------------------------------
// Coordinate charts
// ---------------------------------------------------------------------------
//
// A single global chart, each coordinate either a full line or a circle of
// given period. Points on periodic coordinates are stored reduced into [0, L);
// all point comparisons go through minimal-image differences.

class Chart {
 public:
  Chart(int dim, std::vector<std::optional<double>> periods, std::string name = "")
      : dim_(dim), periods_(std::move(periods)), name_(std::move(name)) {
    if (dim_ < 1) throw Error("Chart: dim must be >= 1");
    if (periods_.size() != static_cast<std::size_t>(dim_))
      throw Error("Chart: one period entry per coordinate required");
    for (const auto& p : periods_)
      if (p && *p <= 0.0) throw Error("Chart: declared period must be > 0");
  }

  static Chart euclidean(int dim, std::string name = "") {
    return Chart(dim, std::vector<std::optional<double>>(static_cast<std::size_t>(dim)),
                 std::move(name));
  }

  static Chart torus(int dim, double period = 1.0, std::string name = "") {
    std::vector<std::optional<double>> ps(static_cast<std::size_t>(dim), period);
    return Chart(dim, std::move(ps), std::move(name));
  }

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  const std::optional<double>& period(int i) const {
    return periods_[static_cast<std::size_t>(i)];
  }
  bool periodic(int i) const { return periods_[static_cast<std::size_t>(i)].has_value(); }

  Vec reduce(Vec x) const {
    for (int i = 0; i < dim_; ++i) {
      if (periodic(i)) {
        const double L = *period(i);
        x[i] -= L * std::floor(x[i] / L);
        if (x[i] >= L) x[i] = 0.0;  // guard against floor rounding at the seam
      }
    }
    return x;
  }

  /// Componentwise a - b, each periodic component mapped to its minimal image.
  Vec min_image_diff(const Vec& a, const Vec& b) const {
    Vec d = a - b;
    for (int i = 0; i < dim_; ++i)
      if (periodic(i)) d[i] = min_image(d[i], *period(i));
    return d;
  }

  double distance(const Vec& a, const Vec& b) const { return max_abs(min_image_diff(a, b)); }

  bool operator==(const Chart& o) const {
    if (dim_ != o.dim_) return false;
    for (int i = 0; i < dim_; ++i) {
      if (periodic(i) != o.periodic(i)) return false;
      if (periodic(i) && *period(i) != *o.period(i)) return false;
    }
    return true;
  }
  bool operator!=(const Chart& o) const { return !(*this == o); }

 private:
  int dim_;
  std::vector<std::optional<double>> periods_;
  std::string name_;
};

using ChartPtr = std::shared_ptr<const Chart>;

inline ChartPtr make_chart(Chart c) { return std::make_shared<const Chart>(std::move(c)); }

struct Point {
  ChartPtr chart;
  Vec coords;

  Point() = default;
  Point(ChartPtr c, Vec x) : chart(std::move(c)), coords(chart->reduce(std::move(x))) {
    if (coords.size() != chart->dim()) throw ChartMismatchError("Point: coordinate count");
  }

  int dim() const { return chart->dim(); }
};

inline double distance(const Point& a, const Point& b) {
  if (*a.chart != *b.chart) throw ChartMismatchError("distance: points on different charts");
  return a.chart->distance(a.coords, b.coords);
}

inline void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* where) {
  if (!a || !b || *a != *b) throw ChartMismatchError(std::string(where) + ": chart mismatch");
}

}  // namespace symplift::geo
