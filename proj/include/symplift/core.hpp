#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace symplift {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Error taxonomy
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ChartMismatchError : Error {
  explicit ChartMismatchError(const std::string& what) : Error(what) {}
};

/// Raised when an evaluation or derivative produces a non-finite value.
struct NumericDomainError : Error {
  explicit NumericDomainError(const std::string& what) : Error(what) {}
};

/// Raised by musical solves against a (near-)degenerate two-form.
struct SingularFormError : Error {
  SingularFormError(const std::string& what, double condition_estimate)
      : Error(what), condition(condition_estimate) {}
  double condition;
};

struct NotFiberedError : Error {
  explicit NotFiberedError(const std::string& what) : Error(what) {}
};

struct IllDefinedError : Error {
  explicit IllDefinedError(const std::string& what) : Error(what) {}
};

struct ArityError : Error {
  explicit ArityError(const std::string& what) : Error(what) {}
};

struct NotClosedError : Error {
  explicit NotClosedError(const std::string& what) : Error(what) {}
};

struct NotSectionError : Error {
  explicit NotSectionError(const std::string& what) : Error(what) {}
};

struct NotLagrangianError : Error {
  explicit NotLagrangianError(const std::string& what) : Error(what) {}
};

struct NotTransitiveError : Error {
  explicit NotTransitiveError(const std::string& what) : Error(what) {}
};

struct RankError : Error {
  explicit RankError(const std::string& what) : Error(what) {}
};

inline void require_finite(const Vec& v, const char* where) {
  if (!v.allFinite()) throw NumericDomainError(std::string(where) + ": non-finite value");
}

inline void require_finite(const Mat& m, const char* where) {
  if (!m.allFinite()) throw NumericDomainError(std::string(where) + ": non-finite value");
}

// ---------------------------------------------------------------------------
// Deterministic sampling
// ---------------------------------------------------------------------------

/// splitmix64; used instead of std::uniform_real_distribution so that sampled
/// streams are identical across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// uniform in [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  Vec uniform_vec(int dim, double lo, double hi) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
    return v;
  }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

inline double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

/// Reduce d to the representative of d mod L closest to zero.
inline double min_image(double d, double period) {
  return d - period * std::round(d / period);
}

/// 17-significant-digit formatting shared by every report writer; fixed so
/// that reruns of the same build emit byte-identical files.
std::string format_g17(double x);

inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

}  // namespace symplift
