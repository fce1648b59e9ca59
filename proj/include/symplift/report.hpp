#pragma once

#include "symplift/core.hpp"

#include <string>
#include <utility>
#include <vector>

namespace symplift {

// ---------------------------------------------------------------------------
// Verification records
// ---------------------------------------------------------------------------
//
// Every sampling-based verifier returns one of these: the worst residual seen,
// where it was seen, a per-identity breakdown, and the verdict against the
// tolerance it was run with. Failures are data; verifiers do not throw on a
// bad residual.

struct CheckReport {
  std::string name;
  std::string anchor;  // the identity being checked, in plain text
  double max_residual = 0.0;
  double tol = 0.0;
  bool pass = true;
  std::string argmax;  // sample indices realizing max_residual
  std::vector<std::pair<std::string, double>> breakdown;

  void record(double residual, const std::string& where) {
    if (residual > max_residual) {
      max_residual = residual;
      argmax = where;
    }
  }

  void record_part(const std::string& part, double residual, const std::string& where) {
    for (auto& [k, v] : breakdown) {
      if (k == part) {
        v = std::max(v, residual);
        record(residual, where.empty() ? part : part + " " + where);
        return;
      }
    }
    breakdown.emplace_back(part, residual);
    record(residual, where.empty() ? part : part + " " + where);
  }

  CheckReport& finish(double tolerance) {
    tol = tolerance;
    pass = max_residual <= tolerance;
    return *this;
  }
};

}  // namespace symplift
