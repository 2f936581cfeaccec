#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "geosym/expr.hpp"

namespace geosym {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Real interval with independently open or closed ends.
struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval all() { return {}; }

  bool contains(double x) const;
  bool empty() const;
  Interval intersect(const Interval& other) const;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Bounds used when a domain end is infinite and has to be sampled.
inline constexpr double kScanLimit = 1e6;
inline constexpr double kRootDedupTol = 1e-9;
inline constexpr double kResidualTol = 1e-8;

// True when |residual| is below kResidualTol relative to max(1, |rhs|).
bool residual_ok(const Equation& eq, const Assignment& env, EvalBudget* budget = nullptr);

// All real roots of a one-unknown equation inside `domain`, ascending and
// deduplicated. Exact isolation is tried first, then degree <= 2 polynomial
// solving, then a 4096-sample sign-change scan refined by bisection.
// Throws ArityMismatch unless `unknown` is the only free variable.
std::vector<double> solve_single(const Equation& eq, VarId unknown, const Interval& domain,
                                 std::uint64_t rng_seed = 0, EvalBudget* budget = nullptr);

enum class SystemStatus {
  Solved,         // every unknown bound, every residual within tolerance
  Partial,        // progress made but some unknowns remain free
  Indeterminate,  // more than one admissible solution survives
  NoSolution,     // an equation has no admissible root or is violated
};

struct SystemResult {
  SystemStatus status = SystemStatus::Partial;
  Assignment values;  // newly determined unknowns only
};

struct SystemOptions {
  std::map<VarId, Interval> domains;  // missing entries mean unrestricted
  std::uint64_t budget = 1'000'000;
  std::uint64_t rng_seed = 0;
  int restarts = 32;
  std::size_t max_newton_unknowns = 3;
};

// Fixed-point propagation of single-unknown equations followed by damped
// Newton with seeded restarts for what remains. `known` supplies values for
// variables that are not unknowns. Throws BudgetExceeded.
SystemResult solve_system(const std::vector<Equation>& eqs, const std::set<VarId>& unknowns,
                          const Assignment& known, const SystemOptions& opts = {});

// Variant that charges an externally owned budget.
SystemResult solve_system(const std::vector<Equation>& eqs, const std::set<VarId>& unknowns,
                          const Assignment& known, const SystemOptions& opts, EvalBudget& budget);

}  // namespace geosym
