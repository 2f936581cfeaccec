#include "geosym/solve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "geosym/errors.hpp"

namespace geosym {

bool Interval::contains(double x) const {
  if (std::isnan(x)) return false;
  bool above = lo_closed ? x >= lo : x > lo;
  bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

bool Interval::empty() const {
  if (lo < hi) return false;
  return !(lo == hi && lo_closed && hi_closed);
}

Interval Interval::intersect(const Interval& o) const {
  Interval r = *this;
  if (o.lo > r.lo || (o.lo == r.lo && !o.lo_closed)) {
    r.lo = o.lo;
    r.lo_closed = o.lo_closed;
  }
  if (o.hi < r.hi || (o.hi == r.hi && !o.hi_closed)) {
    r.hi = o.hi;
    r.hi_closed = o.hi_closed;
  }
  return r;
}

namespace {

double scale_of(const Equation& eq, const Assignment& env) {
  try {
    return std::max(1.0, std::fabs(eval_expr(eq.rhs, env)));
  } catch (const MathDomain&) {
    return 1.0;
  }
}

double snap_integer(double x) {
  double r = std::round(x);
  return std::fabs(x - r) < 1e-9 ? r : x;
}

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Expands every preimage of a periodic function inside [lo, hi].
void periodic(double base, double period, double lo, double hi, std::vector<double>& out) {
  double k0 = std::ceil((lo - base) / period);
  double k1 = std::floor((hi - base) / period);
  for (double k = k0; k <= k1 && k - k0 < 10000; ++k) out.push_back(base + k * period);
}

std::optional<std::vector<double>> invert_pow(double exponent, double t) {
  std::vector<double> r;
  if (exponent == 0.0) return std::nullopt;
  if (exponent == std::floor(exponent) && std::fabs(exponent) < 1e9) {
    long long n = static_cast<long long>(exponent);
    if (t == 0.0) {
      if (n > 0) r.push_back(0.0);
      return r;
    }
    if (n % 2 == 0) {
      if (t < 0) return r;
      double root = n == 2 ? std::sqrt(t) : std::pow(t, 1.0 / exponent);
      r.push_back(root);
      r.push_back(-root);
    } else {
      double mag = n == 1 ? std::fabs(t) : n == 3 ? std::cbrt(std::fabs(t)) : std::pow(std::fabs(t), 1.0 / exponent);
      r.push_back(t < 0 ? -mag : mag);
    }
    return r;
  }
  if (t > 0) r.push_back(std::pow(t, 1.0 / exponent));
  else if (t == 0 && exponent > 0) r.push_back(0.0);
  return r;
}

// Walks the unique path to `x`, inverting each node. nullopt means the
// path cannot be inverted in closed form.
std::optional<std::vector<double>> isolate(const Expr& side, double target, VarId x, const Interval& domain) {
  using K = Expr::Kind;
  std::vector<double> targets{target};
  Expr node = side;
  const Assignment none;
  while (!node.is_var()) {
    std::vector<double> next;
    switch (node.kind()) {
      case K::Neg:
        for (double t : targets) next.push_back(-t);
        node = node.child(0);
        break;
      case K::Add:
      case K::Sub:
      case K::Mul:
      case K::Div:
      case K::Pow: {
        bool left = occurrences(node.child(0), x) > 0;
        double other = eval_expr(node.child(left ? 1 : 0), none);
        for (double t : targets) {
          switch (node.kind()) {
            case K::Add: next.push_back(t - other); break;
            case K::Sub: next.push_back(left ? t + other : other - t); break;
            case K::Mul:
              if (other == 0.0) return std::nullopt;
              next.push_back(t / other);
              break;
            case K::Div:
              if (left) {
                next.push_back(t * other);
              } else {
                if (t == 0.0) {
                  if (other == 0.0) return std::nullopt;
                  break;
                }
                next.push_back(other / t);
              }
              break;
            case K::Pow:
              if (left) {
                auto inv = invert_pow(other, t);
                if (!inv) return std::nullopt;
                next.insert(next.end(), inv->begin(), inv->end());
              } else {
                if (other <= 0.0 || other == 1.0) return std::nullopt;
                if (t > 0) next.push_back(std::log(t) / std::log(other));
              }
              break;
            default: break;
          }
        }
        node = node.child(left ? 0 : 1);
        break;
      }
      case K::Sin:
      case K::Cos:
      case K::Tan: {
        double lo = -720.0, hi = 720.0;
        if (node.child(0).is_var()) {
          if (std::isfinite(domain.lo)) lo = std::max(domain.lo, -36000.0);
          if (std::isfinite(domain.hi)) hi = std::min(domain.hi, 36000.0);
        }
        for (double t : targets) {
          if (node.kind() == K::Tan) {
            periodic(snap_integer(std::atan(t) * kRadToDeg), 180.0, lo, hi, next);
            continue;
          }
          if (std::fabs(t) > 1.0 + 1e-12) continue;
          t = std::clamp(t, -1.0, 1.0);
          if (node.kind() == K::Sin) {
            double base = snap_integer(std::asin(t) * kRadToDeg);
            periodic(base, 360.0, lo, hi, next);
            if (base != 90.0 && base != -90.0) periodic(180.0 - base, 360.0, lo, hi, next);
          } else {
            double base = snap_integer(std::acos(t) * kRadToDeg);
            periodic(base, 360.0, lo, hi, next);
            if (base != 0.0 && base != 180.0) periodic(-base, 360.0, lo, hi, next);
          }
        }
        node = node.child(0);
        break;
      }
      default: return std::nullopt;
    }
    targets = std::move(next);
    if (targets.empty()) return targets;
  }
  return targets;
}

using Poly = std::array<double, 3>;

std::optional<Poly> poly_of(const Expr& e, VarId x) {
  using K = Expr::Kind;
  if (occurrences(e, x) == 0) {
    try {
      return Poly{eval_expr(e, {}), 0.0, 0.0};
    } catch (const MathDomain&) {
      return std::nullopt;
    }
  }
  switch (e.kind()) {
    case K::Var: return Poly{0.0, 1.0, 0.0};
    case K::Neg: {
      auto p = poly_of(e.child(0), x);
      if (!p) return std::nullopt;
      return Poly{-(*p)[0], -(*p)[1], -(*p)[2]};
    }
    case K::Add:
    case K::Sub: {
      auto a = poly_of(e.child(0), x), b = poly_of(e.child(1), x);
      if (!a || !b) return std::nullopt;
      double s = e.kind() == K::Add ? 1.0 : -1.0;
      return Poly{(*a)[0] + s * (*b)[0], (*a)[1] + s * (*b)[1], (*a)[2] + s * (*b)[2]};
    }
    case K::Mul: {
      auto a = poly_of(e.child(0), x), b = poly_of(e.child(1), x);
      if (!a || !b) return std::nullopt;
      std::array<double, 5> c{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i + j] += (*a)[i] * (*b)[j];
      if (c[3] != 0.0 || c[4] != 0.0) return std::nullopt;
      return Poly{c[0], c[1], c[2]};
    }
    case K::Div: {
      if (occurrences(e.child(1), x) > 0) return std::nullopt;
      auto a = poly_of(e.child(0), x);
      auto d = poly_of(e.child(1), x);
      if (!a || !d || (*d)[0] == 0.0) return std::nullopt;
      return Poly{(*a)[0] / (*d)[0], (*a)[1] / (*d)[0], (*a)[2] / (*d)[0]};
    }
    case K::Pow: {
      if (occurrences(e.child(1), x) > 0) return std::nullopt;
      double n;
      try {
        n = eval_expr(e.child(1), {});
      } catch (const MathDomain&) {
        return std::nullopt;
      }
      if (n != 0.0 && n != 1.0 && n != 2.0) return std::nullopt;
      auto b = poly_of(e.child(0), x);
      if (!b) return std::nullopt;
      if (n == 0.0) return Poly{1.0, 0.0, 0.0};
      if (n == 1.0) return b;
      if ((*b)[2] != 0.0) return std::nullopt;
      double c0 = (*b)[0], c1 = (*b)[1];
      return Poly{c0 * c0, 2 * c0 * c1, c1 * c1};
    }
    default: return std::nullopt;
  }
}

std::vector<double> poly_roots(const Poly& p) {
  double c = p[0], b = p[1], a = p[2];
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  double disc = b * b - 4 * a * c;
  double mag = std::max({b * b, std::fabs(4 * a * c), 1e-300});
  if (disc < 0) {
    if (disc > -1e-14 * mag) disc = 0;
    else return {};
  }
  if (disc == 0) return {-b / (2 * a)};
  double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r{q / a};
  if (q != 0.0) r.push_back(c / q);
  return r;
}

std::vector<double> scan_roots(const Equation& eq, VarId x, const Interval& domain, EvalBudget* budget) {
  constexpr int kSamples = 4096;
  double lo = std::isfinite(domain.lo) ? domain.lo : -kScanLimit;
  double hi = std::isfinite(domain.hi) ? domain.hi : kScanLimit;
  std::vector<double> out;
  if (!(lo < hi)) return out;

  Assignment env;
  auto f = [&](double v) {
    env[x] = v;
    try {
      return residual(eq, env, budget);
    } catch (const MathDomain&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  std::vector<double> xs(kSamples);
  bool geometric = lo >= 0 && hi > 1000.0 * std::max(lo, 1e-3);
  if (geometric) {
    double g0 = std::max(lo, 1e-6);
    double ratio = std::log(hi / g0);
    for (int i = 0; i < kSamples; ++i) xs[i] = g0 * std::exp(ratio * (i + 0.5) / kSamples);
  } else {
    double step = (hi - lo) / kSamples;
    for (int i = 0; i < kSamples; ++i) xs[i] = lo + (i + 0.5) * step;
  }

  std::vector<double> fs(kSamples);
  for (int i = 0; i < kSamples; ++i) fs[i] = f(xs[i]);

  for (int i = 0; i < kSamples; ++i) {
    if (fs[i] == 0.0) {
      out.push_back(xs[i]);
      continue;
    }
    if (i + 1 >= kSamples || std::isnan(fs[i]) || std::isnan(fs[i + 1]) || fs[i + 1] == 0.0) continue;
    if ((fs[i] < 0) == (fs[i + 1] < 0)) continue;
    double a = xs[i], b = xs[i + 1], fa = fs[i], fb = fs[i + 1];
    for (int it = 0; it < 200; ++it) {
      double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      double fm = f(m);
      if (std::isnan(fm)) break;
      if (fm == 0.0) {
        a = b = m;
        fa = fb = 0.0;
        break;
      }
      if ((fm < 0) == (fa < 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
        fb = fm;
      }
    }
    out.push_back(std::fabs(fa) <= std::fabs(fb) ? a : b);
  }
  return out;
}

}  // namespace

bool residual_ok(const Equation& eq, const Assignment& env, EvalBudget* budget) {
  try {
    double r = residual(eq, env, budget);
    return std::fabs(r) < kResidualTol * scale_of(eq, env);
  } catch (const MathDomain&) {
    return false;
  }
}

std::vector<double> solve_single(const Equation& eq, VarId unknown, const Interval& domain, std::uint64_t,
                                 EvalBudget* budget) {
  auto vars = free_vars(eq);
  if (vars.size() != 1 || *vars.begin() != unknown)
    throw ArityMismatch("expected " + unknown.str() + " as the only unknown of " + render(eq));

  std::optional<std::vector<double>> candidates;
  std::size_t in_lhs = occurrences(eq.lhs, unknown);
  std::size_t in_rhs = occurrences(eq.rhs, unknown);
  try {
    if (in_lhs + in_rhs == 1) {
      const Expr& side = in_lhs ? eq.lhs : eq.rhs;
      double target = eval_expr(in_lhs ? eq.rhs : eq.lhs, {}, budget);
      candidates = isolate(side, target, unknown, domain);
    }
    if (!candidates) {
      if (auto p = poly_of(eq.lhs - eq.rhs, unknown)) {
        if ((*p)[1] == 0.0 && (*p)[2] == 0.0) return {};  // identity or contradiction
        candidates = poly_roots(*p);
      }
    }
  } catch (const MathDomain&) {
    candidates.reset();
  }
  if (!candidates) candidates = scan_roots(eq, unknown, domain, budget);

  std::vector<double> roots;
  Assignment env;
  for (double r : *candidates) {
    if (!std::isfinite(r) || !domain.contains(r)) continue;
    env[unknown] = r;
    if (!residual_ok(eq, env, budget)) continue;
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> dedup;
  for (double r : roots)
    if (dedup.empty() || std::fabs(r - dedup.back()) > kRootDedupTol * std::max(1.0, std::fabs(r)))
      dedup.push_back(r);
  return dedup;
}

// ---------------------------------------------------------------------------
// Systems

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Interval domain_for(const SystemOptions& opts, VarId v) {
  auto it = opts.domains.find(v);
  return it == opts.domains.end() ? Interval::all() : it->second;
}

// Solves the small dense system A x = b in place; false when singular.
bool gauss_solve(std::vector<std::vector<double>>& a, std::vector<double>& b) {
  std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    if (std::fabs(a[piv][c]) < 1e-300) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = n; c-- > 0;) {
    for (std::size_t k = c + 1; k < n; ++k) b[c] -= a[c][k] * b[k];
    b[c] /= a[c][c];
  }
  return true;
}

struct NewtonProblem {
  std::vector<const Equation*> eqs;
  std::vector<VarId> vars;
  Assignment base;
  EvalBudget* budget;

  // Residual vector; empty on a domain error.
  std::vector<double> eval(const std::vector<double>& x) {
    Assignment env = base;
    for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = x[i];
    std::vector<double> r;
    try {
      for (const auto* eq : eqs) r.push_back(residual(*eq, env, budget));
    } catch (const MathDomain&) {
      return {};
    }
    return r;
  }

  bool converged(const std::vector<double>& x) {
    Assignment env = base;
    for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = x[i];
    for (const auto* eq : eqs)
      if (!residual_ok(*eq, env, budget)) return false;
    return true;
  }
};

double norm2(const std::vector<double>& r) {
  if (r.empty()) return kInf;
  double s = 0;
  for (double v : r) s += v * v;
  return s;
}

std::optional<std::vector<double>> newton(NewtonProblem& p, std::vector<double> x) {
  std::size_t n = x.size(), m = p.eqs.size();
  auto r = p.eval(x);
  double cur = norm2(r);
  if (!std::isfinite(cur)) return std::nullopt;
  int polish = 0;
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<std::vector<double>> jac(m, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
      double h = 1e-6 * std::max(1.0, std::fabs(x[j]));
      auto xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      auto rp = p.eval(xp), rm = p.eval(xm);
      if (rp.empty() || rm.empty()) return std::nullopt;
      for (std::size_t i = 0; i < m; ++i) jac[i][j] = (rp[i] - rm[i]) / (2 * h);
    }
    // normal equations with light Levenberg damping
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> g(n, 0.0);
    double trace = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < m; ++k) a[i][j] += jac[k][i] * jac[k][j];
      for (std::size_t k = 0; k < m; ++k) g[i] -= jac[k][i] * r[k];
      trace += a[i][i];
    }
    for (std::size_t i = 0; i < n; ++i) a[i][i] += 1e-14 * std::max(trace, 1e-300);
    if (!gauss_solve(a, g)) return std::nullopt;

    double t = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      auto xn = x;
      for (std::size_t i = 0; i < n; ++i) xn[i] += t * g[i];
      auto rn = p.eval(xn);
      double nn = norm2(rn);
      if (nn < cur) {
        x = std::move(xn);
        r = std::move(rn);
        cur = nn;
        improved = true;
        break;
      }
    }
    if (p.converged(x)) {
      // a couple of extra steps tighten the last digits
      if (!improved || ++polish > 2) return x;
      continue;
    }
    if (!improved) return p.converged(x) ? std::optional(x) : std::nullopt;
  }
  if (p.converged(x)) return x;
  return std::nullopt;
}

bool same_point(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::fabs(a[i] - b[i]) > 1e-6 * std::max(1.0, std::fabs(a[i]))) return false;
  return true;
}

double sample_in(const Interval& d, std::mt19937_64& rng) {
  double lo = d.lo, hi = d.hi;
  if (!std::isfinite(lo) && !std::isfinite(hi)) {
    lo = -100.0;
    hi = 100.0;
  } else if (!std::isfinite(lo)) {
    lo = hi - 200.0;
  } else if (!std::isfinite(hi) || hi - lo > 1000.0) {
    hi = lo + (std::isfinite(hi) ? std::min(hi - lo, 1000.0) : 200.0);
  }
  double u = uniform01(rng);
  double x = lo + (hi - lo) * (0.001 + 0.998 * u);
  return x;
}

}  // namespace

SystemResult solve_system(const std::vector<Equation>& eqs, const std::set<VarId>& unknowns,
                          const Assignment& known, const SystemOptions& opts) {
  EvalBudget budget(opts.budget);
  return solve_system(eqs, unknowns, known, opts, budget);
}

SystemResult solve_system(const std::vector<Equation>& eqs, const std::set<VarId>& unknowns,
                          const Assignment& known, const SystemOptions& opts, EvalBudget& budget) {
  SystemResult out;
  Assignment env = known;
  std::vector<bool> done(eqs.size(), false);
  std::mt19937_64 rng(opts.rng_seed);

  auto unbound_in = [&](const Equation& eq) {
    std::set<VarId> u;
    for (VarId v : free_vars(eq))
      if (!env.count(v)) u.insert(v);
    return u;
  };

  bool ambiguous = false;
  bool no_root = false;
  for (;;) {
    bool progress = false;
    ambiguous = false;
    no_root = false;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      if (done[i]) continue;
      auto u = unbound_in(eqs[i]);
      if (u.empty()) {
        if (!residual_ok(eqs[i], env, &budget)) {
          out.status = SystemStatus::NoSolution;
          return out;
        }
        done[i] = true;
        continue;
      }
      if (u.size() != 1 || !unknowns.count(*u.begin())) continue;
      VarId v = *u.begin();
      auto roots = solve_single(substitute(eqs[i], env), v, domain_for(opts, v), opts.rng_seed, &budget);
      if (roots.size() == 1) {
        env[v] = roots[0];
        out.values[v] = roots[0];
        done[i] = true;
        progress = true;
      } else if (roots.empty()) {
        no_root = true;
      } else {
        ambiguous = true;
      }
    }
    if (progress) continue;

    // Newton on the coupled remainder
    std::set<VarId> vars;
    std::vector<const Equation*> block;
    bool closed = true;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      if (done[i]) continue;
      auto u = unbound_in(eqs[i]);
      for (VarId v : u) {
        if (!unknowns.count(v)) closed = false;
        vars.insert(v);
      }
      block.push_back(&eqs[i]);
    }
    if (!closed || vars.empty() || vars.size() > opts.max_newton_unknowns || block.size() < vars.size() ||
        (vars.size() == 1 && block.size() == 1))
      break;

    NewtonProblem prob{block, std::vector<VarId>(vars.begin(), vars.end()), env, &budget};
    std::vector<std::vector<double>> sols;
    for (int s = 0; s < opts.restarts; ++s) {
      std::vector<double> x0;
      for (VarId v : prob.vars) x0.push_back(sample_in(domain_for(opts, v), rng));
      auto sol = newton(prob, x0);
      if (!sol) continue;
      bool inside = true;
      for (std::size_t k = 0; k < prob.vars.size(); ++k)
        inside = inside && domain_for(opts, prob.vars[k]).contains((*sol)[k]);
      if (!inside) continue;
      if (std::none_of(sols.begin(), sols.end(), [&](const auto& q) { return same_point(q, *sol); }))
        sols.push_back(*sol);
    }
    if (sols.size() == 1) {
      for (std::size_t k = 0; k < prob.vars.size(); ++k) {
        env[prob.vars[k]] = sols[0][k];
        out.values[prob.vars[k]] = sols[0][k];
      }
      continue;  // re-check every equation against the new bindings
    }
    if (sols.size() > 1) {
      out.status = SystemStatus::Indeterminate;
      return out;
    }
    no_root = true;
    break;
  }

  bool all_bound = std::all_of(unknowns.begin(), unknowns.end(), [&](VarId v) { return env.count(v) > 0; });
  bool all_done = std::all_of(done.begin(), done.end(), [](bool d) { return d; });
  if (all_bound && all_done) out.status = SystemStatus::Solved;
  else if (ambiguous) out.status = SystemStatus::Indeterminate;
  else if (no_root) out.status = SystemStatus::NoSolution;
  else out.status = SystemStatus::Partial;
  return out;
}

}  // namespace geosym
