#include "geosym/executor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "geosym/errors.hpp"

namespace geosym {

std::string_view to_string(StepStatus s) {
  switch (s) {
    case StepStatus::Solved: return "solved";
    case StepStatus::Deferred: return "deferred";
    case StepStatus::Failed: return "failed";
  }
  return "failed";
}

std::string_view to_string(FailReason r) {
  switch (r) {
    case FailReason::None: return "none";
    case FailReason::UnknownOperator: return "unknown_operator";
    case FailReason::FormMismatch: return "form_mismatch";
    case FailReason::NoRoot: return "no_root";
    case FailReason::NoValue: return "no_value";
    case FailReason::Indeterminate: return "indeterminate";
    case FailReason::MathDomain: return "math_domain";
    case FailReason::Contradiction: return "contradiction";
    case FailReason::BudgetExceeded: return "budget_exceeded";
  }
  return "none";
}

std::string_view to_string(ExecStatus s) {
  switch (s) {
    case ExecStatus::Completed: return "completed";
    case ExecStatus::FormError: return "form_error";
    case ExecStatus::Incalculable: return "incalculable";
    case ExecStatus::ContradictionError: return "contradiction_error";
    case ExecStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "incalculable";
}

ExecStatus terminal_status(FailReason r) {
  switch (r) {
    case FailReason::UnknownOperator:
    case FailReason::FormMismatch: return ExecStatus::FormError;
    case FailReason::Contradiction: return ExecStatus::ContradictionError;
    case FailReason::BudgetExceeded: return ExecStatus::BudgetExceeded;
    default: return ExecStatus::Incalculable;
  }
}

Bindings bind_problem_vars(const Declarations& decls) {
  Bindings out;
  std::set<VarId> seen;
  for (const auto& [var, text] : decls) {
    if (var.kind != VarKind::ProblemVar) throw Error("declaration of " + var.str() + " is not a problem variable");
    if (var.index < 0 || var.index > kMaxProblemVar) throw IndexOutOfRange("problem variable index " + std::to_string(var.index));
    if (!seen.insert(var).second) throw DuplicateDeclaration(var.str());
    Expr e = parse_expr(text);
    if (free_vars(e).empty()) out.env[var] = eval_expr(e, {});
    else out.pending.push_back({Expr::var(var), e});
  }
  return out;
}

Bindings bind_problem_vars(const ProblemRecord& record) { return bind_problem_vars(record.variables); }

ExecutionSession::ExecutionSession(const KnowledgeBase& kb, ExecOptions opts) : kb_(&kb), opts_(opts) {}

void ExecutionSession::bind_problem_vars(const Declarations& decls) {
  auto b = geosym::bind_problem_vars(decls);
  for (const auto& [v, x] : b.env) {
    if (env_.count(v)) throw DuplicateDeclaration(v.str());
    env_[v] = x;
  }
  pending_.insert(pending_.end(), b.pending.begin(), b.pending.end());
  EvalBudget budget(opts_.budget);
  Assignment bound;
  std::string detail;
  try {
    sweep(budget, bound, detail);
  } catch (const Error&) {
    // unresolved declarations stay pending
  }
}

std::optional<double> ExecutionSession::value_of(VarId v) const {
  auto it = env_.find(v);
  if (it == env_.end()) return std::nullopt;
  return it->second;
}

StepRecord ExecutionSession::execute_step(const SolutionStep& step) {
  StepRecord rec = run(step, trace_.size());
  trace_.push_back(rec);
  return rec;
}

namespace {

std::optional<double> literal(const Expr& e) {
  if (e.is_number()) return e.value();
  if (e.kind() == Expr::Kind::Neg && e.child(0).is_number()) return -e.child(0).value();
  return std::nullopt;
}

void bound_by(Interval& d, CmpOp op, double x, bool var_on_left) {
  // var op x when var_on_left, x op var otherwise
  bool lower;  // x is a lower bound
  bool strict;
  switch (op) {
    case CmpOp::Lt: lower = !var_on_left; strict = true; break;
    case CmpOp::Le: lower = !var_on_left; strict = false; break;
    case CmpOp::Gt: lower = var_on_left; strict = true; break;
    case CmpOp::Ge: lower = var_on_left; strict = false; break;
    default: return;
  }
  Interval b;
  if (lower) {
    b.lo = x;
    b.lo_closed = !strict;
  } else {
    b.hi = x;
    b.hi_closed = !strict;
  }
  d = d.intersect(b);
}

}  // namespace

void ExecutionSession::narrow_domains(const std::vector<std::pair<Predicate, std::string>>& rules) {
  for (const auto& [pred, text] : rules) {
    for (std::size_t i = 0; i < pred.ops.size(); ++i) {
      for (const Expr& l0 : pred.terms[i]) {
        for (const Expr& r0 : pred.terms[i + 1]) {
          Expr l = substitute(l0, env_), r = substitute(r0, env_);
          if (l.is_var() && !env_.count(l.var())) {
            if (auto x = literal(r)) bound_by(domains_[l.var()], pred.ops[i], *x, true);
          } else if (r.is_var() && !env_.count(r.var())) {
            if (auto x = literal(l)) bound_by(domains_[r.var()], pred.ops[i], *x, false);
          }
        }
      }
    }
  }
}

bool ExecutionSession::sweep(EvalBudget& budget, Assignment& bound, std::string& detail) {
  if (pending_.empty()) return true;
  std::set<VarId> unknowns;
  for (const auto& eq : pending_)
    for (VarId v : free_vars(eq))
      if (!env_.count(v)) unknowns.insert(v);
  SystemOptions so;
  so.domains = domains_;
  so.rng_seed = opts_.seed;
  if (!unknowns.empty()) {
    auto res = solve_system(pending_, unknowns, env_, so, budget);
    for (const auto& [v, x] : res.values) {
      env_[v] = x;
      bound[v] = x;
    }
  }
  bool ok = true;
  std::vector<Equation> keep;
  for (const auto& eq : pending_) {
    bool open = false;
    for (VarId v : free_vars(eq)) open = open || !env_.count(v);
    if (open) {
      keep.push_back(eq);
    } else if (ok && !residual_ok(eq, env_, &budget)) {
      ok = false;
      detail = "pending equation " + render(eq) + " is violated";
    }
  }
  pending_ = std::move(keep);
  return ok;
}

StepRecord ExecutionSession::run(const SolutionStep& step, std::size_t index) {
  StepRecord rec;
  rec.index = index;
  rec.op = step.op;
  auto fail = [&](FailReason r, std::string detail) {
    rec.status = StepStatus::Failed;
    rec.reason = r;
    rec.detail = std::move(detail);
    return rec;
  };

  const KnowledgeTuple* tuple = kb_->base_search(step.op);
  if (!tuple) return fail(FailReason::UnknownOperator, "operator " + step.op + " is not in the knowledge base");
  rec.canonical_op = tuple->op;
  const TupleVariant* variant = match_variant(*tuple, step.operands.size());
  if (!variant)
    return fail(FailReason::FormMismatch,
                tuple->op + " takes no variant with " + std::to_string(step.operands.size()) + " operands");
  rec.variant = static_cast<int>(variant - tuple->variants.data());

  std::vector<Expr> operands;
  for (const auto& t : step.operands) operands.push_back(t.expr());
  rec.rules = variant->rules_for(operands);
  for (const auto& r : variant->rules)
    if (const auto* rel = std::get_if<RelationalRule>(&r)) rec.relations.push_back(*rel);

  EvalBudget budget(opts_.budget);
  try {
    if (!variant->formula) {
      // Get
      const ProgramToken& t = step.operands[0];
      std::optional<double> value;
      if (t.kind == TokenKind::Const) value = t.value;
      else {
        rec.get_var = t.var;
        value = value_of(t.var);
      }
      if (!value) return fail(FailReason::NoValue, "cannot compute the value of " + t.label());
      rec.get_value = value;
      answer_ = value;
      rec.status = StepStatus::Solved;
      return rec;
    }

    Equation eq = *variant->formula_for(operands);
    rec.equation = eq;
    narrow_domains(rec.rules);
    Equation sub = substitute(eq, env_);
    std::set<VarId> unknowns = free_vars(sub);

    if (unknowns.empty()) {
      double r = residual(sub, {}, &budget);
      double scale = std::max(1.0, std::fabs(eval_expr(sub.rhs, {}, &budget)));
      if (!(std::fabs(r) < kResidualTol * scale))
        return fail(FailReason::Contradiction, render(eq) + " does not hold (residual " + std::to_string(r) + ")");
      rec.status = StepStatus::Solved;
      return rec;
    }

    if (unknowns.size() == 1) {
      VarId u = *unknowns.begin();
      Interval dom = domains_.count(u) ? domains_.at(u) : Interval::all();
      auto roots = solve_single(sub, u, dom, opts_.seed, &budget);
      if (roots.size() > 1) {
        // other pending equations may pick one root
        pending_.push_back(eq);
        std::string detail;
        if (!sweep(budget, rec.bound, detail)) return fail(FailReason::Contradiction, detail);
        if (!env_.count(u)) {
          pending_.pop_back();
          return fail(FailReason::Indeterminate,
                      std::to_string(roots.size()) + " admissible values for " + u.str());
        }
        rec.status = StepStatus::Solved;
        return rec;
      }
      if (roots.empty()) {
        // a lone root outside the rule-implied domain is kept so the
        // semantic check can report which rule it breaks
        auto raw = solve_single(sub, u, Interval::open(-kScanLimit, kScanLimit), opts_.seed, &budget);
        if (raw.size() != 1) return fail(FailReason::NoRoot, "no admissible value for " + u.str());
        roots = raw;
      }
      env_[u] = roots[0];
      rec.bound[u] = roots[0];
      std::string detail;
      if (!sweep(budget, rec.bound, detail)) return fail(FailReason::Contradiction, detail);
      rec.status = StepStatus::Solved;
      return rec;
    }

    pending_.push_back(eq);
    std::string detail;
    if (!sweep(budget, rec.bound, detail)) return fail(FailReason::Contradiction, detail);
    bool all = std::all_of(unknowns.begin(), unknowns.end(), [&](VarId v) { return env_.count(v) > 0; });
    rec.status = all ? StepStatus::Solved : StepStatus::Deferred;
    return rec;
  } catch (const BudgetExceeded& e) {
    return fail(FailReason::BudgetExceeded, e.what());
  } catch (const MathDomain& e) {
    return fail(FailReason::MathDomain, e.what());
  } catch (const Error& e) {
    return fail(FailReason::MathDomain, e.what());
  }
}

ExecOutcome execute_program(const Declarations& decls, const SolutionProgram& program, const KnowledgeBase& kb,
                            ExecOptions opts) {
  ExecOutcome out;
  ExecutionSession s(kb, opts);
  s.bind_problem_vars(decls);
  bool has_get = false;
  for (const auto& step : program.steps) {
    auto rec = s.execute_step(step);
    if (rec.status == StepStatus::Failed) {
      out.status = terminal_status(rec.reason);
      out.detail = rec.detail;
      out.trace = s.trace();
      return out;
    }
    if (rec.get_value) has_get = true;
  }
  out.trace = s.trace();
  if (!has_get) {
    out.status = ExecStatus::Incalculable;
    out.detail = "program has no Get step";
    return out;
  }
  out.status = ExecStatus::Completed;
  out.answer = s.answer();
  return out;
}

ExecOutcome execute_program(const ProblemRecord& record, const SolutionProgram& program, const KnowledgeBase& kb,
                            ExecOptions opts) {
  return execute_program(record.variables, program, kb, opts);
}

}  // namespace geosym
