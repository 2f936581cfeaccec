#include "geosym/verifier.hpp"

#include <algorithm>
#include <numeric>

namespace geosym {

std::string_view to_string(Level l) {
  switch (l) {
    case Level::None: return "none";
    case Level::Form: return "form";
    case Level::Calculability: return "calculability";
    case Level::Semantic: return "semantic";
  }
  return "none";
}

std::optional<Level> level_from_string(std::string_view s) {
  for (Level l : {Level::None, Level::Form, Level::Calculability, Level::Semantic})
    if (to_string(l) == s) return l;
  return std::nullopt;
}

namespace {

struct QueuedRule {
  std::size_t step;
  Predicate pred;
  std::string text;
};

bool evaluable(const Predicate& p, const Assignment& env) {
  for (VarId v : free_vars(p))
    if (!env.count(v)) return false;
  return true;
}

bool is_form_failure(const StepRecord& r) {
  return r.status == StepStatus::Failed &&
         (r.reason == FailReason::UnknownOperator || r.reason == FailReason::FormMismatch);
}

bool is_calc_failure(const StepRecord& r) {
  return r.status == StepStatus::Failed && r.reason != FailReason::Contradiction;
}

// Semantic failure of an executed step; empty when it passes.
std::optional<std::pair<std::string, std::string>> semantic_failure(const StepRecord& r, const ExecutionSession& s,
                                                                    const VerifyOptions& opts,
                                                                    std::vector<QueuedRule>* queue) {
  if (r.status == StepStatus::Failed && r.reason != FailReason::Contradiction)
    return std::make_pair(std::string(to_string(r.reason)), "step could not be executed: " + r.detail);
  for (const auto& [pred, text] : r.rules) {
    if (!evaluable(pred, s.env())) {
      if (queue) queue->push_back({r.index, pred, text});
      continue;
    }
    if (!holds(pred, s.env())) return std::make_pair(std::string("rule_violated"), text);
  }
  if (r.status == StepStatus::Failed) return std::make_pair(std::string("contradiction"), r.detail);
  for (const auto& rel : r.relations) {
    auto it = opts.hooks.find(rel.tag);
    if (it != opts.hooks.end() && !it->second(rel, r, s)) return std::make_pair(std::string("relation_failed"), rel.tag);
  }
  return std::nullopt;
}

StepVerdict judge(ExecutionSession& session, const SolutionStep& step, const VerifyOptions& opts,
                  std::vector<QueuedRule>* queue) {
  StepRecord rec = session.execute_step(step);
  StepVerdict v;
  v.index = rec.index;
  auto fail = [&](Level l, std::string reason, std::string detail) {
    v.passed = false;
    v.failed_level = l;
    v.reason = std::move(reason);
    v.detail = std::move(detail);
    return v;
  };
  auto wants = [&](Level l) {
    return opts.mode == CheckMode::Only ? opts.level == l : opts.level >= l;
  };

  if (wants(Level::Form) && is_form_failure(rec)) return fail(Level::Form, std::string(to_string(rec.reason)), rec.detail);
  if (wants(Level::Calculability) && is_calc_failure(rec))
    return fail(Level::Calculability, std::string(to_string(rec.reason)), rec.detail);
  if (wants(Level::Semantic)) {
    if (auto f = semantic_failure(rec, session, opts, queue)) return fail(Level::Semantic, f->first, f->second);
  }
  return v;
}

}  // namespace

StepVerdict verify_step(ExecutionSession& session, const SolutionStep& step, const VerifyOptions& opts) {
  return judge(session, step, opts, nullptr);
}

VerificationReport verify_program(const Declarations& decls, const SolutionProgram& program, const KnowledgeBase& kb,
                                  const VerifyOptions& opts) {
  VerificationReport report;
  ExecutionSession session(kb, opts.exec);
  session.bind_problem_vars(decls);
  if (program.empty()) return report;

  std::vector<QueuedRule> queue;
  bool semantic = opts.mode == CheckMode::Only ? opts.level == Level::Semantic : opts.level >= Level::Semantic;
  bool has_get = false;
  for (const auto& step : program.steps) {
    StepVerdict v = judge(session, step, opts, semantic ? &queue : nullptr);
    if (v.passed && semantic) {
      // rules of earlier deferred steps whose operands are now known
      for (auto it = queue.begin(); it != queue.end();) {
        if (!evaluable(it->pred, session.env())) {
          ++it;
          continue;
        }
        if (!holds(it->pred, session.env())) {
          v.passed = false;
          v.failed_level = Level::Semantic;
          v.reason = "rule_violated";
          v.detail = it->text + " (step " + std::to_string(it->step) + ")";
          break;
        }
        it = queue.erase(it);
      }
    }
    if (!session.trace().empty() && session.trace().back().get_value) has_get = true;
    report.verdicts.push_back(v);
    if (!v.passed) return report;
  }

  if (!has_get && opts.level >= Level::Calculability) {
    auto& last = report.verdicts.back();
    last.passed = false;
    last.failed_level = opts.mode == CheckMode::Only ? opts.level : Level::Calculability;
    last.reason = "no_value";
    last.detail = "program has no Get step";
    return report;
  }
  report.passed = true;
  report.answer = session.answer();
  return report;
}

VerificationReport verify_program(const ProblemRecord& record, const SolutionProgram& program,
                                  const KnowledgeBase& kb, const VerifyOptions& opts) {
  return verify_program(record.variables, program, kb, opts);
}

std::vector<std::size_t> confidence_order(const std::vector<Candidate>& candidates) {
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return candidates[a].confidence > candidates[b].confidence; });
  return order;
}

Selection select_solution(const Declarations& decls, const std::vector<Candidate>& candidates,
                          const KnowledgeBase& kb, const VerifyOptions& opts) {
  Selection sel;
  sel.order = confidence_order(candidates);
  for (std::size_t i : sel.order) {
    auto report = verify_program(decls, candidates[i].program, kb, opts);
    bool ok = report.passed;
    sel.reports.emplace(i, std::move(report));
    if (ok) {
      sel.chosen = i;
      break;
    }
  }
  return sel;
}

Selection select_solution(const ProblemRecord& record, const std::vector<Candidate>& candidates,
                          const KnowledgeBase& kb, const VerifyOptions& opts) {
  return select_solution(record.variables, candidates, kb, opts);
}

}  // namespace geosym
