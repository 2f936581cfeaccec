#include "geosym/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include "geosym/errors.hpp"
#include "geosym/rng.hpp"

namespace geosym {

std::string_view to_string(EvalMode m) {
  switch (m) {
    case EvalMode::Completion: return "completion";
    case EvalMode::Choice: return "choice";
    case EvalMode::Top3: return "top3";
  }
  return "?";
}

std::optional<EvalMode> eval_mode_from_string(std::string_view s) {
  for (auto m : {EvalMode::Completion, EvalMode::Choice, EvalMode::Top3})
    if (to_string(m) == s) return m;
  if (s == "top-3") return EvalMode::Top3;
  return std::nullopt;
}

bool answer_matches(double answer, double truth, double rel, double abs) {
  if (!std::isfinite(answer)) return false;
  return std::fabs(answer - truth) <= std::max(rel * std::fabs(truth), abs);
}

std::optional<std::size_t> nearest_choice(double answer, const std::vector<double>& options, double window,
                                          double abs) {
  if (!std::isfinite(answer)) return std::nullopt;
  std::optional<std::size_t> best;
  double best_d = 0;
  for (std::size_t i = 0; i < options.size(); ++i) {
    double d = std::fabs(answer - options[i]);
    if (d > std::max(window * std::fabs(options[i]), abs)) continue;
    if (!best || d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

std::uint64_t record_seed(std::uint64_t global, std::string_view id) { return global ^ fnv1a(id); }

std::vector<Candidate> parse_candidates(const ProblemRecord& r, const KnowledgeBase& kb) {
  std::vector<Candidate> out;
  for (const auto& c : r.candidates) {
    Candidate cand;
    cand.confidence = c.confidence;
    try {
      cand.program = parse_program(c.program, kb);
    } catch (const Error&) {
      cand.program = {};
    }
    out.push_back(std::move(cand));
  }
  return out;
}

namespace {

std::optional<SolutionProgram> ground_truth(const ProblemRecord& r, const KnowledgeBase& kb) {
  if (r.ground_truth_program.empty()) return std::nullopt;
  try {
    return parse_program(r.ground_truth_program, kb);
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool program_matches(const SolutionProgram& p, const std::optional<SolutionProgram>& gt, const KnowledgeBase& kb) {
  return gt && !p.steps.empty() && program_equal(p, *gt, kb);
}

bool correct(const std::optional<double>& a, const ProblemRecord& r, const EvalConfig& cfg) {
  return a && r.answer && answer_matches(*a, *r.answer, cfg.rel_tolerance, cfg.abs_tolerance);
}

VerifyOptions verify_options(const EvalConfig& cfg, std::uint64_t seed) {
  VerifyOptions v;
  v.level = cfg.verify_level;
  v.exec = cfg.exec;
  v.exec.seed = seed;
  return v;
}

struct Pick {
  std::optional<std::size_t> chosen;
  bool verified = false;
  std::optional<double> answer;
};

// The Completion choice: first verified candidate, else the top one unverified.
Pick pick(const ProblemRecord& r, const std::vector<Candidate>& cands, const KnowledgeBase& kb,
          const EvalConfig& cfg, std::uint64_t seed) {
  Pick p;
  if (cands.empty()) return p;
  auto vopts = verify_options(cfg, seed);
  if (cfg.verify && cfg.verify_level != Level::None) {
    Selection sel = select_solution(r, cands, kb, vopts);
    if (sel.chosen) {
      p.chosen = sel.chosen;
      p.verified = true;
      p.answer = sel.reports.at(*sel.chosen).answer;
      return p;
    }
    if (!cfg.fallback_unverified) return p;
  }
  std::size_t top = confidence_order(cands).front();
  p.chosen = top;
  p.answer = get_answer(execute_program(r, cands[top].program, kb, vopts.exec));
  return p;
}

ProblemOutcome completion(const ProblemRecord& r, const KnowledgeBase& kb, const EvalConfig& cfg) {
  ProblemOutcome o;
  o.id = r.id;
  auto seed = record_seed(cfg.seed, r.id);
  auto cands = parse_candidates(r, kb);
  if (cands.size() > cfg.beam_size) cands.resize(cfg.beam_size);
  Pick p = pick(r, cands, kb, cfg, seed);
  o.chosen = p.chosen;
  o.verified = p.verified;
  o.answer = p.answer;
  o.correct_answer = correct(o.answer, r, cfg);
  if (o.chosen) o.correct_program = program_matches(cands[*o.chosen].program, ground_truth(r, kb), kb);
  return o;
}

ProblemOutcome choice(const ProblemRecord& r, const KnowledgeBase& kb, const EvalConfig& cfg) {
  if (!r.choices || r.choices->size() != 4) throw MissingChoices(r.id);
  ProblemOutcome o = completion(r, kb, cfg);
  const auto& options = *r.choices;
  std::optional<std::size_t> picked;
  if (o.answer) picked = nearest_choice(*o.answer, options, cfg.choice_window, cfg.abs_tolerance);
  if (!picked) {
    // separate stream from the solver seed so the pick does not depend on execution
    Rng rng(record_seed(cfg.seed, r.id) ^ 0x9e3779b97f4a7c15ULL);
    picked = static_cast<std::size_t>(rng.below(options.size()));
    o.random_pick = true;
  }
  o.picked_option = picked;
  std::optional<std::size_t> truth;
  if (r.answer) truth = nearest_choice(*r.answer, options, 0.0, std::max(cfg.abs_tolerance, cfg.rel_tolerance * std::fabs(*r.answer)));
  o.correct_answer = truth && *truth == *picked;
  return o;
}

ProblemOutcome top3(const ProblemRecord& r, const KnowledgeBase& kb, const EvalConfig& cfg) {
  ProblemOutcome o;
  o.id = r.id;
  auto seed = record_seed(cfg.seed, r.id);
  auto cands = parse_candidates(r, kb);
  if (cands.size() > cfg.beam_size) cands.resize(cfg.beam_size);
  if (cands.empty()) return o;
  auto vopts = verify_options(cfg, seed);
  auto order = confidence_order(cands);
  std::map<std::size_t, VerificationReport> reports;
  if (cfg.verify && cfg.verify_level != Level::None) {
    for (auto i : order) reports[i] = verify_program(r, cands[i].program, kb, vopts);
    std::stable_partition(order.begin(), order.end(), [&](std::size_t i) { return reports[i].passed; });
  }
  if (order.size() > 3) order.resize(3);
  auto gt = ground_truth(r, kb);
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    std::size_t i = order[rank];
    std::optional<double> a;
    bool verified = reports.count(i) && reports[i].passed;
    if (verified)
      a = reports[i].answer;
    else
      a = get_answer(execute_program(r, cands[i].program, kb, vopts.exec));
    if (rank == 0) {
      o.chosen = i;
      o.verified = verified;
      o.answer = a;
    }
    bool prog = program_matches(cands[i].program, gt, kb);
    o.correct_program = o.correct_program || prog;
    bool hit = cfg.top3_programs ? prog : correct(a, r, cfg);
    o.correct_answer = o.correct_answer || hit;
  }
  return o;
}

EvalReport run(const std::vector<ProblemRecord>& records, const KnowledgeBase& kb, const EvalConfig& cfg) {
  if (!(cfg.rel_tolerance > 0) || !(cfg.abs_tolerance > 0)) throw Error("tolerances must be positive");
  EvalReport rep;
  rep.mode = cfg.mode;
  for (const auto& r : records) rep.outcomes.push_back(evaluate_record(r, kb, cfg));
  std::size_t a = 0, p = 0;
  for (const auto& o : rep.outcomes) {
    a += o.correct_answer;
    p += o.correct_program;
    rep.verified += o.verified;
  }
  if (!records.empty()) {
    rep.answer_accuracy = static_cast<double>(a) / records.size();
    rep.program_accuracy = static_cast<double>(p) / records.size();
  }
  return rep;
}

}  // namespace

ProblemOutcome evaluate_record(const ProblemRecord& r, const KnowledgeBase& kb, const EvalConfig& cfg) {
  switch (cfg.mode) {
    case EvalMode::Completion: return completion(r, kb, cfg);
    case EvalMode::Choice: return choice(r, kb, cfg);
    case EvalMode::Top3: return top3(r, kb, cfg);
  }
  return {};
}

EvalReport evaluate_completion(const std::vector<ProblemRecord>& records, const KnowledgeBase& kb, EvalConfig cfg) {
  cfg.mode = EvalMode::Completion;
  return run(records, kb, cfg);
}

EvalReport evaluate_choice(const std::vector<ProblemRecord>& records, const KnowledgeBase& kb, EvalConfig cfg) {
  cfg.mode = EvalMode::Choice;
  return run(records, kb, cfg);
}

EvalReport evaluate_top3(const std::vector<ProblemRecord>& records, const KnowledgeBase& kb, EvalConfig cfg) {
  cfg.mode = EvalMode::Top3;
  return run(records, kb, cfg);
}

EvalReport evaluate(const std::vector<ProblemRecord>& records, const KnowledgeBase& kb, const EvalConfig& cfg) {
  return run(records, kb, cfg);
}

}  // namespace geosym
