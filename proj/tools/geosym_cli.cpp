// geosym: command-line front end for the solver, verifier, clause tools,
// augmentation and benchmark evaluation.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "geosym/augment.hpp"
#include "geosym/dataset.hpp"
#include "geosym/errors.hpp"
#include "geosym/evaluate.hpp"
#include "geosym/verifier.hpp"

using namespace geosym;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInputError = 2;
constexpr int kInternal = 3;

struct Globals {
  std::string kb_path;
  std::uint64_t seed = 0;
  std::uint64_t budget = 1'000'000;
  std::string tolerance;
  bool no_verify = false;
  std::string verify_level = "semantic";
  std::string format = "text";
};

// Problem input shared by exec, verify and select.
struct ProblemInput {
  std::string record_path;
  std::string id;
  std::vector<std::string> vars;  // "N0=3"
};

struct InputError : Error {
  using Error::Error;
};

bool structured(const Globals& g) { return g.format == "structured"; }

KnowledgeBase load_knowledge(const Globals& g) { return g.kb_path.empty() ? builtin_kb() : load_kb(g.kb_path); }

ExecOptions exec_options(const Globals& g) {
  ExecOptions o;
  o.budget = g.budget;
  o.seed = g.seed;
  return o;
}

Level parse_level(const std::string& s) {
  auto l = level_from_string(s);
  if (!l) throw InputError("--verify-level: unknown level '" + s + "'");
  return *l;
}

std::pair<double, double> parse_tolerance(const std::string& s) {
  EvalConfig defaults;
  if (s.empty()) return {defaults.rel_tolerance, defaults.abs_tolerance};
  auto colon = s.find(':');
  try {
    double rel = std::stod(s.substr(0, colon));
    double abs = colon == std::string::npos ? defaults.abs_tolerance : std::stod(s.substr(colon + 1));
    if (rel > 0 && abs > 0) return {rel, abs};
  } catch (const std::exception&) {
  }
  throw InputError("--tolerance: expected REL[:ABS] with positive values, got '" + s + "'");
}

ProblemRecord load_problem(const ProblemInput& in) {
  ProblemRecord r;
  if (!in.record_path.empty()) {
    auto loaded = load_dataset(in.record_path).records;
    if (loaded.empty()) throw InputError("--record: no records in " + in.record_path);
    if (in.id.empty()) {
      r = loaded.front();
    } else {
      auto it = std::find_if(loaded.begin(), loaded.end(), [&](const auto& x) { return x.id == in.id; });
      if (it == loaded.end()) throw InputError("--id: no record '" + in.id + "'");
      r = *it;
    }
  }
  for (const auto& v : in.vars) {
    auto eq = v.find('=');
    auto var = eq == std::string::npos ? std::nullopt : VarId::parse(v.substr(0, eq));
    if (!var || var->kind != VarKind::ProblemVar) throw InputError("--var: expected Nk=VALUE, got '" + v + "'");
    parse_expr(v.substr(eq + 1));
    std::erase_if(r.variables, [&](const auto& d) { return d.first == *var; });
    r.variables.emplace_back(*var, v.substr(eq + 1));
  }
  std::sort(r.variables.begin(), r.variables.end());
  return r;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

std::string step_text(const StepRecord& s) {
  std::string out = "step " + std::to_string(s.index) + " " + s.op + ": " + std::string(to_string(s.status));
  if (s.reason != FailReason::None) out += " (" + std::string(to_string(s.reason)) + ")";
  for (const auto& [v, x] : s.bound) out += " " + v.str() + "=" + fmt(x);
  if (!s.detail.empty()) out += " -- " + s.detail;
  return out;
}

json step_json(const StepRecord& s) {
  json j{{"index", s.index}, {"op", s.op}, {"status", to_string(s.status)}, {"reason", to_string(s.reason)}};
  json b = json::object();
  for (const auto& [v, x] : s.bound) b[v.str()] = x;
  j["bound"] = b;
  if (s.equation) j["equation"] = render(s.equation->lhs) + " = " + render(s.equation->rhs);
  if (!s.detail.empty()) j["detail"] = s.detail;
  return j;
}

json report_json(const VerificationReport& rep) {
  json v = json::array();
  for (const auto& d : rep.verdicts)
    v.push_back({{"index", d.index}, {"passed", d.passed}, {"level", to_string(d.failed_level)}, {"reason", d.reason},
                 {"detail", d.detail}});
  json j{{"passed", rep.passed}, {"verdicts", v}};
  j["answer"] = rep.answer ? json(*rep.answer) : json(nullptr);
  return j;
}

void print_report(const VerificationReport& rep) {
  for (const auto& d : rep.verdicts) {
    std::cout << "step " << d.index << ": " << (d.passed ? "pass" : "fail");
    if (!d.passed) std::cout << " at " << to_string(d.failed_level) << " (" << d.reason << ")";
    if (!d.detail.empty()) std::cout << " -- " << d.detail;
    std::cout << "\n";
  }
  std::cout << (rep.passed ? "verified" : "rejected");
  if (rep.answer) std::cout << ", answer " << fmt(*rep.answer);
  std::cout << "\n";
}

int exec_code(ExecStatus s) {
  switch (s) {
    case ExecStatus::Completed: return kOk;
    case ExecStatus::FormError: return 4;
    case ExecStatus::Incalculable: return 5;
    case ExecStatus::ContradictionError: return 6;
    case ExecStatus::BudgetExceeded: return 7;
  }
  return kInternal;
}

int cmd_exec(const Globals& g, const ProblemInput& in, const std::string& program_text) {
  auto kb = load_knowledge(g);
  auto rec = load_problem(in);
  auto program = parse_program(program_text.empty() ? rec.ground_truth_program : program_text, kb);
  auto out = execute_program(rec, program, kb, exec_options(g));
  if (structured(g)) {
    json t = json::array();
    for (const auto& s : out.trace) t.push_back(step_json(s));
    json j{{"status", to_string(out.status)}, {"trace", t}, {"detail", out.detail}};
    j["answer"] = get_answer(out) ? json(*out.answer) : json(nullptr);
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& s : out.trace) std::cout << step_text(s) << "\n";
    std::cout << "status: " << to_string(out.status) << "\n";
    if (auto a = get_answer(out)) std::cout << "answer: " << fmt(*a) << "\n";
  }
  return exec_code(out.status);
}

VerifyOptions verify_options(const Globals& g) {
  VerifyOptions v;
  v.level = parse_level(g.verify_level);
  v.exec = exec_options(g);
  return v;
}

int cmd_verify(const Globals& g, const ProblemInput& in, const std::string& program_text) {
  auto kb = load_knowledge(g);
  auto rec = load_problem(in);
  auto program = parse_program(program_text.empty() ? rec.ground_truth_program : program_text, kb);
  auto rep = verify_program(rec, program, kb, verify_options(g));
  if (structured(g))
    std::cout << report_json(rep).dump(2) << "\n";
  else
    print_report(rep);
  return rep.passed ? kOk : kVerifyFailed;
}

int cmd_select(const Globals& g, const ProblemInput& in) {
  auto kb = load_knowledge(g);
  auto rec = load_problem(in);
  auto cands = parse_candidates(rec, kb);
  if (g.no_verify) {
    if (cands.empty()) return kVerifyFailed;
    auto top = confidence_order(cands).front();
    std::cout << top << " " << rec.candidates[top].program << "\n";
    return kOk;
  }
  auto sel = select_solution(rec, cands, kb, verify_options(g));
  if (structured(g)) {
    json reps = json::object();
    for (const auto& [i, r] : sel.reports) reps[std::to_string(i)] = report_json(r);
    json j{{"order", sel.order}, {"reports", reps}};
    j["chosen"] = sel.chosen ? json(*sel.chosen) : json(nullptr);
    std::cout << j.dump(2) << "\n";
  } else {
    for (auto i : sel.order) {
      if (!sel.reports.count(i)) continue;
      const auto& r = sel.reports.at(i);
      std::cout << "candidate " << i << " (" << fmt(rec.candidates[i].confidence) << "): "
                << (r.passed ? "verified" : "rejected") << "  " << rec.candidates[i].program << "\n";
    }
    if (sel.chosen)
      std::cout << "chosen: " << *sel.chosen << ", answer " << fmt(*sel.reports.at(*sel.chosen).answer) << "\n";
    else
      std::cout << "no candidate verified\n";
  }
  return sel.chosen ? kOk : kVerifyFailed;
}

int cmd_clauses_render(const Globals& g, const std::string& path, bool plain) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  auto records = read_dataset(f).records;
  for (const auto& r : records) {
    auto clauses = render_clauses(r.annotations, plain ? GlyphStyle::Plain : GlyphStyle::Unicode);
    if (structured(g)) {
      json s = json::array(), m = json::array();
      for (const auto& c : clauses) (c.category == ClauseCategory::Structural ? s : m).push_back(c.text);
      std::cout << json{{"id", r.id}, {"structural_clauses", s}, {"semantic_clauses", m}}.dump() << "\n";
    } else {
      for (const auto& c : clauses) std::cout << r.id << "\t" << c.text << "\n";
    }
  }
  return kOk;
}

int cmd_clauses_parse(const Globals& g, const std::vector<std::string>& texts) {
  for (const auto& t : texts) {
    auto c = parse_clause(t);
    json tags = json::array();
    for (const auto& k : tag_tokens(t)) tags.push_back({k.token, to_string(k.tag)});
    if (structured(g)) {
      json j{{"text", c.text},
             {"category", c.category == ClauseCategory::Structural ? "structural" : "semantic"},
             {"kind", to_string(c.kind)},
             {"refs", c.fact.refs},
             {"tags", tags}};
      j["value"] = c.fact.value ? json(*c.fact.value) : json(nullptr);
      std::cout << j.dump() << "\n";
    } else {
      std::cout << c.text << "\t" << to_string(c.kind);
      for (const auto& r : c.fact.refs) std::cout << " " << r;
      if (c.fact.value) std::cout << " = " << *c.fact.value;
      std::cout << "\t";
      for (const auto& k : tag_tokens(t)) std::cout << " " << k.token << "/" << to_string(k.tag);
      std::cout << "\n";
    }
  }
  return kOk;
}

int cmd_augment(const Globals& g, const std::string& path, const std::vector<std::string>& strategies, double prob,
                std::size_t count) {
  auto kb = load_knowledge(g);
  auto records = load_dataset(path).records;
  AugmentSpec spec;
  for (const auto& s : strategies) {
    auto st = strategy_from_string(s);
    if (!st) throw InputError("--strategies: unknown strategy '" + s + "'");
    spec.probability[*st] = prob;
  }
  for (const auto& r : records) {
    for (std::size_t k = 0; k < count; ++k) {
      spec.seed = record_seed(g.seed, r.id) + k;
      auto a = compose(r, spec, kb);
      a.id = r.id + "#" + std::to_string(k);
      std::cout << record_to_json(a) << "\n";
    }
  }
  return kOk;
}

int cmd_eval(const Globals& g, const std::string& path, const std::string& mode, bool lenient, bool top3_programs,
             double window, std::size_t beam) {
  auto kb = load_knowledge(g);
  LoadOptions lo;
  lo.lenient = lenient;
  lo.beam_size = beam;
  auto loaded = load_dataset(path, lo);
  for (const auto& s : loaded.skipped) std::cerr << "skipped " << s << "\n";
  EvalConfig cfg;
  auto m = eval_mode_from_string(mode);
  if (!m) throw InputError("--mode: unknown mode '" + mode + "'");
  cfg.mode = *m;
  std::tie(cfg.rel_tolerance, cfg.abs_tolerance) = parse_tolerance(g.tolerance);
  cfg.verify = !g.no_verify;
  cfg.verify_level = parse_level(g.verify_level);
  cfg.top3_programs = top3_programs;
  cfg.choice_window = window;
  cfg.seed = g.seed;
  cfg.beam_size = beam;
  cfg.exec = exec_options(g);
  auto rep = evaluate(loaded.records, kb, cfg);
  if (structured(g)) {
    json outs = json::array();
    for (const auto& o : rep.outcomes) {
      json j{{"id", o.id}, {"verified", o.verified}, {"correct_answer", o.correct_answer},
             {"correct_program", o.correct_program}};
      j["chosen"] = o.chosen ? json(*o.chosen) : json(nullptr);
      j["answer"] = o.answer ? json(*o.answer) : json(nullptr);
      if (cfg.mode == EvalMode::Choice) {
        j["picked_option"] = o.picked_option ? json(*o.picked_option) : json(nullptr);
        j["random_pick"] = o.random_pick;
      }
      outs.push_back(j);
    }
    std::cout << json{{"mode", to_string(rep.mode)},
                      {"records", rep.outcomes.size()},
                      {"answer_accuracy", rep.answer_accuracy},
                      {"program_accuracy", rep.program_accuracy},
                      {"verified", rep.verified},
                      {"skipped", loaded.skipped.size()},
                      {"outcomes", outs}}
                     .dump(2)
              << "\n";
  } else {
    for (const auto& o : rep.outcomes) {
      std::printf("%-28s %-3s %-3s %-10s %s\n", o.id.c_str(), o.correct_answer ? "ok" : "-",
                  o.correct_program ? "P" : "-", o.verified ? "verified" : "unverified",
                  o.answer ? fmt(*o.answer).c_str() : "none");
    }
    std::printf("mode %s: %zu records, answer accuracy %.4f, program accuracy %.4f, %zu verified\n",
                std::string(to_string(rep.mode)).c_str(), rep.outcomes.size(), rep.answer_accuracy,
                rep.program_accuracy, rep.verified);
  }
  return kOk;
}

int cmd_kb_check(const Globals& g) {
  auto kb = load_knowledge(g);
  auto results = check_witnesses(kb);
  std::size_t bad = 0;
  for (const auto& r : results) {
    if (r.ok()) continue;
    ++bad;
    std::cout << r.op << " variant " << r.variant << ": residual " << fmt(r.residual)
              << (r.rules_hold ? "" : ", rules violated") << (r.detail.empty() ? "" : " -- " + r.detail) << "\n";
  }
  if (bad == 0) {
    std::cout << kb.size() << " operators, all witnesses satisfied\n";
    return kOk;
  }
  std::cout << kb.size() << " operators, " << bad << " witness failures\n";
  return kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geosym: symbolic geometry solver, verifier and benchmark harness"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--kb", g.kb_path, "Knowledge base JSONL file (default: built-in)");
  app.add_option("--seed", g.seed, "Global RNG seed");
  app.add_option("--budget", g.budget, "Evaluation budget per step");
  app.add_option("--tolerance", g.tolerance, "Answer tolerance REL[:ABS] (default 1e-3:5e-3)");
  app.add_flag("--no-verify", g.no_verify, "Disable verification during selection and evaluation");
  app.add_option("--verify-level", g.verify_level, "Verification level: none|form|calculability|semantic")
      ->check(CLI::IsMember({"none", "form", "calculability", "semantic"}));
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "structured"}));

  ProblemInput in;
  std::string program;
  auto add_problem = [&](CLI::App* sub) {
    sub->add_option("--record", in.record_path, "Dataset file; the first record (or --id) is used");
    sub->add_option("--id", in.id, "Record id inside --record");
    sub->add_option("--var", in.vars, "Problem variable Nk=VALUE (repeatable)");
  };

  auto* exec = app.add_subcommand("exec", "Execute a solution program and print the trace");
  add_problem(exec);
  exec->add_option("--program", program, "Program text (default: the record's ground truth)");

  auto* verify = app.add_subcommand("verify", "Verify a solution program level by level");
  add_problem(verify);
  verify->add_option("--program", program, "Program text (default: the record's ground truth)");

  auto* select = app.add_subcommand("select", "Pick the first verified candidate of a record");
  add_problem(select);

  auto* clauses = app.add_subcommand("clauses", "Render or parse textual clauses");
  clauses->require_subcommand(1);
  std::string render_path;
  bool plain = false;
  auto* render = clauses->add_subcommand("render", "Render the annotations of every record in a dataset");
  render->add_option("dataset", render_path, "Dataset file")->required();
  render->add_flag("--plain", plain, "ASCII glyphs");
  std::vector<std::string> clause_texts;
  auto* parse = clauses->add_subcommand("parse", "Parse clauses and tag their tokens");
  parse->add_option("clause", clause_texts, "Clause text")->required();

  auto* augment = app.add_subcommand("augment", "Emit augmented records in the dataset format");
  std::string aug_path;
  std::vector<std::string> strategies{"replace", "rotate", "transpose", "shuffle"};
  double prob = 0.5;
  std::size_t count = 1;
  augment->add_option("dataset", aug_path, "Dataset file")->required();
  augment->add_option("--strategies", strategies, "replace,rotate,transpose,shuffle")->delimiter(',');
  augment->add_option("--prob", prob, "Probability of each strategy")->check(CLI::Range(0.0, 1.0));
  augment->add_option("--count", count, "Augmented copies per record");

  auto* eval = app.add_subcommand("eval", "Evaluate a dataset of candidates");
  std::string eval_path, mode = "completion";
  bool lenient = false, top3_programs = false;
  double window = 0.05;
  std::size_t beam = 10;
  eval->add_option("dataset", eval_path, "Dataset file")->required();
  eval->add_option("--mode", mode, "completion|choice|top3")->check(CLI::IsMember({"completion", "choice", "top3"}));
  eval->add_flag("--lenient", lenient, "Skip malformed records");
  eval->add_flag("--top3-programs", top3_programs, "Score Top-3 by program match");
  eval->add_option("--choice-window", window, "Relative window for nearest-option matching");
  eval->add_option("--beam", beam, "Maximum candidates per record");

  auto* kb = app.add_subcommand("kb", "Knowledge base tools");
  kb->require_subcommand(1);
  auto* kb_check = kb->add_subcommand("check", "Check every formula against its witness");
  auto* kb_dump = kb->add_subcommand("dump", "Print the knowledge base as JSONL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*exec) return cmd_exec(g, in, program);
    if (*verify) return cmd_verify(g, in, program);
    if (*select) return cmd_select(g, in);
    if (*render) return cmd_clauses_render(g, render_path, plain);
    if (*parse) return cmd_clauses_parse(g, clause_texts);
    if (*augment) return cmd_augment(g, aug_path, strategies, prob, count);
    if (*eval) return cmd_eval(g, eval_path, mode, lenient, top3_programs, window, beam);
    if (*kb_check) return cmd_kb_check(g);
    if (*kb_dump) {
      std::cout << dump_kb(load_knowledge(g));
      return kOk;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const SyntaxError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const UnknownToken& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const LeadingOperand& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const TemplateMismatch& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
