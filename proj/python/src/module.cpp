#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geosym/augment.hpp"
#include "geosym/dataset.hpp"
#include "geosym/errors.hpp"
#include "geosym/evaluate.hpp"
#include "geosym/verifier.hpp"

namespace py = pybind11;
using namespace geosym;

namespace {

Declarations declarations(const std::map<std::string, std::string>& vars) {
  Declarations d;
  for (const auto& [k, v] : vars) {
    auto id = VarId::parse(k);
    if (!id || id->kind != VarKind::ProblemVar) throw Error("not a problem variable: " + k);
    d.emplace_back(*id, v);
  }
  return d;
}

py::dict step_dict(const StepRecord& s) {
  py::dict d;
  d["index"] = s.index;
  d["op"] = s.op;
  d["status"] = std::string(to_string(s.status));
  d["reason"] = std::string(to_string(s.reason));
  std::map<std::string, double> bound;
  for (const auto& [v, x] : s.bound) bound[v.str()] = x;
  d["bound"] = bound;
  d["detail"] = s.detail;
  return d;
}

py::dict report_dict(const VerificationReport& rep) {
  py::list verdicts;
  for (const auto& v : rep.verdicts) {
    py::dict d;
    d["index"] = v.index;
    d["passed"] = v.passed;
    d["level"] = std::string(to_string(v.failed_level));
    d["reason"] = v.reason;
    d["detail"] = v.detail;
    verdicts.append(d);
  }
  py::dict d;
  d["passed"] = rep.passed;
  d["answer"] = rep.answer;
  d["verdicts"] = verdicts;
  return d;
}

Level level(const std::string& s) {
  auto l = level_from_string(s);
  if (!l) throw Error("unknown level: " + s);
  return *l;
}

py::dict execute(const std::map<std::string, std::string>& vars, const std::string& program, std::uint64_t seed,
                 std::uint64_t budget) {
  ExecOptions o;
  o.seed = seed;
  o.budget = budget;
  auto out = execute_program(declarations(vars), parse_program(program), builtin_kb(), o);
  py::list trace;
  for (const auto& s : out.trace) trace.append(step_dict(s));
  py::dict d;
  d["status"] = std::string(to_string(out.status));
  d["answer"] = get_answer(out);
  d["trace"] = trace;
  return d;
}

py::dict verify(const std::map<std::string, std::string>& vars, const std::string& program, const std::string& lvl,
                bool only) {
  VerifyOptions o;
  o.level = level(lvl);
  o.mode = only ? CheckMode::Only : CheckMode::Cumulative;
  return report_dict(verify_program(declarations(vars), parse_program(program), builtin_kb(), o));
}

std::optional<std::size_t> select_chosen(const std::string& record_json, const std::string& lvl) {
  auto r = parse_record(record_json);
  VerifyOptions o;
  o.level = level(lvl);
  return select_solution(r, parse_candidates(r), builtin_kb(), o).chosen;
}

py::dict clause(const std::string& text) {
  auto c = parse_clause(text);
  py::dict d;
  d["text"] = c.text;
  d["kind"] = std::string(to_string(c.kind));
  d["category"] = c.category == ClauseCategory::Structural ? "structural" : "semantic";
  d["refs"] = c.fact.refs;
  d["value"] = c.fact.value;
  return d;
}

std::string render_kind(const std::string& kind, const std::vector<std::string>& refs,
                   const std::optional<std::string>& value, bool plain) {
  auto k = fact_kind_from_string(kind);
  if (!k) throw Error("unknown fact kind: " + kind);
  return render_fact(Fact{*k, refs, value}, plain ? GlyphStyle::Plain : GlyphStyle::Unicode);
}

std::vector<std::pair<std::string, std::string>> tags(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& t : tag_tokens(text)) out.emplace_back(t.token, std::string(to_string(t.tag)));
  return out;
}

std::string augment(const std::string& record_json, const std::map<std::string, double>& probability,
                    std::uint64_t seed) {
  AugmentSpec spec;
  spec.seed = seed;
  for (const auto& [name, p] : probability) {
    auto s = strategy_from_string(name);
    if (!s) throw Error("unknown strategy: " + name);
    spec.probability[*s] = p;
  }
  return record_to_json(compose(parse_record(record_json), spec));
}

py::dict evaluate_records(const std::vector<std::string>& records_json, const std::string& mode, bool verify_on,
                          std::uint64_t seed) {
  std::vector<ProblemRecord> records;
  for (std::size_t i = 0; i < records_json.size(); ++i) records.push_back(parse_record(records_json[i], i + 1));
  EvalConfig cfg;
  auto m = eval_mode_from_string(mode);
  if (!m) throw Error("unknown mode: " + mode);
  cfg.mode = *m;
  cfg.verify = verify_on;
  cfg.seed = seed;
  auto rep = evaluate(records, builtin_kb(), cfg);
  py::list outcomes;
  for (const auto& o : rep.outcomes) {
    py::dict d;
    d["id"] = o.id;
    d["chosen"] = o.chosen;
    d["verified"] = o.verified;
    d["answer"] = o.answer;
    d["correct_answer"] = o.correct_answer;
    d["correct_program"] = o.correct_program;
    outcomes.append(d);
  }
  py::dict d;
  d["mode"] = std::string(to_string(rep.mode));
  d["answer_accuracy"] = rep.answer_accuracy;
  d["program_accuracy"] = rep.program_accuracy;
  d["outcomes"] = outcomes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_geosym, m) {
  m.doc() = "Bindings for the geosym solver, verifier and augmentation tools";

  py::register_exception<Error>(m, "GeosymError", PyExc_ValueError);

  m.def("normalize_program", [](const std::string& p) { return render_program(normalize_program(parse_program(p))); },
        py::arg("program"));
  m.def("program_equal",
        [](const std::string& a, const std::string& b) { return program_equal(parse_program(a), parse_program(b)); },
        py::arg("a"), py::arg("b"));
  m.def("execute", &execute, py::arg("variables"), py::arg("program"), py::arg("seed") = 0,
        py::arg("budget") = 1'000'000);
  m.def("verify", &verify, py::arg("variables"), py::arg("program"), py::arg("level") = "semantic",
        py::arg("only") = false);
  m.def("select", &select_chosen, py::arg("record_json"), py::arg("level") = "semantic");
  m.def("parse_clause", &clause, py::arg("text"));
  m.def("render_fact", &render_kind, py::arg("kind"), py::arg("refs"), py::arg("value") = std::nullopt,
        py::arg("plain") = false);
  m.def("tag_tokens", &tags, py::arg("text"));
  m.def(
      "assign_problem_vars",
      [](const std::vector<std::string>& clauses, const std::string& text) {
        auto a = assign_problem_vars(clauses, text);
        std::map<std::string, std::string> vars;
        for (const auto& [v, s] : a.declarations) vars[v.str()] = s;
        return py::make_tuple(a.semantic_clauses, a.problem_text, vars);
      },
      py::arg("semantic_clauses"), py::arg("problem_text"));
  m.def("augment", &augment, py::arg("record_json"), py::arg("probability"), py::arg("seed") = 0);
  m.def("transpose_text", [](const std::string& t) { return transpose_text(t); }, py::arg("text"));
  m.def("evaluate", &evaluate_records, py::arg("records_json"), py::arg("mode") = "completion",
        py::arg("verify") = true, py::arg("seed") = 0);
  m.def("kb_check", [] {
    std::vector<std::string> failures;
    for (const auto& r : check_witnesses(builtin_kb()))
      if (!r.ok()) failures.push_back(r.op + "/" + std::to_string(r.variant));
    return py::make_tuple(builtin_kb().size(), failures);
  });
}
