#include "geosym/dataset.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "geosym/errors.hpp"

namespace geosym {

using nlohmann::json;

namespace {

[[noreturn]] void bad(std::size_t line, const std::string& id, const std::string& field, const std::string& msg) {
  throw FormatError(line, field, (id.empty() ? std::string("record") : "record '" + id + "'") + ": " + msg);
}

std::vector<std::string> strings(const json& j, std::size_t line, const std::string& id, const char* field) {
  if (!j.contains(field)) return {};
  const auto& v = j.at(field);
  if (!v.is_array()) bad(line, id, field, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) bad(line, id, field, "expected an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace

ProblemRecord parse_record(std::string_view text, std::size_t line, std::size_t beam_size) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(line, "", "", e.what());
  }
  if (!j.is_object()) bad(line, "", "", "expected a JSON object");
  ProblemRecord r;
  if (!j.contains("id") || !j.at("id").is_string()) bad(line, "", "id", "missing or not a string");
  r.id = j.at("id").get<std::string>();
  const std::string& id = r.id;

  if (j.contains("annotations")) {
    if (!j.at("annotations").is_array()) bad(line, id, "annotations", "expected an array");
    for (const auto& a : j.at("annotations")) {
      Fact f;
      auto kind = a.is_object() && a.contains("kind") && a.at("kind").is_string()
                      ? fact_kind_from_string(a.at("kind").get<std::string>())
                      : std::nullopt;
      if (!kind) bad(line, id, "annotations", "unknown or missing kind");
      f.kind = *kind;
      f.refs = strings(a, line, id, "refs");
      if (a.contains("value") && !a.at("value").is_null()) {
        const auto& v = a.at("value");
        f.value = v.is_string() ? v.get<std::string>() : v.dump();
      }
      try {
        check_fact(f);
      } catch (const KindError& e) {
        bad(line, id, "annotations", e.what());
      }
      r.annotations.push_back(std::move(f));
    }
  }
  r.structural_clauses = strings(j, line, id, "structural_clauses");
  r.semantic_clauses = strings(j, line, id, "semantic_clauses");
  if (j.contains("problem_text")) {
    if (!j.at("problem_text").is_string()) bad(line, id, "problem_text", "expected a string");
    r.problem_text = j.at("problem_text").get<std::string>();
  }

  if (j.contains("variables")) {
    const auto& vars = j.at("variables");
    if (!vars.is_object()) bad(line, id, "variables", "expected an object");
    for (const auto& [k, v] : vars.items()) {
      auto var = VarId::parse(k);
      if (!var || var->kind != VarKind::ProblemVar) {
        if (k.size() > 1 && k[0] == 'N') throw IndexOutOfRange("record '" + id + "': problem variable " + k);
        bad(line, id, "variables", "'" + k + "' is not a problem variable");
      }
      std::string value = v.is_string() ? v.get<std::string>() : v.dump();
      try {
        parse_expr(value);
      } catch (const Error& e) {
        bad(line, id, "variables", k + ": " + e.what());
      }
      r.variables.emplace_back(*var, value);
    }
    std::sort(r.variables.begin(), r.variables.end());
  } else {
    try {
      r.variables = assign_problem_vars(r.semantic_clauses, r.problem_text).declarations;
    } catch (const Error& e) {
      bad(line, id, "semantic_clauses", e.what());
    }
  }

  if (j.contains("candidates")) {
    const auto& cs = j.at("candidates");
    if (!cs.is_array()) bad(line, id, "candidates", "expected an array");
    if (cs.size() > beam_size)
      bad(line, id, "candidates", std::to_string(cs.size()) + " candidates exceed the beam size " + std::to_string(beam_size));
    for (const auto& c : cs) {
      if (!c.is_object() || !c.contains("program") || !c.at("program").is_string())
        bad(line, id, "candidates", "each candidate needs a program string");
      CandidateText ct;
      ct.program = c.at("program").get<std::string>();
      ct.confidence = c.value("confidence", 0.0);
      if (!std::isfinite(ct.confidence) || ct.confidence < 0 || ct.confidence > 1)
        bad(line, id, "candidates", "confidence must lie in [0, 1]");
      r.candidates.push_back(std::move(ct));
    }
  }
  if (j.contains("ground_truth_program")) {
    if (!j.at("ground_truth_program").is_string()) bad(line, id, "ground_truth_program", "expected a string");
    r.ground_truth_program = j.at("ground_truth_program").get<std::string>();
  }
  if (j.contains("answer") && !j.at("answer").is_null()) {
    if (!j.at("answer").is_number()) bad(line, id, "answer", "expected a number");
    r.answer = j.at("answer").get<double>();
  }
  if (j.contains("choices") && !j.at("choices").is_null()) {
    const auto& ch = j.at("choices");
    if (!ch.is_array() || ch.size() != 4) bad(line, id, "choices", "expected exactly 4 numbers");
    std::vector<double> c;
    for (const auto& x : ch) {
      if (!x.is_number()) bad(line, id, "choices", "expected exactly 4 numbers");
      c.push_back(x.get<double>());
    }
    r.choices = c;
  }
  return r;
}

std::string record_to_json(const ProblemRecord& r) {
  json j;
  j["id"] = r.id;
  if (!r.annotations.empty()) {
    json anns = json::array();
    for (const auto& f : r.annotations) {
      json a{{"kind", std::string(to_string(f.kind))}, {"refs", f.refs}};
      if (f.value) a["value"] = *f.value;
      anns.push_back(a);
    }
    j["annotations"] = anns;
  }
  j["structural_clauses"] = r.structural_clauses;
  j["semantic_clauses"] = r.semantic_clauses;
  j["problem_text"] = r.problem_text;
  json vars = json::object();
  for (const auto& [v, text] : r.variables) vars[v.str()] = text;
  j["variables"] = vars;
  json cs = json::array();
  for (const auto& c : r.candidates) cs.push_back({{"program", c.program}, {"confidence", c.confidence}});
  j["candidates"] = cs;
  j["ground_truth_program"] = r.ground_truth_program;
  if (r.answer) j["answer"] = *r.answer;
  if (r.choices) j["choices"] = *r.choices;
  return j.dump(-1, ' ', false);
}

LoadResult read_dataset(std::istream& in, const LoadOptions& opts) {
  LoadResult out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    try {
      out.records.push_back(parse_record(text, line, opts.beam_size));
    } catch (const Error& e) {
      if (!opts.lenient) throw;
      out.skipped.push_back("line " + std::to_string(line) + ": " + e.what());
    }
  }
  return out;
}

LoadResult load_dataset(const std::filesystem::path& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw FormatError(0, "", "cannot open " + path.string());
  return read_dataset(in, opts);
}

void write_dataset(std::ostream& out, const std::vector<ProblemRecord>& records) {
  for (const auto& r : records) out << record_to_json(r) << '\n';
}

}  // namespace geosym
