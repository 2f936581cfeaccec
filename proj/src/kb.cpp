#include "geosym/kb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "geosym/errors.hpp"

namespace geosym {

using nlohmann::json;

bool TupleVariant::accepts(std::size_t arity) const {
  return variadic ? arity >= min_arity() : arity == min_arity();
}

std::vector<std::vector<std::size_t>> TupleVariant::groups_for(std::size_t arity) const {
  std::vector<std::vector<std::size_t>> out;
  if (variadic) {
    std::vector<std::size_t> g;
    for (std::size_t i = 0; i + 1 < arity; ++i) g.push_back(i);
    out.push_back(std::move(g));
    return out;
  }
  for (const auto& grp : commutative) {
    std::vector<std::size_t> g(grp.begin(), grp.end());
    std::sort(g.begin(), g.end());
    out.push_back(std::move(g));
  }
  return out;
}

std::optional<Equation> TupleVariant::formula_for(std::span<const Expr> operands) const {
  if (!formula) return std::nullopt;
  if (variadic) {
    // fold the combining operator of "a op b = c" over every operand but the last
    Expr::Kind op = formula->lhs.kind();
    Expr acc = operands[0];
    for (std::size_t i = 1; i + 1 < operands.size(); ++i) acc = Expr::binary(op, acc, operands[i]);
    return Equation{acc, operands.back()};
  }
  std::map<VarId, Expr> repl;
  for (std::size_t i = 0; i < placeholders.size() && i < operands.size(); ++i)
    repl[VarId::arg(placeholders[i])] = operands[i];
  return instantiate(*formula, repl);
}

std::vector<std::pair<Predicate, std::string>> TupleVariant::rules_for(std::span<const Expr> operands) const {
  std::map<VarId, Expr> repl;
  for (std::size_t i = 0; i < placeholders.size() && i < operands.size(); ++i)
    repl[VarId::arg(placeholders[i])] = operands[i];
  std::vector<std::pair<Predicate, std::string>> out;
  for (const auto& r : rules)
    if (const auto* v = std::get_if<ValueRule>(&r)) out.emplace_back(instantiate(v->predicate, repl), v->text);
  return out;
}

void KnowledgeBase::add(KnowledgeTuple tuple) {
  if (is_operator(tuple.op)) throw DuplicateOperator(tuple.op);
  for (const auto& a : tuple.aliases)
    if (is_operator(a) || a == tuple.op) throw DuplicateOperator(a);
  for (const auto& a : tuple.aliases) alias_[a] = tuple.op;
  std::string name = tuple.op;
  tuples_.emplace(std::move(name), std::move(tuple));
}

const KnowledgeTuple* KnowledgeBase::base_search(std::string_view name) const {
  if (auto it = tuples_.find(name); it != tuples_.end()) return &it->second;
  if (auto it = alias_.find(name); it != alias_.end()) return &tuples_.find(it->second)->second;
  return nullptr;
}

const TupleVariant* match_variant(const KnowledgeTuple& tuple, std::size_t arity) {
  for (const auto& v : tuple.variants)
    if (!v.variadic && v.accepts(arity)) return &v;
  for (const auto& v : tuple.variants)
    if (v.variadic && v.accepts(arity)) return &v;
  return nullptr;
}

// ---------------------------------------------------------------------------
// File format

namespace {

template <class F>
auto field(std::size_t line, const std::string& name, F&& f) {
  try {
    return f();
  } catch (const FormatError&) {
    throw;
  } catch (const json::exception& e) {
    throw FormatError(line, name, e.what());
  } catch (const Error& e) {
    throw FormatError(line, name, e.what());
  }
}

TupleVariant parse_variant(const json& j, std::size_t line, const std::string& where) {
  TupleVariant v;
  if (!j.is_object()) throw FormatError(line, where, "expected object");
  if (!j.contains("operands")) throw FormatError(line, where + ".operands", "missing");
  field(line, where + ".operands", [&] {
    for (const auto& p : j.at("operands")) {
      auto s = p.get<std::string>();
      if (s.size() != 1 || s[0] < 'a' || s[0] > 'z') throw FormatError(line, where + ".operands", "bad placeholder '" + s + "'");
      if (std::find(v.placeholders.begin(), v.placeholders.end(), s[0]) != v.placeholders.end())
        throw FormatError(line, where + ".operands", "repeated placeholder '" + s + "'");
      v.placeholders.push_back(s[0]);
    }
    return 0;
  });
  std::set<VarId> declared;
  for (char c : v.placeholders) declared.insert(VarId::arg(c));
  auto check_refs = [&](const std::set<VarId>& used, const std::string& f) {
    for (VarId u : used)
      if (!declared.count(u)) throw FormatError(line, f, "undeclared placeholder '" + u.str() + "'");
  };

  if (j.contains("formula") && !j.at("formula").is_null()) {
    v.formula = field(line, where + ".formula", [&] { return parse_equation(j.at("formula").get<std::string>()); });
    check_refs(free_vars(*v.formula), where + ".formula");
  }
  v.variadic = j.value("variadic", false);
  if (v.variadic) {
    if (!v.formula || v.placeholders.size() != 3 ||
        (v.formula->lhs.kind() != Expr::Kind::Add && v.formula->lhs.kind() != Expr::Kind::Mul))
      throw FormatError(line, where + ".variadic", "variadic variants need a formula 'a + b = c' or 'a * b = c'");
  }
  if (j.contains("commutative")) {
    field(line, where + ".commutative", [&] {
      std::set<int> seen;
      for (const auto& g : j.at("commutative")) {
        auto grp = g.get<std::vector<int>>();
        for (int i : grp) {
          if (i < 0 || static_cast<std::size_t>(i) >= v.placeholders.size())
            throw FormatError(line, where + ".commutative", "index out of range");
          if (!seen.insert(i).second) throw FormatError(line, where + ".commutative", "groups overlap");
        }
        v.commutative.push_back(std::move(grp));
      }
      return 0;
    });
  }
  if (j.contains("rules")) {
    for (const auto& r : j.at("rules")) {
      if (r.is_string()) {
        auto text = r.get<std::string>();
        auto pred = field(line, where + ".rules", [&] { return parse_predicate(text); });
        check_refs(free_vars(pred), where + ".rules");
        v.rules.push_back(ValueRule{std::move(pred), text});
      } else if (r.is_object() && r.contains("relation")) {
        v.rules.push_back(RelationalRule{r.at("relation").get<std::string>(), r.value("description", "")});
      } else {
        throw FormatError(line, where + ".rules", "rule must be a string or {\"relation\": ...}");
      }
    }
    if (v.variadic && std::any_of(v.rules.begin(), v.rules.end(), [](const auto& r) { return std::holds_alternative<ValueRule>(r); }))
      throw FormatError(line, where + ".rules", "variadic variants carry no value rules");
  }
  if (j.contains("witness")) {
    field(line, where + ".witness", [&] {
      for (const auto& [k, val] : j.at("witness").items()) {
        if (k.size() != 1 || !declared.count(VarId::arg(k[0])))
          throw FormatError(line, where + ".witness", "unknown placeholder '" + k + "'");
        auto text = val.is_string() ? val.get<std::string>() : val.dump();
        parse_expr(text);
        v.witness[k[0]] = text;
      }
      return 0;
    });
  }
  return v;
}

json variant_to_json(const TupleVariant& v) {
  json j;
  json ops = json::array();
  for (char c : v.placeholders) ops.push_back(std::string(1, c));
  j["operands"] = ops;
  j["formula"] = v.formula ? json(render(*v.formula)) : json(nullptr);
  j["commutative"] = v.commutative;
  json rules = json::array();
  for (const auto& r : v.rules) {
    if (const auto* vr = std::get_if<ValueRule>(&r)) rules.push_back(vr->text);
    else {
      const auto& rr = std::get<RelationalRule>(r);
      rules.push_back({{"relation", rr.tag}, {"description", rr.description}});
    }
  }
  j["rules"] = rules;
  j["variadic"] = v.variadic;
  json w = json::object();
  for (const auto& [k, val] : v.witness) w[std::string(1, k)] = val;
  j["witness"] = w;
  return j;
}

}  // namespace

KnowledgeTuple parse_tuple_record(std::string_view text, std::size_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(line, "", e.what());
  }
  if (!j.is_object()) throw FormatError(line, "", "expected a JSON object");
  KnowledgeTuple t;
  if (!j.contains("operator") || !j.at("operator").is_string()) throw FormatError(line, "operator", "missing or not a string");
  t.op = j.at("operator").get<std::string>();
  if (t.op.empty()) throw FormatError(line, "operator", "empty name");
  if (j.contains("aliases")) t.aliases = field(line, "aliases", [&] { return j.at("aliases").get<std::vector<std::string>>(); });
  if (!j.contains("variants") || !j.at("variants").is_array() || j.at("variants").empty())
    throw FormatError(line, "variants", "missing or empty");
  for (std::size_t i = 0; i < j.at("variants").size(); ++i)
    t.variants.push_back(parse_variant(j.at("variants")[i], line, "variants[" + std::to_string(i) + "]"));
  std::set<std::size_t> arities;
  for (const auto& v : t.variants)
    if (!v.variadic && !arities.insert(v.min_arity()).second)
      throw FormatError(line, "variants", "two variants share operand count " + std::to_string(v.min_arity()));
  return t;
}

KnowledgeBase parse_kb(std::istream& in) {
  KnowledgeBase kb;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos || text[first] == '#') continue;
    kb.add(parse_tuple_record(text, line));
  }
  return kb;
}

KnowledgeBase load_kb(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(0, "", "cannot open " + path.string());
  return parse_kb(in);
}

std::string dump_kb(const KnowledgeBase& kb) {
  std::ostringstream out;
  for (const auto& [name, t] : kb.tuples()) {
    json j;
    j["operator"] = t.op;
    j["aliases"] = t.aliases;
    json vs = json::array();
    for (const auto& v : t.variants) vs.push_back(variant_to_json(v));
    j["variants"] = vs;
    out << j.dump(-1, ' ', false) << '\n';
  }
  return out.str();
}

std::vector<WitnessResult> check_witnesses(const KnowledgeBase& kb) {
  std::vector<WitnessResult> out;
  for (const auto& [name, t] : kb.tuples()) {
    for (std::size_t i = 0; i < t.variants.size(); ++i) {
      const auto& v = t.variants[i];
      WitnessResult r;
      r.op = t.op;
      r.variant = i;
      if (!v.formula) {
        out.push_back(r);
        continue;
      }
      Assignment env;
      try {
        for (char p : v.placeholders) {
          auto it = v.witness.find(p);
          if (it == v.witness.end()) throw Error(std::string("no witness value for ") + p);
          env[VarId::arg(p)] = eval_expr(parse_expr(it->second), {});
        }
        r.residual = residual(*v.formula, env);
        for (const auto& rule : v.rules) {
          if (const auto* vr = std::get_if<ValueRule>(&rule); vr && !holds(vr->predicate, env)) {
            r.rules_hold = false;
            r.detail = "rule " + vr->text + " fails";
          }
        }
      } catch (const Error& e) {
        r.residual = std::numeric_limits<double>::infinity();
        r.detail = e.what();
      }
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace geosym
