#include "geosym/augment.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "geosym/clauses.hpp"
#include "geosym/errors.hpp"
#include "geosym/program.hpp"
#include "geosym/rng.hpp"

namespace geosym {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::TokenReplacement: return "replace";
    case Strategy::ConnectionRotation: return "rotate";
    case Strategy::RepresentationTransposition: return "transpose";
    case Strategy::ClausesShuffle: return "shuffle";
  }
  return "replace";
}

std::optional<Strategy> strategy_from_string(std::string_view s) {
  for (Strategy x : {Strategy::TokenReplacement, Strategy::ConnectionRotation, Strategy::RepresentationTransposition,
                     Strategy::ClausesShuffle})
    if (to_string(x) == s) return x;
  return std::nullopt;
}

namespace {

constexpr std::string_view kAngle = "∠";

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_lower_letter(std::string_view s) { return s.size() == 1 && s[0] >= 'a' && s[0] <= 'z'; }

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::string join_ws(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& t : v) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

bool non_ascii(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) >= 0x80; });
}

// Every text field of a record that may mention points, angle IDs or args.
template <class F>
void for_each_text(ProblemRecord& r, F&& f) {
  for (auto& c : r.structural_clauses) f(c);
  for (auto& c : r.semantic_clauses) f(c);
  f(r.problem_text);
  for (auto& [v, text] : r.variables) f(text);
}

template <class F>
void for_each_program(ProblemRecord& r, F&& f) {
  for (auto& c : r.candidates) f(c.program);
  f(r.ground_truth_program);
}

struct Symbols {
  std::set<char> points;
  std::set<std::string> angle_ids;
  std::set<char> args;
  std::set<char> lower_used;  // any single lowercase letter, whatever its role
};

Symbols collect(const ProblemRecord& rec) {
  Symbols s;
  ProblemRecord r = rec;
  for_each_text(r, [&](std::string& text) {
    for (const auto& t : tag_tokens(text)) {
      if (t.tag == Tag::Point) s.points.insert(t.token[0]);
      else if (t.tag == Tag::AngleId) s.angle_ids.insert(t.token.substr(kAngle.size()));
      else if (t.tag == Tag::Arg) s.args.insert(t.token[0]);
      if (is_lower_letter(t.token)) s.lower_used.insert(t.token[0]);
    }
  });
  for_each_program(r, [&](std::string& prog) {
    for (const auto& t : split_ws(prog))
      if (is_lower_letter(t)) {
        s.args.insert(t[0]);
        s.lower_used.insert(t[0]);
      }
  });
  for (const auto& f : rec.annotations) {
    for (std::size_t i = 0; i < f.refs.size(); ++i) {
      const auto& ref = f.refs[i];
      if (f.kind == FactKind::AngleEq && is_digits(ref)) s.angle_ids.insert(ref);
      for (char c : ref)
        if (c >= 'A' && c <= 'Z') s.points.insert(c);
      if (is_lower_letter(ref)) s.lower_used.insert(ref[0]);
    }
  }
  return s;
}

template <class K>
K mapped(const std::map<K, K>& m, const K& k) {
  auto it = m.find(k);
  return it == m.end() ? k : it->second;
}

std::string rewrite_text(std::string_view text, const SymbolMap& m) {
  std::string out;
  std::size_t copied = 0;
  for (const auto& t : tag_tokens(text)) {
    std::string repl;
    if (t.tag == Tag::Point && m.points.count(t.token[0])) repl = std::string(1, m.points.at(t.token[0]));
    else if (t.tag == Tag::AngleId && m.angle_ids.count(t.token.substr(kAngle.size())))
      repl = std::string(kAngle) + m.angle_ids.at(t.token.substr(kAngle.size()));
    else if (t.tag == Tag::Arg && m.args.count(t.token[0])) repl = std::string(1, m.args.at(t.token[0]));
    else continue;
    out += text.substr(copied, t.offset - copied);
    out += repl;
    copied = t.offset + t.token.size();
  }
  out += text.substr(copied);
  return out;
}

std::string rewrite_program(std::string_view prog, const SymbolMap& m) {
  auto toks = split_ws(prog);
  for (auto& t : toks)
    if (is_lower_letter(t)) t = std::string(1, mapped(m.args, t[0]));
  return join_ws(toks);
}

template <class K>
void check_injective(const std::set<K>& existing, const std::map<K, K>& m, const char* what) {
  std::set<K> image;
  for (const auto& k : existing)
    if (!image.insert(mapped(m, k)).second) throw Error(std::string("renaming merges two ") + what);
}

}  // namespace

ProblemRecord token_replacement_with(const ProblemRecord& rec, const SymbolMap& m) {
  if (m.empty()) return rec;
  Symbols s = collect(rec);
  check_injective(s.points, m.points, "points");
  check_injective(s.angle_ids, m.angle_ids, "angle IDs");
  check_injective(s.args, m.args, "arguments");

  ProblemRecord r = rec;
  for_each_text(r, [&](std::string& text) { text = rewrite_text(text, m); });
  for_each_program(r, [&](std::string& prog) { prog = rewrite_program(prog, m); });
  for (auto& f : r.annotations) {
    for (std::size_t i = 0; i < f.refs.size(); ++i) {
      auto& ref = f.refs[i];
      if (f.kind == FactKind::AngleEq && is_digits(ref)) {
        ref = mapped(m.angle_ids, ref);
        continue;
      }
      for (char& c : ref)
        if (c >= 'A' && c <= 'Z') c = mapped(m.points, c);
    }
    if (f.value) f.value = rewrite_text(*f.value, m);
  }
  return r;
}

ProblemRecord token_replacement(const ProblemRecord& rec, std::uint64_t seed, double p) {
  Symbols s = collect(rec);
  Rng rng(seed);
  SymbolMap m;

  std::vector<char> point_pool;
  for (char c = 'A'; c <= 'Z'; ++c)
    if (!s.points.count(c) && c != 'N') point_pool.push_back(c);
  std::vector<std::string> angle_pool;
  for (int k = 1; k < 100; ++k)
    if (!s.angle_ids.count(std::to_string(k))) angle_pool.push_back(std::to_string(k));
  // 'e' would read as an exponent in values like 2e+4
  std::vector<char> arg_pool;
  for (char c = 'a'; c <= 'z'; ++c)
    if (!s.lower_used.count(c) && !s.args.count(c) && c != 'm' && c != 'l' && c != 'e') arg_pool.push_back(c);

  auto draw = [&](auto& pool, const char* what) {
    if (pool.empty()) throw SymbolExhausted(std::string("no unused ") + what + " left");
    auto i = rng.below(pool.size());
    auto v = pool[i];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
    return v;
  };

  for (char c : s.points)
    if (rng.chance(p)) m.points[c] = draw(point_pool, "point names");
  std::vector<std::string> ids(s.angle_ids.begin(), s.angle_ids.end());
  std::sort(ids.begin(), ids.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  for (const auto& id : ids)
    if (rng.chance(p)) m.angle_ids[id] = draw(angle_pool, "angle IDs");
  for (char c : s.args)
    if (rng.chance(p)) m.args[c] = draw(arg_pool, "argument letters");
  return token_replacement_with(rec, m);
}

// ---------------------------------------------------------------------------

std::vector<std::string> dihedral(const std::vector<std::string>& pts, std::size_t k, bool reflect) {
  std::size_t n = pts.size();
  std::vector<std::string> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = pts[reflect ? (k + n - i % n) % n : (k + i) % n];
  return out;
}

namespace {

std::string rotate_with(std::string_view text, const std::function<std::pair<std::size_t, bool>(FactKind, std::size_t)>& pick) {
  Clause c;
  try {
    c = parse_clause(text);
  } catch (const TemplateMismatch&) {
    return std::string(text);
  }
  Fact f = c.fact;
  switch (f.kind) {
    case FactKind::PointsOnLine: {
      if (pick(f.kind, f.refs.size()).second) std::reverse(f.refs.begin(), f.refs.end());
      break;
    }
    case FactKind::NamedLinePoints: {
      if (pick(f.kind, f.refs.size() - 1).second) std::reverse(f.refs.begin() + 1, f.refs.end());
      break;
    }
    case FactKind::PointsOnCircle: {
      std::vector<std::string> pts(f.refs.begin() + 1, f.refs.end());
      auto [k, refl] = pick(f.kind, pts.size());
      pts = dihedral(pts, k, refl);
      std::copy(pts.begin(), pts.end(), f.refs.begin() + 1);
      break;
    }
    default: return std::string(text);
  }
  return render_fact(f, non_ascii(text) ? GlyphStyle::Unicode : GlyphStyle::Plain);
}

}  // namespace

std::string rotate_clause(std::string_view clause, std::size_t k, bool reflect) {
  return rotate_with(clause, [&](FactKind, std::size_t) { return std::make_pair(k, reflect); });
}

ProblemRecord connection_rotation(const ProblemRecord& rec, std::uint64_t seed) {
  Rng rng(seed);
  ProblemRecord r = rec;
  for (auto& c : r.structural_clauses) {
    c = rotate_with(c, [&](FactKind kind, std::size_t n) {
      std::size_t k = kind == FactKind::PointsOnCircle && n > 0 ? rng.below(n) : 0;
      bool refl = rng.below(2) == 1;
      return std::make_pair(k, refl);
    });
  }
  return r;
}

// ---------------------------------------------------------------------------

std::string transpose_text(std::string_view s, bool all, std::uint64_t seed) {
  Rng rng(seed);
  std::string out(s);
  auto is_letter = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  auto preceded_by = [&](std::size_t i, std::string_view p) { return i >= p.size() && s.substr(i - p.size(), p.size()) == p; };
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_letter(s[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && is_letter(s[j])) ++j;
    std::string_view run = s.substr(i, j - i);
    bool upper = std::all_of(run.begin(), run.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
    bool named = preceded_by(i, "∠") || preceded_by(i, "⌒") || preceded_by(i, "angle(") || preceded_by(i, "arc(");
    bool followed_by_digit = j < s.size() && s[j] >= '0' && s[j] <= '9';
    if (upper && !followed_by_digit && (run.size() == 2 || (run.size() == 3 && named)) && (all || rng.chance(0.5)))
      std::reverse(out.begin() + static_cast<std::ptrdiff_t>(i), out.begin() + static_cast<std::ptrdiff_t>(j));
    i = j;
  }
  return out;
}

ProblemRecord representation_transposition(const ProblemRecord& rec, std::uint64_t seed) {
  Rng rng(seed);
  ProblemRecord r = rec;
  for (auto& c : r.semantic_clauses) c = transpose_text(c, false, rng.next());
  r.problem_text = transpose_text(r.problem_text, false, rng.next());
  return r;
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  return s.substr(b);
}

// Problem variables inside one commutative group go back to ascending index.
std::string reorder_problem_vars(const std::string& text, const KnowledgeBase& kb) {
  SolutionProgram p;
  try {
    p = parse_program(text, kb);
  } catch (const Error&) {
    return text;
  }
  for (auto& step : p.steps) {
    const auto* t = kb.base_search(step.op);
    if (!t) continue;
    const auto* v = match_variant(*t, step.operands.size());
    if (!v) continue;
    for (const auto& group : v->groups_for(step.operands.size())) {
      std::vector<std::size_t> slots;
      for (auto i : group)
        if (step.operands[i].kind == TokenKind::ProblemVar) slots.push_back(i);
      std::vector<ProgramToken> vals;
      for (auto i : slots) vals.push_back(step.operands[i]);
      std::stable_sort(vals.begin(), vals.end(), operand_before);
      for (std::size_t k = 0; k < slots.size(); ++k) step.operands[slots[k]] = vals[k];
    }
  }
  return render_program(p);
}

}  // namespace

ProblemRecord clauses_shuffle_with(const ProblemRecord& rec, const std::vector<std::size_t>& perm,
                                   const KnowledgeBase& kb) {
  std::size_t n = rec.semantic_clauses.size();
  std::vector<std::size_t> check = perm;
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < check.size(); ++i)
    if (check[i] != i || check.size() != n) throw Error("not a permutation of the semantic clauses");

  auto old = assign_problem_vars(rec.semantic_clauses, rec.problem_text);
  if (!rec.variables.empty()) {
    bool same = rec.variables.size() == old.declarations.size();
    for (std::size_t i = 0; same && i < rec.variables.size(); ++i)
      same = rec.variables[i].first == old.declarations[i].first &&
             trim(rec.variables[i].second) == trim(old.declarations[i].second);
    if (!same) throw Error("record variables do not follow the clause reading order");
  }

  std::vector<std::string> clauses(n);
  for (std::size_t i = 0; i < n; ++i) clauses[i] = rec.semantic_clauses[perm[i]];
  auto fresh = assign_problem_vars(clauses, rec.problem_text);

  // old clause index -> new clause index
  std::vector<int> moved(n);
  for (std::size_t i = 0; i < n; ++i) moved[perm[i]] = static_cast<int>(i);
  std::map<int, int> remap;  // old N index -> new N index
  std::vector<std::size_t> old_text, new_text;
  for (std::size_t j = 0; j < old.sources.size(); ++j)
    if (old.sources[j] < 0) old_text.push_back(j);
  for (std::size_t j = 0; j < fresh.sources.size(); ++j)
    if (fresh.sources[j] < 0) new_text.push_back(j);
  for (std::size_t j = 0; j < old.sources.size(); ++j) {
    if (old.sources[j] < 0) continue;
    int target = moved[static_cast<std::size_t>(old.sources[j])];
    for (std::size_t k = 0; k < fresh.sources.size(); ++k)
      if (fresh.sources[k] == target) remap[static_cast<int>(j)] = static_cast<int>(k);
  }
  for (std::size_t t = 0; t < old_text.size() && t < new_text.size(); ++t)
    remap[static_cast<int>(old_text[t])] = static_cast<int>(new_text[t]);

  ProblemRecord r = rec;
  bool annotated = std::any_of(rec.semantic_clauses.begin(), rec.semantic_clauses.end(),
                               [](const std::string& c) { return c != strip_annotations(c); });
  r.semantic_clauses = annotated ? fresh.semantic_clauses : clauses;
  if (rec.problem_text != strip_annotations(rec.problem_text)) r.problem_text = fresh.problem_text;
  if (!rec.variables.empty()) r.variables = fresh.declarations;

  for_each_program(r, [&](std::string& prog) {
    if (prog.empty()) return;
    auto toks = split_ws(prog);
    for (auto& t : toks) {
      auto v = VarId::parse(t);
      if (v && v->kind == VarKind::ProblemVar && remap.count(v->index)) t = VarId::problem(remap[v->index]).str();
    }
    prog = reorder_problem_vars(join_ws(toks), kb);
  });
  return r;
}

ProblemRecord clauses_shuffle(const ProblemRecord& rec, std::uint64_t seed, const KnowledgeBase& kb) {
  Rng rng(seed);
  std::vector<std::size_t> perm(rec.semantic_clauses.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  return clauses_shuffle_with(rec, perm, kb);
}

ProblemRecord compose(const ProblemRecord& rec, const AugmentSpec& spec, const KnowledgeBase& kb) {
  Rng rng(spec.seed);
  ProblemRecord r = rec;
  auto fires = [&](Strategy s) {
    auto it = spec.probability.find(s);
    return it != spec.probability.end() && rng.chance(it->second);
  };
  if (fires(Strategy::TokenReplacement)) r = token_replacement(r, rng.next());
  if (fires(Strategy::ConnectionRotation)) r = connection_rotation(r, rng.next());
  if (fires(Strategy::RepresentationTransposition)) r = representation_transposition(r, rng.next());
  if (fires(Strategy::ClausesShuffle)) r = clauses_shuffle(r, rng.next(), kb);
  return r;
}

}  // namespace geosym
