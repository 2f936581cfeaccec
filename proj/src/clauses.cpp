#include "geosym/clauses.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

#include "geosym/errors.hpp"

namespace geosym {

namespace {

constexpr std::string_view kCircle = "⊙";    // ⊙
constexpr std::string_view kAngle = "∠";     // ∠
constexpr std::string_view kArc = "⌒";       // ⌒
constexpr std::string_view kPerp = "⊥";      // ⊥
constexpr std::string_view kParallel = "∥";  // ∥

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool all_of(std::string_view s, bool (*pred)(char)) {
  return !s.empty() && std::all_of(s.begin(), s.end(), pred);
}

bool is_point(std::string_view s) { return s.size() == 1 && is_upper(s[0]); }
bool is_line_name(std::string_view s) { return s.size() == 1 && is_lower(s[0]); }
bool is_segment(std::string_view s) { return s.size() == 2 && all_of(s, is_upper); }
bool is_arc(std::string_view s) { return (s.size() == 2 || s.size() == 3) && all_of(s, is_upper); }
bool is_angle(std::string_view s) { return ((s.size() == 1 || s.size() == 3) && all_of(s, is_upper)) || all_of(s, is_digit); }
bool is_line_ref(std::string_view s) { return is_segment(s) || is_line_name(s); }

std::string join(const std::vector<std::string>& v, std::string_view sep, std::size_t from = 0) {
  std::string out;
  for (std::size_t i = from; i < v.size(); ++i) {
    if (i > from) out += sep;
    out += v[i];
  }
  return out;
}

bool has_value(FactKind k) {
  return k == FactKind::SegEq || k == FactKind::ArcLenEq || k == FactKind::AngleEq || k == FactKind::ArcDegEq;
}

std::string describe(const Fact& f) {
  std::string s(to_string(f.kind));
  s += "(" + join(f.refs, ", ");
  if (f.value) s += "; " + *f.value;
  return s + ")";
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

const std::vector<std::string>& template_examples() {
  static const std::vector<std::string> ex = {
      "line A B C",         "line k lieson A B C", "⊙O lieson E F G",
      "AB = CD = 3x+y",     "l ⌒EF = 5π", "m ∠A = m ∠1 = 30",
      "m ⌒EFG = 270",  "line k ∥ line m ∥ EF", "EF ⊥ GH on C",
  };
  return ex;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

// Surround '=' and the binary relation glyphs with spaces.
std::string space_out(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '=') {
      out += " = ";
      ++i;
    } else if (s.substr(i, kPerp.size()) == kPerp || s.substr(i, kParallel.size()) == kParallel) {
      out += ' ';
      out += s.substr(i, 3);
      out += ' ';
      i += 3;
    } else {
      out += s[i++];
    }
  }
  return out;
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

// "∠ABC" / "angle(ABC)" style member after a measure prefix; returns the inner name.
std::optional<std::string> unwrap(std::string_view tok, std::string_view glyph, std::string_view word) {
  if (starts_with(tok, glyph)) return std::string(tok.substr(glyph.size()));
  std::string open = std::string(word) + "(";
  if (starts_with(tok, open) && tok.size() > open.size() && tok.back() == ')')
    return std::string(tok.substr(open.size(), tok.size() - open.size() - 1));
  return std::nullopt;
}

struct Member {
  FactKind kind;
  std::string ref;
};

std::optional<Member> parse_member(const std::vector<std::string>& toks) {
  if (toks.size() == 1 && is_segment(toks[0])) return Member{FactKind::SegEq, toks[0]};
  if (toks.size() != 2) return std::nullopt;
  if (toks[0] == "m") {
    if (auto a = unwrap(toks[1], kAngle, "angle"); a && is_angle(*a)) return Member{FactKind::AngleEq, *a};
    if (auto a = unwrap(toks[1], kArc, "arc"); a && is_arc(*a)) return Member{FactKind::ArcDegEq, *a};
  } else if (toks[0] == "l") {
    if (auto a = unwrap(toks[1], kArc, "arc"); a && is_arc(*a)) return Member{FactKind::ArcLenEq, *a};
  }
  return std::nullopt;
}

std::optional<std::string> parse_line_ref(const std::vector<std::string>& toks) {
  if (toks.size() == 1 && is_segment(toks[0])) return toks[0];
  if (toks.size() == 2 && toks[0] == "line" && is_line_name(toks[1])) return toks[1];
  return std::nullopt;
}

std::vector<std::vector<std::string>> split_on(const std::vector<std::string>& toks,
                                               std::initializer_list<std::string_view> seps) {
  std::vector<std::vector<std::string>> groups(1);
  for (const auto& t : toks) {
    if (std::find(seps.begin(), seps.end(), t) != seps.end()) groups.emplace_back();
    else groups.back().push_back(t);
  }
  return groups;
}

std::optional<Fact> try_parse(const std::vector<std::string>& toks) {
  if (toks.empty()) return std::nullopt;
  auto has = [&](std::initializer_list<std::string_view> s) {
    return std::any_of(toks.begin(), toks.end(), [&](const std::string& t) { return std::find(s.begin(), s.end(), t) != s.end(); });
  };

  if (has({kPerp, "perp"})) {
    auto g = split_on(toks, {kPerp, "perp"});
    if (g.size() != 2) return std::nullopt;
    auto& right = g[1];
    if (right.size() < 3 || right[right.size() - 2] != "on") return std::nullopt;
    std::string foot = right.back();
    right.resize(right.size() - 2);
    auto l1 = parse_line_ref(g[0]), l2 = parse_line_ref(right);
    if (!l1 || !l2 || !is_point(foot)) return std::nullopt;
    return Fact{FactKind::Perpendicular, {*l1, *l2, foot}, std::nullopt};
  }
  if (has({kParallel, "para"})) {
    Fact f{FactKind::Parallel, {}, std::nullopt};
    for (const auto& g : split_on(toks, {kParallel, "para"})) {
      auto l = parse_line_ref(g);
      if (!l) return std::nullopt;
      f.refs.push_back(*l);
    }
    return f;
  }
  if (toks[0] == "line") {
    if (toks.size() >= 4 && toks[2] == "lieson" && is_line_name(toks[1])) {
      Fact f{FactKind::NamedLinePoints, {toks[1]}, std::nullopt};
      for (std::size_t i = 3; i < toks.size(); ++i) {
        if (!is_point(toks[i])) return std::nullopt;
        f.refs.push_back(toks[i]);
      }
      return f;
    }
    Fact f{FactKind::PointsOnLine, {}, std::nullopt};
    for (std::size_t i = 1; i < toks.size(); ++i) {
      if (!is_point(toks[i])) return std::nullopt;
      f.refs.push_back(toks[i]);
    }
    if (f.refs.empty()) return std::nullopt;
    return f;
  }
  {
    std::optional<std::string> center;
    std::size_t at = 0;
    if (starts_with(toks[0], kCircle)) {
      center = toks[0].substr(kCircle.size());
      at = 1;
    } else if (toks[0] == "circle" && toks.size() > 1) {
      center = toks[1];
      at = 2;
    }
    if (center) {
      if (!is_point(*center) || toks.size() <= at + 1 || toks[at] != "lieson") return std::nullopt;
      Fact f{FactKind::PointsOnCircle, {*center}, std::nullopt};
      for (std::size_t i = at + 1; i < toks.size(); ++i) {
        if (!is_point(toks[i])) return std::nullopt;
        f.refs.push_back(toks[i]);
      }
      return f;
    }
  }
  if (has({"="})) {
    auto groups = split_on(toks, {"="});
    auto first = parse_member(groups[0]);
    if (!first) return std::nullopt;
    Fact f{first->kind, {first->ref}, std::nullopt};
    for (std::size_t i = 1; i < groups.size(); ++i) {
      if (groups[i].empty()) return std::nullopt;
      auto m = parse_member(groups[i]);
      if (m && m->kind == f.kind) {
        f.refs.push_back(m->ref);
        continue;
      }
      if (i + 1 != groups.size()) return std::nullopt;
      std::string value;
      for (std::size_t k = 0; k < groups[i].size(); ++k) value += (k ? " " : "") + groups[i][k];
      try {
        parse_expr(value);
      } catch (const Error&) {
        return std::nullopt;
      }
      f.value = value;
    }
    if (f.refs.size() < 2 && !f.value) return std::nullopt;
    return f;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(FactKind k) {
  switch (k) {
    case FactKind::PointsOnLine: return "PointsOnLine";
    case FactKind::NamedLinePoints: return "NamedLinePoints";
    case FactKind::PointsOnCircle: return "PointsOnCircle";
    case FactKind::SegEq: return "SegEq";
    case FactKind::ArcLenEq: return "ArcLenEq";
    case FactKind::AngleEq: return "AngleEq";
    case FactKind::ArcDegEq: return "ArcDegEq";
    case FactKind::Parallel: return "Parallel";
    case FactKind::Perpendicular: return "Perpendicular";
  }
  return "PointsOnLine";
}

std::optional<FactKind> fact_kind_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(FactKind::Perpendicular); ++i)
    if (to_string(static_cast<FactKind>(i)) == s) return static_cast<FactKind>(i);
  return std::nullopt;
}

ClauseCategory category_of(FactKind k) {
  switch (k) {
    case FactKind::PointsOnLine:
    case FactKind::NamedLinePoints:
    case FactKind::PointsOnCircle: return ClauseCategory::Structural;
    default: return ClauseCategory::Semantic;
  }
}

void check_fact(const Fact& f) {
  auto bad = [&](const std::string& why) { throw KindError(describe(f) + ": " + why); };
  if (f.value && !has_value(f.kind)) bad("this kind carries no value");
  if (f.value) {
    try {
      parse_expr(*f.value);
    } catch (const Error& e) {
      bad(std::string("bad value: ") + e.what());
    }
  }
  auto each = [&](std::size_t from, bool (*ok)(std::string_view), const char* what) {
    for (std::size_t i = from; i < f.refs.size(); ++i)
      if (!ok(f.refs[i])) bad("'" + f.refs[i] + "' is not a " + what);
  };
  switch (f.kind) {
    case FactKind::PointsOnLine:
      if (f.refs.empty()) bad("no points");
      each(0, is_point, "point");
      break;
    case FactKind::NamedLinePoints:
    case FactKind::PointsOnCircle:
      if (f.refs.size() < 2) bad("needs a name and at least one point");
      if (f.kind == FactKind::NamedLinePoints && !is_line_name(f.refs[0])) bad("'" + f.refs[0] + "' is not a line name");
      if (f.kind == FactKind::PointsOnCircle && !is_point(f.refs[0])) bad("'" + f.refs[0] + "' is not a point");
      each(1, is_point, "point");
      break;
    case FactKind::SegEq:
    case FactKind::ArcLenEq:
    case FactKind::AngleEq:
    case FactKind::ArcDegEq:
      if (f.refs.empty() || (f.refs.size() < 2 && !f.value)) bad("needs two members or a value");
      if (f.kind == FactKind::SegEq) each(0, is_segment, "segment");
      else if (f.kind == FactKind::AngleEq) each(0, is_angle, "angle");
      else each(0, is_arc, "arc");
      break;
    case FactKind::Parallel:
      if (f.refs.size() < 2) bad("needs at least two lines");
      each(0, is_line_ref, "line");
      break;
    case FactKind::Perpendicular:
      if (f.refs.size() != 3) bad("needs two lines and a foot point");
      if (!is_line_ref(f.refs[0]) || !is_line_ref(f.refs[1])) bad("expected two lines");
      if (!is_point(f.refs[2])) bad("'" + f.refs[2] + "' is not a point");
      break;
  }
}

std::string render_fact(const Fact& f, GlyphStyle style) {
  check_fact(f);
  bool uni = style == GlyphStyle::Unicode;
  auto line_ref = [](const std::string& r) { return is_line_name(r) ? "line " + r : r; };
  auto wrap = [&](std::string_view glyph, std::string_view word, const std::string& r) {
    return uni ? std::string(glyph) + r : std::string(word) + "(" + r + ")";
  };
  std::vector<std::string> parts;
  switch (f.kind) {
    case FactKind::PointsOnLine: return "line " + join(f.refs, " ");
    case FactKind::NamedLinePoints: return "line " + f.refs[0] + " lieson " + join(f.refs, " ", 1);
    case FactKind::PointsOnCircle:
      return (uni ? std::string(kCircle) + f.refs[0] : "circle " + f.refs[0]) + " lieson " + join(f.refs, " ", 1);
    case FactKind::SegEq: parts = f.refs; break;
    case FactKind::ArcLenEq:
      for (const auto& r : f.refs) parts.push_back("l " + wrap(kArc, "arc", r));
      break;
    case FactKind::AngleEq:
      for (const auto& r : f.refs) parts.push_back("m " + wrap(kAngle, "angle", r));
      break;
    case FactKind::ArcDegEq:
      for (const auto& r : f.refs) parts.push_back("m " + wrap(kArc, "arc", r));
      break;
    case FactKind::Parallel: {
      for (const auto& r : f.refs) parts.push_back(line_ref(r));
      return join(parts, uni ? " " + std::string(kParallel) + " " : " para ");
    }
    case FactKind::Perpendicular:
      return line_ref(f.refs[0]) + (uni ? " " + std::string(kPerp) + " " : " perp ") + line_ref(f.refs[1]) + " on " +
             f.refs[2];
  }
  if (f.value) parts.push_back(*f.value);
  return join(parts, " = ");
}

std::vector<Clause> render_clauses(const std::vector<Fact>& facts, GlyphStyle style) {
  std::vector<Clause> out;
  for (const auto& f : facts) out.push_back({category_of(f.kind), f.kind, render_fact(f, style), f});
  return out;
}

Clause parse_clause(std::string_view text) {
  std::string clean = strip_annotations(text);
  auto toks = split_ws(space_out(clean));
  if (auto f = try_parse(toks)) {
    return {category_of(f->kind), f->kind, render_fact(*f), *f};
  }
  std::string joined = join(toks, " ");
  const auto& ex = template_examples();
  std::size_t best = 0;
  for (std::size_t i = 1; i < ex.size(); ++i)
    if (edit_distance(joined, ex[i]) < edit_distance(joined, ex[best])) best = i;
  throw TemplateMismatch(std::string(text), ex[best]);
}

// ---------------------------------------------------------------------------
// Tagging

std::string_view to_string(Tag t) {
  switch (t) {
    case Tag::General: return "G";
    case Tag::VarNum: return "N";
    case Tag::Arg: return "ARG";
    case Tag::Point: return "P";
    case Tag::AngleId: return "ANG";
  }
  return "G";
}

std::vector<TaggedToken> tag_tokens(std::string_view s) {
  std::vector<TaggedToken> out;
  std::vector<bool> lone_lower;  // single lowercase letters, resolved below
  auto push = [&](std::size_t from, std::size_t to, Tag tag, bool lower = false) {
    out.push_back({std::string(s.substr(from, to - from)), tag, from});
    lone_lower.push_back(lower);
  };
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (is_digit(s[i])) {
      std::size_t j = i;
      while (j < s.size() && (is_digit(s[j]) || (s[j] == '.' && j + 1 < s.size() && is_digit(s[j + 1])))) ++j;
      if (!out.empty() && out.back().token == kAngle && out.back().offset + kAngle.size() == i) {
        out.back().token += std::string(s.substr(i, j - i));
        out.back().tag = Tag::AngleId;
      } else {
        push(i, j, Tag::VarNum);
      }
      i = j;
      continue;
    }
    if (std::isalpha(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
      std::string_view run = s.substr(i, j - i);
      if (run == "N" && j < s.size() && is_digit(s[j])) {
        std::size_t k = j;
        while (k < s.size() && is_digit(s[k])) ++k;
        push(i, k, Tag::VarNum);
        i = k;
        continue;
      }
      if (all_of(run, is_upper)) {
        for (std::size_t k = i; k < j; ++k) push(k, k + 1, Tag::Point);
      } else if (run.size() == 1) {
        push(i, j, Tag::Arg, true);
      } else {
        push(i, j, Tag::General);
      }
      i = j;
      continue;
    }
    std::size_t len = 1;
    if (c >= 0xC0) len = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : 2;
    len = std::min(len, s.size() - i);
    push(i, i + len, Tag::General);
    i += len;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (!lone_lower[k]) continue;
    bool after_line = k > 0 && out[k - 1].token == "line";
    bool measure = false;
    if ((out[k].token == "m" || out[k].token == "l") && k + 1 < out.size()) {
      const auto& next = out[k + 1].token;
      measure = starts_with(next, kAngle) || starts_with(next, kArc) || next == "angle" || next == "arc";
    }
    if (after_line || measure) out[k].tag = Tag::General;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Problem variables

std::string strip_annotations(std::string_view text) {
  static const std::regex ann(R"(\(N\d+\))");
  return std::regex_replace(std::string(text), ann, "");
}

VarAssignment assign_problem_vars(const std::vector<std::string>& semantic_clauses, std::string_view problem_text) {
  VarAssignment out;
  int next = 0;
  auto declare = [&](const std::string& value, int source) {
    if (next > kMaxProblemVar)
      throw TooManyVariables("more than " + std::to_string(kMaxProblemVar + 1) + " problem values");
    VarId v = VarId::problem(next++);
    out.declarations.emplace_back(v, value);
    out.sources.push_back(source);
    return "(" + v.str() + ")";
  };
  for (std::size_t i = 0; i < semantic_clauses.size(); ++i) {
    std::string clause = strip_annotations(semantic_clauses[i]);
    while (!clause.empty() && std::isspace(static_cast<unsigned char>(clause.back()))) clause.pop_back();
    Clause c = parse_clause(clause);
    if (c.fact.value) clause += declare(*c.fact.value, static_cast<int>(i));
    out.semantic_clauses.push_back(clause);
  }
  std::string text = strip_annotations(problem_text);
  std::string annotated;
  std::size_t copied = 0;
  for (const auto& t : tag_tokens(text)) {
    if (t.tag != Tag::VarNum) continue;
    std::size_t end = t.offset + t.token.size();
    annotated += text.substr(copied, end - copied);
    annotated += declare(t.token, -1);
    copied = end;
  }
  annotated += text.substr(copied);
  out.problem_text = annotated;
  return out;
}

}  // namespace geosym
