#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geosym/expr.hpp"

namespace geosym {

enum class FactKind {
  PointsOnLine,     // line A B C
  NamedLinePoints,  // line k lieson A B C
  PointsOnCircle,   // ⊙O lieson E F G
  SegEq,            // AB = CD = 3x+y
  ArcLenEq,         // l ⌒EF = 5π
  AngleEq,          // m ∠A = m ∠1 = 30
  ArcDegEq,         // m ⌒EFG = 270
  Parallel,         // line k ∥ line m ∥ EF
  Perpendicular,    // EF ⊥ GH on C
};

enum class ClauseCategory { Structural, Semantic };

std::string_view to_string(FactKind k);
std::optional<FactKind> fact_kind_from_string(std::string_view s);
ClauseCategory category_of(FactKind k);

// refs per kind:
//   PointsOnLine     points
//   NamedLinePoints  line name, then points
//   PointsOnCircle   center, then points
//   SegEq            segments ("AB")
//   ArcLenEq/ArcDegEq arcs ("EF", "EFG")
//   AngleEq          angles ("ABC", "A" or an ID such as "1")
//   Parallel         lines: a segment "EF" or a line name "k"
//   Perpendicular    two lines, then the foot point
struct Fact {
  FactKind kind = FactKind::PointsOnLine;
  std::vector<std::string> refs;
  std::optional<std::string> value;  // expression text, equality kinds only
  friend bool operator==(const Fact&, const Fact&) = default;
};

struct Clause {
  ClauseCategory category = ClauseCategory::Structural;
  FactKind kind = FactKind::PointsOnLine;
  std::string text;
  Fact fact;
};

enum class GlyphStyle { Unicode, Plain };

// Throws KindError when refs do not fit the template signature.
void check_fact(const Fact& f);
std::string render_fact(const Fact& f, GlyphStyle style = GlyphStyle::Unicode);
std::vector<Clause> render_clauses(const std::vector<Fact>& facts, GlyphStyle style = GlyphStyle::Unicode);
// Accepts either glyph style and any interior whitespace. A trailing "(Nk)"
// annotation on the value is dropped. Throws TemplateMismatch.
Clause parse_clause(std::string_view text);

enum class Tag { General, VarNum, Arg, Point, AngleId };
std::string_view to_string(Tag t);

struct TaggedToken {
  std::string token;
  Tag tag = Tag::General;
  std::size_t offset = 0;  // byte offset in the input
  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

std::vector<TaggedToken> tag_tokens(std::string_view text);

struct VarAssignment {
  std::vector<std::string> semantic_clauses;  // with "(Nk)" suffixes
  std::string problem_text;
  std::vector<std::pair<VarId, std::string>> declarations;
  // Where each declared value came from: clause index, or -1 for the problem text.
  std::vector<int> sources;
};

// Numbers and clause values get N indices in reading order, semantic clauses
// first. Existing "(Nk)" annotations are removed beforehand. Throws TooManyVariables.
VarAssignment assign_problem_vars(const std::vector<std::string>& semantic_clauses, std::string_view problem_text);

// Removes every "(Nk)" annotation.
std::string strip_annotations(std::string_view text);

}  // namespace geosym
