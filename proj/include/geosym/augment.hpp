#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "geosym/kb.hpp"
#include "geosym/record.hpp"

namespace geosym {

enum class Strategy { TokenReplacement, ConnectionRotation, RepresentationTransposition, ClausesShuffle };
std::string_view to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view s);

struct AugmentSpec {
  std::map<Strategy, double> probability;  // missing strategies never fire
  std::uint64_t seed = 0;
};

// Explicit renaming. Keys and values are symbols of the same class.
struct SymbolMap {
  std::map<char, char> points;
  std::map<std::string, std::string> angle_ids;  // "1" -> "7"
  std::map<char, char> args;
  bool empty() const { return points.empty() && angle_ids.empty() && args.empty(); }
};

// Applies a renaming to clauses, text, annotations, declarations and every
// program. Throws Error if two symbols would end up with the same name.
ProblemRecord token_replacement_with(const ProblemRecord& r, const SymbolMap& m);
// Each symbol is renamed with probability `p` to a symbol unused in the
// record. Throws SymbolExhausted.
ProblemRecord token_replacement(const ProblemRecord& r, std::uint64_t seed, double p = 0.5);

// Element of the dihedral orbit: result[i] = pts[(k + i) % n], or
// pts[(k - i) mod n] when reflected.
std::vector<std::string> dihedral(const std::vector<std::string>& pts, std::size_t k, bool reflect);
// Line clauses are reversed when `reflect`; circle clauses take the dihedral
// element (k, reflect). Other clauses are returned unchanged.
std::string rotate_clause(std::string_view clause, std::size_t k, bool reflect);
ProblemRecord connection_rotation(const ProblemRecord& r, std::uint64_t seed);

// Reverses segment names, three-point angle names and arc names; `all`
// transposes every occurrence, otherwise each one flips a fair coin.
std::string transpose_text(std::string_view text, bool all = true, std::uint64_t seed = 0);
ProblemRecord representation_transposition(const ProblemRecord& r, std::uint64_t seed);

// new clause i = old clause perm[i]. Problem variables are renumbered in the
// new reading order and programs are rewritten to match.
ProblemRecord clauses_shuffle_with(const ProblemRecord& r, const std::vector<std::size_t>& perm,
                                   const KnowledgeBase& kb = builtin_kb());
ProblemRecord clauses_shuffle(const ProblemRecord& r, std::uint64_t seed, const KnowledgeBase& kb = builtin_kb());

// replacement -> rotation -> transposition -> shuffle, each firing with its probability.
ProblemRecord compose(const ProblemRecord& r, const AugmentSpec& spec, const KnowledgeBase& kb = builtin_kb());

}  // namespace geosym
