#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "geosym/record.hpp"

namespace geosym {

struct LoadOptions {
  bool lenient = false;         // skip malformed records instead of throwing
  std::size_t beam_size = 10;   // maximum number of candidates per record
};

struct LoadResult {
  std::vector<ProblemRecord> records;
  // "line N (id): message" for every record skipped in lenient mode
  std::vector<std::string> skipped;
};

// One JSON object per line. Throws FormatError naming the record id and field.
ProblemRecord parse_record(std::string_view json_text, std::size_t line = 0, std::size_t beam_size = 10);
std::string record_to_json(const ProblemRecord& r);

LoadResult read_dataset(std::istream& in, const LoadOptions& opts = {});
LoadResult load_dataset(const std::filesystem::path& path, const LoadOptions& opts = {});
void write_dataset(std::ostream& out, const std::vector<ProblemRecord>& records);

}  // namespace geosym
