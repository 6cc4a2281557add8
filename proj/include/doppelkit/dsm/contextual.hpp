#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "doppelkit/dsm/space.hpp"

namespace doppelkit {

// One line of the per-mention interchange file:
// {"novel":..,"part":..,"entity":..,"mention":..,"dim":..,"values":[..]}
struct InterchangeRecord {
  std::string novel;
  PartId part = PartId::A;
  std::string entity;
  long long mention = 0;
  std::vector<double> values;
};

// Serialises a record as one line (no trailing newline) with keys in the
// canonical order and shortest round-trip numbers.
std::string to_interchange_line(const InterchangeRecord& record);

// Parses one line; `line_no` is used for ParseError.
InterchangeRecord parse_interchange_line(std::string_view line, std::size_t line_no);

// Mean of each entity's mention vectors, then L2-normalised. Records not
// matching the filters are ignored. Throws ParseError, DimMismatch, or
// EmptySpace when nothing survives the filters.
EmbeddingSpace import_contextual_space(std::istream& in, std::optional<std::string> novel,
                                       PartId part, std::string model_id = "contextual");
EmbeddingSpace import_contextual_space(const std::string& path, std::optional<std::string> novel,
                                       PartId part, std::string model_id = "contextual");

}  // namespace doppelkit
