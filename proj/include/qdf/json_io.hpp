#pragma once

// JSON encodings.
//
// Matrix:  {"legs": [d1, ...], "re": [[...], ...], "im": [[...], ...]}, row-major.
// Bundle:  {"m": m, "n": n, "L": L, "rho": <matrix or preset>, "entries": [<matrix>, ...]}.
// Presets: "trace", "normalized-trace".

#include <cstdint>
#include <string>

#include "json.hpp"
#include "qdf/boundary.hpp"
#include "qdf/hierarchy.hpp"
#include "qdf/linalg.hpp"

namespace qdf {

using Json = nlohmann::json;

// All readers throw ParseError on layout problems and InvalidArgument when the
// decoded values violate a type invariant.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);

Json to_json(const LeggedOperator& x);
LeggedOperator operator_from_json(const Json& doc);

// Preset name or a one-leg matrix; n is required to expand a preset.
Functional functional_from_json(const Json& doc, int n);
// "trace", "normalized-trace", or "random" (seeded).
Functional functional_preset(const std::string& name, int n, std::uint64_t seed = 0);

Json to_json(const SymSequence& seq);
SymSequence sequence_from_json(const Json& doc);

Json to_json(const Partition& p);
Json to_json(const ValidationReport& r);
Json to_json(const FeasibilityReport& r, bool with_witness = true);
Json to_json(const SeparabilityReport& r, bool with_witness = true);
Json to_json(const ExponentialReport& r);
Json to_json(const SchurWeylBlock& b);

}  // namespace qdf
