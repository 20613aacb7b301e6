// JSON (de)serialization for sequence specs. Schema "v1":
//
//   {
//     "version": "v1",
//     "rule": { "type": "cycle", "pairs": [ {"scale": 4, "digits": [0, 2]} ] },
//     "convergence_tag": { "kind": "inverse_square", "c": 1.0, "shift": 1 },
//     "spectrum_sets": { "cycle": [[0, 1]] }
//   }
//
// Rule types: cycle, prefix_cycle {prefix, cycle}, indexed_family
// {family, indices}, interleave {base, sub, indices}. Index sets are
// {"type": "arithmetic", "first", "step"}, {"type": "list", "values"} or
// the string "all". Digits past 2^53 in magnitude must be quoted as decimal
// strings; plain JSON floats that large are rejected instead of silently
// losing low bits. spectrum_sets is {"cycle": [...]}, {"map": {"3": [...]}}
// or the string "family". Unknown keys are schema errors.
#pragma once

#include "infconv/core.hpp"
#include "json.hpp"

namespace infconv {

// Throws SpecError with a path-prefixed message on any schema violation.
SequenceSpec parse_spec(const nlohmann::json& doc);

// Reads and parses a spec file; file-system problems also map to SpecError.
SequenceSpec load_spec_file(const std::string& path);

// Canonical form: parse_spec(spec_to_json(s)) reproduces s, and the output
// of spec_to_json is key-sorted, so equal specs serialize byte-identically.
nlohmann::json spec_to_json(const SequenceSpec& spec);

// Shared helpers, exposed for payload builders in the CLI.
nlohmann::json index_set_to_json(const IndexSet& ix);
nlohmann::json pair_to_json(const GeneratorPair& p);

}  // namespace infconv
