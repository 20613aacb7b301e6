// Built-in example sequences shared by the CLI and the test drivers.
#pragma once

#include "infconv/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace infconv {

struct Preset {
  std::string name;     // canonical name, variant-qualified where one applies
  std::string summary;  // one line on what the sequence is
  SequenceSpec spec;
  // Informational context a classify run prints alongside its verdict;
  // empty for most presets.
  std::string note;
};

// Known names: jp, example-6.1, example-6.2 (variants infinite-ones,
// finite-ones, all-threes; infinite-ones is the default), example-6.2-latter
// (alias for the finite-ones variant), example-6.3. Returns nullopt for an
// unknown name; throws DomainError for a variant on a preset that has none
// or an unknown variant.
std::optional<Preset> preset(const std::string& name, const std::string& variant = "");

std::vector<std::string> preset_names();

}  // namespace infconv
