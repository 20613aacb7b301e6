#include "infconv/presets.hpp"

#include <memory>

namespace infconv {

namespace {

GeneratorPair pair2(long long a, long long b, double scale = 2.0) {
  return GeneratorPair(scale, DigitSet::from_ints({a, b}));
}

Preset jp_preset() {
  Preset p;
  p.name = "jp";
  p.summary = "constant (4,{0,2}) sequence with spectrum sets {0,1}";
  p.spec = SequenceSpec{Rule{CycleRule{{GeneratorPair(4, DigitSet::from_ints({0, 2}))}}},
                        std::nullopt, SpectrumSets::cycled({{0, 1}})};
  return p;
}

Preset escape_preset() {
  Preset p;
  p.name = "example-6.1";
  p.summary = "scale 2 with digits {0, 2^n+1}; the far digit escapes every ball";
  p.spec = SequenceSpec{Rule{FamilyRule{FamilyKind::GeometricEscape, IndexSet::all()}},
                        std::nullopt, SpectrumSets::family()};
  return p;
}

Preset two_digit_preset(const std::string& variant) {
  Preset p;
  if (variant.empty() || variant == "infinite-ones") {
    p.name = "example-6.2/infinite-ones";
    p.summary = "scale 2, digits {0,1} at odd positions and {0,3} elsewhere";
    auto base = std::make_shared<const Rule>(CycleRule{{pair2(0, 3)}});
    auto sub = std::make_shared<const Rule>(CycleRule{{pair2(0, 1)}});
    p.spec = SequenceSpec{Rule{InterleaveRule{base, sub, IndexSet::arithmetic(1, 2)}},
                          std::nullopt, SpectrumSets::cycled({{0, 1}})};
    return p;
  }
  if (variant == "finite-ones") {
    p.name = "example-6.2/finite-ones";
    p.summary = "scale 2, one {0,1} level followed by {0,3} forever";
    p.spec = SequenceSpec{Rule{PrefixCycleRule{{pair2(0, 1)}, {pair2(0, 3)}}}, std::nullopt,
                          SpectrumSets::cycled({{0, 1}})};
    p.note =
        "the limit density is absolutely continuous but not uniform on its support, and "
        "an absolutely continuous spectral measure must be uniform, so this convolution "
        "is known not to be spectral";
    return p;
  }
  if (variant == "all-threes") {
    p.name = "example-6.2/all-threes";
    p.summary = "scale 2, digits {0,3} at every level";
    p.spec = SequenceSpec{Rule{CycleRule{{pair2(0, 3)}}}, std::nullopt,
                          SpectrumSets::cycled({{0, 1}})};
    p.note =
        "the limit is the uniform measure on [0,3], a spectral measure, though no "
        "sufficient condition checked here detects that";
    return p;
  }
  throw DomainError("preset: unknown example-6.2 variant '" + variant +
                    "' (expected infinite-ones, finite-ones or all-threes)");
}

Preset sparse_far_preset() {
  Preset p;
  p.name = "example-6.3";
  p.summary =
      "odd levels carry scale 2(n+1)^2 with a consecutive block plus one far digit, "
      "even levels are (9,{0,1,5})";
  p.spec = SequenceSpec{Rule{FamilyRule{FamilyKind::SparseFarDigit, IndexSet::arithmetic(1, 2)}},
                        ConvergenceTag{ConvergenceTag::Kind::InverseSquare, 1.0, 1, 0.5},
                        SpectrumSets::family()};
  return p;
}

}  // namespace

std::optional<Preset> preset(const std::string& name, const std::string& variant) {
  if (name == "example-6.2") return two_digit_preset(variant);
  if (name == "example-6.2-latter") {
    if (!variant.empty())
      throw DomainError("preset: example-6.2-latter does not take a variant");
    return two_digit_preset("finite-ones");
  }
  if (!variant.empty())
    throw DomainError("preset: " + name + " does not take a variant");
  if (name == "jp") return jp_preset();
  if (name == "example-6.1") return escape_preset();
  if (name == "example-6.3") return sparse_far_preset();
  return std::nullopt;
}

std::vector<std::string> preset_names() {
  return {"jp", "example-6.1", "example-6.2", "example-6.2-latter", "example-6.3"};
}

}  // namespace infconv
