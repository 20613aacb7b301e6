// Core types for sequences of generator pairs (N_n, B_n) driving infinite
// convolutions of uniform atomic measures. Everything downstream (transforms,
// condition checkers, scanners) is built on the types in this header.
//
// Digit values can grow past the range where double (or even long double) is
// exact; digit sets therefore keep a long double approximation for numerics
// plus sparse exact big integers for every digit with |b| > 2^53. Residue,
// gcd and split logic goes through the exact values.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace infconv {

using BigInt = boost::multiprecision::cpp_int;

// Input violating a documented precondition (non-integral scale where an
// integer is required, duplicate digits, bad parameter domain, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed spec files and schema violations.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resource guards tripped (expansion too deep, matrix too large, ...).
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Largest integer magnitude a double holds exactly.
inline constexpr double kExactIntLimit = 9007199254740992.0;  // 2^53

// ---------------------------------------------------------------------------
// Digit sets

class DigitSet {
 public:
  DigitSet() = default;

  // Duplicates are an error, not silently merged.
  static DigitSet from_reals(const std::vector<double>& vals);
  static DigitSet from_ints(const std::vector<long long>& vals);
  static DigitSet from_bigints(std::vector<BigInt> vals);

  std::size_t size() const { return approx_.size(); }
  bool empty() const { return approx_.empty(); }

  // Sorted ascending. Exact for |b| <= 2^53; rounded beyond.
  const std::vector<long double>& values() const { return approx_; }
  long double approx(std::size_t i) const { return approx_[i]; }

  bool all_integral() const { return all_integral_; }

  // Exact integer value of digit i. Integral sets only.
  BigInt exact(std::size_t i) const;
  // Same, narrowed to long long; throws GuardError when out of range.
  long long exact_ll(std::size_t i) const;

  long double max_abs() const;
  long double max_value() const { return approx_.back(); }
  long double min_value() const { return approx_.front(); }

  bool operator==(const DigitSet& o) const;

 private:
  std::vector<long double> approx_;               // sorted
  std::vector<std::pair<std::size_t, BigInt>> wide_;  // exact values past 2^53
  bool all_integral_ = true;

  void check_nonempty() const;
};

// ---------------------------------------------------------------------------
// Generator pair (N, B)

class GeneratorPair {
 public:
  GeneratorPair(double scale, DigitSet digits);

  double scale() const { return scale_; }
  bool scale_integral() const;
  // Integer scale, rejecting non-integral values instead of rounding.
  long long scale_int() const;
  const DigitSet& digits() const { return digits_; }

  // Integer scale >= 2 and all digits integral.
  bool admissible_shape() const;

  bool operator==(const GeneratorPair& o) const;

 private:
  double scale_;
  DigitSet digits_;
};

// Throws DomainError unless the pair has admissible shape.
void require_admissible(const GeneratorPair& p, const char* op);

// Partition of B into B1 = B ∩ {0,...,N-1} and B2 = B \ B1.
struct DigitSplit {
  std::vector<long long> principal;        // sorted, values in [0, N-1]
  std::size_t remainder_count = 0;
  std::vector<long double> remainder;      // approximate values, sorted
  long long max_principal = 0;             // 0 when principal is empty
};

DigitSplit split_digits(const GeneratorPair& p);

// B mod N as a set, with a collapse flag when two digits coincide mod N.
// Negative digits reduce with the mathematical mod (result in [0, N-1]).
struct ResidueImage {
  std::vector<long long> values;  // sorted distinct
  bool collapsed = false;
};

ResidueImage residues(const GeneratorPair& p);

// ---------------------------------------------------------------------------
// Index sets (1-based positions into the sequence)

class IndexSet {
 public:
  enum class Kind { Arithmetic, Explicit };

  static IndexSet all() { return arithmetic(1, 1); }
  static IndexSet arithmetic(long first, long step);
  static IndexSet from_list(std::vector<long> values);

  Kind kind() const { return kind_; }
  bool infinite() const { return kind_ == Kind::Arithmetic; }
  bool contains(long n) const;
  // Number of members <= n. For a member, this is its 1-based position.
  long rank(long n) const;
  // k-th member (k >= 1). Throws DomainError past the end of a finite set.
  long nth(long k) const;

  long first() const { return first_; }
  long step() const { return step_; }
  const std::vector<long>& list() const { return values_; }

 private:
  Kind kind_ = Kind::Arithmetic;
  long first_ = 1, step_ = 1;
  std::vector<long> values_;
};

// ---------------------------------------------------------------------------
// Convergence tags: user-asserted per-term bounds term(n) <= c * g(n).
// Checkers verify the bound against their own inspected terms before using
// the closed-form tail sum; see series_verdict.

struct ConvergenceTag {
  enum class Kind { InverseSquare, PowerOfTwo, Geometric };

  Kind kind = Kind::InverseSquare;
  double c = 1.0;
  long shift = 0;    // InverseSquare: g(n) = 1/(n+shift)^2
  double rho = 0.5;  // Geometric: g(n) = rho^n, 0 < rho < 1

  double g(long n) const;
  double bound(long n) const { return c * g(n); }
  // Upper bound for sum_{n > after} bound(n).
  double tail_sum(long after) const;
  std::string describe() const;
};

// ---------------------------------------------------------------------------
// Sequence rules

struct Rule;

struct CycleRule {
  std::vector<GeneratorPair> pairs;  // term(n) = pairs[(n-1) mod size]
};

struct PrefixCycleRule {
  std::vector<GeneratorPair> prefix;
  std::vector<GeneratorPair> cycle;
};

// Closed-form families keyed by an index subsequence.
enum class FamilyKind {
  // N_n = 2, B_n = {0, 2^n + 1}: the far digit escapes every ball, so the
  // convolution never converges. Index set is ignored.
  GeometricEscape,
  // On the index set: N_n = 2(n+1)^2, B_n = {0,...,(n+1)^2 - 2} plus the far
  // digit (n+1)^2 - 1 + N_1...N_n, spectrum set {0,2,...,2(n+1)^2-2}.
  // Off the index set: (9, {0,1,5}) with spectrum set {0,3,6}.
  SparseFarDigit,
};

struct FamilyRule {
  FamilyKind family;
  IndexSet indices = IndexSet::all();
};

// Terms at positions in `indices` come from `sub` (consumed in order),
// all other positions from `base`.
struct InterleaveRule {
  std::shared_ptr<const Rule> base;
  std::shared_ptr<const Rule> sub;
  IndexSet indices;
};

struct Rule : std::variant<CycleRule, PrefixCycleRule, FamilyRule, InterleaveRule> {
  using variant::variant;
};

const char* family_name(FamilyKind k);
std::optional<FamilyKind> family_from_name(const std::string& name);

// ---------------------------------------------------------------------------
// Spectrum set assignment L_n

struct SpectrumSets {
  enum class Kind { None, Cycle, Map, Family };
  Kind kind = Kind::None;
  std::vector<std::vector<long long>> cycle;
  std::map<long, std::vector<long long>> by_index;

  static SpectrumSets none() { return {}; }
  static SpectrumSets cycled(std::vector<std::vector<long long>> sets);
  static SpectrumSets mapped(std::map<long, std::vector<long long>> sets);
  static SpectrumSets family();
};

// ---------------------------------------------------------------------------
// Sequence spec

struct SequenceSpec {
  Rule rule;
  std::optional<ConvergenceTag> tag;
  SpectrumSets spectrum_sets;

  GeneratorPair term(long n) const;  // 1-based
  std::vector<GeneratorPair> expand(long n_max) const;
  // Spectrum set for level n, when one is configured.
  std::optional<std::vector<long long>> spectrum_set(long n) const;
  // The index subsequence declared by a top-level family/interleave rule.
  std::optional<IndexSet> declared_indices() const;
  // Top-level family rule, when the spec is one.
  const FamilyRule* family() const;
};

std::vector<GeneratorPair> expand_sequence(const SequenceSpec& spec, long n_max);

// Guard: family digit approximations stay finite in long double up to here.
inline constexpr long kMaxFamilyIndex = 800;
// Guard: pointwise expansions refuse absurd horizons.
inline constexpr long kMaxExpansion = 100000;

// ---------------------------------------------------------------------------
// Eventual periodicity

// For n >= start, term(n) = terms[(n - start) mod terms.size()].
struct TailCycle {
  long start = 1;
  std::vector<GeneratorPair> terms;
  // Product of the cycle scales (growth of N_1...N_n per period).
  double scale_product = 1.0;
};

// Structural detection, verified against materialized terms. Conservative:
// returns nullopt rather than guessing for rules it cannot analyze.
std::optional<TailCycle> eventual_cycle(const SequenceSpec& spec);

// ---------------------------------------------------------------------------
// Verdicts

enum class VerdictValue { ProvedByRule, EmpiricallyHolds, Fails, Unknown };

const char* to_string(VerdictValue v);

struct Verdict {
  VerdictValue value = VerdictValue::Unknown;
  std::string reason;
  std::optional<long> witness_index;  // Fails: concrete offending index
  std::optional<double> bound;        // certified total / sup when meaningful

  bool holds() const {
    return value == VerdictValue::ProvedByRule || value == VerdictValue::EmpiricallyHolds;
  }
};

// Structural facts a checker feeds into series_verdict for its own series.
struct SeriesStructure {
  // sum over all n beyond the inspected horizon is at most this (rule-derived,
  // tag-independent; 0 for an all-zero cyclic tail).
  std::optional<double> tail_sum;
  std::string tail_note;
  // Divergence certificate: terms bounded below along an infinite rule.
  std::optional<long> divergence_witness;
  std::string divergence_note;
};

// Convergence verdict for a nonnegative series from inspected terms plus
// structure. Order: structural divergence, structural tail, tag, stabilization
// heuristic. A Fails always carries a witness; ProvedByRule carries the total
// bound. `indices` and `terms` run in parallel.
Verdict series_verdict(const std::vector<long>& indices, const std::vector<double>& terms,
                       const SeriesStructure& structure,
                       const std::optional<ConvergenceTag>& tag);

// Stabilization heuristic shared by the empirical paths: the increment over
// the last quarter of the horizon must not exceed 2% of the total.
bool series_looks_stable(const std::vector<double>& terms);

}  // namespace infconv
