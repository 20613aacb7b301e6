#pragma once
// Structural condition checkers: Hadamard triple certification, remainder /
// digit-bound / concentration conditions, consecutive digit sets, the
// difference-gcd criterion, and the combined classifier.
//
// Verdicts are honest about horizons. A Fails always names a structural
// reason (a recurring pair, a recognized family); a large partial sum alone
// never fails a series. ProvedByRule totals combine inspected partial sums
// with rule- or tag-derived tail bounds.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "infconv/core.hpp"

namespace infconv {

// ---------------------------------------------------------------------------
// Ultimately periodic index patterns
//
// Subsets of {1, 2, ...} with explicit members below `start` and periodic
// membership by residue from `start` on. Arithmetic progressions, finite
// lists, and the whole line all fit, and the class is closed under
// complement and intersection. This is what makes "infinitely many filtered
// indices hit the family" decidable instead of guessed.

struct IndexPattern {
  long start = 1;
  long period = 1;
  std::vector<char> residues = {1};  // size == period; membership for n >= start
  std::vector<long> head;            // sorted members in [1, start)

  bool contains(long n) const;
  bool infinite() const;
  // Smallest member >= n; nullopt once a finite set is exhausted.
  std::optional<long> next(long n) const;
  // k-th member (k >= 1); nullopt past the end of a finite set.
  std::optional<long> kth(long k) const;
};

IndexPattern pattern_all();
IndexPattern pattern_from_index_set(const IndexSet& s);
IndexPattern pattern_complement(const IndexPattern& p);
// Throws GuardError when lcm of the periods exceeds kMaxPatternPeriod.
IndexPattern pattern_intersect(const IndexPattern& a, const IndexPattern& b);

inline constexpr long kMaxPatternPeriod = 1'000'000;

// ---------------------------------------------------------------------------
// Filtered structural view
//
// What a checker may assume about the terms at a filtered set of indices.
// Every pair in `recurring` occurs at infinitely many filtered indices.
// The family flags record that far-digit family levels hit the filter
// infinitely often (their digit ratios grow without bound). When the filter
// of an interleave rule equals its declared index set, the filtered stream
// is exactly the sub (or base) rule and is analyzed in its own numbering.

struct FilteredStructure {
  std::vector<long> indices;         // filtered n in [1, n_max]
  std::vector<GeneratorPair> terms;  // aligned with indices
  bool infinite = false;
  bool pattern_known = false;  // recurring / family flags are meaningful
  long tail_start = 1;         // structural claims hold from this index on
  std::vector<GeneratorPair> recurring;
  bool sparse_far_infinite = false;      // SparseFarDigit on-levels in the filter
  bool escape_infinite = false;          // GeometricEscape levels in the filter
  std::optional<long> family_witness;    // first family level in the filter
};

FilteredStructure filtered_structure(const SequenceSpec& spec,
                                     const std::optional<IndexSet>& filter,
                                     bool complement, long n_max);

// ---------------------------------------------------------------------------
// Hadamard triples

struct HadamardTriple {
  long long scale = 0;
  std::vector<BigInt> digits;
  std::vector<long long> spectrum;
  double residual = 1.0;  // max-norm of (Gram - I)

  bool certified() const { return residual <= 1e-12; }
};

// Gram residual of the normalized exponential matrix for (N, B, L). Phases
// use exact digit residues mod N, so digits beyond 2^53 are fine. Cubic in
// the set size.
HadamardTriple check_unitarity(long long scale, const DigitSet& digits,
                               const std::vector<long long>& spectrum);

// Backtracking clique search for spectrum sets L in {0,...,N-1} with 0 in L
// (translates of a spectrum set are spectrum sets, so this loses nothing),
// |L| = #B, and every pairwise difference killing the digit mask mod N.
// Results are re-certified and come out lexicographically sorted. Guard:
// N <= 10^4; the search stops quietly after kCliqueNodeBudget nodes.
std::vector<HadamardTriple> find_spectrum_sets(long long scale, const DigitSet& digits,
                                               std::size_t max_results);

inline constexpr long long kCliqueNodeBudget = 5'000'000;

// ---------------------------------------------------------------------------
// Condition reports

enum class ConditionKind { RBC, PCCWindow, PCCBand, DBC, GeneralConsecutive, GcdCriterion };

const char* to_string(ConditionKind k);

struct ConditionReport {
  ConditionKind condition = ConditionKind::RBC;
  std::vector<long> indices;
  std::vector<double> per_term;
  // Partial sums (RBC, PCC window case), running max (DBC), or running
  // infimum (PCC band case). Reproducible from per_term.
  std::vector<double> aggregate;
  std::vector<double> per_term_extra;          // DBC: #B_n per level
  std::vector<std::array<double, 2>> windows;  // PCC: chosen window per level
  std::vector<char> boundary_flags;  // PCC window case: optimum within 1e-9 of the strict edge
  std::map<std::string, double> parameters;
  Verdict verdict;
};

// Remainder series sum #B_{n,2}/#B_n over the filtered indices, where B_{n,2}
// are the digits outside [0, N_n - 1]. ProvedByRule needs a verified covering
// tag or a structurally zero tail; family remainder decay alone reports
// EmpiricallyHolds and says which tag would certify it.
ConditionReport check_rbc(const SequenceSpec& spec, long n_max,
                          const std::optional<IndexSet>& filter = std::nullopt,
                          bool complement = false);

// Running sup of max|b|/N_n and of #B_n over the filtered indices. Proved for
// rules with finitely many distinct filtered terms; Fails when far-digit
// family levels hit the filter infinitely often.
ConditionReport check_dbc(const SequenceSpec& spec, const std::optional<IndexSet>& index_filter,
                          long n_max, bool complement = false);

struct PccReports {
  ConditionReport window_case;  // minimized exclusion outside a width-bounded window
  ConditionReport band_case;    // digit fraction inside the central band
};

// Window case: per level, the window [b1, b2] in [0, N_n - 1] of width
// strictly below l*N_n minimizing the count of excluded digits; the series of
// exclusion ratios must converge. Endpoints snap to digit positions (an
// optimal window can always be chosen that way); a degenerate single-digit
// span stands for [b, b + eps]. Band case: the digit fraction inside
// [l*N_n/2, (1 - l/2)*N_n] (the widest admissible window, degenerate windows
// permitted) must stay above some c > 0; any exact zero is a definitive
// counterexample.
PccReports check_pcc(const SequenceSpec& spec, double l, long n_max,
                     const std::optional<IndexSet>& filter = std::nullopt,
                     bool complement = false);

// ---------------------------------------------------------------------------
// Consecutive digit sets and the difference gcd

struct ConsecutiveCheck {
  bool consecutive = false;  // residues mod N are exactly {0, ..., #B-1}
  bool collapsed = false;
  bool size_divides_scale = false;
  std::vector<long long> residue_values;
};

ConsecutiveCheck is_general_consecutive(const GeneratorPair& pair);

struct GcdTailReport {
  BigInt value = 0;  // gcd of digit differences over levels in (k, n_max]
  Verdict verdict;   // about the full tail n > k, not just the inspected range
  std::optional<long> reached_one_at;
};

// Running gcd of gcd(B_n - min B_n) for n in (k, n_max]. Hitting 1 is final
// (the running gcd only ever shrinks). For recurring tails the infinite-tail
// gcd is computed exactly, so a stuck value fails definitively.
GcdTailReport gcd_tail(const SequenceSpec& spec, long k, long n_max);

// ---------------------------------------------------------------------------
// Classifier

struct ClassifyReport {
  enum class Conclusion { ExistsAndSpectral, Exists, DoesNotExist, Unknown };

  Conclusion conclusion = Conclusion::Unknown;
  std::string path;  // hypothesis set that licensed the conclusion
  std::string reason;
  bool fully_proved = false;  // every contributing verdict is ProvedByRule

  // Admissibility of the inspected levels: certified analytically for
  // consecutive digit blocks, numerically against declared spectrum sets,
  // or by spectrum-set search for small scales.
  bool admissible_all = false;
  std::optional<long> inadmissible_index;
  std::string admissibility_note;

  long consecutive_count = 0;    // inspected levels with consecutive digit sets
  bool consecutive_recur = false;  // such levels recur forever (structural)
  std::optional<long> consecutive_witness;

  ConditionReport rbc_full;
  std::optional<ConditionReport> rbc_sub;         // over declared indices
  std::optional<ConditionReport> dbc_complement;  // over the rest
  std::optional<PccReports> pcc;  // over declared indices, else the whole sequence
  std::optional<double> divergence_radius;

  GcdTailReport gcd;              // informational, k = 0
  long scale_exceeds_digits = 0;  // #{inspected n : N_n > #B_n}
};

const char* to_string(ClassifyReport::Conclusion c);

// Decision tree over the sufficient conditions, strongest first:
//   1. remainder series converges + consecutive digit sets recur
//   2. declared consecutive subsequence with convergent remainder series
//      + digit-bounded complement
//   3. remainder series converges + partial concentration on a subsequence
//   4. subsequence remainder series + concentration + digit-bounded complement
//   5. existence only: remainder series, or the digit magnitude series
//   6. non-existence: structural mass divergence at some radius
// Subsequences come from the rule's declared index set, never from search.
// Spectral conclusions additionally require every inspected level admissible.
ClassifyReport classify(const SequenceSpec& spec, long n_max, double l = 0.5);

}  // namespace infconv
