// Truncated Fourier transforms of infinite convolutions and their tails.
//
// The transform of the full measure is the infinite product of digit-set
// masks at arguments shrunk by the cumulative scale products. Evaluation
// truncates that product and certifies the discarded part factor-wise: each
// factor differs from 1 by at most
//
//   s_n = 2*pi*|xi| * max(B_{n,1}) / (N_1...N_n) + 2 * #B_{n,2} / #B_n
//
// (principal digits via the mean-value estimate, remainder digits crudely),
// and the dropped tail satisfies |product - 1| <= expm1(sum s_n). The
// remainder-ratio part of the sum past the inspected horizon needs
// structural cover: an eventual cycle whose terms have no remainder digits,
// a convergence tag verified against the inspected prefix, or a closed-form
// family. Without cover, or once the sum exceeds 1, the bound is reported
// as absent (unbounded).
//
// Precision: phase arguments b*xi/(N_1...N_n) are evaluated from precompiled
// ratios. For integral digit sets the integer part of b/(rebased product) is
// split off exactly in big-integer arithmetic, so tail transforms stay
// accurate even when digits dwarf 2^53. For non-integral digit sets the
// phases are plain long double products; their digits are at most 2^53, so
// accuracy degrades only at extreme |xi|.
#pragma once

#include "infconv/core.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace infconv {

inline constexpr double kTwoPi = 6.283185307179586;

struct MaskEvaluation {
  std::complex<double> value;
  double argument = 0.0;
};

// (1/#B) sum_b e^{-2 pi i b xi}. Requires #B >= 2.
MaskEvaluation mask_eval(const DigitSet& digits, double xi);

struct TruncatedTransform {
  long depth = 0;
  std::vector<long double> cumulative_scales;  // N_1, N_1N_2, ..., through depth
  std::complex<double> value;
  // Modulus bound on (full product) - (truncated product); absent = unbounded.
  std::optional<double> tail_error_bound;
};

// Precompiled view of the first `horizon` terms of a sequence: cumulative
// products, per-level phase ratios, per-level deviation data and the
// structural cover for everything past the horizon.
class CompiledSequence {
 public:
  CompiledSequence(const SequenceSpec& spec, long horizon);

  long horizon() const { return (long)terms_.size(); }
  const GeneratorPair& term(long n) const { return terms_.at((std::size_t)(n - 1)); }
  long double cumulative_scale(long n) const { return prod_ld_.at((std::size_t)n); }

  // Truncated transform value of the tail measure re-based at start+1
  // (start = 0 is the full measure). Requires start + depth <= horizon.
  std::complex<double> partial(long start, long depth, double xi) const;

  // Sum of factor deviations s_n over n in (from, horizon] for the tail
  // re-based at `start`, plus the cover of everything past the horizon.
  // Absent when no cover applies or an inspected term is inadmissible.
  std::optional<double> deviation_sum(long start, long from, double xi) const;

  // expm1 of the deviation sum; absent when that sum is absent or > 1.
  std::optional<double> tail_bound(long start, long from, double xi) const;

 private:
  struct PhaseTerm {
    long double ratio = 0.0L;  // fractional ratio, exact integer part in q
    BigInt q;
    bool big = false;
  };
  struct Level {
    std::vector<PhaseTerm> terms;
    double inv_size = 0.0;
  };

  std::vector<Level> compile_levels(long start) const;
  static std::complex<double> eval_levels(const std::vector<Level>& levels, long depth,
                                          double xi);
  friend class TailView;

  std::vector<GeneratorPair> terms_;
  std::vector<long double> prod_ld_;  // [n] = N_1...N_n, [0] = 1
  std::vector<BigInt> prod_int_;      // exact, only when integral_scales_
  bool integral_scales_ = true;
  bool admissible_all_ = true;

  std::vector<Level> root_;  // start = 0 phases

  // deviation machinery
  std::vector<long double> prefix_principal_;  // [n] = sum_{k<=n} maxp_k / prod_k
  std::vector<long double> prefix_remainder_;  // [n] = sum_{k<=n} 2 * rr_k
  std::vector<double> remainder_ratio_;        // [n-1] = #B_{n,2} / #B_n
  bool cover_cycle_zero_ = false;
  bool cover_family_ = false;   // sparse-far-digit closed form
  bool tag_verified_ = false;
  std::optional<ConvergenceTag> tag_;
  bool min_scale_ok_ = false;   // every term the rule can produce has N >= 2
  std::optional<double> remainder_cover_;  // per-horizon constant, absent = none
};

// Reusable rebased view for scanning many xi against one tail.
class TailView {
 public:
  TailView(const CompiledSequence& cs, long start);
  long start() const { return start_; }
  long max_depth() const { return (long)levels_.size(); }
  std::complex<double> partial(long depth, double xi) const;

 private:
  long start_;
  std::vector<CompiledSequence::Level> levels_;
};

// Truncated transform of the full measure with a tail bound taken at the
// truncation depth itself.
TruncatedTransform transform_eval(const SequenceSpec& spec, double xi, long depth);

// Factor-wise tail bound for levels past from_depth, inspecting the sequence
// up to `horizon`. Absent = unbounded.
std::optional<double> tail_bound(const SequenceSpec& spec, double xi, long from_depth,
                                 long horizon);

// Truncated transform of the tail measure re-based at start_index+1;
// start_index = 0 reproduces transform_eval.
TruncatedTransform tail_transform_eval(const SequenceSpec& spec, long start_index, double xi,
                                       long depth);

struct AdaptiveDepth {
  long depth = 0;
  std::optional<double> bound;
  bool met = false;  // bound < tol reached within the cap
};

// Smallest depth whose tail bound drops under tol, capped. When the cap
// binds the result carries the bound achieved there.
AdaptiveDepth adaptive_depth(const SequenceSpec& spec, double xi, double tol = 1e-8,
                             long cap = 200);

}  // namespace infconv
