#pragma once
// Existence decisions for the infinite convolution: the truncation
// three-series test on a finite horizon, the direct sufficient and
// divergence criteria, the mixed subsequence criterion, and Monte-Carlo
// sampling for cross-validation.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "infconv/core.hpp"

namespace infconv {

// ---------------------------------------------------------------------------
// Truncated level measures
//
// Level n carries the uniform measure on B_n / (N_1...N_n). Truncation at
// radius r relocates the mass of atoms outside the closed ball [-r, r] to the
// origin, so the truncated measure is again a probability measure. Ball
// membership is decided exactly (integer digits against the dyadic radius),
// so an atom sitting exactly on the boundary counts as kept.

struct TruncatedAtom {
  long level = 0;
  double radius = 0.0;
  std::vector<long double> atom_locations;  // b / (N_1...N_n), sorted
  std::vector<long double> weights;         // aligned; uniformly 1/#B_n
  std::vector<char> kept;                   // inside the closed ball
  long double truncated_mass = 0.0;         // mass relocated to the origin
};

TruncatedAtom truncated_atoms(const SequenceSpec& spec, long level, double radius);

// ---------------------------------------------------------------------------
// Three-series test

struct ThreeSeriesReport {
  double radius = 1.0;
  long n_max = 0;
  std::vector<long> indices;
  // Per-level values: mass outside the ball, truncated mean, truncated
  // variance. The identity V = (integral of x^2) - E^2 holds per level.
  std::vector<double> mass_terms, mean_terms, var_terms;
  // Partial-sum trajectories. The mean trajectory is signed; its verdict
  // addresses absolute convergence (which is what the tail bounds deliver).
  std::vector<double> series_mass, series_mean, series_var;
  Verdict mass, mean, var;

  enum class Conclusion { Exists, DoesNotExist, Unknown };
  Conclusion conclusion = Conclusion::Unknown;
  std::string reason;
};

const char* to_string(ThreeSeriesReport::Conclusion c);

// The convolution exists iff the mass, mean, and variance series of the
// truncated level measures all converge. Verdicts combine inspected partial
// sums with structural tails (recurring cycles, recognized families, or a
// verified tag); DoesNotExist requires structural mass divergence, never just
// a large partial sum.
ThreeSeriesReport three_series(const SequenceSpec& spec, double radius, long n_max);

// Structural divergence probe: scans radii 2^j, j = 10 down to -10, for a
// mass series diverging by rule; reports the largest such radius and the
// witness level.
std::optional<std::pair<double, long>> mass_divergence_probe(const SequenceSpec& spec,
                                                             long n_max);

// ---------------------------------------------------------------------------
// Direct existence criteria

struct ExistenceReport {
  enum class Conclusion { Exists, DoesNotExist, Unknown };
  Conclusion conclusion = Conclusion::Unknown;
  std::string criterion;  // test that settled it
  std::string reason;

  Verdict remainder_series;  // sum of #B_{n,2}/#B_n converges (sufficient)
  Verdict magnitude_series;  // sum of max|b|/(N_1...N_n) converges (sufficient)
  std::vector<double> magnitude_partial;
  std::optional<double> divergence_radius;  // divergence criterion witness
  std::optional<long> divergence_witness;
};

const char* to_string(ExistenceReport::Conclusion c);

ExistenceReport existence_verdict(const SequenceSpec& spec, long n_max);

// ---------------------------------------------------------------------------
// Mixed criterion: declared subsequence + bounded complement

struct MixedExistenceReport {
  Verdict subsequence_remainder;   // remainder series over the declared indices
  Verdict complement_digit_bound;  // digit bound over the rest
  bool exists = false;             // both ProvedByRule
  std::string reason;
};

// Requires a rule-declared index subsequence (family or interleave); throws
// DomainError otherwise.
MixedExistenceReport mixed_existence(const SequenceSpec& spec, long n_max);

// ---------------------------------------------------------------------------
// Monte-Carlo sampling

inline constexpr int kHistogramBins = 300;

struct SampleStats {
  long depth = 0;
  long long count = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double variance = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  // kHistogramBins equal bins covering [bin_left, bin_left + bins*bin_width);
  // the maximum sample is clamped into the last bin.
  std::vector<long long> histogram;
  double bin_left = 0.0;
  double bin_width = 0.0;
  // Worst-case displacement caused by cutting the digit expansion at `depth`,
  // when the tail structure yields a finite bound (recurring cycles do;
  // growing-digit families do not).
  std::optional<double> truncation_displacement;
};

// Draws x = sum_{n <= depth} b_n/(N_1...N_n) with each b_n uniform on B_n.
// Deterministic for a fixed seed: samples are generated in 65536-sample
// shards seeded by a splitmix64 stream, independent of thread count.
SampleStats sample_measure(const SequenceSpec& spec, long depth, long long count,
                           std::uint64_t seed);

}  // namespace infconv
