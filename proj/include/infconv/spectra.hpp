// Candidate spectra built from certified triples, exact finite-level
// verification, and numerical scanners for completeness and equi-positivity.
//
// The exact layer (candidate_spectrum, finite_level_gram) works in big
// integers: spectrum points are mixed-radix sums l_1 + N_1 l_2 + ... and
// Gram phases reduce b*(lambda - lambda') modulo the cumulative scale
// product before any floating division, so huge digits lose nothing. The
// scanners are grid evidence, not proofs: they record resolution, probe
// offsets and truncation depth so a run can be reproduced or refined.
#pragma once

#include "infconv/conditions.hpp"
#include "infconv/core.hpp"

#include <optional>
#include <vector>

namespace infconv {

// ---------------------------------------------------------------------------
// Candidate spectra

struct SpectrumCandidate {
  long level = 0;
  std::vector<std::vector<long long>> spectrum_sets;  // L_1..L_level
  std::vector<BigInt> points;                         // sorted ascending
  std::vector<double> points_approx;                  // aligned double views
  std::size_t cardinality = 0;                        // prod #L_k
};

// Lambda(level) = {l_1 + N_1 l_2 + ... + N_1...N_{level-1} l_level}.
// Certification is the caller's obligation (see certified_triples); what is
// enforced here is injectivity. A colliding pair of expansions throws
// DomainError naming the repeated point, since every downstream claim
// counts multiplicities as 1.
SpectrumCandidate candidate_spectrum(const std::vector<HadamardTriple>& triples);

// Certifies the first `level` terms of the spec against its declared
// spectrum sets. Throws DomainError when a level has no declared set, a
// scale is not a positive integer, or the unitarity residual exceeds the
// certification threshold.
std::vector<HadamardTriple> certified_triples(const SequenceSpec& spec, long level);

// ---------------------------------------------------------------------------
// Exact finite-level completeness

inline constexpr std::size_t kGramGuard = 4096;

// Max-norm residual of Gram - I for the m x m matrix with rows indexed by
// the atoms x of the finite convolution of the triples, columns by
// Lambda(level), entries m^{-1/2} e^{-2 pi i x lambda}, m = prod #B_k.
// Residual <= 1e-10 certifies Lambda(level) as an exact spectrum of the
// finite convolution. Entries factor through per-level masks, so the cost
// is O(m^2) mask products rather than O(m^3).
//
// Guards: m <= kGramGuard (GuardError). Throws DomainError when some
// #L_k != #B_k or two atoms coincide; coincident atoms would need merged
// weights and the orthonormality claim presumes they never occur.
double finite_level_gram(const std::vector<HadamardTriple>& triples);

// ---------------------------------------------------------------------------
// Orthogonality of exponentials against the full measure

struct OrthogonalityReport {
  long level = 0;
  long depth = 0;
  double tol = 0.0;
  std::size_t pair_count = 0;  // unordered distinct pairs
  double max_modulus = 0.0;    // worst truncated |mu_hat(lambda - lambda')|
  double worst_lambda = 0.0;
  double worst_lambda_prime = 0.0;
  // Largest per-evaluation truncation bound; absent when any lacks cover.
  std::optional<double> max_tail_bound;
  bool passed = false;  // max_modulus < tol
};

// Evaluates the truncated transform at every difference of distinct points
// of Lambda(level). Presumes the infinite convolution exists; a single
// point is a vacuous pass.
OrthogonalityReport orthogonality_check(const SequenceSpec& spec, long level, long depth,
                                        double tol);

// ---------------------------------------------------------------------------
// Completeness function scan

struct CompletenessPoint {
  double xi = 0.0;
  double q = 0.0;  // sum over lambda of truncated |mu_hat(xi + lambda)|^2
  // Sum of (|v| + U)^2 - |v|^2 over lambda, U the per-evaluation
  // truncation bound; absent when any U is absent.
  std::optional<double> slack;
};

struct CompletenessReport {
  long level = 0;
  long depth = 0;
  std::size_t lambda_count = 0;
  std::vector<CompletenessPoint> points;
  double min_q = 0.0;
  double max_q = 0.0;
  std::optional<double> max_q_plus_slack;
  // True when [min_q, max (q + slack)] contains 1; false whenever the
  // slack is unavailable.
  bool band_contains_one = false;
};

// Q(xi) = sum_{lambda in Lambda(level)} |mu_hat(xi + lambda)|^2. The full
// spectrum would give Q = 1 identically; restriction to Lambda(level) and
// depth truncation push Q below and above 1 respectively, hence the band.
CompletenessReport completeness_scan(const SequenceSpec& spec, long level,
                                     const std::vector<double>& xi_grid, long depth);

// ---------------------------------------------------------------------------
// Equi-positivity scanner

struct EquiPositivityCell {
  double x = 0.0;
  int shift = 0;         // k chosen at the worst tail index
  long worst_index = 0;  // tail index attaining the cell score
  double score = 0.0;    // min over tail indices of the best shifted modulus
};

struct EquiPositivityScan {
  std::vector<long> tail_indices;
  long grid_resolution = 0;
  int shift_range = 0;
  long product_depth = 0;
  double delta_probe = 0.0;
  double epsilon_floor = 0.0;
  double epsilon = 0.0;  // infimum of cell scores over the grid
  bool witness = false;  // epsilon >= epsilon_floor
  std::vector<EquiPositivityCell> cells;
  // Populated when witness is false: where the scan bottomed out.
  std::optional<double> failing_x;
  std::optional<long> failing_index;
};

inline constexpr double kDefaultEpsilonFloor = 0.01;
inline constexpr int kDefaultShiftRange = 3;

// For each grid point x = i/grid and tail index n, maximizes over shifts
// k in {-K..K} (scanned 0, -1, +1, -2, +2, ...; ties keep the earlier k;
// k is pinned to 0 at x = 0) the minimum of |nu_hat_{>n}(x + y + k)| over
// probes y in {-delta, 0, +delta}, nu_{>n} the tail measure re-based at
// n + 1. epsilon is the infimum over grid and indices. On any finite grid
// sampled moduli near a transform zero are tiny but positive, so the
// witness demands epsilon >= epsilon_floor rather than > 0.
EquiPositivityScan equipositivity_scan(const SequenceSpec& spec,
                                       const std::vector<long>& tail_indices,
                                       long grid_resolution, int shift_range, long depth,
                                       double delta_probe,
                                       double epsilon_floor = kDefaultEpsilonFloor);

// ---------------------------------------------------------------------------
// Sector mean bounds

// Sharp uniform lower bound cos(theta/2) for |(1/m) sum e^{-i x_j}| over
// phases x_j in a closed sector of width theta, 0 < theta < pi. Attained
// by m = 2, {0, theta}.
double r_theta(double theta);

struct WidenedAngle {
  double theta_prime = 0.0;
  double delta = 0.0;  // (1 + d) * theta <= theta_prime for all 0 < d < delta
};

// Widest sector theta' in (theta, pi) whose bound is still >= c * r_theta(theta):
// theta' = 2*acos(c*cos(theta/2)), with the relative headroom delta.
WidenedAngle widen_theta(double theta, double c);

}  // namespace infconv
