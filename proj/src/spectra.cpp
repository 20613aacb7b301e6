#include "infconv/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "infconv/transforms.hpp"

namespace infconv {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559L;
constexpr double kPi = 3.141592653589793;

long long integral_scale(const GeneratorPair& p, long n, const char* op) {
  double s = p.scale();
  if (!(s >= 2.0) || s != std::floor(s) || s >= 9.2e18)
    throw DomainError(std::string(op) + ": scale at level " + std::to_string(n) +
                      " is not a representable integer >= 2");
  return (long long)s;
}

// (1/#B) sum_b e^{-2 pi i ((b*delta) mod P)/P}, the finite-convolution
// transform factor at integer argument delta for the level with exact
// digit values `digits` and cumulative scale product P.
std::complex<long double> exact_mask_factor(const std::vector<BigInt>& digits,
                                            const BigInt& delta, const BigInt& P) {
  std::complex<long double> acc(0.0L, 0.0L);
  for (const BigInt& b : digits) {
    BigInt t = (b * delta) % P;
    if (t < 0) t += P;
    long double ratio = t.convert_to<long double>() / P.convert_to<long double>();
    long double ph = -kTwoPiL * ratio;
    acc += std::complex<long double>(std::cos(ph), std::sin(ph));
  }
  return acc / (long double)digits.size();
}

}  // namespace

SpectrumCandidate candidate_spectrum(const std::vector<HadamardTriple>& triples) {
  if (triples.empty()) throw DomainError("candidate_spectrum: no triples");

  std::vector<BigInt> points{BigInt(0)};
  BigInt weight = 1;
  std::size_t cardinality = 1;
  SpectrumCandidate out;
  for (const auto& t : triples) {
    if (t.spectrum.empty()) throw DomainError("candidate_spectrum: empty spectrum set");
    std::vector<BigInt> next;
    next.reserve(points.size() * t.spectrum.size());
    for (const BigInt& p : points)
      for (long long l : t.spectrum) next.push_back(p + weight * l);
    points = std::move(next);
    weight *= t.scale;
    cardinality *= t.spectrum.size();
    out.spectrum_sets.push_back(t.spectrum);
  }

  std::sort(points.begin(), points.end());
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i] == points[i - 1])
      throw DomainError("candidate_spectrum: colliding expansions at point " +
                        points[i].str());

  out.level = (long)triples.size();
  out.cardinality = cardinality;
  out.points_approx.reserve(points.size());
  for (const BigInt& p : points) out.points_approx.push_back(p.convert_to<double>());
  out.points = std::move(points);
  return out;
}

std::vector<HadamardTriple> certified_triples(const SequenceSpec& spec, long level) {
  if (level < 1) throw DomainError("certified_triples: level must be >= 1");
  std::vector<HadamardTriple> out;
  out.reserve((std::size_t)level);
  for (long n = 1; n <= level; ++n) {
    GeneratorPair p = spec.term(n);
    long long scale = integral_scale(p, n, "certified_triples");
    auto set = spec.spectrum_set(n);
    if (!set)
      throw DomainError("certified_triples: no spectrum set declared at level " +
                        std::to_string(n));
    HadamardTriple t = check_unitarity(scale, p.digits(), *set);
    if (!t.certified())
      throw DomainError("certified_triples: level " + std::to_string(n) +
                        " fails certification (residual " + std::to_string(t.residual) +
                        ")");
    out.push_back(std::move(t));
  }
  return out;
}

double finite_level_gram(const std::vector<HadamardTriple>& triples) {
  if (triples.empty()) throw DomainError("finite_level_gram: no triples");

  std::size_t m = 1;
  for (const auto& t : triples) {
    if (t.digits.empty()) throw DomainError("finite_level_gram: empty digit set");
    if (t.spectrum.size() != t.digits.size())
      throw DomainError("finite_level_gram: #L != #B at some level, matrix not square");
    m *= t.digits.size();
    if (m > kGramGuard)
      throw GuardError("finite_level_gram: atom count exceeds " +
                       std::to_string(kGramGuard));
  }

  // Atom numerators over the full scale product, built by Horner steps;
  // a coincidence would merge weights and void the orthonormality claim.
  std::vector<BigInt> atoms{BigInt(0)};
  BigInt denom = 1;
  for (const auto& t : triples) {
    std::vector<BigInt> next;
    next.reserve(atoms.size() * t.digits.size());
    for (const BigInt& a : atoms)
      for (const BigInt& b : t.digits) next.push_back(a * t.scale + b);
    atoms = std::move(next);
    denom *= t.scale;
  }
  std::sort(atoms.begin(), atoms.end());
  for (std::size_t i = 1; i < atoms.size(); ++i)
    if (atoms[i] == atoms[i - 1])
      throw DomainError("finite_level_gram: coincident atoms at " + atoms[i].str() + "/" +
                        denom.str());

  SpectrumCandidate cand = candidate_spectrum(triples);

  std::vector<BigInt> prods;  // cumulative scale products
  BigInt acc = 1;
  for (const auto& t : triples) {
    acc *= t.scale;
    prods.push_back(acc);
  }

  // Gram entry for a pair is the finite-convolution transform at the
  // point difference, a product of per-level digit masks.
  long double worst = 0.0L;
  for (std::size_t j = 0; j + 1 < cand.points.size(); ++j) {
    for (std::size_t k = j + 1; k < cand.points.size(); ++k) {
      BigInt delta = cand.points[k] - cand.points[j];
      std::complex<long double> g(1.0L, 0.0L);
      for (std::size_t lev = 0; lev < triples.size(); ++lev)
        g *= exact_mask_factor(triples[lev].digits, delta, prods[lev]);
      worst = std::max(worst, std::abs(g));
    }
  }
  return (double)worst;
}

OrthogonalityReport orthogonality_check(const SequenceSpec& spec, long level, long depth,
                                        double tol) {
  if (depth < 1) throw DomainError("orthogonality_check: depth must be >= 1");
  if (!(tol > 0.0)) throw DomainError("orthogonality_check: tol must be positive");
  auto cand = candidate_spectrum(certified_triples(spec, level));

  OrthogonalityReport rep;
  rep.level = level;
  rep.depth = depth;
  rep.tol = tol;

  CompiledSequence cs(spec, depth);
  bool bound_ok = true;
  double worst_bound = 0.0;
  for (std::size_t j = 0; j + 1 < cand.points.size(); ++j) {
    for (std::size_t k = j + 1; k < cand.points.size(); ++k) {
      double diff = (cand.points[k] - cand.points[j]).convert_to<double>();
      double mod = std::abs(cs.partial(0, depth, diff));
      ++rep.pair_count;
      if (mod > rep.max_modulus) {
        rep.max_modulus = mod;
        rep.worst_lambda = cand.points_approx[k];
        rep.worst_lambda_prime = cand.points_approx[j];
      }
      if (bound_ok) {
        auto u = cs.tail_bound(0, depth, diff);
        if (u)
          worst_bound = std::max(worst_bound, *u);
        else
          bound_ok = false;
      }
    }
  }
  if (bound_ok) rep.max_tail_bound = worst_bound;
  rep.passed = rep.max_modulus < tol;
  return rep;
}

CompletenessReport completeness_scan(const SequenceSpec& spec, long level,
                                     const std::vector<double>& xi_grid, long depth) {
  if (depth < 1) throw DomainError("completeness_scan: depth must be >= 1");
  if (xi_grid.empty()) throw DomainError("completeness_scan: empty grid");
  auto cand = candidate_spectrum(certified_triples(spec, level));

  CompletenessReport rep;
  rep.level = level;
  rep.depth = depth;
  rep.lambda_count = cand.points.size();
  rep.points.reserve(xi_grid.size());

  CompiledSequence cs(spec, depth);
  double band_hi = -std::numeric_limits<double>::infinity();
  bool band_ok = true;
  for (double xi : xi_grid) {
    long double q = 0.0L;
    long double slack = 0.0L;
    bool slack_ok = true;
    for (double lam : cand.points_approx) {
      double arg = xi + lam;
      double av = std::abs(cs.partial(0, depth, arg));
      q += (long double)av * av;
      if (slack_ok) {
        auto u = cs.tail_bound(0, depth, arg);
        if (u)
          slack += (long double)*u * (2.0L * av + (long double)*u);
        else
          slack_ok = false;
      }
    }
    CompletenessPoint pt;
    pt.xi = xi;
    pt.q = (double)q;
    if (slack_ok) pt.slack = (double)slack;
    if (slack_ok)
      band_hi = std::max(band_hi, pt.q + *pt.slack);
    else
      band_ok = false;
    rep.points.push_back(pt);
  }

  rep.min_q = rep.points.front().q;
  rep.max_q = rep.points.front().q;
  for (const auto& pt : rep.points) {
    rep.min_q = std::min(rep.min_q, pt.q);
    rep.max_q = std::max(rep.max_q, pt.q);
  }
  if (band_ok) {
    rep.max_q_plus_slack = band_hi;
    rep.band_contains_one = rep.min_q <= 1.0 && band_hi >= 1.0;
  }
  return rep;
}

EquiPositivityScan equipositivity_scan(const SequenceSpec& spec,
                                       const std::vector<long>& tail_indices,
                                       long grid_resolution, int shift_range, long depth,
                                       double delta_probe, double epsilon_floor) {
  if (tail_indices.empty()) throw DomainError("equipositivity_scan: no tail indices");
  for (long n : tail_indices)
    if (n < 0) throw DomainError("equipositivity_scan: tail index must be >= 0");
  if (grid_resolution < 1) throw DomainError("equipositivity_scan: grid must be >= 1");
  if (shift_range < 0) throw DomainError("equipositivity_scan: shift range must be >= 0");
  if (depth < 1) throw DomainError("equipositivity_scan: depth must be >= 1");
  if (delta_probe < 0.0 || epsilon_floor < 0.0)
    throw DomainError("equipositivity_scan: negative probe or floor");

  long max_index = *std::max_element(tail_indices.begin(), tail_indices.end());
  CompiledSequence cs(spec, max_index + depth);
  std::vector<TailView> views;
  views.reserve(tail_indices.size());
  for (long n : tail_indices) views.emplace_back(cs, n);

  std::vector<int> shifts{0};
  for (int k = 1; k <= shift_range; ++k) {
    shifts.push_back(-k);
    shifts.push_back(k);
  }
  std::vector<double> probes{0.0};
  if (delta_probe > 0.0) {
    probes.push_back(-delta_probe);
    probes.push_back(delta_probe);
  }

  EquiPositivityScan scan;
  scan.tail_indices = tail_indices;
  scan.grid_resolution = grid_resolution;
  scan.shift_range = shift_range;
  scan.product_depth = depth;
  scan.delta_probe = delta_probe;
  scan.epsilon_floor = epsilon_floor;
  scan.epsilon = std::numeric_limits<double>::infinity();
  scan.cells.reserve((std::size_t)grid_resolution);

  std::size_t worst_cell = 0;
  for (long i = 0; i < grid_resolution; ++i) {
    double x = (double)i / (double)grid_resolution;
    EquiPositivityCell cell;
    cell.x = x;
    cell.score = std::numeric_limits<double>::infinity();
    for (std::size_t vi = 0; vi < views.size(); ++vi) {
      double best = -1.0;
      int best_k = 0;
      for (int k : shifts) {
        if (i == 0 && k != 0) continue;  // the shift at x = 0 is pinned to 0
        double s = std::numeric_limits<double>::infinity();
        for (double y : probes)
          s = std::min(s, std::abs(views[vi].partial(depth, x + y + k)));
        if (s > best) {
          best = s;
          best_k = k;
        }
      }
      if (best < cell.score) {
        cell.score = best;
        cell.shift = best_k;
        cell.worst_index = tail_indices[vi];
      }
    }
    if (cell.score < scan.epsilon) {
      scan.epsilon = cell.score;
      worst_cell = scan.cells.size();
    }
    scan.cells.push_back(cell);
  }

  scan.witness = scan.epsilon >= epsilon_floor;
  if (!scan.witness) {
    scan.failing_x = scan.cells[worst_cell].x;
    scan.failing_index = scan.cells[worst_cell].worst_index;
  }
  return scan;
}

double r_theta(double theta) {
  if (!(theta > 0.0) || !(theta < kPi))
    throw DomainError("r_theta: theta outside (0, pi)");
  return std::cos(theta * 0.5);
}

WidenedAngle widen_theta(double theta, double c) {
  if (!(theta > 0.0) || !(theta < kPi))
    throw DomainError("widen_theta: theta outside (0, pi)");
  if (!(c > 0.0) || !(c < 1.0)) throw DomainError("widen_theta: c outside (0, 1)");
  double tp = 2.0 * std::acos(c * std::cos(theta * 0.5));
  if (tp >= kPi) tp = std::nextafter(kPi, 0.0);
  WidenedAngle out;
  out.theta_prime = tp;
  out.delta = tp / theta - 1.0;
  return out;
}

}  // namespace infconv
