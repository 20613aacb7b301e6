// Acceptance gate: one line per criterion, every tolerance stated inline.
// Each criterion also carries a wall-clock cap; blowing the cap fails it.
// Exit code is the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "infconv/conditions.hpp"
#include "infconv/existence.hpp"
#include "infconv/presets.hpp"
#include "infconv/spectra.hpp"
#include "infconv/transforms.hpp"
#include "json.hpp"

using namespace infconv;

namespace {

GeneratorPair ip(long long n, std::vector<long long> digits) {
  return GeneratorPair(static_cast<double>(n), DigitSet::from_ints(digits));
}

SequenceSpec cycle_spec(std::vector<GeneratorPair> pairs) {
  return SequenceSpec{Rule{CycleRule{std::move(pairs)}}, std::nullopt, SpectrumSets::none()};
}

struct Checker {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

// -- 1 -----------------------------------------------------------------------

void hadamard_certification(Checker& c) {
  auto t1 = check_unitarity(4, DigitSet::from_ints({0, 2}), {0, 1});
  auto t2 = check_unitarity(2, DigitSet::from_ints({0, 1}), {0, 1});
  auto t3 = check_unitarity(9, DigitSet::from_ints({0, 1, 5}), {0, 3, 6});
  auto bad = check_unitarity(4, DigitSet::from_ints({0, 2}), {0, 2});
  c.require(t1.residual <= 1e-12, "(4,{0,2},{0,1}) residual above 1e-12");
  c.require(t2.residual <= 1e-12, "(2,{0,1},{0,1}) residual above 1e-12");
  c.require(t3.residual <= 1e-12, "(9,{0,1,5},{0,3,6}) residual above 1e-12");
  c.require(!bad.certified(), "(4,{0,2},{0,2}) certified but must fail");
  char buf[128];
  std::snprintf(buf, sizeof buf, "worst good residual %.2e",
                std::max({t1.residual, t2.residual, t3.residual}));
  if (c.ok) c.detail = buf;
}

// -- 2 -----------------------------------------------------------------------

void escape_nonexistence(Checker& c) {
  SequenceSpec spec = preset("example-6.1")->spec;
  auto rep = three_series(spec, 1.0, 40);
  c.require(!rep.series_mass.empty() && rep.series_mass.back() == 20.0,
            "mass partial sum after 40 levels is not exactly 20");
  for (double t : rep.mass_terms)
    c.require(t == 0.5, "per-level truncated mass is not an exact half");
  c.require(rep.conclusion == ThreeSeriesReport::Conclusion::DoesNotExist,
            "three-series conclusion is not does-not-exist");
  auto cls = classify(spec, 40);
  c.require(cls.conclusion == ClassifyReport::Conclusion::DoesNotExist,
            "classify conclusion is not does-not-exist");
  if (c.ok) c.detail = "mass series hits 20 in exact halves";
}

// -- 3 -----------------------------------------------------------------------

void sparse_far_spectral(Checker& c) {
  SequenceSpec spec = preset("example-6.3")->spec;
  const double ceiling = 1.6449340668482264 - 1.0 + 1e-9;  // zeta(2) - 1 + slack

  auto rbc = check_rbc(spec, 200);
  c.require(!rbc.aggregate.empty(), "remainder report has no partial sums");
  for (double s : rbc.aggregate)
    c.require(s < ceiling, "remainder partial sum reaches pi^2/6 - 1");
  c.require(rbc.verdict.value == VerdictValue::ProvedByRule,
            "remainder verdict is not proved under the 1/(n+1)^2 tag");
  c.require(spec.tag && spec.tag->kind == ConvergenceTag::Kind::InverseSquare &&
                spec.tag->shift == 1,
            "preset lost its 1/(n+1)^2 tag");

  auto indices = spec.declared_indices();
  c.require(indices.has_value(), "no declared index subsequence");
  long family_levels = 0;
  for (long k = 1; indices && indices->nth(k) <= 200; ++k) {
    long n = indices->nth(k);
    auto cons = is_general_consecutive(spec.term(n));
    c.require(cons.consecutive, "digits at a declared level are not consecutive mod N");
    c.require(cons.size_divides_scale, "digit count fails to divide the scale");
    ++family_levels;
  }
  c.require(family_levels == 100, "expected 100 declared levels within 200");

  auto cls = classify(spec, 200);
  c.require(cls.conclusion == ClassifyReport::Conclusion::ExistsAndSpectral,
            "classify conclusion is not exists-and-spectral");
  c.require(cls.fully_proved, "classify conclusion is not fully proved");

  // Non-compactness: on the declared levels the far digit exceeds the full
  // cumulative product, so each indicator term is > 1 and k terms sum past
  // k - 1. Compared exactly in integers.
  BigInt prod = 1;
  long double sum = 0.0L;
  long k = 0;
  for (long n = 1; n <= 200; ++n) {
    GeneratorPair p = spec.term(n);
    prod *= p.scale_int();
    if (!indices->contains(n)) continue;
    const DigitSet& d = p.digits();
    BigInt far = d.exact(d.size() - 1);
    c.require(far > prod, "far digit does not exceed the cumulative product");
    sum += far.convert_to<long double>() / prod.convert_to<long double>();
    ++k;
    c.require(sum > static_cast<long double>(k - 1),
              "indicator sum fails to exceed k - 1");
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "remainder sum %.6f < %.6f; %ld consecutive levels; indicator sum %.3Lf > %ld",
                rbc.aggregate.back(), ceiling, family_levels, sum, k - 1);
  if (c.ok) c.detail = buf;
}

// -- 4 -----------------------------------------------------------------------

void quarter_spectrum(Checker& c) {
  SequenceSpec spec = preset("jp")->spec;
  auto triples = certified_triples(spec, 3);
  auto cand = candidate_spectrum(triples);
  std::vector<long long> expect{0, 1, 4, 5, 16, 17, 20, 21};
  c.require(cand.points.size() == expect.size(), "level-3 spectrum has wrong size");
  for (std::size_t i = 0; i < expect.size() && i < cand.points.size(); ++i)
    c.require(cand.points[i] == expect[i], "level-3 spectrum point mismatch");

  double gram = finite_level_gram(triples);
  c.require(gram <= 1e-10, "level-3 Gram residual above 1e-10");

  auto ortho = orthogonality_check(spec, 3, 40, 1e-8);
  c.require(ortho.max_modulus <= 1e-8, "pairwise transform modulus above 1e-8");
  c.require(ortho.passed, "orthogonality check reports failure");

  std::vector<double> grid;
  for (int i = 0; i < 128; ++i) grid.push_back(i / 128.0);
  auto comp = completeness_scan(spec, 8, grid, 40);
  c.require(comp.min_q >= 0.95, "level-8 min Q below 0.95");
  c.require(comp.band_contains_one, "slack-adjusted Q band misses 1");
  char buf[128];
  std::snprintf(buf, sizeof buf, "gram %.1e, ortho %.1e, min Q %.6f", gram,
                ortho.max_modulus, comp.min_q);
  if (c.ok) c.detail = buf;
}

// -- 5 -----------------------------------------------------------------------

double density_ratio(const SampleStats& st, double lo1, double hi1, double lo2,
                     double hi2) {
  auto mean_density = [&](double lo, double hi) {
    double acc = 0.0;
    long bins = 0;
    for (std::size_t i = 0; i < st.histogram.size(); ++i) {
      double center = st.bin_left + (static_cast<double>(i) + 0.5) * st.bin_width;
      if (center < lo || center > hi) continue;
      acc += static_cast<double>(st.histogram[i]) /
             (static_cast<double>(st.count) * st.bin_width);
      ++bins;
    }
    return bins ? acc / static_cast<double>(bins) : 0.0;
  };
  return mean_density(lo1, hi1) / mean_density(lo2, hi2);
}

void density_discrimination(Checker& c) {
  auto tilted = sample_measure(preset("example-6.2", "finite-ones")->spec, 40, 1000000, 20817);
  double r1 = density_ratio(tilted, 0.6, 1.4, 0.1, 0.4);
  c.require(r1 >= 1.9 && r1 <= 2.1, "tilted-density ratio outside [1.9, 2.1]");

  auto flat = sample_measure(preset("example-6.2", "all-threes")->spec, 40, 1000000, 20817);
  double r2 = density_ratio(flat, 0.6, 1.4, 0.1, 0.4);
  c.require(r2 >= 0.95 && r2 <= 1.05, "uniform-density ratio outside [0.95, 1.05]");
  char buf[96];
  std::snprintf(buf, sizeof buf, "ratios %.4f (target 2) and %.4f (target 1)", r1, r2);
  if (c.ok) c.detail = buf;
}

// -- 6 -----------------------------------------------------------------------

void sector_bound(Checker& c) {
  std::mt19937_64 rng(172845);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> msize(1, 12);
  const double pi = 3.141592653589793;

  double worst_margin = 1.0;
  for (int trial = 0; trial < 10000; ++trial) {
    double theta = 1e-3 + unit(rng) * (pi - 2e-3);
    double base = unit(rng) * 2.0 * pi;
    int m = msize(rng);
    std::complex<double> acc{0.0, 0.0};
    for (int j = 0; j < m; ++j) {
      double x = base + unit(rng) * theta;
      acc += std::complex<double>(std::cos(-x), std::sin(-x));
    }
    double margin = std::abs(acc) / m - r_theta(theta);
    worst_margin = std::min(worst_margin, margin);
    c.require(margin >= -1e-12, "sector average dips below cos(theta/2)");
  }

  double worst_eq = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    double theta = 1e-3 + unit(rng) * (pi - 2e-3);
    std::complex<double> acc =
        (std::complex<double>(1.0, 0.0) +
         std::complex<double>(std::cos(-theta), std::sin(-theta))) /
        2.0;
    worst_eq = std::max(worst_eq, std::abs(std::abs(acc) - r_theta(theta)));
  }
  c.require(worst_eq <= 1e-12, "two-point witness misses the bound by over 1e-12");
  char buf[96];
  std::snprintf(buf, sizeof buf, "worst margin %.2e, witness gap %.2e", worst_margin,
                worst_eq);
  if (c.ok) c.detail = buf;
}

// -- 7 -----------------------------------------------------------------------

void equipositivity(Checker& c) {
  std::ifstream gf(std::string(GOLDEN_DIR) + "/jp_equipositivity.json");
  c.require(gf.good(), "missing golden file jp_equipositivity.json");
  double golden_eps = nlohmann::json::parse(gf)["epsilon"].get<double>();

  auto scan = equipositivity_scan(preset("jp")->spec, {0, 1, 2}, 256, 2, 40, 1.0 / 64.0);
  c.require(scan.witness, "constant-sequence scan fails to produce a witness");
  c.require(scan.epsilon > 0.0, "epsilon is not positive");
  c.require(std::abs(scan.epsilon - golden_eps) <= 1e-12,
            "epsilon drifts from the frozen fine-grid value");

  long mismatches = 0;
  for (const auto& cell : scan.cells) {
    int want = cell.x < 0.5 ? 0 : -1;
    if (cell.shift == want) continue;
    ++mismatches;
    c.require(std::abs(cell.x - 0.5) <= 1.0 / 256.0 + 1e-12,
              "shift map deviates away from x = 1/2");
  }
  c.require(mismatches <= 2, "more than two shift-map deviations near x = 1/2");

  auto tail = equipositivity_scan(preset("example-6.2", "finite-ones")->spec, {1}, 256, 3,
                                  40, 1.0 / 64.0);
  c.require(!tail.witness, "uniform tail passes but must fail");
  c.require(tail.failing_x.has_value(), "failing scan reports no witness point");
  c.require(tail.failing_x && *tail.failing_x >= 0.0 && *tail.failing_x < 1.0,
            "failing x outside [0,1)");
  char buf[128];
  std::snprintf(buf, sizeof buf, "epsilon %.12f, %ld boundary cells, tail fails at x = %.6f",
                scan.epsilon, mismatches, tail.failing_x ? *tail.failing_x : -1.0);
  if (c.ok) c.detail = buf;
}

// -- 8 -----------------------------------------------------------------------

void transform_vs_dft(Checker& c) {
  std::vector<SequenceSpec> specs = {
      cycle_spec({ip(4, {0, 2})}),
      cycle_spec({ip(2, {0, 3})}),
      cycle_spec({ip(9, {0, 1, 5})}),
      cycle_spec({ip(3, {0, 1, 2}), ip(5, {0, 2, 4})}),
  };
  for (const auto& spec : specs) {
    for (long depth = 1; depth <= 4; ++depth) {
      std::vector<long double> atoms{0.0L};
      long double prod = 1.0L;
      for (long n = 1; n <= depth; ++n) {
        GeneratorPair p = spec.term(n);
        prod *= static_cast<long double>(p.scale());
        std::vector<long double> next;
        for (long double a : atoms)
          for (std::size_t i = 0; i < p.digits().size(); ++i)
            next.push_back(a + p.digits().approx(i) / prod);
        atoms = std::move(next);
      }
      for (double xi : {-1.7, -0.3, 0.25, 0.6, 1.9}) {
        std::complex<long double> acc{0.0L, 0.0L};
        for (long double a : atoms) {
          long double ph = -static_cast<long double>(kTwoPi) * xi * a;
          acc += std::complex<long double>(std::cos(ph), std::sin(ph));
        }
        acc /= static_cast<long double>(atoms.size());
        std::complex<double> direct(static_cast<double>(acc.real()),
                                    static_cast<double>(acc.imag()));
        auto t = transform_eval(spec, xi, depth);
        c.require(std::abs(t.value - direct) <= 1e-12,
                  "truncated transform drifts from the expanded-atom DFT");
      }
    }
  }
}

void clique_vs_exhaustive(Checker& c) {
  long checked = 0, nonempty = 0;
  for (long long n = 2; n <= 12; ++n) {
    std::vector<long long> universe;
    for (long long v = 0; v < n; ++v) universe.push_back(v);
    // All digit sets B inside {0,...,N-1} with 2 or 3 elements.
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      int bits = __builtin_popcount(mask);
      if (bits < 2 || bits > 3) continue;
      std::vector<long long> b;
      for (long long v = 0; v < n; ++v)
        if (mask & (1u << v)) b.push_back(v);
      DigitSet digits = DigitSet::from_ints(b);

      std::vector<std::vector<long long>> brute;
      for (unsigned lm = 0; lm < (1u << n); ++lm) {
        if (!(lm & 1u) || __builtin_popcount(lm) != bits) continue;
        std::vector<long long> l;
        for (long long v = 0; v < n; ++v)
          if (lm & (1u << v)) l.push_back(v);
        if (check_unitarity(n, digits, l).certified()) brute.push_back(l);
      }
      std::sort(brute.begin(), brute.end());

      auto found = find_spectrum_sets(n, digits, 4096);
      std::vector<std::vector<long long>> got;
      for (const auto& t : found) got.push_back(t.spectrum);
      std::sort(got.begin(), got.end());

      c.require(got == brute, "clique search disagrees with exhaustive enumeration");
      ++checked;
      if (!brute.empty()) ++nonempty;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%ld digit sets checked, %ld admissible", checked,
                nonempty);
  if (c.ok && c.detail.empty()) c.detail = buf;
}

void window_vs_brute(Checker& c) {
  std::mt19937_64 rng(90125);
  for (int trial = 0; trial < 200; ++trial) {
    long long n = 3 + static_cast<long long>(rng() % 38);
    std::size_t count = 2 + static_cast<std::size_t>(rng() % 7);
    std::vector<long long> pool;
    for (long long v = 0; v < n + n / 2 + 1; ++v) pool.push_back(v);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min(count, pool.size()));
    std::sort(pool.begin(), pool.end());
    GeneratorPair p = ip(n, pool);
    double l = (trial % 3 == 0) ? 0.3 : (trial % 3 == 1) ? 0.5 : 0.8;

    // Oracle: try every principal digit as the window's left edge.
    auto sp = split_digits(p);
    const double width = l * static_cast<double>(n);
    std::size_t best_cap = 0;
    for (std::size_t i = 0; i < sp.principal.size(); ++i) {
      std::size_t cap = 0;
      for (std::size_t j = i; j < sp.principal.size(); ++j)
        if (static_cast<double>(sp.principal[j] - sp.principal[i]) < width) ++cap;
      best_cap = std::max(best_cap, cap);
    }
    double want = static_cast<double>(pool.size() - best_cap) /
                  static_cast<double>(pool.size());

    auto rep = check_pcc(cycle_spec({p}), l, 1);
    c.require(!rep.window_case.per_term.empty(), "window report has no terms");
    c.require(std::abs(rep.window_case.per_term[0] - want) <= 1e-15,
              "sliding window disagrees with brute-force exclusion ratio");
  }
}

void oracle_equivalences(Checker& c) {
  transform_vs_dft(c);
  clique_vs_exhaustive(c);
  window_vs_brute(c);
  if (c.ok && c.detail.empty()) c.detail = "transform, clique, and window oracles agree";
}

// -- harness -----------------------------------------------------------------

struct Criterion {
  const char* label;
  double cap_seconds;
  void (*fn)(Checker&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"Hadamard certification residuals", 1.0, hadamard_certification},
      {"divergent truncation series rejects existence", 1.0, escape_nonexistence},
      {"sparse-far-digit sequence is provably spectral", 5.0, sparse_far_spectral},
      {"quarter-scale candidate spectrum verifies", 30.0, quarter_spectrum},
      {"sampled densities discriminate the two tails", 30.0, density_discrimination},
      {"sector mean-modulus lower bound", 1.0, sector_bound},
      {"equi-positivity scanner witness and shift map", 60.0, equipositivity},
      {"oracle equivalences (transform, clique, window)", 10.0, oracle_equivalences},
  };

  int failures = 0;
  int idx = 0;
  for (const auto& crit : criteria) {
    ++idx;
    Checker c;
    auto start = std::chrono::steady_clock::now();
    try {
      crit.fn(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > crit.cap_seconds) {
      c.ok = false;
      std::string cap = "over the " + std::to_string(crit.cap_seconds) + " s cap";
      c.detail = c.detail.empty() ? cap : c.detail + "; " + cap;
    }
    std::printf("[%s] %d. %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", idx, crit.label,
                elapsed, c.detail.empty() ? "" : ": ", c.detail.c_str());
    if (!c.ok) ++failures;
  }
  return failures;
}
