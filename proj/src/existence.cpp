#include "infconv/existence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "infconv/conditions.hpp"

namespace infconv {

namespace {

// Compares |b| against pi * r exactly: r = M * 2^(e-53) with M integral, so
// both sides become shifted integers. The fixed side (pi, r) is precomputed
// once; compare() then costs one small shift per digit.
struct BallEdge {
  BigInt rhs;
  unsigned lhs_shift = 0;

  BallEdge(const BigInt& pi, double r) {
    int e = 0;
    double f = std::frexp(r, &e);
    rhs = pi * static_cast<long long>(std::ldexp(f, 53));
    long t = e - 53;
    if (t >= 0)
      rhs <<= t;
    else
      lhs_shift = static_cast<unsigned>(-t);
  }

  int compare(const BigInt& b_abs) const {
    if (lhs_shift == 0) return b_abs.compare(rhs);
    BigInt lhs = b_abs << lhs_shift;
    return lhs.compare(rhs);
  }
};

int cmp_abs_vs_scaled(const BigInt& b_abs, const BigInt& pi, double r) {
  return BallEdge(pi, r).compare(b_abs);
}

// num / den in long double, shifting first when den exceeds the exponent
// range. den > 0.
long double big_ratio(const BigInt& num, const BigInt& den) {
  if (num == 0) return 0.0L;
  BigInt n = num, d = den;
  unsigned bits = boost::multiprecision::msb(d);
  if (bits > 16000) {
    unsigned drop = bits - 16000;
    n >>= drop;
    d >>= drop;
    if (d == 0) d = 1;
  }
  return n.convert_to<long double>() / d.convert_to<long double>();
}

bool exact_level(const GeneratorPair& p) {
  return p.scale_integral() && p.digits().all_integral();
}

struct LevelMoments {
  double mass = 0.0;  // fraction outside the closed ball
  double mean = 0.0;  // truncated mean
  double var = 0.0;   // truncated variance
};

// Exact per-level moments of the truncated measure: numerators accumulate in
// integers, one rounding at the end.
LevelMoments level_moments_exact(const GeneratorPair& p, const BigInt& pi, double r) {
  const DigitSet& d = p.digits();
  const std::size_t m = d.size();
  const BallEdge edge(pi, r);
  long out = 0;
  BigInt sum1 = 0, sum2 = 0;
  for (std::size_t i = 0; i < m; ++i) {
    BigInt b = d.exact(i);
    if (edge.compare(abs(b)) > 0) {
      ++out;
      continue;
    }
    sum1 += b;
    sum2 += b * b;
  }
  LevelMoments lm;
  lm.mass = static_cast<double>(out) / static_cast<double>(m);
  BigInt den = pi * static_cast<long long>(m);
  long double e = (sum1 < 0 ? -big_ratio(-sum1, den) : big_ratio(sum1, den));
  long double s2 = big_ratio(sum2, den * pi);
  lm.mean = static_cast<double>(e);
  lm.var = static_cast<double>(std::max(s2 - e * e, 0.0L));
  return lm;
}

LevelMoments level_moments_approx(const GeneratorPair& p, long double pi, double r) {
  const auto& vals = p.digits().values();
  const std::size_t m = vals.size();
  long out = 0;
  long double s1 = 0.0L, s2 = 0.0L;
  for (long double b : vals) {
    long double x = b / pi;
    if (std::fabs(x) > static_cast<long double>(r)) {
      ++out;
      continue;
    }
    s1 += x;
    s2 += x * x;
  }
  LevelMoments lm;
  lm.mass = static_cast<double>(out) / static_cast<double>(m);
  long double e = s1 / static_cast<long double>(m);
  lm.mean = static_cast<double>(e);
  lm.var = static_cast<double>(std::max(s2 / static_cast<long double>(m) - e * e, 0.0L));
  return lm;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

// ---------------------------------------------------------------------------
// Truncated atoms

TruncatedAtom truncated_atoms(const SequenceSpec& spec, long level, double radius) {
  if (level < 1) throw DomainError("truncated_atoms: level must be at least 1");
  if (!(radius > 0.0)) throw DomainError("truncated_atoms: radius must be positive");

  std::vector<GeneratorPair> terms = expand_sequence(spec, level);
  bool exact = true;
  BigInt pi = 1;
  long double pi_ld = 1.0L;
  for (const auto& t : terms) {
    exact = exact && exact_level(t);
    if (exact) pi *= t.scale_int();
    pi_ld *= static_cast<long double>(t.scale());
  }

  const GeneratorPair& p = terms.back();
  const std::size_t m = p.digits().size();
  TruncatedAtom out;
  out.level = level;
  out.radius = radius;
  long double w = 1.0L / static_cast<long double>(m);
  long dropped = 0;
  for (std::size_t i = 0; i < m; ++i) {
    long double x;
    bool inside;
    if (exact) {
      BigInt b = p.digits().exact(i);
      inside = cmp_abs_vs_scaled(abs(b), pi, radius) <= 0;
      x = (b < 0 ? -big_ratio(-b, pi) : big_ratio(b, pi));
    } else {
      x = p.digits().approx(i) / pi_ld;
      inside = std::fabs(x) <= static_cast<long double>(radius);
    }
    out.atom_locations.push_back(x);
    out.weights.push_back(w);
    out.kept.push_back(inside ? 1 : 0);
    if (!inside) ++dropped;
  }
  out.truncated_mass = static_cast<long double>(dropped) * w;
  return out;
}

// ---------------------------------------------------------------------------
// Three-series test

const char* to_string(ThreeSeriesReport::Conclusion c) {
  switch (c) {
    case ThreeSeriesReport::Conclusion::Exists: return "exists";
    case ThreeSeriesReport::Conclusion::DoesNotExist: return "does-not-exist";
    case ThreeSeriesReport::Conclusion::Unknown: return "unknown";
  }
  return "?";
}

namespace {

// First index whose value crosses the threshold, at or past `from`.
std::optional<long> first_at_least(const std::vector<long>& idx, const std::vector<double>& v,
                                   long from, double threshold) {
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (idx[i] >= from && v[i] >= threshold) return idx[i];
  return std::nullopt;
}

}  // namespace

namespace {

// Body of three_series over pre-expanded terms, so the divergence probe can
// reuse one expansion across its radius sweep.
ThreeSeriesReport three_series_over(const SequenceSpec& spec,
                                    const std::vector<GeneratorPair>& terms, double radius,
                                    long n_max) {
  ThreeSeriesReport rep;
  rep.radius = radius;
  rep.n_max = n_max;

  bool exact = true;
  BigInt pi = 1;
  long double pi_ld = 1.0L;
  double sm = 0.0, se = 0.0, sv = 0.0;
  for (long n = 1; n <= n_max; ++n) {
    const GeneratorPair& p = terms[static_cast<std::size_t>(n - 1)];
    exact = exact && exact_level(p);
    if (exact) pi *= p.scale_int();
    pi_ld *= static_cast<long double>(p.scale());
    LevelMoments lm =
        exact ? level_moments_exact(p, pi, radius) : level_moments_approx(p, pi_ld, radius);
    rep.indices.push_back(n);
    rep.mass_terms.push_back(lm.mass);
    rep.mean_terms.push_back(lm.mean);
    rep.var_terms.push_back(lm.var);
    sm += lm.mass;
    se += lm.mean;
    sv += lm.var;
    rep.series_mass.push_back(sm);
    rep.series_mean.push_back(se);
    rep.series_var.push_back(sv);
  }

  // Structural tails / divergence. Cycles beat families beat tags; nothing
  // structural is claimed for approximate (non-integral) inputs.
  SeriesStructure st_mass, st_mean, st_var;
  std::vector<double> abs_mean(rep.mean_terms.size());
  for (std::size_t i = 0; i < abs_mean.size(); ++i) abs_mean[i] = std::fabs(rep.mean_terms[i]);

  auto cyc = eventual_cycle(spec);
  const FamilyRule* fam = spec.family();
  bool gate = n_max > 0 && exact && cmp_abs_vs_scaled(1, pi, radius) <= 0;  // 1 <= pi*r

  if (exact && n_max > 0 && cyc) {
    bool cyc_exact = true;
    BigInt big_m = 0;
    for (const auto& p : cyc->terms) {
      cyc_exact = cyc_exact && exact_level(p);
      if (!cyc_exact) break;
      for (std::size_t i = 0; i < p.digits().size(); ++i)
        big_m = std::max(big_m, BigInt(abs(p.digits().exact(i))));
    }
    if (cyc_exact && n_max + 1 >= cyc->start) {
      if (cmp_abs_vs_scaled(big_m, pi, radius) <= 0) {
        st_mass.tail_sum = 0.0;
        st_mass.tail_note =
            "every recurring digit already fits the ball at the horizon and scale "
            "products only grow";
      }
      double m_over_pi = static_cast<double>(big_ratio(big_m, pi));
      st_mean.tail_sum = m_over_pi;
      st_mean.tail_note = "recurring digits are bounded and scale products at least double";
      st_var.tail_sum = m_over_pi * m_over_pi / 3.0;
      st_var.tail_note = st_mean.tail_note;
    }
  } else if (exact && n_max > 0 && fam && fam->family == FamilyKind::GeometricEscape) {
    if (radius <= 1.0) {
      if (auto w = first_at_least(rep.indices, rep.mass_terms, 1, 0.5)) {
        st_mass.divergence_witness = *w;
        st_mass.divergence_note =
            "the far digit keeps the fraction 1 + 2^-n of the scale product, outside "
            "every ball of radius at most 1";
      }
      st_mean.tail_sum = 0.0;
      st_mean.tail_note = "only the zero atom stays inside the ball";
      st_var.tail_sum = 0.0;
      st_var.tail_note = st_mean.tail_note;
    } else {
      BigInt far = (BigInt(1) << static_cast<unsigned>(n_max + 1)) + 1;
      if (cmp_abs_vs_scaled(far, pi * 2, radius) <= 0) {
        st_mass.tail_sum = 0.0;
        st_mass.tail_note = "beyond the horizon both atoms sit inside the ball";
        if (auto w = first_at_least(rep.indices, abs_mean, 1, 0.5)) {
          st_mean.divergence_witness = *w;
          st_mean.divergence_note =
              "both atoms persist inside the ball, so every level contributes a mean "
              "of at least one half";
        }
        if (auto w = first_at_least(rep.indices, rep.var_terms, 1, 0.25)) {
          st_var.divergence_witness = *w;
          st_var.divergence_note =
              "both atoms persist inside the ball a unit apart, so each level keeps a "
              "variance near one quarter";
        }
      }
    }
  } else if (exact && n_max > 0 && fam && fam->family == FamilyKind::SparseFarDigit) {
    if (gate) {
      st_mass.tail_sum = 1.0 / static_cast<double>(n_max + 1);
      st_mass.tail_note =
          "beyond the horizon only the sparse far digit can leave the ball, one digit "
          "in (n+1)^2";
    }
    double inv_pi = static_cast<double>(big_ratio(1, pi));
    double far_cap = std::min(radius, 2.0);
    st_mean.tail_sum = 6.0 * inv_pi + far_cap / static_cast<double>(n_max + 1);
    st_mean.tail_note =
        "small digits stay below the inverse scale product; the far atom is worth at "
        "most min(r, 2) and appears once per (n+1)^2 digits";
    st_var.tail_sum = far_cap * *st_mean.tail_sum;
    st_var.tail_note = "kept atoms never exceed min(r, 2) in magnitude";
  } else if (exact && n_max > 0 && spec.tag) {
    bool tag_ok = true;
    for (long n = 1; n <= n_max && tag_ok; ++n) {
      const GeneratorPair& p = terms[static_cast<std::size_t>(n - 1)];
      auto sp = split_digits(p);
      double ratio = static_cast<double>(sp.remainder_count) /
                     static_cast<double>(p.digits().size());
      if (ratio > spec.tag->bound(n) * (1 + 1e-12) + 1e-15) tag_ok = false;
    }
    if (tag_ok) {
      double tail = spec.tag->tail_sum(n_max);
      if (gate) {
        st_mass.tail_sum = tail;
        st_mass.tail_note =
            "declared decay tag, verified against the inspected remainder ratios; "
            "principal digits fall inside the ball beyond the horizon";
      }
      double inv_pi = static_cast<double>(big_ratio(1, pi));
      st_mean.tail_sum = 2.0 * inv_pi + radius * tail;
      st_mean.tail_note =
          "principal atoms stay below the inverse scale product and kept remainder "
          "atoms below the radius, with the tag bounding their fraction";
      st_var.tail_sum = radius * *st_mean.tail_sum;
      st_var.tail_note = "kept atoms never exceed the radius in magnitude";
    }
  }

  rep.mass = series_verdict(rep.indices, rep.mass_terms, st_mass, std::nullopt);
  rep.mean = series_verdict(rep.indices, abs_mean, st_mean, std::nullopt);
  rep.var = series_verdict(rep.indices, rep.var_terms, st_var, std::nullopt);

  if (rep.mass.value == VerdictValue::Fails || rep.mean.value == VerdictValue::Fails ||
      rep.var.value == VerdictValue::Fails) {
    rep.conclusion = ThreeSeriesReport::Conclusion::DoesNotExist;
    const char* which = rep.mass.value == VerdictValue::Fails
                            ? "mass"
                            : (rep.mean.value == VerdictValue::Fails ? "mean" : "variance");
    const Verdict& v = rep.mass.value == VerdictValue::Fails
                           ? rep.mass
                           : (rep.mean.value == VerdictValue::Fails ? rep.mean : rep.var);
    rep.reason = std::string("the ") + which + " series diverges by rule: " + v.reason;
  } else if (rep.mass.holds() && rep.mean.holds() && rep.var.holds()) {
    rep.conclusion = ThreeSeriesReport::Conclusion::Exists;
    rep.reason = "all three truncation series converge at radius " + [&] {
      std::ostringstream os;
      os << radius;
      return os.str();
    }();
  } else {
    rep.conclusion = ThreeSeriesReport::Conclusion::Unknown;
    rep.reason = n_max == 0 ? "no levels inspected"
                            : "at least one truncation series is unresolved at this horizon";
  }
  return rep;
}

}  // namespace

ThreeSeriesReport three_series(const SequenceSpec& spec, double radius, long n_max) {
  if (!(radius > 0.0)) throw DomainError("three_series: radius must be positive");
  if (n_max < 0) throw DomainError("three_series: n_max must be nonnegative");
  return three_series_over(spec, expand_sequence(spec, n_max), radius, n_max);
}

std::optional<std::pair<double, long>> mass_divergence_probe(const SequenceSpec& spec,
                                                             long n_max) {
  if (n_max < 0) throw DomainError("mass_divergence_probe: n_max must be nonnegative");
  std::vector<GeneratorPair> terms = expand_sequence(spec, n_max);
  for (int j = 10; j >= -10; --j) {
    double r = std::ldexp(1.0, j);
    ThreeSeriesReport rep = three_series_over(spec, terms, r, n_max);
    if (rep.mass.value == VerdictValue::Fails && rep.mass.witness_index)
      return std::make_pair(r, *rep.mass.witness_index);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Direct criteria

const char* to_string(ExistenceReport::Conclusion c) {
  switch (c) {
    case ExistenceReport::Conclusion::Exists: return "exists";
    case ExistenceReport::Conclusion::DoesNotExist: return "does-not-exist";
    case ExistenceReport::Conclusion::Unknown: return "unknown";
  }
  return "?";
}

ExistenceReport existence_verdict(const SequenceSpec& spec, long n_max) {
  ExistenceReport rep;
  rep.remainder_series = check_rbc(spec, n_max).verdict;

  // Magnitude series: sum of max|b| / (N_1...N_n).
  std::vector<GeneratorPair> terms = expand_sequence(spec, n_max);
  std::vector<long> idx;
  std::vector<double> mag;
  bool exact = true;
  BigInt pi = 1;
  long double pi_ld = 1.0L;
  double total = 0.0;
  for (long n = 1; n <= n_max; ++n) {
    const GeneratorPair& p = terms[static_cast<std::size_t>(n - 1)];
    exact = exact && exact_level(p);
    if (exact) pi *= p.scale_int();
    pi_ld *= static_cast<long double>(p.scale());
    double t;
    if (exact) {
      BigInt big_m = 0;
      for (std::size_t i = 0; i < p.digits().size(); ++i)
        big_m = std::max(big_m, BigInt(abs(p.digits().exact(i))));
      t = static_cast<double>(big_ratio(big_m, pi));
    } else {
      t = static_cast<double>(p.digits().max_abs() / pi_ld);
    }
    idx.push_back(n);
    mag.push_back(t);
    total += t;
    rep.magnitude_partial.push_back(total);
  }

  SeriesStructure st;
  auto cyc = eventual_cycle(spec);
  const FamilyRule* fam = spec.family();
  if (exact && n_max > 0 && cyc && n_max + 1 >= cyc->start) {
    BigInt big_m = 0;
    bool cyc_exact = true;
    for (const auto& p : cyc->terms) {
      cyc_exact = cyc_exact && exact_level(p);
      if (!cyc_exact) break;
      for (std::size_t i = 0; i < p.digits().size(); ++i)
        big_m = std::max(big_m, BigInt(abs(p.digits().exact(i))));
    }
    if (cyc_exact) {
      st.tail_sum = static_cast<double>(big_ratio(big_m, pi));
      st.tail_note = "recurring digits are bounded and scale products at least double";
    }
  } else if (fam) {
    // Far digits exceed the scale product itself, so the terms cannot tend
    // to zero along the family subsequence.
    if (auto w = first_at_least(idx, mag, 1, 1.0)) {
      st.divergence_witness = *w;
      st.divergence_note = "the far digit exceeds the full scale product at family levels";
    }
  }
  rep.magnitude_series = series_verdict(idx, mag, st, std::nullopt);

  auto probe = mass_divergence_probe(spec, n_max);
  if (probe) {
    rep.divergence_radius = probe->first;
    rep.divergence_witness = probe->second;
  }

  bool positive = rep.remainder_series.holds() || rep.magnitude_series.holds();
  if (positive && probe) {
    rep.conclusion = ExistenceReport::Conclusion::Unknown;
    rep.criterion = "conflict";
    rep.reason =
        "conflicting structural analyses: a sufficient series converges while the "
        "truncated-mass series diverges; refusing both conclusions";
  } else if (rep.remainder_series.holds()) {
    rep.conclusion = ExistenceReport::Conclusion::Exists;
    rep.criterion = "convergent remainder series";
    rep.reason = rep.remainder_series.reason;
  } else if (rep.magnitude_series.holds()) {
    rep.conclusion = ExistenceReport::Conclusion::Exists;
    rep.criterion = "convergent digit-magnitude series";
    rep.reason = rep.magnitude_series.reason;
  } else if (probe) {
    rep.conclusion = ExistenceReport::Conclusion::DoesNotExist;
    rep.criterion = "divergent truncated-mass series";
    std::ostringstream os;
    os << "the truncated-mass series diverges by rule at radius " << probe->first;
    rep.reason = os.str();
  } else {
    rep.conclusion = ExistenceReport::Conclusion::Unknown;
    rep.criterion = "";
    rep.reason = "no sufficient or divergence criterion established within the horizon";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Mixed criterion

MixedExistenceReport mixed_existence(const SequenceSpec& spec, long n_max) {
  std::optional<IndexSet> declared = spec.declared_indices();
  if (!declared)
    throw DomainError("mixed_existence: the rule declares no index subsequence");

  MixedExistenceReport rep;
  rep.subsequence_remainder = check_rbc(spec, n_max, declared, false).verdict;
  rep.complement_digit_bound = check_dbc(spec, declared, n_max, true).verdict;
  rep.exists = rep.subsequence_remainder.value == VerdictValue::ProvedByRule &&
               rep.complement_digit_bound.value == VerdictValue::ProvedByRule;
  rep.reason = std::string("subsequence remainder series: ") + rep.subsequence_remainder.reason +
               "; complement digit bound: " + rep.complement_digit_bound.reason;
  return rep;
}

// ---------------------------------------------------------------------------
// Sampling

SampleStats sample_measure(const SequenceSpec& spec, long depth, long long count,
                           std::uint64_t seed) {
  if (depth < 1) throw DomainError("sample_measure: depth must be at least 1");
  if (count < 1) throw DomainError("sample_measure: count must be at least 1");

  std::vector<GeneratorPair> terms = expand_sequence(spec, depth);
  std::vector<std::vector<long double>> atoms(static_cast<std::size_t>(depth));
  bool exact = true;
  BigInt pi = 1;
  long double pi_ld = 1.0L;
  for (long n = 1; n <= depth; ++n) {
    const GeneratorPair& p = terms[static_cast<std::size_t>(n - 1)];
    exact = exact && exact_level(p);
    if (exact) pi *= p.scale_int();
    pi_ld *= static_cast<long double>(p.scale());
    auto& row = atoms[static_cast<std::size_t>(n - 1)];
    for (std::size_t i = 0; i < p.digits().size(); ++i) {
      if (exact) {
        BigInt b = p.digits().exact(i);
        row.push_back(b < 0 ? -big_ratio(-b, pi) : big_ratio(b, pi));
      } else {
        row.push_back(p.digits().approx(i) / pi_ld);
      }
    }
  }

  constexpr long long kShard = 65536;
  auto for_each_sample = [&](auto&& visit) {
    long long produced = 0;
    for (long long shard = 0; produced < count; ++shard) {
      std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(shard)));
      long long in_shard = std::min(kShard, count - produced);
      for (long long i = 0; i < in_shard; ++i) {
        long double x = 0.0L;
        for (const auto& row : atoms) x += row[rng() % row.size()];
        visit(x);
      }
      produced += in_shard;
    }
  };

  long double s1 = 0.0L, s2 = 0.0L;
  long double lo = std::numeric_limits<long double>::max();
  long double hi = std::numeric_limits<long double>::lowest();
  for_each_sample([&](long double x) {
    s1 += x;
    s2 += x * x;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  });

  SampleStats st;
  st.depth = depth;
  st.count = count;
  st.seed = seed;
  long double mean = s1 / static_cast<long double>(count);
  st.mean = static_cast<double>(mean);
  st.variance =
      static_cast<double>(std::max(s2 / static_cast<long double>(count) - mean * mean, 0.0L));
  st.min_value = static_cast<double>(lo);
  st.max_value = static_cast<double>(hi);

  st.histogram.assign(kHistogramBins, 0);
  st.bin_left = st.min_value;
  long double width = (hi - lo) / kHistogramBins;
  st.bin_width = static_cast<double>(width);
  if (width > 0.0L) {
    for_each_sample([&](long double x) {
      auto idx = static_cast<long long>((x - lo) / width);
      idx = std::clamp<long long>(idx, 0, kHistogramBins - 1);
      ++st.histogram[static_cast<std::size_t>(idx)];
    });
  } else {
    st.histogram[0] = count;
  }

  if (auto cyc = eventual_cycle(spec)) {
    bool cyc_exact = exact;
    BigInt big_m = 0;
    long double approx_m = 0.0L;
    for (const auto& p : cyc->terms) {
      cyc_exact = cyc_exact && exact_level(p);
      approx_m = std::max(approx_m, p.digits().max_abs());
      if (cyc_exact)
        for (std::size_t i = 0; i < p.digits().size(); ++i)
          big_m = std::max(big_m, BigInt(abs(p.digits().exact(i))));
    }
    long double bound = cyc_exact ? 2.0L * big_ratio(big_m, pi) : 2.0L * approx_m / pi_ld;
    st.truncation_displacement = static_cast<double>(bound);
  }
  return st;
}

}  // namespace infconv
