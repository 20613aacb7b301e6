#include "infconv/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <variant>

#include "infconv/existence.hpp"

namespace infconv {

namespace {

constexpr long double kTwoPiL = 6.28318530717958647692528676655900577L;

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Index patterns

bool IndexPattern::contains(long n) const {
  if (n < 1) return false;
  if (n < start) return std::binary_search(head.begin(), head.end(), n);
  return residues[static_cast<std::size_t>((n - start) % period)] != 0;
}

bool IndexPattern::infinite() const {
  return std::any_of(residues.begin(), residues.end(), [](char c) { return c != 0; });
}

std::optional<long> IndexPattern::next(long n) const {
  if (n < 1) n = 1;
  if (n < start) {
    auto it = std::lower_bound(head.begin(), head.end(), n);
    if (it != head.end()) return *it;
    n = start;
  }
  if (!infinite()) return std::nullopt;
  for (long m = n; m < n + period; ++m)
    if (residues[static_cast<std::size_t>((m - start) % period)] != 0) return m;
  return std::nullopt;
}

std::optional<long> IndexPattern::kth(long k) const {
  if (k < 1) return std::nullopt;
  if (k <= static_cast<long>(head.size())) return head[static_cast<std::size_t>(k - 1)];
  k -= static_cast<long>(head.size());
  long per_period = 0;
  for (char c : residues) per_period += (c != 0);
  if (per_period == 0) return std::nullopt;
  long full = (k - 1) / per_period;
  long want = (k - 1) % per_period;  // 0-based within a period
  for (long i = 0; i < period; ++i) {
    if (residues[static_cast<std::size_t>(i)] == 0) continue;
    if (want-- == 0) return start + full * period + i;
  }
  return std::nullopt;
}

IndexPattern pattern_all() { return IndexPattern{}; }

IndexPattern pattern_from_index_set(const IndexSet& s) {
  IndexPattern p;
  if (s.kind() == IndexSet::Kind::Arithmetic) {
    p.start = std::max(s.first(), 1L);
    p.period = s.step();
    p.residues.assign(static_cast<std::size_t>(p.period), 0);
    p.residues[0] = 1;
  } else {
    p.head = s.list();
    std::sort(p.head.begin(), p.head.end());
    p.start = p.head.empty() ? 1 : p.head.back() + 1;
    p.period = 1;
    p.residues = {0};
  }
  return p;
}

IndexPattern pattern_complement(const IndexPattern& p) {
  IndexPattern out;
  out.start = p.start;
  out.period = p.period;
  out.residues.resize(p.residues.size());
  for (std::size_t i = 0; i < p.residues.size(); ++i) out.residues[i] = p.residues[i] ? 0 : 1;
  for (long n = 1; n < p.start; ++n)
    if (!p.contains(n)) out.head.push_back(n);
  return out;
}

IndexPattern pattern_intersect(const IndexPattern& a, const IndexPattern& b) {
  IndexPattern out;
  out.start = std::max(a.start, b.start);
  long l = std::lcm(a.period, b.period);
  if (l > kMaxPatternPeriod)
    throw GuardError("pattern_intersect: combined period exceeds the guard");
  out.period = l;
  out.residues.resize(static_cast<std::size_t>(l));
  for (long i = 0; i < l; ++i) {
    long n = out.start + i;
    out.residues[static_cast<std::size_t>(i)] = (a.contains(n) && b.contains(n)) ? 1 : 0;
  }
  for (long n = 1; n < out.start; ++n)
    if (a.contains(n) && b.contains(n)) out.head.push_back(n);
  return out;
}

// ---------------------------------------------------------------------------
// Filtered structure

namespace {

bool same_index_set(const IndexSet& a, const IndexSet& b) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == IndexSet::Kind::Arithmetic)
    return a.first() == b.first() && a.step() == b.step();
  return a.list() == b.list();
}

}  // namespace

FilteredStructure filtered_structure(const SequenceSpec& spec,
                                     const std::optional<IndexSet>& filter,
                                     bool complement, long n_max) {
  IndexPattern F = filter ? pattern_from_index_set(*filter) : pattern_all();
  if (complement) F = pattern_complement(F);

  FilteredStructure out;
  for (long n = 1; n <= n_max; ++n) {
    if (!F.contains(n)) continue;
    out.indices.push_back(n);
    out.terms.push_back(spec.term(n));
  }
  out.infinite = F.infinite();

  // A filter matching an interleave's declared set selects exactly the sub
  // stream (or, complemented, the base stream); analyze that rule in its own
  // numbering and map the landmarks back. The tag transfers: stream position
  // k sits at sequence index n(k) >= k and every tag bound is decreasing.
  if (const auto* il = std::get_if<InterleaveRule>(&spec.rule); il && filter) {
    if (same_index_set(*filter, il->indices)) {
      SequenceSpec child{complement ? *il->base : *il->sub, spec.tag, SpectrumSets::none()};
      FilteredStructure inner =
          filtered_structure(child, std::nullopt, false, static_cast<long>(out.indices.size()));
      out.pattern_known = inner.pattern_known;
      out.recurring = inner.recurring;
      if (out.infinite) {
        out.sparse_far_infinite = inner.sparse_far_infinite;
        out.escape_infinite = inner.escape_infinite;
      } else {
        out.recurring.clear();
      }
      auto mapped = F.kth(inner.tail_start);
      out.tail_start = mapped ? *mapped : n_max + 2;
      if (inner.family_witness) {
        if (auto w = F.kth(*inner.family_witness)) out.family_witness = w;
      }
      if (out.infinite && out.tail_start > n_max + 1) out.pattern_known = false;
      return out;
    }
  }

  if (auto cyc = eventual_cycle(spec)) {
    long period_count = static_cast<long>(cyc->terms.size());
    long base = std::max(cyc->start, F.start);
    long window = std::lcm(period_count, F.period);
    if (window <= kMaxPatternPeriod) {
      std::set<long> picked;
      for (long n = base; n < base + window; ++n)
        if (F.contains(n)) picked.insert((n - cyc->start) % period_count);
      for (long i : picked) out.recurring.push_back(cyc->terms[static_cast<std::size_t>(i)]);
      out.pattern_known = true;
      out.tail_start = base;
      if (out.infinite && out.tail_start > n_max + 1) out.pattern_known = false;
      return out;
    }
    return out;  // pattern too coarse to compose; stay conservative
  }

  if (const FamilyRule* fam = spec.family()) {
    IndexPattern G = fam->family == FamilyKind::GeometricEscape
                         ? pattern_all()
                         : pattern_from_index_set(fam->indices);
    IndexPattern on = pattern_intersect(F, G);
    IndexPattern off = pattern_intersect(F, pattern_complement(G));
    out.pattern_known = true;
    out.tail_start = std::max(on.start, off.start);
    if (fam->family == FamilyKind::GeometricEscape) {
      out.escape_infinite = on.infinite();
    } else {
      out.sparse_far_infinite = on.infinite();
      if (off.infinite()) {
        if (auto first_off = off.next(1)) out.recurring.push_back(spec.term(*first_off));
      }
    }
    out.family_witness = on.next(1);
    if (out.infinite && out.tail_start > n_max + 1) out.pattern_known = false;
    return out;
  }

  return out;  // nested family inside an interleave: no structural claims
}

// ---------------------------------------------------------------------------
// Hadamard triples

HadamardTriple check_unitarity(long long scale, const DigitSet& digits,
                               const std::vector<long long>& spectrum) {
  if (scale < 2) throw DomainError("check_unitarity: scale must be at least 2");
  if (digits.size() < 2) throw DomainError("check_unitarity: need at least two digits");
  if (digits.size() != spectrum.size())
    throw DomainError("check_unitarity: digit and spectrum sets must have equal size");
  if (!digits.all_integral()) throw DomainError("check_unitarity: digits must be integers");

  const std::size_t m = digits.size();
  std::vector<long long> res(m);
  BigInt big_scale = scale;
  for (std::size_t i = 0; i < m; ++i) {
    BigInt v = digits.exact(i) % big_scale;
    if (v < 0) v += big_scale;
    res[i] = v.convert_to<long long>();
  }

  // Gram entry (a, b) of the normalized column matrix is the mask value
  // (1/m) sum_i e(-2*pi*i * res_i * (L_a - L_b) / N); phases reduce mod N
  // exactly in 128-bit integers.
  double residual = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      __int128 diff = static_cast<__int128>(spectrum[a]) - spectrum[b];
      diff %= scale;
      long double re = 0.0L, im = 0.0L;
      for (std::size_t i = 0; i < m; ++i) {
        __int128 t = static_cast<__int128>(res[i]) * diff % scale;
        if (t < 0) t += scale;
        long double ang = -kTwoPiL * static_cast<long double>(static_cast<long long>(t)) /
                          static_cast<long double>(scale);
        re += std::cos(ang);
        im += std::sin(ang);
      }
      re /= static_cast<long double>(m);
      im /= static_cast<long double>(m);
      long double want = (a == b) ? 1.0L : 0.0L;
      double dev = static_cast<double>(std::hypot(re - want, im));
      residual = std::max(residual, dev);
    }
  }

  HadamardTriple out;
  out.scale = scale;
  out.digits.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.digits.push_back(digits.exact(i));
  out.spectrum = spectrum;
  out.residual = residual;
  return out;
}

std::vector<HadamardTriple> find_spectrum_sets(long long scale, const DigitSet& digits,
                                               std::size_t max_results) {
  if (scale < 2) throw DomainError("find_spectrum_sets: scale must be at least 2");
  if (scale > 10000) throw GuardError("find_spectrum_sets: scale above 10^4 refused");
  if (digits.size() < 2) throw DomainError("find_spectrum_sets: need at least two digits");
  if (!digits.all_integral()) throw DomainError("find_spectrum_sets: digits must be integers");

  const std::size_t m = digits.size();
  std::vector<HadamardTriple> out;
  if (max_results == 0 || static_cast<long long>(m) > scale) return out;

  std::vector<long long> res(m);
  BigInt big_scale = scale;
  for (std::size_t i = 0; i < m; ++i) {
    BigInt v = digits.exact(i) % big_scale;
    if (v < 0) v += big_scale;
    res[i] = v.convert_to<long long>();
  }

  // Difference set: arguments j/N at which the digit mask vanishes.
  std::vector<char> in_d(static_cast<std::size_t>(scale), 0);
  for (long long j = 1; j < scale; ++j) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t i = 0; i < m; ++i) {
      long double ang = -kTwoPiL * static_cast<long double>(res[i] % scale * j % scale) /
                        static_cast<long double>(scale);
      re += std::cos(ang);
      im += std::sin(ang);
    }
    re /= static_cast<long double>(m);
    im /= static_cast<long double>(m);
    in_d[static_cast<std::size_t>(j)] = (std::hypot(re, im) <= 1e-12L) ? 1 : 0;
  }

  std::vector<long long> cur{0};
  long long nodes = 0;
  bool truncated = false;

  std::function<void(long long)> descend = [&](long long from) {
    if (truncated || out.size() >= max_results) return;
    if (cur.size() == m) {
      out.push_back(check_unitarity(scale, digits, cur));
      return;
    }
    long long needed = static_cast<long long>(m - cur.size());
    for (long long j = from; j + needed - 1 < scale; ++j) {
      if (!in_d[static_cast<std::size_t>(j)]) continue;
      bool ok = true;
      for (long long l : cur) {
        long long d = (j - l) % scale;
        if (d < 0) d += scale;
        if (d != 0 && !in_d[static_cast<std::size_t>(d)]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (++nodes > kCliqueNodeBudget) {
        truncated = true;
        return;
      }
      cur.push_back(j);
      descend(j + 1);
      cur.pop_back();
      if (truncated || out.size() >= max_results) return;
    }
  };
  descend(1);
  return out;
}

// ---------------------------------------------------------------------------
// Condition kinds

const char* to_string(ConditionKind k) {
  switch (k) {
    case ConditionKind::RBC: return "remainder-bounded";
    case ConditionKind::PCCWindow: return "concentration-window";
    case ConditionKind::PCCBand: return "concentration-band";
    case ConditionKind::DBC: return "digit-bounded";
    case ConditionKind::GeneralConsecutive: return "general-consecutive";
    case ConditionKind::GcdCriterion: return "difference-gcd";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// RBC

namespace {

double remainder_ratio(const GeneratorPair& p) {
  auto sp = split_digits(p);
  return static_cast<double>(sp.remainder_count) / static_cast<double>(p.digits().size());
}

// First inspected index at or past `from` whose term value satisfies `pred`.
template <typename Pred>
std::optional<long> find_witness(const std::vector<long>& indices,
                                 const std::vector<double>& values, long from, Pred pred) {
  for (std::size_t i = 0; i < indices.size(); ++i)
    if (indices[i] >= from && pred(values[i])) return indices[i];
  return std::nullopt;
}

}  // namespace

ConditionReport check_rbc(const SequenceSpec& spec, long n_max,
                          const std::optional<IndexSet>& filter, bool complement) {
  FilteredStructure s = filtered_structure(spec, filter, complement, n_max);

  ConditionReport rep;
  rep.condition = ConditionKind::RBC;
  rep.indices = s.indices;
  double sum = 0.0;
  for (const auto& term : s.terms) {
    double t = remainder_ratio(term);
    rep.per_term.push_back(t);
    sum += t;
    rep.aggregate.push_back(sum);
  }

  SeriesStructure st;
  if (s.pattern_known) {
    if (!s.infinite) {
      st.tail_sum = 0.0;
      st.tail_note = "the filtered index set is finite and fully inspected";
    } else if (s.escape_infinite) {
      if (auto w = find_witness(rep.indices, rep.per_term, s.tail_start,
                                [](double v) { return v > 0.0; })) {
        st.divergence_witness = *w;
        st.divergence_note =
            "the escaping far digit lies outside [0, N) at every level, so the "
            "remainder ratio stays at 1/2";
      }
    } else {
      double recurring_positive = 0.0;
      for (const auto& p : s.recurring)
        recurring_positive = std::max(recurring_positive, remainder_ratio(p));
      if (recurring_positive > 0.0) {
        if (auto w = find_witness(rep.indices, rep.per_term, s.tail_start, [&](double v) {
              return v >= recurring_positive * (1 - 1e-9);
            })) {
          st.divergence_witness = *w;
          st.divergence_note = "a term with remainder ratio " +
                               format_double(recurring_positive) +
                               " recurs at infinitely many filtered levels";
        }
      } else if (!s.sparse_far_infinite) {
        st.tail_sum = 0.0;
        st.tail_note = "every recurring term keeps its digits inside [0, N)";
      }
      // Sparse-far-digit levels contribute 1/(n+1)^2 each; certification of
      // that tail goes through the tag so the proof stays user-auditable.
    }
  }

  rep.verdict = series_verdict(rep.indices, rep.per_term, st, spec.tag);
  if (rep.verdict.value == VerdictValue::EmpiricallyHolds && s.sparse_far_infinite &&
      !spec.tag) {
    rep.verdict.reason +=
        "; the family bounds remainder ratios by 1/(n+1)^2, so an inverse-square tag "
        "with c = 1, shift = 1 certifies the tail";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// DBC

ConditionReport check_dbc(const SequenceSpec& spec, const std::optional<IndexSet>& index_filter,
                          long n_max, bool complement) {
  FilteredStructure s = filtered_structure(spec, index_filter, complement, n_max);

  ConditionReport rep;
  rep.condition = ConditionKind::DBC;
  rep.indices = s.indices;
  double sup_ratio = 0.0, sup_card = 0.0;
  for (const auto& term : s.terms) {
    double ratio =
        static_cast<double>(term.digits().max_abs() / static_cast<long double>(term.scale()));
    double card = static_cast<double>(term.digits().size());
    rep.per_term.push_back(ratio);
    rep.per_term_extra.push_back(card);
    sup_ratio = std::max(sup_ratio, ratio);
    sup_card = std::max(sup_card, card);
    rep.aggregate.push_back(sup_ratio);
  }
  rep.parameters["sup_ratio_observed"] = sup_ratio;
  rep.parameters["sup_cardinality_observed"] = sup_card;

  if (rep.indices.empty() && s.pattern_known && !s.infinite) {
    rep.verdict = {VerdictValue::ProvedByRule, "the filter selects no levels", std::nullopt, 0.0};
    return rep;
  }

  if (s.pattern_known) {
    if (s.sparse_far_infinite || s.escape_infinite) {
      Verdict v;
      v.value = VerdictValue::Fails;
      v.reason =
          "far-digit family levels hit the filter infinitely often; their digit grows "
          "with the scale product, so max|b|/N is unbounded";
      v.witness_index = s.family_witness;
      rep.verdict = v;
      return rep;
    }
    double bound_ratio = sup_ratio, bound_card = sup_card;
    for (const auto& p : s.recurring) {
      bound_ratio = std::max(
          bound_ratio,
          static_cast<double>(p.digits().max_abs() / static_cast<long double>(p.scale())));
      bound_card = std::max(bound_card, static_cast<double>(p.digits().size()));
    }
    rep.parameters["sup_cardinality"] = bound_card;
    Verdict v;
    v.value = VerdictValue::ProvedByRule;
    v.reason = s.infinite
                   ? "finitely many distinct terms recur, so both sups are attained"
                   : "the filtered index set is finite and fully inspected";
    v.bound = bound_ratio;
    rep.verdict = v;
    return rep;
  }

  // No structural handle: report the observed sups, empirically at best.
  if (rep.per_term.size() >= 8) {
    std::size_t cut = rep.per_term.size() - rep.per_term.size() / 4;
    bool stable = true;
    for (std::size_t i = cut; i < rep.per_term.size(); ++i)
      if (rep.per_term[i] > sup_ratio * (1 - 1e-12) || rep.per_term_extra[i] > sup_card - 0.5)
        stable = false;
    if (stable) {
      rep.verdict = {VerdictValue::EmpiricallyHolds,
                     "both running maxima settled before the last quarter of the horizon",
                     std::nullopt, sup_ratio};
      return rep;
    }
  }
  rep.verdict = {VerdictValue::Unknown,
                 "the running maxima are still moving near the horizon and the rule gives "
                 "no structural bound",
                 std::nullopt, std::nullopt};
  return rep;
}

// ---------------------------------------------------------------------------
// PCC

namespace {

struct WindowResult {
  double excluded_ratio = 1.0;
  double b1 = 0.0, b2 = 0.0;
  bool near_boundary = false;
  long excluded = 0;
};

// Best width-bounded window over the principal digits. Capture counts use the
// half-open criterion d - b1 < width; the strict edge of the paper's
// inequality is approachable but not attainable, and the flag marks optima
// decided within 1e-9 of it.
WindowResult best_window(const GeneratorPair& p, double l) {
  auto sp = split_digits(p);
  const auto& pr = sp.principal;
  const double width = l * p.scale();
  const std::size_t total = p.digits().size();

  WindowResult best;
  best.excluded = static_cast<long>(total);
  if (pr.empty()) return best;

  std::size_t best_cap = 0, bi = 0, bj = 0;
  bool best_near = false;
  for (std::size_t i = 0, j = 0; i < pr.size(); ++i) {
    if (j < i) j = i;
    while (j + 1 < pr.size() &&
           static_cast<double>(pr[j + 1] - pr[i]) < width)
      ++j;
    std::size_t cap = j - i + 1;
    bool near = false;
    if (j + 1 < pr.size()) {
      double gap = static_cast<double>(pr[j + 1] - pr[i]);
      near = gap >= width && gap <= width * (1 + 1e-9) + 1e-12;
    }
    if (cap > best_cap) {
      best_cap = cap;
      bi = i;
      bj = j;
      best_near = near;
    }
  }
  best.excluded = static_cast<long>(total - best_cap);
  best.excluded_ratio = static_cast<double>(best.excluded) / static_cast<double>(total);
  best.b1 = static_cast<double>(pr[bi]);
  best.b2 = static_cast<double>(pr[bj]);
  best.near_boundary = best_near;
  return best;
}

double band_fraction(const GeneratorPair& p, double l, double* lo, double* hi) {
  long double n = static_cast<long double>(p.scale());
  long double a = static_cast<long double>(l) * n / 2.0L;
  long double b = (1.0L - static_cast<long double>(l) / 2.0L) * n;
  *lo = static_cast<double>(a);
  *hi = static_cast<double>(b);
  std::size_t count = 0;
  for (long double v : p.digits().values())
    if (v >= a && v <= b) ++count;
  return static_cast<double>(count) / static_cast<double>(p.digits().size());
}

// Smallest on-level digit count (n+1)^2 beyond a given index.
double sparse_far_min_size(long beyond) {
  long double s = static_cast<long double>(beyond + 2);
  return static_cast<double>(s * s);
}

}  // namespace

PccReports check_pcc(const SequenceSpec& spec, double l, long n_max,
                     const std::optional<IndexSet>& filter, bool complement) {
  if (!(l > 0.0 && l < 1.0)) throw DomainError("check_pcc: l must lie in (0, 1)");
  FilteredStructure s = filtered_structure(spec, filter, complement, n_max);

  ConditionReport wi, ba;
  wi.condition = ConditionKind::PCCWindow;
  ba.condition = ConditionKind::PCCBand;
  wi.indices = ba.indices = s.indices;
  wi.parameters["l"] = ba.parameters["l"] = l;

  double sum = 0.0;
  double inf = std::numeric_limits<double>::infinity();
  std::optional<long> zero_at;
  for (std::size_t i = 0; i < s.terms.size(); ++i) {
    WindowResult w = best_window(s.terms[i], l);
    wi.per_term.push_back(w.excluded_ratio);
    sum += w.excluded_ratio;
    wi.aggregate.push_back(sum);
    wi.windows.push_back({w.b1, w.b2});
    wi.boundary_flags.push_back(w.near_boundary ? 1 : 0);

    double lo = 0.0, hi = 0.0;
    double frac = band_fraction(s.terms[i], l, &lo, &hi);
    ba.per_term.push_back(frac);
    inf = std::min(inf, frac);
    ba.aggregate.push_back(inf);
    ba.windows.push_back({lo, hi});
    if (frac == 0.0 && !zero_at) zero_at = s.indices[i];
  }

  // Window case: a convergent series of exclusion ratios.
  SeriesStructure st;
  if (s.pattern_known) {
    if (!s.infinite) {
      st.tail_sum = 0.0;
      st.tail_note = "the filtered index set is finite and fully inspected";
    } else if (s.escape_infinite) {
      if (auto w = find_witness(wi.indices, wi.per_term, s.tail_start,
                                [](double v) { return v > 0.0; })) {
        st.divergence_witness = *w;
        st.divergence_note =
            "the escaping far digit never fits a window inside [0, N), so half the "
            "digits are excluded at every level";
      }
    } else {
      double recurring_positive = 0.0;
      for (const auto& p : s.recurring)
        recurring_positive = std::max(recurring_positive, best_window(p, l).excluded_ratio);
      bool sparse_diverges = false;
      if (s.sparse_far_infinite && l < 0.5) {
        // Windows shorter than l*N capture at most 2*l*m + 1 of the m - 1
        // consecutive digits, so the exclusion ratio tends to 1 - 2l > 0.
        double floor_ratio = (1 - 2 * l) / 2;
        if (auto w = find_witness(wi.indices, wi.per_term, s.tail_start,
                                  [&](double v) { return v >= floor_ratio; })) {
          st.divergence_witness = *w;
          st.divergence_note =
              "the admissible window is shorter than the consecutive digit block, "
              "leaving an excluded fraction near " +
              format_double(1 - 2 * l);
          sparse_diverges = true;
        }
      }
      if (!sparse_diverges && recurring_positive > 0.0) {
        if (auto w = find_witness(wi.indices, wi.per_term, s.tail_start, [&](double v) {
              return v >= recurring_positive * (1 - 1e-9);
            })) {
          st.divergence_witness = *w;
          st.divergence_note = "a term excluding a fraction " +
                               format_double(recurring_positive) +
                               " recurs at infinitely many filtered levels";
        }
      } else if (!sparse_diverges && recurring_positive == 0.0) {
        double tail = 0.0;
        std::string note = "every recurring term fits inside one admissible window";
        if (s.sparse_far_infinite) {
          tail += 1.0 / static_cast<double>(n_max + 1);
          note =
              "recurring terms fit inside admissible windows; sparse-far levels "
              "exclude one digit in (n+1)^2 each";
        }
        st.tail_sum = tail;
        st.tail_note = note;
      }
    }
  }
  wi.verdict = series_verdict(wi.indices, wi.per_term, st, spec.tag);

  // Band case: the fraction must stay above a fixed c > 0 at every filtered
  // level, so a single exact zero settles it.
  if (zero_at) {
    ba.verdict = {VerdictValue::Fails,
                  "a filtered level has no digits inside the admissible band",
                  zero_at, std::nullopt};
  } else if (s.indices.empty()) {
    ba.verdict = {VerdictValue::Unknown, "no levels inspected", std::nullopt, std::nullopt};
  } else if (s.pattern_known && !s.infinite) {
    ba.verdict = {VerdictValue::ProvedByRule,
                  "the filtered index set is finite and the infimum is attained",
                  std::nullopt, inf};
    ba.parameters["c"] = inf;
  } else if (s.pattern_known && !s.escape_infinite) {
    double c = inf;
    for (const auto& p : s.recurring) {
      double lo = 0.0, hi = 0.0;
      c = std::min(c, band_fraction(p, l, &lo, &hi));
    }
    if (s.sparse_far_infinite) {
      // Beyond the horizon the consecutive block keeps a fraction of at
      // least 1 - l - 2/m of its m digits inside the band.
      c = std::min(c, 1.0 - l - 2.0 / sparse_far_min_size(n_max));
    }
    if (c > 0.0) {
      ba.verdict = {VerdictValue::ProvedByRule,
                    "recurring terms and family tails keep a fixed digit fraction "
                    "inside the band",
                    std::nullopt, c};
      ba.parameters["c"] = c;
    } else {
      ba.verdict = {VerdictValue::Unknown,
                    "the structural lower bound on the band fraction degenerates at "
                    "this horizon",
                    std::nullopt, std::nullopt};
    }
  } else {
    // Escape levels always fall outside the band, but that surfaces as an
    // inspected zero; anything else is empirical.
    std::size_t argmin = static_cast<std::size_t>(
        std::min_element(ba.per_term.begin(), ba.per_term.end()) - ba.per_term.begin());
    bool settled = ba.per_term.size() >= 8 && argmin < ba.per_term.size() - ba.per_term.size() / 4;
    if (inf > 0.0 && settled) {
      ba.verdict = {VerdictValue::EmpiricallyHolds,
                    "the running infimum settled above zero before the last quarter of "
                    "the horizon",
                    std::nullopt, inf};
      ba.parameters["c"] = inf;
    } else {
      ba.verdict = {VerdictValue::Unknown,
                    "no structural lower bound and the infimum has not settled",
                    std::nullopt, std::nullopt};
    }
  }

  return {std::move(wi), std::move(ba)};
}

// ---------------------------------------------------------------------------
// Consecutive sets, gcd criterion

ConsecutiveCheck is_general_consecutive(const GeneratorPair& pair) {
  ResidueImage img = residues(pair);
  ConsecutiveCheck out;
  out.collapsed = img.collapsed;
  out.residue_values = img.values;
  out.size_divides_scale = pair.scale_int() % static_cast<long long>(pair.digits().size()) == 0;
  if (!img.collapsed && img.values.size() == pair.digits().size()) {
    out.consecutive = true;
    for (std::size_t i = 0; i < img.values.size(); ++i)
      if (img.values[i] != static_cast<long long>(i)) {
        out.consecutive = false;
        break;
      }
  }
  return out;
}

namespace {

BigInt digit_difference_gcd(const GeneratorPair& p) {
  const DigitSet& d = p.digits();
  BigInt lo = d.exact(0);
  BigInt g = 0;
  for (std::size_t i = 1; i < d.size(); ++i) g = gcd(g, BigInt(d.exact(i) - lo));
  return g;
}

}  // namespace

GcdTailReport gcd_tail(const SequenceSpec& spec, long k, long n_max) {
  if (k < 0) throw DomainError("gcd_tail: k must be nonnegative");

  GcdTailReport rep;
  BigInt g = 0;
  for (long n = k + 1; n <= n_max; ++n) {
    GeneratorPair p = spec.term(n);
    require_admissible(p, "gcd_tail");
    g = gcd(g, digit_difference_gcd(p));
    if (g == 1 && !rep.reached_one_at) rep.reached_one_at = n;
  }
  rep.value = g;

  if (g == 1) {
    rep.verdict = {VerdictValue::ProvedByRule,
                   "the running gcd reached 1 and can only shrink as levels are added",
                   std::nullopt, 1.0};
    return rep;
  }

  FilteredStructure s = filtered_structure(spec, std::nullopt, false, n_max);
  if (s.pattern_known && s.infinite) {
    BigInt tail_gcd = g;
    for (const auto& p : s.recurring) tail_gcd = gcd(tail_gcd, digit_difference_gcd(p));
    // Sparse-far levels contain the digits {0, 1}; successive escape digits
    // 2^n + 1 and 2^(n+1) + 1 are coprime. Either way the infinite tail
    // reaches gcd 1 past every k.
    if (s.sparse_far_infinite || s.escape_infinite) tail_gcd = 1;
    if (tail_gcd == 1) {
      rep.verdict = {VerdictValue::ProvedByRule,
                     "a unit-gcd combination of terms recurs beyond every index",
                     std::nullopt, 1.0};
    } else {
      rep.verdict = {VerdictValue::Fails,
                     "every digit difference in the recurring tail shares the factor " +
                         tail_gcd.str(),
                     s.tail_start, std::nullopt};
    }
    return rep;
  }

  rep.verdict = {VerdictValue::Unknown,
                 "the inspected gcd is " + g.str() + "; later levels may still reduce it",
                 std::nullopt, std::nullopt};
  return rep;
}

// ---------------------------------------------------------------------------
// Classifier

namespace {

struct AdmissibilityOutcome {
  int status = 0;  // 1 admissible, 0 undetermined, -1 inadmissible
  std::string how;
};

AdmissibilityOutcome resolve_admissibility(const GeneratorPair& p,
                                           const std::optional<std::vector<long long>>& declared) {
  ConsecutiveCheck cons = is_general_consecutive(p);
  if (cons.collapsed) return {-1, "two digits collapse mod N, so no exponential matrix is unitary"};
  if (cons.consecutive) {
    if (cons.size_divides_scale)
      return {1, "consecutive digit block; L = (N/#B)*{0,...,#B-1} works exactly"};
    return {-1, "consecutive digit block whose size does not divide the scale"};
  }
  if (declared && p.digits().size() <= 512) {
    HadamardTriple ht = check_unitarity(p.scale_int(), p.digits(), *declared);
    if (ht.certified()) return {1, "declared spectrum set certified numerically"};
  }
  if (p.scale_int() <= 10000 && p.digits().size() <= 64) {
    auto found = find_spectrum_sets(p.scale_int(), p.digits(), 1);
    if (!found.empty()) return {1, "spectrum set found by search"};
    return {-1, "exhaustive spectrum-set search found nothing"};
  }
  return {0, "scale too large to search and no usable declared spectrum set"};
}

bool pair_consecutive(const GeneratorPair& p) { return is_general_consecutive(p).consecutive; }

std::string describe_verdicts(std::initializer_list<const Verdict*> vs) {
  std::string out;
  for (const Verdict* v : vs) {
    if (!out.empty()) out += "; ";
    out += v->reason;
  }
  return out;
}

}  // namespace

const char* to_string(ClassifyReport::Conclusion c) {
  switch (c) {
    case ClassifyReport::Conclusion::ExistsAndSpectral: return "exists-and-spectral";
    case ClassifyReport::Conclusion::Exists: return "exists";
    case ClassifyReport::Conclusion::DoesNotExist: return "does-not-exist";
    case ClassifyReport::Conclusion::Unknown: return "unknown";
  }
  return "?";
}

ClassifyReport classify(const SequenceSpec& spec, long n_max, double l) {
  ClassifyReport rep;

  FilteredStructure s_all = filtered_structure(spec, std::nullopt, false, n_max);

  // Admissibility of every level the conclusions quantify over: inspected
  // ones individually, recurring ones structurally. Family levels are
  // consecutive digit blocks by construction, so they certify analytically.
  {
    std::map<std::pair<long long, std::vector<long long>>, AdmissibilityOutcome> memo;
    auto resolve = [&](const GeneratorPair& p, long n) -> AdmissibilityOutcome {
      ResidueImage img = residues(p);
      auto key = std::make_pair(p.scale_int(), img.values);
      if (img.collapsed) key.second.push_back(-1);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
      AdmissibilityOutcome out =
          resolve_admissibility(p, n > 0 ? spec.spectrum_set(n) : std::nullopt);
      memo.emplace(key, out);
      return out;
    };
    rep.admissible_all = true;
    long analytic = 0, numeric = 0, searched = 0;
    for (std::size_t i = 0; i < s_all.terms.size() && rep.admissible_all; ++i) {
      AdmissibilityOutcome out = resolve(s_all.terms[i], s_all.indices[i]);
      if (out.status != 1) {
        rep.admissible_all = false;
        if (out.status == -1) rep.inadmissible_index = s_all.indices[i];
        rep.admissibility_note = "level " + std::to_string(s_all.indices[i]) + ": " + out.how;
      } else {
        if (out.how.find("consecutive") != std::string::npos) ++analytic;
        else if (out.how.find("declared") != std::string::npos) ++numeric;
        else ++searched;
      }
    }
    for (const auto& p : s_all.recurring) {
      if (!rep.admissible_all) break;
      AdmissibilityOutcome out = resolve(p, 0);
      if (out.status != 1) {
        rep.admissible_all = false;
        rep.admissibility_note = "recurring term (N = " + std::to_string(p.scale_int()) +
                                 "): " + out.how;
      }
    }
    if (rep.admissible_all) {
      rep.admissibility_note = std::to_string(analytic) + " levels certified analytically, " +
                               std::to_string(numeric) + " against declared sets, " +
                               std::to_string(searched) + " by search";
    }
  }

  // Consecutive digit sets: inspected count plus structural recurrence.
  for (std::size_t i = 0; i < s_all.terms.size(); ++i) {
    if (pair_consecutive(s_all.terms[i])) {
      ++rep.consecutive_count;
      if (!rep.consecutive_witness) rep.consecutive_witness = s_all.indices[i];
    }
  }
  if (s_all.pattern_known) {
    if (s_all.escape_infinite || s_all.sparse_far_infinite) rep.consecutive_recur = true;
    for (const auto& p : s_all.recurring)
      if (pair_consecutive(p)) rep.consecutive_recur = true;
  }

  rep.rbc_full = check_rbc(spec, n_max);
  std::optional<IndexSet> declared = spec.declared_indices();
  if (declared) {
    rep.rbc_sub = check_rbc(spec, n_max, declared, false);
    rep.dbc_complement = check_dbc(spec, declared, n_max, true);
  }
  rep.pcc = check_pcc(spec, l, n_max, declared, false);

  // Subsequence of consecutive sets: every inspected declared level is
  // consecutive and such levels recur structurally.
  bool sub_consecutive_recur = false;
  if (declared) {
    FilteredStructure s_sub = filtered_structure(spec, declared, false, n_max);
    bool inspected_ok = !s_sub.terms.empty();
    for (const auto& p : s_sub.terms)
      if (!pair_consecutive(p)) inspected_ok = false;
    bool recur = false;
    if (s_sub.pattern_known && s_sub.infinite) {
      recur = s_sub.escape_infinite || s_sub.sparse_far_infinite;
      for (const auto& p : s_sub.recurring)
        if (pair_consecutive(p)) recur = true;
    }
    sub_consecutive_recur = inspected_ok && recur;
  }

  rep.gcd = gcd_tail(spec, 0, n_max);
  for (const auto& p : s_all.terms)
    if (p.scale() > static_cast<double>(p.digits().size())) ++rep.scale_exceeds_digits;

  ExistenceReport ev = existence_verdict(spec, n_max);
  rep.divergence_radius = ev.divergence_radius;

  const bool rbc_ok = rep.rbc_full.verdict.holds();
  const bool pcc_ok = rep.pcc->window_case.verdict.holds() || rep.pcc->band_case.verdict.holds();
  const Verdict* pcc_v = rep.pcc->window_case.verdict.holds() ? &rep.pcc->window_case.verdict
                                                              : &rep.pcc->band_case.verdict;
  auto proved = [](const Verdict& v) { return v.value == VerdictValue::ProvedByRule; };

  if (rep.admissible_all && rbc_ok && rep.consecutive_recur) {
    rep.conclusion = ClassifyReport::Conclusion::ExistsAndSpectral;
    rep.path = "convergent remainder series + recurring consecutive digit sets";
    rep.fully_proved = proved(rep.rbc_full.verdict);
    rep.reason = describe_verdicts({&rep.rbc_full.verdict});
  } else if (rep.admissible_all && declared && sub_consecutive_recur &&
             rep.rbc_sub->verdict.holds() && rep.dbc_complement->verdict.holds()) {
    rep.conclusion = ClassifyReport::Conclusion::ExistsAndSpectral;
    rep.path =
        "consecutive subsequence with convergent remainder series + digit-bounded "
        "complement";
    rep.fully_proved = proved(rep.rbc_sub->verdict) && proved(rep.dbc_complement->verdict);
    rep.reason = describe_verdicts({&rep.rbc_sub->verdict, &rep.dbc_complement->verdict});
  } else if (rep.admissible_all && rbc_ok && pcc_ok) {
    rep.conclusion = ClassifyReport::Conclusion::ExistsAndSpectral;
    rep.path = declared
                   ? "convergent remainder series + partial concentration on the declared "
                     "subsequence"
                   : "convergent remainder series + partial concentration";
    rep.fully_proved = proved(rep.rbc_full.verdict) && proved(*pcc_v);
    rep.reason = describe_verdicts({&rep.rbc_full.verdict, pcc_v});
  } else if (rep.admissible_all && declared && rep.rbc_sub->verdict.holds() && pcc_ok &&
             rep.dbc_complement->verdict.holds()) {
    rep.conclusion = ClassifyReport::Conclusion::ExistsAndSpectral;
    rep.path =
        "subsequence remainder series + partial concentration + digit-bounded complement";
    rep.fully_proved = proved(rep.rbc_sub->verdict) && proved(*pcc_v) &&
                       proved(rep.dbc_complement->verdict);
    rep.reason =
        describe_verdicts({&rep.rbc_sub->verdict, pcc_v, &rep.dbc_complement->verdict});
  } else if (ev.conclusion == ExistenceReport::Conclusion::Exists) {
    rep.conclusion = ClassifyReport::Conclusion::Exists;
    rep.path = ev.criterion;
    rep.fully_proved = ev.remainder_series.value == VerdictValue::ProvedByRule ||
                       ev.magnitude_series.value == VerdictValue::ProvedByRule;
    rep.reason = ev.reason;
    if (!rep.admissible_all && (rbc_ok && rep.consecutive_recur))
      rep.reason += "; spectral conclusions blocked: " + rep.admissibility_note;
  } else if (ev.conclusion == ExistenceReport::Conclusion::DoesNotExist) {
    rep.conclusion = ClassifyReport::Conclusion::DoesNotExist;
    rep.path = ev.criterion;
    rep.fully_proved = true;
    rep.reason = ev.reason;
  } else {
    rep.conclusion = ClassifyReport::Conclusion::Unknown;
    rep.path = "";
    rep.reason = "no sufficient condition established within the horizon";
    if (!rep.admissible_all)
      rep.reason += "; admissibility: " + rep.admissibility_note;
  }
  return rep;
}

}  // namespace infconv
