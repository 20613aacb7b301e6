#include "infconv/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace infconv {

namespace {

bool integral_value(long double v) { return std::rint(v) == v; }

long long checked_ll(const BigInt& v, const char* what) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    throw GuardError(std::string(what) + ": value out of 64-bit range");
  return v.convert_to<long long>();
}

}  // namespace

// ---------------------------------------------------------------------------
// DigitSet

void DigitSet::check_nonempty() const {
  if (approx_.empty()) throw DomainError("digit set must not be empty");
}

DigitSet DigitSet::from_reals(const std::vector<double>& vals) {
  DigitSet d;
  d.approx_.assign(vals.begin(), vals.end());
  for (long double v : d.approx_)
    if (!std::isfinite(v)) throw DomainError("digit values must be finite");
  std::sort(d.approx_.begin(), d.approx_.end());
  if (std::adjacent_find(d.approx_.begin(), d.approx_.end()) != d.approx_.end())
    throw DomainError("duplicate digit in digit set");
  d.all_integral_ = std::all_of(d.approx_.begin(), d.approx_.end(), integral_value);
  d.check_nonempty();
  return d;
}

DigitSet DigitSet::from_ints(const std::vector<long long>& vals) {
  std::vector<BigInt> big(vals.begin(), vals.end());
  return from_bigints(std::move(big));
}

DigitSet DigitSet::from_bigints(std::vector<BigInt> vals) {
  std::sort(vals.begin(), vals.end());
  if (std::adjacent_find(vals.begin(), vals.end()) != vals.end())
    throw DomainError("duplicate digit in digit set");
  DigitSet d;
  d.approx_.reserve(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    long double a = vals[i].convert_to<long double>();
    if (!std::isfinite(a)) throw GuardError("digit value exceeds long double range");
    d.approx_.push_back(a);
    if (std::fabs(a) > (long double)kExactIntLimit) d.wide_.emplace_back(i, std::move(vals[i]));
  }
  d.all_integral_ = true;
  d.check_nonempty();
  return d;
}

BigInt DigitSet::exact(std::size_t i) const {
  for (const auto& [k, v] : wide_)
    if (k == i) return v;
  long double a = approx_[i];
  if (!integral_value(a)) throw DomainError("digit set is not integral");
  if (std::fabs(a) > (long double)kExactIntLimit)
    throw GuardError("digit too large for exact integer use (unknown low bits)");
  return BigInt((long long)std::llrint(a));
}

long long DigitSet::exact_ll(std::size_t i) const { return checked_ll(exact(i), "digit"); }

long double DigitSet::max_abs() const {
  return std::max(std::fabs(approx_.front()), std::fabs(approx_.back()));
}

bool DigitSet::operator==(const DigitSet& o) const {
  return approx_ == o.approx_ && wide_ == o.wide_ && all_integral_ == o.all_integral_;
}

// ---------------------------------------------------------------------------
// GeneratorPair

GeneratorPair::GeneratorPair(double scale, DigitSet digits)
    : scale_(scale), digits_(std::move(digits)) {
  if (!(scale_ > 0) || !std::isfinite(scale_)) throw DomainError("scale must be a positive real");
  if (digits_.size() < 2) throw DomainError("digit set needs at least two digits");
}

bool GeneratorPair::scale_integral() const {
  return std::rint(scale_) == scale_ && std::fabs(scale_) <= kExactIntLimit;
}

long long GeneratorPair::scale_int() const {
  if (!scale_integral()) throw DomainError("operation requires an integer scale");
  return (long long)std::llrint(scale_);
}

bool GeneratorPair::admissible_shape() const {
  return scale_integral() && scale_ >= 2.0 && digits_.all_integral();
}

bool GeneratorPair::operator==(const GeneratorPair& o) const {
  return scale_ == o.scale_ && digits_ == o.digits_;
}

void require_admissible(const GeneratorPair& p, const char* op) {
  if (!p.admissible_shape())
    throw DomainError(std::string(op) + ": requires integer scale >= 2 and integer digits");
}

DigitSplit split_digits(const GeneratorPair& p) {
  require_admissible(p, "split_digits");
  const long long n = p.scale_int();
  DigitSplit out;
  for (std::size_t i = 0; i < p.digits().size(); ++i) {
    long double a = p.digits().approx(i);
    if (a >= 0 && a <= (long double)(n - 1)) {
      out.principal.push_back(p.digits().exact_ll(i));
    } else {
      ++out.remainder_count;
      out.remainder.push_back(a);
    }
  }
  out.max_principal = out.principal.empty() ? 0 : out.principal.back();
  return out;
}

ResidueImage residues(const GeneratorPair& p) {
  require_admissible(p, "residues");
  const BigInt n = p.scale_int();
  std::vector<long long> vals;
  vals.reserve(p.digits().size());
  for (std::size_t i = 0; i < p.digits().size(); ++i) {
    BigInt r = p.digits().exact(i) % n;
    if (r < 0) r += n;
    vals.push_back(checked_ll(r, "residue"));
  }
  std::sort(vals.begin(), vals.end());
  ResidueImage out;
  out.collapsed = std::adjacent_find(vals.begin(), vals.end()) != vals.end();
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  out.values = std::move(vals);
  return out;
}

// ---------------------------------------------------------------------------
// IndexSet

IndexSet IndexSet::arithmetic(long first, long step) {
  if (first < 1 || step < 1) throw DomainError("index set: first and step must be >= 1");
  IndexSet s;
  s.kind_ = Kind::Arithmetic;
  s.first_ = first;
  s.step_ = step;
  return s;
}

IndexSet IndexSet::from_list(std::vector<long> values) {
  std::sort(values.begin(), values.end());
  if (!values.empty() && values.front() < 1) throw DomainError("index set: indices are 1-based");
  if (std::adjacent_find(values.begin(), values.end()) != values.end())
    throw DomainError("index set: duplicate index");
  IndexSet s;
  s.kind_ = Kind::Explicit;
  s.values_ = std::move(values);
  return s;
}

bool IndexSet::contains(long n) const {
  if (n < 1) return false;
  if (kind_ == Kind::Arithmetic) return n >= first_ && (n - first_) % step_ == 0;
  return std::binary_search(values_.begin(), values_.end(), n);
}

long IndexSet::rank(long n) const {
  if (kind_ == Kind::Arithmetic) return n < first_ ? 0 : (n - first_) / step_ + 1;
  return (long)(std::upper_bound(values_.begin(), values_.end(), n) - values_.begin());
}

long IndexSet::nth(long k) const {
  if (k < 1) throw DomainError("index set: rank must be >= 1");
  if (kind_ == Kind::Arithmetic) return first_ + (k - 1) * step_;
  if ((std::size_t)k > values_.size()) throw DomainError("index set: rank past end of finite set");
  return values_[k - 1];
}

// ---------------------------------------------------------------------------
// ConvergenceTag

double ConvergenceTag::g(long n) const {
  switch (kind) {
    case Kind::InverseSquare: {
      double m = (double)(n + shift);
      return 1.0 / (m * m);
    }
    case Kind::PowerOfTwo:
      return std::ldexp(1.0, (int)std::max(-1070L, -n));
    case Kind::Geometric:
      return std::pow(rho, (double)n);
  }
  return 0.0;
}

double ConvergenceTag::tail_sum(long after) const {
  switch (kind) {
    case Kind::InverseSquare: {
      long m = after + shift;
      if (m < 1) return c * 1.6449340668482264;  // zeta(2), whole-series bound
      return c / (double)m;
    }
    case Kind::PowerOfTwo:
      return c * std::ldexp(1.0, (int)std::max(-1070L, -after));
    case Kind::Geometric:
      return c * std::pow(rho, (double)(after + 1)) / (1.0 - rho);
  }
  return 0.0;
}

std::string ConvergenceTag::describe() const {
  switch (kind) {
    case Kind::InverseSquare:
      return "term(n) <= " + std::to_string(c) + "/(n" +
             (shift ? "+" + std::to_string(shift) : std::string()) + ")^2";
    case Kind::PowerOfTwo:
      return "term(n) <= " + std::to_string(c) + "/2^n";
    case Kind::Geometric:
      return "term(n) <= " + std::to_string(c) + "*" + std::to_string(rho) + "^n";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Families

const char* family_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::GeometricEscape: return "geometric_escape";
    case FamilyKind::SparseFarDigit: return "sparse_far_digit";
  }
  return "";
}

std::optional<FamilyKind> family_from_name(const std::string& name) {
  if (name == "geometric_escape") return FamilyKind::GeometricEscape;
  if (name == "sparse_far_digit") return FamilyKind::SparseFarDigit;
  return std::nullopt;
}

namespace {

long long sfd_scale(const IndexSet& idx, long n) {
  return idx.contains(n) ? 2 * (n + 1) * (n + 1) : 9;
}

// cum = N_1 * ... * N_n for the family's own scale sequence.
GeneratorPair sfd_term(const IndexSet& idx, long n, const BigInt& cum) {
  if (!idx.contains(n)) return GeneratorPair(9.0, DigitSet::from_ints({0, 1, 5}));
  const long long m = (long long)(n + 1) * (n + 1);
  std::vector<BigInt> b;
  b.reserve(m);
  for (long long j = 0; j <= m - 2; ++j) b.emplace_back(j);
  b.push_back(BigInt(m) - 1 + cum);
  return GeneratorPair((double)(2 * m), DigitSet::from_bigints(std::move(b)));
}

GeneratorPair family_term_at(const FamilyRule& fr, long n) {
  if (n > kMaxFamilyIndex)
    throw GuardError("family term index exceeds guard (" + std::to_string(kMaxFamilyIndex) + ")");
  switch (fr.family) {
    case FamilyKind::GeometricEscape:
      return GeneratorPair(2.0, DigitSet::from_bigints({BigInt(0), (BigInt(1) << n) + 1}));
    case FamilyKind::SparseFarDigit: {
      BigInt cum = 1;
      for (long k = 1; k <= n; ++k) cum *= sfd_scale(fr.indices, k);
      return sfd_term(fr.indices, n, cum);
    }
  }
  throw DomainError("unknown family");
}

GeneratorPair term_of(const Rule& r, long n);

GeneratorPair interleave_term(const InterleaveRule& il, long n) {
  if (il.indices.contains(n)) return term_of(*il.sub, il.indices.rank(n));
  return term_of(*il.base, n - il.indices.rank(n));
}

GeneratorPair term_of(const Rule& r, long n) {
  if (n < 1) throw DomainError("sequence index is 1-based");
  if (n > kMaxExpansion) throw GuardError("sequence index exceeds expansion guard");
  return std::visit(
      [n](const auto& rule) -> GeneratorPair {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, CycleRule>) {
          if (rule.pairs.empty()) throw DomainError("cycle rule has no pairs");
          return rule.pairs[(n - 1) % rule.pairs.size()];
        } else if constexpr (std::is_same_v<T, PrefixCycleRule>) {
          if ((std::size_t)n <= rule.prefix.size()) return rule.prefix[n - 1];
          if (rule.cycle.empty()) throw DomainError("prefix-cycle rule has an empty cycle");
          return rule.cycle[(n - 1 - rule.prefix.size()) % rule.cycle.size()];
        } else if constexpr (std::is_same_v<T, FamilyRule>) {
          return family_term_at(rule, n);
        } else {
          return interleave_term(rule, n);
        }
      },
      (const std::variant<CycleRule, PrefixCycleRule, FamilyRule, InterleaveRule>&)r);
}

}  // namespace

// ---------------------------------------------------------------------------
// SpectrumSets

SpectrumSets SpectrumSets::cycled(std::vector<std::vector<long long>> sets) {
  if (sets.empty()) throw DomainError("spectrum sets: empty cycle");
  SpectrumSets s;
  s.kind = Kind::Cycle;
  s.cycle = std::move(sets);
  return s;
}

SpectrumSets SpectrumSets::mapped(std::map<long, std::vector<long long>> sets) {
  SpectrumSets s;
  s.kind = Kind::Map;
  s.by_index = std::move(sets);
  return s;
}

SpectrumSets SpectrumSets::family() {
  SpectrumSets s;
  s.kind = Kind::Family;
  return s;
}

// ---------------------------------------------------------------------------
// SequenceSpec

GeneratorPair SequenceSpec::term(long n) const { return term_of(rule, n); }

std::vector<GeneratorPair> SequenceSpec::expand(long n_max) const {
  if (n_max < 0) throw DomainError("expand: n_max must be >= 0");
  if (n_max > kMaxExpansion) throw GuardError("expand: n_max exceeds expansion guard");
  std::vector<GeneratorPair> out;
  out.reserve(n_max);
  if (const FamilyRule* fr = family(); fr && fr->family == FamilyKind::SparseFarDigit) {
    if (n_max > kMaxFamilyIndex) throw GuardError("expand: family expansion guard exceeded");
    BigInt cum = 1;  // incremental product, term(n) alone would be quadratic
    for (long n = 1; n <= n_max; ++n) {
      cum *= sfd_scale(fr->indices, n);
      out.push_back(sfd_term(fr->indices, n, cum));
    }
    return out;
  }
  for (long n = 1; n <= n_max; ++n) out.push_back(term(n));
  return out;
}

std::optional<std::vector<long long>> SequenceSpec::spectrum_set(long n) const {
  if (n < 1) throw DomainError("spectrum set index is 1-based");
  switch (spectrum_sets.kind) {
    case SpectrumSets::Kind::None:
      return std::nullopt;
    case SpectrumSets::Kind::Cycle:
      return spectrum_sets.cycle[(n - 1) % spectrum_sets.cycle.size()];
    case SpectrumSets::Kind::Map: {
      auto it = spectrum_sets.by_index.find(n);
      if (it == spectrum_sets.by_index.end()) return std::nullopt;
      return it->second;
    }
    case SpectrumSets::Kind::Family: {
      const FamilyRule* fr = family();
      if (!fr) return std::nullopt;
      if (fr->family == FamilyKind::GeometricEscape) return std::vector<long long>{0, 1};
      if (!fr->indices.contains(n)) return std::vector<long long>{0, 3, 6};
      std::vector<long long> l;
      const long long m = (long long)(n + 1) * (n + 1);
      l.reserve(m);
      for (long long j = 0; j < m; ++j) l.push_back(2 * j);
      return l;
    }
  }
  return std::nullopt;
}

std::optional<IndexSet> SequenceSpec::declared_indices() const {
  if (const auto* fr = std::get_if<FamilyRule>(&rule)) return fr->indices;
  if (const auto* il = std::get_if<InterleaveRule>(&rule)) return il->indices;
  return std::nullopt;
}

const FamilyRule* SequenceSpec::family() const { return std::get_if<FamilyRule>(&rule); }

std::vector<GeneratorPair> expand_sequence(const SequenceSpec& spec, long n_max) {
  return spec.expand(n_max);
}

// ---------------------------------------------------------------------------
// Eventual periodicity

namespace {

struct CycleHint {
  long start;
  long period;
  bool needs_check;
};

std::optional<CycleHint> cycle_hint(const Rule& r) {
  if (const auto* c = std::get_if<CycleRule>(&r)) {
    if (c->pairs.empty()) return std::nullopt;
    return CycleHint{1, (long)c->pairs.size(), false};
  }
  if (const auto* pc = std::get_if<PrefixCycleRule>(&r)) {
    if (pc->cycle.empty()) return std::nullopt;
    return CycleHint{(long)pc->prefix.size() + 1, (long)pc->cycle.size(), false};
  }
  if (const auto* fr = std::get_if<FamilyRule>(&r)) {
    if (fr->family == FamilyKind::SparseFarDigit && !fr->indices.infinite()) {
      long start = fr->indices.list().empty() ? 1 : fr->indices.list().back() + 1;
      return CycleHint{start, 1, false};
    }
    return std::nullopt;
  }
  const auto& il = std::get<InterleaveRule>(r);
  auto base = cycle_hint(*il.base);
  if (!base) return std::nullopt;
  if (!il.indices.infinite()) {
    long last = il.indices.list().empty() ? 0 : il.indices.list().back();
    long start = std::max(last + 1, base->start + (long)il.indices.list().size());
    return CycleHint{start, base->period, true};
  }
  auto sub = cycle_hint(*il.sub);
  if (!sub) return std::nullopt;
  long period = il.indices.step() * std::lcm(base->period, sub->period);
  long start = il.indices.first() + il.indices.step() * (base->start + sub->start + 2);
  return CycleHint{start, period, true};
}

}  // namespace

std::optional<TailCycle> eventual_cycle(const SequenceSpec& spec) {
  auto hint = cycle_hint(spec.rule);
  if (!hint) return std::nullopt;
  if (hint->period > 4096 || hint->start > kMaxExpansion / 4) return std::nullopt;

  TailCycle out;
  out.start = hint->start;
  out.terms.reserve(hint->period);
  for (long i = 0; i < hint->period; ++i) out.terms.push_back(spec.term(hint->start + i));
  if (hint->needs_check) {
    for (long i = 0; i < hint->period; ++i)
      if (!(spec.term(hint->start + hint->period + i) == out.terms[i])) return std::nullopt;
  }
  out.scale_product = 1.0;
  for (const auto& p : out.terms) out.scale_product *= p.scale();
  return out;
}

// ---------------------------------------------------------------------------
// Verdicts

const char* to_string(VerdictValue v) {
  switch (v) {
    case VerdictValue::ProvedByRule: return "ProvedByRule";
    case VerdictValue::EmpiricallyHolds: return "EmpiricallyHolds";
    case VerdictValue::Fails: return "Fails";
    case VerdictValue::Unknown: return "Unknown";
  }
  return "Unknown";
}

bool series_looks_stable(const std::vector<double>& terms) {
  if (terms.empty()) return false;
  double total = std::accumulate(terms.begin(), terms.end(), 0.0);
  std::size_t q = std::max<std::size_t>(1, terms.size() / 4);
  double tail = std::accumulate(terms.end() - q, terms.end(), 0.0);
  if (total == 0.0) return true;
  return tail <= 0.02 * total;
}

Verdict series_verdict(const std::vector<long>& indices, const std::vector<double>& terms,
                       const SeriesStructure& st, const std::optional<ConvergenceTag>& tag) {
  Verdict v;
  if (st.divergence_witness) {
    v.value = VerdictValue::Fails;
    v.witness_index = st.divergence_witness;
    v.reason = st.divergence_note;
    return v;
  }
  if (terms.empty()) {
    v.reason = "no terms inspected";
    return v;
  }
  double total = std::accumulate(terms.begin(), terms.end(), 0.0);
  if (st.tail_sum) {
    v.value = VerdictValue::ProvedByRule;
    v.bound = total + *st.tail_sum;
    v.reason = st.tail_note;
    return v;
  }
  std::string tag_note;
  if (tag) {
    bool ok = true;
    long bad = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      double b = tag->bound(indices[i]);
      if (terms[i] > b * (1.0 + 1e-9) + 1e-300) {
        ok = false;
        bad = indices[i];
        break;
      }
    }
    if (ok) {
      v.value = VerdictValue::ProvedByRule;
      v.bound = total + tag->tail_sum(indices.back());
      v.reason = "declared bound " + tag->describe() + " verified on inspected terms; closed-form tail";
      return v;
    }
    tag_note = " (declared bound violated at n=" + std::to_string(bad) + ", ignored)";
  }
  if (series_looks_stable(terms)) {
    v.value = VerdictValue::EmpiricallyHolds;
    v.bound = total;
    v.reason = "partial sums stabilized over the inspected horizon (heuristic)" + tag_note;
    return v;
  }
  v.value = VerdictValue::Unknown;
  v.reason = "no structural rule applies and partial sums have not stabilized" + tag_note;
  return v;
}

}  // namespace infconv
