#include "infconv/transforms.hpp"

#include <cmath>

namespace infconv {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559005768L;

// Exact fractional part of q * xi in [0, 1). xi is decomposed dyadically, so
// the only rounding is the final conversion of a value already in [0, 1).
long double frac_qxi(const BigInt& q, double xi) {
  if (xi == 0.0 || q == 0) return 0.0L;
  int e = 0;
  double m = std::frexp(xi, &e);
  auto mm = (long long)std::ldexp(m, 53);  // 53-bit mantissa, exact
  int e2 = e - 53;
  BigInt prod = q * mm;
  if (e2 >= 0) return 0.0L;  // q * xi is an integer multiple of 2^e2
  BigInt mod = BigInt(1) << (-e2);
  BigInt r = prod % mod;
  if (r < 0) r += mod;
  return r.convert_to<long double>() * std::ldexp(1.0L, e2);
}

// Floor division: remainder in [0, p), p > 0.
void floor_divmod(const BigInt& b, const BigInt& p, BigInt& q, BigInt& r) {
  q = b / p;
  r = b % p;
  if (r < 0) {
    r += p;
    q -= 1;
  }
}

double struct_min_scale(const Rule& r) {
  if (const auto* c = std::get_if<CycleRule>(&r)) {
    double m = c->pairs.front().scale();
    for (const auto& p : c->pairs) m = std::min(m, p.scale());
    return m;
  }
  if (const auto* pc = std::get_if<PrefixCycleRule>(&r)) {
    double m = pc->cycle.front().scale();
    for (const auto& p : pc->prefix) m = std::min(m, p.scale());
    for (const auto& p : pc->cycle) m = std::min(m, p.scale());
    return m;
  }
  if (const auto* f = std::get_if<FamilyRule>(&r))
    return f->family == FamilyKind::GeometricEscape ? 2.0 : 8.0;
  const auto& il = std::get<InterleaveRule>(r);
  return std::min(struct_min_scale(*il.base), struct_min_scale(*il.sub));
}

}  // namespace

MaskEvaluation mask_eval(const DigitSet& digits, double xi) {
  if (digits.size() < 2) throw DomainError("mask needs at least two digits");
  long double re = 0.0L, im = 0.0L;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    long double ang = -kTwoPiL * digits.approx(i) * (long double)xi;
    re += std::cos(ang);
    im += std::sin(ang);
  }
  long double inv = 1.0L / (long double)digits.size();
  return MaskEvaluation{{(double)(re * inv), (double)(im * inv)}, xi};
}

CompiledSequence::CompiledSequence(const SequenceSpec& spec, long horizon) {
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  terms_ = spec.expand(horizon);

  prod_ld_.assign((std::size_t)horizon + 1, 1.0L);
  for (long n = 1; n <= horizon; ++n) {
    const auto& t = terms_[(std::size_t)(n - 1)];
    prod_ld_[(std::size_t)n] = prod_ld_[(std::size_t)(n - 1)] * (long double)t.scale();
    integral_scales_ = integral_scales_ && t.scale_integral();
    admissible_all_ = admissible_all_ && t.admissible_shape();
  }
  if (integral_scales_) {
    prod_int_.assign((std::size_t)horizon + 1, BigInt(1));
    for (long n = 1; n <= horizon; ++n)
      prod_int_[(std::size_t)n] =
          prod_int_[(std::size_t)(n - 1)] * terms_[(std::size_t)(n - 1)].scale_int();
  }

  root_ = compile_levels(0);

  if (admissible_all_) {
    prefix_principal_.assign((std::size_t)horizon + 1, 0.0L);
    prefix_remainder_.assign((std::size_t)horizon + 1, 0.0L);
    remainder_ratio_.resize((std::size_t)horizon);
    for (long n = 1; n <= horizon; ++n) {
      auto split = split_digits(terms_[(std::size_t)(n - 1)]);
      double rr = (double)split.remainder_count / (double)terms_[(std::size_t)(n - 1)].digits().size();
      remainder_ratio_[(std::size_t)(n - 1)] = rr;
      prefix_principal_[(std::size_t)n] =
          prefix_principal_[(std::size_t)(n - 1)] +
          (long double)split.max_principal / prod_ld_[(std::size_t)n];
      prefix_remainder_[(std::size_t)n] =
          prefix_remainder_[(std::size_t)(n - 1)] + 2.0L * (long double)rr;
    }

    tag_ = spec.tag;
    if (tag_) {
      tag_verified_ = true;
      for (long n = 1; n <= horizon; ++n)
        if (remainder_ratio_[(std::size_t)(n - 1)] >
            tag_->bound(n) * (1.0 + 1e-9) + 1e-300) {
          tag_verified_ = false;
          break;
        }
    }

    if (auto cyc = eventual_cycle(spec); cyc && cyc->start <= horizon + 1) {
      cover_cycle_zero_ = true;
      for (const auto& t : cyc->terms) {
        if (!t.admissible_shape() || split_digits(t).remainder_count != 0) {
          cover_cycle_zero_ = false;
          break;
        }
      }
    }
    const FamilyRule* fam = spec.family();
    cover_family_ = fam && fam->family == FamilyKind::SparseFarDigit;
    min_scale_ok_ = struct_min_scale(spec.rule) >= 2.0;

    if (cover_cycle_zero_)
      remainder_cover_ = 0.0;
    else if (tag_verified_)
      remainder_cover_ = 2.0 * tag_->tail_sum(horizon);
    else if (cover_family_)
      remainder_cover_ = 2.0 / (double)(horizon + 1);  // sum of 1/(n+1)^2 past horizon, doubled
  }
}

std::vector<CompiledSequence::Level> CompiledSequence::compile_levels(long start) const {
  std::vector<Level> out;
  out.reserve(terms_.size() - (std::size_t)start);
  for (long n = start + 1; n <= horizon(); ++n) {
    const DigitSet& d = terms_[(std::size_t)(n - 1)].digits();
    Level lv;
    lv.inv_size = 1.0 / (double)d.size();
    lv.terms.resize(d.size());
    bool exact = d.all_integral() && integral_scales_;
    if (!exact && d.max_abs() > (long double)kExactIntLimit)
      throw GuardError("digits beyond 2^53 need integral scales for exact phases");
    BigInt rebased;
    if (exact) rebased = prod_int_[(std::size_t)n] / prod_int_[(std::size_t)start];
    for (std::size_t i = 0; i < d.size(); ++i) {
      PhaseTerm& pt = lv.terms[i];
      if (exact) {
        BigInt q, r;
        floor_divmod(d.exact(i), rebased, q, r);
        pt.ratio = r.convert_to<long double>() / rebased.convert_to<long double>();
        if (q != 0) {
          pt.q = std::move(q);
          pt.big = true;
        }
      } else {
        pt.ratio = d.approx(i) * (prod_ld_[(std::size_t)start] / prod_ld_[(std::size_t)n]);
      }
    }
    out.push_back(std::move(lv));
  }
  return out;
}

std::complex<double> CompiledSequence::eval_levels(const std::vector<Level>& levels, long depth,
                                                   double xi) {
  std::complex<double> acc(1.0, 0.0);
  for (long k = 0; k < depth; ++k) {
    const auto& lv = levels[(std::size_t)k];
    long double re = 0.0L, im = 0.0L;
    for (const auto& t : lv.terms) {
      long double ph = t.ratio * (long double)xi;
      if (t.big) ph += frac_qxi(t.q, xi);
      long double ang = -kTwoPiL * ph;
      re += std::cos(ang);
      im += std::sin(ang);
    }
    acc *= std::complex<double>((double)(re * lv.inv_size), (double)(im * lv.inv_size));
  }
  return acc;
}

std::complex<double> CompiledSequence::partial(long start, long depth, double xi) const {
  if (start < 0 || depth < 0 || start + depth > horizon())
    throw DomainError("partial product range outside the compiled horizon");
  if (start == 0) return eval_levels(root_, depth, xi);
  return eval_levels(compile_levels(start), depth, xi);
}

std::optional<double> CompiledSequence::deviation_sum(long start, long from, double xi) const {
  if (start < 0 || from < start || from > horizon())
    throw DomainError("deviation range outside the compiled horizon");
  if (!admissible_all_ || !min_scale_ok_ || !remainder_cover_) return std::nullopt;
  long double H = (long double)horizon();
  (void)H;
  long double principal = prefix_principal_[(std::size_t)horizon()] -
                          prefix_principal_[(std::size_t)from] +
                          2.0L / prod_ld_[(std::size_t)horizon()];
  long double remainder = prefix_remainder_[(std::size_t)horizon()] -
                          prefix_remainder_[(std::size_t)from] + (long double)*remainder_cover_;
  long double s = (long double)kTwoPi * std::fabs((long double)xi) *
                      prod_ld_[(std::size_t)start] * principal +
                  remainder;
  return (double)s;
}

std::optional<double> CompiledSequence::tail_bound(long start, long from, double xi) const {
  auto s = deviation_sum(start, from, xi);
  if (!s || *s > 1.0) return std::nullopt;
  return std::expm1(*s);
}

TailView::TailView(const CompiledSequence& cs, long start) : start_(start) {
  if (start < 0 || start >= cs.horizon())
    throw DomainError("tail view start outside the compiled horizon");
  levels_ = cs.compile_levels(start);
}

std::complex<double> TailView::partial(long depth, double xi) const {
  if (depth < 0 || depth > max_depth())
    throw DomainError("tail view depth outside the compiled horizon");
  return CompiledSequence::eval_levels(levels_, depth, xi);
}

TruncatedTransform transform_eval(const SequenceSpec& spec, double xi, long depth) {
  if (depth < 1) throw DomainError("depth must be at least 1");
  CompiledSequence cs(spec, depth);
  TruncatedTransform out;
  out.depth = depth;
  out.cumulative_scales.reserve((std::size_t)depth);
  for (long n = 1; n <= depth; ++n) out.cumulative_scales.push_back(cs.cumulative_scale(n));
  out.value = cs.partial(0, depth, xi);
  out.tail_error_bound = cs.tail_bound(0, depth, xi);
  return out;
}

std::optional<double> tail_bound(const SequenceSpec& spec, double xi, long from_depth,
                                 long horizon) {
  if (from_depth < 0 || horizon <= from_depth)
    throw DomainError("horizon must exceed from_depth");
  CompiledSequence cs(spec, horizon);
  return cs.tail_bound(0, from_depth, xi);
}

TruncatedTransform tail_transform_eval(const SequenceSpec& spec, long start_index, double xi,
                                       long depth) {
  if (start_index < 0) throw DomainError("start index must be nonnegative");
  if (depth < 1) throw DomainError("depth must be at least 1");
  CompiledSequence cs(spec, start_index + depth);
  TruncatedTransform out;
  out.depth = depth;
  out.cumulative_scales.reserve((std::size_t)depth);
  for (long k = 1; k <= depth; ++k)
    out.cumulative_scales.push_back(cs.cumulative_scale(start_index + k) /
                                    cs.cumulative_scale(start_index));
  if (start_index == 0) {
    out.value = cs.partial(0, depth, xi);
  } else {
    TailView view(cs, start_index);
    out.value = view.partial(depth, xi);
  }
  out.tail_error_bound = cs.tail_bound(start_index, start_index + depth, xi);
  return out;
}

AdaptiveDepth adaptive_depth(const SequenceSpec& spec, double xi, double tol, long cap) {
  if (cap < 1) throw DomainError("depth cap must be at least 1");
  CompiledSequence cs(spec, cap);
  for (long d = 1; d <= cap; ++d) {
    auto b = cs.tail_bound(0, d, xi);
    if (b && *b < tol) return AdaptiveDepth{d, b, true};
  }
  return AdaptiveDepth{cap, cs.tail_bound(0, cap, xi), false};
}

}  // namespace infconv
