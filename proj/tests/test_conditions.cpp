#include "doctest.h"
#include "infconv/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <set>

using namespace infconv;

namespace {

GeneratorPair ip(double n, std::vector<long long> b) {
  return GeneratorPair(n, DigitSet::from_ints(b));
}

SequenceSpec cycle_spec(std::vector<GeneratorPair> pairs) {
  return SequenceSpec{Rule{CycleRule{std::move(pairs)}}, std::nullopt, SpectrumSets::none()};
}

SequenceSpec sfd_spec(IndexSet idx, bool with_tag) {
  std::optional<ConvergenceTag> tag;
  if (with_tag) tag = ConvergenceTag{ConvergenceTag::Kind::InverseSquare, 1.0, 1, 0.5};
  return SequenceSpec{Rule{FamilyRule{FamilyKind::SparseFarDigit, idx}}, tag,
                      SpectrumSets::family()};
}

SequenceSpec interleave_spec(std::vector<GeneratorPair> base, std::vector<GeneratorPair> sub,
                             IndexSet idx) {
  auto b = std::make_shared<const Rule>(CycleRule{std::move(base)});
  auto s = std::make_shared<const Rule>(CycleRule{std::move(sub)});
  return SequenceSpec{Rule{InterleaveRule{b, s, idx}}, std::nullopt, SpectrumSets::none()};
}

}  // namespace

// ---------------------------------------------------------------------------
// Index patterns

TEST_CASE("index patterns: complement and membership") {
  IndexPattern p = pattern_from_index_set(IndexSet::from_list({2, 5}));
  CHECK(p.contains(2));
  CHECK(p.contains(5));
  CHECK_FALSE(p.contains(3));
  CHECK_FALSE(p.infinite());
  CHECK(p.kth(2) == 5);
  CHECK_FALSE(p.kth(3).has_value());
  CHECK_FALSE(p.next(6).has_value());

  IndexPattern c = pattern_complement(p);
  CHECK(c.infinite());
  CHECK(c.contains(1));
  CHECK_FALSE(c.contains(2));
  CHECK(c.contains(3));
  CHECK(c.contains(4));
  CHECK_FALSE(c.contains(5));
  CHECK(c.contains(6));
  CHECK(c.contains(1000));
  CHECK(c.kth(1) == 1);
  CHECK(c.kth(2) == 3);
  CHECK(c.kth(3) == 4);
  CHECK(c.kth(4) == 6);
  CHECK(c.kth(5) == 7);
  CHECK(c.next(5) == 6);

  IndexPattern none = pattern_complement(pattern_all());
  CHECK_FALSE(none.infinite());
  CHECK_FALSE(none.contains(1));
  CHECK_FALSE(none.next(1).has_value());
}

TEST_CASE("index patterns: intersection composes arithmetic progressions") {
  IndexPattern evens = pattern_from_index_set(IndexSet::arithmetic(2, 2));
  IndexPattern threes = pattern_from_index_set(IndexSet::arithmetic(3, 3));
  IndexPattern both = pattern_intersect(evens, threes);
  CHECK(both.infinite());
  for (long n = 1; n <= 40; ++n)
    CHECK(both.contains(n) == (n % 2 == 0 && n % 3 == 0 && n >= 3));
  CHECK(both.next(1) == 6);
  CHECK(both.kth(2) == 12);

  IndexPattern a = pattern_from_index_set(IndexSet::arithmetic(1, 2000));
  IndexPattern b = pattern_from_index_set(IndexSet::arithmetic(1, 999));
  CHECK_THROWS_AS(pattern_intersect(a, b), GuardError);
}

// ---------------------------------------------------------------------------
// Filtered structure

TEST_CASE("filtered structure: interleave filter equal to the declared set passes through") {
  SequenceSpec spec =
      interleave_spec({ip(2, {0, 3})}, {ip(2, {0, 1})}, IndexSet::arithmetic(1, 2));

  FilteredStructure sub = filtered_structure(spec, spec.declared_indices(), false, 10);
  CHECK(sub.indices == std::vector<long>{1, 3, 5, 7, 9});
  for (const auto& t : sub.terms) CHECK(t == ip(2, {0, 1}));
  CHECK(sub.infinite);
  CHECK(sub.pattern_known);
  REQUIRE(sub.recurring.size() == 1);
  CHECK(sub.recurring[0] == ip(2, {0, 1}));

  FilteredStructure comp = filtered_structure(spec, spec.declared_indices(), true, 10);
  CHECK(comp.indices == std::vector<long>{2, 4, 6, 8, 10});
  CHECK(comp.pattern_known);
  REQUIRE(comp.recurring.size() == 1);
  CHECK(comp.recurring[0] == ip(2, {0, 3}));
}

TEST_CASE("filtered structure: cycle terms recur according to the filter residues") {
  SequenceSpec spec = cycle_spec({ip(2, {0, 1}), ip(2, {0, 3}), ip(4, {0, 1, 2, 3})});

  FilteredStructure odd = filtered_structure(spec, IndexSet::arithmetic(1, 2), false, 12);
  CHECK(odd.pattern_known);
  CHECK(odd.recurring.size() == 3);  // lcm(3,2) window hits every cycle slot

  FilteredStructure sparse = filtered_structure(spec, IndexSet::arithmetic(1, 6), false, 12);
  CHECK(sparse.pattern_known);
  REQUIRE(sparse.recurring.size() == 1);
  CHECK(sparse.recurring[0] == ip(2, {0, 1}));
}

TEST_CASE("filtered structure: family levels compose with arithmetic filters") {
  SequenceSpec spec = sfd_spec(IndexSet::arithmetic(1, 2), false);

  FilteredStructure hit = filtered_structure(spec, IndexSet::arithmetic(1, 4), false, 20);
  CHECK(hit.pattern_known);
  CHECK(hit.sparse_far_infinite);
  CHECK(hit.recurring.empty());
  CHECK(hit.family_witness == 1);

  FilteredStructure miss = filtered_structure(spec, IndexSet::arithmetic(2, 4), false, 20);
  CHECK(miss.pattern_known);
  CHECK_FALSE(miss.sparse_far_infinite);
  REQUIRE(miss.recurring.size() == 1);
  CHECK(miss.recurring[0] == ip(9, {0, 1, 5}));
}

// ---------------------------------------------------------------------------
// Hadamard triples

TEST_CASE("unitarity residuals certify known triples and reject degenerate ones") {
  CHECK(check_unitarity(4, DigitSet::from_ints({0, 2}), {0, 1}).certified());
  CHECK(check_unitarity(2, DigitSet::from_ints({0, 1}), {0, 1}).certified());
  CHECK(check_unitarity(2, DigitSet::from_ints({0, 3}), {0, 1}).certified());
  CHECK(check_unitarity(9, DigitSet::from_ints({0, 1, 5}), {0, 3, 6}).certified());

  // Equal rows: digits congruent mod the scale.
  HadamardTriple bad = check_unitarity(4, DigitSet::from_ints({0, 2}), {0, 2});
  CHECK_FALSE(bad.certified());
  CHECK(bad.residual > 0.5);

  // Digits beyond 2^53 reduce exactly.
  auto wide = DigitSet::from_bigints({BigInt(0), (BigInt(1) << 60) + 3});
  CHECK(check_unitarity(2, wide, {0, 1}).certified());

  CHECK_THROWS_AS(check_unitarity(1, DigitSet::from_ints({0, 1}), {0, 1}), DomainError);
  CHECK_THROWS_AS(check_unitarity(4, DigitSet::from_ints({0}), {0}), DomainError);
  CHECK_THROWS_AS(check_unitarity(4, DigitSet::from_ints({0, 2}), {0, 1, 2}), DomainError);
  CHECK_THROWS_AS(check_unitarity(4, DigitSet::from_reals({0.0, 1.5}), {0, 1}), DomainError);
}

TEST_CASE("unitarity residual is invariant under spectrum translation") {
  std::mt19937 rng(442211);
  for (int t = 0; t < 50; ++t) {
    long long n = 2 + (long long)(rng() % 30);
    std::set<long long> bs{0};
    while (bs.size() < 2 + rng() % 2) bs.insert((long long)(rng() % (2 * n)));
    std::vector<long long> b(bs.begin(), bs.end());
    std::vector<long long> l;
    std::set<long long> ls;
    while (ls.size() < b.size()) ls.insert((long long)(rng() % n));
    l.assign(ls.begin(), ls.end());
    double r0 = check_unitarity(n, DigitSet::from_ints(b), l).residual;
    long long shift = (long long)(rng() % 100);
    for (auto& x : l) x += shift;
    double r1 = check_unitarity(n, DigitSet::from_ints(b), l).residual;
    CHECK(r0 == doctest::Approx(r1).epsilon(1e-9));
  }
}

TEST_CASE("spectrum search finds the expected sets") {
  auto r = find_spectrum_sets(4, DigitSet::from_ints({0, 2}), 10);
  REQUIRE(r.size() == 2);
  CHECK(r[0].spectrum == std::vector<long long>{0, 1});
  CHECK(r[1].spectrum == std::vector<long long>{0, 3});
  for (const auto& h : r) CHECK(h.certified());

  auto r2 = find_spectrum_sets(2, DigitSet::from_ints({0, 1}), 10);
  REQUIRE(r2.size() == 1);
  CHECK(r2[0].spectrum == std::vector<long long>{0, 1});

  auto r3 = find_spectrum_sets(9, DigitSet::from_ints({0, 1, 5}), 100);
  bool found = false;
  for (const auto& h : r3)
    if (h.spectrum == std::vector<long long>{0, 3, 6}) found = true;
  CHECK(found);

  CHECK(find_spectrum_sets(4, DigitSet::from_ints({0, 1, 2}), 10).empty());
  CHECK_THROWS_AS(find_spectrum_sets(20000, DigitSet::from_ints({0, 1}), 1), GuardError);
}

TEST_CASE("spectrum search matches brute-force enumeration on small scales") {
  auto brute = [](long long n, const std::vector<long long>& b) {
    std::vector<std::vector<long long>> out;
    std::size_t m = b.size();
    std::vector<long long> l(m);
    l[0] = 0;
    // All choices of the remaining m-1 members from {1,...,n-1}, increasing.
    std::function<void(std::size_t, long long)> rec = [&](std::size_t pos, long long from) {
      if (pos == m) {
        if (check_unitarity(n, DigitSet::from_ints(b), l).certified()) out.push_back(l);
        return;
      }
      for (long long j = from; j < n; ++j) {
        l[pos] = j;
        rec(pos + 1, j + 1);
      }
    };
    rec(1, 1);
    return out;
  };

  std::mt19937 rng(77001);
  int nonempty = 0;
  for (int t = 0; t < 120; ++t) {
    long long n = 3 + (long long)(rng() % 10);  // scales up to 12
    std::size_t card = 2 + rng() % 2;
    std::set<long long> bs;
    while (bs.size() < card) bs.insert((long long)(rng() % n));
    std::vector<long long> b(bs.begin(), bs.end());
    auto expect = brute(n, b);
    auto got = find_spectrum_sets(n, DigitSet::from_ints(b), 1000);
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].spectrum == expect[i]);
    if (!expect.empty()) ++nonempty;
  }
  CHECK(nonempty > 5);  // the sweep actually exercised positive cases
}

// ---------------------------------------------------------------------------
// Remainder condition

TEST_CASE("remainder series fails on a recurring out-of-range digit") {
  auto rep = check_rbc(cycle_spec({ip(2, {0, 3})}), 20);
  CHECK(rep.verdict.value == VerdictValue::Fails);
  CHECK(rep.verdict.witness_index == 1);
  for (double t : rep.per_term) CHECK(t == 0.5);
}

TEST_CASE("remainder series proves a zero tail for principal-only cycles") {
  auto rep = check_rbc(cycle_spec({ip(2, {0, 1}), ip(4, {0, 1, 2, 3})}), 16);
  CHECK(rep.verdict.value == VerdictValue::ProvedByRule);
  CHECK(rep.verdict.bound == 0.0);
}

TEST_CASE("remainder series certifies the sparse-far family through its tag") {
  SequenceSpec spec = sfd_spec(IndexSet::arithmetic(1, 2), true);
  auto rep = check_rbc(spec, 40);
  CHECK(rep.verdict.value == VerdictValue::ProvedByRule);
  REQUIRE(rep.verdict.bound.has_value());
  CHECK(*rep.verdict.bound > 0.40);
  CHECK(*rep.verdict.bound < 0.50);

  // Partial sums agree with the direct formula: odd levels contribute
  // 1/(n+1)^2, even levels contribute nothing.
  double direct = 0.0;
  for (long n = 1; n <= 40; n += 2) direct += 1.0 / double((n + 1) * (n + 1));
  CHECK(rep.aggregate.back() == doctest::Approx(direct).epsilon(1e-14));

  // Without the tag the decay is only empirical, and the report says which
  // tag would close the gap.
  auto untagged = check_rbc(sfd_spec(IndexSet::arithmetic(1, 2), false), 40);
  CHECK(untagged.verdict.value == VerdictValue::EmpiricallyHolds);
  CHECK(untagged.verdict.reason.find("tag") != std::string::npos);
}

TEST_CASE("remainder series over a filter isolates the family complement") {
  SequenceSpec spec = sfd_spec(IndexSet::arithmetic(1, 2), true);
  auto comp = check_rbc(spec, 40, spec.declared_indices(), true);
  CHECK(comp.verdict.value == VerdictValue::ProvedByRule);
  CHECK(comp.verdict.bound == 0.0);

  auto sub = check_rbc(spec, 40, spec.declared_indices(), false);
  CHECK(sub.verdict.value == VerdictValue::ProvedByRule);
  CHECK(sub.indices.size() == 20);
}

// ---------------------------------------------------------------------------
// Digit-bound condition

TEST_CASE("digit bound is attained on recurring cycles") {
  auto rep = check_dbc(cycle_spec({ip(2, {0, 3}), ip(4, {0, 1, 2, 3})}), std::nullopt, 12);
  CHECK(rep.verdict.value == VerdictValue::ProvedByRule);
  CHECK(rep.verdict.bound == doctest::Approx(1.5));
  CHECK(rep.parameters.at("sup_cardinality") == 4.0);
}

TEST_CASE("digit bound on the sparse-far family: complement holds, full sequence fails") {
  SequenceSpec spec = sfd_spec(IndexSet::arithmetic(1, 2), true);

  auto comp = check_dbc(spec, spec.declared_indices(), 40, true);
  CHECK(comp.verdict.value == VerdictValue::ProvedByRule);
  CHECK(comp.verdict.bound == doctest::Approx(5.0 / 9.0));
  CHECK(comp.parameters.at("sup_cardinality") == 3.0);

  auto full = check_dbc(spec, std::nullopt, 40);
  CHECK(full.verdict.value == VerdictValue::Fails);
  CHECK(full.verdict.witness_index == 1);

  auto finite = check_dbc(spec, IndexSet::from_list({2, 4}), 40);
  CHECK(finite.verdict.value == VerdictValue::ProvedByRule);
  CHECK(finite.indices == std::vector<long>{2, 4});

  auto empty = check_dbc(spec, std::nullopt, 40, true);  // complement of everything
  CHECK(empty.verdict.value == VerdictValue::ProvedByRule);
  CHECK(empty.verdict.bound == 0.0);
}

// ---------------------------------------------------------------------------
// Concentration condition

TEST_CASE("concentration fails both ways when digits straddle the scale") {
  auto reps = check_pcc(cycle_spec({ip(2, {0, 3})}), 0.4, 16);
  CHECK(reps.window_case.verdict.value == VerdictValue::Fails);
  CHECK(reps.band_case.verdict.value == VerdictValue::Fails);
  CHECK(reps.band_case.verdict.witness_index == 1);
}

TEST_CASE("concentration band holds with the exact digit fraction on full blocks") {
  auto reps = check_pcc(cycle_spec({ip(4, {0, 1, 2, 3})}), 0.5, 16);
  CHECK(reps.band_case.verdict.value == VerdictValue::ProvedByRule);
  CHECK(reps.band_case.parameters.at("c") == doctest::Approx(0.75));
  // The window narrower than half the scale cannot hold all four digits.
  CHECK(reps.window_case.verdict.value == VerdictValue::Fails);
}

TEST_CASE("concentration on the sparse-far subsequence: proved window series and band") {
  SequenceSpec spec = sfd_spec(IndexSet::arithmetic(1, 2), true);
  auto reps = check_pcc(spec, 0.5, 40, spec.declared_indices(), false);

  CHECK(reps.window_case.verdict.value == VerdictValue::ProvedByRule);
  REQUIRE(reps.window_case.verdict.bound.has_value());
  CHECK(*reps.window_case.verdict.bound < 0.645);
  CHECK(reps.window_case.per_term[0] == doctest::Approx(0.25));
  CHECK(reps.window_case.windows[0][0] == 0.0);
  CHECK(reps.window_case.windows[0][1] == 2.0);

  CHECK(reps.band_case.verdict.value == VerdictValue::ProvedByRule);
  CHECK(reps.band_case.parameters.at("c") == doctest::Approx(0.25));
}

TEST_CASE("concentration over the whole sparse-far sequence fails at the off levels") {
  SequenceSpec spec = sfd_spec(IndexSet::arithmetic(1, 2), true);
  auto reps = check_pcc(spec, 0.5, 40);
  CHECK(reps.window_case.verdict.value == VerdictValue::Fails);
  REQUIRE(reps.window_case.verdict.witness_index.has_value());
  CHECK(*reps.window_case.verdict.witness_index == 2);  // first off level excludes 1/3
  // The band still keeps a fixed fraction at every level.
  CHECK(reps.band_case.verdict.value == VerdictValue::ProvedByRule);
  CHECK(reps.band_case.parameters.at("c") == doctest::Approx(0.25));
}

TEST_CASE("concentration windows below half the width lose the consecutive block") {
  SequenceSpec spec = sfd_spec(IndexSet::arithmetic(1, 2), true);
  auto reps = check_pcc(spec, 0.3, 40, spec.declared_indices(), false);
  CHECK(reps.window_case.verdict.value == VerdictValue::Fails);
  CHECK(reps.window_case.verdict.witness_index == 1);
}

TEST_CASE("concentration window optimum matches brute force over digit-anchored windows") {
  std::mt19937 rng(90210);
  for (int t = 0; t < 200; ++t) {
    long long n = 4 + (long long)(rng() % 60);
    std::set<long long> bs;
    std::size_t card = 2 + rng() % 7;
    while (bs.size() < card) bs.insert((long long)(rng() % (n + 6)) - 3);
    std::vector<long long> b(bs.begin(), bs.end());
    double l = 0.15 + 0.7 * double(rng() % 1000) / 1000.0;

    GeneratorPair p((double)n, DigitSet::from_ints(b));
    auto reps = check_pcc(cycle_spec({p}), l, 1);
    REQUIRE(reps.window_case.per_term.size() == 1);

    auto sp = split_digits(p);
    std::size_t best = 0;
    for (long long b1 : sp.principal) {
      std::size_t cap = 0;
      for (long long d : sp.principal)
        if (d >= b1 && double(d - b1) < l * double(n)) ++cap;
      best = std::max(best, cap);
    }
    double expect = double(b.size() - best) / double(b.size());
    CHECK(reps.window_case.per_term[0] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("concentration flags optima decided within a hair of the width limit") {
  auto reps = check_pcc(cycle_spec({ip(10, {0, 5})}), 0.5, 1);
  REQUIRE(reps.window_case.boundary_flags.size() == 1);
  CHECK(reps.window_case.boundary_flags[0] == 1);
  CHECK(reps.window_case.per_term[0] == doctest::Approx(0.5));

  CHECK_THROWS_AS(check_pcc(cycle_spec({ip(2, {0, 1})}), 0.0, 4), DomainError);
  CHECK_THROWS_AS(check_pcc(cycle_spec({ip(2, {0, 1})}), 1.0, 4), DomainError);
}

// ---------------------------------------------------------------------------
// Consecutive digit sets

TEST_CASE("general consecutive recognition works through residues") {
  auto a = is_general_consecutive(ip(2, {0, 3}));
  CHECK(a.consecutive);
  CHECK(a.size_divides_scale);

  auto b = is_general_consecutive(ip(8, {0, 1, 2, 11}));
  CHECK(b.consecutive);
  CHECK(b.size_divides_scale);

  auto c = is_general_consecutive(ip(4, {0, 2}));
  CHECK_FALSE(c.consecutive);

  auto d = is_general_consecutive(ip(4, {0, 4}));
  CHECK(d.collapsed);
  CHECK_FALSE(d.consecutive);

  auto e = is_general_consecutive(ip(6, {0, 1, 2, 3}));
  CHECK(e.consecutive);
  CHECK_FALSE(e.size_divides_scale);
}

// ---------------------------------------------------------------------------
// Difference gcd

TEST_CASE("difference gcd reaches one and stays settled") {
  auto rep = gcd_tail(cycle_spec({ip(3, {0, 3}), ip(3, {0, 2})}), 0, 10);
  CHECK(rep.value == 1);
  CHECK(rep.reached_one_at == 2);
  CHECK(rep.verdict.value == VerdictValue::ProvedByRule);
}

TEST_CASE("difference gcd fails definitively on a recurring common factor") {
  auto rep = gcd_tail(cycle_spec({ip(3, {0, 2, 4})}), 0, 12);
  CHECK(rep.value == 2);
  CHECK(rep.verdict.value == VerdictValue::Fails);
  CHECK(rep.verdict.reason.find("2") != std::string::npos);
}

TEST_CASE("difference gcd uses family structure beyond a short horizon") {
  SequenceSpec ge{Rule{FamilyRule{FamilyKind::GeometricEscape, IndexSet::all()}}, std::nullopt,
                  SpectrumSets::none()};
  auto shallow = gcd_tail(ge, 0, 1);
  CHECK(shallow.value == 3);
  CHECK(shallow.verdict.value == VerdictValue::ProvedByRule);  // coprime digits recur

  auto deeper = gcd_tail(ge, 0, 4);
  CHECK(deeper.value == 1);
  CHECK(deeper.reached_one_at == 2);

  auto sfd = gcd_tail(sfd_spec(IndexSet::arithmetic(1, 2), true), 0, 6);
  CHECK(sfd.value == 1);
  CHECK(sfd.reached_one_at == 1);

  CHECK_THROWS_AS(gcd_tail(ge, -1, 4), DomainError);
}

TEST_CASE("difference gcd shrinks with the horizon and grows with the cut") {
  std::mt19937 rng(5150);
  for (int t = 0; t < 40; ++t) {
    std::vector<GeneratorPair> pairs;
    std::size_t len = 1 + rng() % 3;
    for (std::size_t i = 0; i < len; ++i) {
      std::set<long long> bs;
      while (bs.size() < 2 + rng() % 3) bs.insert((long long)(rng() % 60));
      pairs.push_back(ip(2 + double(rng() % 9), std::vector<long long>(bs.begin(), bs.end())));
    }
    SequenceSpec spec = cycle_spec(pairs);
    BigInt g10 = gcd_tail(spec, 0, 10).value;
    BigInt g20 = gcd_tail(spec, 0, 20).value;
    BigInt g_cut = gcd_tail(spec, 3, 20).value;
    CHECK(g10 % g20 == 0);
    CHECK(g_cut % g20 == 0);
  }
}

// ---------------------------------------------------------------------------
// Classifier

TEST_CASE("classifier: sparse-far family is proved to exist and be spectral") {
  SequenceSpec spec = sfd_spec(IndexSet::arithmetic(1, 2), true);
  auto rep = classify(spec, 40);
  CHECK(rep.conclusion == ClassifyReport::Conclusion::ExistsAndSpectral);
  CHECK(rep.fully_proved);
  CHECK(rep.admissible_all);
  CHECK(rep.consecutive_recur);
  CHECK(rep.consecutive_count == 20);
  CHECK(rep.consecutive_witness == 1);
  CHECK(rep.path.find("remainder") != std::string::npos);
  CHECK(rep.path.find("consecutive") != std::string::npos);
  CHECK(rep.rbc_full.verdict.value == VerdictValue::ProvedByRule);
  CHECK(rep.gcd.verdict.value == VerdictValue::ProvedByRule);
  CHECK(rep.scale_exceeds_digits == 40);
}

TEST_CASE("classifier: escaping digits are proved to admit no limit") {
  SequenceSpec ge{Rule{FamilyRule{FamilyKind::GeometricEscape, IndexSet::all()}}, std::nullopt,
                  SpectrumSets::none()};
  auto rep = classify(ge, 30);
  CHECK(rep.conclusion == ClassifyReport::Conclusion::DoesNotExist);
  CHECK(rep.fully_proved);
  CHECK(rep.divergence_radius == 1.0);
}

TEST_CASE("classifier: consecutive subsequence with bounded complement") {
  SequenceSpec spec =
      interleave_spec({ip(2, {0, 3})}, {ip(2, {0, 1})}, IndexSet::arithmetic(1, 2));
  auto rep = classify(spec, 30);
  CHECK(rep.conclusion == ClassifyReport::Conclusion::ExistsAndSpectral);
  CHECK(rep.fully_proved);
  CHECK(rep.path.find("subsequence") != std::string::npos);
  CHECK(rep.path.find("complement") != std::string::npos);
  REQUIRE(rep.rbc_sub.has_value());
  CHECK(rep.rbc_sub->verdict.value == VerdictValue::ProvedByRule);
  REQUIRE(rep.dbc_complement.has_value());
  CHECK(rep.dbc_complement->verdict.value == VerdictValue::ProvedByRule);
  // The full-sequence remainder series fails, so the subsequence route was
  // genuinely needed.
  CHECK(rep.rbc_full.verdict.value == VerdictValue::Fails);
}

TEST_CASE("classifier: remainder plus concentration without recurring consecutive sets") {
  auto rep = classify(cycle_spec({ip(9, {0, 1, 5})}), 24, 0.8);
  CHECK(rep.conclusion == ClassifyReport::Conclusion::ExistsAndSpectral);
  CHECK(rep.fully_proved);
  CHECK_FALSE(rep.consecutive_recur);
  CHECK(rep.path.find("concentration") != std::string::npos);
}

TEST_CASE("classifier: subsequence concentration with digit-bounded complement") {
  SequenceSpec spec =
      interleave_spec({ip(2, {0, 3})}, {ip(9, {0, 1, 5})}, IndexSet::arithmetic(1, 2));
  auto rep = classify(spec, 30, 0.8);
  CHECK(rep.conclusion == ClassifyReport::Conclusion::ExistsAndSpectral);
  CHECK(rep.fully_proved);
  CHECK(rep.path.find("concentration") != std::string::npos);
  CHECK(rep.path.find("complement") != std::string::npos);
}

TEST_CASE("classifier: magnitude series yields existence without spectrality") {
  auto rep = classify(cycle_spec({ip(2, {0, 3})}), 30);
  CHECK(rep.conclusion == ClassifyReport::Conclusion::Exists);
  CHECK(rep.fully_proved);
  CHECK(rep.path.find("magnitude") != std::string::npos);
  // The digit sets are consecutive mod N and admissible, but the remainder
  // series diverges, so no spectral route applies.
  CHECK(rep.admissible_all);
  CHECK(rep.consecutive_recur);
  CHECK(rep.gcd.verdict.value == VerdictValue::Fails);
  CHECK(rep.gcd.value == 3);
}

TEST_CASE("classifier: inadmissible level blocks the spectral route but not existence") {
  auto rep = classify(cycle_spec({ip(2, {0, 1}), ip(4, {0, 1, 2})}), 24);
  CHECK(rep.conclusion == ClassifyReport::Conclusion::Exists);
  CHECK_FALSE(rep.admissible_all);
  CHECK(rep.inadmissible_index == 2);
  CHECK(rep.reason.find("blocked") != std::string::npos);

  auto collapsed = classify(cycle_spec({ip(4, {0, 1, 4})}), 24);
  CHECK_FALSE(collapsed.admissible_all);
  CHECK(collapsed.inadmissible_index == 1);
  CHECK(collapsed.conclusion == ClassifyReport::Conclusion::Exists);
}

TEST_CASE("classifier: stays unknown when no structure is available") {
  auto base = std::make_shared<const Rule>(
      Rule{FamilyRule{FamilyKind::GeometricEscape, IndexSet::all()}});
  auto sub = std::make_shared<const Rule>(CycleRule{{ip(2, {0, 1})}});
  SequenceSpec spec{Rule{InterleaveRule{base, sub, IndexSet::from_list({1})}}, std::nullopt,
                    SpectrumSets::none()};
  auto rep = classify(spec, 24);
  CHECK(rep.conclusion == ClassifyReport::Conclusion::Unknown);
  CHECK(rep.reason.find("no sufficient") != std::string::npos);
}
