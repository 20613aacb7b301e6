// Command-line surface over the library: admissibility checks, sequence
// classification, transform evaluation, spectrum verification,
// equi-positivity scans, sampling, and the three-series existence test.
//
// Output is machine-first. Every command builds one JSON payload (key-sorted,
// so identical invocations emit identical bytes) and, where it makes sense,
// a CSV artifact for plotting. Exit codes: 0 data produced or check passed,
// 1 a verification ran and failed, 2 bad input, 3 a resource guard tripped.
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "infconv/conditions.hpp"
#include "infconv/existence.hpp"
#include "infconv/presets.hpp"
#include "infconv/spec_io.hpp"
#include "infconv/spectra.hpp"
#include "infconv/transforms.hpp"
#include "json.hpp"

using nlohmann::json;
using namespace infconv;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kBadInput = 2;
constexpr int kGuard = 3;

std::string round_trip(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<long long> parse_ll_list(const std::string& s, const char* what) {
  std::vector<long long> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    long long v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
      throw DomainError(std::string(what) + ": '" + tok + "' is not an integer");
    out.push_back(v);
  }
  if (out.empty()) throw DomainError(std::string(what) + ": empty list");
  return out;
}

struct XiRange {
  double from = 0.0, to = 0.0, step = 0.0;
};

XiRange parse_range(const std::string& s) {
  XiRange r;
  std::stringstream ss(s);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
    throw DomainError("--xi expects FROM:TO:STEP");
  try {
    r.from = std::stod(a);
    r.to = std::stod(b);
    r.step = std::stod(c);
  } catch (const std::exception&) {
    throw DomainError("--xi expects numeric FROM:TO:STEP");
  }
  if (!(r.step > 0.0) || r.to < r.from) throw DomainError("--xi needs TO >= FROM and STEP > 0");
  if ((r.to - r.from) / r.step > 1e7) throw GuardError("--xi range has over 1e7 points");
  return r;
}

struct SpecArgs {
  std::string preset_name;
  std::string variant;
  std::string spec_file;
};

void add_spec_args(CLI::App* cmd, SpecArgs& a) {
  auto* p = cmd->add_option("--preset", a.preset_name, "built-in example sequence");
  cmd->add_option("--variant", a.variant, "preset variant, where one applies")->needs(p);
  auto* s = cmd->add_option("--spec", a.spec_file, "sequence spec file (JSON, schema v1)");
  p->excludes(s);
  s->excludes(p);
}

struct Resolved {
  SequenceSpec spec;
  std::string label;
  std::string note;
};

Resolved resolve_spec(const SpecArgs& a) {
  if (!a.preset_name.empty()) {
    auto p = preset(a.preset_name, a.variant);
    if (!p) throw DomainError("unknown preset '" + a.preset_name + "'");
    return {p->spec, p->name, p->note};
  }
  if (!a.spec_file.empty()) return {load_spec_file(a.spec_file), a.spec_file, ""};
  throw DomainError("one of --preset or --spec is required");
}

void write_text(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open output file: " + path);
  out << body;
}

void emit_json(const json& payload, const std::string& path) {
  write_text(path, payload.dump(2) + "\n");
}

json verdict_json(const Verdict& v) {
  json j;
  j["value"] = to_string(v.value);
  j["reason"] = v.reason;
  if (v.witness_index) j["witness_index"] = *v.witness_index;
  if (v.bound) j["bound"] = *v.bound;
  return j;
}

json condition_json(const ConditionReport& r) {
  json j;
  j["condition"] = to_string(r.condition);
  j["verdict"] = verdict_json(r.verdict);
  json params = json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  j["parameters"] = params;
  j["indices"] = r.indices;
  j["per_term"] = r.per_term;
  j["aggregate"] = r.aggregate;
  if (!r.windows.empty()) {
    json w = json::array();
    for (const auto& win : r.windows) w.push_back({win[0], win[1]});
    j["windows"] = w;
  }
  return j;
}

json bigint_json(const BigInt& v) {
  // JSON numbers are exact only through 2^53.
  static const BigInt lim = BigInt(1) << 53;
  if (v <= lim && v >= -lim) return json(v.convert_to<long long>());
  return json(v.str());
}

// ---------------------------------------------------------------------------
// Commands

int cmd_check_admissible(long long n, const std::vector<long long>& b,
                         const std::optional<std::vector<long long>>& l,
                         std::size_t max_results, const std::string& cmdline,
                         const std::string& out) {
  DigitSet digits = DigitSet::from_ints(b);
  json payload;
  payload["schema"] = "check-admissible/1";
  payload["command"] = cmdline;
  payload["n"] = n;
  payload["b"] = b;
  if (l) {
    HadamardTriple t = check_unitarity(n, digits, *l);
    payload["l"] = *l;
    payload["residual"] = t.residual;
    payload["certified"] = t.certified();
    emit_json(payload, out);
    return t.certified() ? kOk : kFailed;
  }
  auto found = find_spectrum_sets(n, digits, max_results);
  json arr = json::array();
  for (const auto& t : found) arr.push_back({{"l", t.spectrum}, {"residual", t.residual}});
  payload["results"] = arr;
  payload["count"] = found.size();
  emit_json(payload, out);
  return found.empty() ? kFailed : kOk;
}

int cmd_classify(const Resolved& r, long n_max, double l, const std::string& cmdline,
                 const std::string& out) {
  ClassifyReport rep = classify(r.spec, n_max, l);
  ExistenceReport ex = existence_verdict(r.spec, n_max);

  json payload;
  payload["schema"] = "classify/1";
  payload["command"] = cmdline;
  payload["sequence"] = r.label;
  payload["n_max"] = n_max;
  payload["window_fraction"] = l;
  payload["conclusion"] = to_string(rep.conclusion);
  payload["path"] = rep.path;
  payload["reason"] = rep.reason;
  payload["fully_proved"] = rep.fully_proved;
  payload["admissible_all"] = rep.admissible_all;
  if (rep.inadmissible_index) payload["inadmissible_index"] = *rep.inadmissible_index;
  if (!rep.admissibility_note.empty()) payload["admissibility_note"] = rep.admissibility_note;
  payload["consecutive"] = {{"count", rep.consecutive_count},
                            {"recurring", rep.consecutive_recur}};
  if (rep.consecutive_witness) payload["consecutive"]["witness"] = *rep.consecutive_witness;
  payload["scale_exceeds_digits"] = rep.scale_exceeds_digits;
  if (rep.divergence_radius) payload["divergence_radius"] = *rep.divergence_radius;

  json conds;
  conds["remainder_full"] = condition_json(rep.rbc_full);
  if (rep.rbc_sub) conds["remainder_subsequence"] = condition_json(*rep.rbc_sub);
  if (rep.dbc_complement) conds["digit_bound_complement"] = condition_json(*rep.dbc_complement);
  if (rep.pcc) {
    conds["concentration_window"] = condition_json(rep.pcc->window_case);
    conds["concentration_band"] = condition_json(rep.pcc->band_case);
  }
  payload["conditions"] = conds;

  json gcd;
  gcd["value"] = bigint_json(rep.gcd.value);
  gcd["verdict"] = verdict_json(rep.gcd.verdict);
  if (rep.gcd.reached_one_at) gcd["reached_one_at"] = *rep.gcd.reached_one_at;
  payload["difference_gcd"] = gcd;

  json existence;
  existence["conclusion"] = to_string(ex.conclusion);
  existence["criterion"] = ex.criterion;
  existence["reason"] = ex.reason;
  existence["remainder_series"] = verdict_json(ex.remainder_series);
  existence["magnitude_series"] = verdict_json(ex.magnitude_series);
  if (!ex.magnitude_partial.empty())
    existence["magnitude_partial_sum"] = ex.magnitude_partial.back();
  if (ex.divergence_radius) existence["divergence_radius"] = *ex.divergence_radius;
  if (ex.divergence_witness) existence["divergence_witness"] = *ex.divergence_witness;
  payload["existence"] = existence;

  if (!r.note.empty()) payload["note"] = r.note;
  emit_json(payload, out);
  return kOk;
}

int cmd_fourier(const Resolved& r, const XiRange& range, long depth,
                const std::string& cmdline, const std::string& out_csv,
                const std::string& out_json) {
  std::string csv = "xi,re,im,modulus,tail_bound\n";
  long rows = 0;
  double max_modulus = 0.0;
  for (long i = 0;; ++i) {
    double xi = range.from + (double)i * range.step;
    if (xi > range.to + range.step * 0.5) break;
    TruncatedTransform t = transform_eval(r.spec, xi, depth);
    double mod = std::abs(t.value);
    max_modulus = std::max(max_modulus, mod);
    csv += round_trip(xi) + "," + round_trip(t.value.real()) + "," +
           round_trip(t.value.imag()) + "," + round_trip(mod) + ",";
    if (t.tail_error_bound) csv += round_trip(*t.tail_error_bound);
    csv += "\n";
    ++rows;
  }
  write_text(out_csv, csv);
  if (!out_json.empty()) {
    json payload;
    payload["schema"] = "fourier/1";
    payload["command"] = cmdline;
    payload["sequence"] = r.label;
    payload["depth"] = depth;
    payload["xi"] = {{"from", range.from}, {"to", range.to}, {"step", range.step}};
    payload["rows"] = rows;
    payload["max_modulus"] = max_modulus;
    emit_json(payload, out_json);
  }
  return kOk;
}

int cmd_spectrum(const Resolved& r, long level, const std::string& check, long depth,
                 std::optional<double> tol, long grid, const std::string& cmdline,
                 const std::string& out, const std::string& out_csv) {
  json payload;
  payload["command"] = cmdline;
  payload["sequence"] = r.label;
  payload["level"] = level;

  if (check.empty()) {
    auto cand = candidate_spectrum(certified_triples(r.spec, level));
    payload["schema"] = "spectrum-points/1";
    json pts = json::array();
    for (const BigInt& p : cand.points) pts.push_back(bigint_json(p));
    payload["points"] = pts;
    payload["cardinality"] = cand.cardinality;
    payload["spectrum_sets"] = cand.spectrum_sets;
    emit_json(payload, out);
    return kOk;
  }
  if (check == "gram") {
    double residual = finite_level_gram(certified_triples(r.spec, level));
    double threshold = tol.value_or(1e-10);
    payload["schema"] = "spectrum-gram/1";
    payload["residual"] = residual;
    payload["threshold"] = threshold;
    payload["passed"] = residual <= threshold;
    emit_json(payload, out);
    return residual <= threshold ? kOk : kFailed;
  }
  if (check == "ortho") {
    OrthogonalityReport rep = orthogonality_check(r.spec, level, depth, tol.value_or(1e-8));
    payload["schema"] = "spectrum-ortho/1";
    payload["depth"] = rep.depth;
    payload["tol"] = rep.tol;
    payload["pair_count"] = rep.pair_count;
    payload["max_modulus"] = rep.max_modulus;
    payload["worst_pair"] = {rep.worst_lambda, rep.worst_lambda_prime};
    if (rep.max_tail_bound) payload["max_tail_bound"] = *rep.max_tail_bound;
    payload["passed"] = rep.passed;
    emit_json(payload, out);
    return rep.passed ? kOk : kFailed;
  }
  if (check == "completeness") {
    std::vector<double> xis;
    for (long i = 0; i < grid; ++i) xis.push_back((double)i / (double)grid);
    CompletenessReport rep = completeness_scan(r.spec, level, xis, depth);
    payload["schema"] = "spectrum-completeness/1";
    payload["depth"] = rep.depth;
    payload["grid"] = grid;
    payload["lambda_count"] = rep.lambda_count;
    payload["min_q"] = rep.min_q;
    payload["max_q"] = rep.max_q;
    if (rep.max_q_plus_slack) payload["max_q_plus_slack"] = *rep.max_q_plus_slack;
    payload["band_contains_one"] = rep.band_contains_one;
    json pts = json::array();
    for (const auto& pt : rep.points) {
      json pj = {{"xi", pt.xi}, {"q", pt.q}};
      if (pt.slack) pj["slack"] = *pt.slack;
      pts.push_back(pj);
    }
    payload["points"] = pts;
    emit_json(payload, out);
    if (!out_csv.empty()) {
      std::string csv = "xi,q,slack\n";
      for (const auto& pt : rep.points) {
        csv += round_trip(pt.xi) + "," + round_trip(pt.q) + ",";
        if (pt.slack) csv += round_trip(*pt.slack);
        csv += "\n";
      }
      write_text(out_csv, csv);
    }
    return kOk;
  }
  throw DomainError("--check must be gram, ortho or completeness");
}

int cmd_equipositive(const Resolved& r, const std::vector<long long>& tails, long grid,
                     int shifts, long depth, double probe, double floor,
                     const std::string& cmdline, const std::string& out,
                     const std::string& out_csv) {
  std::vector<long> indices(tails.begin(), tails.end());
  EquiPositivityScan scan =
      equipositivity_scan(r.spec, indices, grid, shifts, depth, probe, floor);

  json payload;
  payload["schema"] = "equipositive/1";
  payload["command"] = cmdline;
  payload["sequence"] = r.label;
  payload["tail_indices"] = scan.tail_indices;
  payload["grid"] = scan.grid_resolution;
  payload["shift_range"] = scan.shift_range;
  payload["depth"] = scan.product_depth;
  payload["delta_probe"] = scan.delta_probe;
  payload["epsilon_floor"] = scan.epsilon_floor;
  payload["epsilon"] = scan.epsilon;
  payload["witness"] = scan.witness;
  if (scan.failing_x) payload["failing_x"] = *scan.failing_x;
  if (scan.failing_index) payload["failing_index"] = *scan.failing_index;
  json cells = json::array();
  for (const auto& c : scan.cells)
    cells.push_back({{"x", c.x},
                     {"shift", c.shift},
                     {"worst_index", c.worst_index},
                     {"min_modulus", c.score}});
  payload["cells"] = cells;
  emit_json(payload, out);

  if (!out_csv.empty()) {
    std::string csv = "x,shift,min_modulus\n";
    for (const auto& c : scan.cells)
      csv += round_trip(c.x) + "," + std::to_string(c.shift) + "," + round_trip(c.score) + "\n";
    write_text(out_csv, csv);
  }
  if (!scan.witness) {
    std::cerr << "equi-positivity fails at x = " << round_trip(*scan.failing_x)
              << " (tail index " << *scan.failing_index << ", modulus stuck at "
              << round_trip(scan.epsilon) << ")\n";
    return kFailed;
  }
  return kOk;
}

int cmd_sample(const Resolved& r, long depth, long long count, unsigned long long seed,
               const std::string& cmdline, const std::string& out,
               const std::string& out_csv) {
  SampleStats st = sample_measure(r.spec, depth, count, seed);
  json payload;
  payload["schema"] = "sample/1";
  payload["command"] = cmdline;
  payload["sequence"] = r.label;
  payload["depth"] = st.depth;
  payload["count"] = st.count;
  payload["seed"] = st.seed;
  payload["mean"] = st.mean;
  payload["variance"] = st.variance;
  payload["min"] = st.min_value;
  payload["max"] = st.max_value;
  payload["bin_left"] = st.bin_left;
  payload["bin_width"] = st.bin_width;
  if (st.truncation_displacement)
    payload["truncation_displacement"] = *st.truncation_displacement;
  payload["histogram"] = st.histogram;
  emit_json(payload, out);

  if (!out_csv.empty()) {
    std::string csv = "bin_left,bin_right,count,frequency,density\n";
    for (std::size_t i = 0; i < st.histogram.size(); ++i) {
      double left = st.bin_left + (double)i * st.bin_width;
      double freq = (double)st.histogram[i] / (double)st.count;
      double density = st.bin_width > 0.0 ? freq / st.bin_width : 0.0;
      csv += round_trip(left) + "," + round_trip(left + st.bin_width) + "," +
             std::to_string(st.histogram[i]) + "," + round_trip(freq) + "," +
             round_trip(density) + "\n";
    }
    write_text(out_csv, csv);
  }
  return kOk;
}

int cmd_three_series(const Resolved& r, double radius, long n_max,
                     const std::string& cmdline, const std::string& out) {
  ThreeSeriesReport rep = three_series(r.spec, radius, n_max);
  json payload;
  payload["schema"] = "three-series/1";
  payload["command"] = cmdline;
  payload["sequence"] = r.label;
  payload["radius"] = radius;
  payload["n_max"] = n_max;
  payload["conclusion"] = to_string(rep.conclusion);
  payload["reason"] = rep.reason;
  payload["mass"] = verdict_json(rep.mass);
  payload["mean"] = verdict_json(rep.mean);
  payload["variance"] = verdict_json(rep.var);
  payload["series_mass"] = rep.series_mass;
  payload["series_mean"] = rep.series_mean;
  payload["series_variance"] = rep.series_var;
  emit_json(payload, out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cmdline;
  for (int i = 0; i < argc; ++i) {
    if (i) cmdline += ' ';
    cmdline += argv[i];
  }

  CLI::App app{"numerical laboratory for infinite convolution measures"};
  app.require_subcommand(1);
  long jobs = 1;
  app.add_option("--jobs", jobs, "max worker threads (results never depend on it)")
      ->check(CLI::PositiveNumber);

  // check-admissible
  auto* ca = app.add_subcommand("check-admissible",
                                "certify a scale/digit pair, or search spectrum sets");
  long long ca_n = 0;
  std::string ca_b, ca_l, ca_out;
  std::size_t ca_max = 8;
  ca->add_option("--n", ca_n, "integer scale, at least 2")->required();
  ca->add_option("--b", ca_b, "digit set, comma-separated integers")->required();
  ca->add_option("--l", ca_l, "candidate spectrum set; omit to search");
  ca->add_option("--max-results", ca_max, "search result cap");
  ca->add_option("-o,--output", ca_out, "payload path (default stdout)");

  // classify
  auto* cl = app.add_subcommand("classify", "run the full condition dashboard");
  SpecArgs cl_spec;
  add_spec_args(cl, cl_spec);
  long cl_nmax = 200;
  double cl_l = 0.5;
  std::string cl_out;
  cl->add_option("--n-max", cl_nmax, "inspection horizon");
  cl->add_option("--l", cl_l, "concentration window fraction in (0,1)");
  cl->add_option("-o,--output", cl_out, "payload path (default stdout)");

  // fourier
  auto* fo = app.add_subcommand("fourier", "truncated transform over a xi grid (CSV)");
  SpecArgs fo_spec;
  add_spec_args(fo, fo_spec);
  std::string fo_xi, fo_out, fo_json;
  long fo_depth = 40;
  fo->add_option("--xi", fo_xi, "grid FROM:TO:STEP")->required();
  fo->add_option("--depth", fo_depth, "truncation depth");
  fo->add_option("-o,--output", fo_out, "CSV path (default stdout)");
  fo->add_option("--json", fo_json, "also write a JSON summary here");

  // spectrum
  auto* sp = app.add_subcommand("spectrum",
                                "candidate spectrum points and verification checks");
  SpecArgs sp_spec;
  add_spec_args(sp, sp_spec);
  long sp_level = 0, sp_depth = 40, sp_grid = 128;
  std::string sp_check, sp_out, sp_csv;
  std::optional<double> sp_tol;
  sp->add_option("--level", sp_level, "number of leading terms")->required();
  sp->add_option("--check", sp_check, "gram, ortho or completeness; omit to list points");
  sp->add_option("--depth", sp_depth, "transform truncation depth");
  sp->add_option("--tol", sp_tol, "pass threshold (default: gram 1e-10, ortho 1e-8)");
  sp->add_option("--grid", sp_grid, "completeness grid size over [0,1)");
  sp->add_option("-o,--output", sp_out, "payload path (default stdout)");
  sp->add_option("--csv", sp_csv, "completeness grid CSV path");

  // equipositive
  auto* eq = app.add_subcommand("equipositive", "scan tail transforms for a uniform floor");
  SpecArgs eq_spec;
  add_spec_args(eq, eq_spec);
  std::string eq_tails, eq_out, eq_csv;
  long eq_grid = 256, eq_depth = 40;
  int eq_shifts = kDefaultShiftRange;
  double eq_probe = 1.0 / 64.0, eq_floor = kDefaultEpsilonFloor;
  eq->add_option("--tails", eq_tails, "tail indices, comma-separated")->required();
  eq->add_option("--grid", eq_grid, "grid resolution over [0,1)");
  eq->add_option("--shifts", eq_shifts, "integer shift search radius");
  eq->add_option("--depth", eq_depth, "tail product depth");
  eq->add_option("--probe", eq_probe, "probe offset around each grid point");
  eq->add_option("--eps-floor", eq_floor, "witness requires epsilon at or above this");
  eq->add_option("-o,--output", eq_out, "payload path (default stdout)");
  eq->add_option("--csv", eq_csv, "shift map CSV path");

  // sample
  auto* sa = app.add_subcommand("sample", "draw from the depth-truncated measure");
  SpecArgs sa_spec;
  add_spec_args(sa, sa_spec);
  long sa_depth = 40;
  long long sa_count = 100000;
  unsigned long long sa_seed = 1;
  std::string sa_out, sa_csv;
  sa->add_option("--depth", sa_depth, "truncation depth");
  sa->add_option("--count", sa_count, "sample count");
  sa->add_option("--seed", sa_seed, "RNG seed");
  sa->add_option("-o,--output", sa_out, "payload path (default stdout)");
  sa->add_option("--csv", sa_csv, "histogram CSV path");

  // three-series
  auto* th = app.add_subcommand("three-series", "truncation series existence test");
  SpecArgs th_spec;
  add_spec_args(th, th_spec);
  double th_radius = 1.0;
  long th_nmax = 40;
  std::string th_out;
  th->add_option("--radius", th_radius, "truncation ball radius");
  th->add_option("--n-max", th_nmax, "levels to inspect");
  th->add_option("-o,--output", th_out, "payload path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    if (*ca) {
      std::optional<std::vector<long long>> l;
      if (!ca_l.empty()) l = parse_ll_list(ca_l, "--l");
      return cmd_check_admissible(ca_n, parse_ll_list(ca_b, "--b"), l, ca_max, cmdline,
                                  ca_out);
    }
    if (*cl) return cmd_classify(resolve_spec(cl_spec), cl_nmax, cl_l, cmdline, cl_out);
    if (*fo)
      return cmd_fourier(resolve_spec(fo_spec), parse_range(fo_xi), fo_depth, cmdline,
                         fo_out, fo_json);
    if (*sp)
      return cmd_spectrum(resolve_spec(sp_spec), sp_level, sp_check, sp_depth, sp_tol,
                          sp_grid, cmdline, sp_out, sp_csv);
    if (*eq)
      return cmd_equipositive(resolve_spec(eq_spec), parse_ll_list(eq_tails, "--tails"),
                              eq_grid, eq_shifts, eq_depth, eq_probe, eq_floor, cmdline,
                              eq_out, eq_csv);
    if (*sa)
      return cmd_sample(resolve_spec(sa_spec), sa_depth, sa_count, sa_seed, cmdline, sa_out,
                        sa_csv);
    if (*th)
      return cmd_three_series(resolve_spec(th_spec), th_radius, th_nmax, cmdline, th_out);
  } catch (const GuardError& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return kGuard;
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kBadInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
