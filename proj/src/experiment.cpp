#include "limlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <stdexcept>

#include "limlab/constructions.hpp"
#include "limlab/convergence.hpp"
#include "limlab/errors.hpp"
#include "limlab/format.hpp"

namespace limlab {

namespace {

[[noreturn]] void fail(const std::string& ctx, const std::string& what) { throw ParseError(ctx + ": " + what); }

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& ctx) {
  if (!j.is_object()) fail(ctx, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
    if (!known) fail(ctx, "unknown field '" + it.key() + "'");
  }
}

std::int64_t as_int(const Json& j, const std::string& ctx) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::trunc(v) && std::abs(v) < 9.2e18) return static_cast<std::int64_t>(v);
  }
  fail(ctx, "expected an integer");
}

double as_double(const Json& j, const std::string& ctx) {
  if (!j.is_number()) fail(ctx, "expected a number");
  return j.get<double>();
}

std::string as_string(const Json& j, const std::string& ctx) {
  if (!j.is_string()) fail(ctx, "expected a string");
  return j.get<std::string>();
}

std::int64_t parse_int_text(const std::string& text, const std::string& ctx) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(ctx, "'" + text + "' is not a number");
  }
  if (used != text.size() || !std::isfinite(v) || v != std::trunc(v) || std::abs(v) >= 9.2e18) {
    fail(ctx, "'" + text + "' is not an integer");
  }
  return static_cast<std::int64_t>(v);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

const std::vector<std::string>& families() {
  static const std::vector<std::string> names = {"poisson",  "uniform",  "modified_uniform", "delta_n",
                                                 "shifted_poisson", "dirac", "splice", "truncate_tail",
                                                 "truncate_head"};
  return names;
}

bool is_combinator(const std::string& family) {
  return family == "splice" || family == "truncate_tail" || family == "truncate_head";
}

Filtration make_filtration(const SequenceSpec& spec, const MeasureSequence& base, unsigned threads) {
  const std::string name = spec.filtration.value_or(spec.family == "splice" ? "half" : "slow");
  if (name == "slow") {
    SlowFiltrationOptions options;
    options.threads = threads;
    return slow_filtration(base, prefix_filtration(), spec.horizon.value_or(2000), options).filtration;
  }
  return filtration_by_name(name);
}

SpliceSpec make_splice_spec(const SequenceSpec& spec, unsigned threads) {
  if (!spec.base) throw ParseError("splice needs a base sequence");
  const auto base = spec.base->build(threads);
  auto target = parse_target(spec.target.value_or("flat"), base.domain());
  return SpliceSpec(base, std::move(target), make_filtration(spec, base, threads));
}

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<IndexSet> parse_sets(const std::vector<std::string>& texts) {
  std::vector<IndexSet> out;
  for (const auto& t : texts) out.push_back(parse_set(t));
  return out;
}

const std::vector<std::string>& default_splice_battery() {
  static const std::vector<std::string> sets = {
      "residue(0,2)", "residue(1,2)",  "residue(1,3)",   "residue(2,5)",          "B()",
      "Bprime(-1,1)", "range(0,10)",   "range(50,150)",  "range(0,1000)",         "set(0)",
      "set(1,2,3)",   "set(5,50,500)", "~range(0,20)",   "bernoulli(0.5,1,20000)", "bernoulli(0.2,2,20000)",
      "residue(0,7) | range(0,30)", "residue(0,2) - B()", "progression(3,4)", "range(100,100000)", "naturals"};
  return sets;
}

const std::vector<std::string>& default_qvague_battery() {
  static const std::vector<std::string> sets = {"set(0)", "set(1)", "set(2,3)", "range(0,9)"};
  return sets;
}

// ---------------------------------------------------------------------------
// Experiment kinds.

ExperimentResult run_lrf(const ExperimentConfig& cfg) {
  const auto texts = cfg.sets.empty() ? std::vector<std::string>{"residue(0,2)"} : cfg.sets;
  const auto grid = cfg.N_grid.value_or(GridSpec::list({10'000, 100'000, 1'000'000})).expand();
  const double tol = cfg.tol.value_or(1e-3);
  ExperimentResult r;
  r.table.columns = {"set", "N", "count", "ratio"};
  r.summary["tol"] = tol;
  r.summary["sets"] = Json::array();
  for (const auto& text : texts) {
    const auto est = lrf(parse_set(text), grid, tol);
    for (std::size_t i = 0; i < grid.size(); ++i) r.table.add({est.set_descriptor, grid[i], est.counts[i], est.ratios[i]});
    r.summary["sets"].push_back(
        Json{{"set", est.set_descriptor}, {"limit_est", json_number(est.limit_est)}, {"exists", est.exists}});
  }
  return r;
}

ExperimentResult run_envelope(const ExperimentConfig& cfg) {
  const unsigned threads = cfg.threads.value_or(0);
  const auto seq = cfg.sequence.value_or(SequenceSpec::named("delta_n")).build(threads);
  const auto sets = parse_sets(cfg.sets.empty() ? std::vector<std::string>{"residue(0,2)"} : cfg.sets);
  const auto grid = cfg.n_grid.value_or(GridSpec::linear(1, 1000)).expand();
  EnvelopeOptions options;
  options.tail_window = static_cast<std::size_t>(std::max<std::int64_t>(0, cfg.tail_window.value_or(0)));
  options.stability_tol = cfg.tol.value_or(1e-3);
  options.threads = threads;
  const auto reports = fap_envelopes(seq, sets, grid, options);
  ExperimentResult r;
  r.table.columns = {"set", "n", "value", "error_bound"};
  r.summary["sequence"] = seq.tag();
  r.summary["envelopes"] = Json::array();
  for (const auto& e : reports) {
    for (std::size_t i = 0; i < grid.size(); ++i) r.table.add({e.set_descriptor, grid[i], e.values[i], e.error_bounds[i]});
    r.summary["envelopes"].push_back(Json{{"set", e.set_descriptor},
                                          {"liminf", json_number(e.liminf_est)},
                                          {"limsup", json_number(e.limsup_est)},
                                          {"stable", e.stable},
                                          {"tail_window", e.tail_window}});
  }
  return r;
}

ExperimentResult run_qvague(const ExperimentConfig& cfg) {
  const unsigned threads = cfg.threads.value_or(0);
  const auto seq = cfg.sequence.value_or(SequenceSpec::named("uniform")).build(threads);
  const auto target = parse_target(cfg.target.value_or("flat"), seq.domain());
  const auto battery = parse_sets(cfg.sets.empty() ? default_qvague_battery() : cfg.sets);
  const auto grid = cfg.n_grid.value_or(GridSpec::linear(100, 1000, 100)).expand();
  const auto f0 = cfg.reference_set ? parse_set(*cfg.reference_set) : default_reference_set(seq, grid);
  const auto q = detect_qvague(seq, target, f0, battery, grid, {cfg.tol.value_or(1e-2), threads});
  ExperimentResult r;
  r.table.columns = {"n", "status", "a_n", "max_deviation"};
  std::size_t used = 0;
  for (auto n : grid) {
    if (used < q.n_used.size() && q.n_used[used] == n) {
      r.table.add({n, std::string("used"), q.scalars[used], q.max_deviation[used]});
      ++used;
    } else {
      r.table.add({n, std::string("skipped"), std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN()});
    }
  }
  r.summary["sequence"] = seq.tag();
  r.summary["target"] = target.family_tag();
  r.summary["reference_set"] = q.reference_set;
  r.summary["verdict"] = to_string(q.verdict);
  if (q.verdict == Verdict::RejectedAt) {
    r.summary["rejected_n"] = q.rejected_n;
    r.summary["rejected_set"] = q.rejected_set;
  }
  r.summary["final_deviation"] = json_number(q.final_deviation);
  r.summary["skipped"] = q.n_skipped;
  return r;
}

ExperimentResult run_splice(const ExperimentConfig& cfg) {
  const unsigned threads = cfg.threads.value_or(0);
  SequenceSpec spec = cfg.sequence.value_or(SequenceSpec::named("splice"));
  if (spec.family != "splice") throw ParseError("splice-demo needs a sequence with family 'splice'");
  if (!spec.base) spec.base = std::make_shared<const SequenceSpec>(SequenceSpec::named("poisson"));
  const SpliceSpec splice_spec = make_splice_spec(spec, threads);
  const auto spliced = splice(splice_spec);
  const auto battery = parse_sets(cfg.sets.empty() ? default_splice_battery() : cfg.sets);
  const auto grid = cfg.n_grid.value_or(GridSpec::linear(10, 400, 10)).expand();
  const double tol = cfg.tol.value_or(2e-2);
  EnvelopeOptions options;
  options.threads = threads;
  const auto cmp = envelope_compare(splice_spec.base(), spliced, battery, grid, tol,
                                    [&](std::int64_t n) { return splice_spec.gamma(n); }, options);
  const auto q = detect_qvague(spliced, splice_spec.target(), finite_set({0}), parse_sets(default_qvague_battery()),
                               grid, {1e-2, threads});
  const auto degenerate = degenerate_points(splice_spec, grid);
  ExperimentResult r;
  r.table.columns = {"n", "gamma", "degenerate", "sup_deviation", "bound"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool deg = std::find(degenerate.begin(), degenerate.end(), grid[i]) != degenerate.end();
    r.table.add({grid[i], cmp.gammas[i], deg, cmp.per_n_sup[i], 2.0 * cmp.gammas[i]});
  }
  r.summary["sequence"] = spliced.tag();
  r.summary["verdict"] = cmp.same ? "Same" : "Different";
  r.summary["max_envelope_gap"] = json_number(cmp.gaps.empty() ? 0.0 : *std::max_element(cmp.gaps.begin(), cmp.gaps.end()));
  r.summary["bound_holds"] = cmp.bound_holds;
  r.summary["gamma_last"] = json_number(cmp.gammas.back());
  r.summary["degenerate_n"] = degenerate;
  r.summary["qvague_verdict"] = to_string(q.verdict);
  r.summary["qvague_final_deviation"] = json_number(q.final_deviation);
  return r;
}

ExperimentResult run_poisson_si(const ExperimentConfig& cfg) {
  const unsigned threads = cfg.threads.value_or(0);
  const auto seq = cfg.sequence.value_or(SequenceSpec::named("poisson")).build(threads);
  const auto battery =
      parse_sets(cfg.sets.empty() ? std::vector<std::string>{"residue(0,2)", "residue(1,3)", "B()", "range(0,40)"}
                                  : cfg.sets);
  const auto grid = cfg.n_grid.value_or(GridSpec::list({10, 50, 100, 400, 1000})).expand();
  ExperimentResult r;
  r.table.columns = {"n", "k", "tv", "tv_error", "bound", "max_set_gap", "argmax_set"};
  bool holds = true;
  double worst_ratio = 0.0;
  for (auto n : grid) {
    std::vector<std::int64_t> shifts = cfg.shifts;
    if (shifts.empty()) {
      for (std::int64_t k = 1; k <= std::max<std::int64_t>(1, isqrt(n)); ++k) shifts.push_back(k);
    }
    const auto report = si_diagnostic(seq, shifts, battery, {n}, threads);
    for (const auto& row : report.rows) {
      r.table.add({row.n, row.k, row.tv, row.tv_error, row.bound, row.max_set_gap, row.argmax_set});
      if (!std::isnan(row.bound)) worst_ratio = std::max(worst_ratio, row.tv / row.bound);
    }
    holds = holds && report.bound_holds;
  }
  r.summary["sequence"] = seq.tag();
  r.summary["bound_holds"] = holds;
  r.summary["max_tv_over_bound"] = json_number(worst_ratio);
  r.summary["rows"] = r.table.rows.size();
  return r;
}

ExperimentResult run_bs_test(const ExperimentConfig& cfg) {
  const unsigned threads = cfg.threads.value_or(0);
  const auto seq = cfg.sequence.value_or(SequenceSpec::named("uniform")).build(threads);
  const auto seeds = cfg.seeds.empty() ? default_seeds(static_cast<std::size_t>(std::max<std::int64_t>(1, cfg.trials.value_or(100))))
                                       : cfg.seeds;
  const double tol = cfg.tol.value_or(1e-2);
  const auto bs = bs_uniformity_test(seq, cfg.p.value_or(0.3), cfg.n_eval.value_or(100'000), seeds, tol, threads);
  ExperimentResult r;
  r.table.columns = {"seed", "value", "deviation"};
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    r.table.add({static_cast<std::int64_t>(seeds[i]), bs.values[i], std::abs(bs.values[i] - bs.p)});
  }
  r.summary["sequence"] = seq.tag();
  r.summary["p"] = bs.p;
  r.summary["n_eval"] = bs.n_eval;
  r.summary["horizon"] = bs.horizon;
  r.summary["trials"] = seeds.size();
  r.summary["max_deviation"] = json_number(bs.max_deviation);
  r.summary["mean"] = json_number(bs.mean);
  r.summary["stddev"] = json_number(bs.stddev);
  r.summary["fitted_c"] = json_number(bs.fitted_c);
  r.summary["tol"] = tol;
  r.summary["passes"] = bs.passes;
  return r;
}

ExperimentResult run_appendix_b(const ExperimentConfig& cfg) {
  const unsigned threads = cfg.threads.value_or(0);
  const auto seq = cfg.sequence.value_or(SequenceSpec::named("poisson")).build(threads);
  const auto texts = cfg.sets.empty() ? std::vector<std::string>{"B()", "Bprime(-1,1)"} : cfg.sets;
  const auto sets = parse_sets(texts);
  const auto grid = cfg.n_grid.value_or(GridSpec::powers(4, 1, 6)).expand();
  const auto reports = fap_envelopes(seq, sets, grid, {0, 1e-3, threads});
  ExperimentResult r;
  r.table.columns = {"n", "set", "mass", "error_bound", "prefix_density"};
  r.summary["sequence"] = seq.tag();
  r.summary["sets"] = Json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < sets.size(); ++j) {
      const double density = static_cast<double>(sets[j].count_prefix(grid[i])) / (static_cast<double>(grid[i]) + 1.0);
      r.table.add({grid[i], reports[j].set_descriptor, reports[j].values[i], reports[j].error_bounds[i], density});
    }
  }
  for (std::size_t j = 0; j < sets.size(); ++j) {
    const auto n = grid.back();
    r.summary["sets"].push_back(Json{
        {"set", reports[j].set_descriptor},
        {"last_mass", json_number(reports[j].values.back())},
        {"last_density", json_number(static_cast<double>(sets[j].count_prefix(n)) / (static_cast<double>(n) + 1.0))}});
  }
  return r;
}

ExperimentResult run_beta_limits(const ExperimentConfig& cfg) {
  const unsigned threads = cfg.threads.value_or(0);
  const double c = cfg.c.value_or(0.5);
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("beta-limits needs c >= 0");
  // Beta needs a > 0, so c = 0 uses a_n = 1/n² (a_n / b_n → 0).
  auto a_rule = [c](std::int64_t n) {
    const double nd = static_cast<double>(n);
    return c > 0.0 ? c / nd : 1.0 / (nd * nd);
  };
  const auto seq = beta_sequence(a_rule, [](std::int64_t n) { return 1.0 / static_cast<double>(n); });
  const auto grid = cfg.n_grid.value_or(GridSpec::list({10, 100, 1000, 10'000})).expand();
  const auto eps = cfg.eps.empty() ? std::vector<double>{0.1, 0.5, 0.9} : cfg.eps;
  const auto middle = cfg.middle.value_or(std::pair{0.25, 0.75});
  for (double e : eps) {
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("beta-limits eps must lie in (0, 1)");
  }
  std::vector<UnitInterval> battery;
  for (double e : eps) battery.push_back({0.0, e, true, true});
  battery.push_back({middle.first, middle.second, true, true});
  const auto limit = boundary_limit(c);
  const double tol = cfg.tol.value_or(2e-2);
  const auto narrow = narrow_test(seq, limit, battery, grid, tol, threads);
  ExperimentResult r;
  r.table.columns = {"n", "quantity", "value", "limit"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < battery.size(); ++j) {
      const std::string name = j < eps.size() ? "cdf(" + format_double(eps[j]) + ")"
                                              : "mass(" + format_double(middle.first) + "," + format_double(middle.second) + ")";
      r.table.add({grid[i], name, narrow.values[i][j], narrow.target_values[j]});
    }
  }
  r.summary["c"] = c;
  r.summary["a_rule"] = c > 0.0 ? "c/n" : "1/n^2";
  r.summary["limit_mass_at_0"] = 1.0 / (1.0 + c);
  r.summary["final_deviation"] = json_number(narrow.final_deviation);
  r.summary["final_middle_mass"] = json_number(narrow.values.back().back());
  r.summary["narrow_converges"] = narrow.converges;
  r.summary["tol"] = tol;
  return r;
}

// ---------------------------------------------------------------------------

ExperimentConfig base_config(std::string name, std::string description) {
  ExperimentConfig c;
  c.name = name;
  c.kind = std::move(name);
  c.description = std::move(description);
  return c;
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;
  {
    auto c = base_config("lrf", "Limiting relative frequency of residue classes");
    c.sets = {"residue(0,2)", "residue(1,3)", "residue(3,5)", "residue(6,7)"};
    c.N_grid = GridSpec::list({10'000, 100'000, 1'000'000});
    c.tol = 1e-3;
    c.expect = Json{{"/sets/0/limit_est", Json{{"approx", 0.5}, {"tol", 1e-3}}},
                    {"/sets/2/limit_est", Json{{"approx", 0.2}, {"tol", 1e-3}}},
                    {"/sets/0/exists", true}};
    out.push_back({"lrf", "3.2.1, 3.2.2", c});
  }
  {
    auto c = base_config("envelope", "FAP-limit envelopes of the point-mass sequence");
    c.sequence = SequenceSpec::named("delta_n");
    c.sets = {"residue(0,2)", "set(0,3,17)", "~set(2,5)"};
    c.n_grid = GridSpec::linear(1, 1000);
    c.expect = Json{{"/envelopes/0/liminf", 0.0}, {"/envelopes/0/limsup", 1.0}, {"/envelopes/1/limsup", 0.0},
                    {"/envelopes/2/liminf", 1.0}};
    out.push_back({"envelope", "4.1", c});
  }
  {
    auto c = base_config("qvague", "q-vague limit of uniform{0..n} is the flat measure on N");
    c.sequence = SequenceSpec::named("uniform");
    c.target = "flat";
    c.reference_set = "set(0)";
    c.sets = default_qvague_battery();
    c.n_grid = GridSpec::linear(100, 1000, 100);
    c.tol = 1e-2;
    c.expect = Json{{"/verdict", "ConvergesTo"}};
    out.push_back({"qvague", "3.1", c});
  }
  {
    auto c = base_config("splice-demo", "Splice of Poisson(n) with the flat measure on K_n = {k <= n/2}");
    SequenceSpec s = SequenceSpec::named("splice");
    s.base = std::make_shared<const SequenceSpec>(SequenceSpec::named("poisson"));
    s.target = "flat";
    s.filtration = "half";
    c.sequence = s;
    c.n_grid = GridSpec::linear(10, 400, 10);
    c.tol = 2e-2;
    c.expect = Json{{"/verdict", "Same"}, {"/bound_holds", true}, {"/qvague_verdict", "ConvergesTo"}};
    out.push_back({"splice-demo", "4.3", c});
  }
  {
    auto c = base_config("poisson-si", "Total variation between Poisson(n) and its k-shift against k/sqrt(2 pi n)");
    c.sequence = SequenceSpec::named("poisson");
    c.n_grid = GridSpec::list({10, 50, 100, 400, 1000});
    c.expect = Json{{"/bound_holds", true}};
    out.push_back({"poisson-si", "4.2, Appendix B", c});
  }
  {
    auto c = base_config("bs-test", "Bernoulli-scheme uniformity of uniform{0..n}");
    c.sequence = SequenceSpec::named("uniform");
    c.p = 0.3;
    c.n_eval = 100'000;
    c.trials = 100;
    c.tol = 1e-2;
    c.expect = Json{{"/passes", true}};
    out.push_back({"bs-test", "3.2.3", c});
  }
  {
    auto c = base_config("appendix-b", "Poisson(4^k) mass and prefix density of B and B'(-1,1)");
    c.sequence = SequenceSpec::named("poisson");
    c.sets = {"B()", "Bprime(-1,1)"};
    c.n_grid = GridSpec::powers(4, 1, 6);
    c.expect = Json{{"/sets/0/last_mass", Json{{"min", 0.99}, {"max", 1.0}}}};
    out.push_back({"appendix-b", "Appendix B", c});
  }
  {
    auto c = base_config("beta-limits", "Beta(c/n, 1/n) mass near 0 tends to 1/(1+c)");
    c.c = 0.5;
    c.n_grid = GridSpec::list({10, 100, 1000, 10'000});
    c.eps = {0.1, 0.5, 0.9};
    c.middle = std::pair{0.25, 0.75};
    c.tol = 2e-2;
    c.expect = Json{{"/narrow_converges", true}};
    out.push_back({"beta-limits", "4.4", c});
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// GridSpec.

GridSpec GridSpec::parse(const std::string& text) {
  const std::string ctx = "grid '" + text + "'";
  if (text.find(':') == std::string::npos) {
    GridSpec g;
    for (const auto& part : split(text, ',')) g.values.push_back(parse_int_text(part, ctx));
    return g;
  }
  const auto parts = split(text, ':');
  std::vector<std::int64_t> params;
  for (std::size_t i = 1; i < parts.size(); ++i) params.push_back(parse_int_text(parts[i], ctx));
  if (parts[0] == "linear" && (params.size() == 2 || params.size() == 3)) {
    return linear(params[0], params[1], params.size() == 3 ? params[2] : 1);
  }
  if (parts[0] == "geometric" && params.size() == 3) return geometric(params[0], params[1], params[2]);
  if (parts[0] == "powers" && params.size() == 3) return powers(params[0], params[1], params[2]);
  fail(ctx, "expected a list, linear:lo:hi[:step], geometric:lo:hi:points or powers:base:kmin:kmax");
}

std::vector<std::int64_t> GridSpec::expand() const {
  switch (kind) {
    case Kind::List:
      if (values.empty()) throw ParseError("grid list is empty");
      return values;
    case Kind::Linear:
      return linear_grid(values.at(0), values.at(1), values.at(2));
    case Kind::Geometric:
      if (values.at(2) < 1) throw ParseError("geometric grid needs points >= 1");
      return geometric_grid(values.at(0), values.at(1), static_cast<std::size_t>(values.at(2)));
    case Kind::Powers: {
      const std::int64_t base = values.at(0);
      if (base < 2 || values.at(1) < 0 || values.at(2) < values.at(1)) {
        throw ParseError("powers grid needs base >= 2 and 0 <= kmin <= kmax");
      }
      std::vector<std::int64_t> out;
      for (std::int64_t k = values.at(1); k <= values.at(2); ++k) {
        std::int64_t v = 1;
        for (std::int64_t i = 0; i < k; ++i) {
          if (v > std::numeric_limits<std::int64_t>::max() / base) throw ParseError("powers grid overflows");
          v *= base;
        }
        out.push_back(v);
      }
      return out;
    }
  }
  return {};
}

Json GridSpec::to_json() const {
  switch (kind) {
    case Kind::List:
      return Json(values);
    case Kind::Linear:
      return Json{{"linear", values}};
    case Kind::Geometric:
      return Json{{"geometric", values}};
    case Kind::Powers:
      return Json{{"powers", values}};
  }
  return Json();
}

GridSpec GridSpec::from_json(const Json& j) {
  const std::string ctx = "grid";
  if (j.is_array()) {
    GridSpec g;
    for (const auto& v : j) g.values.push_back(as_int(v, ctx));
    return g;
  }
  check_keys(j, {"linear", "geometric", "powers"}, ctx);
  if (j.size() != 1) fail(ctx, "expected exactly one of linear, geometric, powers");
  const auto& [key, params] = *j.items().begin();
  if (!params.is_array() || params.size() != 3) fail(ctx, "'" + key + "' needs three integers");
  std::vector<std::int64_t> v;
  for (const auto& x : params) v.push_back(as_int(x, ctx));
  if (key == "linear") return linear(v[0], v[1], v[2]);
  if (key == "geometric") return geometric(v[0], v[1], v[2]);
  return powers(v[0], v[1], v[2]);
}

// ---------------------------------------------------------------------------
// SequenceSpec.

MeasureSequence SequenceSpec::build(unsigned threads) const {
  if (family == "poisson") return poisson_sequence();
  if (family == "uniform") return uniform_sequence();
  if (family == "modified_uniform") return modified_uniform_sequence();
  if (family == "delta_n") return delta_sequence();
  if (family == "shifted_poisson") return shifted_poisson_sequence();
  if (family == "dirac") return constant_sequence(dirac(point.value_or(0)));
  if (family == "splice") return splice(make_splice_spec(*this, threads));
  if (family == "truncate_tail" || family == "truncate_head") {
    if (!base) throw ParseError(family + " needs a base sequence");
    const auto b = base->build(threads);
    const auto f = make_filtration(*this, b, threads);
    return family == "truncate_tail" ? truncate_tail(b, f, {}).sequence : truncate_head(b, f, {}).sequence;
  }
  throw ParseError("unknown sequence family '" + family + "'");
}

Json SequenceSpec::to_json() const {
  Json j{{"family", family}};
  if (base) j["base"] = base->to_json();
  if (target) j["target"] = *target;
  if (filtration) j["filtration"] = *filtration;
  if (horizon) j["horizon"] = *horizon;
  if (point) j["point"] = *point;
  return j;
}

SequenceSpec SequenceSpec::from_json(const Json& j) {
  const std::string ctx = "sequence";
  check_keys(j, {"family", "base", "target", "filtration", "horizon", "point"}, ctx);
  if (!j.contains("family")) fail(ctx, "missing field 'family'");
  SequenceSpec s = named(as_string(j["family"], ctx + ".family"));
  if (std::find(families().begin(), families().end(), s.family) == families().end()) {
    fail(ctx, "unknown family '" + s.family + "'");
  }
  if (j.contains("base")) s.base = std::make_shared<const SequenceSpec>(from_json(j["base"]));
  if (j.contains("target")) s.target = as_string(j["target"], ctx + ".target");
  if (j.contains("filtration")) s.filtration = as_string(j["filtration"], ctx + ".filtration");
  if (j.contains("horizon")) s.horizon = as_int(j["horizon"], ctx + ".horizon");
  if (j.contains("point")) s.point = as_int(j["point"], ctx + ".point");
  if (is_combinator(s.family) && !s.base) fail(ctx, s.family + " needs a 'base' sequence");
  return s;
}

DiscreteMeasure parse_target(const std::string& text, Domain domain) {
  if (text == "flat") return flat_improper(domain == Domain::Integers ? Domain::Integers : Domain::Naturals);
  if (text == "flat_N") return flat_improper(Domain::Naturals);
  if (text == "flat_Z") return flat_improper(Domain::Integers);
  auto arg = [&](const std::string& prefix) -> std::optional<std::string> {
    if (text.rfind(prefix + "(", 0) == 0 && text.back() == ')') {
      return text.substr(prefix.size() + 1, text.size() - prefix.size() - 2);
    }
    return std::nullopt;
  };
  if (auto a = arg("dirac")) return dirac(parse_int_text(*a, "target '" + text + "'"));
  if (auto a = arg("poisson")) {
    try {
      return poisson_measure(std::stod(*a));
    } catch (const std::invalid_argument&) {
      throw ParseError("target '" + text + "': bad Poisson mean");
    }
  }
  throw ParseError("unknown target '" + text + "' (expected flat, flat_N, flat_Z, dirac(k) or poisson(mean))");
}

// ---------------------------------------------------------------------------
// ExperimentConfig.

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {"lrf",        "envelope", "qvague",     "splice-demo",
                                                 "poisson-si", "bs-test",  "appendix-b", "beta-limits"};
  return kinds;
}

Json ExperimentConfig::to_json() const {
  Json j{{"name", name}, {"kind", kind}};
  if (description) j["description"] = *description;
  if (sequence) j["sequence"] = sequence->to_json();
  if (!sets.empty()) j["sets"] = sets;
  if (n_grid) j["n_grid"] = n_grid->to_json();
  if (N_grid) j["N_grid"] = N_grid->to_json();
  if (tol) j["tol"] = *tol;
  if (target) j["target"] = *target;
  if (reference_set) j["reference_set"] = *reference_set;
  if (!shifts.empty()) j["shifts"] = shifts;
  if (p) j["p"] = *p;
  if (n_eval) j["n_eval"] = *n_eval;
  if (!seeds.empty()) j["seeds"] = seeds;
  if (trials) j["trials"] = *trials;
  if (c) j["c"] = *c;
  if (!eps.empty()) j["eps"] = eps;
  if (middle) j["middle"] = Json::array({middle->first, middle->second});
  if (tail_window) j["tail_window"] = *tail_window;
  if (threads) j["threads"] = *threads;
  if (output.csv || output.json || output.format != "csv") {
    Json o = Json::object();
    if (output.csv) o["csv"] = *output.csv;
    if (output.json) o["json"] = *output.json;
    o["format"] = output.format;
    j["output"] = o;
  }
  if (!expect.empty()) j["expect"] = expect;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  const std::string ctx = "config";
  check_keys(j,
             {"name", "kind", "description", "sequence", "sets", "n_grid", "N_grid", "tol", "target", "reference_set",
              "shifts", "p", "n_eval", "seeds", "trials", "c", "eps", "middle", "tail_window", "threads", "output",
              "expect"},
             ctx);
  ExperimentConfig c;
  if (!j.contains("name")) fail(ctx, "missing field 'name'");
  if (!j.contains("kind")) fail(ctx, "missing field 'kind'");
  c.name = as_string(j["name"], "name");
  c.kind = as_string(j["kind"], "kind");
  if (std::find(experiment_kinds().begin(), experiment_kinds().end(), c.kind) == experiment_kinds().end()) {
    fail(ctx, "unknown kind '" + c.kind + "'");
  }
  if (j.contains("description")) c.description = as_string(j["description"], "description");
  if (j.contains("sequence")) c.sequence = SequenceSpec::from_json(j["sequence"]);
  if (j.contains("sets")) {
    if (!j["sets"].is_array()) fail(ctx, "'sets' must be an array of set expressions");
    for (const auto& s : j["sets"]) c.sets.push_back(as_string(s, "sets"));
  }
  if (j.contains("n_grid")) c.n_grid = GridSpec::from_json(j["n_grid"]);
  if (j.contains("N_grid")) c.N_grid = GridSpec::from_json(j["N_grid"]);
  if (j.contains("tol")) c.tol = as_double(j["tol"], "tol");
  if (j.contains("target")) c.target = as_string(j["target"], "target");
  if (j.contains("reference_set")) c.reference_set = as_string(j["reference_set"], "reference_set");
  if (j.contains("shifts")) {
    if (!j["shifts"].is_array()) fail(ctx, "'shifts' must be an array");
    for (const auto& s : j["shifts"]) c.shifts.push_back(as_int(s, "shifts"));
  }
  if (j.contains("p")) c.p = as_double(j["p"], "p");
  if (j.contains("n_eval")) c.n_eval = as_int(j["n_eval"], "n_eval");
  if (j.contains("seeds")) {
    if (!j["seeds"].is_array()) fail(ctx, "'seeds' must be an array");
    for (const auto& s : j["seeds"]) {
      const auto v = as_int(s, "seeds");
      if (v < 0) fail(ctx, "seeds must be non-negative");
      c.seeds.push_back(static_cast<std::uint64_t>(v));
    }
  }
  if (j.contains("trials")) c.trials = as_int(j["trials"], "trials");
  if (j.contains("c")) c.c = as_double(j["c"], "c");
  if (j.contains("eps")) {
    if (!j["eps"].is_array()) fail(ctx, "'eps' must be an array");
    for (const auto& e : j["eps"]) c.eps.push_back(as_double(e, "eps"));
  }
  if (j.contains("middle")) {
    const auto& m = j["middle"];
    if (!m.is_array() || m.size() != 2) fail(ctx, "'middle' must be [u, v]");
    c.middle = std::pair{as_double(m[0], "middle"), as_double(m[1], "middle")};
  }
  if (j.contains("tail_window")) c.tail_window = as_int(j["tail_window"], "tail_window");
  if (j.contains("threads")) {
    const auto t = as_int(j["threads"], "threads");
    if (t < 0) fail(ctx, "'threads' must be >= 0");
    c.threads = static_cast<unsigned>(t);
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    check_keys(o, {"csv", "json", "format"}, "output");
    if (o.contains("csv")) c.output.csv = as_string(o["csv"], "output.csv");
    if (o.contains("json")) c.output.json = as_string(o["json"], "output.json");
    if (o.contains("format")) c.output.format = as_string(o["format"], "output.format");
    if (c.output.format != "csv" && c.output.format != "json") fail("output", "format must be csv or json");
  }
  if (j.contains("expect")) {
    if (!j["expect"].is_object()) fail(ctx, "'expect' must be an object");
    c.expect = j["expect"];
  }
  return c;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw ParseError("unknown preset '" + name + "'");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.kind == "lrf") return run_lrf(config);
  if (config.kind == "envelope") return run_envelope(config);
  if (config.kind == "qvague") return run_qvague(config);
  if (config.kind == "splice-demo") return run_splice(config);
  if (config.kind == "poisson-si") return run_poisson_si(config);
  if (config.kind == "bs-test") return run_bs_test(config);
  if (config.kind == "appendix-b") return run_appendix_b(config);
  if (config.kind == "beta-limits") return run_beta_limits(config);
  throw ParseError("unknown experiment kind '" + config.kind + "'");
}

std::vector<std::string> check_expect(const Json& expect, const Json& summary) {
  std::vector<std::string> problems;
  for (const auto& [key, want] : expect.items()) {
    Json::json_pointer ptr;
    try {
      ptr = Json::json_pointer(key);
    } catch (const nlohmann::json::exception&) {
      problems.push_back(key + ": not a JSON pointer");
      continue;
    }
    if (!summary.contains(ptr)) {
      problems.push_back(key + ": missing from the summary");
      continue;
    }
    const Json& got = summary.at(ptr);
    bool ok = false;
    if (want.is_object() && (want.contains("approx") || want.contains("min") || want.contains("max"))) {
      if (got.is_number()) {
        const double v = got.get<double>();
        ok = true;
        if (want.contains("approx")) {
          const double tol = want.value("tol", 1e-9);
          ok = std::abs(v - want["approx"].get<double>()) <= tol;
        }
        if (want.contains("min")) ok = ok && v >= want["min"].get<double>();
        if (want.contains("max")) ok = ok && v <= want["max"].get<double>();
      }
    } else if (want.is_number() && got.is_number()) {
      const double w = want.get<double>();
      ok = std::abs(got.get<double>() - w) <= 1e-9 * std::max(1.0, std::abs(w));
    } else {
      ok = got == want;
    }
    if (!ok) problems.push_back(key + ": expected " + want.dump() + ", got " + got.dump());
  }
  return problems;
}

Json result_to_json(const ExperimentConfig& config, const ExperimentResult& result) {
  return Json{{"experiment", config.name},
              {"kind", config.kind},
              {"config", config.to_json()},
              {"summary", result.summary},
              {"rows", table_to_json(result.table)}};
}

}  // namespace limlab
