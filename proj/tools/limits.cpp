#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "limlab/errors.hpp"
#include "limlab/experiment.hpp"

using namespace limlab;

namespace {

struct Overrides {
  std::vector<std::string> sets;
  std::string N;
  std::string n_grid;
  std::string seq;
  std::string base;
  std::string target;
  std::string filtration;
  std::string f0;
  std::optional<double> c;
  std::optional<double> p;
  std::string n_eval;
  std::optional<std::int64_t> trials;
  std::vector<std::int64_t> seeds;
  std::vector<std::int64_t> shifts;
  std::optional<std::int64_t> horizon;
  std::optional<double> tol;
  std::optional<unsigned> threads;
  std::string format;
  std::string csv;
  std::string json;
  bool dump_config = false;
};

void add_output_flags(CLI::App* sub, Overrides& o) {
  sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  sub->add_option("--format", o.format, "Stdout format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--csv", o.csv, "Also write the table as CSV to PATH");
  sub->add_option("--json", o.json, "Also write the full JSON report to PATH");
  sub->add_flag("--dump-config", o.dump_config, "Print the effective config as JSON and exit");
}

void add_experiment_flags(CLI::App* sub, Overrides& o) {
  sub->add_option("--set", o.sets, "Set expression (repeatable)");
  sub->add_option("--N", o.N, "Prefix-length grid for lrf");
  sub->add_option("--n-grid", o.n_grid, "Grid: list, linear:lo:hi[:step], geometric:lo:hi:points, powers:b:k0:k1");
  sub->add_option("--seq", o.seq, "Sequence family");
  sub->add_option("--base", o.base, "Base family for splice and truncate_*");
  sub->add_option("--target", o.target, "Target measure: flat, flat_N, flat_Z, dirac(k), poisson(mean)");
  sub->add_option("--filtration", o.filtration, "prefix, half, sqrt or slow");
  sub->add_option("--horizon", o.horizon, "Certification horizon of the slow filtration");
  sub->add_option("--f0", o.f0, "Reference set for q-vague scaling");
  sub->add_option("--c", o.c, "Beta parameter c");
  sub->add_option("--p", o.p, "Bernoulli probability");
  sub->add_option("--n-eval", o.n_eval, "Index n at which the Bernoulli test is evaluated");
  sub->add_option("--trials", o.trials, "Number of seeds 1..T");
  sub->add_option("--seed", o.seeds, "Explicit seed (repeatable)");
  sub->add_option("--shift", o.shifts, "Shift k (repeatable)");
  sub->add_option("--tol", o.tol, "Tolerance");
  add_output_flags(sub, o);
}

std::int64_t single_int(const std::string& text, const std::string& flag) {
  const auto g = GridSpec::parse(text);
  if (g.kind != GridSpec::Kind::List || g.values.size() != 1) throw ParseError(flag + " expects one integer");
  return g.values.front();
}

// Returns true when the experiment itself changed, which voids the preset's expect block.
bool apply(const Overrides& o, ExperimentConfig& cfg) {
  bool changed = false;
  auto mark = [&](bool present) {
    changed = changed || present;
    return present;
  };
  if (mark(!o.sets.empty())) cfg.sets = o.sets;
  if (mark(!o.N.empty())) cfg.N_grid = GridSpec::parse(o.N);
  if (mark(!o.n_grid.empty())) cfg.n_grid = GridSpec::parse(o.n_grid);
  if (mark(!o.seq.empty() || !o.base.empty() || !o.filtration.empty() || o.horizon.has_value() ||
           (!o.target.empty() && cfg.kind == "splice-demo"))) {
    SequenceSpec s = cfg.sequence.value_or(SequenceSpec::named(cfg.kind == "splice-demo" ? "splice" : "poisson"));
    if (!o.seq.empty()) s = SequenceSpec::named(o.seq);
    if (!o.base.empty()) s.base = std::make_shared<const SequenceSpec>(SequenceSpec::named(o.base));
    if (!o.filtration.empty()) s.filtration = o.filtration;
    if (o.horizon) s.horizon = *o.horizon;
    if (!o.target.empty() && s.family == "splice") s.target = o.target;
    cfg.sequence = s;
  }
  if (mark(!o.target.empty() && cfg.kind != "splice-demo")) cfg.target = o.target;
  if (mark(!o.f0.empty())) cfg.reference_set = o.f0;
  if (mark(o.c.has_value())) cfg.c = o.c;
  if (mark(o.p.has_value())) cfg.p = o.p;
  if (mark(!o.n_eval.empty())) cfg.n_eval = single_int(o.n_eval, "--n-eval");
  if (mark(o.trials.has_value())) cfg.trials = o.trials;
  if (mark(!o.seeds.empty())) {
    cfg.seeds.clear();
    for (auto s : o.seeds) {
      if (s < 0) throw ParseError("--seed must be non-negative");
      cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  if (mark(!o.shifts.empty())) cfg.shifts = o.shifts;
  if (mark(o.tol.has_value())) cfg.tol = o.tol;
  return changed;
}

void apply_output(const Overrides& o, ExperimentConfig& cfg) {
  if (o.threads) cfg.threads = o.threads;
  if (!o.format.empty()) cfg.output.format = o.format;
  if (!o.csv.empty()) cfg.output.csv = o.csv;
  if (!o.json.empty()) cfg.output.json = o.json;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

bool use_colour() { return isatty(STDERR_FILENO) && std::getenv("NO_COLOR") == nullptr; }

std::string paint(const std::string& text, const char* code) {
  if (!use_colour()) return text;
  return std::string("\033[") + code + "m" + text + "\033[0m";
}

int execute(const ExperimentConfig& cfg, bool dump_config) {
  if (dump_config) {
    std::cout << cfg.to_json().dump(2) << '\n';
    return 0;
  }
  const auto result = run_experiment(cfg);
  const std::string csv = to_csv(result.table);
  const std::string report = result_to_json(cfg, result).dump(2) + "\n";
  if (cfg.output.csv) write_file(*cfg.output.csv, csv);
  if (cfg.output.json) write_file(*cfg.output.json, report);
  std::cout << (cfg.output.format == "json" ? report : csv);
  std::cout.flush();

  std::cerr << paint(cfg.name, "1") << ' ' << result.summary.dump() << '\n';
  if (cfg.expect.empty()) return 0;
  const auto problems = check_expect(cfg.expect, result.summary);
  if (problems.empty()) {
    std::cerr << paint("expect: ok", "32") << '\n';
    return 0;
  }
  for (const auto& p : problems) std::cerr << paint("expect: " + p, "31") << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limits of sequences of proper distributions: q-vague limits, FAP envelopes and splice constructions"};
  app.require_subcommand(1);

  std::vector<std::pair<CLI::App*, Overrides>> preset_subs;
  preset_subs.reserve(presets().size());
  for (const auto& p : presets()) {
    auto* sub = app.add_subcommand(p.name, p.config.description.value_or(p.name));
    preset_subs.emplace_back(sub, Overrides{});
    add_experiment_flags(sub, preset_subs.back().second);
  }

  auto* list = app.add_subcommand("list-presets", "List the built-in experiments");

  std::string config_path;
  Overrides run_overrides;
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config file");
  run->add_option("--config", config_path, "Config file")->required();
  add_output_flags(run, run_overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      Table t;
      t.columns = {"name", "section", "description"};
      for (const auto& p : presets()) t.add({p.name, p.section, p.config.description.value_or("")});
      std::cout << to_csv(t);
      return 0;
    }
    if (run->parsed()) {
      auto cfg = ExperimentConfig::parse(read_file(config_path));
      apply_output(run_overrides, cfg);
      return execute(cfg, run_overrides.dump_config);
    }
    for (auto& [sub, overrides] : preset_subs) {
      if (!sub->parsed()) continue;
      ExperimentConfig cfg = find_preset(sub->get_name()).config;
      if (apply(overrides, cfg)) cfg.expect = Json::object();
      apply_output(overrides, cfg);
      return execute(cfg, overrides.dump_config);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
