#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "limlab/measures.hpp"
#include "limlab/report_io.hpp"

namespace limlab {

/// A grid of positive integers.
///
/// JSON forms:
///   [n1, n2, ...]                  explicit list
///   {"linear": [lo, hi, step]}
///   {"geometric": [lo, hi, points]}
///   {"powers": [base, kmin, kmax]}  base^k for k = kmin..kmax
struct GridSpec {
  enum class Kind { List, Linear, Geometric, Powers };
  Kind kind = Kind::List;
  std::vector<std::int64_t> values;

  static GridSpec list(std::vector<std::int64_t> v) { return {Kind::List, std::move(v)}; }
  static GridSpec linear(std::int64_t lo, std::int64_t hi, std::int64_t step = 1) { return {Kind::Linear, {lo, hi, step}}; }
  static GridSpec geometric(std::int64_t lo, std::int64_t hi, std::int64_t points) {
    return {Kind::Geometric, {lo, hi, points}};
  }
  static GridSpec powers(std::int64_t base, std::int64_t kmin, std::int64_t kmax) {
    return {Kind::Powers, {base, kmin, kmax}};
  }
  /// Parses the command-line form: "10,100,1000", "linear:lo:hi[:step]",
  /// "geometric:lo:hi:points" or "powers:base:kmin:kmax". Numbers may use 1e6 notation.
  static GridSpec parse(const std::string& text);

  std::vector<std::int64_t> expand() const;
  Json to_json() const;
  static GridSpec from_json(const Json& j);
};

/// A measure sequence by family name.
///
/// Families: poisson, uniform, modified_uniform, delta_n, shifted_poisson,
/// dirac (constant δ at `point`), and the combinators splice, truncate_tail
/// and truncate_head, which take a `base` sequence and a `filtration`
/// (prefix, half, sqrt or slow; slow uses `horizon`). splice also takes a
/// `target` (see parse_target).
struct SequenceSpec {
  std::string family = "poisson";
  std::shared_ptr<const SequenceSpec> base;
  std::optional<std::string> target;
  std::optional<std::string> filtration;
  std::optional<std::int64_t> horizon;
  std::optional<std::int64_t> point;

  static SequenceSpec named(std::string family) { return SequenceSpec{std::move(family), {}, {}, {}, {}, {}}; }

  MeasureSequence build(unsigned threads = 0) const;
  Json to_json() const;
  static SequenceSpec from_json(const Json& j);
};

/// "flat" (on the given domain), "flat_N", "flat_Z", "dirac(k)" or "poisson(mean)".
DiscreteMeasure parse_target(const std::string& text, Domain domain);

struct OutputSpec {
  std::optional<std::string> csv;
  std::optional<std::string> json;
  std::string format = "csv";
};

/// One reproducible experiment. Serializes to JSON with a fixed field order;
/// unknown fields are rejected.
struct ExperimentConfig {
  std::string name;
  std::string kind;
  std::optional<std::string> description;
  std::optional<SequenceSpec> sequence;
  std::vector<std::string> sets;
  std::optional<GridSpec> n_grid;
  std::optional<GridSpec> N_grid;
  std::optional<double> tol;
  std::optional<std::string> target;
  std::optional<std::string> reference_set;
  std::vector<std::int64_t> shifts;
  std::optional<double> p;
  std::optional<std::int64_t> n_eval;
  std::vector<std::uint64_t> seeds;
  std::optional<std::int64_t> trials;
  std::optional<double> c;
  std::vector<double> eps;
  std::optional<std::pair<double, double>> middle;
  std::optional<std::int64_t> tail_window;
  std::optional<unsigned> threads;
  OutputSpec output;
  /// JSON pointer into the summary -> expected value, {"approx": v, "tol": t} or {"min": a, "max": b}.
  Json expect = Json::object();

  Json to_json() const;
  static ExperimentConfig from_json(const Json& j);
  static ExperimentConfig parse(const std::string& text);
};

/// Experiment kinds, which are also the preset names.
const std::vector<std::string>& experiment_kinds();

struct Preset {
  std::string name;
  std::string section;
  ExperimentConfig config;
};

const std::vector<Preset>& presets();
/// Throws ParseError for an unknown name.
const Preset& find_preset(const std::string& name);

struct ExperimentResult {
  Table table;
  Json summary;
};

ExperimentResult run_experiment(const ExperimentConfig& config);
/// Human-readable mismatches between the expect block and the summary; empty when all hold.
std::vector<std::string> check_expect(const Json& expect, const Json& summary);
/// {"experiment", "kind", "config", "summary", "rows"}.
Json result_to_json(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace limlab
