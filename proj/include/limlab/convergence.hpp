#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "limlab/index_set.hpp"
#include "limlab/measures.hpp"

namespace limlab {

// ---------------------------------------------------------------------------
// Limiting relative frequency.

struct LrfEstimate {
  std::string set_descriptor;
  std::vector<std::int64_t> n_grid;
  std::vector<std::int64_t> counts;
  /// count_prefix(N) / (N + 1) for each grid point.
  std::vector<double> ratios;
  double limit_est = 0.0;
  /// Oscillation over the last three grid points stayed below tol.
  bool exists = false;
};

LrfEstimate lrf(const IndexSet& a, const std::vector<std::int64_t>& n_grid, double tol = 1e-3);

// ---------------------------------------------------------------------------
// FAP-limit envelopes.

struct EnvelopeOptions {
  /// Number of trailing grid points the envelope is taken over; 0 means half the grid.
  std::size_t tail_window = 0;
  double stability_tol = 1e-3;
  unsigned threads = 0;
};

struct EnvelopeReport {
  std::string set_descriptor;
  std::vector<std::int64_t> n_grid;
  std::vector<double> values;
  std::vector<double> error_bounds;
  std::size_t tail_window = 0;
  double liminf_est = 0.0;
  double limsup_est = 0.0;
  /// The window min and max moved less than stability_tol when the window slid by one point.
  bool stable = false;
};

EnvelopeReport fap_envelope(const MeasureSequence& seq, const IndexSet& a, const std::vector<std::int64_t>& n_grid,
                            const EnvelopeOptions& options = {});
/// Envelopes for several sets, evaluating each πₙ once.
std::vector<EnvelopeReport> fap_envelopes(const MeasureSequence& seq, const std::vector<IndexSet>& sets,
                                          const std::vector<std::int64_t>& n_grid, const EnvelopeOptions& options = {});

// ---------------------------------------------------------------------------
// q-vague limits.

enum class Verdict { ConvergesTo, RejectedAt, Inconclusive };
std::string to_string(Verdict v);

struct QVagueOptions {
  double tol = 1e-2;
  unsigned threads = 0;
};

struct QVagueReport {
  std::string reference_set;
  std::vector<std::string> battery;
  /// Grid points with πₙ(F₀) > 0, in grid order.
  std::vector<std::int64_t> n_used;
  /// Grid points skipped because πₙ(F₀) = 0.
  std::vector<std::int64_t> n_skipped;
  /// aₙ = π(F₀) / πₙ(F₀) for each used n.
  std::vector<double> scalars;
  /// deviations[i][j] for n_used[i] and battery set j.
  std::vector<std::vector<double>> deviations;
  std::vector<double> max_deviation;
  Verdict verdict = Verdict::Inconclusive;
  std::int64_t rejected_n = 0;
  std::string rejected_set;
  double final_deviation = 0.0;
};

/// Deviation of aₙπₙ(F) from π(F): relative when π(F) > 0, otherwise
/// aₙπₙ(F) / π(F₀).
QVagueReport detect_qvague(const MeasureSequence& seq, const DiscreteMeasure& target, const IndexSet& f0,
                           const std::vector<IndexSet>& battery, const std::vector<std::int64_t>& n_grid,
                           const QVagueOptions& options = {});

/// First singleton in the order 0, 1, −1, 2, −2, ... (|k| <= max_abs) whose
/// mass is positive at every point in the tail half of the grid. Falls back
/// to {0} when there is none.
IndexSet default_reference_set(const MeasureSequence& seq, const std::vector<std::int64_t>& n_grid,
                               std::int64_t max_abs = 1000);

// ---------------------------------------------------------------------------
// Narrow convergence.

/// c + Σ cᵢ 𝟙_{Aᵢ}.
struct BoundedFunction {
  double constant = 0.0;
  std::vector<std::pair<double, IndexSet>> terms;

  static BoundedFunction indicator(const IndexSet& a) { return BoundedFunction{0.0, {{1.0, a}}}; }
  std::string descriptor() const;
  /// ∫ f dm for a probability measure m.
  double integrate(const DiscreteMeasure& m) const;
};

struct NarrowReport {
  std::vector<std::int64_t> n_grid;
  std::vector<std::string> functions;
  std::vector<double> target_values;
  /// values[i][j] is πₙ(f_j) at n_grid[i].
  std::vector<std::vector<double>> values;
  std::vector<double> max_deviation;
  double final_deviation = 0.0;
  bool converges = false;
};

NarrowReport narrow_test(const MeasureSequence& seq, const DiscreteMeasure& target,
                         const std::vector<BoundedFunction>& battery, const std::vector<std::int64_t>& n_grid,
                         double tol, unsigned threads = 0);

/// Finite combination of point masses on [0, 1].
struct AtomicMeasure01 {
  std::vector<std::pair<double, double>> atoms;  // (location, weight)

  double mass(const UnitInterval& iv) const;
  std::string descriptor() const;
};

/// (1/(1+c)) δ₀ + (c/(1+c)) δ₁.
AtomicMeasure01 boundary_limit(double c);

NarrowReport narrow_test(const ContinuousSequence& seq, const AtomicMeasure01& target,
                         const std::vector<UnitInterval>& battery, const std::vector<std::int64_t>& n_grid,
                         double tol, unsigned threads = 0);

// ---------------------------------------------------------------------------
// Tightness and uniformity diagnostics.

struct DecayOptions {
  /// A value at or below this counts as vanished.
  double floor = 1e-12;
  unsigned threads = 0;
};

struct DecayReport {
  std::vector<std::int64_t> n_grid;
  std::vector<std::string> sets;
  /// values[j][i] is πₙ(K_j) at n_grid[i].
  std::vector<std::vector<double>> values;
  std::vector<bool> decays;
  bool all_decay = false;
};

/// Flags K as decaying when its last value is at most the floor, or when
/// the tail half is non-increasing and ends at most half its first value.
DecayReport compact_mass_decay(const MeasureSequence& seq, const std::vector<IndexSet>& sets,
                               const std::vector<std::int64_t>& n_grid, const DecayOptions& options = {});

struct SiRow {
  std::int64_t n = 0;
  std::int64_t k = 0;
  /// max over the battery of |πₙ(A + k) − πₙ(A)|.
  double max_set_gap = 0.0;
  std::string argmax_set;
  double tv = 0.0;
  double tv_error = 0.0;
  /// k / √(2πn) for Poisson-tagged sequences, NaN otherwise.
  double bound = 0.0;
};

struct SiReport {
  std::vector<SiRow> rows;
  bool bound_holds = true;
};

SiReport si_diagnostic(const MeasureSequence& seq, const std::vector<std::int64_t>& shifts,
                       const std::vector<IndexSet>& battery, const std::vector<std::int64_t>& n_grid,
                       unsigned threads = 0);

struct BsReport {
  double p = 0.0;
  std::int64_t n_eval = 0;
  std::int64_t horizon = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> values;
  double max_deviation = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  /// c in exp(−2c√(2πn) t²) matched to the empirical spread; infinite when the spread is zero.
  double fitted_c = 0.0;
  bool passes = false;
};

/// Evaluates π_{n_eval}(A(X)) for one Bernoulli(p) scheme per seed.
BsReport bs_uniformity_test(const MeasureSequence& seq, double p, std::int64_t n_eval,
                            const std::vector<std::uint64_t>& seeds, double tol, unsigned threads = 0);

/// Seeds 1, ..., count.
std::vector<std::uint64_t> default_seeds(std::size_t count);

struct EnvelopeCompareReport {
  std::vector<std::string> sets;
  std::vector<EnvelopeReport> first;
  std::vector<EnvelopeReport> second;
  /// max(|liminf₁ − liminf₂|, |limsup₁ − limsup₂|) per set.
  std::vector<double> gaps;
  bool same = false;
  /// sup over the battery of |π⁽²⁾ₙ(A) − π⁽¹⁾ₙ(A)| per n.
  std::vector<double> per_n_sup;
  /// γₙ per n when supplied; empty otherwise.
  std::vector<double> gammas;
  /// per_n_sup <= 2γₙ everywhere (true when no γ was supplied).
  bool bound_holds = true;
};

EnvelopeCompareReport envelope_compare(const MeasureSequence& first, const MeasureSequence& second,
                                       const std::vector<IndexSet>& battery, const std::vector<std::int64_t>& n_grid,
                                       double tol, const std::function<double(std::int64_t)>& gamma = {},
                                       const EnvelopeOptions& options = {});

// ---------------------------------------------------------------------------
// Grids.

/// lo, lo+step, ..., up to hi.
std::vector<std::int64_t> linear_grid(std::int64_t lo, std::int64_t hi, std::int64_t step = 1);
/// Roughly geometric grid of `points` distinct integers from lo to hi inclusive.
std::vector<std::int64_t> geometric_grid(std::int64_t lo, std::int64_t hi, std::size_t points);

}  // namespace limlab
