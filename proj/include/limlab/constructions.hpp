#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "limlab/index_set.hpp"
#include "limlab/measures.hpp"

namespace limlab {

/// A family n ↦ Kₙ of finite sets.
struct Filtration {
  std::function<IndexSet(std::int64_t)> sets;
  std::string description;

  IndexSet operator()(std::int64_t n) const { return sets(n); }
};

/// Kₙ = {0, ..., n}.
Filtration prefix_filtration();
/// Kₙ = {k : 0 <= k <= n/2}.
Filtration half_filtration();
/// Kₙ = {k : 0 <= k <= √n}.
Filtration sqrt_filtration();
/// Kₙ = K for every n.
Filtration constant_filtration(const IndexSet& k);
/// Looks up "prefix", "half" or "sqrt".
Filtration filtration_by_name(const std::string& name);

/// Kₙ ⊆ Kₙ₊₁ along the grid, checked by counting on the window.
bool is_nondecreasing(const Filtration& f, const std::vector<std::int64_t>& n_grid, Extent window);
/// First grid n with F ⊆ Kₙ.
std::optional<std::int64_t> first_covering(const Filtration& f, const IndexSet& finite,
                                           const std::vector<std::int64_t>& n_grid);

struct SlowFiltrationOptions {
  /// Points at which πₙ(K̃_m) <= 1/m is checked; empty means a default grid up to the horizon.
  std::vector<std::int64_t> sample_grid;
  std::int64_t max_level = 256;
  unsigned threads = 0;
};

struct SlowFiltration {
  Filtration filtration;
  /// thresholds[m - 1] = N_m; πₙ(K̃_m) <= 1/m for every sampled n in (N_m, horizon].
  std::vector<std::int64_t> thresholds;
  std::vector<std::int64_t> sample_grid;
  std::int64_t horizon = 0;

  /// m(n) = max {m : N_m < n}.
  std::int64_t level(std::int64_t n) const;
};

/// Slowed-down schedule built on a base filtration K̃_m, certified on the sample grid only.
SlowFiltration slow_filtration(const MeasureSequence& seq, const Filtration& base, std::int64_t horizon,
                               const SlowFiltrationOptions& options = {});

/// Splice of a base sequence with a target measure along a filtration.
class SpliceSpec {
 public:
  SpliceSpec(MeasureSequence base, DiscreteMeasure target, Filtration filtration);

  const MeasureSequence& base() const { return base_; }
  const DiscreteMeasure& target() const { return target_; }
  const Filtration& filtration() const { return filtration_; }

  /// γₙ = πₙ(Kₙ), memoized.
  double gamma(std::int64_t n) const;
  /// πₙ(Kₙᶜ) = 0.
  bool degenerate(std::int64_t n) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::int64_t, std::pair<double, double>> values;  // n -> (πₙ(Kₙ), πₙ(Kₙᶜ))
  };
  std::pair<double, double> split(std::int64_t n) const;

  MeasureSequence base_;
  DiscreteMeasure target_;
  Filtration filtration_;
  std::shared_ptr<Cache> cache_;
};

/// 𝜋̃ₙ = γₙ 𝟙_{Kₙ}π / π(Kₙ) + (1 − γₙ) 𝟙_{Kₙᶜ}πₙ / πₙ(Kₙᶜ). Degenerate n
/// give the normalized target restriction alone.
MeasureSequence splice(const SpliceSpec& spec);
std::vector<std::int64_t> degenerate_points(const SpliceSpec& spec, const std::vector<std::int64_t>& n_grid);

/// γₙ seq1(n) + (1 − γₙ) seq2(n).
MeasureSequence convex_mix(const MeasureSequence& seq1, const MeasureSequence& seq2,
                           std::function<double(std::int64_t)> gamma);

struct Truncated {
  MeasureSequence sequence;
  /// Grid points where the retained region had zero mass and πₙ was passed through unchanged.
  std::vector<std::int64_t> degenerate;
};

/// Normalized restriction of πₙ to Kₙᶜ. Throws DegenerateError when every grid n is degenerate.
Truncated truncate_tail(const MeasureSequence& seq, const Filtration& f, const std::vector<std::int64_t>& n_grid);
/// Normalized restriction of πₙ to Kₙ. Throws DegenerateError when every grid n is degenerate.
Truncated truncate_head(const MeasureSequence& seq, const Filtration& f, const std::vector<std::int64_t>& n_grid);

/// The measure j ↦ Poisson(n) pmf at n + j on ℤ.
DiscreteMeasure shifted_poisson_Z(std::int64_t n);
MeasureSequence shifted_poisson_sequence();
/// πₙ = δₙ.
MeasureSequence delta_sequence();

}  // namespace limlab
