#include "limlab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "limlab/convergence.hpp"
#include "limlab/errors.hpp"
#include "limlab/parallel.hpp"

namespace limlab {

namespace {

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::int64_t> default_samples(std::int64_t horizon) {
  if (horizon <= 512) return linear_grid(1, horizon);
  return geometric_grid(1, horizon, 256);
}

}  // namespace

Filtration prefix_filtration() {
  return {[](std::int64_t n) { return interval(0, n); }, "prefix"};
}

Filtration half_filtration() {
  return {[](std::int64_t n) { return interval(0, n / 2); }, "half"};
}

Filtration sqrt_filtration() {
  return {[](std::int64_t n) { return interval(0, isqrt(n)); }, "sqrt"};
}

Filtration constant_filtration(const IndexSet& k) {
  return {[k](std::int64_t) { return k; }, "constant(" + k.descriptor() + ")"};
}

Filtration filtration_by_name(const std::string& name) {
  if (name == "prefix") return prefix_filtration();
  if (name == "half") return half_filtration();
  if (name == "sqrt") return sqrt_filtration();
  throw std::invalid_argument("unknown filtration '" + name + "' (expected prefix, half or sqrt)");
}

bool is_nondecreasing(const Filtration& f, const std::vector<std::int64_t>& n_grid, Extent window) {
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    const auto a = f(n_grid[i - 1]);
    const auto b = f(n_grid[i]);
    if (intersection_count(a, b, window.lo, window.hi) != a.count_range(window.lo, window.hi)) return false;
  }
  return true;
}

std::optional<std::int64_t> first_covering(const Filtration& f, const IndexSet& finite,
                                           const std::vector<std::int64_t>& n_grid) {
  const Extent e = finite.extent();
  if (!e.bounded()) throw std::invalid_argument("first_covering needs a finite set, got " + finite.descriptor());
  if (e.empty()) return n_grid.empty() ? std::nullopt : std::optional(n_grid.front());
  const auto size = finite.count_range(e.lo, e.hi);
  for (auto n : n_grid) {
    if (intersection_count(finite, f(n), e.lo, e.hi) == size) return n;
  }
  return std::nullopt;
}

std::int64_t SlowFiltration::level(std::int64_t n) const {
  std::int64_t m = 1;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] < n) m = static_cast<std::int64_t>(i) + 1;
  }
  return m;
}

SlowFiltration slow_filtration(const MeasureSequence& seq, const Filtration& base, std::int64_t horizon,
                               const SlowFiltrationOptions& options) {
  if (horizon < 1) throw std::invalid_argument("slow_filtration needs horizon >= 1");
  auto samples = options.sample_grid.empty() ? default_samples(horizon) : options.sample_grid;
  samples.erase(std::remove_if(samples.begin(), samples.end(), [&](std::int64_t n) { return n < 1 || n > horizon; }),
                samples.end());
  if (samples.size() < 2) throw std::invalid_argument("slow_filtration needs at least two sample points");

  const auto probe = geometric_grid(samples.front(), samples.back(), 16);
  const auto decay = compact_mass_decay(seq, {base(1)}, probe, {1e-12, options.threads});
  if (!decay.all_decay) {
    throw DecayPreconditionError("mass of " + decay.sets.front() + " under " + seq.tag() +
                                 " does not decay over n <= " + std::to_string(horizon));
  }

  const auto measures = parallel_map(samples.size(), options.threads, [&](std::size_t i) { return seq(samples[i]); });
  SlowFiltration out{Filtration{}, {}, samples, horizon};
  std::int64_t previous = 0;
  for (std::int64_t m = 1; m <= options.max_level; ++m) {
    const auto km = base(m);
    const double cap = 1.0 / static_cast<double>(m);
    const auto masses =
        parallel_map(samples.size(), options.threads, [&](std::size_t i) { return measures[i].mass(km).value; });
    std::int64_t last_violation = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (masses[i] > cap * (1.0 + 1e-12)) last_violation = samples[i];
    }
    if (last_violation == samples.back()) break;
    previous = std::max(previous, last_violation);
    out.thresholds.push_back(previous);
  }
  if (out.thresholds.size() < 2) {
    throw DecayPreconditionError("horizon " + std::to_string(horizon) + " is too small to certify " +
                                 seq.tag() + "(K_2) <= 1/2");
  }
  auto shared = std::make_shared<const SlowFiltration>(out);
  out.filtration = Filtration{[shared, base](std::int64_t n) { return base(shared->level(n)); },
                              "slow(" + base.description + ")"};
  return out;
}

SpliceSpec::SpliceSpec(MeasureSequence base, DiscreteMeasure target, Filtration filtration)
    : base_(std::move(base)),
      target_(std::move(target)),
      filtration_(std::move(filtration)),
      cache_(std::make_shared<Cache>()) {}

std::pair<double, double> SpliceSpec::split(std::int64_t n) const {
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->values.find(n); it != cache_->values.end()) return it->second;
  }
  const auto m = base_(n);
  const auto k = filtration_(n);
  const std::pair<double, double> value{std::clamp(m.mass(k).value, 0.0, 1.0), m.mass(complement(k)).value};
  std::lock_guard lock(cache_->mutex);
  return cache_->values.emplace(n, value).first->second;
}

double SpliceSpec::gamma(std::int64_t n) const { return split(n).first; }

bool SpliceSpec::degenerate(std::int64_t n) const { return !(split(n).second > 0.0); }

MeasureSequence splice(const SpliceSpec& spec) {
  auto gen = [spec](std::int64_t n) {
    const auto k = spec.filtration()(n);
    const double tk = spec.target().mass(k).value;
    if (!(tk > 0.0)) {
      throw DegenerateError("target " + spec.target().family_tag() + " has zero mass on K_" + std::to_string(n) +
                            " = " + k.descriptor());
    }
    auto inside = restrict_normalize(spec.target(), k);
    const std::string tag = "splice(" + spec.base().tag() + "," + spec.target().family_tag() + "," +
                            spec.filtration().description + ")";
    if (spec.degenerate(n)) return inside;
    const double g = spec.gamma(n);
    auto outside = restrict_normalize(spec.base()(n), complement(k));
    return mixture({{g, std::move(inside)}, {1.0 - g, std::move(outside)}}, tag);
  };
  return MeasureSequence(std::move(gen), spec.base().domain(),
                         "splice(" + spec.base().tag() + "," + spec.target().family_tag() + "," +
                             spec.filtration().description + ")");
}

std::vector<std::int64_t> degenerate_points(const SpliceSpec& spec, const std::vector<std::int64_t>& n_grid) {
  std::vector<std::int64_t> out;
  for (auto n : n_grid) {
    if (spec.degenerate(n)) out.push_back(n);
  }
  return out;
}

MeasureSequence convex_mix(const MeasureSequence& seq1, const MeasureSequence& seq2,
                           std::function<double(std::int64_t)> gamma) {
  const std::string tag = "mix(" + seq1.tag() + "," + seq2.tag() + ")";
  auto gen = [seq1, seq2, gamma = std::move(gamma), tag](std::int64_t n) {
    const double g = gamma(n);
    if (!(g >= 0.0 && g <= 1.0)) throw std::invalid_argument("convex_mix weight at n=" + std::to_string(n) + " is outside [0, 1]");
    if (g == 0.0) return seq2(n);
    if (g == 1.0) return seq1(n);
    return mixture({{g, seq1(n)}, {1.0 - g, seq2(n)}}, tag);
  };
  return MeasureSequence(std::move(gen), seq2.domain(), tag);
}

namespace {

Truncated truncate(const MeasureSequence& seq, const Filtration& f, const std::vector<std::int64_t>& n_grid,
                   bool keep_inside) {
  auto region = [f, keep_inside](std::int64_t n) { return keep_inside ? f(n) : complement(f(n)); };
  Truncated out{MeasureSequence(
                    [seq, region](std::int64_t n) {
                      auto m = seq(n);
                      const auto r = region(n);
                      if (!(m.mass(r).value > 0.0)) return m;
                      return restrict_normalize(m, r);
                    },
                    seq.domain(), std::string(keep_inside ? "head(" : "tail(") + seq.tag() + "," + f.description + ")"),
                {}};
  for (auto n : n_grid) {
    if (!(seq(n).mass(region(n)).value > 0.0)) out.degenerate.push_back(n);
  }
  if (!n_grid.empty() && out.degenerate.size() == n_grid.size()) {
    throw DegenerateError(std::string(keep_inside ? "interior" : "exterior") + " mass of " + seq.tag() + " along " +
                          f.description + " is zero at every grid point");
  }
  return out;
}

}  // namespace

Truncated truncate_tail(const MeasureSequence& seq, const Filtration& f, const std::vector<std::int64_t>& n_grid) {
  return truncate(seq, f, n_grid, false);
}

Truncated truncate_head(const MeasureSequence& seq, const Filtration& f, const std::vector<std::int64_t>& n_grid) {
  return truncate(seq, f, n_grid, true);
}

DiscreteMeasure shifted_poisson_Z(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("shifted_poisson_Z needs n >= 1");
  return shift_measure(poisson_measure(static_cast<double>(n)), n);
}

MeasureSequence shifted_poisson_sequence() {
  return MeasureSequence(shifted_poisson_Z, Domain::Integers, "shifted_poisson");
}

MeasureSequence delta_sequence() {
  return MeasureSequence([](std::int64_t n) { return dirac(n); }, Domain::Naturals, "delta_n");
}

}  // namespace limlab
