#include "limlab/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "limlab/errors.hpp"
#include "limlab/format.hpp"
#include "limlab/parallel.hpp"

namespace limlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_grid(const std::vector<std::int64_t>& grid, std::int64_t min_value, const char* what) {
  if (grid.empty()) throw std::invalid_argument(std::string(what) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < min_value) {
      throw std::invalid_argument(std::string(what) + " grid values must be >= " + std::to_string(min_value));
    }
    if (i > 0 && grid[i] <= grid[i - 1]) throw std::invalid_argument(std::string(what) + " grid must be increasing");
  }
}

void check_probability(const DiscreteMeasure& m, std::int64_t n) {
  if (m.mass_class() != MassClass::Probability) {
    throw std::invalid_argument("sequence member at n=" + std::to_string(n) + " is not a probability measure: " +
                                m.family_tag());
  }
}

bool slack_le(double a, double b) { return a <= b + 64 * kEps * std::max(1.0, std::abs(b)); }

// Non-increasing (or non-decreasing) over the last three entries.
bool tail_non_increasing(const std::vector<double>& d) {
  if (d.size() < 3) return false;
  const std::size_t n = d.size();
  return slack_le(d[n - 2], d[n - 3]) && slack_le(d[n - 1], d[n - 2]);
}

bool tail_non_decreasing(const std::vector<double>& d) {
  if (d.size() < 3) return false;
  const std::size_t n = d.size();
  return slack_le(d[n - 3], d[n - 2]) && slack_le(d[n - 2], d[n - 1]);
}

bool tail_converges(const std::vector<double>& d, double tol) {
  return !d.empty() && d.back() <= tol && tail_non_increasing(d);
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

std::size_t resolve_window(std::size_t requested, std::size_t len) {
  const std::size_t w = requested == 0 ? (len + 1) / 2 : requested;
  return std::clamp<std::size_t>(w, 1, len);
}

std::pair<double, double> min_max(const std::vector<double>& v, std::size_t begin, std::size_t end) {
  const auto [lo, hi] = std::minmax_element(v.begin() + static_cast<std::ptrdiff_t>(begin),
                                            v.begin() + static_cast<std::ptrdiff_t>(end));
  return {*lo, *hi};
}

void finish_envelope(EnvelopeReport& r, const EnvelopeOptions& options) {
  const std::size_t len = r.values.size();
  const std::size_t w = resolve_window(options.tail_window, len);
  r.tail_window = w;
  std::tie(r.liminf_est, r.limsup_est) = min_max(r.values, len - w, len);
  if (len >= w + 1) {
    const auto [plo, phi] = min_max(r.values, len - w - 1, len - 1);
    r.stable = std::abs(plo - r.liminf_est) < options.stability_tol && std::abs(phi - r.limsup_est) < options.stability_tol;
  } else {
    r.stable = false;
  }
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ConvergesTo:
      return "ConvergesTo";
    case Verdict::RejectedAt:
      return "RejectedAt";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "unknown";
}

LrfEstimate lrf(const IndexSet& a, const std::vector<std::int64_t>& n_grid, double tol) {
  check_grid(n_grid, 0, "N");
  LrfEstimate r;
  r.set_descriptor = a.descriptor();
  r.n_grid = n_grid;
  for (auto n : n_grid) {
    const auto count = a.count_prefix(n);
    r.counts.push_back(count);
    r.ratios.push_back(clamp01(static_cast<double>(count) / (static_cast<double>(n) + 1.0)));
  }
  r.limit_est = r.ratios.back();
  if (r.ratios.size() >= 3) {
    const auto [lo, hi] = min_max(r.ratios, r.ratios.size() - 3, r.ratios.size());
    r.exists = hi - lo < tol;
  }
  return r;
}

std::vector<EnvelopeReport> fap_envelopes(const MeasureSequence& seq, const std::vector<IndexSet>& sets,
                                          const std::vector<std::int64_t>& n_grid, const EnvelopeOptions& options) {
  check_grid(n_grid, 1, "n");
  const auto rows = parallel_map(n_grid.size(), options.threads, [&](std::size_t i) {
    const auto m = seq(n_grid[i]);
    check_probability(m, n_grid[i]);
    std::vector<MassResult> out;
    out.reserve(sets.size());
    for (const auto& a : sets) out.push_back(m.mass(a));
    return out;
  });
  std::vector<EnvelopeReport> reports(sets.size());
  for (std::size_t j = 0; j < sets.size(); ++j) {
    auto& r = reports[j];
    r.set_descriptor = sets[j].descriptor();
    r.n_grid = n_grid;
    for (const auto& row : rows) {
      r.values.push_back(clamp01(row[j].value));
      r.error_bounds.push_back(row[j].error_bound);
    }
    finish_envelope(r, options);
  }
  return reports;
}

EnvelopeReport fap_envelope(const MeasureSequence& seq, const IndexSet& a, const std::vector<std::int64_t>& n_grid,
                            const EnvelopeOptions& options) {
  return fap_envelopes(seq, {a}, n_grid, options).front();
}

QVagueReport detect_qvague(const MeasureSequence& seq, const DiscreteMeasure& target, const IndexSet& f0,
                           const std::vector<IndexSet>& battery, const std::vector<std::int64_t>& n_grid,
                           const QVagueOptions& options) {
  check_grid(n_grid, 1, "n");
  if (!f0.is_finite()) throw std::invalid_argument("reference set " + f0.descriptor() + " must be finite");
  for (const auto& f : battery) {
    if (!f.is_finite()) throw std::invalid_argument("battery set " + f.descriptor() + " must be finite");
  }
  const double ref = target.mass(f0).value;
  if (!std::isfinite(ref)) throw InfiniteMassError("target mass of " + f0.descriptor() + " is not finite");
  if (!(ref > 0.0)) throw DegenerateError("target mass of reference set " + f0.descriptor() + " is zero");

  std::vector<double> target_values;
  for (const auto& f : battery) target_values.push_back(target.mass(f).value);

  struct Row {
    double f0_mass;
    std::vector<double> masses;
  };
  const auto rows = parallel_map(n_grid.size(), options.threads, [&](std::size_t i) {
    const auto m = seq(n_grid[i]);
    Row row{m.mass(f0).value, {}};
    if (row.f0_mass > 0.0) {
      for (const auto& f : battery) row.masses.push_back(m.mass(f).value);
    }
    return row;
  });

  QVagueReport r;
  r.reference_set = f0.descriptor();
  for (const auto& f : battery) r.battery.push_back(f.descriptor());
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const auto& row = rows[i];
    if (!(row.f0_mass > 0.0)) {
      r.n_skipped.push_back(n_grid[i]);
      continue;
    }
    const double an = ref / row.f0_mass;
    r.n_used.push_back(n_grid[i]);
    r.scalars.push_back(an);
    std::vector<double> dev;
    double worst = 0.0;
    for (std::size_t j = 0; j < battery.size(); ++j) {
      const double scaled = an * row.masses[j];
      const double d = target_values[j] > 0.0 ? std::abs(scaled / target_values[j] - 1.0) : scaled / ref;
      dev.push_back(d);
      worst = std::max(worst, d);
    }
    r.deviations.push_back(std::move(dev));
    r.max_deviation.push_back(worst);
  }

  if (!r.n_skipped.empty() && r.n_skipped.back() == n_grid.back()) {
    r.verdict = Verdict::RejectedAt;
    r.rejected_n = n_grid.back();
    r.rejected_set = r.reference_set;
    r.final_deviation = std::numeric_limits<double>::infinity();
    return r;
  }
  r.final_deviation = r.max_deviation.back();
  if (tail_converges(r.max_deviation, options.tol)) {
    r.verdict = Verdict::ConvergesTo;
  } else if (r.final_deviation > options.tol && tail_non_decreasing(r.max_deviation)) {
    r.verdict = Verdict::RejectedAt;
    r.rejected_n = r.n_used.back();
    const auto& last = r.deviations.back();
    const auto worst = std::max_element(last.begin(), last.end()) - last.begin();
    r.rejected_set = r.battery[static_cast<std::size_t>(worst)];
  }
  return r;
}

IndexSet default_reference_set(const MeasureSequence& seq, const std::vector<std::int64_t>& n_grid,
                               std::int64_t max_abs) {
  check_grid(n_grid, 1, "n");
  const std::size_t begin = n_grid.size() / 2;
  std::vector<DiscreteMeasure> tail;
  for (std::size_t i = begin; i < n_grid.size(); ++i) tail.push_back(seq(n_grid[i]));
  for (std::int64_t step = 0; step <= 2 * max_abs; ++step) {
    const std::int64_t k = step % 2 == 1 ? (step + 1) / 2 : -(step / 2);
    const bool positive = std::all_of(tail.begin(), tail.end(), [k](const DiscreteMeasure& m) { return m.weight(k) > 0.0; });
    if (positive) return finite_set({k});
  }
  return finite_set({0});
}

std::string BoundedFunction::descriptor() const {
  std::string out = format_double(constant);
  for (const auto& [c, a] : terms) out += " + " + format_double(c) + "*1[" + a.descriptor() + "]";
  return out;
}

double BoundedFunction::integrate(const DiscreteMeasure& m) const {
  double total = constant;
  for (const auto& [c, a] : terms) total += c * m.mass(a).value;
  return total;
}

NarrowReport narrow_test(const MeasureSequence& seq, const DiscreteMeasure& target,
                         const std::vector<BoundedFunction>& battery, const std::vector<std::int64_t>& n_grid,
                         double tol, unsigned threads) {
  check_grid(n_grid, 1, "n");
  if (target.mass_class() != MassClass::Probability) {
    throw std::invalid_argument("narrow_test needs a probability target, got " + target.family_tag());
  }
  NarrowReport r;
  r.n_grid = n_grid;
  for (const auto& f : battery) {
    r.functions.push_back(f.descriptor());
    r.target_values.push_back(f.integrate(target));
  }
  r.values = parallel_map(n_grid.size(), threads, [&](std::size_t i) {
    const auto m = seq(n_grid[i]);
    check_probability(m, n_grid[i]);
    std::vector<double> row;
    for (const auto& f : battery) row.push_back(f.integrate(m));
    return row;
  });
  for (const auto& row : r.values) {
    double worst = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) worst = std::max(worst, std::abs(row[j] - r.target_values[j]));
    r.max_deviation.push_back(worst);
  }
  r.final_deviation = r.max_deviation.back();
  r.converges = tail_converges(r.max_deviation, tol);
  return r;
}

double AtomicMeasure01::mass(const UnitInterval& iv) const {
  double total = 0.0;
  for (const auto& [x, w] : atoms) {
    const bool above = x > iv.lo || (iv.lo_closed && x == iv.lo);
    const bool below = x < iv.hi || (iv.hi_closed && x == iv.hi);
    if (above && below) total += w;
  }
  return total;
}

std::string AtomicMeasure01::descriptor() const {
  std::string out;
  for (const auto& [x, w] : atoms) {
    if (!out.empty()) out += " + ";
    out += format_double(w) + "*delta(" + format_double(x) + ")";
  }
  return out.empty() ? "0" : out;
}

AtomicMeasure01 boundary_limit(double c) {
  if (!(c >= 0.0)) throw std::invalid_argument("boundary limit needs c >= 0");
  return AtomicMeasure01{{{0.0, 1.0 / (1.0 + c)}, {1.0, c / (1.0 + c)}}};
}

NarrowReport narrow_test(const ContinuousSequence& seq, const AtomicMeasure01& target,
                         const std::vector<UnitInterval>& battery, const std::vector<std::int64_t>& n_grid,
                         double tol, unsigned threads) {
  check_grid(n_grid, 1, "n");
  NarrowReport r;
  r.n_grid = n_grid;
  for (const auto& iv : battery) {
    r.functions.push_back("1[" + iv.descriptor() + "]");
    r.target_values.push_back(target.mass(iv));
  }
  r.values = parallel_map(n_grid.size(), threads, [&](std::size_t i) {
    const auto m = seq(n_grid[i]);
    std::vector<double> row;
    for (const auto& iv : battery) row.push_back(m.mass(iv).value);
    return row;
  });
  for (const auto& row : r.values) {
    double worst = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) worst = std::max(worst, std::abs(row[j] - r.target_values[j]));
    r.max_deviation.push_back(worst);
  }
  r.final_deviation = r.max_deviation.back();
  r.converges = tail_converges(r.max_deviation, tol);
  return r;
}

DecayReport compact_mass_decay(const MeasureSequence& seq, const std::vector<IndexSet>& sets,
                               const std::vector<std::int64_t>& n_grid, const DecayOptions& options) {
  check_grid(n_grid, 1, "n");
  const auto rows = parallel_map(n_grid.size(), options.threads, [&](std::size_t i) {
    const auto m = seq(n_grid[i]);
    std::vector<double> row;
    for (const auto& k : sets) row.push_back(m.mass(k).value);
    return row;
  });
  DecayReport r;
  r.n_grid = n_grid;
  r.all_decay = true;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    r.sets.push_back(sets[j].descriptor());
    std::vector<double> v;
    for (const auto& row : rows) v.push_back(row[j]);
    const std::size_t begin = v.size() / 2;
    bool monotone = true;
    for (std::size_t i = begin + 1; i < v.size(); ++i) monotone = monotone && slack_le(v[i], v[i - 1]);
    const bool decays = v.back() <= options.floor || (monotone && v.size() >= 2 && v.back() <= 0.5 * v[begin]);
    r.decays.push_back(decays);
    r.all_decay = r.all_decay && decays;
    r.values.push_back(std::move(v));
  }
  return r;
}

SiReport si_diagnostic(const MeasureSequence& seq, const std::vector<std::int64_t>& shifts,
                       const std::vector<IndexSet>& battery, const std::vector<std::int64_t>& n_grid,
                       unsigned threads) {
  check_grid(n_grid, 1, "n");
  if (seq.domain() == Domain::UnitInterval) throw std::invalid_argument("si_diagnostic needs a domain of N or Z");
  const bool poisson = seq.tag().rfind("poisson", 0) == 0;
  const std::size_t cells = n_grid.size() * shifts.size();
  auto rows = parallel_map(cells, threads, [&](std::size_t c) {
    const std::int64_t n = n_grid[c / shifts.size()];
    const std::int64_t k = shifts[c % shifts.size()];
    const auto m = seq(n);
    SiRow row;
    row.n = n;
    row.k = k;
    for (const auto& a : battery) {
      const double gap = std::abs(m.mass(shift_set(a, k)).value - m.mass(a).value);
      if (row.argmax_set.empty() || gap > row.max_set_gap) {
        row.max_set_gap = gap;
        row.argmax_set = a.descriptor();
      }
    }
    const auto tv = tv_distance(m, shift_measure(m, k));
    row.tv = tv.value;
    row.tv_error = tv.error_bound;
    row.bound = poisson ? static_cast<double>(std::abs(k)) / std::sqrt(2.0 * std::numbers::pi * static_cast<double>(n))
                        : std::numeric_limits<double>::quiet_NaN();
    return row;
  });
  SiReport r;
  for (const auto& row : rows) {
    if (poisson && row.tv > row.bound) r.bound_holds = false;
  }
  r.rows = std::move(rows);
  return r;
}

std::vector<std::uint64_t> default_seeds(std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = i + 1;
  return seeds;
}

BsReport bs_uniformity_test(const MeasureSequence& seq, double p, std::int64_t n_eval,
                            const std::vector<std::uint64_t>& seeds, double tol, unsigned threads) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bs_uniformity_test needs 0 <= p <= 1");
  if (n_eval < 1) throw std::invalid_argument("bs_uniformity_test needs n_eval >= 1");
  if (seeds.empty()) throw std::invalid_argument("bs_uniformity_test needs at least one seed");
  const auto m = seq(n_eval);
  check_probability(m, n_eval);
  const auto support = m.support();
  BsReport r;
  r.p = p;
  r.n_eval = n_eval;
  r.seeds = seeds;
  r.horizon = support.hi < kPosInf ? std::max<std::int64_t>(support.hi + 1, 1) : 1'000'000;
  r.values = parallel_map(seeds.size(), threads, [&](std::size_t i) {
    return m.mass(bernoulli_scheme_set({p, seeds[i], r.horizon})).value;
  });
  double sum = 0.0;
  for (double v : r.values) {
    sum += v;
    r.max_deviation = std::max(r.max_deviation, std::abs(v - p));
  }
  r.mean = sum / static_cast<double>(r.values.size());
  if (r.values.size() >= 2) {
    double ss = 0.0;
    for (double v : r.values) ss += (v - r.mean) * (v - r.mean);
    r.stddev = std::sqrt(ss / static_cast<double>(r.values.size() - 1));
  }
  const double scale = std::sqrt(2.0 * std::numbers::pi * static_cast<double>(n_eval));
  r.fitted_c = r.stddev > 0.0 ? 1.0 / (4.0 * scale * r.stddev * r.stddev) : std::numeric_limits<double>::infinity();
  r.passes = r.max_deviation <= tol;
  return r;
}

EnvelopeCompareReport envelope_compare(const MeasureSequence& first, const MeasureSequence& second,
                                       const std::vector<IndexSet>& battery, const std::vector<std::int64_t>& n_grid,
                                       double tol, const std::function<double(std::int64_t)>& gamma,
                                       const EnvelopeOptions& options) {
  EnvelopeCompareReport r;
  r.first = fap_envelopes(first, battery, n_grid, options);
  r.second = fap_envelopes(second, battery, n_grid, options);
  r.same = true;
  for (std::size_t j = 0; j < battery.size(); ++j) {
    r.sets.push_back(battery[j].descriptor());
    const double gap = std::max(std::abs(r.first[j].liminf_est - r.second[j].liminf_est),
                                std::abs(r.first[j].limsup_est - r.second[j].limsup_est));
    r.gaps.push_back(gap);
    r.same = r.same && gap <= tol;
  }
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    double sup = 0.0;
    for (std::size_t j = 0; j < battery.size(); ++j) {
      sup = std::max(sup, std::abs(r.second[j].values[i] - r.first[j].values[i]));
    }
    r.per_n_sup.push_back(sup);
    if (gamma) {
      const double g = gamma(n_grid[i]);
      r.gammas.push_back(g);
      if (sup > 2.0 * g + 1e-12) r.bound_holds = false;
    }
  }
  return r;
}

std::vector<std::int64_t> linear_grid(std::int64_t lo, std::int64_t hi, std::int64_t step) {
  if (step < 1 || hi < lo) throw std::invalid_argument("linear grid needs step >= 1 and lo <= hi");
  std::vector<std::int64_t> grid;
  for (std::int64_t n = lo; n <= hi; n += step) grid.push_back(n);
  return grid;
}

std::vector<std::int64_t> geometric_grid(std::int64_t lo, std::int64_t hi, std::size_t points) {
  if (lo < 1 || hi < lo || points < 1) throw std::invalid_argument("geometric grid needs 1 <= lo <= hi and points >= 1");
  std::vector<std::int64_t> grid;
  if (points == 1) return {hi};
  const double ratio = std::log(static_cast<double>(hi) / static_cast<double>(lo)) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    auto n = static_cast<std::int64_t>(std::llround(static_cast<double>(lo) * std::exp(ratio * static_cast<double>(i))));
    n = std::clamp(n, lo, hi);
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  if (grid.back() != hi) grid.push_back(hi);
  return grid;
}

}  // namespace limlab
