// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <boost/math/distributions/beta.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "batteries.hpp"
#include "limlab/constructions.hpp"
#include "limlab/convergence.hpp"
#include "limlab/format.hpp"
#include "oracles.hpp"

using namespace limlab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool subset_of(const IndexSet& f, const IndexSet& k) {
  const auto e = f.extent();
  for (std::int64_t u = e.lo; u <= e.hi; ++u) {
    if (f.contains(u) && !k.contains(u)) return false;
  }
  return true;
}

void lrf_residues(Outcome& o) {
  const std::int64_t N = 1'000'000;
  double worst = 0.0;
  double elapsed = 0.0;
  for (std::int64_t k2 : {2, 3, 5, 7}) {
    for (std::int64_t k1 = 0; k1 < k2; ++k1) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto est = lrf(residue_class(k1, k2), {N});
      elapsed += seconds_since(t0);
      const auto brute = oracle::brute_count([&](std::int64_t u) { return u % k2 == k1; }, 0, N);
      o.require(est.counts.back() == brute, "count of residue(" + std::to_string(k1) + "," + std::to_string(k2) + ")");
      worst = std::max(worst, std::abs(est.limit_est - 1.0 / static_cast<double>(k2)));
    }
  }
  o.require(worst <= 1e-3, "ratio within 1e-3");
  o.require(elapsed < 1.0, "runtime < 1 s");
  o.detail << "max |ratio - 1/k2| = " << worst << ", " << elapsed << " s";
}

void modified_uniform(Outcome& o) {
  const auto seq = modified_uniform_sequence();
  double worst = 0.0;
  for (std::int64_t n = 1; n <= 1000; ++n) {
    const double v = seq(n).mass(evens()).value;
    const double nd = static_cast<double>(n);
    const double exact = (nd * nd + 1.0) / (nd * nd + nd + 2.0);
    worst = std::max(worst, std::abs(v - exact) / exact);
  }
  // Direct enumeration of K_n for small n.
  for (std::int64_t n = 1; n <= 30; ++n) {
    const auto m = seq(n);
    long double even = 0.0L, total = 0.0L;
    for (std::int64_t k = 0; k <= 2 * n * n + 1; ++k) {
      const bool in_k = (k % 2 == 0 && k / 2 <= n * n) || (k % 2 == 1 && k / 2 <= n);
      o.require((m.weight(k) > 0.0) == in_k, "support of K_" + std::to_string(n));
      total += m.weight(k);
      if (k % 2 == 0) even += m.weight(k);
    }
    o.require(std::abs(static_cast<double>(even / total) - m.mass(evens()).value) <= 1e-15, "enumerated mass");
  }
  const double at100 = seq(100).mass(evens()).value;
  o.require(worst <= 2e-16, "closed form to rounding");
  o.require(at100 >= 0.98, "value at n = 100");
  o.detail << "max relative error " << worst << ", value(100) = " << at100;
}

void delta_envelopes(Outcome& o) {
  const auto grid = linear_grid(1, 10'000);
  std::vector<IndexSet> finite = {finite_set({0}), finite_set({1, 2, 3}), finite_set({5, 50, 500}), interval(0, 100),
                                  interval(7, 7)};
  std::vector<IndexSet> sets = finite;
  for (const auto& f : finite) sets.push_back(complement(f));
  sets.push_back(evens());
  const auto reports = fap_envelopes(delta_sequence(), sets, grid);
  for (std::size_t j = 0; j < reports.size(); ++j) {
    const double lo = j < finite.size() ? 0.0 : (j < 2 * finite.size() ? 1.0 : 0.0);
    const double hi = j < finite.size() ? 0.0 : 1.0;
    o.require(reports[j].liminf_est == lo && reports[j].limsup_est == hi, reports[j].set_descriptor);
  }
  o.detail << finite.size() << " finite, " << finite.size() << " cofinite, evens -> [" << reports.back().liminf_est
           << ", " << reports.back().limsup_est << "]";
}

void poisson_tv(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_ratio = 0.0, worst_oracle = 0.0;
  int pairs = 0;
  for (std::int64_t n : {10, 50, 100, 400, 1000}) {
    const auto base = poisson_measure(static_cast<double>(n));
    const std::int64_t hi = n + 40 * static_cast<std::int64_t>(std::sqrt(static_cast<double>(n))) + 100;
    const auto table = oracle::poisson_pmf_table(static_cast<double>(n), hi);
    const auto k_max = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    for (std::int64_t k = 1; k <= k_max; ++k) {
      const double tv = tv_distance(base, shift_measure(base, k)).value;
      long double ref = 0.0L;
      for (std::int64_t j = 0; j <= hi; ++j) {
        const long double shifted = j + k <= hi ? table[static_cast<std::size_t>(j + k)] : 0.0L;
        ref += std::fabs(table[static_cast<std::size_t>(j)] - shifted);
      }
      for (std::int64_t j = 0; j < k; ++j) ref += table[static_cast<std::size_t>(j)];
      ref = ref / 2.0L;
      const double bound = static_cast<double>(k) / std::sqrt(2.0 * M_PI * static_cast<double>(n));
      worst_ratio = std::max(worst_ratio, tv / bound);
      worst_oracle = std::max(worst_oracle, std::abs(tv - static_cast<double>(ref)));
      o.require(tv <= bound, "n=" + std::to_string(n) + " k=" + std::to_string(k));
      ++pairs;
    }
  }
  const double elapsed = seconds_since(t0);
  o.require(worst_oracle <= 1e-9, "oracle agreement");
  o.require(elapsed < 10.0, "runtime < 10 s");
  o.detail << pairs << " pairs, max tv/bound = " << worst_ratio << ", max |tv - oracle| = " << worst_oracle << ", "
           << elapsed << " s";
}

void appendix_b(Outcome& o) {
  const std::int64_t N = std::int64_t{1} << 14;
  const auto b = appendix_b_set();
  const auto count = b.count_prefix(N);
  o.require(count == oracle::b_count(N) && count == oracle::brute_count(oracle::in_b, 0, N), "prefix count");
  const double density = static_cast<double>(count) / static_cast<double>(N + 1);
  o.require(density <= 0.01, "prefix density at 4^7 <= 0.01");
  o.detail << "density(4^7) = " << density;
  for (int k : {5, 6}) {
    const std::int64_t n = std::int64_t{1} << (2 * k);
    const double mass = poisson_measure(static_cast<double>(n)).mass(b).value;
    const auto ref = oracle::poisson_mass(static_cast<double>(n), 4 * n, oracle::in_b);
    o.require(mass >= 0.99, "mass at 4^" + std::to_string(k));
    o.require(std::abs(mass - static_cast<double>(ref)) <= 1e-9, "oracle at 4^" + std::to_string(k));
    o.detail << ", mass(4^" << k << ") = " << mass;
  }
}

void splice_theorem(Outcome& o) {
  const auto sets = battery::twenty();
  struct Case {
    const char* name;
    MeasureSequence base;
    Filtration filtration;
    std::vector<std::int64_t> grid;
  };
  const std::vector<Case> cases = {
      {"poisson/half", poisson_sequence(), half_filtration(), linear_grid(10, 400, 10)},
      {"uniform/sqrt", uniform_sequence(), sqrt_filtration(), {100, 400, 2500, 10'000, 40'000, 250'000, 1'000'000}}};
  for (const auto& c : cases) {
    const SpliceSpec spec(c.base, flat_improper(Domain::Naturals), c.filtration);
    const auto spliced = splice(spec);
    double worst_gap = 0.0, worst_exact = 0.0;
    int exact_checks = 0;
    for (auto n : c.grid) {
      const auto kn = c.filtration(n);
      const auto pi = c.base(n);
      const auto tilde = spliced(n);
      const double gamma = spec.gamma(n);
      // Independent γ: direct sum over K_n.
      double gamma_ref = 0.0;
      if (std::string(c.name) == "poisson/half") {
        gamma_ref = static_cast<double>(
            oracle::poisson_mass(static_cast<double>(n), n, [n](std::int64_t k) { return k <= n / 2; }));
      } else {
        gamma_ref = static_cast<double>(kn.count_prefix(n)) / static_cast<double>(n + 1);
      }
      o.require(std::abs(gamma - gamma_ref) <= 1e-12 * std::max(1.0, gamma_ref) + 1e-300, "gamma oracle");
      for (const auto& a : sets) {
        const double gap = std::abs(tilde.mass(a).value - pi.mass(a).value);
        worst_gap = std::max(worst_gap, gap / (2.0 * gamma + 1e-15));
        o.require(gap <= 2.0 * gamma + 1e-15, std::string(c.name) + " 2γ bound at n=" + std::to_string(n));
        if (!a.is_finite() || a.extent().empty() || gamma <= 0.0 || !subset_of(a, kn)) continue;
        const double size_k = static_cast<double>(kn.count_prefix(n));
        const double lhs = size_k / gamma * tilde.mass(a).value;
        const double rhs = static_cast<double>(a.count_range(a.extent().lo, a.extent().hi));
        worst_exact = std::max(worst_exact, std::abs(lhs - rhs) / rhs);
        ++exact_checks;
      }
    }
    o.require(worst_exact <= 1e-12, std::string(c.name) + " exactness");
    o.require(exact_checks > 0, std::string(c.name) + " exactness exercised");
    if (std::string(c.name) == "poisson/half") {
      o.require(spec.gamma(200) < 1e-6, "gamma(200) < 1e-6");
      o.detail << "gamma(200) = " << spec.gamma(200) << "; ";
    }
    o.detail << c.name << ": max gap/(2γ + 1e-15) = " << worst_gap << ", " << exact_checks
             << " exactness checks, max rel err = " << worst_exact << "; ";
  }
}

void qvague_verdicts(Outcome& o) {
  const std::vector<IndexSet> small = {finite_set({0}), finite_set({1}), finite_set({2, 3}), interval(0, 9)};
  const auto grid = linear_grid(100, 1000, 100);
  const auto flat_n = flat_improper(Domain::Naturals);

  const auto uniform = detect_qvague(uniform_sequence(), flat_n, finite_set({0}), small, grid);
  o.require(uniform.verdict == Verdict::ConvergesTo, "uniform accepted");

  std::vector<IndexSet> around;
  std::vector<std::int64_t> points;
  for (std::int64_t j = -10; j <= 10; ++j) {
    around.push_back(finite_set({j}));
    points.push_back(j);
  }
  around.push_back(finite_set(points));
  const std::vector<std::int64_t> big = {2500, 5000, 7500, 10'000};
  const auto shifted =
      detect_qvague(shifted_poisson_sequence(), flat_improper(Domain::Integers), finite_set({0}), around, big, {1e-2, 0});
  o.require(shifted.verdict == Verdict::ConvergesTo, "shifted Poisson accepted");
  const std::int64_t n = big.back();
  const auto table = oracle::poisson_pmf_table(static_cast<double>(n), n + 20);
  double worst = 0.0;
  for (std::int64_t j = -10; j <= 10; ++j) {
    const long double ratio = table[static_cast<std::size_t>(n + j)] / table[static_cast<std::size_t>(n)];
    const double ref = static_cast<double>(std::fabs(ratio - 1.0L));
    worst = std::max(worst, ref);
    o.require(std::abs(shifted.deviations.back()[static_cast<std::size_t>(j + 10)] - ref) <= 1e-9 * std::max(ref, 1e-3),
              "shifted deviation oracle");
  }

  const auto raw = detect_qvague(poisson_sequence(), flat_n, finite_set({0}), small, grid);
  o.require(raw.verdict == Verdict::RejectedAt, "raw Poisson rejected");

  int delta_rejections = 0;
  const std::vector<std::pair<DiscreteMeasure, IndexSet>> targets = {{flat_n, finite_set({0})},
                                                                     {flat_improper(Domain::Integers), finite_set({0})},
                                                                     {dirac(0), finite_set({0})},
                                                                     {poisson_measure(3.0), finite_set({0})},
                                                                     {dirac(5), finite_set({5})}};
  for (const auto& [target, f0] : targets) {
    const auto d = detect_qvague(delta_sequence(), target, f0, small, grid);
    o.require(d.verdict == Verdict::RejectedAt, "delta_n rejected against " + target.family_tag());
    delta_rejections += d.verdict == Verdict::RejectedAt;
  }
  o.detail << "uniform " << to_string(uniform.verdict) << ", shifted Poisson " << to_string(shifted.verdict)
           << " (final deviation " << shifted.final_deviation << ", oracle " << worst << "), Poisson "
           << to_string(raw.verdict) << ", delta_n rejected for " << delta_rejections << "/5 targets";
}

void beta_limits(Outcome& o) {
  const std::int64_t n = 10'000;
  const double nd = static_cast<double>(n);
  for (double c : {0.0, 0.5, 1.0}) {
    const double a = c > 0.0 ? c / nd : 1.0 / (nd * nd);
    const double b = 1.0 / nd;
    const auto m = beta_measure(a, b);
    double worst = 0.0;
    for (double eps : {0.1, 0.5, 0.9}) {
      const double cdf = m.cdf(eps);
      const double ref = boost::math::ibeta(a, b, eps);
      o.require(std::abs(cdf - ref) <= 1e-10, "cdf oracle");
      worst = std::max(worst, std::abs(cdf - 1.0 / (1.0 + c)));
    }
    const double middle = m.mass({0.25, 0.75, true, true}).value;
    const double middle_ref = boost::math::ibeta(a, b, 0.75) - boost::math::ibeta(a, b, 0.25);
    o.require(std::abs(middle - middle_ref) <= 1e-10, "middle oracle");
    o.require(worst <= 2e-2, "cdf near 1/(1+c)");
    o.require(middle <= 1e-2, "middle mass");
    o.detail << "c=" << c << ": max |cdf - 1/(1+c)| = " << worst << ", mass[0.25,0.75] = " << middle << "; ";
  }
  const auto h = beta_measure(1.0 / nd, 1.0 / nd);
  const double ratio = h.density(0.2) / h.density(0.5);
  const boost::math::beta_distribution<double> ref(1.0 / nd, 1.0 / nd);
  const double ratio_ref = boost::math::pdf(ref, 0.2) / boost::math::pdf(ref, 0.5);
  o.require(std::abs(ratio - ratio_ref) <= 1e-10, "density ratio oracle");
  o.require(std::abs(ratio - 1.5625) <= 1e-2, "density ratio near 1.5625");
  o.detail << "density ratio = " << ratio;
}

void bs_uniformity(Outcome& o) {
  const auto seeds = default_seeds(100);
  for (double p : {0.1, 0.3, 0.7}) {
    const auto u = bs_uniformity_test(uniform_sequence(), p, 100'000, seeds, 0.01);
    const auto again = bs_uniformity_test(uniform_sequence(), p, 100'000, seeds, 0.01, 1);
    o.require(u.values == again.values, "uniform determinism");
    for (std::size_t i = 0; i < 2; ++i) {
      std::int64_t count = 0;
      for (std::int64_t k = 0; k <= 100'000; ++k) count += bernoulli_bit(seeds[i], p, k);
      o.require(u.values[i] == static_cast<double>(count) / 100'001.0, "uniform recount");
    }
    o.require(u.max_deviation <= 0.01, "uniform p=" + limlab::format_double(p));
    o.detail << "uniform p=" << p << " max " << u.max_deviation << "; ";
  }
  const auto table = oracle::poisson_pmf_table(10'000.0, 12'000);
  for (double p : {0.1, 0.3, 0.7}) {
    const auto r = bs_uniformity_test(poisson_sequence(), p, 10'000, seeds, 0.02);
    const auto again = bs_uniformity_test(poisson_sequence(), p, 10'000, seeds, 0.02, 1);
    o.require(r.values == again.values, "Poisson determinism");
    long double ref = 0.0L;
    for (std::int64_t k = 0; k <= 12'000; ++k) {
      if (bernoulli_bit(seeds[0], p, k)) ref += table[static_cast<std::size_t>(k)];
    }
    o.require(std::abs(r.values[0] - static_cast<double>(ref)) <= 1e-9, "Poisson recount");
    o.require(r.max_deviation <= 0.02, "Poisson p=" + limlab::format_double(p) + " <= 0.02");
    o.detail << "Poisson p=" << p << " max " << r.max_deviation << " (sd " << r.stddev << "); ";
  }
}

void appendix_a(Outcome& o) {
  const auto sets = battery::twenty();
  const auto d = delta_sequence();
  const auto grid = linear_grid(1, 400);
  const auto gamma = [](std::int64_t n) { return 1.0 / static_cast<double>(n); };
  const auto mix = convex_mix(constant_sequence(dirac(0)), d, gamma);
  const auto cmp = envelope_compare(d, mix, sets, grid, 2.0 / 200.0, gamma);
  o.require(cmp.bound_holds, "convex_mix 2γ");

  const auto seq = poisson_sequence();
  const auto slow = slow_filtration(seq, prefix_filtration(), 2000);
  const auto tail_grid = geometric_grid(10, 2000, 30);
  const auto tail = truncate_tail(seq, slow.filtration, tail_grid);
  double worst = 0.0;
  for (auto n : tail_grid) {
    const double g = static_cast<double>(oracle::poisson_mass(
        static_cast<double>(n), n + 40 * static_cast<std::int64_t>(std::sqrt(static_cast<double>(n))) + 100,
        [&](std::int64_t k) { return slow.filtration(n).contains(k); }));
    for (const auto& a : sets) {
      const double gap = std::abs(tail.sequence(n).mass(a).value - seq(n).mass(a).value);
      worst = std::max(worst, gap / std::max(g, 1e-300));
      o.require(gap <= 2.0 * g + 1e-12, "truncate_tail 2γ at n=" + std::to_string(n));
    }
  }

  const std::vector<IndexSet> small = {finite_set({0}), finite_set({1}), finite_set({2, 3}), interval(0, 9)};
  const auto qgrid = linear_grid(100, 1000, 100);
  const auto flat_n = flat_improper(Domain::Naturals);
  auto verdict = [&](const MeasureSequence& s) { return detect_qvague(s, flat_n, finite_set({0}), small, qgrid).verdict; };
  const auto vu = verdict(uniform_sequence());
  const auto vu_head = verdict(truncate_head(uniform_sequence(), half_filtration(), qgrid).sequence);
  const auto vp = verdict(poisson_sequence());
  const auto vp_head = verdict(truncate_head(poisson_sequence(), half_filtration(), qgrid).sequence);
  o.require(vu == Verdict::ConvergesTo && vu_head == vu, "truncate_head keeps acceptance");
  o.require(vp == Verdict::RejectedAt && vp_head == vp, "truncate_head keeps rejection");
  o.detail << "convex_mix max per-n sup = " << *std::max_element(cmp.per_n_sup.begin(), cmp.per_n_sup.end())
           << ", truncate_tail max gap/γ = " << worst << ", head verdicts " << to_string(vu) << "/" << to_string(vu_head)
           << " and " << to_string(vp) << "/" << to_string(vp_head);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"1 residue-class frequencies", lrf_residues},
      {"2 modified uniform", modified_uniform},
      {"3 point-mass envelopes", delta_envelopes},
      {"4 Poisson shift bound", poisson_tv},
      {"5 sparse set B", appendix_b},
      {"6 splice bounds", splice_theorem},
      {"7 q-vague verdicts", qvague_verdicts},
      {"8 Beta limits", beta_limits},
      {"9 Bernoulli uniformity", bs_uniformity},
      {"10 mixture and truncation invariants", appendix_a},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failures += !o.pass;
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
