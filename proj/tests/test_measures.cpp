#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "limlab/errors.hpp"
#include "limlab/measures.hpp"
#include "limlab/special_functions.hpp"
#include "oracles.hpp"

using namespace limlab;

TEST_CASE("Poisson log pmf against the long double recurrence") {
  for (double mean : {0.5, 1.0, 3.7, 10.0, 100.0, 1024.0, 4096.0, 16384.0}) {
    const auto hi = static_cast<std::int64_t>(mean + 12 * std::sqrt(mean) + 30);
    const auto table = oracle::poisson_pmf_table(mean, hi);
    for (std::int64_t k = 0; k <= hi; k += 1 + hi / 400) {
      const long double ref = table[static_cast<std::size_t>(k)];
      if (ref < 1e-250L) continue;
      CAPTURE(mean);
      CAPTURE(k);
      REQUIRE(std::exp(poisson_log_pmf(k, mean)) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
    }
  }
  CHECK(poisson_measure(1.0).weight(0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(poisson_measure(2.0).weight(-1) == 0.0);
}

TEST_CASE("Poisson masses") {
  CHECK_THROWS_AS(poisson_measure(0.0), std::invalid_argument);
  CHECK_THROWS_AS(poisson_measure(-2.0), std::invalid_argument);

  for (double mean : {1.0, 10.0, 64.0, 1000.0, 16384.0}) {
    const auto m = poisson_measure(mean);
    const auto total = m.total_mass();
    CHECK(std::abs(total.value - 1.0) <= 1e-9);
    CHECK(total.error_bound <= 1e-10);
    CHECK(m.mass_class() == MassClass::Probability);
  }

  const auto m = poisson_measure(64.0);
  const auto window = set_mass(m, interval(40, 88));
  const auto expected = oracle::poisson_mass(64.0, 400, [](std::int64_t k) { return k >= 40 && k <= 88; });
  CHECK(std::abs(window.value - static_cast<double>(expected)) <= 1e-13);
  CHECK(std::abs(window.value - static_cast<double>(expected)) <= window.error_bound + 1e-15);

  const auto b = appendix_b_set();
  for (double mean : {16.0, 256.0, 1024.0, 4096.0}) {
    const auto got = set_mass(poisson_measure(mean), b);
    const auto hi = static_cast<std::int64_t>(mean + 20 * std::sqrt(mean) + 50);
    const auto ref = oracle::poisson_mass(mean, hi, oracle::in_b);
    CAPTURE(mean);
    CHECK(std::abs(got.value - static_cast<double>(ref)) <= 1e-12);
  }

  const auto evens_mass = set_mass(poisson_measure(10.0), evens());
  CHECK(evens_mass.value == doctest::Approx(0.5 * (1 + std::exp(-20.0))).epsilon(1e-13));
}

TEST_CASE("mass is additive over disjoint sets") {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution coin(0.5);
  const auto m = poisson_measure(50.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::int64_t> left, right;
    for (std::int64_t k = 0; k <= 200; ++k) (coin(rng) ? left : right).push_back(k);
    const auto a = finite_set(left), c = finite_set(right);
    const double joint = set_mass(m, set_union(a, c)).value;
    CHECK(joint == doctest::Approx(set_mass(m, a).value + set_mass(m, c).value).epsilon(1e-12));
  }
}

TEST_CASE("uniform, dirac and flat measures") {
  const auto u = uniform_on(std::vector<std::int64_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(u.weight(5) == doctest::Approx(1.0 / 11));
  CHECK(u.weight(11) == 0.0);
  for (std::int64_t n : {0, 1, 9, 100, 1001}) {
    const auto un = uniform_on(interval(0, n));
    const double expected = static_cast<double>(n / 2 + 1) / static_cast<double>(n + 1);
    CHECK(set_mass(un, evens()).value == doctest::Approx(expected).epsilon(1e-14));
  }
  CHECK(set_mass(uniform_on(interval(0, 999)), evens()).value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS(uniform_on(std::vector<std::int64_t>{}));
  CHECK_THROWS(uniform_on(evens()));

  const auto d = dirac(3);
  CHECK(set_mass(d, finite_set({3})).value == 1.0);
  CHECK(set_mass(d, evens()).value == 0.0);

  const auto flat = flat_improper(Domain::Integers);
  CHECK(flat.mass_class() == MassClass::Infinite);
  CHECK_THROWS_AS(flat.total_mass(), InfiniteMassError);
  CHECK_THROWS_AS(set_mass(flat, evens()), InfiniteMassError);
  CHECK(set_mass(flat, evens(), Truncation::to(-10, 10)).value == 6.0);
  CHECK(set_mass(flat, finite_set({-4, 7, 100})).value == 3.0);
  CHECK(set_mass(flat_improper(Domain::Naturals), interval(-5, 5)).value == 6.0);
}

TEST_CASE("shifts") {
  const auto d0 = dirac(0);
  for (std::int64_t k : {-5, 0, 3}) {
    const auto s = shift_measure(d0, k);
    CHECK(set_mass(s, finite_set({-k})).value == 1.0);
    CHECK(set_mass(s, finite_set({k})).value == (k == 0 ? 1.0 : 0.0));
  }
  const auto m = poisson_measure(30.0);
  const auto back = shift_measure(shift_measure(m, 7), -7);
  for (const auto& set : {evens(), residue_class(1, 3), interval(20, 40), appendix_b_set()}) {
    CHECK(set_mass(back, set).value == doctest::Approx(set_mass(m, set).value).epsilon(1e-14));
  }
  const auto shifted = shift_measure(m, 2);
  CHECK(shifted.weight(10) == doctest::Approx(m.weight(12)).epsilon(1e-15));
}

TEST_CASE("total variation") {
  CHECK(tv_distance(dirac(0), dirac(1)).value == doctest::Approx(1.0));
  const auto m = poisson_measure(40.0);
  CHECK(tv_distance(m, m).value == 0.0);
  CHECK_THROWS_AS(tv_distance(m, flat_improper(Domain::Naturals)), std::invalid_argument);

  for (double mean : {100.0, 400.0, 2500.0}) {
    const auto p = poisson_measure(mean);
    const auto hi = static_cast<std::int64_t>(mean + 20 * std::sqrt(mean) + 50);
    const auto table = oracle::poisson_pmf_table(mean, hi + 1);
    for (std::int64_t k : {1, 2, 5}) {
      long double ref = 0.0L;
      for (std::int64_t j = -k; j <= hi; ++j) {
        const long double a = j + k >= 0 && j + k <= hi + 1 ? table[static_cast<std::size_t>(j + k)] : 0.0L;
        const long double c = j >= 0 ? table[static_cast<std::size_t>(j)] : 0.0L;
        ref += std::fabs(a - c);
      }
      ref *= 0.5L;
      const auto got = tv_distance(p, shift_measure(p, k));
      CAPTURE(mean);
      CAPTURE(k);
      CHECK(std::abs(got.value - static_cast<double>(ref)) <= 1e-12);
      CHECK(got.value <= static_cast<double>(k) / std::sqrt(2 * std::numbers::pi * mean) + 1e-12);
    }
  }
  CHECK(tv_distance(poisson_measure(100.0), shift_measure(poisson_measure(100.0), 1)).value ==
        doctest::Approx(0.0398610).epsilon(1e-5));
}

TEST_CASE("restriction and normalization") {
  const auto flat = flat_improper(Domain::Naturals);
  const auto r = restrict_normalize(flat, interval(0, 9));
  CHECK(r.mass_class() == MassClass::Probability);
  for (std::int64_t k = -2; k <= 12; ++k) CHECK(r.weight(k) == doctest::Approx(k >= 0 && k <= 9 ? 0.1 : 0.0));
  CHECK_THROWS_AS(restrict_normalize(flat, evens()), InfiniteMassError);
  CHECK_THROWS_AS(restrict_normalize(dirac(0), odds()), DegenerateError);

  const auto m = poisson_measure(10.0);
  const auto a = set_intersection(evens(), interval(0, 100));
  const auto rm = restrict_normalize(m, a);
  CHECK(rm.total_mass().value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(set_mass(rm, a).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rm.weight(3) == 0.0);
  CHECK(rm.weight(8) / rm.weight(6) == doctest::Approx(m.weight(8) / m.weight(6)).epsilon(1e-13));
  const auto twice = restrict_normalize(rm, a);
  for (const auto& set : {residue_class(0, 4), interval(0, 10), appendix_b_set()}) {
    CHECK(set_mass(twice, set).value == doctest::Approx(set_mass(rm, set).value).epsilon(1e-13));
  }
}

TEST_CASE("mixtures and scaling") {
  const auto mix = mixture({{0.25, dirac(0)}, {0.75, dirac(1)}});
  CHECK(mix.mass_class() == MassClass::Probability);
  CHECK(set_mass(mix, odds()).value == doctest::Approx(0.75));
  CHECK_THROWS_AS(mixture({{-0.1, dirac(0)}, {1.1, dirac(1)}}), std::invalid_argument);
  const auto scaled = scale_measure(poisson_measure(5.0), 2.0);
  CHECK(scaled.mass_class() == MassClass::FiniteNonProb);
  CHECK(scaled.total_mass().value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("incomplete beta against Boost") {
  for (double a : {1e-4, 1e-2, 0.3, 1.0, 2.5, 10.0}) {
    for (double b : {1e-4, 1e-2, 0.5, 1.0, 4.0, 10.0}) {
      for (double x : {1e-6, 0.01, 0.2, 0.5, 0.77, 0.999}) {
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(x);
        const double ref = boost::math::ibeta(a, b, x);
        REQUIRE(regularized_incomplete_beta(a, b, x) == doctest::Approx(ref).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("Beta masses against quadrature") {
  CHECK_THROWS_AS(beta_measure(0.0, 1.0), std::invalid_argument);
  CHECK(beta_measure(1.0, 1.0).mass({0.0, 0.5}).value == doctest::Approx(0.5));

  // ∫_u^v x^{a−1} (1−x)^{b−1} dx / B(a, b), with x = s^{1/a} to tame the
  // singularity at zero.
  auto quad = [](double a, double b, double u, double v) {
    auto f = [&](double s) {
      if (s <= 0.0) return 0.0;
      const double x = std::pow(s, 1.0 / a);
      return std::pow(1.0 - x, b - 1.0) / a;
    };
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(f, std::pow(u, a), std::pow(v, a)) / std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  };
  for (double a : {0.05, 0.5, 1.0, 3.0}) {
    for (double b : {1.0, 2.0, 5.0}) {
      for (auto [u, v] : {std::pair{0.0, 0.3}, std::pair{0.1, 0.6}, std::pair{0.25, 0.9}}) {
        CAPTURE(a);
        CAPTURE(b);
        const double got = beta_measure(a, b).mass({u, v}).value;
        CHECK(got == doctest::Approx(quad(a, b, u, v)).epsilon(1e-9));
      }
    }
  }

  // Beta(c/n, 1/n) puts c/(1+c) of its mass near 1 as n grows.
  for (double c : {0.5, 2.0}) {
    const auto m = beta_measure(c / 1e6, 1.0 / 1e6);
    CHECK(m.mass({0.1, 0.9}).value < 1e-5);
    CHECK(m.cdf(0.5) == doctest::Approx(1.0 / (1.0 + c)).epsilon(1e-5));
  }
}

TEST_CASE("Haldane measure") {
  const auto h = haldane_measure();
  CHECK(h.mass_class() == MassClass::Infinite);
  CHECK(h.density(0.5) == doctest::Approx(4.0));
  CHECK_THROWS_AS(h.cdf(0.5), InfiniteMassError);
  CHECK_THROWS_AS(h.mass({0.0, 0.5}), InfiniteMassError);
  CHECK_THROWS_AS(h.mass({0.5, 1.0}), InfiniteMassError);
  auto logit = [](double x) { return std::log(x / (1 - x)); };
  boost::math::quadrature::gauss_kronrod<double, 31> gk;
  for (auto [u, v] : {std::pair{0.1, 0.9}, std::pair{0.01, 0.02}, std::pair{0.4, 0.999}}) {
    const double got = h.mass({u, v}).value;
    CHECK(got == doctest::Approx(logit(v) - logit(u)).epsilon(1e-13));
    const double ref = gk.integrate([](double x) { return 1.0 / (x * (1.0 - x)); }, u, v, 15, 1e-14);
    CHECK(got == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("measure sequences") {
  const auto seq = poisson_sequence();
  CHECK_THROWS_AS(seq(0), std::invalid_argument);
  CHECK(seq(5).family_tag().rfind("poisson", 0) == 0);
  CHECK(set_mass(uniform_sequence()(9), evens()).value == doctest::Approx(0.5));

  for (std::int64_t n : {1, 3, 10, 40}) {
    const auto m = modified_uniform_sequence()(n);
    const double size = static_cast<double>(n * n + 1 + n + 1);
    CHECK(set_mass(m, evens()).value == doctest::Approx(static_cast<double>(n * n + 1) / size).epsilon(1e-14));
  }
  CHECK(set_mass(modified_uniform_sequence()(10), evens()).value == doctest::Approx(101.0 / 112.0));

  const auto b = beta_sequence([](std::int64_t n) { return 2.0 / n; }, [](std::int64_t n) { return 1.0 / n; });
  CHECK(b(1000).cdf(0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-2));
}
