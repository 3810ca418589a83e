#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "limlab/errors.hpp"
#include "limlab/index_set.hpp"
#include "oracles.hpp"

using namespace limlab;

namespace {

std::vector<IndexSet> builtin_sets() {
  return {evens(),
          odds(),
          residue_class(3, 5),
          residue_class(0, 7),
          interval(10, 500),
          finite_set({0, 3, 4, 5, 99, 1000}),
          appendix_b_set(),
          appendix_bprime_set(-1.0, 1.0),
          appendix_bprime_set(-0.5, 2.25),
          bernoulli_scheme_set({0.3, 11, 200'000}),
          set_union(residue_class(0, 4), residue_class(2, 4)),
          set_difference(evens(), residue_class(0, 6)),
          complement(finite_set({1, 2, 3})),
          set_intersection(residue_class(1, 3), residue_class(2, 5)),
          shift_set(appendix_b_set(), -7),
          set_union(appendix_b_set(), bernoulli_scheme_set({0.1, 5, 200'000}))};
}

}  // namespace

TEST_CASE("residue classes") {
  CHECK(evens().count_prefix(99) == 50);
  CHECK(residue_class(3, 5).contains(13));
  CHECK_FALSE(residue_class(3, 5).contains(14));
  // k1 is reduced into [0, k2).
  CHECK(residue_class(8, 5).descriptor() == "residue(3,5)");
  CHECK(residue_class(-2, 5).descriptor() == "residue(3,5)");
  CHECK_THROWS_AS(residue_class(1, 0), std::invalid_argument);

  for (std::int64_t k2 : {1, 2, 3, 5, 7, 12}) {
    for (std::int64_t k1 = 0; k1 < k2; ++k1) {
      const auto set = residue_class(k1, k2);
      for (std::int64_t n : {0, 1, 17, 1000, 99'999}) {
        const std::int64_t expected = n < k1 ? 0 : (n - k1) / k2 + 1;
        CHECK(set.count_prefix(n) == expected);
      }
    }
  }
}

TEST_CASE("every built-in set counts exactly what it contains") {
  for (const auto& set : builtin_sets()) {
    CAPTURE(set.descriptor());
    std::int64_t running = 0;
    for (std::int64_t k = 0; k <= 100'000; ++k) {
      const bool in = set.contains(k);
      running += in;
      if (k % 4999 == 0 || k == 100'000) {
        REQUIRE(set.count_prefix(k) == running);
      }
      if (k > 0 && k % 997 == 0) {
        REQUIRE(set.count_prefix(k) - set.count_prefix(k - 1) == (in ? 1 : 0));
      }
    }
    REQUIRE(set.count_prefix(100'000) <= 100'001);
  }
}

TEST_CASE("complement law") {
  for (const auto& set : builtin_sets()) {
    CAPTURE(set.descriptor());
    const auto co = complement(set);
    for (std::int64_t n : {0, 1, 2, 63, 64, 65, 1000, 65'536, 99'999}) {
      CHECK(set.count_prefix(n) + co.count_prefix(n) == n + 1);
    }
  }
}

TEST_CASE("appendix B set") {
  const auto b = appendix_b_set();
  CHECK(b.contains(40));
  CHECK(b.contains(88));
  CHECK_FALSE(b.contains(89));
  // k = 0 block is {1}, k = 1 block is [2, 6].
  CHECK(b.contains(1));
  CHECK(b.contains(2));
  CHECK(b.contains(6));
  CHECK_FALSE(b.contains(0));
  CHECK_FALSE(b.contains(7));

  for (std::int64_t u = 0; u <= 70'000; ++u) REQUIRE(b.contains(u) == oracle::in_b(u));

  // Blocks are pairwise disjoint: 4^k + 2^k k < 4^(k+1) − 2^(k+1)(k+1).
  for (int k = 1; k <= 30; ++k) {
    const __int128 top = (__int128{1} << (2 * k)) + (__int128{1} << k) * k;
    const __int128 next = (__int128{1} << (2 * k + 2)) - (__int128{1} << (k + 1)) * (k + 1);
    CHECK(top < next);
  }

  // Prefix density at 4^7 is 2188 / 16385 and only drops below 0.01 near 4^12.
  const std::int64_t n7 = std::int64_t{1} << 14;
  CHECK(b.count_prefix(n7) == oracle::b_count(n7));
  CHECK(b.count_prefix(n7) == 2188);
  for (int k = 5; k <= 20; ++k) {
    const std::int64_t n = std::int64_t{1} << (2 * k);
    CHECK(b.count_prefix(n) == oracle::b_count(n));
  }
  const std::int64_t n12 = std::int64_t{1} << 24;
  CHECK(static_cast<double>(b.count_prefix(n12)) / static_cast<double>(n12 + 1) <= 0.01);
}

TEST_CASE("appendix B' set") {
  CHECK_THROWS_AS(appendix_bprime_set(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(appendix_bprime_set(2.0, -1.0), std::invalid_argument);

  // Saturated bounds recover B block by block.
  const auto b = appendix_b_set();
  for (const auto& sat : {appendix_bprime_set(-1e9, 1e9), appendix_bprime_set(-INFINITY, INFINITY)}) {
    for (std::int64_t n : {0, 1, 6, 7, 100, 4096, 70'000, 1'000'000}) CHECK(sat.count_prefix(n) == b.count_prefix(n));
  }

  // B'(−1, 1) has blocks [4^k − 2^k, 4^k + 2^k] (k >= 1) and {1}.
  const auto bp = appendix_bprime_set(-1.0, 1.0);
  CHECK(bp.contains(4096 - 64));
  CHECK(bp.contains(4096 + 64));
  CHECK_FALSE(bp.contains(4096 + 65));
  CHECK(bp.count_prefix(16384) == 388);

  // Non-integer bounds round toward the interior.
  const auto frac = appendix_bprime_set(-0.5, 0.25);
  CHECK(frac.contains(1024 - 16));
  CHECK_FALSE(frac.contains(1024 - 17));
  CHECK(frac.contains(1024 + 8));
  CHECK_FALSE(frac.contains(1024 + 9));
}

TEST_CASE("Bernoulli scheme sets") {
  const auto none = bernoulli_scheme_set({0.0, 1, 1000});
  const auto all = bernoulli_scheme_set({1.0, 1, 1000});
  CHECK(none.count_prefix(5000) == 0);
  CHECK(all.count_prefix(5000) == 5001);

  const auto a = bernoulli_scheme_set({0.3, 42, 1'000'000});
  const double density = static_cast<double>(a.count_prefix(1'000'000)) / 1'000'001.0;
  CHECK(std::abs(density - 0.3) <= 0.002);

  // Reproducible bit for bit, and replayable from the documented generator.
  const auto again = bernoulli_scheme_set({0.3, 42, 1'000'000});
  for (std::int64_t k = 0; k < 20'000; ++k) {
    REQUIRE(a.contains(k) == again.contains(k));
    REQUIRE(a.contains(k) == bernoulli_bit(42, 0.3, k));
  }

  const auto other = bernoulli_scheme_set({0.3, 43, 1'000'000});
  bool differ = false;
  for (std::int64_t k = 0; k < 64 && !differ; ++k) differ = a.contains(k) != other.contains(k);
  CHECK(differ);

  // Counting past the materialized horizon stays exact.
  const auto small = bernoulli_scheme_set({0.3, 42, 1000});
  CHECK(small.count_prefix(50'000) == a.count_prefix(50'000));
}

TEST_CASE("set algebra") {
  for (std::int64_t n : {0, 1, 10, 999, 12'345}) {
    CHECK(set_union(evens(), odds()).count_prefix(n) == n + 1);
    CHECK(set_union(residue_class(0, 4), residue_class(2, 4)).count_prefix(n) == evens().count_prefix(n));
  }
  const auto a = appendix_b_set();
  CHECK(set_difference(a, a).count_prefix(100'000) == 0);
  CHECK(set_difference(evens(), evens()).count_prefix(100'000) == 0);

  const auto mixed = set_union(residue_class(1, 3), interval(0, 50));
  const auto oracle_count = oracle::brute_count(
      [](std::int64_t k) { return (k % 3 == 1) || (k >= 0 && k <= 50); }, 0, 10'000);
  CHECK(mixed.count_prefix(10'000) == oracle_count);

  const auto shifted = shift_set(evens(), 3);
  CHECK(shifted.contains(3));
  CHECK(shifted.contains(5));
  CHECK_FALSE(shifted.contains(2));
  CHECK(shifted.count_prefix(10) == 4);
}

TEST_CASE("progression intersections agree with brute force") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> first(-40, 40), step(1, 24), len(0, 400);
  for (int trial = 0; trial < 400; ++trial) {
    const std::int64_t f1 = first(rng), s1 = step(rng), f2 = first(rng), s2 = step(rng);
    const std::int64_t l1 = trial % 3 ? f1 + len(rng) : kPosInf;
    const std::int64_t l2 = trial % 5 ? f2 + len(rng) : kPosInf;
    const Progression p1{f1, s1, l1}, p2{f2, s2, l2};
    const auto joint = intersect(p1, p2);
    const auto expected =
        oracle::brute_count([&](std::int64_t k) { return p1.contains(k) && p2.contains(k); }, -100, 2000);
    const std::int64_t got = joint ? joint->count_in({-100, 2000}) : 0;
    REQUIRE(got == expected);

    const auto s = set_intersection(progression(f1, s1, l1), progression(f2, s2, l2));
    REQUIRE(s.count_range(-100, 2000) == expected);
    const auto u = set_union(progression(f1, s1, l1), progression(f2, s2, l2));
    REQUIRE(u.count_range(-100, 2000) ==
            oracle::brute_count([&](std::int64_t k) { return p1.contains(k) || p2.contains(k); }, -100, 2000));
  }
}

TEST_CASE("decompositions cover exactly the set") {
  const Extent window{-50, 5000};
  for (const auto& set : builtin_sets()) {
    CAPTURE(set.descriptor());
    auto pieces = set.progressions(window);
    if (!pieces) continue;
    std::vector<int> hits(static_cast<std::size_t>(window.size()), 0);
    for (const auto& p : *pieces) {
      for (std::int64_t k = p.first; k <= p.last; k += p.step) ++hits[static_cast<std::size_t>(k - window.lo)];
    }
    for (std::int64_t k = window.lo; k <= window.hi; ++k) {
      REQUIRE(hits[static_cast<std::size_t>(k - window.lo)] == (set.contains(k) ? 1 : 0));
    }
  }
}

TEST_CASE("descriptor grammar round trips") {
  const std::vector<std::string> exprs = {
      "residue(3,5) | B()",
      "evens",
      "~set(1,2,3)",
      "range(0,100) - residue(0,3)",
      "Bprime(-1,1) & odds",
      "Bprime(-inf,2.5)",
      "bernoulli(0.25,9,5000)",
      "shift(residue(1,4),-3)",
      "(evens | odds) & ~range(10,20)",
      "progression(5,3,50)",
      "progression(5,3)",
      "naturals - B()",
      "integers & range(-5,5)",
      "empty | set()",
  };
  for (const auto& text : exprs) {
    CAPTURE(text);
    const auto set = parse_set(text);
    const auto again = parse_set(set.descriptor());
    CHECK(again.descriptor() == set.descriptor());
    for (std::int64_t k = -30; k <= 3000; ++k) REQUIRE(set.contains(k) == again.contains(k));
    CHECK(set.count_range(-30, 3000) == again.count_range(-30, 3000));
  }
  CHECK(parse_set("residue(3,5) | B()").contains(13));
  CHECK(parse_set("~evens & range(0,9)").count_prefix(9) == 5);
}

TEST_CASE("descriptor grammar rejects malformed input") {
  for (const char* bad : {"", "residue(1)", "residue(1,0)", "foo(1,2)", "evens |", "(evens", "set(1,,2)",
                          "Bprime(2,1)", "bernoulli(1.5,3)", "range(a,b)", "evens odds"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_set(bad), ParseError);
  }
}

TEST_CASE("counting infinite sets over infinite ranges fails loudly") {
  CHECK_THROWS_AS(evens().count_range(kNegInf, kPosInf), InfiniteMassError);
  CHECK(complement(naturals()).count_range(-10, 5) == 10);
}
