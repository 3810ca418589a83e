#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace limlab {

inline constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
inline constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();

/// Largest range exact counting will walk element by element.
inline constexpr std::int64_t kEnumerationCeiling = 100'000'000;

/// Closed integer range [lo, hi]. kNegInf / kPosInf mark unbounded ends.
struct Extent {
  std::int64_t lo = kNegInf;
  std::int64_t hi = kPosInf;

  static constexpr Extent all() { return {kNegInf, kPosInf}; }
  static constexpr Extent none() { return {1, 0}; }
  static constexpr Extent naturals() { return {0, kPosInf}; }

  constexpr bool empty() const { return lo > hi; }
  constexpr bool bounded() const { return empty() || (lo != kNegInf && hi != kPosInf); }
  constexpr bool contains(std::int64_t k) const { return lo <= k && k <= hi; }
  /// Number of integers in the range; requires bounded().
  std::int64_t size() const;

  Extent intersect(Extent other) const;
  Extent hull(Extent other) const;
  /// Translate by k, keeping infinite ends infinite.
  Extent shifted(std::int64_t k) const;

  friend bool operator==(const Extent&, const Extent&) = default;
};

/// {first, first + step, first + 2 step, ...} truncated at last (inclusive).
struct Progression {
  std::int64_t first = 0;
  std::int64_t step = 1;
  std::int64_t last = kPosInf;

  bool is_interval() const { return step == 1 || first == last; }
  bool contains(std::int64_t k) const;
  /// Smallest member >= lo, if any.
  std::optional<std::int64_t> first_at_least(std::int64_t lo) const;
  std::optional<Progression> clip(Extent window) const;
  std::int64_t count_in(Extent window) const;

  friend bool operator==(const Progression&, const Progression&) = default;
};

/// Exact intersection of two progressions (Chinese remainder theorem).
std::optional<Progression> intersect(const Progression& a, const Progression& b);

/// A subset of the integers: membership predicate, exact range counting,
/// and a textual descriptor that parses back into an equal set.
///
/// Sets are immutable and cheap to copy (shared node tree).
class IndexSet {
 public:
  class Node;

  explicit IndexSet(std::shared_ptr<const Node> node);

  bool contains(std::int64_t k) const;
  /// #{lo <= k <= hi : k in A}. Throws if the clipped range is unbounded.
  std::int64_t count_range(std::int64_t lo, std::int64_t hi) const;
  /// #{0 <= k <= n : k in A}.
  std::int64_t count_prefix(std::int64_t n) const { return count_range(0, n); }
  /// Hull of the members; Extent::none() for the empty set.
  Extent extent() const;
  bool is_finite() const { return extent().bounded(); }
  /// Decomposition of A ∩ window into disjoint progressions, when the node
  /// type knows one. The window must be bounded.
  std::optional<std::vector<Progression>> progressions(Extent window) const;
  /// Members inside a bounded window, ascending.
  std::vector<std::int64_t> elements(Extent window) const;
  std::string descriptor() const;

  const Node& node() const { return *node_; }

 private:
  std::shared_ptr<const Node> node_;
};

class IndexSet::Node {
 public:
  virtual ~Node() = default;
  virtual bool contains(std::int64_t k) const = 0;
  /// Called with lo <= hi, both finite, inside extent().
  virtual std::int64_t count_in(std::int64_t lo, std::int64_t hi) const = 0;
  virtual Extent extent() const = 0;
  virtual std::optional<std::vector<Progression>> progressions(Extent window) const = 0;
  virtual std::string descriptor() const = 0;
};

/// #{lo <= k <= hi : k in A and k in B}, exact.
std::int64_t intersection_count(const IndexSet& a, const IndexSet& b, std::int64_t lo, std::int64_t hi);

// Elementary sets.
IndexSet empty_set();
IndexSet naturals();
IndexSet integers();
/// {first + step j : j >= 0, first + step j <= last}.
IndexSet progression(std::int64_t first, std::int64_t step, std::int64_t last = kPosInf);
IndexSet interval(std::int64_t lo, std::int64_t hi);
IndexSet finite_set(std::vector<std::int64_t> points);

/// The residue class k1 + k2·ℕ with k1 reduced into [0, k2).
IndexSet residue_class(std::int64_t k1, std::int64_t k2);
IndexSet evens();
IndexSet odds();

/// ⋃_k [4^k − 2^k k, 4^k + 2^k k]: natural density 0 but carries almost
/// all the Poisson(4^k) mass.
IndexSet appendix_b_set();
/// ⋃_k [4^k + 2^k max(−k, a), 4^k + 2^k min(k, b)], endpoints rounded
/// toward the interior. Infinite a or b are allowed.
IndexSet appendix_bprime_set(double a, double b);

/// Parameters of a reproducible Bernoulli-scheme random set A(X).
///
/// Membership of k >= 0 is decided by a counter-based generator:
///   key = splitmix64(seed), z = splitmix64(key + k * 0x9E3779B97F4A7C15),
///   X_k = 1 iff (z >> 11) * 2^-53 < p,
/// where splitmix64 is the SplitMix64 output finalizer. Prefix counts are
/// materialized up to `horizon` at construction.
struct BernoulliSchemeSpec {
  double p = 0.5;
  std::uint64_t seed = 0;
  std::int64_t horizon = 1'000'000;
};
IndexSet bernoulli_scheme_set(const BernoulliSchemeSpec& spec);
/// The raw generator bit X_k; exposed so tests can replay it.
bool bernoulli_bit(std::uint64_t seed, double p, std::int64_t k);

IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_intersection(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);
/// Complement within ℤ.
IndexSet complement(const IndexSet& a);
/// A + k = {a + k : a in A}.
IndexSet shift_set(const IndexSet& a, std::int64_t k);

/// Parses the set expression grammar:
///
///   expr   := term (('|' | '-') term)*        union, difference
///   term   := factor ('&' factor)*            intersection
///   factor := '~' factor | '(' expr ')' | atom
///   atom   := residue(k1,k2) | progression(first,step[,last]) | range(lo,hi)
///           | set(a,b,...) | B() | Bprime(a,b) | bernoulli(p,seed[,horizon])
///           | shift(expr,k) | evens | odds | naturals | integers | empty
///
/// `~` is the complement within ℤ. Bprime bounds accept `inf` / `-inf`.
IndexSet parse_set(std::string_view text);

}  // namespace limlab
