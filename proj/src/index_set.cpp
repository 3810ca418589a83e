#include "limlab/index_set.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "limlab/errors.hpp"
#include "limlab/format.hpp"

namespace limlab {

namespace {

__extension__ typedef __int128 i128;

constexpr std::size_t kMaxPieces = std::size_t{1} << 16;
constexpr std::size_t kMaxPairs = std::size_t{1} << 20;

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

i128 mod_floor(i128 a, i128 b) { return a - b * floor_div(a, b); }

// Inverse of a modulo m, gcd(a, m) == 1, m >= 1.
i128 mod_inverse(i128 a, i128 m) {
  i128 old_r = mod_floor(a, m), r = m;
  i128 old_s = 1, s = 0;
  while (r != 0) {
    const i128 q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
  }
  return mod_floor(old_s, m);
}

std::int64_t clamp64(i128 v) {
  if (v >= static_cast<i128>(kPosInf)) return kPosInf;
  if (v <= static_cast<i128>(kNegInf)) return kNegInf;
  return static_cast<std::int64_t>(v);
}

bool all_intervals(const std::vector<Progression>& pieces) {
  return std::all_of(pieces.begin(), pieces.end(), [](const Progression& p) { return p.is_interval(); });
}

std::int64_t pieces_size(const std::vector<Progression>& pieces, Extent w) {
  std::int64_t total = 0;
  for (const auto& p : pieces) total += p.count_in(w);
  return total;
}

Progression as_interval(std::int64_t lo, std::int64_t hi) { return Progression{lo, 1, hi}; }

// Intervals of `window` not covered by the given intervals.
std::vector<Progression> interval_gaps(std::vector<Progression> intervals, Extent window) {
  std::sort(intervals.begin(), intervals.end(),
            [](const Progression& a, const Progression& b) { return a.first < b.first; });
  std::vector<Progression> gaps;
  i128 cursor = window.lo;
  for (const auto& iv : intervals) {
    if (iv.first > cursor) gaps.push_back(as_interval(clamp64(cursor), iv.first - 1));
    cursor = std::max<i128>(cursor, static_cast<i128>(iv.last) + 1);
  }
  if (cursor <= window.hi) gaps.push_back(as_interval(clamp64(cursor), window.hi));
  return gaps;
}

// Disjoint progressions covering window \ ⋃ pieces, when expressible.
std::optional<std::vector<Progression>> complement_pieces(const std::vector<Progression>& pieces,
                                                          Extent window) {
  if (all_intervals(pieces)) return interval_gaps(pieces, window);
  if (pieces.size() != 1 || pieces.front().step > 1024) return std::nullopt;
  const Progression& p = pieces.front();
  std::vector<Progression> out;
  if (p.first > window.lo) out.push_back(as_interval(window.lo, p.first - 1));
  for (std::int64_t r = 1; r < p.step; ++r) {
    if (auto piece = Progression{p.first + r, p.step, p.last}.clip(window)) out.push_back(*piece);
  }
  if (p.last < window.hi) out.push_back(as_interval(p.last + 1, window.hi));
  return out;
}

std::optional<std::vector<Progression>> pairwise_intersections(const std::vector<Progression>& a,
                                                               const std::vector<Progression>& b,
                                                               Extent window) {
  if (a.size() * b.size() > kMaxPairs) return std::nullopt;
  std::vector<Progression> out;
  for (const auto& pa : a) {
    for (const auto& pb : b) {
      if (auto both = intersect(pa, pb)) {
        if (auto clipped = both->clip(window)) out.push_back(*clipped);
      }
    }
  }
  return out;
}

void check_enumeration(Extent w) {
  if (w.size() > kEnumerationCeiling) {
    throw EnumerationLimitError("exact count needs enumeration of " + std::to_string(w.size()) +
                                " integers (ceiling " + std::to_string(kEnumerationCeiling) + ")");
  }
}

// ---------------------------------------------------------------------------

class EmptyNode final : public IndexSet::Node {
 public:
  bool contains(std::int64_t) const override { return false; }
  std::int64_t count_in(std::int64_t, std::int64_t) const override { return 0; }
  Extent extent() const override { return Extent::none(); }
  std::optional<std::vector<Progression>> progressions(Extent) const override {
    return std::vector<Progression>{};
  }
  std::string descriptor() const override { return "empty"; }
};

class IntegersNode final : public IndexSet::Node {
 public:
  bool contains(std::int64_t) const override { return true; }
  std::int64_t count_in(std::int64_t lo, std::int64_t hi) const override { return hi - lo + 1; }
  Extent extent() const override { return Extent::all(); }
  std::optional<std::vector<Progression>> progressions(Extent w) const override {
    if (w.empty()) return std::vector<Progression>{};
    return std::vector<Progression>{as_interval(w.lo, w.hi)};
  }
  std::string descriptor() const override { return "integers"; }
};

class ProgressionNode final : public IndexSet::Node {
 public:
  explicit ProgressionNode(Progression p) : p_(p) {}
  bool contains(std::int64_t k) const override { return p_.contains(k); }
  std::int64_t count_in(std::int64_t lo, std::int64_t hi) const override { return p_.count_in({lo, hi}); }
  Extent extent() const override {
    if (p_.last == kPosInf) return {p_.first, kPosInf};
    auto clipped = p_.clip(Extent::all());
    return clipped ? Extent{clipped->first, clipped->last} : Extent::none();
  }
  std::optional<std::vector<Progression>> progressions(Extent w) const override {
    std::vector<Progression> out;
    if (auto c = p_.clip(w)) out.push_back(*c);
    return out;
  }
  std::string descriptor() const override {
    if (p_.last == kPosInf && p_.first >= 0 && p_.first < p_.step) {
      if (p_.step == 1) return "naturals";
      return "residue(" + std::to_string(p_.first) + "," + std::to_string(p_.step) + ")";
    }
    if (p_.step == 1 && p_.last != kPosInf) {
      return "range(" + std::to_string(p_.first) + "," + std::to_string(p_.last) + ")";
    }
    std::string out = "progression(" + std::to_string(p_.first) + "," + std::to_string(p_.step);
    if (p_.last != kPosInf) out += "," + std::to_string(p_.last);
    return out + ")";
  }

 private:
  Progression p_;
};

class FiniteNode final : public IndexSet::Node {
 public:
  explicit FiniteNode(std::vector<std::int64_t> points) : points_(std::move(points)) {}
  bool contains(std::int64_t k) const override {
    return std::binary_search(points_.begin(), points_.end(), k);
  }
  std::int64_t count_in(std::int64_t lo, std::int64_t hi) const override {
    auto b = std::lower_bound(points_.begin(), points_.end(), lo);
    auto e = std::upper_bound(b, points_.end(), hi);
    return static_cast<std::int64_t>(e - b);
  }
  Extent extent() const override { return {points_.front(), points_.back()}; }
  std::optional<std::vector<Progression>> progressions(Extent w) const override {
    std::vector<Progression> runs;
    auto it = std::lower_bound(points_.begin(), points_.end(), w.lo);
    for (; it != points_.end() && *it <= w.hi; ++it) {
      if (!runs.empty() && runs.back().last + 1 == *it) {
        runs.back().last = *it;
      } else {
        runs.push_back(as_interval(*it, *it));
      }
    }
    return runs;
  }
  std::string descriptor() const override {
    std::string out = "set(";
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(points_[i]);
    }
    return out + ")";
  }

 private:
  std::vector<std::int64_t> points_;  // sorted, unique, non-empty
};

// Sorted disjoint integer intervals; infinite in principle, truncated where
// the generating formula leaves the int64 range.
class BlocksNode final : public IndexSet::Node {
 public:
  BlocksNode(std::vector<Extent> blocks, std::string descriptor)
      : blocks_(std::move(blocks)), descriptor_(std::move(descriptor)) {
    cumulative_.reserve(blocks_.size() + 1);
    cumulative_.push_back(0);
    for (const auto& b : blocks_) cumulative_.push_back(cumulative_.back() + b.size());
  }
  bool contains(std::int64_t k) const override {
    auto it = std::upper_bound(blocks_.begin(), blocks_.end(), k,
                               [](std::int64_t v, const Extent& b) { return v < b.lo; });
    return it != blocks_.begin() && std::prev(it)->contains(k);
  }
  std::int64_t count_in(std::int64_t lo, std::int64_t hi) const override {
    return count_upto(hi) - count_upto(lo - 1);
  }
  Extent extent() const override {
    if (blocks_.empty()) return Extent::none();
    return {blocks_.front().lo, kPosInf};
  }
  std::optional<std::vector<Progression>> progressions(Extent w) const override {
    std::vector<Progression> out;
    for (const auto& b : blocks_) {
      Extent c = b.intersect(w);
      if (!c.empty()) out.push_back(as_interval(c.lo, c.hi));
    }
    return out;
  }
  std::string descriptor() const override { return descriptor_; }

 private:
  // Members <= n.
  std::int64_t count_upto(std::int64_t n) const {
    auto it = std::upper_bound(blocks_.begin(), blocks_.end(), n,
                               [](std::int64_t v, const Extent& b) { return v < b.lo; });
    const auto idx = static_cast<std::size_t>(it - blocks_.begin());
    if (idx == 0) return 0;
    const Extent& last = blocks_[idx - 1];
    return cumulative_[idx - 1] + (std::min(n, last.hi) - last.lo + 1);
  }

  std::vector<Extent> blocks_;
  std::vector<std::int64_t> cumulative_;
  std::string descriptor_;
};

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class BernoulliNode final : public IndexSet::Node {
 public:
  explicit BernoulliNode(const BernoulliSchemeSpec& spec) : spec_(spec) {
    const auto words = static_cast<std::size_t>(spec.horizon / 64 + 1);
    bits_.assign(words, 0);
    cumulative_.assign(words + 1, 0);
    for (std::int64_t k = 0; k <= spec.horizon; ++k) {
      if (bernoulli_bit(spec.seed, spec.p, k)) bits_[static_cast<std::size_t>(k / 64)] |= 1ULL << (k % 64);
    }
    for (std::size_t w = 0; w < words; ++w) cumulative_[w + 1] = cumulative_[w] + std::popcount(bits_[w]);
  }
  bool contains(std::int64_t k) const override {
    if (k < 0) return false;
    if (k <= spec_.horizon) return (bits_[static_cast<std::size_t>(k / 64)] >> (k % 64)) & 1ULL;
    return bernoulli_bit(spec_.seed, spec_.p, k);
  }
  std::int64_t count_in(std::int64_t lo, std::int64_t hi) const override {
    return count_upto(hi) - count_upto(lo - 1);
  }
  Extent extent() const override { return spec_.p <= 0.0 ? Extent::none() : Extent::naturals(); }
  std::optional<std::vector<Progression>> progressions(Extent w) const override {
    if (spec_.p <= 0.0) return std::vector<Progression>{};
    if (spec_.p >= 1.0) {
      std::vector<Progression> out;
      if (auto c = Progression{0, 1, kPosInf}.clip(w)) out.push_back(*c);
      return out;
    }
    return std::nullopt;
  }
  std::string descriptor() const override {
    return "bernoulli(" + format_double(spec_.p) + "," + std::to_string(spec_.seed) + "," +
           std::to_string(spec_.horizon) + ")";
  }

 private:
  std::int64_t count_upto(std::int64_t n) const {
    if (n < 0) return 0;
    const std::int64_t m = std::min(n, spec_.horizon);
    const auto word = static_cast<std::size_t>(m / 64);
    const int bit = static_cast<int>(m % 64);
    const std::uint64_t mask = bit == 63 ? ~0ULL : ((1ULL << (bit + 1)) - 1);
    std::int64_t total = cumulative_[word] + std::popcount(bits_[word] & mask);
    if (n > spec_.horizon) {
      check_enumeration({spec_.horizon + 1, n});
      for (std::int64_t k = spec_.horizon + 1; k <= n; ++k) total += bernoulli_bit(spec_.seed, spec_.p, k);
    }
    return total;
  }

  BernoulliSchemeSpec spec_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::int64_t> cumulative_;
};

class UnionNode final : public IndexSet::Node {
 public:
  UnionNode(IndexSet a, IndexSet b) : a_(std::move(a)), b_(std::move(b)) {}
  bool contains(std::int64_t k) const override { return a_.contains(k) || b_.contains(k); }
  std::int64_t count_in(std::int64_t lo, std::int64_t hi) const override {
    return a_.count_range(lo, hi) + b_.count_range(lo, hi) - intersection_count(a_, b_, lo, hi);
  }
  Extent extent() const override { return a_.extent().hull(b_.extent()); }
  std::optional<std::vector<Progression>> progressions(Extent w) const override {
    auto pa = a_.progressions(w);
    if (!pa) return std::nullopt;
    auto pb = b_.progressions(w);
    if (!pb) return std::nullopt;
    auto rest = complement_pieces(*pa, w);
    if (!rest) return std::nullopt;
    auto extra = pairwise_intersections(*pb, *rest, w);
    if (!extra) return std::nullopt;
    pa->insert(pa->end(), extra->begin(), extra->end());
    return pa;
  }
  std::string descriptor() const override { return "(" + a_.descriptor() + " | " + b_.descriptor() + ")"; }

 private:
  IndexSet a_, b_;
};

class IntersectionNode final : public IndexSet::Node {
 public:
  IntersectionNode(IndexSet a, IndexSet b) : a_(std::move(a)), b_(std::move(b)) {}
  bool contains(std::int64_t k) const override { return a_.contains(k) && b_.contains(k); }
  std::int64_t count_in(std::int64_t lo, std::int64_t hi) const override {
    return intersection_count(a_, b_, lo, hi);
  }
  Extent extent() const override { return a_.extent().intersect(b_.extent()); }
  std::optional<std::vector<Progression>> progressions(Extent w) const override {
    auto pa = a_.progressions(w);
    if (!pa) return std::nullopt;
    auto pb = b_.progressions(w);
    if (!pb) return std::nullopt;
    return pairwise_intersections(*pa, *pb, w);
  }
  std::string descriptor() const override { return "(" + a_.descriptor() + " & " + b_.descriptor() + ")"; }

 private:
  IndexSet a_, b_;
};

class DifferenceNode final : public IndexSet::Node {
 public:
  DifferenceNode(IndexSet a, IndexSet b) : a_(std::move(a)), b_(std::move(b)) {}
  bool contains(std::int64_t k) const override { return a_.contains(k) && !b_.contains(k); }
  std::int64_t count_in(std::int64_t lo, std::int64_t hi) const override {
    return a_.count_range(lo, hi) - intersection_count(a_, b_, lo, hi);
  }
  Extent extent() const override { return a_.extent(); }
  std::optional<std::vector<Progression>> progressions(Extent w) const override {
    auto pa = a_.progressions(w);
    if (!pa) return std::nullopt;
    auto pb = b_.progressions(w);
    if (!pb) return std::nullopt;
    auto rest = complement_pieces(*pb, w);
    if (!rest) return std::nullopt;
    return pairwise_intersections(*pa, *rest, w);
  }
  std::string descriptor() const override { return "(" + a_.descriptor() + " - " + b_.descriptor() + ")"; }

 private:
  IndexSet a_, b_;
};

class ComplementNode final : public IndexSet::Node {
 public:
  explicit ComplementNode(IndexSet a) : a_(std::move(a)) {}
  bool contains(std::int64_t k) const override { return !a_.contains(k); }
  std::int64_t count_in(std::int64_t lo, std::int64_t hi) const override {
    return (hi - lo + 1) - a_.count_range(lo, hi);
  }
  Extent extent() const override { return Extent::all(); }
  std::optional<std::vector<Progression>> progressions(Extent w) const override {
    auto pa = a_.progressions(w);
    if (!pa) return std::nullopt;
    return complement_pieces(*pa, w);
  }
  std::string descriptor() const override { return "~" + a_.descriptor(); }

 private:
  IndexSet a_;
};

class ShiftNode final : public IndexSet::Node {
 public:
  ShiftNode(IndexSet a, std::int64_t k) : a_(std::move(a)), k_(k) {}
  bool contains(std::int64_t u) const override { return a_.contains(u - k_); }
  std::int64_t count_in(std::int64_t lo, std::int64_t hi) const override {
    return a_.count_range(lo - k_, hi - k_);
  }
  Extent extent() const override { return a_.extent().shifted(k_); }
  std::optional<std::vector<Progression>> progressions(Extent w) const override {
    auto pa = a_.progressions(w.shifted(-k_));
    if (!pa) return std::nullopt;
    for (auto& p : *pa) {
      p.first += k_;
      if (p.last != kPosInf) p.last += k_;
    }
    return pa;
  }
  std::string descriptor() const override {
    return "shift(" + a_.descriptor() + "," + std::to_string(k_) + ")";
  }

 private:
  IndexSet a_;
  std::int64_t k_;
};

IndexSet make(std::shared_ptr<const IndexSet::Node> node) { return IndexSet(std::move(node)); }

}  // namespace

// ---------------------------------------------------------------------------
// Extent / Progression

std::int64_t Extent::size() const {
  if (empty()) return 0;
  if (!bounded()) throw InfiniteMassError("size of an unbounded range");
  const i128 n = static_cast<i128>(hi) - lo + 1;
  return clamp64(n);
}

Extent Extent::intersect(Extent other) const {
  Extent out{std::max(lo, other.lo), std::min(hi, other.hi)};
  return out.empty() ? none() : out;
}

Extent Extent::hull(Extent other) const {
  if (empty()) return other;
  if (other.empty()) return *this;
  return {std::min(lo, other.lo), std::max(hi, other.hi)};
}

Extent Extent::shifted(std::int64_t k) const {
  if (empty()) return none();
  const std::int64_t new_lo = lo == kNegInf ? kNegInf : clamp64(static_cast<i128>(lo) + k);
  const std::int64_t new_hi = hi == kPosInf ? kPosInf : clamp64(static_cast<i128>(hi) + k);
  return {new_lo, new_hi};
}

bool Progression::contains(std::int64_t k) const {
  if (k < first || k > last) return false;
  return (static_cast<i128>(k) - first) % step == 0;
}

std::optional<std::int64_t> Progression::first_at_least(std::int64_t lo) const {
  i128 candidate = first;
  if (lo > first) candidate = first + ceil_div(static_cast<i128>(lo) - first, step) * step;
  if (candidate > last) return std::nullopt;
  return static_cast<std::int64_t>(candidate);
}

std::optional<Progression> Progression::clip(Extent window) const {
  if (window.empty()) return std::nullopt;
  auto f = first_at_least(window.lo);
  if (!f || *f > window.hi) return std::nullopt;
  const std::int64_t top = std::min(last, window.hi);
  if (top == kPosInf) return Progression{*f, step, kPosInf};
  const i128 aligned = *f + floor_div(static_cast<i128>(top) - *f, step) * step;
  return Progression{*f, step, static_cast<std::int64_t>(aligned)};
}

std::int64_t Progression::count_in(Extent window) const {
  auto c = clip(window);
  if (!c) return 0;
  if (c->last == kPosInf) throw InfiniteMassError("count of an infinite progression");
  return static_cast<std::int64_t>((static_cast<i128>(c->last) - c->first) / c->step + 1);
}

std::optional<Progression> intersect(const Progression& a, const Progression& b) {
  const i128 g = std::gcd(a.step, b.step);
  const i128 diff = static_cast<i128>(b.first) - a.first;
  if (diff % g != 0) return std::nullopt;
  const i128 lcm = static_cast<i128>(a.step) / g * b.step;
  if (lcm > (i128{1} << 62)) throw std::overflow_error("progression steps too large to intersect");
  const i128 m = b.step / g;
  const i128 t = m == 1 ? 0 : mod_floor((diff / g) * mod_inverse(a.step / g, m), m);
  const i128 x0 = a.first + a.step * t;
  const std::int64_t lo = std::max(a.first, b.first);
  const std::int64_t hi = std::min(a.last, b.last);
  const i128 start = x0 + ceil_div(static_cast<i128>(lo) - x0, lcm) * lcm;
  if (start > hi) return std::nullopt;
  const Progression out{static_cast<std::int64_t>(start), static_cast<std::int64_t>(lcm), kPosInf};
  return out.clip({lo, hi});
}

// ---------------------------------------------------------------------------
// IndexSet

IndexSet::IndexSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

bool IndexSet::contains(std::int64_t k) const { return node_->contains(k); }

std::int64_t IndexSet::count_range(std::int64_t lo, std::int64_t hi) const {
  const Extent w = Extent{lo, hi}.intersect(node_->extent());
  if (w.empty()) return 0;
  if (!w.bounded()) throw InfiniteMassError("count of an infinite set: " + descriptor());
  return node_->count_in(w.lo, w.hi);
}

Extent IndexSet::extent() const { return node_->extent(); }

std::optional<std::vector<Progression>> IndexSet::progressions(Extent window) const {
  const Extent w = window.intersect(node_->extent());
  if (w.empty()) return std::vector<Progression>{};
  if (!w.bounded()) return std::nullopt;
  return node_->progressions(w);
}

std::vector<std::int64_t> IndexSet::elements(Extent window) const {
  const Extent w = window.intersect(node_->extent());
  std::vector<std::int64_t> out;
  if (w.empty()) return out;
  if (!w.bounded()) throw InfiniteMassError("cannot list an infinite set: " + descriptor());
  if (auto pieces = node_->progressions(w)) {
    for (const auto& p : *pieces) {
      for (i128 k = p.first; k <= p.last; k += p.step) out.push_back(static_cast<std::int64_t>(k));
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  check_enumeration(w);
  for (std::int64_t k = w.lo;; ++k) {
    if (node_->contains(k)) out.push_back(k);
    if (k == w.hi) break;
  }
  return out;
}

std::string IndexSet::descriptor() const { return node_->descriptor(); }

std::int64_t intersection_count(const IndexSet& a, const IndexSet& b, std::int64_t lo, std::int64_t hi) {
  const Extent w = Extent{lo, hi}.intersect(a.extent()).intersect(b.extent());
  if (w.empty()) return 0;
  if (!w.bounded()) throw InfiniteMassError("count of an infinite intersection");

  const auto pa = a.progressions(w);
  if (pa && pa->size() <= kMaxPieces && all_intervals(*pa)) {
    std::int64_t total = 0;
    for (const auto& p : *pa) total += b.count_range(p.first, p.last);
    return total;
  }
  const auto pb = b.progressions(w);
  if (pb && pb->size() <= kMaxPieces && all_intervals(*pb)) {
    std::int64_t total = 0;
    for (const auto& p : *pb) total += a.count_range(p.first, p.last);
    return total;
  }
  if (pa && pb) {
    if (auto joint = pairwise_intersections(*pa, *pb, w)) return pieces_size(*joint, w);
  }
  // Walk the members of whichever side is known explicitly.
  for (const auto* side : {&pa, &pb}) {
    if (!*side) continue;
    const IndexSet& other = side == &pa ? b : a;
    const std::int64_t members = pieces_size(**side, w);
    if (members > kEnumerationCeiling) continue;
    std::int64_t total = 0;
    for (const auto& p : **side) {
      for (i128 k = p.first; k <= p.last; k += p.step) total += other.contains(static_cast<std::int64_t>(k));
    }
    return total;
  }
  check_enumeration(w);
  std::int64_t total = 0;
  for (std::int64_t k = w.lo;; ++k) {
    total += a.contains(k) && b.contains(k);
    if (k == w.hi) break;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Factories

IndexSet empty_set() { return make(std::make_shared<EmptyNode>()); }

IndexSet naturals() { return progression(0, 1); }

IndexSet integers() { return make(std::make_shared<IntegersNode>()); }

IndexSet progression(std::int64_t first, std::int64_t step, std::int64_t last) {
  if (step < 1) throw std::invalid_argument("progression step must be >= 1");
  if (last < first) return empty_set();
  return make(std::make_shared<ProgressionNode>(Progression{first, step, last}));
}

IndexSet interval(std::int64_t lo, std::int64_t hi) { return progression(lo, 1, hi); }

IndexSet finite_set(std::vector<std::int64_t> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.empty()) return empty_set();
  return make(std::make_shared<FiniteNode>(std::move(points)));
}

IndexSet residue_class(std::int64_t k1, std::int64_t k2) {
  if (k2 < 1) throw std::invalid_argument("residue class modulus must be >= 1");
  return progression(static_cast<std::int64_t>(mod_floor(k1, k2)), k2);
}

IndexSet evens() { return residue_class(0, 2); }

IndexSet odds() { return residue_class(1, 2); }

IndexSet appendix_b_set() {
  std::vector<Extent> blocks;
  for (int k = 0; k <= 31; ++k) {
    const std::int64_t centre = std::int64_t{1} << (2 * k);
    const std::int64_t half = (std::int64_t{1} << k) * k;
    blocks.push_back({centre - half, centre + half});
  }
  return make(std::make_shared<BlocksNode>(std::move(blocks), "B()"));
}

IndexSet appendix_bprime_set(double a, double b) {
  if (std::isnan(a) || std::isnan(b) || !(a < b)) throw std::invalid_argument("Bprime requires a < b");
  std::vector<Extent> blocks;
  for (int k = 0; k <= 31; ++k) {
    const long double centre = std::ldexp(1.0L, 2 * k);
    const long double scale = std::ldexp(1.0L, k);
    const long double lo = centre + scale * std::max<long double>(-k, a);
    const long double hi = centre + scale * std::min<long double>(k, b);
    const auto ilo = static_cast<std::int64_t>(std::ceil(lo));
    const auto ihi = static_cast<std::int64_t>(std::floor(hi));
    if (ilo <= ihi) blocks.push_back({ilo, ihi});
  }
  return make(std::make_shared<BlocksNode>(
      std::move(blocks), "Bprime(" + format_double(a) + "," + format_double(b) + ")"));
}

bool bernoulli_bit(std::uint64_t seed, double p, std::int64_t k) {
  if (k < 0) return false;
  const std::uint64_t key = splitmix64(seed);
  const std::uint64_t z = splitmix64(key + static_cast<std::uint64_t>(k) * 0x9E3779B97F4A7C15ULL);
  const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
  return u < p;
}

IndexSet bernoulli_scheme_set(const BernoulliSchemeSpec& spec) {
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw std::invalid_argument("Bernoulli parameter must lie in [0,1]");
  if (spec.horizon < 0) throw std::invalid_argument("Bernoulli horizon must be >= 0");
  return make(std::make_shared<BernoulliNode>(spec));
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) { return make(std::make_shared<UnionNode>(a, b)); }

IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  return make(std::make_shared<IntersectionNode>(a, b));
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  return make(std::make_shared<DifferenceNode>(a, b));
}

IndexSet complement(const IndexSet& a) { return make(std::make_shared<ComplementNode>(a)); }

IndexSet shift_set(const IndexSet& a, std::int64_t k) {
  if (k == 0) return a;
  return make(std::make_shared<ShiftNode>(a, k));
}

}  // namespace limlab
