#include "limlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "limlab/errors.hpp"
#include "limlab/format.hpp"
#include "limlab/special_functions.hpp"

namespace limlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
    ++terms_;
  }
  double value() const { return sum_ + comp_; }
  std::int64_t terms() const { return terms_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  std::int64_t terms_ = 0;
};

class PoissonImpl final : public DiscreteMeasure::Impl {
 public:
  explicit PoissonImpl(double mean)
      : Impl(MassClass::Probability, "poisson(" + format_double(mean) + ")"), mean_(mean) {
    hi_ = static_cast<std::int64_t>(std::floor(mean + 12.0 * std::sqrt(mean) + 50.0));
    weights_.resize(static_cast<std::size_t>(hi_ + 1));
    for (std::int64_t k = 0; k <= hi_; ++k) weights_[static_cast<std::size_t>(k)] = std::exp(poisson_log_pmf(k, mean));
    tail_ = poisson_upper_tail_bound(static_cast<double>(hi_ + 1), mean);
  }
  double weight(std::int64_t k) const override {
    if (k < 0) return 0.0;
    if (k <= hi_) return weights_[static_cast<std::size_t>(k)];
    return std::exp(poisson_log_pmf(k, mean_));
  }
  Extent support() const override { return {0, hi_}; }
  double tail_bound() const override { return tail_; }
  double weight_error() const override { return 1e-13; }

 private:
  double mean_;
  std::int64_t hi_ = 0;
  double tail_ = 0.0;
  std::vector<double> weights_;
};

class UniformImpl final : public DiscreteMeasure::Impl {
 public:
  UniformImpl(IndexSet points, std::int64_t size)
      : Impl(MassClass::Probability, "uniform(" + points.descriptor() + ")"), points_(std::move(points)), size_(size) {}
  double weight(std::int64_t k) const override {
    return points_.contains(k) ? 1.0 / static_cast<double>(size_) : 0.0;
  }
  Extent support() const override { return points_.extent(); }
  MassResult mass(const IndexSet& a, Extent window) const override {
    const Extent w = support().intersect(window);
    if (w.empty()) return {};
    const auto hits = intersection_count(points_, a, w.lo, w.hi);
    const double value = static_cast<double>(hits) / static_cast<double>(size_);
    return {value, kEps * value};
  }

 private:
  IndexSet points_;
  std::int64_t size_;
};

class DiracImpl final : public DiscreteMeasure::Impl {
 public:
  explicit DiracImpl(std::int64_t point)
      : Impl(MassClass::Probability, "dirac(" + std::to_string(point) + ")"), point_(point) {}
  double weight(std::int64_t k) const override { return k == point_ ? 1.0 : 0.0; }
  Extent support() const override { return {point_, point_}; }
  MassResult mass(const IndexSet& a, Extent window) const override {
    return {window.contains(point_) && a.contains(point_) ? 1.0 : 0.0, 0.0};
  }

 private:
  std::int64_t point_;
};

class FlatImpl final : public DiscreteMeasure::Impl {
 public:
  explicit FlatImpl(Domain domain)
      : Impl(MassClass::Infinite, domain == Domain::Naturals ? "flat(naturals)" : "flat(integers)"),
        support_(domain == Domain::Naturals ? Extent::naturals() : Extent::all()) {}
  double weight(std::int64_t k) const override { return support_.contains(k) ? 1.0 : 0.0; }
  Extent support() const override { return support_; }
  MassResult mass(const IndexSet& a, Extent window) const override {
    const Extent w = support_.intersect(window).intersect(a.extent());
    if (w.empty()) return {};
    if (!w.bounded()) {
      throw InfiniteMassError("improper " + tag() + " has infinite mass on " + a.descriptor() +
                              "; pass a finite set or an explicit truncation");
    }
    return {static_cast<double>(a.count_range(w.lo, w.hi)), 0.0};
  }

 private:
  Extent support_;
};

class ShiftedImpl final : public DiscreteMeasure::Impl {
 public:
  ShiftedImpl(DiscreteMeasure base, std::int64_t k)
      : Impl(base.mass_class(), "shift(" + base.family_tag() + "," + std::to_string(k) + ")"),
        base_(std::move(base)),
        k_(k) {}
  double weight(std::int64_t j) const override { return base_.weight(j + k_); }
  Extent support() const override { return base_.support().shifted(-k_); }
  double tail_bound() const override { return base_.tail_bound(); }
  double weight_error() const override { return base_.impl().weight_error(); }
  MassResult mass(const IndexSet& a, Extent window) const override {
    return base_.impl().mass(shift_set(a, k_), window.shifted(k_));
  }

 private:
  DiscreteMeasure base_;
  std::int64_t k_;
};

class RestrictedImpl final : public DiscreteMeasure::Impl {
 public:
  RestrictedImpl(DiscreteMeasure base, IndexSet a, MassResult normalizer)
      : Impl(MassClass::Probability, "restrict(" + base.family_tag() + "," + a.descriptor() + ")"),
        base_(std::move(base)),
        set_(std::move(a)),
        z_(normalizer) {}
  double weight(std::int64_t k) const override { return set_.contains(k) ? base_.weight(k) / z_.value : 0.0; }
  Extent support() const override { return base_.support().intersect(set_.extent()); }
  double tail_bound() const override { return std::min(1.0, base_.tail_bound() / z_.value); }
  double weight_error() const override { return base_.impl().weight_error() + z_.error_bound / z_.value; }
  MassResult mass(const IndexSet& b, Extent window) const override {
    const MassResult num = base_.impl().mass(set_intersection(set_, b), window);
    const double value = num.value / z_.value;
    return {value, (num.error_bound + value * z_.error_bound) / z_.value + kEps * value};
  }

 private:
  DiscreteMeasure base_;
  IndexSet set_;
  MassResult z_;
};

class MixtureImpl final : public DiscreteMeasure::Impl {
 public:
  MixtureImpl(std::vector<std::pair<double, DiscreteMeasure>> parts, MassClass cls, std::string tag)
      : Impl(cls, std::move(tag)), parts_(std::move(parts)) {}
  double weight(std::int64_t k) const override {
    double total = 0.0;
    for (const auto& [w, m] : parts_) total += w * m.weight(k);
    return total;
  }
  Extent support() const override {
    Extent hull = Extent::none();
    for (const auto& [w, m] : parts_) hull = hull.hull(m.support());
    return hull;
  }
  double tail_bound() const override {
    double total = 0.0;
    for (const auto& [w, m] : parts_) total += w * m.tail_bound();
    return total;
  }
  double weight_error() const override {
    double worst = 0.0;
    for (const auto& [w, m] : parts_) worst = std::max(worst, m.impl().weight_error());
    return worst + 4 * kEps;
  }
  MassResult mass(const IndexSet& a, Extent window) const override {
    MassResult out;
    for (const auto& [w, m] : parts_) {
      const MassResult r = m.impl().mass(a, window);
      out.value += w * r.value;
      out.error_bound += w * r.error_bound;
    }
    out.error_bound += 4 * kEps * out.value;
    return out;
  }

 private:
  std::vector<std::pair<double, DiscreteMeasure>> parts_;
};

class ScaledImpl final : public DiscreteMeasure::Impl {
 public:
  ScaledImpl(DiscreteMeasure base, double alpha, MassClass cls)
      : Impl(cls, format_double(alpha) + "*" + base.family_tag()), base_(std::move(base)), alpha_(alpha) {}
  double weight(std::int64_t k) const override { return alpha_ * base_.weight(k); }
  Extent support() const override { return base_.support(); }
  double tail_bound() const override { return alpha_ * base_.tail_bound(); }
  double weight_error() const override { return base_.impl().weight_error() + kEps; }
  MassResult mass(const IndexSet& a, Extent window) const override {
    const MassResult r = base_.impl().mass(a, window);
    return {alpha_ * r.value, alpha_ * r.error_bound + kEps * alpha_ * r.value};
  }

 private:
  DiscreteMeasure base_;
  double alpha_;
};

// ---------------------------------------------------------------------------

class BetaImpl final : public ContinuousMeasure::Impl {
 public:
  BetaImpl(double a, double b)
      : Impl(MassClass::Probability, "beta(" + format_double(a) + "," + format_double(b) + ")"),
        a_(a),
        b_(b),
        log_norm_(log_beta(a, b)) {}
  double density(double x) const override {
    if (!(x > 0.0 && x < 1.0)) return 0.0;
    return std::exp((a_ - 1.0) * std::log(x) + (b_ - 1.0) * std::log1p(-x) - log_norm_);
  }
  double cdf(double x) const override { return regularized_incomplete_beta(a_, b_, std::clamp(x, 0.0, 1.0)); }
  MassResult mass(const UnitInterval& iv) const override {
    // No atoms, so open and closed ends agree.
    const double value = std::max(0.0, cdf(iv.hi) - cdf(iv.lo));
    return {value, 1e-14};
  }

 private:
  double a_, b_, log_norm_;
};

double logit(double x) { return std::log(x) - std::log1p(-x); }

class HaldaneImpl final : public ContinuousMeasure::Impl {
 public:
  HaldaneImpl() : Impl(MassClass::Infinite, "haldane") {}
  double density(double x) const override {
    if (!(x > 0.0 && x < 1.0)) return 0.0;
    return 1.0 / (x * (1.0 - x));
  }
  double cdf(double) const override {
    throw InfiniteMassError("the Haldane measure has no distribution function: every (0,u] has infinite mass");
  }
  MassResult mass(const UnitInterval& iv) const override {
    if (iv.hi <= iv.lo) return {};
    if (iv.lo <= 0.0 || iv.hi >= 1.0) {
      throw InfiniteMassError("Haldane mass of " + iv.descriptor() + " is infinite");
    }
    const double value = logit(iv.hi) - logit(iv.lo);
    return {value, 8 * kEps * (std::abs(logit(iv.hi)) + std::abs(logit(iv.lo)))};
  }
};

void check_probability(const DiscreteMeasure& m, const char* what) {
  if (m.mass_class() != MassClass::Probability) {
    throw std::invalid_argument(std::string(what) + " needs a probability measure, got " + m.family_tag());
  }
}

}  // namespace

std::string to_string(MassClass c) {
  switch (c) {
    case MassClass::Probability: return "probability";
    case MassClass::FiniteNonProb: return "finite";
    case MassClass::Infinite: return "infinite";
  }
  return "?";
}

std::string to_string(Domain d) {
  switch (d) {
    case Domain::Naturals: return "naturals";
    case Domain::Integers: return "integers";
    case Domain::UnitInterval: return "unit_interval";
  }
  return "?";
}

MassResult DiscreteMeasure::Impl::mass(const IndexSet& a, Extent window) const {
  const Extent w = support().intersect(window).intersect(a.extent());
  if (w.empty()) return {0.0, tail_bound()};
  if (!w.bounded()) {
    throw InfiniteMassError("mass of " + a.descriptor() + " under " + tag() + " needs a bounded window");
  }
  CompensatedSum sum;
  const auto pieces = a.progressions(w);
  std::int64_t members = 0;
  if (pieces) {
    for (const auto& p : *pieces) members += p.count_in(w);
  }
  if (pieces && members <= w.size()) {
    for (const auto& p : *pieces) {
      for (std::int64_t k = p.first;; k += p.step) {
        sum.add(weight(k));
        if (p.last - k < p.step) break;
      }
    }
  } else {
    if (w.size() > kEnumerationCeiling) {
      throw EnumerationLimitError("mass summation over " + std::to_string(w.size()) + " points");
    }
    for (std::int64_t k = w.lo;; ++k) {
      if (a.contains(k)) sum.add(weight(k));
      if (k == w.hi) break;
    }
  }
  const double value = sum.value();
  const double rounding = value * (weight_error() + 2.0 * kEps * static_cast<double>(sum.terms() + 1));
  return {value, tail_bound() + rounding};
}

DiscreteMeasure::DiscreteMeasure(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

double DiscreteMeasure::weight(std::int64_t k) const { return impl_->weight(k); }

MassResult DiscreteMeasure::mass(const IndexSet& a, const Truncation& trunc) const {
  return impl_->mass(a, trunc.window);
}

MassResult DiscreteMeasure::total_mass() const {
  if (impl_->mass_class() == MassClass::Infinite) {
    throw InfiniteMassError("total mass of improper measure " + impl_->tag() + " is infinite");
  }
  return impl_->mass(integers(), Extent::all());
}

Extent DiscreteMeasure::support() const { return impl_->support(); }

double DiscreteMeasure::tail_bound() const { return impl_->tail_bound(); }

MassClass DiscreteMeasure::mass_class() const { return impl_->mass_class(); }

const std::string& DiscreteMeasure::family_tag() const { return impl_->tag(); }

DiscreteMeasure poisson_measure(double mean) {
  if (!(mean > 0.0) || !std::isfinite(mean)) throw std::invalid_argument("Poisson mean must be positive and finite");
  return DiscreteMeasure(std::make_shared<PoissonImpl>(mean));
}

DiscreteMeasure uniform_on(const IndexSet& points) {
  if (!points.is_finite()) throw std::invalid_argument("uniform_on needs a finite set, got " + points.descriptor());
  const Extent e = points.extent();
  const std::int64_t size = e.empty() ? 0 : points.count_range(e.lo, e.hi);
  if (size == 0) throw std::invalid_argument("uniform_on needs a non-empty set");
  return DiscreteMeasure(std::make_shared<UniformImpl>(points, size));
}

DiscreteMeasure uniform_on(std::vector<std::int64_t> points) { return uniform_on(finite_set(std::move(points))); }

DiscreteMeasure dirac(std::int64_t point) { return DiscreteMeasure(std::make_shared<DiracImpl>(point)); }

DiscreteMeasure flat_improper(Domain domain) {
  if (domain == Domain::UnitInterval) throw std::invalid_argument("flat_improper is defined on naturals or integers");
  return DiscreteMeasure(std::make_shared<FlatImpl>(domain));
}

MassResult set_mass(const DiscreteMeasure& m, const IndexSet& a, const Truncation& trunc) { return m.mass(a, trunc); }

DiscreteMeasure shift_measure(const DiscreteMeasure& m, std::int64_t k) {
  if (k == 0) return m;
  return DiscreteMeasure(std::make_shared<ShiftedImpl>(m, k));
}

DiscreteMeasure restrict_normalize(const DiscreteMeasure& m, const IndexSet& a) {
  if (m.mass_class() == MassClass::Infinite && !a.is_finite()) {
    throw InfiniteMassError("restriction of improper " + m.family_tag() + " to infinite set " + a.descriptor());
  }
  const MassResult z = m.mass(a);
  if (!(z.value > 0.0)) {
    throw DegenerateError("restriction of " + m.family_tag() + " to " + a.descriptor() + " has zero mass");
  }
  return DiscreteMeasure(std::make_shared<RestrictedImpl>(m, a, z));
}

DiscreteMeasure mixture(std::vector<std::pair<double, DiscreteMeasure>> components, std::string tag) {
  if (components.empty()) throw std::invalid_argument("mixture needs at least one component");
  double total = 0.0;
  bool all_probability = true;
  bool any_infinite = false;
  std::vector<std::pair<double, DiscreteMeasure>> kept;
  for (auto& [w, m] : components) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("mixture weights must be finite and >= 0");
    if (w == 0.0) continue;
    total += w;
    all_probability = all_probability && m.mass_class() == MassClass::Probability;
    any_infinite = any_infinite || m.mass_class() == MassClass::Infinite;
    kept.emplace_back(w, std::move(m));
  }
  if (kept.empty()) throw std::invalid_argument("mixture has zero total weight");
  MassClass cls = MassClass::FiniteNonProb;
  if (any_infinite) {
    cls = MassClass::Infinite;
  } else if (all_probability && std::abs(total - 1.0) <= 1e-12) {
    cls = MassClass::Probability;
  }
  return DiscreteMeasure(std::make_shared<MixtureImpl>(std::move(kept), cls, std::move(tag)));
}

DiscreteMeasure scale_measure(const DiscreteMeasure& m, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("scale factor must be positive");
  if (alpha == 1.0) return m;
  const MassClass cls = m.mass_class() == MassClass::Infinite ? MassClass::Infinite : MassClass::FiniteNonProb;
  return DiscreteMeasure(std::make_shared<ScaledImpl>(m, alpha, cls));
}

MassResult tv_distance(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
  check_probability(m1, "tv_distance");
  check_probability(m2, "tv_distance");
  const Extent w = m1.support().hull(m2.support());
  MassResult out;
  if (!w.empty()) {
    if (w.size() > kEnumerationCeiling) throw EnumerationLimitError("tv_distance window too large");
    CompensatedSum sum;
    for (std::int64_t k = w.lo;; ++k) {
      sum.add(std::abs(m1.weight(k) - m2.weight(k)));
      if (k == w.hi) break;
    }
    out.value = 0.5 * sum.value();
    const double werr = m1.impl().weight_error() + m2.impl().weight_error();
    out.error_bound = werr + 2.0 * kEps * static_cast<double>(sum.terms() + 1);
  }
  out.error_bound += 0.5 * (m1.tail_bound() + m2.tail_bound());
  out.value = std::clamp(out.value, 0.0, 1.0);
  return out;
}

// ---------------------------------------------------------------------------

std::string UnitInterval::descriptor() const {
  return std::string(lo_closed ? "[" : "(") + format_double(lo) + "," + format_double(hi) + (hi_closed ? "]" : ")");
}

ContinuousMeasure::ContinuousMeasure(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

double ContinuousMeasure::density(double x) const { return impl_->density(x); }

double ContinuousMeasure::cdf(double x) const { return impl_->cdf(x); }

MassResult ContinuousMeasure::mass(const UnitInterval& iv) const {
  if (!(iv.lo >= 0.0 && iv.hi <= 1.0 && iv.lo <= iv.hi)) {
    throw std::invalid_argument("interval " + iv.descriptor() + " is not inside [0,1]");
  }
  return impl_->mass(iv);
}

MassClass ContinuousMeasure::mass_class() const { return impl_->mass_class(); }

const std::string& ContinuousMeasure::family_tag() const { return impl_->tag(); }

ContinuousMeasure beta_measure(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("Beta parameters must be positive and finite");
  }
  return ContinuousMeasure(std::make_shared<BetaImpl>(a, b));
}

ContinuousMeasure haldane_measure() { return ContinuousMeasure(std::make_shared<HaldaneImpl>()); }

// ---------------------------------------------------------------------------

MeasureSequence::MeasureSequence(Generator gen, Domain domain, std::string tag)
    : gen_(std::move(gen)), domain_(domain), tag_(std::move(tag)) {}

DiscreteMeasure MeasureSequence::operator()(std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("sequence index must be >= 1");
  return gen_(n);
}

ContinuousSequence::ContinuousSequence(Generator gen, std::string tag) : gen_(std::move(gen)), tag_(std::move(tag)) {}

ContinuousMeasure ContinuousSequence::operator()(std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("sequence index must be >= 1");
  return gen_(n);
}

MeasureSequence poisson_sequence() {
  return MeasureSequence([](std::int64_t n) { return poisson_measure(static_cast<double>(n)); }, Domain::Naturals,
                         "poisson");
}

MeasureSequence uniform_sequence() {
  return MeasureSequence([](std::int64_t n) { return uniform_on(interval(0, n)); }, Domain::Naturals, "uniform");
}

MeasureSequence modified_uniform_sequence() {
  return MeasureSequence(
      [](std::int64_t n) {
        return uniform_on(set_union(progression(0, 2, 2 * n * n), progression(1, 2, 2 * n + 1)));
      },
      Domain::Naturals, "modified_uniform");
}

MeasureSequence constant_sequence(const DiscreteMeasure& m) {
  return MeasureSequence([m](std::int64_t) { return m; }, Domain::Naturals, "constant(" + m.family_tag() + ")");
}

ContinuousSequence beta_sequence(std::function<double(std::int64_t)> a, std::function<double(std::int64_t)> b,
                                 std::string tag) {
  return ContinuousSequence([a = std::move(a), b = std::move(b)](std::int64_t n) { return beta_measure(a(n), b(n)); },
                            std::move(tag));
}

}  // namespace limlab
