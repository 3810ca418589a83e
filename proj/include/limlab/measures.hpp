#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "limlab/index_set.hpp"

namespace limlab {

enum class MassClass { Probability, FiniteNonProb, Infinite };
enum class Domain { Naturals, Integers, UnitInterval };

std::string to_string(MassClass c);
std::string to_string(Domain d);

/// A mass together with a certified bound on its absolute error.
struct MassResult {
  double value = 0.0;
  double error_bound = 0.0;
};

/// Explicit window a mass query is restricted to. The default covers ℤ;
/// Infinite-class measures need either a finite set or a bounded window.
struct Truncation {
  Extent window = Extent::all();

  static Truncation to(std::int64_t lo, std::int64_t hi) { return Truncation{Extent{lo, hi}}; }
};

/// A nonnegative weight function on ℤ with a mass-class tag.
///
/// Values are immutable and share their implementation; copying is cheap
/// and evaluation is safe from concurrent threads.
class DiscreteMeasure {
 public:
  class Impl;

  explicit DiscreteMeasure(std::shared_ptr<const Impl> impl);

  double weight(std::int64_t k) const;
  /// Σ_{k ∈ A ∩ window} weight(k) with an error certificate.
  MassResult mass(const IndexSet& a, const Truncation& trunc = {}) const;
  /// Mass of ℤ. Throws InfiniteMassError for improper measures.
  MassResult total_mass() const;
  /// Window outside which the weight is zero or below tail_bound() in total.
  Extent support() const;
  double tail_bound() const;
  MassClass mass_class() const;
  const std::string& family_tag() const;

  const Impl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

class DiscreteMeasure::Impl {
 public:
  Impl(MassClass cls, std::string tag) : mass_class_(cls), tag_(std::move(tag)) {}
  virtual ~Impl() = default;

  virtual double weight(std::int64_t k) const = 0;
  virtual Extent support() const = 0;
  virtual double tail_bound() const { return 0.0; }
  /// Relative error of a single weight evaluation.
  virtual double weight_error() const { return 0.0; }
  /// Mass of A ∩ window. The default sums weights over support ∩ window ∩ A.
  virtual MassResult mass(const IndexSet& a, Extent window) const;

  MassClass mass_class() const { return mass_class_; }
  const std::string& tag() const { return tag_; }

 private:
  MassClass mass_class_;
  std::string tag_;
};

// Families.
DiscreteMeasure poisson_measure(double mean);
DiscreteMeasure uniform_on(const IndexSet& points);
DiscreteMeasure uniform_on(std::vector<std::int64_t> points);
DiscreteMeasure dirac(std::int64_t point);
DiscreteMeasure flat_improper(Domain domain);

// Derived measures.
MassResult set_mass(const DiscreteMeasure& m, const IndexSet& a, const Truncation& trunc = {});
/// The measure A ↦ m(A + k).
DiscreteMeasure shift_measure(const DiscreteMeasure& m, std::int64_t k);
/// The probability measure 𝟙_A m / m(A).
DiscreteMeasure restrict_normalize(const DiscreteMeasure& m, const IndexSet& a);
/// Σ w_i m_i; weights must be nonnegative.
DiscreteMeasure mixture(std::vector<std::pair<double, DiscreteMeasure>> components, std::string tag = "mixture");
/// α·m for α > 0.
DiscreteMeasure scale_measure(const DiscreteMeasure& m, double alpha);

/// Total-variation distance ½ Σ |w1 − w2| between two probability measures.
MassResult tv_distance(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

// ---------------------------------------------------------------------------
// Measures on (0, 1).

/// Sub-interval of [0, 1] with open/closed ends.
struct UnitInterval {
  double lo = 0.0;
  double hi = 1.0;
  bool lo_closed = false;
  bool hi_closed = false;

  std::string descriptor() const;
};

class ContinuousMeasure {
 public:
  class Impl;

  explicit ContinuousMeasure(std::shared_ptr<const Impl> impl);

  double density(double x) const;
  /// Distribution function on [0, 1]. Throws InfiniteMassError for improper measures.
  double cdf(double x) const;
  MassResult mass(const UnitInterval& iv) const;
  MassClass mass_class() const;
  const std::string& family_tag() const;

 private:
  std::shared_ptr<const Impl> impl_;
};

class ContinuousMeasure::Impl {
 public:
  Impl(MassClass cls, std::string tag) : mass_class_(cls), tag_(std::move(tag)) {}
  virtual ~Impl() = default;
  virtual double density(double x) const = 0;
  virtual double cdf(double x) const = 0;
  virtual MassResult mass(const UnitInterval& iv) const = 0;

  MassClass mass_class() const { return mass_class_; }
  const std::string& tag() const { return tag_; }

 private:
  MassClass mass_class_;
  std::string tag_;
};

/// Beta(a, b) on (0, 1); cdf is the regularized incomplete beta.
ContinuousMeasure beta_measure(double a, double b);
/// The improper density 1 / (x (1 − x)).
ContinuousMeasure haldane_measure();

// ---------------------------------------------------------------------------
// Sequences.

/// A lazily evaluated family n ↦ πₙ of proper measures, n >= 1.
class MeasureSequence {
 public:
  using Generator = std::function<DiscreteMeasure(std::int64_t)>;

  MeasureSequence(Generator gen, Domain domain, std::string tag);

  DiscreteMeasure operator()(std::int64_t n) const;
  Domain domain() const { return domain_; }
  const std::string& tag() const { return tag_; }

 private:
  Generator gen_;
  Domain domain_;
  std::string tag_;
};

class ContinuousSequence {
 public:
  using Generator = std::function<ContinuousMeasure(std::int64_t)>;

  ContinuousSequence(Generator gen, std::string tag);

  ContinuousMeasure operator()(std::int64_t n) const;
  const std::string& tag() const { return tag_; }

 private:
  Generator gen_;
  std::string tag_;
};

/// Poisson(n).
MeasureSequence poisson_sequence();
/// Uniform on {0, ..., n}.
MeasureSequence uniform_sequence();
/// Uniform on {2k : k <= n²} ∪ {2k+1 : k <= n}.
MeasureSequence modified_uniform_sequence();
/// πₙ = m for every n.
MeasureSequence constant_sequence(const DiscreteMeasure& m);
/// Beta(a(n), b(n)).
ContinuousSequence beta_sequence(std::function<double(std::int64_t)> a, std::function<double(std::int64_t)> b,
                                 std::string tag = "beta");

}  // namespace limlab
