#pragma once

// Natural elements, (T,e)-mass functions and named distribution families.
//
// A natural element x has nonnegative integer coordinates; its mass function
// is pi_x(n) = T P_{x=ne} e and its distribution function is
// F_x(t) = T P_{x<=te} e.

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "rieszgen/conditional.hpp"
#include "rieszgen/element.hpp"

namespace rieszgen {

bool is_natural(const Element& x) noexcept;
inline bool is_natural(const ConditionalTriple&, const Element& x) noexcept { return is_natural(x); }

class NaturalElement {
 public:
  // Throws DomainError("not_natural") unless every coordinate is a
  // nonnegative integer.
  explicit NaturalElement(Element x);

  const Element& element() const noexcept { return element_; }
  std::size_t dim() const noexcept { return element_.dim(); }
  unsigned max_value() const noexcept { return max_value_; }

  friend bool operator==(const NaturalElement&, const NaturalElement&) = default;

 private:
  Element element_;
  unsigned max_value_ = 0;
};

NaturalElement operator+(const NaturalElement& x, const NaturalElement& y);

// P_{x=ne}.
BandProjection level_band(const NaturalElement& x, unsigned n);

Element mass(const ConditionalTriple& triple, const NaturalElement& x, unsigned n);
// F_x(t) = T P_{x<=te} e and F_x(t-) = T P_{x<te} e.
Element cdf(const ConditionalTriple& triple, const Element& x, double t);
Element cdf_left(const ConditionalTriple& triple, const Element& x, double t);

// A coefficient sequence k -> pi(k) of block-constant elements in [0, e].
//
// Finite: an explicit list summing to e. Poisson: g^k e^{-g} / k!.
// Compound: the law of a random sum, pi(k) = sum_n outer(n) inner^{*n}(k)
// with a finitely supported inner law (the result of genfun `compose`).
class MassFunction {
 public:
  enum class Kind { finite, poisson, compound };

  // Throws DomainError unless the coefficients share a dim, lie in [0, e] and
  // sum to e within 1e-12. Trailing zero coefficients are dropped.
  static MassFunction finite(std::vector<Element> coefficients);
  // Throws DomainError unless g > 0.
  static MassFunction poisson(Element g);
  // Throws DomainError unless inner has finite support and dims agree.
  static MassFunction compound(MassFunction outer, MassFunction inner);
  // delta at 0 (the law of x = 0).
  static MassFunction unit(std::size_t dim);

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept;

  // Largest index with a (possibly) nonzero coefficient; empty if infinite.
  std::optional<unsigned> support_max() const noexcept;

  // pi(0), ..., pi(count - 1). Compound coefficients are exact when outer is
  // finite or inner(0) = 0, otherwise accurate to 1e-16 absolute.
  std::vector<Element> coefficients(unsigned count) const;
  Element at(unsigned k) const;

  // Certified sup-norm bound on sum_{k>K} k^moment s^k pi(k) (s >= 0);
  // +infinity when no bound is available at this K.
  double tail_bound(unsigned K, double s, unsigned moment = 0) const;

  // Only for the respective kinds; throw std::logic_error otherwise.
  const std::vector<Element>& finite_coefficients() const;
  const Element& poisson_parameter() const;
  const MassFunction& outer() const;
  const MassFunction& inner() const;

 private:
  MassFunction() = default;

  Kind kind_ = Kind::finite;
  std::vector<Element> coeffs_;
  std::optional<Element> g_;
  std::shared_ptr<const MassFunction> outer_;
  std::shared_ptr<const MassFunction> inner_;
};

// A truncation index K >= start with tail_bound(K, s, moment) <= tol, found
// by a geometric search. Throws DivergenceError beyond the truncation cap.
unsigned certified_truncation(const MassFunction& m, double s, unsigned moment, double tol,
                              unsigned start = 0);

inline constexpr unsigned kMaxTruncation = 1u << 15;

struct Bernoulli {
  Element p;
};
struct Binomial {
  unsigned n;
  Element p;
};
struct Poisson {
  Element g;
};
using Family = std::variant<Bernoulli, Binomial, Poisson>;

// Throws DomainError("bad_parameter") unless p (resp. g) lies in R(T) with
// 0 < p < e (resp. g > 0).
void validate_family(const ConditionalTriple& triple, const Family& family);

Element family_mass(const ConditionalTriple& triple, const Family& family, unsigned k);
MassFunction family_mass_function(const ConditionalTriple& triple, const Family& family);

// pi_x as a finite MassFunction.
MassFunction mass_function(const ConditionalTriple& triple, const NaturalElement& x);

// Equal masses at every n up to the larger max value, within
// kFactorizationTolerance (floating sums over different coordinates need not
// agree to the last bit).
bool equal_in_distribution(const ConditionalTriple& triple, const NaturalElement& x,
                           const NaturalElement& y);

struct BernoulliRealization {
  ConditionalTriple triple;
  Lift base;
  BandProjection band;  // Q with x = Q e and T Q e = p
  NaturalElement x;
};

// Adjoins a two-point factor per block with weights (p_B, 1 - p_B); x marks
// the first outcome.
BernoulliRealization realize_bernoulli(const ConditionalTriple& triple, const Element& p);

struct IidRealization {
  ConditionalTriple triple;
  Lift base;
  std::vector<NaturalElement> elements;
};

// `count` jointly T-independent copies with law `law` (finite kind). Throws
// ResourceError when the state space would exceed max_dim.
IidRealization realize_iid(const ConditionalTriple& triple, const MassFunction& law, unsigned count,
                           std::size_t max_dim = kMaxStateSpace);
IidRealization realize_iid(const ConditionalTriple& triple, const Family& family, unsigned count,
                           std::size_t max_dim = kMaxStateSpace);

// Realizes one more independent element with law `law` on top of an existing
// realization (existing elements are lifted).
IidRealization adjoin(const IidRealization& base, const MassFunction& law,
                      std::size_t max_dim = kMaxStateSpace);

}  // namespace rieszgen
