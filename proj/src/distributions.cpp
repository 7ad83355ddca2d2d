#include "rieszgen/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rieszgen/calculus.hpp"
#include "rieszgen/error.hpp"
#include "rieszgen/exp_series.hpp"

namespace rieszgen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSumTolerance = 1e-12;
// Approximation level of compound coefficients when the outer law must be
// truncated.
constexpr double kCompoundTruncation = 1e-17;

// Truncated f-algebra convolution of two coefficient sequences.
std::vector<Element> convolve(const std::vector<Element>& a, const std::vector<Element>& b,
                              std::size_t count, std::size_t dim) {
  std::vector<ElementBuilder> acc(count, ElementBuilder(dim));
  for (std::size_t i = 0; i < a.size() && i < count; ++i) {
    for (std::size_t j = 0; j < b.size() && i + j < count; ++j) {
      auto& out = acc[i + j];
      for (std::size_t c = 0; c < dim; ++c) out[c] += a[i][c] * b[j][c];
    }
  }
  std::vector<Element> out;
  out.reserve(count);
  for (auto& e : acc) out.push_back(std::move(e).build());
  return out;
}

// log of k^m (gs)^k e^{-g} / k!, or -inf when the term vanishes.
double log_poisson_term(double g, double s, unsigned k, unsigned m) {
  if (g * s == 0.0) return -kInf;
  return m * std::log(static_cast<double>(k)) + k * std::log(g * s) - g - std::lgamma(k + 1.0);
}

double poisson_tail_bound(const Element& g, unsigned K, double s, unsigned m) {
  double worst = 0.0;
  for (double gi : g.values()) {
    const unsigned k = K + 1;
    const double log_t = log_poisson_term(gi, s, k, m);
    if (log_t == -kInf) continue;
    const double ratio = std::pow((k + 1.0) / k, m) * gi * s / (k + 1.0);
    if (!(ratio < 1.0)) return kInf;
    worst = std::max(worst, std::exp(log_t) / (1.0 - ratio));
  }
  return worst;
}

}  // namespace

bool is_natural(const Element& x) noexcept {
  for (double v : x.values()) {
    if (!(v >= 0.0) || v != std::floor(v) || v > static_cast<double>(std::numeric_limits<unsigned>::max())) {
      return false;
    }
  }
  return true;
}

NaturalElement::NaturalElement(Element x) : element_(std::move(x)) {
  if (!is_natural(element_)) throw DomainError("element is not natural", "not_natural");
  double m = 0.0;
  for (double v : element_.values()) m = std::max(m, v);
  max_value_ = static_cast<unsigned>(m);
}

NaturalElement operator+(const NaturalElement& x, const NaturalElement& y) {
  return NaturalElement(x.element() + y.element());
}

BandProjection level_band(const NaturalElement& x, unsigned n) {
  return proj_eq(x.element(), Element::constant(x.dim(), n));
}

Element mass(const ConditionalTriple& triple, const NaturalElement& x, unsigned n) {
  return triple.expect(indicator(level_band(x, n)));
}

Element cdf(const ConditionalTriple& triple, const Element& x, double t) {
  std::vector<std::uint8_t> mask(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) mask[i] = x[i] <= t ? 1 : 0;
  return triple.expect(indicator(BandProjection(std::move(mask))));
}

Element cdf_left(const ConditionalTriple& triple, const Element& x, double t) {
  std::vector<std::uint8_t> mask(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) mask[i] = x[i] < t ? 1 : 0;
  return triple.expect(indicator(BandProjection(std::move(mask))));
}

// ---------------------------------------------------------------------------
// MassFunction

MassFunction MassFunction::finite(std::vector<Element> coefficients) {
  if (coefficients.empty()) throw DomainError("finite mass function needs a coefficient");
  const std::size_t d = coefficients.front().dim();
  ElementBuilder total(d);
  for (const auto& c : coefficients) {
    require_same_dim(d, c.dim(), "MassFunction::finite");
    for (std::size_t i = 0; i < d; ++i) {
      if (c[i] < 0.0 || c[i] > 1.0 + kSumTolerance) {
        throw DomainError("mass coefficients must lie in [0, e]", "bad_mass");
      }
      total[i] += c[i];
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (std::fabs(total[i] - 1.0) > kSumTolerance) {
      throw DomainError("mass coefficients must sum to e", "bad_mass");
    }
  }
  while (coefficients.size() > 1 && sup_norm(coefficients.back()) == 0.0) coefficients.pop_back();
  MassFunction m;
  m.kind_ = Kind::finite;
  m.coeffs_ = std::move(coefficients);
  return m;
}

MassFunction MassFunction::poisson(Element g) {
  for (double v : g.values()) {
    if (!(v > 0.0)) throw DomainError("Poisson parameter must satisfy g > 0", "bad_parameter");
  }
  MassFunction m;
  m.kind_ = Kind::poisson;
  m.g_ = std::move(g);
  return m;
}

MassFunction MassFunction::compound(MassFunction outer, MassFunction inner) {
  if (!inner.support_max()) {
    throw DomainError("compound: inner law must have finite support", "unsupported");
  }
  require_same_dim(outer.dim(), inner.dim(), "MassFunction::compound");
  MassFunction m;
  m.kind_ = Kind::compound;
  m.outer_ = std::make_shared<const MassFunction>(std::move(outer));
  m.inner_ = std::make_shared<const MassFunction>(std::move(inner));
  return m;
}

MassFunction MassFunction::unit(std::size_t dim) { return finite({Element::unit(dim)}); }

std::size_t MassFunction::dim() const noexcept {
  switch (kind_) {
    case Kind::finite: return coeffs_.front().dim();
    case Kind::poisson: return g_->dim();
    case Kind::compound: return outer_->dim();
  }
  return 0;
}

std::optional<unsigned> MassFunction::support_max() const noexcept {
  switch (kind_) {
    case Kind::finite:
      return static_cast<unsigned>(coeffs_.size() - 1);
    case Kind::poisson:
      return std::nullopt;
    case Kind::compound: {
      const auto o = outer_->support_max();
      const unsigned i = *inner_->support_max();
      if (i == 0) return 0u;
      if (!o) return std::nullopt;
      return *o * i;
    }
  }
  return std::nullopt;
}

std::vector<Element> MassFunction::coefficients(unsigned count) const {
  const std::size_t d = dim();
  std::vector<Element> out;
  out.reserve(count);
  switch (kind_) {
    case Kind::finite:
      for (unsigned k = 0; k < count; ++k) {
        out.push_back(k < coeffs_.size() ? coeffs_[k] : Element::zero(d));
      }
      return out;
    case Kind::poisson: {
      if (count == 0) return out;
      ElementBuilder term(exp_element(-*g_));
      out.push_back(ElementBuilder(term).build());
      for (unsigned k = 1; k < count; ++k) {
        for (std::size_t i = 0; i < d; ++i) term[i] *= (*g_)[i] / k;
        out.push_back(ElementBuilder(term).build());
      }
      return out;
    }
    case Kind::compound: {
      if (count == 0) return out;
      const unsigned inner_max = *inner_->support_max();
      const auto q = inner_->coefficients(inner_max + 1);
      unsigned n_max;
      if (const auto o = outer_->support_max()) {
        n_max = *o;
      } else if (sup_norm(q[0]) == 0.0) {
        n_max = count - 1;  // S_N >= N, so terms with n >= count vanish
      } else {
        n_max = certified_truncation(*outer_, 1.0, 0, kCompoundTruncation);
      }
      const auto p = outer_->coefficients(n_max + 1);
      std::vector<ElementBuilder> acc(count, ElementBuilder(d));
      std::vector<Element> power{Element::unit(d)};  // q^{*0} = delta_0
      for (unsigned n = 0; n <= n_max; ++n) {
        if (n > 0) power = convolve(power, q, count, d);
        for (std::size_t k = 0; k < power.size(); ++k) {
          for (std::size_t i = 0; i < d; ++i) acc[k][i] += p[n][i] * power[k][i];
        }
      }
      for (auto& a : acc) out.push_back(std::move(a).build());
      return out;
    }
  }
  return out;
}

Element MassFunction::at(unsigned k) const {
  if (kind_ == Kind::finite) return k < coeffs_.size() ? coeffs_[k] : Element::zero(dim());
  return coefficients(k + 1).back();
}

double MassFunction::tail_bound(unsigned K, double s, unsigned moment) const {
  switch (kind_) {
    case Kind::finite: {
      double worst = 0.0;
      for (std::size_t i = 0; i < dim(); ++i) {
        double acc = 0.0;
        for (std::size_t k = static_cast<std::size_t>(K) + 1; k < coeffs_.size(); ++k) {
          acc += std::pow(static_cast<double>(k), moment) * std::pow(s, static_cast<double>(k)) *
                 coeffs_[k][i];
        }
        worst = std::max(worst, acc);
      }
      return worst;
    }
    case Kind::poisson:
      return poisson_tail_bound(*g_, K, s, moment);
    case Kind::compound: {
      // S_N <= M N for inner support max M, hence
      // sum_{k>K} k^m s^k pi(k) <= M^m sum_{n>K/M} n^m max(s,1)^{Mn} outer(n),
      // plus the truncation error of the coefficients themselves.
      const unsigned M = *inner_->support_max();
      if (M == 0) return 0.0;
      const double sM = std::pow(std::max(s, 1.0), M);
      const double outer_tail = outer_->tail_bound(K / M, sM, moment);
      return std::pow(static_cast<double>(M), moment) * outer_tail + kCompoundTruncation;
    }
  }
  return kInf;
}

const std::vector<Element>& MassFunction::finite_coefficients() const {
  if (kind_ != Kind::finite) throw std::logic_error("not a finite mass function");
  return coeffs_;
}

const Element& MassFunction::poisson_parameter() const {
  if (kind_ != Kind::poisson) throw std::logic_error("not a Poisson mass function");
  return *g_;
}

const MassFunction& MassFunction::outer() const {
  if (kind_ != Kind::compound) throw std::logic_error("not a compound mass function");
  return *outer_;
}

const MassFunction& MassFunction::inner() const {
  if (kind_ != Kind::compound) throw std::logic_error("not a compound mass function");
  return *inner_;
}

unsigned certified_truncation(const MassFunction& m, double s, unsigned moment, double tol,
                              unsigned start) {
  if (const auto sm = m.support_max(); sm && *sm <= start) return start;
  for (unsigned K = start; K <= kMaxTruncation; K = K < 8 ? K + 1 : K + K / 4) {
    if (m.tail_bound(K, s, moment) <= tol) return K;
    if (const auto sm = m.support_max(); sm && K >= *sm) return K;
  }
  throw DivergenceError("series tail cannot be certified below " + std::to_string(tol));
}

// ---------------------------------------------------------------------------
// Families

namespace {

void require_open_unit(const ConditionalTriple& triple, const Element& p) {
  if (!triple.in_range(p)) throw DomainError("parameter must lie in R(T)", "bad_parameter");
  for (double v : p.values()) {
    if (!(v > 0.0 && v < 1.0)) throw DomainError("parameter must satisfy 0 < p < e", "bad_parameter");
  }
}

double binomial_coefficient(unsigned n, unsigned k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  // Each partial product is the integer C(n-k+j, j).
  for (unsigned j = 1; j <= k; ++j) c = c * (n - k + j) / j;
  return c;
}

}  // namespace

void validate_family(const ConditionalTriple& triple, const Family& family) {
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Poisson>) {
          if (!triple.in_range(f.g)) throw DomainError("g must lie in R(T)", "bad_parameter");
          for (double v : f.g.values()) {
            if (!(v > 0.0)) throw DomainError("g must satisfy g > 0", "bad_parameter");
          }
        } else {
          require_open_unit(triple, f.p);
        }
      },
      family);
}

Element family_mass(const ConditionalTriple& triple, const Family& family, unsigned k) {
  validate_family(triple, family);
  const std::size_t d = triple.dim();
  const Element e = Element::unit(d);
  return std::visit(
      [&](const auto& f) -> Element {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          if (k == 0) return e - f.p;
          if (k == 1) return f.p;
          return Element::zero(d);
        } else if constexpr (std::is_same_v<T, Binomial>) {
          if (k > f.n) return Element::zero(d);
          return binomial_coefficient(f.n, k) *
                 multiply(integer_power(f.p, k), integer_power(e - f.p, f.n - k));
        } else {
          ElementBuilder ratio(d, 1.0);  // g^k / k!
          for (unsigned j = 1; j <= k; ++j) {
            for (std::size_t i = 0; i < d; ++i) ratio[i] *= f.g[i] / j;
          }
          return multiply(std::move(ratio).build(), exp_element(-f.g));
        }
      },
      family);
}

MassFunction family_mass_function(const ConditionalTriple& triple, const Family& family) {
  validate_family(triple, family);
  if (const auto* p = std::get_if<Poisson>(&family)) return MassFunction::poisson(p->g);
  const unsigned top = std::holds_alternative<Bernoulli>(family) ? 1u : std::get<Binomial>(family).n;
  std::vector<Element> coeffs;
  for (unsigned k = 0; k <= top; ++k) coeffs.push_back(family_mass(triple, family, k));
  return MassFunction::finite(std::move(coeffs));
}

MassFunction mass_function(const ConditionalTriple& triple, const NaturalElement& x) {
  require_same_dim(triple.dim(), x.dim(), "mass_function");
  std::vector<Element> coeffs;
  for (unsigned n = 0; n <= x.max_value(); ++n) coeffs.push_back(mass(triple, x, n));
  return MassFunction::finite(std::move(coeffs));
}

bool equal_in_distribution(const ConditionalTriple& triple, const NaturalElement& x,
                           const NaturalElement& y) {
  const unsigned top = std::max(x.max_value(), y.max_value());
  for (unsigned n = 0; n <= top; ++n) {
    const Element a = mass(triple, x, n);
    const Element b = mass(triple, y, n);
    for (std::size_t i = 0; i < a.dim(); ++i) {
      if (std::fabs(a[i] - b[i]) > kFactorizationTolerance) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Realizations

BernoulliRealization realize_bernoulli(const ConditionalTriple& triple, const Element& p) {
  require_same_dim(triple.dim(), p.dim(), "realize_bernoulli");
  require_open_unit(triple, p);
  const auto pb = triple.block_values(p);
  std::vector<std::vector<double>> factor(pb.size());
  for (std::size_t b = 0; b < pb.size(); ++b) factor[b] = {pb[b], 1.0 - pb[b]};
  Extension ext = extend(triple, factor);
  Element x = ext.outcome_element({1.0, 0.0});
  BandProjection q = band_of(x);
  return BernoulliRealization{std::move(ext.triple), std::move(ext.base), std::move(q),
                              NaturalElement(std::move(x))};
}

IidRealization adjoin(const IidRealization& base, const MassFunction& law, std::size_t max_dim) {
  if (!law.support_max()) {
    throw DomainError("only finitely supported laws can be realized", "unsupported");
  }
  const ConditionalTriple& t = base.triple;
  const bool on_current = law.dim() == t.dim();
  if (!on_current && law.dim() != base.base.source_dim) {
    throw DimensionMismatch("adjoin: law has dim " + std::to_string(law.dim()));
  }
  const auto& coeffs = law.finite_coefficients();
  std::vector<std::vector<double>> factor(t.block_count());
  for (std::size_t b = 0; b < t.block_count(); ++b) {
    const std::size_t j = t.partition()[b].front();
    const std::size_t at = on_current ? j : base.base.source[j];
    for (const auto& c : coeffs) factor[b].push_back(c[at]);
  }
  Extension ext = extend(t, factor, max_dim);

  std::vector<double> values(coeffs.size());
  for (std::size_t c = 0; c < values.size(); ++c) values[c] = static_cast<double>(c);

  IidRealization out{ext.triple, Lift{{}, base.base.source_dim}, {}};
  out.base.source.resize(ext.base.source.size());
  for (std::size_t j = 0; j < ext.base.source.size(); ++j) {
    out.base.source[j] = base.base.source[ext.base.source[j]];
  }
  for (const auto& x : base.elements) out.elements.emplace_back(ext.base(x.element()));
  out.elements.emplace_back(ext.outcome_element(values));
  return out;
}

IidRealization realize_iid(const ConditionalTriple& triple, const MassFunction& law, unsigned count,
                           std::size_t max_dim) {
  require_same_dim(triple.dim(), law.dim(), "realize_iid");
  Lift identity{std::vector<std::size_t>(triple.dim()), triple.dim()};
  for (std::size_t i = 0; i < triple.dim(); ++i) identity.source[i] = i;
  IidRealization r{triple, std::move(identity), {}};
  for (unsigned n = 0; n < count; ++n) r = adjoin(r, law, max_dim);
  return r;
}

IidRealization realize_iid(const ConditionalTriple& triple, const Family& family, unsigned count,
                           std::size_t max_dim) {
  return realize_iid(triple, family_mass_function(triple, family), count, max_dim);
}

}  // namespace rieszgen
