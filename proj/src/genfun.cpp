#include "rieszgen/genfun.hpp"

#include <cmath>
#include <string>

#include "rieszgen/calculus.hpp"
#include "rieszgen/error.hpp"
#include "rieszgen/exp_series.hpp"

namespace rieszgen {

namespace {

// Values of a Bernoulli law if the mass function is supported on {0, 1}.
std::optional<Element> bernoulli_parameter(const GenFun& g) {
  if (g.closed_form()) {
    if (const auto* b = std::get_if<BernoulliForm>(&*g.closed_form())) return b->p;
  }
  const auto& m = g.coefficients();
  if (m.kind() != MassFunction::Kind::finite) return std::nullopt;
  const auto top = m.support_max();
  if (!top || *top > 1) return std::nullopt;
  return m.at(1);
}

std::optional<Element> poisson_parameter(const GenFun& g) {
  if (g.closed_form()) {
    if (const auto* p = std::get_if<PoissonForm>(&*g.closed_form())) return p->g;
  }
  if (g.coefficients().kind() == MassFunction::Kind::poisson) return g.coefficients().poisson_parameter();
  return std::nullopt;
}

// (p, n) if g is tagged Bernoulli (n = 1) or Binomial.
std::optional<std::pair<Element, unsigned>> binomial_parameters(const GenFun& g) {
  if (!g.closed_form()) return std::nullopt;
  if (const auto* b = std::get_if<BernoulliForm>(&*g.closed_form())) return std::pair{b->p, 1u};
  if (const auto* b = std::get_if<BinomialForm>(&*g.closed_form())) return std::pair{b->p, b->n};
  return std::nullopt;
}

double falling(unsigned n, unsigned k) {
  double f = 1.0;
  for (unsigned j = 0; j < k; ++j) f *= static_cast<double>(n - j);
  return f;
}

void require_s(double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("generating function argument must be >= 0");
}

}  // namespace

GenFun::GenFun(MassFunction coefficients, std::optional<ClosedForm> closed_form)
    : coeffs_(std::move(coefficients)), closed_(std::move(closed_form)) {}

GenFun GenFun::unit(std::size_t dim) { return GenFun(MassFunction::unit(dim)); }

GenFun GenFun::from_family(const ConditionalTriple& triple, const Family& family) {
  MassFunction m = family_mass_function(triple, family);
  ClosedForm form = std::visit(
      [](const auto& f) -> ClosedForm {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Bernoulli>) return BernoulliForm{f.p};
        else if constexpr (std::is_same_v<T, Binomial>) return BinomialForm{f.n, f.p};
        else return PoissonForm{f.g};
      },
      family);
  return GenFun(std::move(m), std::move(form));
}

GenFun gen_from_element(const ConditionalTriple& triple, const NaturalElement& x) {
  MassFunction m = mass_function(triple, x);
  if (x.max_value() <= 1) {
    Element p = m.at(1);
    return GenFun(std::move(m), BernoulliForm{std::move(p)});
  }
  return GenFun(std::move(m));
}

Element eval_closed_form(const ClosedForm& form, double s) {
  require_s(s);
  return std::visit(
      [s](const auto& f) -> Element {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, BernoulliForm>) {
          return s * f.p + (Element::unit(f.p.dim()) - f.p);
        } else if constexpr (std::is_same_v<T, BinomialForm>) {
          return integer_power(s * f.p + (Element::unit(f.p.dim()) - f.p), f.n);
        } else {
          return exp_element((s - 1.0) * f.g);
        }
      },
      form);
}

Element eval_generalized(const MassFunction& m, const Element& u) {
  require_same_dim(m.dim(), u.dim(), "eval_generalized");
  if (!is_nonnegative(u)) throw DomainError("eval_generalized requires u >= 0");
  const unsigned K = certified_truncation(m, sup_norm(u), 0, kSeriesTolerance);
  const auto coeffs = m.coefficients(K + 1);
  ElementBuilder acc(u.dim());
  ElementBuilder power(u.dim(), 1.0);
  for (unsigned n = 0; n <= K; ++n) {
    for (std::size_t i = 0; i < u.dim(); ++i) {
      acc[i] += coeffs[n][i] * power[i];
      power[i] *= u[i];
    }
  }
  return std::move(acc).build();
}

Element eval_generalized(const GenFun& g, const Element& u) { return eval_generalized(g.coefficients(), u); }

Element eval_series(const GenFun& g, double s) {
  require_s(s);
  return eval_generalized(g.coefficients(), Element::constant(g.dim(), s));
}

Element eval(const GenFun& g, double s) {
  require_s(s);
  if (g.closed_form()) return eval_closed_form(*g.closed_form(), s);
  const auto& m = g.coefficients();
  switch (m.kind()) {
    case MassFunction::Kind::poisson:
      return eval_closed_form(PoissonForm{m.poisson_parameter()}, s);
    case MassFunction::Kind::compound:
      return eval_generalized(m.outer(), eval(GenFun(m.inner()), s));
    case MassFunction::Kind::finite:
      break;
  }
  return eval_series(g, s);
}

Element eval_via_power(const ConditionalTriple& triple, const NaturalElement& x, double s) {
  return triple.expect(power_element(s, x.element()));
}

Element derivative(const GenFun& g, unsigned k, double s) {
  if (!(s >= 0.0 && s < 1.0)) throw DomainError("derivative requires 0 <= s < 1");
  const auto& m = g.coefficients();
  const std::size_t d = g.dim();
  if (s == 0.0) {
    double kfact = 1.0;
    for (unsigned j = 2; j <= k; ++j) kfact *= j;
    return kfact * m.at(k);
  }
  // sum_{n>K} n^(k) s^(n-k) pi(n) <= tail_bound(K, s, k) / s^k
  const unsigned K = certified_truncation(m, s, k, kSeriesTolerance * std::pow(s, k), k);
  const auto coeffs = m.coefficients(K + 1);
  ElementBuilder acc(d);
  double power = 1.0;  // s^(n-k)
  for (unsigned n = k; n <= K; ++n) {
    const double w = falling(n, k) * power;
    for (std::size_t i = 0; i < d; ++i) acc[i] += w * coeffs[n][i];
    power *= s;
  }
  return std::move(acc).build();
}

Element factorial_moment(const GenFun& g, unsigned n) {
  const auto& m = g.coefficients();
  const std::size_t d = g.dim();
  if (const auto top = m.support_max(); top && n > *top) return Element::zero(d);
  const unsigned K = certified_truncation(m, 1.0, n, kSeriesTolerance, n);
  const auto coeffs = m.coefficients(K + 1);
  ElementBuilder acc(d);
  for (unsigned k = n; k <= K; ++k) {
    const double w = falling(k, n);
    for (std::size_t i = 0; i < d; ++i) acc[i] += w * coeffs[k][i];
  }
  return std::move(acc).build();
}

Element mean(const GenFun& g) { return factorial_moment(g, 1); }

Element second_moment(const GenFun& g) { return mean(g) + factorial_moment(g, 2); }

Element variance(const GenFun& g) {
  const Element m = mean(g);
  return second_moment(g) - multiply(m, m);
}

Element mean_via_tail(const ConditionalTriple& triple, const NaturalElement& x) {
  ElementBuilder acc(x.dim());
  for (unsigned n = 1; n <= x.max_value(); ++n) {
    const Element tail = triple.expect(indicator(proj_geq(x.element(), Element::constant(x.dim(), n))));
    for (std::size_t i = 0; i < x.dim(); ++i) acc[i] += tail[i];
  }
  return std::move(acc).build();
}

GenFun product(const GenFun& g1, const GenFun& g2) {
  require_same_dim(g1.dim(), g2.dim(), "product");
  const auto& m1 = g1.coefficients();
  const auto& m2 = g2.coefficients();
  const auto pg1 = poisson_parameter(g1);
  const auto pg2 = poisson_parameter(g2);
  if (m1.kind() == MassFunction::Kind::poisson && m2.kind() == MassFunction::Kind::poisson) {
    Element g = *pg1 + *pg2;
    return GenFun(MassFunction::poisson(g), PoissonForm{g});
  }
  const auto top1 = m1.support_max();
  const auto top2 = m2.support_max();
  if (!top1 || !top2 || m1.kind() != MassFunction::Kind::finite ||
      m2.kind() != MassFunction::Kind::finite) {
    throw DomainError("product: only finitely supported or two Poisson generating functions",
                      "unsupported");
  }
  const std::size_t d = g1.dim();
  const auto& a = m1.finite_coefficients();
  const auto& b = m2.finite_coefficients();
  std::vector<ElementBuilder> acc(a.size() + b.size() - 1, ElementBuilder(d));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      for (std::size_t c = 0; c < d; ++c) acc[i + j][c] += a[i][c] * b[j][c];
    }
  }
  std::vector<Element> coeffs;
  coeffs.reserve(acc.size());
  for (auto& e : acc) coeffs.push_back(std::move(e).build());

  std::optional<ClosedForm> form;
  const auto b1 = binomial_parameters(g1);
  const auto b2 = binomial_parameters(g2);
  if (b1 && b2 && b1->first == b2->first) form = BinomialForm{b1->second + b2->second, b1->first};
  return GenFun(MassFunction::finite(std::move(coeffs)), std::move(form));
}

NaturalElement random_index_element(const ConditionalTriple& triple, const NaturalElement& N,
                                    const std::vector<NaturalElement>& xs) {
  require_same_dim(triple.dim(), N.dim(), "random_index_element");
  if (xs.empty() || xs.front().max_value() != 0) {
    throw PreconditionError("random index: x_0 must be 0", "bad_index_family");
  }
  if (xs.size() <= N.max_value()) {
    throw PreconditionError("random index: missing x_" + std::to_string(xs.size()),
                            "bad_index_family");
  }
  ElementBuilder acc(triple.dim());
  for (unsigned n = 1; n <= N.max_value(); ++n) {
    require_same_dim(triple.dim(), xs[n].dim(), "random_index_element");
    const Element part = apply(level_band(N, n), xs[n].element());
    for (std::size_t i = 0; i < triple.dim(); ++i) acc[i] += part[i];
  }
  return NaturalElement(std::move(acc).build());
}

NaturalElement random_index_sum(const ConditionalTriple& triple, const NaturalElement& N,
                                const std::vector<NaturalElement>& xs) {
  require_same_dim(triple.dim(), N.dim(), "random_index_sum");
  if (xs.empty() || xs.front().max_value() != 0) {
    throw PreconditionError("random index: x_0 must be 0", "bad_index_family");
  }
  if (xs.size() <= N.max_value()) {
    throw PreconditionError("random index: missing x_" + std::to_string(xs.size()),
                            "bad_index_family");
  }
  ElementBuilder acc(triple.dim());
  for (unsigned k = 1; k <= N.max_value(); ++k) {
    require_same_dim(triple.dim(), xs[k].dim(), "random_index_sum");
    const BandProjection at_least_k = proj_geq(N.element(), Element::constant(N.dim(), k));
    const Element part = apply(at_least_k, xs[k].element());
    for (std::size_t i = 0; i < triple.dim(); ++i) acc[i] += part[i];
  }
  return NaturalElement(std::move(acc).build());
}

GenFun compose(const GenFun& gN, const GenFun& gx) {
  require_same_dim(gN.dim(), gx.dim(), "compose");
  if (gx.coefficients().kind() != MassFunction::Kind::finite) {
    throw DomainError("compose: summand law must have finite support", "unsupported");
  }
  std::optional<ClosedForm> form;
  if (const auto p = bernoulli_parameter(gx)) {
    if (const auto g = poisson_parameter(gN)) {
      form = PoissonForm{multiply(*p, *g)};
    } else if (const auto b = binomial_parameters(gN)) {
      form = BinomialForm{b->second, multiply(*p, b->first)};
    }
  }
  return GenFun(MassFunction::compound(gN.coefficients(), gx.coefficients()), std::move(form));
}

Element compound_mean(const GenFun& gN, const GenFun& gx) { return multiply(mean(gN), mean(gx)); }

Element compound_variance(const GenFun& gN, const GenFun& gx) {
  const Element mx = mean(gx);
  return multiply(mean(gN), variance(gx)) + multiply(variance(gN), multiply(mx, mx));
}

GenFun genfun_of_random_index(const GenFun& gN, const GenFun& gx) {
  require_same_dim(gN.dim(), gx.dim(), "genfun_of_random_index");
  if (gx.coefficients().kind() != MassFunction::Kind::finite) {
    throw DomainError("genfun_of_random_index: summand law must have finite support", "unsupported");
  }
  const std::size_t d = gN.dim();
  const Element pi0 = gN.coefficients().at(0);
  const Element rest = Element::unit(d) - pi0;
  std::vector<Element> coeffs;
  for (const auto& q : gx.coefficients().finite_coefficients()) coeffs.push_back(multiply(rest, q));
  coeffs[0] = coeffs[0] + pi0;
  std::optional<ClosedForm> form;
  if (const auto p = bernoulli_parameter(gx)) form = BernoulliForm{multiply(rest, *p)};
  return GenFun(MassFunction::finite(std::move(coeffs)), std::move(form));
}

}  // namespace rieszgen
