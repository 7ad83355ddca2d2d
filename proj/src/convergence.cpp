#include "rieszgen/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "rieszgen/calculus.hpp"
#include "rieszgen/error.hpp"

namespace rieszgen {

namespace {

double distance(const Element& a, const Element& b) { return sup_norm(a - b); }

void require_nonnegative(const Element& x, const char* what) {
  if (!is_nonnegative(x)) throw PreconditionError(std::string(what) + ": negative term");
}

// Report for a precomputed list of distances d_1..d_H from the limit.
ConvergenceReport report_from_distances(Element limit, const std::vector<double>& dist, double tol) {
  ConvergenceReport r{std::move(limit), std::vector<double>(dist.size()), false, std::nullopt};
  double running = 0.0;
  for (std::size_t n = dist.size(); n-- > 0;) {
    running = std::max(running, dist[n]);
    r.tail_sup[n] = running;
  }
  if (dist.empty()) return r;
  // Every term in the second half of the prefix must be within tol.
  const std::size_t half = dist.size() / 2;
  r.converged = r.tail_sup[half] < tol;
  const double a = r.tail_sup[half];
  const double b = r.tail_sup.back();
  if (half > 0 && a > 0.0 && b > 0.0) {
    r.rate_estimate = std::log(a / b) / std::log(static_cast<double>(dist.size()) / (half + 1));
  }
  return r;
}

}  // namespace

ElementSequence::ElementSequence(std::vector<Element> terms)
    : terms_(std::move(terms)), capacity_(terms_.size()) {}

ElementSequence::ElementSequence(Generator generator, std::size_t capacity)
    : generator_(std::move(generator)), capacity_(capacity) {}

Element ElementSequence::term(std::size_t n) const {
  if (n == 0 || n > capacity_) throw std::out_of_range("sequence index out of range");
  if (n <= terms_.size()) return terms_[n - 1];
  return generator_(n);
}

std::size_t ElementSequence::capacity() const noexcept { return capacity_; }

ConvergenceReport order_converges(const ElementSequence& seq, const Element& limit, double tol,
                                  std::size_t horizon) {
  if (horizon > seq.capacity()) throw std::out_of_range("horizon exceeds sequence capacity");
  std::vector<double> dist(horizon);
  for (std::size_t n = 1; n <= horizon; ++n) dist[n - 1] = distance(seq.term(n), limit);
  return report_from_distances(limit, dist, tol);
}

Element series_sum(const DoubleFamily& family, double tol) {
  if (!std::isfinite(family.tail_bound) || family.tail_bound > tol) {
    throw DivergenceError("double series tail not certified below tolerance");
  }
  if (family.rows == 0 || family.cols == 0) throw DomainError("empty double family");
  std::optional<ElementBuilder> acc;
  for (std::size_t t = 0; t + 1 < family.rows + family.cols; ++t) {
    for (std::size_t i = 0; i <= t && i < family.rows; ++i) {
      const std::size_t j = t - i;
      if (j >= family.cols) continue;
      const Element x = family.term(i, j);
      require_nonnegative(x, "series_sum");
      if (!acc) acc.emplace(x.dim());
      for (std::size_t c = 0; c < x.dim(); ++c) (*acc)[c] += x[c];
    }
  }
  return std::move(*acc).build();
}

FubiniReport fubini_check(const DoubleFamily& family, double tol) {
  Element diag = series_sum(family, tol);
  const std::size_t d = diag.dim();
  std::vector<ElementBuilder> row_sums(family.rows, ElementBuilder(d));
  std::vector<ElementBuilder> col_sums(family.cols, ElementBuilder(d));
  for (std::size_t i = 0; i < family.rows; ++i) {
    for (std::size_t j = 0; j < family.cols; ++j) {
      const Element x = family.term(i, j);
      for (std::size_t c = 0; c < d; ++c) {
        row_sums[i][c] += x[c];
        col_sums[j][c] += x[c];
      }
    }
  }
  ElementBuilder rows(d);
  for (std::size_t i = 0; i < family.rows; ++i) {
    for (std::size_t c = 0; c < d; ++c) rows[c] += row_sums[i][c];
  }
  ElementBuilder cols(d);
  for (std::size_t j = 0; j < family.cols; ++j) {
    for (std::size_t c = 0; c < d; ++c) cols[c] += col_sums[j][c];
  }
  FubiniReport r{std::move(rows).build(), std::move(cols).build(), std::move(diag), false};
  const double scale = std::max(1.0, sup_norm(r.by_diagonals));
  const double slack = tol * scale + 2.0 * family.tail_bound;
  r.agree = distance(r.by_rows, r.by_diagonals) <= slack && distance(r.by_columns, r.by_diagonals) <= slack;
  return r;
}

namespace {

LimitCheckReport limit_of_sums(const NetFamily& family, double tol) {
  std::vector<Element> sums;
  sums.reserve(family.alphas);
  for (std::size_t a = 1; a <= family.alphas; ++a) {
    std::optional<ElementBuilder> acc;
    for (std::size_t n = 0; n < family.terms; ++n) {
      const Element x = family.term(a, n);
      if (!acc) acc.emplace(x.dim());
      for (std::size_t c = 0; c < x.dim(); ++c) (*acc)[c] += x[c];
    }
    sums.push_back(std::move(*acc).build());
  }
  std::optional<ElementBuilder> lim;
  for (std::size_t n = 0; n < family.terms; ++n) {
    const Element x = family.limit(n);
    if (!lim) lim.emplace(x.dim());
    for (std::size_t c = 0; c < x.dim(); ++c) (*lim)[c] += x[c];
  }
  LimitCheckReport r{true, {},
                     order_converges(ElementSequence(std::move(sums)), std::move(*lim).build(), tol, family.alphas),
                     false};
  r.passes = r.convergence.converged;
  return r;
}

LimitCheckReport violated(std::string why) {
  LimitCheckReport r{false, std::move(why), ConvergenceReport{Element::zero(1), {}, false, std::nullopt}, false};
  return r;
}

}  // namespace

LimitCheckReport monotone_limit_check(const NetFamily& family, double tol) {
  if (family.alphas == 0 || family.terms == 0) throw DomainError("empty net family");
  for (std::size_t n = 0; n < family.terms; ++n) {
    Element prev = family.term(1, n);
    if (!is_nonnegative(prev)) return violated("x_alpha(n) must be nonnegative");
    for (std::size_t a = 2; a <= family.alphas; ++a) {
      Element cur = family.term(a, n);
      if (!leq(prev, cur)) return violated("x_alpha(n) must increase in alpha");
      prev = std::move(cur);
    }
  }
  return limit_of_sums(family, tol);
}

LimitCheckReport dominated_limit_check(const NetFamily& family, const std::function<Element(std::size_t)>& dominator,
                                       double dominator_tail, double tol) {
  if (family.alphas == 0 || family.terms == 0) throw DomainError("empty net family");
  if (!std::isfinite(dominator_tail) || dominator_tail < 0.0) {
    return violated("dominator series must be summable");
  }
  for (std::size_t n = 0; n < family.terms; ++n) {
    const Element y = dominator(n);
    for (std::size_t a = 1; a <= family.alphas; ++a) {
      if (!leq(abs(family.term(a, n)), y)) return violated("|x_alpha(n)| must be <= y(n)");
    }
  }
  return limit_of_sums(family, tol + 2.0 * dominator_tail);
}

ConvergenceReport power_limit_check(const ElementSequence& seq, const Element& limit, std::size_t horizon,
                                    double tol) {
  const Element target = exp_element(limit);
  const std::size_t d = limit.dim();
  std::vector<double> dist(horizon);
  for (std::size_t n = 1; n <= horizon; ++n) {
    const Element base = Element::unit(d) + (1.0 / static_cast<double>(n)) * seq.term(n);
    dist[n - 1] = distance(integer_power(base, static_cast<unsigned>(n)), target);
  }
  return report_from_distances(target, dist, tol);
}

ConvergenceReport vanishing_power_check(const ElementSequence& seq, std::size_t horizon, double tol) {
  std::vector<double> dist(horizon);
  std::optional<Element> zero;
  for (std::size_t n = 1; n <= horizon; ++n) {
    const Element x = seq.term(n);
    if (!zero) zero = Element::zero(x.dim());
    dist[n - 1] = sup_norm(integer_power(x, static_cast<unsigned>(n)));
  }
  return report_from_distances(*zero, dist, tol);
}

TDistReport tdist_converges(const MassSequence& seq, const MassFunction& target, unsigned k_max,
                            std::size_t horizon, double tol) {
  const auto want = target.coefficients(k_max + 1);
  std::vector<std::vector<double>> dist(k_max + 1, std::vector<double>(horizon));
  for (std::size_t n = 1; n <= horizon; ++n) {
    const auto have = seq(n).coefficients(k_max + 1);
    for (unsigned k = 0; k <= k_max; ++k) dist[k][n - 1] = distance(have[k], want[k]);
  }
  TDistReport r;
  r.converged = true;
  for (unsigned k = 0; k <= k_max; ++k) {
    r.per_k.push_back(report_from_distances(want[k], dist[k], tol));
    r.converged = r.converged && r.per_k.back().converged;
  }
  return r;
}

EquivalenceReport genfun_equivalence_check(const GenFunSequence& seq, const GenFun& target,
                                           const std::vector<double>& s_grid, unsigned k_max,
                                           std::size_t horizon, double tol) {
  std::vector<Element> target_values;
  for (double s : s_grid) target_values.push_back(eval(target, s));
  const auto target_masses = target.coefficients().coefficients(k_max + 1);

  std::vector<std::vector<double>> gf_dist(s_grid.size(), std::vector<double>(horizon));
  std::vector<std::vector<double>> mass_dist(k_max + 1, std::vector<double>(horizon));
  for (std::size_t n = 1; n <= horizon; ++n) {
    const GenFun g = seq(n);
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
      gf_dist[i][n - 1] = distance(eval(g, s_grid[i]), target_values[i]);
    }
    const auto masses = g.coefficients().coefficients(k_max + 1);
    for (unsigned k = 0; k <= k_max; ++k) mass_dist[k][n - 1] = distance(masses[k], target_masses[k]);
  }
  EquivalenceReport r;
  r.genfun_converges = true;
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    r.genfun_converges = r.genfun_converges && report_from_distances(target_values[i], gf_dist[i], tol).converged;
  }
  r.tdist_converges = true;
  for (unsigned k = 0; k <= k_max; ++k) {
    r.tdist_converges = r.tdist_converges && report_from_distances(target_masses[k], mass_dist[k], tol).converged;
  }
  r.consistent = r.genfun_converges == r.tdist_converges;
  return r;
}

PoissonApproxResult poisson_limit_experiment(const ConditionalTriple& triple, const Element& g,
                                             const std::vector<unsigned>& n_list, unsigned k_max,
                                             unsigned workers) {
  validate_family(triple, Poisson{g});
  const double g_max = sup_norm(g);
  for (unsigned n : n_list) {
    if (n == 0 || !(g_max / n < 1.0)) throw DomainError("poisson-approx requires g/n < e", "bad_parameter");
  }
  const auto blocks = triple.block_count();
  std::vector<double> poisson(static_cast<std::size_t>(k_max + 1) * blocks);
  for (unsigned k = 0; k <= k_max; ++k) {
    const auto v = triple.block_values(family_mass(triple, Poisson{g}, k));
    for (std::size_t b = 0; b < blocks; ++b) poisson[k * blocks + b] = v[b];
  }

  std::vector<std::vector<PoissonApproxRow>> per_n(n_list.size());
  auto work = [&](std::size_t idx) {
    const unsigned n = n_list[idx];
    const Element p = (1.0 / n) * g;
    auto& rows = per_n[idx];
    for (unsigned k = 0; k <= k_max; ++k) {
      const auto v = triple.block_values(family_mass(triple, Binomial{n, p}, k));
      for (std::size_t b = 0; b < blocks; ++b) {
        const double q = poisson[k * blocks + b];
        rows.push_back(PoissonApproxRow{n, k, b, v[b], q, std::fabs(v[b] - q)});
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_list.size())));
  if (count == 1) {
    for (std::size_t i = 0; i < n_list.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < count; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n_list.size(); i += count) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  PoissonApproxResult r;
  r.n_list = n_list;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    double err = 0.0;
    for (const auto& row : per_n[i]) err = std::max(err, row.abs_err);
    r.err.push_back(err);
    r.le_cam_threshold.push_back(g_max * g_max / n_list[i]);
    r.rows.insert(r.rows.end(), per_n[i].begin(), per_n[i].end());
  }
  std::stable_sort(r.rows.begin(), r.rows.end(), [](const PoissonApproxRow& a, const PoissonApproxRow& b) {
    return std::tie(a.n, a.k, a.block) < std::tie(b.n, b.k, b.block);
  });
  r.within_threshold = true;
  for (std::size_t i = 0; i < r.err.size(); ++i) r.within_threshold = r.within_threshold && r.err[i] <= r.le_cam_threshold[i];
  r.strictly_decreasing = true;
  for (std::size_t i = 1; i < r.err.size(); ++i) r.strictly_decreasing = r.strictly_decreasing && r.err[i] < r.err[i - 1];
  return r;
}

CompoundPoissonReport compound_poisson_check(const ConditionalTriple& triple, const Element& g, const Element& p,
                                             unsigned k_max, double tol) {
  const GenFun gN = GenFun::from_family(triple, Poisson{g});
  const GenFun gx = GenFun::from_family(triple, Bernoulli{p});
  const auto compound = compose(gN, gx).coefficients().coefficients(k_max + 1);
  const Poisson thinned{multiply(p, g)};
  CompoundPoissonReport r;
  for (unsigned k = 0; k <= k_max; ++k) {
    r.max_abs_err = std::max(r.max_abs_err, distance(compound[k], family_mass(triple, thinned, k)));
  }
  r.matches = r.max_abs_err <= tol;
  return r;
}

}  // namespace rieszgen
