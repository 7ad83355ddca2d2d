#include "rieszgen/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "rieszgen/error.hpp"

namespace rieszgen {

namespace {

bool close(double a, double b) {
  return std::fabs(a - b) <= kFactorizationTolerance * std::max({1.0, std::fabs(a), std::fabs(b)});
}

bool elements_close(const Element& a, const Element& b) {
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (!close(a[i], b[i])) return false;
  }
  return true;
}

std::vector<double> attained_values(const Element& x) {
  std::vector<double> v(x.values().begin(), x.values().end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

ConditionalTriple::ConditionalTriple(std::vector<double> weights, Partition partition)
    : weights_(std::move(weights)), partition_(std::move(partition)) {
  if (weights_.empty()) throw PreconditionError("triple must have dim >= 1", "bad_weights");
  for (double w : weights_) {
    if (!std::isfinite(w) || !(w > 0.0)) {
      throw PreconditionError("weights must be finite and strictly positive", "bad_weights");
    }
  }
  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  block_of_.assign(weights_.size(), kUnassigned);
  for (std::size_t b = 0; b < partition_.size(); ++b) {
    if (partition_[b].empty()) throw PreconditionError("partition has an empty block", "bad_partition");
    for (std::size_t i : partition_[b]) {
      if (i >= weights_.size()) {
        throw PreconditionError("partition index " + std::to_string(i) + " out of range",
                                "bad_partition");
      }
      if (block_of_[i] != kUnassigned) {
        throw PreconditionError("partition blocks overlap at " + std::to_string(i), "bad_partition");
      }
      block_of_[i] = b;
    }
  }
  if (std::find(block_of_.begin(), block_of_.end(), kUnassigned) != block_of_.end()) {
    throw PreconditionError("partition does not cover every coordinate", "bad_partition");
  }
}

ConditionalTriple ConditionalTriple::discrete(std::size_t dim) {
  Partition p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = {i};
  return ConditionalTriple(std::vector<double>(dim, 1.0), std::move(p));
}

ConditionalTriple ConditionalTriple::trivial(std::size_t dim) {
  Block all(dim);
  for (std::size_t i = 0; i < dim; ++i) all[i] = i;
  return ConditionalTriple(std::vector<double>(dim, 1.0), {all});
}

ConditionalTriple ConditionalTriple::canonical() {
  return ConditionalTriple({1.0, 1.0, 1.0, 1.0}, {{0, 1}, {2, 3}});
}

std::vector<double> ConditionalTriple::probabilities() const {
  double total = 0.0;
  for (double w : weights_) total += w;
  std::vector<double> p(weights_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = weights_[i] / total;
  return p;
}

Element ConditionalTriple::expect(const Element& x) const {
  require_same_dim(dim(), x.dim(), "expect");
  ElementBuilder out(dim());
  for (const Block& block : partition_) {
    double mass = 0.0;
    double acc = 0.0;
    for (std::size_t i : block) {
      mass += weights_[i];
      acc += weights_[i] * x[i];
    }
    const double avg = acc / mass;
    for (std::size_t i : block) out[i] = avg;
  }
  return std::move(out).build();
}

bool ConditionalTriple::in_range(const Element& x) const {
  if (x.dim() != dim()) return false;
  for (const Block& block : partition_) {
    for (std::size_t i : block) {
      if (x[i] != x[block.front()]) return false;
    }
  }
  return true;
}

std::vector<double> ConditionalTriple::block_values(const Element& x) const {
  if (!in_range(x)) throw DomainError("element is not in the range of T", "not_in_range");
  std::vector<double> v(partition_.size());
  for (std::size_t b = 0; b < partition_.size(); ++b) v[b] = x[partition_[b].front()];
  return v;
}

Element ConditionalTriple::from_block_values(const std::vector<double>& values) const {
  require_same_dim(values.size(), partition_.size(), "from_block_values");
  ElementBuilder out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = values[block_of_[i]];
  return std::move(out).build();
}

bool check_projections_independent(const ConditionalTriple& triple,
                                   const std::vector<BandProjection>& projections) {
  if (projections.size() > kMaxIndependenceFamily) {
    throw ResourceError("independence check limited to " + std::to_string(kMaxIndependenceFamily) +
                        " projections");
  }
  const std::size_t d = triple.dim();
  for (const auto& p : projections) require_same_dim(d, p.dim(), "check_projections_independent");

  std::vector<Element> marginals;
  marginals.reserve(projections.size());
  for (const auto& p : projections) marginals.push_back(triple.expect(indicator(p)));

  const std::size_t subsets = std::size_t{1} << projections.size();
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    if ((mask & (mask - 1)) == 0) continue;  // singletons factorize trivially
    BandProjection joint = BandProjection::identity(d);
    Element product = Element::unit(d);
    for (std::size_t k = 0; k < projections.size(); ++k) {
      if (mask & (std::size_t{1} << k)) {
        joint = compose(joint, projections[k]);
        product = multiply(product, marginals[k]);
      }
    }
    if (!elements_close(triple.expect(indicator(joint)), product)) return false;
  }
  return true;
}

bool check_elements_independent(const ConditionalTriple& triple, const Element& x, const Element& y) {
  require_same_dim(triple.dim(), x.dim(), "check_elements_independent");
  require_same_dim(triple.dim(), y.dim(), "check_elements_independent");
  const std::size_t d = triple.dim();
  const auto xs = attained_values(x);
  const auto ys = attained_values(y);
  std::vector<BandProjection> x_bands;
  std::vector<Element> x_marg;
  for (double n : xs) {
    x_bands.push_back(proj_eq(x, Element::constant(d, n)));
    x_marg.push_back(triple.expect(indicator(x_bands.back())));
  }
  for (double k : ys) {
    const BandProjection yb = proj_eq(y, Element::constant(d, k));
    const Element y_marg = triple.expect(indicator(yb));
    for (std::size_t a = 0; a < xs.size(); ++a) {
      const Element joint = triple.expect(indicator(compose(x_bands[a], yb)));
      if (!elements_close(joint, multiply(x_marg[a], y_marg))) return false;
    }
  }
  return true;
}

bool check_family_independent(const ConditionalTriple& triple, const std::vector<Element>& family) {
  const std::size_t d = triple.dim();
  std::vector<std::vector<BandProjection>> bands(family.size());
  std::vector<std::vector<Element>> marginals(family.size());
  double tuples = 1.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    require_same_dim(d, family[i].dim(), "check_family_independent");
    for (double v : attained_values(family[i])) {
      bands[i].push_back(proj_eq(family[i], Element::constant(d, v)));
      marginals[i].push_back(triple.expect(indicator(bands[i].back())));
    }
    tuples *= static_cast<double>(bands[i].size());
  }
  if (tuples > static_cast<double>(kMaxStateSpace)) throw ResourceError("too many value tuples to check");

  // Depth-first over value tuples, carrying the joint band and the product of
  // marginals.
  const std::function<bool(std::size_t, const BandProjection&, const Element&)> walk =
      [&](std::size_t i, const BandProjection& joint, const Element& product) {
        if (i == family.size()) return elements_close(triple.expect(indicator(joint)), product);
        for (std::size_t a = 0; a < bands[i].size(); ++a) {
          if (!walk(i + 1, compose(joint, bands[i][a]), multiply(product, marginals[i][a]))) return false;
        }
        return true;
      };
  return walk(0, BandProjection::identity(d), Element::unit(d));
}

MultiplicativityReport check_multiplicativity(const ConditionalTriple& triple, const Element& x,
                                              const Element& y) {
  const Element lhs = triple.expect(multiply(x, y));
  const Element rhs = multiply(triple.expect(x), triple.expect(y));
  MultiplicativityReport report;
  for (std::size_t i = 0; i < lhs.dim(); ++i) {
    if (!close(lhs[i], rhs[i])) {
      report.holds = false;
      report.coordinate = i;
      report.lhs = lhs[i];
      report.rhs = rhs[i];
      break;
    }
  }
  return report;
}

Element Lift::operator()(const Element& x) const {
  require_same_dim(source_dim, x.dim(), "lift");
  ElementBuilder out(source.size());
  for (std::size_t j = 0; j < source.size(); ++j) out[j] = x[source[j]];
  return std::move(out).build();
}

ProductSpace product_space(const ConditionalTriple& t1, const ConditionalTriple& t2) {
  const std::size_t d1 = t1.dim();
  const std::size_t d2 = t2.dim();
  if (d1 > kMaxStateSpace / d2) throw ResourceError("product space exceeds state-space cap");
  std::vector<double> weights(d1 * d2);
  Lift lift1{std::vector<std::size_t>(d1 * d2), d1};
  Lift lift2{std::vector<std::size_t>(d1 * d2), d2};
  for (std::size_t i = 0; i < d1; ++i) {
    for (std::size_t j = 0; j < d2; ++j) {
      weights[i * d2 + j] = t1.weights()[i] * t2.weights()[j];
      lift1.source[i * d2 + j] = i;
      lift2.source[i * d2 + j] = j;
    }
  }
  Partition partition;
  partition.reserve(t1.block_count() * t2.block_count());
  for (const Block& b1 : t1.partition()) {
    for (const Block& b2 : t2.partition()) {
      Block block;
      block.reserve(b1.size() * b2.size());
      for (std::size_t i : b1) {
        for (std::size_t j : b2) block.push_back(i * d2 + j);
      }
      std::sort(block.begin(), block.end());
      partition.push_back(std::move(block));
    }
  }
  return ProductSpace{ConditionalTriple(std::move(weights), std::move(partition)), std::move(lift1),
                      std::move(lift2)};
}

Element Extension::outcome_element(const std::vector<double>& values) const {
  ElementBuilder out(outcome.size());
  for (std::size_t j = 0; j < outcome.size(); ++j) {
    if (outcome[j] >= values.size()) throw DomainError("outcome_element: missing outcome value");
    out[j] = values[outcome[j]];
  }
  return std::move(out).build();
}

Extension extend(const ConditionalTriple& triple,
                 const std::vector<std::vector<double>>& factor_weights, std::size_t max_dim) {
  require_same_dim(triple.block_count(), factor_weights.size(), "extend");
  std::size_t new_dim = 0;
  for (std::size_t b = 0; b < triple.block_count(); ++b) {
    std::size_t positive = 0;
    for (double w : factor_weights[b]) {
      if (!std::isfinite(w) || w < 0.0) {
        throw PreconditionError("factor weights must be finite and nonnegative", "bad_weights");
      }
      if (w > 0.0) ++positive;
    }
    if (positive == 0) throw PreconditionError("factor has no outcome with positive weight", "bad_weights");
    new_dim += positive * triple.partition()[b].size();
    if (new_dim > max_dim) {
      throw ResourceError("extension exceeds state-space cap of " + std::to_string(max_dim));
    }
  }

  std::vector<double> weights;
  weights.reserve(new_dim);
  Lift base{{}, triple.dim()};
  base.source.reserve(new_dim);
  std::vector<std::size_t> outcome;
  outcome.reserve(new_dim);
  std::vector<Block> blocks(triple.block_count());
  for (std::size_t i = 0; i < triple.dim(); ++i) {
    const std::size_t b = triple.block_of(i);
    const auto& fw = factor_weights[b];
    for (std::size_t c = 0; c < fw.size(); ++c) {
      if (fw[c] == 0.0) continue;
      blocks[b].push_back(weights.size());
      weights.push_back(triple.weights()[i] * fw[c]);
      base.source.push_back(i);
      outcome.push_back(c);
    }
  }
  return Extension{ConditionalTriple(std::move(weights), std::move(blocks)), std::move(base),
                   std::move(outcome)};
}

}  // namespace rieszgen
