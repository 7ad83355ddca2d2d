#pragma once

// The conditional expectation operator T of a conditional Riesz triple
// (E, e, T): weighted averaging over the blocks of a partition of the
// coordinates. T is a strictly positive projection with Te = e, and its range
// R(T) is the set of block-constant elements.

#include <cstddef>
#include <optional>
#include <vector>

#include "rieszgen/element.hpp"

namespace rieszgen {

using Block = std::vector<std::size_t>;
using Partition = std::vector<Block>;

// Absolute-or-relative closeness used by the independence and
// multiplicativity checks: |a - b| <= tol * max(1, |a|, |b|).
inline constexpr double kFactorizationTolerance = 1e-12;

class ConditionalTriple {
 public:
  // Throws PreconditionError("bad_weights") for non-positive or non-finite
  // weights and PreconditionError("bad_partition") unless the blocks are
  // nonempty, disjoint and cover {0, ..., dim-1}.
  ConditionalTriple(std::vector<double> weights, Partition partition);

  // Uniform weights, each coordinate its own block (T = I).
  static ConditionalTriple discrete(std::size_t dim);
  // Uniform weights, a single block (T = plain expectation).
  static ConditionalTriple trivial(std::size_t dim);
  // (d = 4, uniform, blocks {0,1}, {2,3}).
  static ConditionalTriple canonical();

  std::size_t dim() const noexcept { return weights_.size(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const Partition& partition() const noexcept { return partition_; }
  std::size_t block_count() const noexcept { return partition_.size(); }
  std::size_t block_of(std::size_t coordinate) const noexcept { return block_of_[coordinate]; }
  // Outcome probabilities: weights normalized to total 1.
  std::vector<double> probabilities() const;

  Element expect(const Element& x) const;
  bool in_range(const Element& x) const;

  // Value of a block-constant element on each block (first coordinate of the
  // block). Throws DomainError if x is not in R(T).
  std::vector<double> block_values(const Element& x) const;
  Element from_block_values(const std::vector<double>& values) const;

  friend bool operator==(const ConditionalTriple&, const ConditionalTriple&) = default;

 private:
  std::vector<double> weights_;
  Partition partition_;
  std::vector<std::size_t> block_of_;
};

// Largest family size accepted by check_projections_independent.
inline constexpr std::size_t kMaxIndependenceFamily = 12;

// True iff T(P_{a1}...P_{ak} e) = T(P_{a1}e)...T(P_{ak}e) for every nonempty
// subfamily. Throws ResourceError if more than kMaxIndependenceFamily
// projections are given.
bool check_projections_independent(const ConditionalTriple& triple,
                                   const std::vector<BandProjection>& projections);

// For natural x, y: factorization over every pair of attained equality bands.
bool check_elements_independent(const ConditionalTriple& triple, const Element& x, const Element& y);

// Joint T-independence of a family of elements with finitely many values:
// factorization over every tuple of attained equality bands. Throws
// ResourceError beyond kMaxStateSpace tuples.
bool check_family_independent(const ConditionalTriple& triple, const std::vector<Element>& family);

struct MultiplicativityReport {
  bool holds = true;
  std::optional<std::size_t> coordinate;  // first offending coordinate
  double lhs = 0.0;                       // T(xy) there
  double rhs = 0.0;                       // (Tx)(Ty) there
};

MultiplicativityReport check_multiplicativity(const ConditionalTriple& triple, const Element& x,
                                              const Element& y);

// Index map from a constructed space back onto one of its factors:
// lift(x)[j] = x[source[j]].
struct Lift {
  std::vector<std::size_t> source;
  std::size_t source_dim = 0;

  Element operator()(const Element& x) const;
};

struct ProductSpace {
  ConditionalTriple triple;
  Lift lift1;
  Lift lift2;
};

// Coordinates (i, j) -> i * d2 + j with weight w1_i w2_j; blocks are the
// products B1 x B2.
ProductSpace product_space(const ConditionalTriple& t1, const ConditionalTriple& t2);

// Default cap on constructed state spaces.
inline constexpr std::size_t kMaxStateSpace = std::size_t{1} << 20;

// Conditional product with a finite factor whose law may depend on the block:
// every coordinate i is split into one coordinate per outcome c with
// factor_weights[block_of(i)][c] > 0, weight w_i * factor_weights[..][c].
// Outcomes with zero weight in a block are omitted there. Blocks stay
// B x (outcomes of B), so the factor is T-independent of everything lifted
// from the base.
struct Extension {
  ConditionalTriple triple;
  Lift base;
  std::vector<std::size_t> outcome;  // factor outcome index of each new coordinate

  // Element on the extended space taking value values[c] on outcome c.
  Element outcome_element(const std::vector<double>& values) const;
};

Extension extend(const ConditionalTriple& triple,
                 const std::vector<std::vector<double>>& factor_weights,
                 std::size_t max_dim = kMaxStateSpace);

}  // namespace rieszgen
