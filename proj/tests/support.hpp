#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <doctest.h>

#include "rieszgen/conditional.hpp"
#include "rieszgen/distributions.hpp"
#include "rieszgen/element.hpp"
#include "rieszgen/oracle.hpp"

namespace testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline rieszgen::Element random_element(Rng& rng, std::size_t dim, double lo = -5.0, double hi = 5.0) {
  std::vector<double> v(dim);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return rieszgen::Element(std::move(v));
}

// Small integers; ties are common.
inline rieszgen::Element random_integer_element(Rng& rng, std::size_t dim, int lo = -3, int hi = 3) {
  std::vector<double> v(dim);
  for (auto& x : v) x = static_cast<double>(std::uniform_int_distribution<int>(lo, hi)(rng));
  return rieszgen::Element(std::move(v));
}

inline rieszgen::NaturalElement random_natural(Rng& rng, std::size_t dim, unsigned max_value) {
  std::vector<double> v(dim);
  for (auto& x : v) x = static_cast<double>(pick(rng, 0, max_value));
  return rieszgen::NaturalElement(rieszgen::Element(std::move(v)));
}

inline rieszgen::ConditionalTriple random_triple(Rng& rng, std::size_t max_dim, std::size_t max_blocks) {
  const std::size_t dim = pick(rng, 1, max_dim);
  const std::size_t blocks = pick(rng, 1, std::min(dim, max_blocks));
  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  rieszgen::Partition partition(blocks);
  for (std::size_t i = 0; i < dim; ++i) partition[i < blocks ? i : pick(rng, 0, blocks - 1)].push_back(order[i]);
  for (auto& b : partition) std::sort(b.begin(), b.end());
  std::vector<double> weights(dim);
  for (auto& w : weights) w = uniform(rng, 0.5, 2.0);
  return rieszgen::ConditionalTriple(std::move(weights), std::move(partition));
}

inline rieszgen::Element random_block_constant(Rng& rng, const rieszgen::ConditionalTriple& t, double lo,
                                               double hi) {
  std::vector<double> v(t.block_count());
  for (auto& x : v) x = uniform(rng, lo, hi);
  return t.from_block_values(v);
}

inline rieszgen::oracle::RandomVariable rv(const rieszgen::Element& x) { return {x.values().begin(), x.values().end()}; }
inline rieszgen::oracle::RandomVariable rv(const rieszgen::NaturalElement& x) { return rv(x.element()); }

// |a_i - b_i| <= tol * max(1, |b_i|) for every i.
inline bool near(const rieszgen::Element& a, const rieszgen::Element& b, double tol = 1e-12) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (!(std::fabs(a[i] - b[i]) <= tol * std::max(1.0, std::fabs(b[i])))) return false;
  }
  return true;
}

inline bool near(double a, double b, double tol = 1e-12) {
  return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b));
}

}  // namespace testing

namespace rieszgen {
// Lets doctest print elements in failure messages.
inline doctest::String toString(const Element& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (i) s += ", ";
    s += std::to_string(x[i]);
  }
  return (s + ")").c_str();
}
}  // namespace rieszgen
