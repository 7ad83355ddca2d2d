#pragma once

// Classical ground truth. A ConditionalTriple is read as a finite probability
// space whose sigma-algebra is generated by the partition; every quantity is
// recomputed by enumerating outcomes, without going through the lattice code.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rieszgen/conditional.hpp"
#include "rieszgen/element.hpp"

namespace rieszgen::oracle {

// A random variable: one real value per outcome.
using RandomVariable = std::vector<double>;
// An event: a membership flag per outcome.
using Event = std::vector<bool>;

struct FiniteProbSpace {
  std::vector<std::string> outcomes;
  std::vector<double> probs;
  std::vector<std::vector<std::size_t>> sigma_blocks;

  std::size_t size() const noexcept { return probs.size(); }
};

FiniteProbSpace from_triple(const ConditionalTriple& triple);

// E[rv | sigma_blocks], as a function on outcomes.
Element cond_expect(const FiniteProbSpace& space, const RandomVariable& rv);
double expect(const FiniteProbSpace& space, const RandomVariable& rv);
double prob(const FiniteProbSpace& space, const Event& event);
Element cond_prob(const FiniteProbSpace& space, const Event& event);

Event level_event(const RandomVariable& x, double level);
Event geq_event(const RandomVariable& x, double level);
Event leq_event(const RandomVariable& x, double level);
Event gt_event(const RandomVariable& x, double level);

// P(x = k | blocks) for k = 0..max(x).
std::vector<Element> distribution(const FiniteProbSpace& space, const RandomVariable& x);
// E[s^x | blocks].
Element genfun(const FiniteProbSpace& space, const RandomVariable& x, double s);
// E[x (x-1) ... (x-n+1) | blocks].
Element factorial_moment(const FiniteProbSpace& space, const RandomVariable& x, unsigned n);
Element cond_variance(const FiniteProbSpace& space, const RandomVariable& x);

// S_N(w) = x_1(w) + ... + x_{N(w)}(w).
RandomVariable random_sum(const RandomVariable& N, const std::vector<RandomVariable>& xs);
// True iff P(A_1 ... A_k | B) = prod P(A_i | B) for every subfamily and block.
bool independent(const FiniteProbSpace& space, const std::vector<Event>& events, double tol);

// Scalar reference laws.
double binomial_pmf(unsigned n, double p, unsigned k);
double poisson_pmf(double g, unsigned k);

struct SimulationResult {
  std::vector<double> block_estimate;
  std::vector<double> block_stderr;
  std::vector<std::uint64_t> block_samples;
  std::vector<bool> excursion;  // |estimate - exact| > 4 stderr
  std::uint64_t samples = 0;
};

// Monte-Carlo estimate of E[rv | B] for every block. Sample i draws its
// outcome from a counter-based stream (seed, i), and partial sums are merged in
// fixed chunk order, so the result does not depend on `workers`.
SimulationResult simulate(const FiniteProbSpace& space, const RandomVariable& rv, std::uint64_t samples,
                          std::uint64_t seed, unsigned workers = 1);

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace rieszgen::oracle
