#pragma once

// Daniell-style functional calculus on the finite model.
//
// For x in E the spectral system is t -> e_t = P_{x<=te} e. A step function
// f = sum_j c_j 1_{(a_j, b_j]} acts by f(x) = sum_j c_j (e_{b_j} - e_{a_j}).
// General real functions act coordinatewise; on step functions both routes
// agree, which the tests check.

#include <functional>
#include <limits>
#include <vector>

#include "rieszgen/element.hpp"

namespace rieszgen {

// Left-open right-closed interval (lower, upper]; lower may be -inf and
// upper may be +inf.
struct HalfOpenInterval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double t) const noexcept { return lower < t && t <= upper; }
};

struct StepPiece {
  HalfOpenInterval interval;
  double value = 0.0;
};

// Finite linear combination of indicators of pairwise disjoint half-open
// intervals; zero outside the pieces.
class StepFunction {
 public:
  StepFunction() = default;
  // Throws DomainError on overlapping or empty intervals or non-finite values.
  explicit StepFunction(std::vector<StepPiece> pieces);

  static StepFunction indicator(HalfOpenInterval interval, double value = 1.0);

  const std::vector<StepPiece>& pieces() const noexcept { return pieces_; }
  double operator()(double t) const noexcept;

 private:
  std::vector<StepPiece> pieces_;
};

class SpectralSystem {
 public:
  explicit SpectralSystem(const Element& x);

  // Sorted distinct coordinate values of x: the jump points.
  const std::vector<double>& thresholds() const noexcept { return thresholds_; }

  // P_{x<=te}.
  BandProjection at(double t) const;
  // e_t = P_{x<=te} e; t = -inf gives 0, t = +inf gives e.
  Element step(double t) const;

 private:
  Element x_;
  std::vector<double> thresholds_;
};

SpectralSystem spectral_system(const Element& x);

Element apply_step(const StepFunction& f, const Element& x);

using RealFunction = std::function<double(double)>;

// Coordinatewise f(x_i). Throws DomainError if f is not finite at some x_i.
Element apply_fn(const RealFunction& f, const Element& x);

// Coordinatewise s^{x_i} with 0^0 = 1. Throws DomainError for s < 0 or for
// s = 0 with a negative coordinate.
Element power_element(double s, const Element& x);

// Coordinatewise u_i^n for an integer exponent n >= 0 (u^0 = e).
Element integer_power(const Element& u, unsigned n);

}  // namespace rieszgen
