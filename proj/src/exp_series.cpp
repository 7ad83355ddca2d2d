#include "rieszgen/exp_series.hpp"

#include <cmath>

#include "rieszgen/error.hpp"

namespace rieszgen {

double exp_series(double x, double rel_tol) {
  if (!std::isfinite(x)) throw DomainError("exp_series: argument not finite");
  const double a = std::fabs(x);
  double sum = 1.0;
  double term = 1.0;
  for (unsigned k = 1;; ++k) {
    term *= a / k;
    sum += term;
    if (!std::isfinite(sum)) throw DomainError("exp_series: overflow", "non_finite");
    const double ratio = a / (k + 2);
    if (ratio < 1.0) {
      const double next = term * a / (k + 1);
      if (next / (1.0 - ratio) <= rel_tol * sum) break;
    }
    if (k > 100000) throw DivergenceError("exp_series: remainder not certified");
  }
  return x < 0.0 ? 1.0 / sum : sum;
}

Element exp_element(const Element& x, double rel_tol) {
  ElementBuilder out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = exp_series(x[i], rel_tol);
  return std::move(out).build();
}

}  // namespace rieszgen
