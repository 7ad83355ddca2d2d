#pragma once

#include "rieszgen/element.hpp"

namespace rieszgen {

// exp(x) = sup_n sum_{k<=n} x^k / k!, evaluated per coordinate.
//
// Partial sums run over |x_i| and stop once the geometric bound on the
// remainder, t_{K+1} / (1 - |x_i| / (K + 2)), falls below rel_tol times the
// partial sum. Negative coordinates use exp(x) = 1 / exp(-x), which avoids the
// cancellation of the alternating series.
Element exp_element(const Element& x, double rel_tol = 1e-16);

double exp_series(double x, double rel_tol = 1e-16);

}  // namespace rieszgen
