#include "rieszgen/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rieszgen/error.hpp"

namespace rieszgen {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

StepFunction::StepFunction(std::vector<StepPiece> pieces) : pieces_(std::move(pieces)) {
  for (const auto& p : pieces_) {
    if (std::isnan(p.interval.lower) || std::isnan(p.interval.upper) ||
        !(p.interval.lower < p.interval.upper) || p.interval.lower == kInf ||
        p.interval.upper == -kInf) {
      throw DomainError("step function interval must satisfy lower < upper", "bad_interval");
    }
    if (!std::isfinite(p.value)) throw DomainError("step function value must be finite", "non_finite");
  }
  std::vector<StepPiece> sorted = pieces_;
  std::sort(sorted.begin(), sorted.end(), [](const StepPiece& a, const StepPiece& b) {
    return a.interval.lower < b.interval.lower;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].interval.lower < sorted[i - 1].interval.upper) {
      throw DomainError("step function intervals overlap", "bad_interval");
    }
  }
}

StepFunction StepFunction::indicator(HalfOpenInterval interval, double value) {
  return StepFunction({StepPiece{interval, value}});
}

double StepFunction::operator()(double t) const noexcept {
  for (const auto& p : pieces_) {
    if (p.interval.contains(t)) return p.value;
  }
  return 0.0;
}

SpectralSystem::SpectralSystem(const Element& x) : x_(x) {
  thresholds_.assign(x.values().begin(), x.values().end());
  std::sort(thresholds_.begin(), thresholds_.end());
  thresholds_.erase(std::unique(thresholds_.begin(), thresholds_.end()), thresholds_.end());
}

BandProjection SpectralSystem::at(double t) const {
  std::vector<std::uint8_t> mask(x_.dim());
  for (std::size_t i = 0; i < x_.dim(); ++i) mask[i] = x_[i] <= t ? 1 : 0;
  return BandProjection(std::move(mask));
}

Element SpectralSystem::step(double t) const { return indicator(at(t)); }

SpectralSystem spectral_system(const Element& x) { return SpectralSystem(x); }

Element apply_step(const StepFunction& f, const Element& x) {
  const SpectralSystem system(x);
  ElementBuilder out(x.dim());
  for (const auto& piece : f.pieces()) {
    const Element jump = system.step(piece.interval.upper) - system.step(piece.interval.lower);
    for (std::size_t i = 0; i < x.dim(); ++i) out[i] += piece.value * jump[i];
  }
  return std::move(out).build();
}

Element apply_fn(const RealFunction& f, const Element& x) {
  ElementBuilder out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double v = f(x[i]);
    if (!std::isfinite(v)) {
      throw DomainError("function is not finite at " + std::to_string(x[i]));
    }
    out[i] = v;
  }
  return std::move(out).build();
}

Element power_element(double s, const Element& x) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("power_element: base must be >= 0");
  if (s == 0.0 && !is_nonnegative(x)) {
    throw DomainError("power_element: 0^x requires x >= 0");
  }
  ElementBuilder out(x.dim());
  // std::pow(0, 0) == 1 already.
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = std::pow(s, x[i]);
  return std::move(out).build();
}

Element integer_power(const Element& u, unsigned n) {
  ElementBuilder out(u.dim(), 1.0);
  for (std::size_t i = 0; i < u.dim(); ++i) {
    double acc = 1.0;
    for (unsigned k = 0; k < n; ++k) acc *= u[i];
    out[i] = acc;
  }
  return std::move(out).build();
}

}  // namespace rieszgen
