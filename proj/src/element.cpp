#include "rieszgen/element.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rieszgen/error.hpp"
#include "rieszgen/simd/kernels.hpp"

namespace rieszgen {

namespace {

using simd::active_kernels;

Element binary(const Element& x, const Element& y, simd::BinaryKernel kernel, const char* where) {
  require_same_dim(x.dim(), y.dim(), where);
  ElementBuilder out(x.dim());
  kernel(x.data(), y.data(), out.data(), x.dim());
  return std::move(out).build();
}

BandProjection compare(const Element& x, const Element& y, simd::CompareKernel kernel,
                       const char* where) {
  require_same_dim(x.dim(), y.dim(), where);
  std::vector<std::uint8_t> mask(x.dim());
  kernel(x.data(), y.data(), mask.data(), x.dim());
  return BandProjection(std::move(mask));
}

}  // namespace

void require_same_dim(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw DimensionMismatch(std::string(where) + ": dimension " + std::to_string(a) + " vs " +
                            std::to_string(b));
  }
}

Element::Element(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("Element must have dim >= 1");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DomainError("Element entry " + std::to_string(i) + " is not finite", "non_finite");
    }
  }
}

Element::Element(std::initializer_list<double> values) : Element(std::vector<double>(values)) {}

Element Element::zero(std::size_t dim) { return Element(std::vector<double>(dim, 0.0)); }
Element Element::unit(std::size_t dim) { return Element(std::vector<double>(dim, 1.0)); }
Element Element::constant(std::size_t dim, double c) { return Element(std::vector<double>(dim, c)); }

Element ElementBuilder::build() && { return Element(std::move(values_)); }

BandProjection::BandProjection(std::vector<std::uint8_t> mask) : mask_(std::move(mask)) {
  if (mask_.empty()) throw DomainError("BandProjection must have dim >= 1");
  for (auto& m : mask_) m = m ? 1 : 0;
}

BandProjection BandProjection::identity(std::size_t dim) {
  return BandProjection(std::vector<std::uint8_t>(dim, 1));
}

BandProjection BandProjection::zero(std::size_t dim) {
  return BandProjection(std::vector<std::uint8_t>(dim, 0));
}

std::size_t BandProjection::count() const noexcept {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

Element sup(const Element& x, const Element& y) { return binary(x, y, active_kernels().max, "sup"); }
Element inf(const Element& x, const Element& y) { return binary(x, y, active_kernels().min, "inf"); }

Element abs(const Element& x) {
  ElementBuilder out(x.dim());
  active_kernels().abs(x.data(), out.data(), x.dim());
  return std::move(out).build();
}

Element pos_part(const Element& x) { return sup(x, Element::zero(x.dim())); }
Element neg_part(const Element& x) { return sup(-x, Element::zero(x.dim())); }

Element operator+(const Element& x, const Element& y) { return binary(x, y, active_kernels().add, "add"); }
Element operator-(const Element& x, const Element& y) { return binary(x, y, active_kernels().sub, "sub"); }
Element operator-(const Element& x) { return -1.0 * x; }

Element operator*(double c, const Element& x) {
  ElementBuilder out(x.dim());
  active_kernels().scale(c, x.data(), out.data(), x.dim());
  return std::move(out).build();
}

Element multiply(const Element& x, const Element& y) {
  return binary(x, y, active_kernels().mul, "multiply");
}

bool leq(const Element& x, const Element& y) {
  require_same_dim(x.dim(), y.dim(), "leq");
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (!(x[i] <= y[i])) return false;
  }
  return true;
}

bool is_nonnegative(const Element& x) noexcept {
  return std::all_of(x.values().begin(), x.values().end(), [](double v) { return v >= 0.0; });
}

double sup_norm(const Element& x) noexcept {
  double m = 0.0;
  for (double v : x.values()) m = std::max(m, std::fabs(v));
  return m;
}

BandProjection band_of(const Element& x) {
  std::vector<std::uint8_t> mask(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) mask[i] = x[i] != 0.0 ? 1 : 0;
  return BandProjection(std::move(mask));
}

BandProjection proj_geq(const Element& x, const Element& y) {
  return compare(x, y, active_kernels().greater_equal, "proj_geq");
}

BandProjection proj_gt(const Element& x, const Element& y) {
  return compare(x, y, active_kernels().greater, "proj_gt");
}

BandProjection proj_eq(const Element& x, const Element& y) {
  return compare(x, y, active_kernels().equal, "proj_eq");
}

Element apply(const BandProjection& p, const Element& x) {
  require_same_dim(p.dim(), x.dim(), "apply");
  ElementBuilder out(x.dim());
  active_kernels().select(p.mask().data(), x.data(), out.data(), x.dim());
  return std::move(out).build();
}

BandProjection complement(const BandProjection& p) {
  std::vector<std::uint8_t> mask(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) mask[i] = p.contains(i) ? 0 : 1;
  return BandProjection(std::move(mask));
}

BandProjection compose(const BandProjection& p, const BandProjection& q) {
  require_same_dim(p.dim(), q.dim(), "compose");
  std::vector<std::uint8_t> mask(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) mask[i] = (p.contains(i) && q.contains(i)) ? 1 : 0;
  return BandProjection(std::move(mask));
}

Element indicator(const BandProjection& p) { return apply(p, Element::unit(p.dim())); }

}  // namespace rieszgen
