#pragma once

// The concrete Dedekind complete Riesz space E = R^d with the componentwise
// order, weak order unit e = (1, ..., 1), and componentwise multiplication as
// the f-algebra product with unit e.
//
// Band projections are coordinate masks. The band generated by x is its
// support; comparison projections P_{x>=y}, P_{x>y}, P_{x=y} are the masks
// of the corresponding coordinatewise predicates (exact floating point
// comparison).

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace rieszgen {

class Element {
 public:
  // Throws DomainError if empty or any entry is not finite.
  explicit Element(std::vector<double> values);
  Element(std::initializer_list<double> values);

  static Element zero(std::size_t dim);
  static Element unit(std::size_t dim);
  static Element constant(std::size_t dim, double c);

  std::size_t dim() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  const double* data() const noexcept { return values_.data(); }

  friend bool operator==(const Element&, const Element&) = default;

 private:
  std::vector<double> values_;
};

// Mutable scratch buffer that finalizes into an Element (finiteness checked
// once at the end).
class ElementBuilder {
 public:
  explicit ElementBuilder(std::size_t dim, double fill = 0.0) : values_(dim, fill) {}
  explicit ElementBuilder(const Element& x) : values_(x.values().begin(), x.values().end()) {}

  std::size_t dim() const noexcept { return values_.size(); }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double* data() noexcept { return values_.data(); }

  Element build() &&;

 private:
  std::vector<double> values_;
};

class BandProjection {
 public:
  explicit BandProjection(std::vector<std::uint8_t> mask);

  static BandProjection identity(std::size_t dim);
  static BandProjection zero(std::size_t dim);

  std::size_t dim() const noexcept { return mask_.size(); }
  bool contains(std::size_t i) const noexcept { return mask_[i] != 0; }
  std::span<const std::uint8_t> mask() const noexcept { return mask_; }
  std::size_t count() const noexcept;

  friend bool operator==(const BandProjection&, const BandProjection&) = default;

 private:
  std::vector<std::uint8_t> mask_;
};

// Lattice operations. All throw DimensionMismatch on differing dims.
Element sup(const Element& x, const Element& y);
Element inf(const Element& x, const Element& y);
Element abs(const Element& x);
Element pos_part(const Element& x);
Element neg_part(const Element& x);

Element operator+(const Element& x, const Element& y);
Element operator-(const Element& x, const Element& y);
Element operator-(const Element& x);
Element operator*(double c, const Element& x);

// f-algebra product; multiply(x, e) == x.
Element multiply(const Element& x, const Element& y);

// Componentwise x <= y.
bool leq(const Element& x, const Element& y);
bool is_nonnegative(const Element& x) noexcept;

// sup_i |x_i|, i.e. inf{b : |x| <= b e}.
double sup_norm(const Element& x) noexcept;

BandProjection band_of(const Element& x);
BandProjection proj_geq(const Element& x, const Element& y);
BandProjection proj_gt(const Element& x, const Element& y);
BandProjection proj_eq(const Element& x, const Element& y);
inline BandProjection proj_leq(const Element& x, const Element& y) { return proj_geq(y, x); }
inline BandProjection proj_lt(const Element& x, const Element& y) { return proj_gt(y, x); }

Element apply(const BandProjection& p, const Element& x);
BandProjection complement(const BandProjection& p);
BandProjection compose(const BandProjection& p, const BandProjection& q);

// P e, the component of e in the band of P.
Element indicator(const BandProjection& p);

void require_same_dim(std::size_t a, std::size_t b, const char* where);

}  // namespace rieszgen
