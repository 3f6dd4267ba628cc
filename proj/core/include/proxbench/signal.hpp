#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace proxbench {

/// Logical grid of a signal: empty for a single block, one extent for a 1-D
/// signal, two extents (rows, cols) for a row-major 2-D image.
class Shape {
 public:
  Shape() = default;
  Shape(std::initializer_list<std::size_t> dims);
  explicit Shape(std::vector<std::size_t> dims);

  static Shape scalar() { return Shape(); }

  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t num_blocks() const noexcept;
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t operator[](std::size_t axis) const { return dims_.at(axis); }

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  std::vector<std::size_t> dims_;
};

/// A point of (R^d)^n: n blocks of d reals stored contiguously. For d = 2 a
/// block is one complex number laid out as (re, im).
class Signal {
 public:
  Signal() = default;
  /// Zero signal.
  Signal(Shape shape, std::size_t block_dim);
  /// Takes ownership of `values`; throws ShapeError on a size mismatch and
  /// NumericError on non-finite entries.
  Signal(Shape shape, std::size_t block_dim, std::vector<double> values);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t num_blocks() const noexcept { return shape_.num_blocks(); }
  std::size_t block_dim() const noexcept { return block_dim_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> block(std::size_t i) noexcept {
    return {values_.data() + i * block_dim_, block_dim_};
  }
  std::span<const double> block(std::size_t i) const noexcept {
    return {values_.data() + i * block_dim_, block_dim_};
  }
  double& operator()(std::size_t i, std::size_t c) noexcept { return values_[i * block_dim_ + c]; }
  double operator()(std::size_t i, std::size_t c) const noexcept {
    return values_[i * block_dim_ + c];
  }

  bool same_layout(const Signal& other) const noexcept {
    return block_dim_ == other.block_dim_ && shape_ == other.shape_;
  }
  bool all_finite() const noexcept;

  Signal& operator+=(const Signal& other);
  Signal& operator-=(const Signal& other);
  Signal& operator*=(double scale) noexcept;

  friend Signal operator+(Signal lhs, const Signal& rhs) { return lhs += rhs; }
  friend Signal operator-(Signal lhs, const Signal& rhs) { return lhs -= rhs; }
  friend Signal operator*(double scale, Signal rhs) { return rhs *= scale; }
  friend Signal operator*(Signal lhs, double scale) { return lhs *= scale; }

  /// Bitwise equality of layout and values.
  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  Shape shape_;
  std::size_t block_dim_ = 0;
  std::vector<double> values_;
};

double dot(const Signal& a, const Signal& b);
double squared_norm(const Signal& a) noexcept;
double norm(const Signal& a) noexcept;
/// y += alpha * x
void axpy(double alpha, const Signal& x, Signal& y);

/// (m+1) signals of identical layout, the lifted variable of the product-space
/// formulation.
class ProductSignal {
 public:
  ProductSignal() = default;
  explicit ProductSignal(std::vector<Signal> blocks);

  static ProductSignal replicate(const Signal& z, std::size_t copies);

  std::size_t num_factors() const noexcept { return blocks_.size(); }
  const Signal& operator[](std::size_t j) const { return blocks_.at(j); }
  Signal& operator[](std::size_t j) { return blocks_.at(j); }
  const std::vector<Signal>& factors() const noexcept { return blocks_; }

  /// Block average (1/(m+1)) sum_j z_j.
  Signal mean() const;
  bool same_layout(const ProductSignal& other) const noexcept;
  bool all_finite() const noexcept;

  ProductSignal& operator+=(const ProductSignal& other);
  ProductSignal& operator-=(const ProductSignal& other);
  ProductSignal& operator*=(double scale) noexcept;

  friend ProductSignal operator+(ProductSignal lhs, const ProductSignal& rhs) { return lhs += rhs; }
  friend ProductSignal operator-(ProductSignal lhs, const ProductSignal& rhs) { return lhs -= rhs; }
  friend ProductSignal operator*(double scale, ProductSignal rhs) { return rhs *= scale; }
  friend ProductSignal operator*(ProductSignal lhs, double scale) { return lhs *= scale; }

  friend bool operator==(const ProductSignal&, const ProductSignal&) = default;

 private:
  std::vector<Signal> blocks_;
};

double dot(const ProductSignal& a, const ProductSignal& b);
double squared_norm(const ProductSignal& a) noexcept;
double norm(const ProductSignal& a) noexcept;

}  // namespace proxbench
