#include "proxbench/signal.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "proxbench/error.hpp"

namespace proxbench {

Shape::Shape(std::initializer_list<std::size_t> dims) : Shape(std::vector<std::size_t>(dims)) {}

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.size() > 2) throw ShapeError("shape rank must be 0, 1 or 2");
  for (auto extent : dims_) {
    if (extent == 0) throw ShapeError("shape extents must be positive");
  }
}

std::size_t Shape::num_blocks() const noexcept {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
}

namespace {

void check_block_dim(std::size_t d) {
  if (d < 1 || d > 3) throw ShapeError("block dimension must be 1, 2 or 3, got " + std::to_string(d));
}

void require_same(const Signal& a, const Signal& b) {
  if (!a.same_layout(b)) throw ShapeError("signal layouts differ");
}

}  // namespace

Signal::Signal(Shape shape, std::size_t block_dim)
    : shape_(std::move(shape)), block_dim_(block_dim) {
  check_block_dim(block_dim_);
  values_.assign(shape_.num_blocks() * block_dim_, 0.0);
}

Signal::Signal(Shape shape, std::size_t block_dim, std::vector<double> values)
    : shape_(std::move(shape)), block_dim_(block_dim), values_(std::move(values)) {
  check_block_dim(block_dim_);
  if (values_.size() != shape_.num_blocks() * block_dim_) {
    throw ShapeError("signal expects " + std::to_string(shape_.num_blocks() * block_dim_) +
                     " values, got " + std::to_string(values_.size()));
  }
  if (!all_finite()) throw NumericError("signal contains non-finite values");
}

bool Signal::all_finite() const noexcept {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Signal& Signal::operator+=(const Signal& other) {
  require_same(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Signal& Signal::operator-=(const Signal& other) {
  require_same(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

Signal& Signal::operator*=(double scale) noexcept {
  for (double& v : values_) v *= scale;
  return *this;
}

double dot(const Signal& a, const Signal& b) {
  require_same(a, b);
  const auto x = a.values();
  const auto y = b.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) sum += x[k] * y[k];
  return sum;
}

double squared_norm(const Signal& a) noexcept {
  double sum = 0.0;
  for (double v : a.values()) sum += v * v;
  return sum;
}

double norm(const Signal& a) noexcept { return std::sqrt(squared_norm(a)); }

void axpy(double alpha, const Signal& x, Signal& y) {
  require_same(x, y);
  const auto src = x.values();
  auto dst = y.values();
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] += alpha * src[k];
}

ProductSignal::ProductSignal(std::vector<Signal> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ShapeError("product signal needs at least one factor");
  for (const auto& b : blocks_) {
    if (!b.same_layout(blocks_.front())) throw ShapeError("product signal factors differ in layout");
  }
}

ProductSignal ProductSignal::replicate(const Signal& z, std::size_t copies) {
  return ProductSignal(std::vector<Signal>(copies, z));
}

Signal ProductSignal::mean() const {
  Signal avg = blocks_.front();
  for (std::size_t j = 1; j < blocks_.size(); ++j) avg += blocks_[j];
  avg *= 1.0 / static_cast<double>(blocks_.size());
  return avg;
}

bool ProductSignal::same_layout(const ProductSignal& other) const noexcept {
  return blocks_.size() == other.blocks_.size() &&
         (blocks_.empty() || blocks_.front().same_layout(other.blocks_.front()));
}

bool ProductSignal::all_finite() const noexcept {
  for (const auto& b : blocks_) {
    if (!b.all_finite()) return false;
  }
  return true;
}

ProductSignal& ProductSignal::operator+=(const ProductSignal& other) {
  if (!same_layout(other)) throw ShapeError("product signal layouts differ");
  for (std::size_t j = 0; j < blocks_.size(); ++j) blocks_[j] += other.blocks_[j];
  return *this;
}

ProductSignal& ProductSignal::operator-=(const ProductSignal& other) {
  if (!same_layout(other)) throw ShapeError("product signal layouts differ");
  for (std::size_t j = 0; j < blocks_.size(); ++j) blocks_[j] -= other.blocks_[j];
  return *this;
}

ProductSignal& ProductSignal::operator*=(double scale) noexcept {
  for (auto& b : blocks_) b *= scale;
  return *this;
}

double dot(const ProductSignal& a, const ProductSignal& b) {
  if (!a.same_layout(b)) throw ShapeError("product signal layouts differ");
  double sum = 0.0;
  for (std::size_t j = 0; j < a.num_factors(); ++j) sum += dot(a[j], b[j]);
  return sum;
}

double squared_norm(const ProductSignal& a) noexcept {
  double sum = 0.0;
  for (const auto& b : a.factors()) sum += squared_norm(b);
  return sum;
}

double norm(const ProductSignal& a) noexcept { return std::sqrt(squared_norm(a)); }

}  // namespace proxbench
