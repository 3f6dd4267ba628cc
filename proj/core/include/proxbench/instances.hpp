#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "proxbench/problem.hpp"
#include "proxbench/signal.hpp"

namespace proxbench {

enum class Family : std::uint8_t { kCdp1D = 0, kCdp2D = 1, kSparseDots = 2, kSrcLoc = 3, kFile = 4, kToy = 5 };

std::string_view to_string(Family family) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;

enum class MaskAlphabet : std::uint8_t {
  kUniform = 0,    // phases uniform on the circle
  kOctanary = 1,   // phases k pi / 4
};

struct InstanceMeta {
  Family family = Family::kToy;
  std::uint64_t seed = 0;
  bool noise = false;
  friend bool operator==(const InstanceMeta&, const InstanceMeta&) = default;
};

struct Instance {
  Problem problem;
  std::optional<Signal> truth;
  InstanceMeta meta;
  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Coded diffraction: m random phase masks followed by a 1-D (rank-1 shape)
/// or 2-D (rank-2 shape) unitary DFT; complex Gaussian truth; m amplitude
/// sets and no qualitative set.
Instance gen_cdp(const Shape& shape, std::size_t m, std::uint64_t seed,
                 MaskAlphabet alphabet = MaskAlphabet::kUniform);

struct SparseDotsParams {
  std::size_t rows = 64;
  std::size_t cols = 64;
  std::size_t dots = 3;
  double s_factor = 1.2;
  double min_height = 0.5;
  double max_height = 1.5;
  double min_width = 1.0;  // full width at half maximum, pixels
  double max_width = 3.0;
  double support_cutoff = 1e-6;  // relative to the peak amplitude

  friend bool operator==(const SparseDotsParams&, const SparseDotsParams&) = default;
};

/// Sum of Gaussian dots on a grid, one Fourier amplitude measurement,
/// C_0 = sparse nonnegative cone with s = ceil(s_factor * ||truth||_0).
/// Throws ShapeError when dots cannot be placed without collisions.
Instance gen_sparse_dots(const SparseDotsParams& params, std::uint64_t seed);

/// Source and m sensors uniform in [0,100]^2; the sets are circles of radius
/// ||truth - a_j|| about the (possibly perturbed) sensor positions.
Instance gen_srcloc(std::size_t m, bool noise, std::uint64_t seed);

/// Per-coordinate standard deviation of the sensor position noise.
inline constexpr double kSrclocNoiseSigma = 2.1213203435596424;  // 3 / sqrt(2)

/// Seeded random starting point suited to the instance family.
Signal random_start(const Instance& instance, std::uint64_t seed);

// Two-dimensional toys (one complex block).

/// Real axis and the line through the origin at `angle`.
Instance toy_two_lines(double angle);
/// Unit circle and the horizontal line Im z = 0.5.
Instance toy_circle_line();
/// Unit circles centered at 0 and 3.
Instance toy_disjoint_circles();

}  // namespace proxbench
