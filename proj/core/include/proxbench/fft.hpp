#pragma once

#include <cstddef>
#include <span>

namespace proxbench {

enum class FftDirection { kForward, kInverse };

/// In-place unitary DFT of interleaved complex data (re, im, re, im, ...).
/// `dims` holds one extent (1-D transform) or two extents (row-major 2-D
/// transform). Both directions are scaled by 1/sqrt(N), so the transform is
/// an isometry and the inverse is its adjoint.
///
/// Thread-safe: plans are cached process-wide behind a mutex and executed
/// through FFTW's new-array interface.
void unitary_dft(std::span<double> interleaved, std::span<const std::size_t> dims,
                 FftDirection direction);

}  // namespace proxbench
