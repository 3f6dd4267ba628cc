#include "proxbench/instances.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "proxbench/error.hpp"

namespace proxbench {
namespace {

constexpr double kBox = 100.0;
constexpr std::size_t kMaxPlacementRetries = 100;

std::vector<double> moduli(const Signal& w) {
  std::vector<double> out(w.num_blocks());
  for (std::size_t i = 0; i < w.num_blocks(); ++i) {
    double sq = 0.0;
    for (double v : w.block(i)) sq += v * v;
    out[i] = std::sqrt(sq);
  }
  return out;
}

ConstraintSet amplitude_of(const MeasurementMap& map, const Signal& truth) {
  return ConstraintSet::amplitude(map, moduli(map.apply(truth)));
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::kCdp1D: return "cdp1d";
    case Family::kCdp2D: return "cdp2d";
    case Family::kSparseDots: return "sparse_dots";
    case Family::kSrcLoc: return "srcloc";
    case Family::kFile: return "file";
    case Family::kToy: return "toy";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  for (auto f : {Family::kCdp1D, Family::kCdp2D, Family::kSparseDots, Family::kSrcLoc, Family::kFile,
                 Family::kToy}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

Instance gen_cdp(const Shape& shape, std::size_t m, std::uint64_t seed, MaskAlphabet alphabet) {
  if (m < 1) throw ShapeError("coded diffraction needs at least one mask");
  if (shape.rank() != 1 && shape.rank() != 2) throw ShapeError("coded diffraction needs a 1-D or 2-D grid");
  const Transform transform = shape.rank() == 1 ? Transform::kDft1D : Transform::kDft2D;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> octant(0, 7);

  Signal truth(shape, 2);
  for (double& v : truth.values()) v = normal(rng);

  std::vector<ConstraintSet> sets;
  sets.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    Signal mask(shape, 2);
    for (std::size_t i = 0; i < mask.num_blocks(); ++i) {
      const double theta =
          alphabet == MaskAlphabet::kOctanary ? octant(rng) * (std::numbers::pi / 4.0) : phase(rng);
      mask(i, 0) = std::cos(theta);
      mask(i, 1) = std::sin(theta);
    }
    sets.push_back(amplitude_of(MeasurementMap(transform, PointwiseMask{std::move(mask)}), truth));
  }
  const Family family = shape.rank() == 1 ? Family::kCdp1D : Family::kCdp2D;
  return Instance{Problem(shape, 2, std::move(sets), false), std::move(truth), {family, seed, false}};
}

Instance gen_sparse_dots(const SparseDotsParams& params, std::uint64_t seed) {
  if (params.dots < 1) throw ShapeError("sparse dots needs at least one dot");
  if (!(params.min_width > 0.0 && params.min_width <= params.max_width)) throw ShapeError("invalid dot widths");
  if (!(params.min_height > 0.0 && params.min_height <= params.max_height)) throw ShapeError("invalid dot heights");
  if (!(params.s_factor >= 1.0)) throw ShapeError("s_factor must be at least 1");

  const double fwhm_to_sigma = 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  const double reach = params.max_width * fwhm_to_sigma * std::sqrt(2.0 * std::log(1.0 / params.support_cutoff));
  const double margin = std::ceil(reach) + 1.0;
  const double rows = static_cast<double>(params.rows);
  const double cols = static_cast<double>(params.cols);
  if (rows <= 2.0 * margin || cols <= 2.0 * margin) throw ShapeError("grid too small for the dot widths");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> row_dist(margin, rows - margin);
  std::uniform_real_distribution<double> col_dist(margin, cols - margin);
  std::uniform_real_distribution<double> height_dist(params.min_height, params.max_height);
  std::uniform_real_distribution<double> width_dist(params.min_width, params.max_width);

  struct Dot {
    double r, c, h, w;
  };
  std::vector<Dot> dots;
  for (std::size_t k = 0; k < params.dots; ++k) {
    const double h = height_dist(rng);
    const double w = width_dist(rng);
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kMaxPlacementRetries && !placed; ++attempt) {
      const double r = row_dist(rng);
      const double c = col_dist(rng);
      placed = true;
      for (const auto& other : dots) {
        if (std::hypot(r - other.r, c - other.c) < w + other.w) placed = false;
      }
      if (placed) dots.push_back({r, c, h, w});
    }
    if (!placed) throw ShapeError("could not place dot " + std::to_string(k) + " without collision");
  }

  const Shape shape{params.rows, params.cols};
  Signal truth(shape, 2);
  double peak = 0.0;
  for (std::size_t r = 0; r < params.rows; ++r) {
    for (std::size_t c = 0; c < params.cols; ++c) {
      double v = 0.0;
      for (const auto& dot : dots) {
        const double sigma = dot.w * fwhm_to_sigma;
        const double dr = static_cast<double>(r) - dot.r;
        const double dc = static_cast<double>(c) - dot.c;
        v += dot.h * std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
      }
      truth(r * params.cols + c, 0) = v;
      peak = std::max(peak, v);
    }
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < truth.num_blocks(); ++i) {
    if (truth(i, 0) > params.support_cutoff * peak) {
      ++count;
    } else {
      truth(i, 0) = 0.0;
    }
  }
  const auto s = static_cast<std::size_t>(std::ceil(params.s_factor * static_cast<double>(count)));

  std::vector<ConstraintSet> sets;
  sets.push_back(ConstraintSet::sparse_nonneg_cone(s));
  sets.push_back(amplitude_of(MeasurementMap(Transform::kDft2D, NoModifier{}), truth));
  return Instance{Problem(shape, 2, std::move(sets), true), std::move(truth), {Family::kSparseDots, seed, false}};
}

Instance gen_srcloc(std::size_t m, bool noise, std::uint64_t seed) {
  if (m < 3) throw ShapeError("source localization needs at least three sensors");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(0.0, kBox);
  std::normal_distribution<double> jitter(0.0, kSrclocNoiseSigma);
  constexpr double kMinSeparation = 1e-6;

  for (;;) {
    const std::array<double, 2> source{box(rng), box(rng)};
    std::vector<std::array<double, 2>> sensors(m);
    for (auto& a : sensors) a = {box(rng), box(rng)};
    bool degenerate = false;
    for (std::size_t j = 0; j < m && !degenerate; ++j) {
      if (std::hypot(sensors[j][0] - source[0], sensors[j][1] - source[1]) < kMinSeparation) degenerate = true;
      for (std::size_t k = 0; k < j && !degenerate; ++k) {
        if (std::hypot(sensors[j][0] - sensors[k][0], sensors[j][1] - sensors[k][1]) < kMinSeparation) {
          degenerate = true;
        }
      }
    }
    if (degenerate) continue;

    std::vector<ConstraintSet> sets;
    sets.reserve(m);
    for (const auto& a : sensors) {
      const double b = std::hypot(source[0] - a[0], source[1] - a[1]);
      std::vector<double> center{a[0], a[1]};
      if (noise) {
        center[0] += jitter(rng);
        center[1] += jitter(rng);
      }
      sets.push_back(ConstraintSet::amplitude(MeasurementMap(Transform::kIdentity, Translate{center}), {b}));
    }
    Signal truth(Shape::scalar(), 2, {source[0], source[1]});
    return Instance{Problem(Shape::scalar(), 2, std::move(sets), false), std::move(truth),
                    {Family::kSrcLoc, seed, noise}};
  }
}

Signal random_start(const Instance& instance, std::uint64_t seed) {
  const Problem& problem = instance.problem;
  std::mt19937_64 rng(seed);
  Signal z = problem.zero_signal();
  switch (instance.meta.family) {
    case Family::kSrcLoc: {
      std::uniform_real_distribution<double> box(0.0, kBox);
      for (double& v : z.values()) v = box(rng);
      return z;
    }
    case Family::kSparseDots: {
      // Real nonnegative, scaled to the norm of the data (the maps are unitary).
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (std::size_t i = 0; i < z.num_blocks(); ++i) z(i, 0) = unit(rng);
      double data = 0.0;
      for (const auto& set : problem.sets()) {
        if (const auto* a = std::get_if<Amplitude>(&set.variant())) {
          for (double b : a->radii) data += b * b;
          break;
        }
      }
      z *= std::sqrt(data) / norm(z);
      return z;
    }
    default: {
      // Complex Gaussian with E ||z0||^2 = ||b_1||^2 when amplitude data exist.
      double data = 0.0;
      bool found = false;
      for (const auto& set : problem.sets()) {
        if (const auto* a = std::get_if<Amplitude>(&set.variant())) {
          for (double b : a->radii) data += b * b;
          found = true;
          break;
        }
      }
      const double variance = found ? data / static_cast<double>(z.size()) : 1.0;
      std::normal_distribution<double> normal(0.0, std::sqrt(variance));
      for (double& v : z.values()) v = normal(rng);
      return z;
    }
  }
}

Instance toy_two_lines(double angle) {
  Signal rot(Shape::scalar(), 2, {std::cos(angle), -std::sin(angle)});
  auto real_axis = ConstraintSet::nonneg_real_support({}, SupportMode::kReal);
  auto tilted = ConstraintSet::preimage(MeasurementMap(Transform::kIdentity, PointwiseMask{rot}), real_axis);
  std::vector<ConstraintSet> sets{real_axis, tilted};
  return Instance{Problem(Shape::scalar(), 2, std::move(sets), false), Signal(Shape::scalar(), 2),
                  {Family::kToy, 0, false}};
}

Instance toy_circle_line() {
  auto circle = ConstraintSet::amplitude(MeasurementMap::identity(), {1.0});
  auto line = ConstraintSet::preimage(MeasurementMap(Transform::kIdentity, Translate{{0.0, 0.5}}),
                                      ConstraintSet::nonneg_real_support({}, SupportMode::kReal));
  std::vector<ConstraintSet> sets{circle, line};
  Signal truth(Shape::scalar(), 2, {std::sqrt(0.75), 0.5});
  return Instance{Problem(Shape::scalar(), 2, std::move(sets), false), std::move(truth),
                  {Family::kToy, 0, false}};
}

Instance toy_disjoint_circles() {
  auto a = ConstraintSet::amplitude(MeasurementMap::identity(), {1.0});
  auto b = ConstraintSet::amplitude(MeasurementMap(Transform::kIdentity, Translate{{3.0, 0.0}}), {1.0});
  std::vector<ConstraintSet> sets{a, b};
  return Instance{Problem(Shape::scalar(), 2, std::move(sets), false), std::nullopt, {Family::kToy, 0, false}};
}

}  // namespace proxbench
