#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dsi/measures.hpp"
#include "dsi/separability.hpp"
#include "dsi/synthetic.hpp"

namespace dsi::repro {

/// The six two-class shapes in decreasing order of expected complexity.
inline constexpr Shape kShapeSuite[] = {Shape::Random, Shape::Spirals, Shape::XOR,
                                        Shape::Moons,  Shape::Circles, Shape::Blobs};

struct ShapeScores {
  Shape shape = Shape::Random;
  double complexity = 0.0;  // 1 - DSI
  std::map<MeasureCode, double> measures;
};

/// Every shape at `n_per_class` points, generated with `seed`, scored with
/// 1 - DSI and (when `with_measures`) the eight baseline measures.
std::vector<ShapeScores> shape_suite(std::uint64_t seed, std::size_t n_per_class,
                                     std::size_t workers, bool with_measures = true);

struct SdRow {
  double sd = 0.0;
  double ks_complexity = 0.0;
  std::optional<double> w_complexity;
  std::map<MeasureCode, double> measures;
};

inline constexpr double kBlobSds[] = {1, 2, 3, 4, 5, 6, 7, 8, 9};

/// Blob-SD sweep over kBlobSds.
std::vector<SdRow> blob_sd_sweep(std::uint64_t seed, std::size_t n_per_class, std::size_t workers,
                                 bool with_wasserstein, bool with_measures);

struct ConvergenceRow {
  std::size_t n_per_class = 0;
  double mean = 0.0;
  double sd = 0.0;
  std::vector<double> values;
};

/// DSI of two i.i.d. uniform classes, one run per seed in [first_seed, first_seed + runs).
ConvergenceRow uniform_convergence(std::size_t n_per_class, std::uint64_t first_seed,
                                   std::size_t runs, std::size_t workers);

/// Trial statistics of subset DSIs for each size.
std::vector<SubsampleSummary> subset_sweep(const Dataset& ds, const std::vector<std::size_t>& sizes,
                                           std::size_t trials, std::uint64_t seed,
                                           std::size_t workers);

struct IdentityResult {
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double score = 0.0;
};

struct CifarIdentity {
  IdentityResult air1_air2;
  IdentityResult air1_auto;
};

/// The airplane images (label 0) split into two seeded halves AIR1 and AIR2,
/// and a seeded draw of as many automobile images (label 1) as AIR1 holds.
/// `airplanes` caps how many airplane images are used (0 = all).
CifarIdentity cifar_identity(const Dataset& cifar, std::uint64_t seed, std::size_t workers,
                             std::size_t airplanes = 0);

}  // namespace dsi::repro
