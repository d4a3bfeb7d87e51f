#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dsi/dataset.hpp"

namespace dsi {

/// Baseline complexity measures, all oriented so that higher = more complex
/// and bounded to [0, 1]. Distances are Euclidean. Definitions follow the
/// ECoL conventions:
///
///   F1       1 / (1 + max_f r_f), r_f the Fisher ratio of feature f
///   N1       fraction of points touching an inter-class edge of the MST
///   N2       r / (1 + r), r = sum of nearest-friend / sum of nearest-enemy distances
///   N3       leave-one-out 1-NN error rate
///   N4       1-NN error on points interpolated between same-class pairs
///   T1       hyperspheres (radius = nearest-enemy distance) kept by greedy
///            covering, divided by n
///   LSC      1 - sum_x |LS(x)| / n^2, LS(x) counting x itself
///   Density  1 - 2|E| / (n(n-1)) on the same-class epsilon graph
enum class MeasureCode { F1, N1, N2, N3, N4, T1, LSC, Density };

inline constexpr MeasureCode kAllMeasures[] = {MeasureCode::F1, MeasureCode::N1, MeasureCode::N2,
                                               MeasureCode::N3, MeasureCode::N4, MeasureCode::T1,
                                               MeasureCode::LSC, MeasureCode::Density};

std::string_view to_string(MeasureCode c) noexcept;
/// Case-insensitive. Throws InvalidDataset for an unknown code.
MeasureCode parse_measure(std::string_view name);

struct MeasureResult {
  MeasureCode code = MeasureCode::F1;
  double value = 0.0;
};

struct MeasureOptions {
  std::size_t workers = 1;
  /// N4 sample count; 0 means one synthetic point per original point.
  std::size_t n4_samples = 0;
  std::uint64_t seed = 0;
  double density_percentile = 0.15;
};

MeasureResult f1(const Dataset& ds);
MeasureResult n1(const Dataset& ds, std::size_t workers = 1);
MeasureResult n2(const Dataset& ds, std::size_t workers = 1);
MeasureResult n3(const Dataset& ds, std::size_t workers = 1);
MeasureResult n4(const Dataset& ds, std::size_t n_synthetic, std::uint64_t seed,
                 std::size_t workers = 1);
MeasureResult t1(const Dataset& ds, std::size_t workers = 1);
MeasureResult lsc(const Dataset& ds, std::size_t workers = 1);

/// Epsilon is the `epsilon_percentile` quantile (linear interpolation) of all
/// pairwise distances; pairs strictly closer than epsilon are joined.
MeasureResult density(const Dataset& ds, double epsilon_percentile = 0.15,
                      std::size_t workers = 1);
/// Same graph with an absolute radius.
MeasureResult density_with_radius(const Dataset& ds, double epsilon, std::size_t workers = 1);

/// Computes the requested measures sharing one pairwise distance table.
std::vector<MeasureResult> compute_measures(const Dataset& ds, std::span<const MeasureCode> codes,
                                            const MeasureOptions& options = {});

/// Linear-interpolation quantile (the R type-7 / numpy default) of `values`.
/// Reorders `values`.
double quantile(std::vector<double>& values, double p);

}  // namespace dsi
