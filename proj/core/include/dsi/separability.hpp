#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "dsi/dataset.hpp"
#include "dsi/distance.hpp"

namespace dsi {

/// Statistic comparing each class's ICD and BCD sets.
enum class Divergence { KS, Wasserstein };

std::string_view to_string(Divergence d) noexcept;
/// "ks" or "wasserstein" (also "w", "w1"). Throws InvalidDataset otherwise.
Divergence parse_divergence(std::string_view name);

struct SubsampleSummary {
  std::size_t subset_size = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation across trials, 0 for one trial
  std::vector<double> trial_values;
};

struct SeparabilityReport {
  std::map<Label, double> per_class_similarity;
  double dsi = 0.0;
  double complexity = 1.0;
  MetricKind metric = MetricKind::Euclidean;
  Divergence stat = Divergence::KS;
  std::size_t n_points = 0;
  std::size_t n_classes = 0;
  std::size_t dim = 0;
  std::optional<SubsampleSummary> subsample;
  double wall_time_seconds = 0.0;
};

struct DsiOptions {
  std::size_t workers = 1;  // 0 = hardware concurrency
  /// Ceiling on distances held in memory at once. Exceeding it raises
  /// ResourceLimit; use dsi_subsampled for larger inputs.
  std::size_t max_distance_values = std::size_t{1} << 28;
};

/// Distance-based separability index: for every class C_i, the statistic
/// between ICD(C_i) and BCD(C_i vs all other points), averaged without weights.
/// Throws DegenerateDataset (< 2 classes) or DegenerateClass (a class < 2 points).
SeparabilityReport compute_dsi(const Dataset& ds, const DistanceMetric& metric = {},
                               Divergence stat = Divergence::KS, const DsiOptions& options = {});

/// Mean and SD of the DSI over `trials` uniform subsets drawn without
/// replacement (labels carried along). A draw leaving any class with fewer
/// than 2 points, or fewer than 2 classes, is redrawn up to `max_redraws`
/// times before DegenerateSubset is thrown. The report's dsi is the trial mean
/// and per_class_similarity holds each class's mean over the trials where it
/// appeared.
SeparabilityReport dsi_subsampled(const Dataset& ds, std::size_t subset_size, std::size_t trials,
                                  std::uint64_t seed, const DistanceMetric& metric = {},
                                  Divergence stat = Divergence::KS, const DsiOptions& options = {},
                                  std::size_t max_redraws = 100);

/// DSI of `a` labeled 0 against `b` labeled 1. Near zero suggests both samples
/// come from the same distribution.
double distribution_identity_score(const PointSet& a, const PointSet& b,
                                   const DistanceMetric& metric = {},
                                   const DsiOptions& options = {});

/// Per-class ICD and BCD sets, each sorted ascending.
struct ClassDistanceSets {
  DistanceSet icd;
  DistanceSet bcd;
};
std::vector<ClassDistanceSets> class_distance_sets(const Dataset& ds, const DistanceMetric& metric,
                                                   const DsiOptions& options = {});

struct HistogramRow {
  double bin_left = 0.0;
  double bin_right = 0.0;
  std::size_t count = 0;
  std::string set_kind;  // "icd:<class>" or "bcd:<class>"
};

/// Histograms of every set over shared equal-width bins spanning [0, max value].
/// The last bin is closed on the right.
std::vector<HistogramRow> distance_histograms(const std::vector<ClassDistanceSets>& sets,
                                              std::size_t bins);

}  // namespace dsi
