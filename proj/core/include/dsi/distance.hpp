#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsi/dataset.hpp"

namespace dsi {

enum class MetricKind { Euclidean, CityBlock, Chebyshev, Correlation, Cosine, Mahalanobis };

std::string_view to_string(MetricKind m) noexcept;
/// Accepts the names printed by to_string plus "cityblock", "manhattan", "l1", "l2", "linf".
MetricKind parse_metric(std::string_view name);

/// A metric variant plus, for Mahalanobis, its inverse-covariance context.
class DistanceMetric {
 public:
  DistanceMetric() = default;
  /// Any variant except Mahalanobis, which needs a context.
  explicit DistanceMetric(MetricKind kind);

  static DistanceMetric euclidean() { return DistanceMetric(MetricKind::Euclidean); }
  /// `inverse_covariance` is a row-major dim x dim matrix. Throws
  /// SingularCovariance unless it is symmetric positive definite.
  static DistanceMetric mahalanobis(std::vector<double> inverse_covariance, std::size_t dim);

  MetricKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }

  std::size_t context_dim() const noexcept { return dim_; }
  std::span<const double> inverse_covariance() const noexcept { return inverse_covariance_; }
  /// Upper-triangular U with inverse_covariance = U^T U, row-major.
  std::span<const double> whitening() const noexcept { return whitening_; }

 private:
  MetricKind kind_ = MetricKind::Euclidean;
  std::size_t dim_ = 0;
  std::vector<double> inverse_covariance_;
  std::vector<double> whitening_;
};

/// Distance between two feature vectors. Correlation and Cosine are
/// 1 - similarity, clamped to [0, 2]; they throw DegenerateVector for a
/// zero-variance (Correlation) or zero (Cosine) input.
double distance(std::span<const double> a, std::span<const double> b, const DistanceMetric& m);

/// Owning, row-major list of points with a common dimension.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dim, std::vector<double> rows);
  static PointSet from_rows(const std::vector<std::vector<double>>& rows);
  static PointSet gather(const Dataset& ds, std::span<const std::size_t> indices);
  static PointSet all(const Dataset& ds);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> operator[](std::size_t i) const noexcept {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

enum class SetKind { Intra, Between };

/// Multiset of distances; ICD of one class or BCD of a class against the rest.
struct DistanceSet {
  std::vector<double> values;
  SetKind kind = SetKind::Intra;
  Label class_id = 0;
  std::size_t expected_cardinality = 0;
};

struct KernelOptions {
  std::size_t workers = 1;  // 0 = hardware concurrency
};

/// All m(m-1)/2 unordered-pair distances, row-major over i < j.
/// Throws DegenerateClass for fewer than 2 points.
DistanceSet icd_set(const PointSet& points, const DistanceMetric& m,
                    const KernelOptions& options = {}, Label class_id = 0);

/// All |a|*|b| cross distances, row-major over (i in a, j in b).
/// Throws DegenerateClass when either side is empty.
DistanceSet bcd_set(const PointSet& a, const PointSet& b, const DistanceMetric& m,
                    const KernelOptions& options = {}, Label class_id = 0);

/// Condensed upper triangle of the full pairwise matrix of `points`: entry
/// (i, j), i < j, lives at condensed_index(n, i, j).
std::vector<double> pairwise_condensed(const PointSet& points, const DistanceMetric& m,
                                       const KernelOptions& options = {});

inline std::size_t condensed_index(std::size_t n, std::size_t i, std::size_t j) noexcept {
  // requires i < j
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

/// Pooled sample covariance over all points (labels ignored) plus ridge * I,
/// inverted. Without an explicit ridge, 1e-6 * trace(cov) / dim is used.
/// Throws SingularCovariance when the regularized covariance is not
/// numerically positive definite.
DistanceMetric fit_mahalanobis(const Dataset& ds, std::optional<double> ridge = std::nullopt);

}  // namespace dsi
