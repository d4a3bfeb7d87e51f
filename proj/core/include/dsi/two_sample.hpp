#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dsi {

/// Right-continuous step function F(x) = #{values <= x} / n.
class EmpiricalCdf {
 public:
  /// Throws EmptySample for an empty sample.
  explicit EmpiricalCdf(std::vector<double> values);

  double operator()(double x) const noexcept;
  std::size_t size() const noexcept { return sorted_.size(); }
  std::span<const double> sorted_values() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// sup_x |F_a(x) - F_b(x)| for two samples of possibly different size.
/// Throws EmptySample if either is empty.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Same, for inputs already sorted ascending (not checked).
double ks_statistic_sorted(std::span<const double> a, std::span<const double> b);

/// Integral of |F_a - F_b|; exact for the piecewise-constant integrand.
double wasserstein1(std::span<const double> a, std::span<const double> b);
double wasserstein1_sorted(std::span<const double> a, std::span<const double> b);

/// wasserstein1 divided by the pooled range, so the result lies in [0, 1].
/// Zero pooled range yields 0.
double wasserstein1_normalized(std::span<const double> a, std::span<const double> b);
double wasserstein1_normalized_sorted(std::span<const double> a, std::span<const double> b);

}  // namespace dsi
