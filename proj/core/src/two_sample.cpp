#include "dsi/two_sample.hpp"

#include <algorithm>
#include <cmath>

#include "dsi/errors.hpp"

namespace dsi {

namespace {

void require_samples(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw EmptySample("two-sample statistic needs non-empty samples");
}

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  return s;
}

// Walks the pooled distinct values in ascending order. At each value x the
// callback sees (x, count_a(<= x), count_b(<= x)). Between consecutive pooled
// values both step functions are constant, so their value just left of a
// breakpoint equals the value at the previous one; visiting every pooled value
// therefore covers the left limits as well.
template <typename Visit>
void walk_pooled(std::span<const double> a, std::span<const double> b, Visit&& visit) {
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      x = a[i];
    } else {
      x = b[j];
    }
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    visit(x, i, j);
  }
}

}  // namespace

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.empty()) throw EmptySample("empirical CDF of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const noexcept {
  const auto k = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
  return static_cast<double>(k) / static_cast<double>(sorted_.size());
}

double ks_statistic_sorted(std::span<const double> a, std::span<const double> b) {
  require_samples(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double sup = 0.0;
  walk_pooled(a, b, [&](double, std::size_t i, std::size_t j) {
    sup = std::max(sup, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  });
  return sup;
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  require_samples(a, b);
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);
  return ks_statistic_sorted(sa, sb);
}

double wasserstein1_sorted(std::span<const double> a, std::span<const double> b) {
  require_samples(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double area = 0.0;
  double prev_x = 0.0;
  double prev_gap = 0.0;
  bool started = false;
  walk_pooled(a, b, [&](double x, std::size_t i, std::size_t j) {
    if (started) area += prev_gap * (x - prev_x);
    prev_x = x;
    prev_gap = std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb);
    started = true;
  });
  return area;
}

double wasserstein1(std::span<const double> a, std::span<const double> b) {
  require_samples(a, b);
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);
  return wasserstein1_sorted(sa, sb);
}

double wasserstein1_normalized_sorted(std::span<const double> a, std::span<const double> b) {
  require_samples(a, b);
  const double lo = std::min(a.front(), b.front());
  const double hi = std::max(a.back(), b.back());
  if (!(hi > lo)) return 0.0;
  return std::clamp(wasserstein1_sorted(a, b) / (hi - lo), 0.0, 1.0);
}

double wasserstein1_normalized(std::span<const double> a, std::span<const double> b) {
  require_samples(a, b);
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);
  return wasserstein1_normalized_sorted(sa, sb);
}

}  // namespace dsi
