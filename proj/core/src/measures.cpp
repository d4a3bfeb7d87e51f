#include "dsi/measures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "dsi/distance.hpp"
#include "dsi/errors.hpp"
#include "dsi/parallel.hpp"
#include "dsi/random.hpp"

namespace dsi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Symmetric Euclidean distance lookup over the condensed triangle.
class PairTable {
 public:
  PairTable(const Dataset& ds, std::size_t workers)
      : n_(ds.size()),
        d_(pairwise_condensed(PointSet::all(ds), DistanceMetric::euclidean(), {workers})) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    if (i == j) return 0.0;
    return i < j ? d_[condensed_index(n_, i, j)] : d_[condensed_index(n_, j, i)];
  }
  const std::vector<double>& condensed() const noexcept { return d_; }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

// Nearest-enemy distance per point; 0 when a differently labeled duplicate exists.
std::vector<double> nearest_enemy(const Dataset& ds, const PairTable& d, std::size_t workers) {
  std::vector<double> r(ds.size(), kInf);
  parallel_for(ds.size(), workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < ds.size(); ++j) {
      if (ds.label(j) != ds.label(i)) r[i] = std::min(r[i], d(i, j));
    }
  });
  return r;
}

void require_classes(const Dataset& ds) { require_two_classes(partition(ds)); }

void require_points_per_class(const Dataset& ds, std::size_t minimum) {
  const auto part = partition(ds);
  require_two_classes(part);
  for (const auto& [label, idx] : part.groups) {
    if (idx.size() < minimum) {
      throw DegenerateClass("class " + std::to_string(label) + " has " +
                            std::to_string(idx.size()) + " point(s); need at least " +
                            std::to_string(minimum));
    }
  }
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double n1_value(const Dataset& ds, const PairTable& d) {
  // Prim's algorithm with edges totally ordered by (weight, lower index, higher index),
  // which makes the tree unique and equal to Kruskal's under the same order.
  const std::size_t n = ds.size();
  struct Edge {
    double w = kInf;
    std::size_t lo = 0, hi = 0;
    bool operator<(const Edge& o) const {
      if (w != o.w) return w < o.w;
      if (lo != o.lo) return lo < o.lo;
      return hi < o.hi;
    }
  };
  std::vector<Edge> best(n);
  std::vector<char> in_tree(n, 0);
  std::vector<char> border(n, 0);
  in_tree[0] = 1;
  for (std::size_t v = 1; v < n; ++v) best[v] = {d(0, v), 0, v};
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && (pick == n || best[v] < best[pick])) pick = v;
    }
    const Edge e = best[pick];
    if (ds.label(e.lo) != ds.label(e.hi)) border[e.lo] = border[e.hi] = 1;
    in_tree[pick] = 1;
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const Edge cand{d(pick, v), std::min(pick, v), std::max(pick, v)};
      if (cand < best[v]) best[v] = cand;
    }
  }
  const auto count = std::count(border.begin(), border.end(), 1);
  return static_cast<double>(count) / static_cast<double>(n);
}

double n2_value(const Dataset& ds, const PairTable& d, std::size_t workers) {
  const std::size_t n = ds.size();
  std::vector<double> friend_d(n, kInf), enemy_d(n, kInf);
  parallel_for(n, workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      auto& slot = ds.label(j) == ds.label(i) ? friend_d[i] : enemy_d[i];
      slot = std::min(slot, d(i, j));
    }
  });
  double intra = 0.0, extra = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    intra += friend_d[i];
    extra += enemy_d[i];
  }
  if (extra == 0.0) return 1.0;
  const double r = intra / extra;
  return clamp01(r / (1.0 + r));
}

double n3_value(const Dataset& ds, const PairTable& d, std::size_t workers) {
  const std::size_t n = ds.size();
  std::vector<char> wrong(n, 0);
  parallel_for(n, workers, [&](std::size_t i) {
    std::size_t nn = n;
    double best = kInf;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dij = d(i, j);
      if (dij < best) {  // strict: ties keep the lower index
        best = dij;
        nn = j;
      }
    }
    wrong[i] = ds.label(nn) != ds.label(i);
  });
  return static_cast<double>(std::count(wrong.begin(), wrong.end(), 1)) / static_cast<double>(n);
}

double t1_value(const Dataset& ds, const PairTable& d, const std::vector<double>& radius) {
  // Greedy covering: repeatedly keep the sphere that covers the most points not
  // yet absorbed, then absorb its centre and everything strictly inside it.
  const std::size_t n = ds.size();
  std::vector<std::vector<std::size_t>> covers(n), covered_by(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (d(i, j) < radius[i]) {
        covers[i].push_back(j);
        covered_by[j].push_back(i);
      }
    }
  }
  std::vector<std::size_t> count(n);
  for (std::size_t i = 0; i < n; ++i) count[i] = covers[i].size();
  std::vector<char> alive(n, 1);
  std::size_t remaining = n;
  std::size_t spheres = 0;

  auto absorb = [&](std::size_t k) {
    if (!alive[k]) return;
    alive[k] = 0;
    --remaining;
    for (auto i : covered_by[k]) --count[i];
  };
  while (remaining > 0) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (alive[i] && (pick == n || count[i] > count[pick])) pick = i;
    }
    ++spheres;
    for (auto j : covers[pick]) absorb(j);
    absorb(pick);
  }
  return static_cast<double>(spheres) / static_cast<double>(n);
}

double lsc_value(const Dataset& ds, const PairTable& d, const std::vector<double>& radius,
                 std::size_t workers) {
  const std::size_t n = ds.size();
  std::vector<std::size_t> local(n, 0);
  parallel_for(n, workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (d(i, j) < radius[i]) ++local[i];
    }
  });
  double total = 0.0;
  for (auto c : local) total += static_cast<double>(c);
  const double nn = static_cast<double>(n);
  return clamp01(1.0 - total / (nn * nn));
}

double density_value(const Dataset& ds, const PairTable& d, double epsilon) {
  const std::size_t n = ds.size();
  std::size_t edges = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (ds.label(i) == ds.label(j) && d(i, j) < epsilon) ++edges;
    }
  }
  const double possible = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return clamp01(1.0 - static_cast<double>(edges) / possible);
}

double density_epsilon(const PairTable& d, double percentile) {
  if (!(percentile > 0.0 && percentile < 1.0)) {
    throw DomainError("density percentile must lie in (0, 1)");
  }
  std::vector<double> all = d.condensed();
  return quantile(all, percentile);
}

double n4_value(const Dataset& ds, std::size_t n_synthetic, std::uint64_t seed,
                std::size_t workers) {
  const std::size_t n = ds.size();
  const std::size_t dim = ds.dim();
  if (n_synthetic == 0) n_synthetic = n;
  const auto part = partition(ds);

  // Draw serially so the sample is independent of the worker count.
  Rng rng(seed);
  std::vector<double> points(n_synthetic * dim);
  std::vector<Label> labels(n_synthetic);
  for (std::size_t s = 0; s < n_synthetic; ++s) {
    const auto i = static_cast<std::size_t>(rng.below(n));
    const auto& members = part.groups.at(ds.label(i));
    std::size_t j = i;
    while (j == i) j = members[static_cast<std::size_t>(rng.below(members.size()))];
    const double t = rng.uniform();
    auto a = ds.point(i);
    auto b = ds.point(j);
    for (std::size_t k = 0; k < dim; ++k) points[s * dim + k] = a[k] + t * (b[k] - a[k]);
    labels[s] = ds.label(i);
  }

  std::vector<char> wrong(n_synthetic, 0);
  const auto metric = DistanceMetric::euclidean();
  parallel_for(n_synthetic, workers, [&](std::size_t s) {
    std::span<const double> p(points.data() + s * dim, dim);
    double best = kInf;
    std::size_t nn = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double dj = distance(p, ds.point(j), metric);
      if (dj < best) {
        best = dj;
        nn = j;
      }
    }
    wrong[s] = ds.label(nn) != labels[s];
  });
  return static_cast<double>(std::count(wrong.begin(), wrong.end(), 1)) /
         static_cast<double>(n_synthetic);
}

}  // namespace

std::string_view to_string(MeasureCode c) noexcept {
  switch (c) {
    case MeasureCode::F1: return "F1";
    case MeasureCode::N1: return "N1";
    case MeasureCode::N2: return "N2";
    case MeasureCode::N3: return "N3";
    case MeasureCode::N4: return "N4";
    case MeasureCode::T1: return "T1";
    case MeasureCode::LSC: return "LSC";
    case MeasureCode::Density: return "Density";
  }
  return "?";
}

MeasureCode parse_measure(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (auto c : kAllMeasures) {
    std::string s(to_string(c));
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    if (s == n) return c;
  }
  throw InvalidDataset("unknown measure '" + std::string(name) + "'");
}

double quantile(std::vector<double>& values, double p) {
  if (values.empty()) throw EmptySample("quantile of an empty sample");
  const double h = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
  const double a = values[lo];
  if (lo + 1 >= values.size()) return a;
  const double b = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1,
                                     values.end());
  return a + (h - static_cast<double>(lo)) * (b - a);
}

MeasureResult f1(const Dataset& ds) {
  const auto part = partition(ds);
  require_two_classes(part);
  const std::size_t dim = ds.dim();
  const double n = static_cast<double>(ds.size());
  double best = 0.0;
  for (std::size_t f = 0; f < dim; ++f) {
    double overall = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) overall += ds.point(i)[f];
    overall /= n;
    double between = 0.0, within = 0.0;
    for (const auto& [label, idx] : part.groups) {
      double mean = 0.0;
      for (auto i : idx) mean += ds.point(i)[f];
      mean /= static_cast<double>(idx.size());
      between += static_cast<double>(idx.size()) * (mean - overall) * (mean - overall);
      for (auto i : idx) within += (ds.point(i)[f] - mean) * (ds.point(i)[f] - mean);
    }
    double ratio;
    if (within == 0.0) {
      ratio = between > 0.0 ? kInf : 0.0;
    } else {
      ratio = between / within;
    }
    best = std::max(best, ratio);
  }
  return {MeasureCode::F1, std::isinf(best) ? 0.0 : clamp01(1.0 / (1.0 + best))};
}

MeasureResult n1(const Dataset& ds, std::size_t workers) {
  require_classes(ds);
  return {MeasureCode::N1, n1_value(ds, PairTable(ds, workers))};
}

MeasureResult n2(const Dataset& ds, std::size_t workers) {
  require_points_per_class(ds, 2);
  return {MeasureCode::N2, n2_value(ds, PairTable(ds, workers), workers)};
}

MeasureResult n3(const Dataset& ds, std::size_t workers) {
  require_points_per_class(ds, 2);
  return {MeasureCode::N3, n3_value(ds, PairTable(ds, workers), workers)};
}

MeasureResult n4(const Dataset& ds, std::size_t n_synthetic, std::uint64_t seed,
                 std::size_t workers) {
  require_points_per_class(ds, 2);
  return {MeasureCode::N4, n4_value(ds, n_synthetic, seed, workers)};
}

MeasureResult t1(const Dataset& ds, std::size_t workers) {
  require_classes(ds);
  PairTable d(ds, workers);
  return {MeasureCode::T1, t1_value(ds, d, nearest_enemy(ds, d, workers))};
}

MeasureResult lsc(const Dataset& ds, std::size_t workers) {
  require_classes(ds);
  PairTable d(ds, workers);
  return {MeasureCode::LSC, lsc_value(ds, d, nearest_enemy(ds, d, workers), workers)};
}

MeasureResult density(const Dataset& ds, double epsilon_percentile, std::size_t workers) {
  if (ds.size() < 2) throw DegenerateDataset("density needs at least 2 points");
  PairTable d(ds, workers);
  return {MeasureCode::Density, density_value(ds, d, density_epsilon(d, epsilon_percentile))};
}

MeasureResult density_with_radius(const Dataset& ds, double epsilon, std::size_t workers) {
  if (ds.size() < 2) throw DegenerateDataset("density needs at least 2 points");
  return {MeasureCode::Density, density_value(ds, PairTable(ds, workers), epsilon)};
}

std::vector<MeasureResult> compute_measures(const Dataset& ds, std::span<const MeasureCode> codes,
                                            const MeasureOptions& options) {
  require_points_per_class(ds, 2);
  const std::size_t workers = options.workers;
  const PairTable d(ds, workers);
  std::vector<double> radius;
  auto enemies = [&]() -> const std::vector<double>& {
    if (radius.empty()) radius = nearest_enemy(ds, d, workers);
    return radius;
  };
  std::vector<MeasureResult> out;
  for (auto code : codes) {
    double v = 0.0;
    switch (code) {
      case MeasureCode::F1: v = f1(ds).value; break;
      case MeasureCode::N1: v = n1_value(ds, d); break;
      case MeasureCode::N2: v = n2_value(ds, d, workers); break;
      case MeasureCode::N3: v = n3_value(ds, d, workers); break;
      case MeasureCode::N4: v = n4_value(ds, options.n4_samples, options.seed, workers); break;
      case MeasureCode::T1: v = t1_value(ds, d, enemies()); break;
      case MeasureCode::LSC: v = lsc_value(ds, d, enemies(), workers); break;
      case MeasureCode::Density:
        v = density_value(ds, d, density_epsilon(d, options.density_percentile));
        break;
    }
    out.push_back({code, v});
  }
  return out;
}

}  // namespace dsi
