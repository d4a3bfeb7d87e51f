#include "dsi/separability.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dsi/errors.hpp"
#include "dsi/parallel.hpp"
#include "dsi/random.hpp"
#include "dsi/two_sample.hpp"

namespace dsi {

namespace {

void require_class_sizes(const ClassPartition& part) {
  require_two_classes(part);
  for (const auto& [label, idx] : part.groups) {
    if (idx.size() < 2) {
      throw DegenerateClass("class " + std::to_string(label) + " has " +
                            std::to_string(idx.size()) + " point(s); need at least 2");
    }
  }
}

void check_budget(const Dataset& ds, const ClassPartition& part, std::size_t concurrent,
                  std::size_t limit) {
  const std::size_t n = ds.size();
  std::vector<std::size_t> per_class;
  for (const auto& [label, idx] : part.groups) {
    const std::size_t m = idx.size();
    per_class.push_back(m * (m - 1) / 2 + m * (n - m));
  }
  std::sort(per_class.rbegin(), per_class.rend());
  std::size_t total = n * (n - 1) / 2;
  for (std::size_t k = 0; k < std::min(concurrent, per_class.size()); ++k) total += per_class[k];
  if (total > limit) {
    throw ResourceLimit("exact DSI on " + std::to_string(n) + " points needs about " +
                        std::to_string(total) + " distances in memory (limit " +
                        std::to_string(limit) + "); use the subsampled estimator instead");
  }
}

ClassDistanceSets gather_sets(const std::vector<double>& condensed, const Dataset& ds, Label c,
                              const std::vector<std::size_t>& members) {
  const std::size_t n = ds.size();
  const std::size_t m = members.size();
  ClassDistanceSets s;
  s.icd.kind = SetKind::Intra;
  s.icd.class_id = c;
  s.icd.expected_cardinality = m * (m - 1) / 2;
  s.icd.values.reserve(s.icd.expected_cardinality);
  s.bcd.kind = SetKind::Between;
  s.bcd.class_id = c;
  s.bcd.expected_cardinality = m * (n - m);
  s.bcd.values.reserve(s.bcd.expected_cardinality);

  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t i = members[a];
    for (std::size_t b = a + 1; b < m; ++b) {
      s.icd.values.push_back(condensed[condensed_index(n, i, members[b])]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (ds.label(j) == c) continue;
      s.bcd.values.push_back(condensed[i < j ? condensed_index(n, i, j) : condensed_index(n, j, i)]);
    }
  }
  std::sort(s.icd.values.begin(), s.icd.values.end());
  std::sort(s.bcd.values.begin(), s.bcd.values.end());
  return s;
}

// Shared by compute_dsi and class_distance_sets; `consume` runs per class on a worker.
template <typename Consume>
void for_each_class_sets(const Dataset& ds, const DistanceMetric& metric,
                         const DsiOptions& options, Consume&& consume) {
  const ClassPartition part = partition(ds);
  require_class_sizes(part);
  const std::size_t workers = resolve_workers(options.workers);
  check_budget(ds, part, std::min(workers, part.class_count()), options.max_distance_values);

  const std::vector<double> condensed =
      pairwise_condensed(PointSet::all(ds), metric, KernelOptions{workers});

  std::vector<std::pair<Label, const std::vector<std::size_t>*>> classes;
  for (const auto& [label, idx] : part.groups) classes.emplace_back(label, &idx);
  parallel_for(classes.size(), workers, [&](std::size_t k) {
    consume(k, gather_sets(condensed, ds, classes[k].first, *classes[k].second));
  });
}

// Shifted accumulation: identical inputs give exactly their common value and a zero SD.
std::pair<double, double> mean_sd(const std::vector<double>& v) {
  const double origin = v.front();
  double sum = 0.0;
  for (double x : v) sum += x - origin;
  const double mean = origin + sum / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

bool usable_subset(const Dataset& ds, const std::vector<std::size_t>& idx) {
  std::map<Label, std::size_t> counts;
  for (auto i : idx) ++counts[ds.label(i)];
  if (counts.size() < 2) return false;
  return std::all_of(counts.begin(), counts.end(), [](const auto& kv) { return kv.second >= 2; });
}

}  // namespace

std::string_view to_string(Divergence d) noexcept {
  return d == Divergence::KS ? "ks" : "wasserstein";
}

Divergence parse_divergence(std::string_view name) {
  if (name == "ks" || name == "KS") return Divergence::KS;
  if (name == "wasserstein" || name == "w" || name == "w1" || name == "W") {
    return Divergence::Wasserstein;
  }
  throw InvalidDataset("unknown statistic '" + std::string(name) + "'; use ks or wasserstein");
}

SeparabilityReport compute_dsi(const Dataset& ds, const DistanceMetric& metric, Divergence stat,
                               const DsiOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SeparabilityReport report;
  report.metric = metric.kind();
  report.stat = stat;
  report.n_points = ds.size();
  report.dim = ds.dim();

  std::vector<std::pair<Label, double>> sims(ds.class_count());
  for_each_class_sets(ds, metric, options, [&](std::size_t k, ClassDistanceSets sets) {
    const double s = stat == Divergence::KS
                         ? ks_statistic_sorted(sets.icd.values, sets.bcd.values)
                         : wasserstein1_normalized_sorted(sets.icd.values, sets.bcd.values);
    sims[k] = {sets.icd.class_id, s};
  });

  double sum = 0.0;
  for (const auto& [label, s] : sims) {
    report.per_class_similarity[label] = s;
    sum += s;
  }
  report.n_classes = sims.size();
  report.dsi = sum / static_cast<double>(sims.size());
  report.complexity = 1.0 - report.dsi;
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SeparabilityReport dsi_subsampled(const Dataset& ds, std::size_t subset_size, std::size_t trials,
                                  std::uint64_t seed, const DistanceMetric& metric,
                                  Divergence stat, const DsiOptions& options,
                                  std::size_t max_redraws) {
  if (trials == 0) throw DegenerateSubset("trials must be positive");
  if (subset_size == 0 || subset_size > ds.size()) {
    throw DegenerateSubset("subset size " + std::to_string(subset_size) + " outside [1, " +
                           std::to_string(ds.size()) + "]");
  }
  const auto start = std::chrono::steady_clock::now();
  Rng rng(seed);
  SubsampleSummary summary;
  summary.subset_size = subset_size;
  summary.trials = trials;
  summary.seed = seed;

  std::map<Label, std::pair<double, std::size_t>> class_sums;
  std::size_t n_classes = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<std::size_t> idx;
    std::size_t attempt = 0;
    for (;; ++attempt) {
      if (attempt > max_redraws) {
        throw DegenerateSubset("no usable subset of size " + std::to_string(subset_size) +
                               " after " + std::to_string(max_redraws) + " redraws");
      }
      idx = rng.sample_without_replacement(ds.size(), subset_size);
      if (usable_subset(ds, idx)) break;
    }
    const auto r = compute_dsi(ds.subset(idx), metric, stat, options);
    summary.trial_values.push_back(r.dsi);
    n_classes = std::max(n_classes, r.n_classes);
    for (const auto& [label, s] : r.per_class_similarity) {
      auto& acc = class_sums[label];
      acc.first += s;
      acc.second += 1;
    }
  }
  std::tie(summary.mean, summary.sd) = mean_sd(summary.trial_values);

  SeparabilityReport report;
  for (const auto& [label, acc] : class_sums) {
    report.per_class_similarity[label] = acc.first / static_cast<double>(acc.second);
  }
  report.dsi = summary.mean;
  report.complexity = 1.0 - report.dsi;
  report.metric = metric.kind();
  report.stat = stat;
  report.n_points = subset_size;
  report.n_classes = n_classes;
  report.dim = ds.dim();
  report.subsample = std::move(summary);
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

double distribution_identity_score(const PointSet& a, const PointSet& b,
                                   const DistanceMetric& metric, const DsiOptions& options) {
  if (a.size() < 2 || b.size() < 2) {
    throw DegenerateClass("identity score needs at least 2 points per sample");
  }
  if (a.dim() != b.dim()) throw InvalidDataset("samples differ in dimension");
  std::vector<double> features(a.data().begin(), a.data().end());
  features.insert(features.end(), b.data().begin(), b.data().end());
  std::vector<Label> labels(a.size(), 0);
  labels.resize(a.size() + b.size(), 1);
  const Dataset ds(a.dim(), std::move(features), std::move(labels));
  return compute_dsi(ds, metric, Divergence::KS, options).dsi;
}

std::vector<ClassDistanceSets> class_distance_sets(const Dataset& ds, const DistanceMetric& metric,
                                                   const DsiOptions& options) {
  std::vector<ClassDistanceSets> out(ds.class_count());
  for_each_class_sets(ds, metric, options,
                      [&](std::size_t k, ClassDistanceSets sets) { out[k] = std::move(sets); });
  return out;
}

std::vector<HistogramRow> distance_histograms(const std::vector<ClassDistanceSets>& sets,
                                              std::size_t bins) {
  if (bins == 0) throw InvalidDataset("histogram needs at least one bin");
  double hi = 0.0;
  for (const auto& s : sets) {
    if (!s.icd.values.empty()) hi = std::max(hi, s.icd.values.back());
    if (!s.bcd.values.empty()) hi = std::max(hi, s.bcd.values.back());
  }
  if (hi <= 0.0) hi = 1.0;
  const double width = hi / static_cast<double>(bins);

  std::vector<HistogramRow> rows;
  auto emit = [&](const DistanceSet& set, const std::string& kind) {
    std::vector<std::size_t> counts(bins, 0);
    for (double v : set.values) {
      auto b = static_cast<std::size_t>(v / width);
      ++counts[std::min(b, bins - 1)];
    }
    for (std::size_t b = 0; b < bins; ++b) {
      rows.push_back({width * static_cast<double>(b),
                      b + 1 == bins ? hi : width * static_cast<double>(b + 1), counts[b], kind});
    }
  };
  for (const auto& s : sets) {
    emit(s.icd, "icd:" + std::to_string(s.icd.class_id));
    emit(s.bcd, "bcd:" + std::to_string(s.bcd.class_id));
  }
  return rows;
}

}  // namespace dsi
