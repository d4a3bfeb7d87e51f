#include "repro.hpp"

#include <cmath>
#include <numeric>

#include "dsi/errors.hpp"
#include "dsi/random.hpp"

namespace dsi::repro {

namespace {

std::map<MeasureCode, double> all_measures(const Dataset& ds, std::uint64_t seed,
                                           std::size_t workers) {
  MeasureOptions opt;
  opt.workers = workers;
  opt.seed = seed;
  std::map<MeasureCode, double> out;
  for (const auto& r : compute_measures(ds, kAllMeasures, opt)) out[r.code] = r.value;
  return out;
}

}  // namespace

std::vector<ShapeScores> shape_suite(std::uint64_t seed, std::size_t n_per_class,
                                     std::size_t workers, bool with_measures) {
  std::vector<ShapeScores> rows;
  for (Shape shape : kShapeSuite) {
    GeneratorSpec spec;
    spec.shape = shape;
    spec.n_per_class = n_per_class;
    spec.seed = seed;
    const Dataset ds = generate(spec);
    ShapeScores row;
    row.shape = shape;
    row.complexity = compute_dsi(ds, {}, Divergence::KS, {workers}).complexity;
    if (with_measures) row.measures = all_measures(ds, seed, workers);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SdRow> blob_sd_sweep(std::uint64_t seed, std::size_t n_per_class, std::size_t workers,
                                 bool with_wasserstein, bool with_measures) {
  std::vector<SdRow> rows;
  for (double sd : kBlobSds) {
    GeneratorSpec spec;
    spec.shape = Shape::BlobSD;
    spec.n_per_class = n_per_class;
    spec.seed = seed;
    spec.cluster_sd = sd;
    const Dataset ds = generate(spec);
    SdRow row;
    row.sd = sd;
    row.ks_complexity = compute_dsi(ds, {}, Divergence::KS, {workers}).complexity;
    if (with_wasserstein) {
      row.w_complexity = compute_dsi(ds, {}, Divergence::Wasserstein, {workers}).complexity;
    }
    if (with_measures) row.measures = all_measures(ds, seed, workers);
    rows.push_back(std::move(row));
  }
  return rows;
}

ConvergenceRow uniform_convergence(std::size_t n_per_class, std::uint64_t first_seed,
                                   std::size_t runs, std::size_t workers) {
  ConvergenceRow row;
  row.n_per_class = n_per_class;
  for (std::size_t r = 0; r < runs; ++r) {
    GeneratorSpec spec;
    spec.shape = Shape::Random;
    spec.n_per_class = n_per_class;
    spec.seed = first_seed + r;
    row.values.push_back(compute_dsi(generate(spec), {}, Divergence::KS, {workers}).dsi);
  }
  if (runs == 0) return row;
  row.mean = std::accumulate(row.values.begin(), row.values.end(), 0.0) /
             static_cast<double>(runs);
  if (runs > 1) {
    double ss = 0.0;
    for (double v : row.values) ss += (v - row.mean) * (v - row.mean);
    row.sd = std::sqrt(ss / static_cast<double>(runs - 1));
  }
  return row;
}

std::vector<SubsampleSummary> subset_sweep(const Dataset& ds, const std::vector<std::size_t>& sizes,
                                           std::size_t trials, std::uint64_t seed,
                                           std::size_t workers) {
  std::vector<SubsampleSummary> out;
  for (std::size_t size : sizes) {
    out.push_back(*dsi_subsampled(ds, size, trials, seed, {}, Divergence::KS, {workers}).subsample);
  }
  return out;
}

CifarIdentity cifar_identity(const Dataset& cifar, std::uint64_t seed, std::size_t workers,
                             std::size_t airplanes) {
  const auto part = partition(cifar);
  auto find = [&](Label l) -> const std::vector<std::size_t>& {
    auto it = part.groups.find(l);
    if (it == part.groups.end() || it->second.size() < 4) {
      throw DegenerateClass("CIFAR-10 class " + std::to_string(l) + " has too few images");
    }
    return it->second;
  };
  const auto& plane = find(0);
  const auto& car = find(1);

  Rng rng(seed);
  std::vector<std::size_t> planes = plane;
  if (airplanes != 0 && airplanes < planes.size()) {
    std::vector<std::size_t> kept;
    for (auto k : rng.sample_without_replacement(planes.size(), airplanes)) kept.push_back(planes[k]);
    planes = std::move(kept);
  }
  // Seeded Fisher-Yates, then halve.
  for (std::size_t i = planes.size(); i > 1; --i) {
    std::swap(planes[i - 1], planes[static_cast<std::size_t>(rng.below(i))]);
  }
  const std::size_t half = planes.size() / 2;
  const std::vector<std::size_t> air1(planes.begin(), planes.begin() + static_cast<std::ptrdiff_t>(half));
  const std::vector<std::size_t> air2(planes.begin() + static_cast<std::ptrdiff_t>(half),
                                      planes.begin() + static_cast<std::ptrdiff_t>(2 * half));
  std::vector<std::size_t> autos;
  const std::size_t n_auto = std::min(half, car.size());
  for (auto k : rng.sample_without_replacement(car.size(), n_auto)) autos.push_back(car[k]);

  const DsiOptions opt{workers};
  const auto a1 = PointSet::gather(cifar, air1);
  CifarIdentity out;
  out.air1_air2 = {air1.size(), air2.size(),
                   distribution_identity_score(a1, PointSet::gather(cifar, air2), {}, opt)};
  out.air1_auto = {air1.size(), autos.size(),
                   distribution_identity_score(a1, PointSet::gather(cifar, autos), {}, opt)};
  return out;
}

}  // namespace dsi::repro
