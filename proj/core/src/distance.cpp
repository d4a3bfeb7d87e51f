#include "dsi/distance.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cctype>
#include <cmath>

#include "dsi/errors.hpp"
#include "dsi/parallel.hpp"

namespace dsi {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Four independent accumulators keep the reduction order fixed (and so the
// result bit-identical for every caller) while letting the loop pipeline.
inline double squared_l2(const double* a, const double* b, std::size_t d) noexcept {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t k = 0;
  for (; k + 4 <= d; k += 4) {
    const double t0 = a[k] - b[k], t1 = a[k + 1] - b[k + 1];
    const double t2 = a[k + 2] - b[k + 2], t3 = a[k + 3] - b[k + 3];
    s0 += t0 * t0;
    s1 += t1 * t1;
    s2 += t2 * t2;
    s3 += t3 * t3;
  }
  for (; k < d; ++k) {
    const double t = a[k] - b[k];
    s0 += t * t;
  }
  return (s0 + s1) + (s2 + s3);
}

inline double dot(const double* a, const double* b, std::size_t d) noexcept {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t k = 0;
  for (; k + 4 <= d; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < d; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

inline double l1(const double* a, const double* b, std::size_t d) noexcept {
  double s0 = 0, s1 = 0;
  std::size_t k = 0;
  for (; k + 2 <= d; k += 2) {
    s0 += std::abs(a[k] - b[k]);
    s1 += std::abs(a[k + 1] - b[k + 1]);
  }
  for (; k < d; ++k) s0 += std::abs(a[k] - b[k]);
  return s0 + s1;
}

inline double linf(const double* a, const double* b, std::size_t d) noexcept {
  double m = 0;
  for (std::size_t k = 0; k < d; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline double norm(const double* a, std::size_t d) noexcept { return std::sqrt(dot(a, a, d)); }

inline double cosine_from(double ab, double na, double nb) noexcept {
  return std::clamp(1.0 - ab / (na * nb), 0.0, 2.0);
}

std::vector<double> centered(std::span<const double> v) {
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k] - mean;
  return out;
}

// Points rewritten so every metric reduces to one cheap pairwise formula:
// Mahalanobis becomes Euclidean on whitened rows, Correlation becomes Cosine
// on centered rows.
struct Prepared {
  MetricKind kind = MetricKind::Euclidean;
  std::size_t dim = 0;
  std::vector<double> rows;
  std::vector<double> norms;

  const double* row(std::size_t i) const noexcept { return rows.data() + i * dim; }

  double operator()(std::size_t i, const Prepared& other, std::size_t j) const noexcept {
    const double* a = row(i);
    const double* b = other.row(j);
    switch (kind) {
      case MetricKind::CityBlock: return l1(a, b, dim);
      case MetricKind::Chebyshev: return linf(a, b, dim);
      case MetricKind::Cosine: return cosine_from(dot(a, b, dim), norms[i], other.norms[j]);
      default: return std::sqrt(squared_l2(a, b, dim));
    }
  }
};

Prepared prepare(const PointSet& points, const DistanceMetric& m) {
  Prepared p;
  p.dim = points.dim();
  const std::size_t n = points.size();
  switch (m.kind()) {
    case MetricKind::Mahalanobis: {
      if (m.context_dim() != p.dim) {
        throw InvalidDataset("Mahalanobis context has dimension " +
                             std::to_string(m.context_dim()) + "; points have " +
                             std::to_string(p.dim));
      }
      p.kind = MetricKind::Euclidean;
      p.rows.resize(points.data().size());
      Eigen::Map<const RowMatrix> x(points.data().data(), static_cast<Eigen::Index>(n),
                                    static_cast<Eigen::Index>(p.dim));
      Eigen::Map<const RowMatrix> u(m.whitening().data(), static_cast<Eigen::Index>(p.dim),
                                    static_cast<Eigen::Index>(p.dim));
      Eigen::Map<RowMatrix> y(p.rows.data(), static_cast<Eigen::Index>(n),
                              static_cast<Eigen::Index>(p.dim));
      // y_i = U x_i  <=>  Y = X U^T
      y.noalias() = x * u.transpose().triangularView<Eigen::Lower>();
      return p;
    }
    case MetricKind::Correlation:
    case MetricKind::Cosine: {
      p.kind = MetricKind::Cosine;
      p.rows.reserve(points.data().size());
      p.norms.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (m.kind() == MetricKind::Correlation) {
          auto c = centered(points[i]);
          p.rows.insert(p.rows.end(), c.begin(), c.end());
        } else {
          p.rows.insert(p.rows.end(), points[i].begin(), points[i].end());
        }
        p.norms[i] = norm(p.row(i), p.dim);
        if (p.norms[i] == 0.0) {
          throw DegenerateVector(m.kind() == MetricKind::Correlation
                                     ? "zero-variance vector under correlation distance"
                                     : "zero vector under cosine distance");
        }
      }
      return p;
    }
    default:
      p.kind = m.kind();
      p.rows.assign(points.data().begin(), points.data().end());
      return p;
  }
}

void check_dims(std::size_t a, std::size_t b) {
  if (a != b) {
    throw InvalidDataset("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

std::string_view to_string(MetricKind m) noexcept {
  switch (m) {
    case MetricKind::Euclidean: return "euclidean";
    case MetricKind::CityBlock: return "cityblock";
    case MetricKind::Chebyshev: return "chebyshev";
    case MetricKind::Correlation: return "correlation";
    case MetricKind::Cosine: return "cosine";
    case MetricKind::Mahalanobis: return "mahalanobis";
  }
  return "?";
}

MetricKind parse_metric(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  n.erase(std::remove(n.begin(), n.end(), '-'), n.end());
  if (n == "euclidean" || n == "l2") return MetricKind::Euclidean;
  if (n == "cityblock" || n == "manhattan" || n == "l1") return MetricKind::CityBlock;
  if (n == "chebyshev" || n == "linf") return MetricKind::Chebyshev;
  if (n == "correlation") return MetricKind::Correlation;
  if (n == "cosine") return MetricKind::Cosine;
  if (n == "mahalanobis") return MetricKind::Mahalanobis;
  throw InvalidDataset("unknown metric '" + std::string(name) + "'");
}

DistanceMetric::DistanceMetric(MetricKind kind) : kind_(kind) {
  if (kind == MetricKind::Mahalanobis) {
    throw SingularCovariance("Mahalanobis metric needs an inverse-covariance context");
  }
}

DistanceMetric DistanceMetric::mahalanobis(std::vector<double> inverse_covariance,
                                           std::size_t dim) {
  if (dim == 0 || inverse_covariance.size() != dim * dim) {
    throw SingularCovariance("inverse covariance must be a non-empty square matrix");
  }
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::Map<const RowMatrix> s(inverse_covariance.data(), d, d);
  const double scale = s.cwiseAbs().maxCoeff();
  if (!s.allFinite() || scale == 0.0 || !s.isApprox(s.transpose(), 1e-12)) {
    throw SingularCovariance("inverse covariance must be finite and symmetric");
  }
  Eigen::LLT<RowMatrix> llt(s);
  if (llt.info() != Eigen::Success) {
    throw SingularCovariance("inverse covariance is not positive definite");
  }
  DistanceMetric m;
  m.kind_ = MetricKind::Mahalanobis;
  m.dim_ = dim;
  m.whitening_.resize(dim * dim);
  Eigen::Map<RowMatrix>(m.whitening_.data(), d, d) = llt.matrixU();
  m.inverse_covariance_ = std::move(inverse_covariance);
  return m;
}

double distance(std::span<const double> a, std::span<const double> b, const DistanceMetric& m) {
  check_dims(a.size(), b.size());
  const std::size_t d = a.size();
  switch (m.kind()) {
    case MetricKind::Euclidean: return std::sqrt(squared_l2(a.data(), b.data(), d));
    case MetricKind::CityBlock: return l1(a.data(), b.data(), d);
    case MetricKind::Chebyshev: return linf(a.data(), b.data(), d);
    case MetricKind::Cosine: {
      const double na = norm(a.data(), d), nb = norm(b.data(), d);
      if (na == 0.0 || nb == 0.0) throw DegenerateVector("zero vector under cosine distance");
      return cosine_from(dot(a.data(), b.data(), d), na, nb);
    }
    case MetricKind::Correlation: {
      const auto ca = centered(a), cb = centered(b);
      const double na = norm(ca.data(), d), nb = norm(cb.data(), d);
      if (na == 0.0 || nb == 0.0) {
        throw DegenerateVector("zero-variance vector under correlation distance");
      }
      return cosine_from(dot(ca.data(), cb.data(), d), na, nb);
    }
    case MetricKind::Mahalanobis: {
      check_dims(d, m.context_dim());
      const auto s = m.inverse_covariance();
      double q = 0;
      for (std::size_t r = 0; r < d; ++r) {
        double row = 0;
        for (std::size_t c = 0; c < d; ++c) row += s[r * d + c] * (a[c] - b[c]);
        q += (a[r] - b[r]) * row;
      }
      return std::sqrt(std::max(q, 0.0));
    }
  }
  return 0.0;
}

PointSet::PointSet(std::size_t dim, std::vector<double> rows) : dim_(dim), data_(std::move(rows)) {
  if (dim_ == 0 && !data_.empty()) throw InvalidDataset("zero-dimensional points");
  if (dim_ != 0 && data_.size() % dim_ != 0) throw InvalidDataset("ragged point buffer");
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  std::vector<double> flat;
  for (const auto& r : rows) {
    check_dims(r.size(), rows.front().size());
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return PointSet(rows.front().size(), std::move(flat));
}

PointSet PointSet::gather(const Dataset& ds, std::span<const std::size_t> indices) {
  std::vector<double> flat;
  flat.reserve(indices.size() * ds.dim());
  for (auto i : indices) {
    auto p = ds.point(i);
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return PointSet(ds.dim(), std::move(flat));
}

PointSet PointSet::all(const Dataset& ds) {
  return PointSet(ds.dim(), std::vector<double>(ds.features().begin(), ds.features().end()));
}

std::vector<double> pairwise_condensed(const PointSet& points, const DistanceMetric& m,
                                       const KernelOptions& options) {
  const std::size_t n = points.size();
  std::vector<double> out(n < 2 ? 0 : n * (n - 1) / 2);
  if (n < 2) return out;
  const Prepared p = prepare(points, m);
  parallel_for(n - 1, options.workers, [&](std::size_t i) {
    double* dst = out.data() + condensed_index(n, i, i + 1);
    for (std::size_t j = i + 1; j < n; ++j) *dst++ = p(i, p, j);
  });
  return out;
}

DistanceSet icd_set(const PointSet& points, const DistanceMetric& m, const KernelOptions& options,
                    Label class_id) {
  const std::size_t n = points.size();
  if (n < 2) {
    throw DegenerateClass("class " + std::to_string(class_id) + " has " + std::to_string(n) +
                          " point(s); an intra-class distance set needs at least 2");
  }
  DistanceSet s;
  s.kind = SetKind::Intra;
  s.class_id = class_id;
  s.expected_cardinality = n * (n - 1) / 2;
  s.values = pairwise_condensed(points, m, options);
  return s;
}

DistanceSet bcd_set(const PointSet& a, const PointSet& b, const DistanceMetric& m,
                    const KernelOptions& options, Label class_id) {
  if (a.size() == 0 || b.size() == 0) {
    throw DegenerateClass("between-class distance set needs both sides non-empty");
  }
  check_dims(a.dim(), b.dim());
  const Prepared pa = prepare(a, m);
  const Prepared pb = prepare(b, m);
  DistanceSet s;
  s.kind = SetKind::Between;
  s.class_id = class_id;
  s.expected_cardinality = a.size() * b.size();
  s.values.resize(s.expected_cardinality);
  const std::size_t nb = b.size();
  parallel_for(a.size(), options.workers, [&](std::size_t i) {
    double* dst = s.values.data() + i * nb;
    for (std::size_t j = 0; j < nb; ++j) dst[j] = pa(i, pb, j);
  });
  return s;
}

DistanceMetric fit_mahalanobis(const Dataset& ds, std::optional<double> ridge) {
  const std::size_t n = ds.size();
  const std::size_t d = ds.dim();
  if (n < 2) throw SingularCovariance("covariance needs at least 2 points");
  if (ridge && !(*ridge >= 0.0 && std::isfinite(*ridge))) {
    throw SingularCovariance("ridge must be a non-negative finite number");
  }
  const auto di = static_cast<Eigen::Index>(d);
  Eigen::Map<const RowMatrix> x(ds.features().data(), static_cast<Eigen::Index>(n), di);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const RowMatrix centered = x.rowwise() - mean;
  RowMatrix cov = (centered.transpose() * centered) / static_cast<double>(n - 1);

  const double lambda = ridge.value_or(1e-6 * cov.trace() / static_cast<double>(d));
  cov.diagonal().array() += lambda;

  Eigen::SelfAdjointEigenSolver<RowMatrix> eig(cov);
  if (eig.info() != Eigen::Success) throw SingularCovariance("eigen decomposition failed");
  const double top = eig.eigenvalues().maxCoeff();
  const double bottom = eig.eigenvalues().minCoeff();
  // Relative floor: below this the inverse is dominated by rounding noise.
  const double floor = top * static_cast<double>(d) * 1e-12;
  if (!(top > 0.0) || bottom <= floor) {
    throw SingularCovariance("covariance is singular (smallest eigenvalue " +
                             std::to_string(bottom) + "); increase the ridge");
  }
  const RowMatrix inv = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
                        eig.eigenvectors().transpose();
  const RowMatrix sym = 0.5 * (inv + inv.transpose());
  std::vector<double> flat(sym.data(), sym.data() + d * d);
  return DistanceMetric::mahalanobis(std::move(flat), d);
}

}  // namespace dsi
