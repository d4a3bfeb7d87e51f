#include "dsi/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>

#include "dsi/errors.hpp"
#include "dsi/random.hpp"

namespace dsi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpiralTurns = 2.5;
constexpr double kBlobsSeparation = 7.0;
constexpr double kBlobSdSeparation = 10.0;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

using Point = std::array<double, 2>;

Point sample(Shape shape, int cls, double noise, double sd, Rng& rng) {
  switch (shape) {
    case Shape::Random:
      return {rng.uniform(), rng.uniform()};
    case Shape::XOR: {
      const bool flip = rng.uniform() < 0.5;
      double x = rng.uniform();
      double y = rng.uniform();
      // class 0: same-sign quadrants, class 1: opposite-sign quadrants
      if (cls == 1) y = -y;
      if (flip) {
        x = -x;
        y = -y;
      }
      if (noise > 0) {
        x += rng.normal(0.0, noise);
        y += rng.normal(0.0, noise);
      }
      return {x, y};
    }
    case Shape::Circles: {
      const double t = 2.0 * kPi * rng.uniform();
      const double r = (cls == 0 ? 1.0 : 0.5) + rng.normal(0.0, noise);
      return {r * std::cos(t), r * std::sin(t)};
    }
    case Shape::Moons: {
      const double t = kPi * rng.uniform();
      Point p = cls == 0 ? Point{std::cos(t), std::sin(t)}
                         : Point{1.0 - std::cos(t), 0.5 - std::sin(t)};
      p[0] += rng.normal(0.0, noise);
      p[1] += rng.normal(0.0, noise);
      return p;
    }
    case Shape::Spirals: {
      const double t = kSpiralTurns * 2.0 * kPi * std::sqrt(rng.uniform());
      const double sign = cls == 0 ? 1.0 : -1.0;
      return {sign * t * std::cos(t) + rng.normal(0.0, noise),
              sign * t * std::sin(t) + rng.normal(0.0, noise)};
    }
    case Shape::Blobs: {
      const double cx = cls == 0 ? 0.0 : kBlobsSeparation;
      return {rng.normal(cx, noise), rng.normal(0.0, noise)};
    }
    case Shape::BlobSD: {
      const double cx = cls == 0 ? 0.0 : kBlobSdSeparation;
      return {rng.normal(cx, sd), rng.normal(0.0, sd)};
    }
  }
  return {0.0, 0.0};
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw SpecError("invalid number for " + key + ": '" + value + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw SpecError("invalid integer for " + key + ": '" + value + "'");
  }
  return v;
}

}  // namespace

std::string_view to_string(Shape s) noexcept {
  switch (s) {
    case Shape::Random: return "random";
    case Shape::Spirals: return "spirals";
    case Shape::XOR: return "xor";
    case Shape::Moons: return "moons";
    case Shape::Circles: return "circles";
    case Shape::Blobs: return "blobs";
    case Shape::BlobSD: return "blob-sd";
  }
  return "?";
}

Shape parse_shape(std::string_view name) {
  const std::string n = lower(name);
  if (n == "random") return Shape::Random;
  if (n == "spirals" || n == "spiral") return Shape::Spirals;
  if (n == "xor") return Shape::XOR;
  if (n == "moons" || n == "moon") return Shape::Moons;
  if (n == "circles" || n == "circle") return Shape::Circles;
  if (n == "blobs" || n == "blob") return Shape::Blobs;
  if (n == "blob-sd" || n == "blobsd" || n == "blob_sd") return Shape::BlobSD;
  throw SpecError("unknown shape '" + std::string(name) + "'");
}

double default_noise(Shape s) noexcept {
  switch (s) {
    case Shape::Circles:
    case Shape::Moons: return 0.05;
    case Shape::Spirals: return 0.2;
    case Shape::Blobs: return 1.0;
    default: return 0.0;
  }
}

double GeneratorSpec::effective_noise() const { return noise.value_or(default_noise(shape)); }

void GeneratorSpec::validate() const {
  if (n_per_class < 2) throw SpecError("n_per_class must be at least 2");
  if (noise && !(std::isfinite(*noise) && *noise >= 0.0)) {
    throw SpecError("noise must be a non-negative finite number");
  }
  if (shape == Shape::Blobs && effective_noise() <= 0.0) {
    throw SpecError("blobs need a positive SD (noise)");
  }
  if (shape == Shape::BlobSD) {
    if (!cluster_sd) throw SpecError("blob-sd requires cluster_sd");
    if (!(std::isfinite(*cluster_sd) && *cluster_sd > 0.0)) {
      throw SpecError("cluster_sd must be positive");
    }
  } else if (cluster_sd) {
    throw SpecError("cluster_sd applies only to blob-sd");
  }
}

Dataset generate(const GeneratorSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_per_class;
  const double noise = spec.effective_noise();
  const double sd = spec.cluster_sd.value_or(0.0);
  std::vector<double> features;
  features.reserve(4 * n);
  std::vector<Label> labels;
  labels.reserve(2 * n);
  for (int cls = 0; cls < 2; ++cls) {
    Rng rng(spec.seed, static_cast<std::uint64_t>(cls));
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = sample(spec.shape, cls, noise, sd, rng);
      features.push_back(p[0]);
      features.push_back(p[1]);
      labels.push_back(static_cast<Label>(cls));
    }
  }
  return Dataset(2, std::move(features), std::move(labels));
}

GeneratorSpec spec_from_key_values(const std::map<std::string, std::string>& kv) {
  GeneratorSpec spec;
  for (const auto& [key, value] : kv) {
    if (key == "shape") {
      spec.shape = parse_shape(value);
    } else if (key == "n_per_class") {
      spec.n_per_class = static_cast<std::size_t>(parse_uint(key, value));
    } else if (key == "seed") {
      spec.seed = parse_uint(key, value);
    } else if (key == "noise") {
      spec.noise = parse_double(key, value);
    } else if (key == "cluster_sd") {
      spec.cluster_sd = parse_double(key, value);
    } else {
      throw SpecError("unknown generator key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

std::map<std::string, std::string> parse_key_value_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw SpecError("config line " + std::to_string(lineno) + " is not key=value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

double normalize_accuracy(double accuracy) {
  if (!(accuracy >= 0.5 && accuracy <= 1.0)) {
    throw DomainError("accuracy " + std::to_string(accuracy) + " outside [0.5, 1]");
  }
  return (accuracy - 0.5) / 0.5;
}

}  // namespace dsi
