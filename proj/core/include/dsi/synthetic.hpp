#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "dsi/dataset.hpp"

namespace dsi {

enum class Shape { Random, Spirals, XOR, Moons, Circles, Blobs, BlobSD };

std::string_view to_string(Shape s) noexcept;
/// Case-insensitive; accepts "blob-sd", "blobsd", "blob_sd". Throws SpecError.
Shape parse_shape(std::string_view name);

/// Two-class, two-dimensional generator parameters.
///
/// Class 0 draws from stream 0 and class 1 from stream 1 of `seed` (see Rng),
/// so each class is reproducible on its own.
///
/// Shape recipes (noise defaults in parentheses):
///   Random   both classes uniform on [0,1)^2 (noise unused)
///   XOR      uniform on [-1,1]^2 quadrants; class 0 in (+,+)/(-,-), class 1 in
///            (+,-)/(-,+); isotropic Gaussian jitter (0)
///   Circles  rings of radius 1 (class 0) and 0.5 (class 1), uniform angle,
///            Gaussian radial noise (0.05)
///   Moons    class 0 on (cos t, sin t), class 1 on (1 - cos t, 0.5 - sin t),
///            t uniform on [0, pi], isotropic Gaussian noise (0.05)
///   Spirals  Archimedean r = t with t = 2.5 * 2pi * sqrt(u); class 1 is class 0
///            rotated by pi; isotropic Gaussian noise (0.2)
///   Blobs    isotropic Gaussians at (0,0) and (7,0), noise is the SD (1.0)
///   BlobSD   isotropic Gaussians at (0,0) and (10,0) with SD cluster_sd
struct GeneratorSpec {
  Shape shape = Shape::Random;
  std::size_t n_per_class = 1000;
  std::uint64_t seed = 0;
  std::optional<double> noise;       // shape default when unset
  std::optional<double> cluster_sd;  // BlobSD only, required there

  double effective_noise() const;
  /// Throws SpecError on an invalid combination.
  void validate() const;
};

double default_noise(Shape s) noexcept;

Dataset generate(const GeneratorSpec& spec);

/// Builds a spec from key=value pairs: shape, n_per_class, seed, noise, cluster_sd.
/// Unknown keys throw SpecError.
GeneratorSpec spec_from_key_values(const std::map<std::string, std::string>& kv);

/// Parses "key=value" lines; '#' starts a comment, blank lines are skipped.
std::map<std::string, std::string> parse_key_value_config(std::istream& in);

/// Rescales a two-class accuracy from [0.5, 1] to [0, 1]. Throws DomainError.
double normalize_accuracy(double accuracy);

}  // namespace dsi
