#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dsi {

/// Environment variable that overrides the fetch cache location.
inline constexpr const char* kCacheDirEnv = "DSI_CACHE_DIR";

/// $DSI_CACHE_DIR, else $XDG_CACHE_HOME/dsi, else $HOME/.cache/dsi, else ./.dsi-cache.
std::filesystem::path default_cache_dir();

/// Lowercase hex SHA-256.
std::string sha256_hex(std::span<const std::uint8_t> bytes);

struct FetchOptions {
  std::optional<std::filesystem::path> cache_dir;  // default_cache_dir() when unset
  long timeout_seconds = 600;
};

/// Content-addressed cache location for a digest: <cache>/sha256/<hex>.
std::filesystem::path cache_path(const std::filesystem::path& cache_dir, const std::string& digest);

/// Returns the payload at `url` only if its SHA-256 equals `expected_digest`.
/// A cached copy under the digest is served without network I/O (and is
/// re-verified; a corrupt entry is purged and re-downloaded). Any URL scheme
/// libcurl supports works, including file://.
/// Throws FetchError on transfer failure and IntegrityError on digest mismatch.
std::vector<std::uint8_t> fetch_dataset(const std::string& url, const std::string& expected_digest,
                                        const FetchOptions& options = {});

}  // namespace dsi
