#include "dsi/fetch.hpp"

#include <curl/curl.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <memory>

#include "dsi/errors.hpp"

namespace dsi {

namespace fs = std::filesystem;

fs::path default_cache_dir() {
  if (const char* env = std::getenv(kCacheDirEnv); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "dsi";
  if (const char* home = std::getenv("HOME"); home && *home) {
    return fs::path(home) / ".cache" / "dsi";
  }
  return ".dsi-cache";
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

namespace {

std::string normalize_digest(const std::string& digest) {
  std::string d = digest;
  if (auto colon = d.find(':'); colon != std::string::npos) {
    if (d.substr(0, colon) != "sha256") {
      throw Error("unsupported digest algorithm '" + d.substr(0, colon) + "'; use sha256");
    }
    d = d.substr(colon + 1);
  }
  std::transform(d.begin(), d.end(), d.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (d.size() != 64 || !std::all_of(d.begin(), d.end(), [](unsigned char c) {
        return std::isxdigit(c) != 0;
      })) {
    throw Error("expected a 64-digit hex SHA-256 digest, got '" + digest + "'");
  }
  return d;
}

std::vector<std::uint8_t> read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

size_t append_body(char* ptr, size_t size, size_t nmemb, void* userdata) {
  auto* buf = static_cast<std::vector<std::uint8_t>*>(userdata);
  buf->insert(buf->end(), ptr, ptr + size * nmemb);
  return size * nmemb;
}

std::vector<std::uint8_t> download(const std::string& url, long timeout_seconds) {
  static const bool initialized = curl_global_init(CURL_GLOBAL_DEFAULT) == CURLE_OK;
  if (!initialized) throw FetchError("libcurl initialization failed");

  std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(), curl_easy_cleanup);
  if (!curl) throw FetchError("libcurl handle allocation failed");
  std::vector<std::uint8_t> body;
  char errbuf[CURL_ERROR_SIZE] = {};
  curl_easy_setopt(curl.get(), CURLOPT_URL, url.c_str());
  curl_easy_setopt(curl.get(), CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(curl.get(), CURLOPT_FAILONERROR, 1L);
  curl_easy_setopt(curl.get(), CURLOPT_TIMEOUT, timeout_seconds);
  curl_easy_setopt(curl.get(), CURLOPT_WRITEFUNCTION, append_body);
  curl_easy_setopt(curl.get(), CURLOPT_WRITEDATA, &body);
  curl_easy_setopt(curl.get(), CURLOPT_ERRORBUFFER, errbuf);
  const CURLcode rc = curl_easy_perform(curl.get());
  if (rc != CURLE_OK) {
    throw FetchError("fetching " + url + " failed: " +
                     (errbuf[0] ? std::string(errbuf) : curl_easy_strerror(rc)));
  }
  return body;
}

}  // namespace

fs::path cache_path(const fs::path& cache_dir, const std::string& digest) {
  return cache_dir / "sha256" / normalize_digest(digest);
}

std::vector<std::uint8_t> fetch_dataset(const std::string& url, const std::string& expected_digest,
                                        const FetchOptions& options) {
  const std::string digest = normalize_digest(expected_digest);
  const fs::path dir = options.cache_dir.value_or(default_cache_dir());
  const fs::path entry = cache_path(dir, digest);

  std::error_code ec;
  if (fs::is_regular_file(entry, ec)) {
    auto cached = read_all(entry);
    if (sha256_hex(cached) == digest) return cached;
    fs::remove(entry, ec);
  }

  auto body = download(url, options.timeout_seconds);
  const std::string actual = sha256_hex(body);
  if (actual != digest) {
    fs::remove(entry, ec);
    throw IntegrityError("digest mismatch for " + url + ": expected " + digest + ", got " + actual);
  }

  fs::create_directories(entry.parent_path(), ec);
  if (!ec) {
    // Write-then-rename so a concurrent reader never sees a partial entry.
    fs::path tmp = entry;
    tmp += ".part";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out.write(reinterpret_cast<const char*>(body.data()),
                static_cast<std::streamsize>(body.size()));
    }
    fs::rename(tmp, entry, ec);
    if (ec) fs::remove(tmp, ec);
  }
  return body;
}

}  // namespace dsi
