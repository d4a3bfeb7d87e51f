#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "dsi/errors.hpp"
#include "dsi/fetch.hpp"

using namespace dsi;
namespace fs = std::filesystem;

namespace {

class LocalServer {
 public:
  explicit LocalServer(std::string payload) : payload_(std::move(payload)) {
    server_.Get("/data.bin", [this](const httplib::Request&, httplib::Response& res) {
      ++hits_;
      res.set_content(payload_, "application/octet-stream");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/data.bin"; }
  int hits() const { return hits_; }
  std::string& payload() { return payload_; }

 private:
  httplib::Server server_;
  std::string payload_;
  std::atomic<int> hits_{0};
  int port_ = 0;
  std::thread thread_;
};

class FetchTest : public ::testing::Test {
 protected:
  void SetUp() override {
    cache_ = fs::temp_directory_path() /
             ("dsi-fetch-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
              "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(cache_);
  }
  void TearDown() override { fs::remove_all(cache_); }

  FetchOptions options() const {
    FetchOptions o;
    o.cache_dir = cache_;
    o.timeout_seconds = 20;
    return o;
  }

  fs::path cache_;
};

std::vector<std::uint8_t> as_bytes(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex({}), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex(as_bytes("abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(FetchTest, CorrectDigestReturnsBytesAndPopulatesCache) {
  LocalServer server(std::string(5000, 'x') + "payload");
  const auto expected = as_bytes(server.payload());
  const auto digest = sha256_hex(expected);
  EXPECT_EQ(fetch_dataset(server.url(), digest, options()), expected);
  EXPECT_TRUE(fs::is_regular_file(cache_path(cache_, digest)));
  EXPECT_EQ(server.hits(), 1);
}

TEST_F(FetchTest, RepeatCallIsServedFromCache) {
  LocalServer server("cached payload");
  const auto digest = sha256_hex(as_bytes(server.payload()));
  fetch_dataset(server.url(), digest, options());
  const auto again = fetch_dataset(server.url(), digest, options());
  EXPECT_EQ(again, as_bytes("cached payload"));
  EXPECT_EQ(server.hits(), 1);
  // Upper-case and prefixed digests address the same entry.
  std::string upper = digest;
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  fetch_dataset(server.url(), "sha256:" + upper, options());
  EXPECT_EQ(server.hits(), 1);
}

TEST_F(FetchTest, FlippedByteIsAnIntegrityErrorAndLeavesNoCacheEntry) {
  LocalServer server("abcdefgh");
  const auto digest = sha256_hex(as_bytes("abcdefgh"));
  server.payload()[3] ^= 0x01;
  EXPECT_THROW(fetch_dataset(server.url(), digest, options()), IntegrityError);
  EXPECT_FALSE(fs::exists(cache_path(cache_, digest)));
}

TEST_F(FetchTest, CorruptCacheEntryIsPurgedAndRefetched) {
  LocalServer server("good bytes");
  const auto digest = sha256_hex(as_bytes("good bytes"));
  fetch_dataset(server.url(), digest, options());
  std::ofstream(cache_path(cache_, digest), std::ios::binary | std::ios::trunc) << "bad bytes";
  EXPECT_EQ(fetch_dataset(server.url(), digest, options()), as_bytes("good bytes"));
  EXPECT_EQ(server.hits(), 2);
}

TEST_F(FetchTest, NetworkFailureIsAFetchError) {
  const auto digest = sha256_hex(as_bytes("x"));
  // Port 9 (discard) on loopback is closed in the test environment.
  EXPECT_THROW(fetch_dataset("http://127.0.0.1:9/none", digest, options()), FetchError);
}

TEST_F(FetchTest, FileUrlsWork) {
  fs::create_directories(cache_);
  const auto src = cache_ / "src.bin";
  std::ofstream(src, std::ios::binary) << "local file";
  const auto digest = sha256_hex(as_bytes("local file"));
  EXPECT_EQ(fetch_dataset("file://" + src.string(), digest, options()), as_bytes("local file"));
}

TEST_F(FetchTest, MalformedDigestIsRejected) {
  EXPECT_THROW(fetch_dataset("http://127.0.0.1:9/", "1234", options()), Error);
  EXPECT_THROW(fetch_dataset("http://127.0.0.1:9/", "md5:" + std::string(64, 'a'), options()),
               Error);
}

TEST(CacheDir, EnvironmentOverride) {
  ::setenv(kCacheDirEnv, "/tmp/dsi-cache-override", 1);
  EXPECT_EQ(default_cache_dir(), fs::path("/tmp/dsi-cache-override"));
  ::unsetenv(kCacheDirEnv);
  EXPECT_NE(default_cache_dir(), fs::path("/tmp/dsi-cache-override"));
}
