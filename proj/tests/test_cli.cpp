#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "dsi/dataset.hpp"
#include "dsi/fetch.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = dsi::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("dsi-cli-test-") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string make(const std::string& name, const std::string& shape, int seed, int n = 300) {
    const auto r = cli({"generate", "--shape", shape, "--seed", std::to_string(seed),
                        "--n-per-class", std::to_string(n), "-o", path(name)});
    EXPECT_EQ(r.code, 0) << r.err;
    return path(name);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, HelpAndVersionExitZero) {
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({"measure", "--help"}).code, 0);
  EXPECT_NE(cli({"--version"}).out.find("dsi"), std::string::npos);
}

TEST_F(CliTest, GenerateIsDeterministicAndEchoesSeed) {
  const auto a = cli({"generate", "--shape", "moons", "--seed", "3", "--n-per-class", "50"});
  const auto b = cli({"generate", "--shape", "moons", "--seed", "3", "--n-per-class", "50"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.err.find("seed=3"), std::string::npos);
  std::istringstream in(a.out);
  dsi::CsvOptions opt;
  opt.label_column = std::string("label");
  EXPECT_EQ(dsi::load_csv(in, opt).size(), 100u);
}

TEST_F(CliTest, ConfigFileValuesAreOverriddenByFlags) {
  std::ofstream(path("gen.cfg")) << "shape=blob-sd\ncluster_sd=3\nn_per_class=40\nseed=1\n";
  const auto from_cfg = cli({"generate", "--config", path("gen.cfg")});
  const auto flags = cli({"generate", "--shape", "blob-sd", "--cluster-sd", "3", "--n-per-class",
                          "40", "--seed", "1"});
  ASSERT_EQ(from_cfg.code, 0) << from_cfg.err;
  EXPECT_EQ(from_cfg.out, flags.out);
  const auto override = cli({"generate", "--config", path("gen.cfg"), "--seed", "2"});
  EXPECT_NE(override.out, from_cfg.out);
  EXPECT_NE(override.err.find("seed=2"), std::string::npos);
}

TEST_F(CliTest, MeasureBlobsJsonReport) {
  const auto csv = make("blobs.csv", "blobs", 7, 1000);
  const auto r = cli({"measure", "--input", csv, "--label-col", "label"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], dsi::cli::kSchemaVersion);
  EXPECT_EQ(j["command"], "measure");
  EXPECT_EQ(j["n_points"], 2000);
  EXPECT_EQ(j["metric"], "euclidean");
  EXPECT_EQ(j["stat"], "ks");
  EXPECT_EQ(j["seed"], 0);
  EXPECT_NEAR(j["dsi"].get<double>(), 0.973, 0.06);
  EXPECT_DOUBLE_EQ(j["complexity"].get<double>(), 1.0 - j["dsi"].get<double>());
  EXPECT_EQ(j["per_class_similarity"].size(), 2u);
  EXPECT_TRUE(j["per_class_similarity"].contains("0"));
  EXPECT_FALSE(j.contains("wall_time"));
}

TEST_F(CliTest, MeasureOutputIsByteIdenticalAcrossRunsAndThreadCounts) {
  const auto csv = make("xor.csv", "xor", 2);
  const auto a = cli({"measure", "--input", csv, "--threads", "1", "-o", path("a.json")});
  const auto b = cli({"measure", "--input", csv, "--threads", "4", "-o", path("b.json")});
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  const auto s1 = cli({"measure", "--input", csv, "--subsample", "100", "--trials", "4", "--seed", "9"});
  const auto s2 = cli({"measure", "--input", csv, "--subsample", "100", "--trials", "4", "--seed", "9"});
  EXPECT_EQ(s1.out, s2.out);
  const auto j = nlohmann::json::parse(s1.out);
  EXPECT_EQ(j["seed"], 9);
  EXPECT_EQ(j["subsample"]["trials"], 4);
  EXPECT_EQ(j["subsample"]["trial_values"].size(), 4u);
  const auto timed = cli({"measure", "--input", csv, "--timing"});
  EXPECT_TRUE(nlohmann::json::parse(timed.out).contains("wall_time"));
}

TEST_F(CliTest, MeasureMetricsStatsAndHistogram) {
  const auto csv = make("circles.csv", "circles", 1, 150);
  for (const char* m : {"cityblock", "chebyshev", "cosine", "correlation", "mahalanobis"}) {
    const auto r = cli({"measure", "--input", csv, "--metric", m});
    ASSERT_EQ(r.code, 0) << m << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["metric"], m);
  }
  const auto w = cli({"measure", "--input", csv, "--stat", "wasserstein", "--histogram",
                      path("h.csv"), "--bins", "10"});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_EQ(nlohmann::json::parse(w.out)["stat"], "wasserstein");
  const auto hist = slurp(path("h.csv"));
  EXPECT_EQ(hist.rfind("bin_left,bin_right,count,set_kind\n", 0), 0u);
  EXPECT_EQ(std::count(hist.begin(), hist.end(), '\n'), 1 + 2 * 2 * 10);
  const auto text = cli({"measure", "--input", csv, "--format", "text"});
  EXPECT_NE(text.out.find("1-DSI"), std::string::npos);
}

TEST_F(CliTest, MeasureCifarBatch) {
  std::vector<std::uint8_t> bytes(6 * dsi::kCifar10RecordBytes);
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = static_cast<std::uint8_t>(i * 31 % 251);
  for (std::size_t r = 0; r < 6; ++r) bytes[r * dsi::kCifar10RecordBytes] = r % 2;
  std::ofstream(path("b.bin"), std::ios::binary)
      .write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  const auto r = cli({"measure", "--cifar", path("b.bin")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["dim"], 3072);
}

TEST_F(CliTest, UsageErrorsExitTwoWithSuggestion) {
  const auto csv = make("r.csv", "random", 1, 20);
  auto r = cli({"measure", "--inptu", csv});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--input"), std::string::npos);
  r = cli({"mesure", "--input", csv});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("measure"), std::string::npos);
  EXPECT_EQ(cli({"measure", "--input", csv, "--cifar", csv}).code, 2);
  EXPECT_EQ(cli({"measure", "--input", csv, "--trials", "3"}).code, 2);
  EXPECT_EQ(cli({"measure", "--input", csv, "--metric", "hamming"}).code, 2);
  EXPECT_EQ(cli({"measure", "--input", csv, "--ridge", "0.1"}).code, 2);
  EXPECT_EQ(cli({"measure"}).code, 2);
  EXPECT_EQ(cli({"generate", "--shape", "triangle"}).code, 2);
  EXPECT_EQ(cli({"compare", "--input", csv, "--measures", "N1,X9"}).code, 2);
  EXPECT_EQ(cli({"repro", "figure12"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
}

TEST_F(CliTest, DataErrorsExitOne) {
  std::ofstream(path("bad.csv")) << "x,label\n1,a\nnan,b\n";
  auto r = cli({"measure", "--input", path("bad.csv"), "-o", path("never.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("row 2"), std::string::npos) << r.err;
  std::ofstream(path("one.csv")) << "x,label\n1,a\n2,a\n";
  EXPECT_EQ(cli({"measure", "--input", path("one.csv")}).code, 1);
  std::ofstream(path("tiny.csv")) << "x,label\n1,a\n2,b\n3,b\n";
  EXPECT_EQ(cli({"measure", "--input", path("tiny.csv")}).code, 1);
  EXPECT_FALSE(fs::exists(path("never.json")));
}

TEST_F(CliTest, CompareTableHasOneDsiRow) {
  const auto a = make("random.csv", "random", 1, 100);
  const auto b = make("blobs.csv", "blobs", 1, 100);
  const auto r = cli({"compare", "--input", a, "--input", b, "--measures", "N3,T1", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> all;
  while (std::getline(lines, line)) all.push_back(line);
  ASSERT_EQ(all.size(), 5u);
  EXPECT_EQ(all[0], "measure,random,blobs");
  EXPECT_EQ(all[1].rfind("N3,", 0), 0u);
  EXPECT_EQ(all[2].rfind("T1,", 0), 0u);
  EXPECT_EQ(all[3].rfind("1-DSI,", 0), 0u);
  EXPECT_EQ(all[4], "seed,5,5");
}

TEST_F(CliTest, IdentityOfTwoSamplesFromOneDistribution) {
  const auto a = make("u1.csv", "random", 1, 400);
  const auto b = make("u2.csv", "random", 2, 400);
  const auto r = cli({"identity", "--a", a, "--b", b});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["n_a"], 800);
  EXPECT_LT(j["score"].get<double>(), 0.02);
  EXPECT_EQ(cli({"identity", "--a", a}).code, 2);
}

TEST_F(CliTest, FetchVerifiesDigest) {
  std::ofstream(path("payload.bin"), std::ios::binary) << "some bytes";
  const std::string text = "some bytes";
  const std::vector<std::uint8_t> bytes(text.begin(), text.end());
  const auto digest = dsi::sha256_hex(bytes);
  const std::string url = "file://" + path("payload.bin");
  auto r = cli({"fetch", "--url", url, "--sha256", digest, "--cache-dir", path("cache"), "-o",
                path("copy.bin")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["sha256"], digest);
  EXPECT_EQ(slurp(path("copy.bin")), text);
  r = cli({"fetch", "--url", url, "--sha256", std::string(64, '0'), "--cache-dir", path("cache")});
  EXPECT_EQ(r.code, 1);
}

TEST_F(CliTest, ReproTable2Layout) {
  const auto r = cli({"repro", "table2", "--seed", "7", "--n-per-class", "120"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("measure,random,spirals,xor,moons,circles,blobs\n", 0), 0u);
  EXPECT_NE(r.out.find("\n1-DSI,"), std::string::npos);
  EXPECT_NE(r.out.find("\nseed,7,7,7,7,7,7\n"), std::string::npos);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 11);
  EXPECT_EQ(cli({"repro", "table2", "--seed", "7", "--n-per-class", "120"}).out, r.out);
}

TEST_F(CliTest, ReproSweeps) {
  auto r = cli({"repro", "figure7", "--n-per-class", "60"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 10);
  EXPECT_EQ(r.out.rfind("sd,dsi_ks,dsi_wasserstein", 0), 0u);
  r = cli({"repro", "figure4", "--n-per-class", "60", "--format", "text"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Density"), std::string::npos);
  r = cli({"repro", "section5_2", "--n-per-class", "50", "--runs", "2", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("uniform_mean_of_2,50,50,"), std::string::npos);
  EXPECT_NE(r.out.find("uniform_mean_of_2,100,100,"), std::string::npos);
}
