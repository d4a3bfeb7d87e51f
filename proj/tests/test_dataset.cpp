#include <gtest/gtest.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "dsi/dataset.hpp"
#include "dsi/errors.hpp"
#include "oracles.hpp"

using namespace dsi;

namespace {

std::vector<std::uint8_t> random_cifar_batch(std::size_t records, std::uint64_t seed,
                                             std::size_t record_bytes = kCifar10RecordBytes,
                                             unsigned classes = 10) {
  std::mt19937_64 g(seed);
  std::vector<std::uint8_t> bytes(records * record_bytes);
  for (std::size_t r = 0; r < records; ++r) {
    for (std::size_t k = 0; k < record_bytes; ++k) {
      bytes[r * record_bytes + k] = static_cast<std::uint8_t>(g() & 0xFF);
    }
    bytes[r * record_bytes] = static_cast<std::uint8_t>(g() % classes);
  }
  return bytes;
}

}  // namespace

TEST(Dataset, RejectsNonFiniteAndRaggedInput) {
  EXPECT_THROW(Dataset(2, {0.0, 1.0, 2.0}, {0, 1}), InvalidDataset);
  EXPECT_THROW(Dataset(1, {0.0, std::nan("")}, {0, 1}), InvalidDataset);
  EXPECT_THROW(Dataset(0, {}, {}), InvalidDataset);
  EXPECT_THROW(Dataset::from_rows({{0.0, 1.0}, {2.0}}, {0, 1}), InvalidDataset);
}

TEST(Csv, ThreeRowExample) {
  std::istringstream in("x,y,label\n0,0,a\n1,1,a\n2,2,b");
  CsvOptions opt;
  opt.label_column = std::string("label");
  const auto ds = load_csv(in, opt);
  EXPECT_EQ(ds.dim(), 2u);
  EXPECT_EQ(ds.size(), 3u);
  EXPECT_EQ(std::vector<Label>(ds.labels().begin(), ds.labels().end()),
            (std::vector<Label>{0, 0, 1}));
  EXPECT_EQ(ds.label_names(), (std::vector<std::string>{"a", "b"}));
  EXPECT_DOUBLE_EQ(ds.point(2)[1], 2.0);
}

TEST(Csv, NanCellIsAParseErrorOnThatRow) {
  std::istringstream in("x,y,label\n1,NaN,a\n2,2,b\n");
  CsvOptions opt;
  opt.label_column = std::string("label");
  try {
    load_csv(in, opt);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.column(), 2u);
  }
}

TEST(Csv, RaggedAndNonNumericRows) {
  CsvOptions opt;
  opt.label_column = std::size_t{2};
  std::istringstream ragged("x,y,label\n0,0,a\n1,b\n");
  try {
    load_csv(ragged, opt);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  std::istringstream text("x,y,label\n0,zero,a\n1,1,b\n");
  EXPECT_THROW(load_csv(text, opt), ParseError);
}

TEST(Csv, SingleClassIsDegenerate) {
  std::istringstream in("x,label\n0,a\n1,a\n");
  CsvOptions opt;
  opt.label_column = std::string("label");
  EXPECT_THROW(load_csv(in, opt), DegenerateDataset);
  std::istringstream again("x,label\n0,a\n1,a\n");
  opt.min_classes = 1;
  EXPECT_EQ(load_csv(again, opt).size(), 2u);
}

TEST(Csv, QuotingDelimiterAndNoHeader) {
  std::istringstream in("\"cat; 1\";0.5;1e3\n\"dog \"\"x\"\"\";-2;4\r\n");
  CsvOptions opt;
  opt.has_header = false;
  opt.delimiter = ';';
  opt.label_column = std::size_t{0};
  const auto ds = load_csv(in, opt);
  EXPECT_EQ(ds.dim(), 2u);
  EXPECT_EQ(ds.label_names(), (std::vector<std::string>{"cat; 1", "dog \"x\""}));
  EXPECT_DOUBLE_EQ(ds.point(0)[1], 1000.0);
}

TEST(Csv, LabelMappingIsStableAcrossRuns) {
  const std::string text = "f,label\n1,z\n2,y\n3,z\n4,x\n";
  CsvOptions opt;
  opt.label_column = std::string("label");
  std::istringstream a(text), b(text);
  EXPECT_EQ(load_csv(a, opt), load_csv(b, opt));
}

TEST(Cifar10, ZeroRecord) {
  std::vector<std::uint8_t> bytes(kCifar10RecordBytes, 0);
  const auto ds = load_cifar10_batch(bytes);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.dim(), 3072u);
  EXPECT_EQ(ds.label(0), 0u);
  for (double v : ds.point(0)) EXPECT_EQ(v, 0.0);
}

TEST(Cifar10, TwoRecordLayout) {
  std::vector<std::uint8_t> bytes(2 * kCifar10RecordBytes, 0);
  bytes[0] = 3;
  bytes[kCifar10RecordBytes] = 7;
  bytes[1] = 255;                            // first red pixel of record 0
  bytes[kCifar10RecordBytes + 1 + 2048] = 9;  // first blue pixel of record 1
  const auto ds = load_cifar10_batch(bytes);
  EXPECT_EQ(ds.label(0), 3u);
  EXPECT_EQ(ds.label(1), 7u);
  EXPECT_EQ(ds.point(0)[0], 255.0);
  EXPECT_EQ(ds.point(1)[2048], 9.0);
}

TEST(Cifar10, FormatErrors) {
  std::vector<std::uint8_t> short_batch(kCifar10RecordBytes + 5, 0);
  EXPECT_THROW(load_cifar10_batch(short_batch), FormatError);
  std::vector<std::uint8_t> bad_label(kCifar10RecordBytes, 0);
  bad_label[0] = 10;
  EXPECT_THROW(load_cifar10_batch(bad_label), FormatError);
}

TEST(Cifar10, FullBatchLabelHistogramMatchesByteStrideScan) {
  const auto bytes = random_cifar_batch(10000, 11);
  const auto ds = load_cifar10_batch(bytes);
  ASSERT_EQ(ds.size(), 10000u);
  std::array<std::size_t, 10> scan{}, loaded{};
  for (std::size_t off = 0; off < bytes.size(); off += 3073) ++scan[bytes[off]];
  for (auto l : ds.labels()) ++loaded[l];
  EXPECT_EQ(scan, loaded);
}

TEST(Cifar10, SerializeRoundTripIsByteExact) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto bytes = random_cifar_batch(1 + seed * 7, seed);
    EXPECT_EQ(serialize_cifar10_batch(load_cifar10_batch(bytes)), bytes);
  }
}

TEST(Cifar10, CsvExportRoundTripsAgainstBinaryLoader) {
  const auto bytes = random_cifar_batch(300, 5);
  const auto binary = load_cifar10_batch(bytes);
  std::stringstream csv;
  write_csv(csv, binary);
  CsvOptions opt;
  opt.label_column = std::string("label");
  const auto text = load_csv(csv, opt);
  ASSERT_EQ(text.dim(), 3072u);
  ASSERT_EQ(text.size(), binary.size());
  EXPECT_TRUE(std::equal(text.features().begin(), text.features().end(),
                         binary.features().begin()));
  // CSV labels are densified by first appearance, so compare the original names.
  for (std::size_t i = 0; i < text.size(); ++i) {
    EXPECT_EQ(text.label_names()[text.label(i)], std::to_string(binary.label(i)));
  }
}

TEST(Cifar10, TrainingDirectoryConcatenatesFiveBatches) {
  namespace fs = std::filesystem;
  const auto root = fs::temp_directory_path() / "dsi-cifar-dir-test";
  const auto dir = root / "cifar-10-batches-bin";
  fs::remove_all(root);
  fs::create_directories(dir);
  std::vector<Dataset> expected;
  for (int b = 1; b <= 5; ++b) {
    const auto bytes = random_cifar_batch(3, 100 + b);
    std::ofstream(dir / ("data_batch_" + std::to_string(b) + ".bin"), std::ios::binary)
        .write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    expected.push_back(load_cifar10_batch(bytes));
  }
  const auto all = load_cifar10_training_set(root.string());
  EXPECT_EQ(all, concatenate(expected));
  EXPECT_EQ(load_cifar10_training_set(dir.string()), all);
  fs::remove(dir / "data_batch_4.bin");
  EXPECT_THROW(load_cifar10_training_set(root.string()), Error);
  EXPECT_THROW(load_cifar10_test_set(root.string()), Error);
  fs::remove_all(root);
}

TEST(Cifar100, UsesCoarseLabel) {
  std::vector<std::uint8_t> bytes(kCifar100RecordBytes, 1);
  bytes[0] = 19;  // coarse
  bytes[1] = 99;  // fine, ignored
  const auto ds = load_cifar100_batch(bytes);
  EXPECT_EQ(ds.label(0), 19u);
  EXPECT_EQ(ds.point(0)[0], 1.0);
  bytes[0] = 20;
  EXPECT_THROW(load_cifar100_batch(bytes), FormatError);
}

TEST(Partition, GroupsByLabel) {
  const auto ds = Dataset(1, {0, 1, 2, 3}, {0, 1, 0, 1});
  const auto p = partition(ds);
  ASSERT_EQ(p.class_count(), 2u);
  EXPECT_EQ(p.groups.at(0), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(p.groups.at(1), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(p.complement(0, 4), (std::vector<std::size_t>{1, 3}));
}

TEST(Partition, SingleClassFailsTheTwoClassCheck) {
  const auto p = partition(Dataset(1, {0, 1, 2}, {2, 2, 2}));
  EXPECT_EQ(p.class_count(), 1u);
  EXPECT_THROW(require_two_classes(p), DegenerateDataset);
}

TEST(Partition, IsABijectionOnIndices) {
  std::mt19937_64 g(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + g() % 200;
    const std::size_t k = 1 + g() % 7;
    std::vector<Label> labels(n);
    for (auto& l : labels) l = static_cast<Label>(g() % k);
    const auto ds = Dataset(1, std::vector<double>(n, 0.0), labels);
    const auto p = partition(ds);
    std::vector<int> seen(n, 0);
    std::size_t total = 0;
    for (const auto& [label, idx] : p.groups) {
      EXPECT_FALSE(idx.empty());
      EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
      total += idx.size();
      for (auto i : idx) {
        ++seen[i];
        EXPECT_EQ(ds.label(i), label);
      }
    }
    EXPECT_EQ(total, n);
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  }
}
