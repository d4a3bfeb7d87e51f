#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dsi {

using Label = std::uint32_t;

/// Labeled feature vectors stored row-major. Immutable once constructed, so a
/// Dataset can be shared read-only between workers.
class Dataset {
 public:
  Dataset() = default;

  /// Validates shape and finiteness; throws InvalidDataset on violation.
  Dataset(std::size_t dim, std::vector<double> features, std::vector<Label> labels);

  static Dataset from_rows(const std::vector<std::vector<double>>& rows,
                           std::vector<Label> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return labels_.empty(); }

  std::span<const double> point(std::size_t i) const noexcept {
    return {features_.data() + i * dim_, dim_};
  }
  Label label(std::size_t i) const noexcept { return labels_[i]; }

  std::span<const double> features() const noexcept { return features_; }
  std::span<const Label> labels() const noexcept { return labels_; }

  /// Original label text for each dense label, when the loader had one (CSV).
  const std::vector<std::string>& label_names() const noexcept { return label_names_; }
  void set_label_names(std::vector<std::string> names) { label_names_ = std::move(names); }

  std::size_t class_count() const;

  /// Rows at `indices`, in the given order; label names are carried along.
  Dataset subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> features_;
  std::vector<Label> labels_;
  std::vector<std::string> label_names_;
};

/// Class id -> ascending indices into the dataset.
struct ClassPartition {
  std::map<Label, std::vector<std::size_t>> groups;

  std::size_t class_count() const noexcept { return groups.size(); }
  /// Every index not in class `c`, ascending.
  std::vector<std::size_t> complement(Label c, std::size_t dataset_size) const;
};

ClassPartition partition(const Dataset& ds);

/// Throws DegenerateDataset unless at least two classes are present.
void require_two_classes(const ClassPartition& part);

struct CsvOptions {
  /// Column name (matched against the header) or zero-based index.
  std::variant<std::string, std::size_t> label_column = std::size_t{0};
  char delimiter = ',';
  bool has_header = true;
  /// Fewer distinct labels than this raises DegenerateDataset.
  std::size_t min_classes = 2;
};

/// Parses delimited text (RFC-4180 quoting). Labels become dense ids 0..k-1 in
/// first-appearance order; the original strings are kept in label_names().
/// Data rows are numbered from 1 in errors, not counting the header.
Dataset load_csv(std::istream& in, const CsvOptions& options);
Dataset load_csv_file(const std::string& path, const CsvOptions& options);

/// Writes features then a trailing `label` column. Uses label_names() when present.
void write_csv(std::ostream& out, const Dataset& ds, char delimiter = ',');

inline constexpr std::size_t kCifarPixels = 3072;
inline constexpr std::size_t kCifar10RecordBytes = 1 + kCifarPixels;
inline constexpr std::size_t kCifar100RecordBytes = 2 + kCifarPixels;

/// CIFAR-10 binary batch: records of one label byte (0-9) then 3072 pixel
/// bytes (R, G, B planes, row-major). Pixels stay in [0, 255].
Dataset load_cifar10_batch(std::span<const std::uint8_t> bytes);

/// CIFAR-100 binary batch: coarse label byte (0-19), fine label byte (ignored),
/// then 3072 pixel bytes. Labels are the 20 coarse super-classes.
Dataset load_cifar100_batch(std::span<const std::uint8_t> bytes);

/// Inverse of load_cifar10_batch. Requires integral features in [0, 255] and
/// labels <= 9, otherwise throws FormatError.
std::vector<std::uint8_t> serialize_cifar10_batch(const Dataset& ds);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);

/// The 50,000-image training set: data_batch_1.bin .. data_batch_5.bin from
/// `dir` or its cifar-10-batches-bin subdirectory. Throws Error when a batch
/// is missing.
Dataset load_cifar10_training_set(const std::string& dir);

/// test_batch.bin from the same layout.
Dataset load_cifar10_test_set(const std::string& dir);

/// Concatenates datasets of equal dimension (label names are dropped).
Dataset concatenate(std::span<const Dataset> parts);

}  // namespace dsi
