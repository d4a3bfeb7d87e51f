#include "dsi/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <unordered_map>

#include "dsi/errors.hpp"

namespace dsi {

Dataset::Dataset(std::size_t dim, std::vector<double> features, std::vector<Label> labels)
    : dim_(dim), features_(std::move(features)), labels_(std::move(labels)) {
  if (dim_ == 0) throw InvalidDataset("feature dimension must be at least 1");
  if (features_.size() != labels_.size() * dim_) {
    throw InvalidDataset("feature buffer holds " + std::to_string(features_.size()) +
                         " values; expected " + std::to_string(labels_.size()) + " x " +
                         std::to_string(dim_));
  }
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (!std::isfinite(features_[i])) {
      throw InvalidDataset("non-finite feature at point " + std::to_string(i / dim_) +
                           ", feature " + std::to_string(i % dim_));
    }
  }
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows,
                           std::vector<Label> labels) {
  if (rows.empty()) throw InvalidDataset("no points");
  const std::size_t dim = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      throw InvalidDataset("point " + std::to_string(i) + " has length " +
                           std::to_string(rows[i].size()) + "; expected " + std::to_string(dim));
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  if (labels.size() != rows.size()) throw InvalidDataset("labels and points differ in length");
  return Dataset(dim, std::move(flat), std::move(labels));
}

std::size_t Dataset::class_count() const {
  return std::set<Label>(labels_.begin(), labels_.end()).size();
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<double> f;
  f.reserve(indices.size() * dim_);
  std::vector<Label> l;
  l.reserve(indices.size());
  for (auto i : indices) {
    auto p = point(i);
    f.insert(f.end(), p.begin(), p.end());
    l.push_back(labels_[i]);
  }
  Dataset out(dim_, std::move(f), std::move(l));
  out.label_names_ = label_names_;
  return out;
}

std::vector<std::size_t> ClassPartition::complement(Label c, std::size_t dataset_size) const {
  const auto& own = groups.at(c);
  std::vector<std::size_t> rest;
  rest.reserve(dataset_size - own.size());
  auto it = own.begin();
  for (std::size_t i = 0; i < dataset_size; ++i) {
    if (it != own.end() && *it == i) {
      ++it;
    } else {
      rest.push_back(i);
    }
  }
  return rest;
}

ClassPartition partition(const Dataset& ds) {
  ClassPartition part;
  for (std::size_t i = 0; i < ds.size(); ++i) part.groups[ds.label(i)].push_back(i);
  return part;
}

void require_two_classes(const ClassPartition& part) {
  if (part.class_count() < 2) {
    throw DegenerateDataset("separability needs at least 2 classes; found " +
                            std::to_string(part.class_count()));
  }
}

namespace {

// One logical CSV record; quoted fields may span lines.
bool read_record(std::istream& in, char delim, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == delim) {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      break;
    } else if (ch == '\r') {
      if (in.peek() == '\n') in.get();
      break;
    } else {
      field.push_back(ch);
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && trim(fields[0]).empty();
}

}  // namespace

Dataset load_csv(std::istream& in, const CsvOptions& options) {
  std::vector<std::string> fields;
  std::vector<std::string> header;
  std::size_t columns = 0;

  if (options.has_header) {
    while (read_record(in, options.delimiter, fields) && blank(fields)) {
    }
    if (fields.empty() || blank(fields)) throw ParseError(0, "missing header row");
    header = fields;
    columns = header.size();
  }

  std::size_t label_col = 0;
  if (const auto* idx = std::get_if<std::size_t>(&options.label_column)) {
    label_col = *idx;
  } else {
    const auto& name = std::get<std::string>(options.label_column);
    if (!options.has_header) throw ParseError(0, "label column given by name but no header");
    auto it = std::find_if(header.begin(), header.end(),
                           [&](const std::string& h) { return trim(h) == name; });
    if (it == header.end()) throw ParseError(0, "label column '" + name + "' not found");
    label_col = static_cast<std::size_t>(it - header.begin());
  }
  if (options.has_header && label_col >= columns) {
    throw ParseError(0, "label column index " + std::to_string(label_col) + " out of range");
  }

  std::vector<double> features;
  std::vector<Label> labels;
  std::vector<std::string> names;
  std::unordered_map<std::string, Label> dense;

  std::size_t row = 0;
  while (read_record(in, options.delimiter, fields)) {
    if (blank(fields)) continue;
    ++row;
    if (columns == 0) {
      columns = fields.size();
      if (label_col >= columns) {
        throw ParseError(row, "label column index " + std::to_string(label_col) +
                                  " out of range");
      }
    }
    if (fields.size() != columns) {
      throw ParseError(row, "expected " + std::to_string(columns) + " fields, found " +
                                std::to_string(fields.size()));
    }
    if (columns < 2) throw ParseError(row, "no feature columns");
    for (std::size_t c = 0; c < columns; ++c) {
      auto cell = trim(fields[c]);
      if (c == label_col) {
        std::string key(cell);
        auto [it, inserted] = dense.try_emplace(key, static_cast<Label>(names.size()));
        if (inserted) names.push_back(key);
        labels.push_back(it->second);
        continue;
      }
      double v = 0.0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw ParseError(row, c + 1, "non-numeric feature '" + std::string(cell) + "'");
      }
      if (!std::isfinite(v)) throw ParseError(row, c + 1, "non-finite feature");
      features.push_back(v);
    }
  }
  if (row == 0) throw ParseError(0, "no data rows");
  if (names.size() < options.min_classes) {
    throw DegenerateDataset("CSV holds " + std::to_string(names.size()) +
                            " distinct label(s); need at least " +
                            std::to_string(options.min_classes));
  }
  Dataset ds(columns - 1, std::move(features), std::move(labels));
  ds.set_label_names(std::move(names));
  return ds;
}

Dataset load_csv_file(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_csv(in, options);
}

void write_csv(std::ostream& out, const Dataset& ds, char delimiter) {
  std::ostringstream buf;
  buf.precision(17);
  for (std::size_t j = 0; j < ds.dim(); ++j) buf << 'x' << j << delimiter;
  buf << "label\n";
  const auto& names = ds.label_names();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.point(i)) buf << v << delimiter;
    const Label l = ds.label(i);
    if (l < names.size()) {
      buf << names[l];
    } else {
      buf << l;
    }
    buf << '\n';
  }
  out << buf.str();
}

namespace {

Dataset load_cifar(std::span<const std::uint8_t> bytes, std::size_t record, std::size_t label_bytes,
                   unsigned max_label) {
  if (bytes.size() % record != 0) {
    throw FormatError("CIFAR batch length " + std::to_string(bytes.size()) +
                      " is not a multiple of " + std::to_string(record));
  }
  const std::size_t n = bytes.size() / record;
  std::vector<double> features(n * kCifarPixels);
  std::vector<Label> labels(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::uint8_t* rec = bytes.data() + r * record;
    if (rec[0] > max_label) {
      throw FormatError("record " + std::to_string(r) + " has label " + std::to_string(rec[0]) +
                        " > " + std::to_string(max_label));
    }
    labels[r] = rec[0];
    std::copy(rec + label_bytes, rec + record, features.begin() + r * kCifarPixels);
  }
  if (n == 0) throw FormatError("empty CIFAR batch");
  return Dataset(kCifarPixels, std::move(features), std::move(labels));
}

}  // namespace

Dataset load_cifar10_batch(std::span<const std::uint8_t> bytes) {
  return load_cifar(bytes, kCifar10RecordBytes, 1, 9);
}

Dataset load_cifar100_batch(std::span<const std::uint8_t> bytes) {
  return load_cifar(bytes, kCifar100RecordBytes, 2, 19);
}

std::vector<std::uint8_t> serialize_cifar10_batch(const Dataset& ds) {
  if (ds.dim() != kCifarPixels) throw FormatError("CIFAR-10 records need 3072 features");
  std::vector<std::uint8_t> out;
  out.reserve(ds.size() * kCifar10RecordBytes);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.label(i) > 9) throw FormatError("label " + std::to_string(ds.label(i)) + " > 9");
    out.push_back(static_cast<std::uint8_t>(ds.label(i)));
    for (double v : ds.point(i)) {
      if (v < 0.0 || v > 255.0 || v != std::floor(v)) {
        throw FormatError("feature value " + std::to_string(v) + " is not a pixel byte");
      }
      out.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Dataset concatenate(std::span<const Dataset> parts) {
  if (parts.empty()) throw InvalidDataset("nothing to concatenate");
  const std::size_t dim = parts.front().dim();
  std::vector<double> f;
  std::vector<Label> l;
  for (const auto& p : parts) {
    if (p.dim() != dim) throw InvalidDataset("dimension mismatch in concatenate");
    f.insert(f.end(), p.features().begin(), p.features().end());
    l.insert(l.end(), p.labels().begin(), p.labels().end());
  }
  return Dataset(dim, std::move(f), std::move(l));
}

}  // namespace dsi

namespace dsi {

namespace {

std::filesystem::path cifar_batch_dir(const std::string& dir) {
  const std::filesystem::path root(dir);
  if (std::filesystem::exists(root / "data_batch_1.bin")) return root;
  return root / "cifar-10-batches-bin";
}

Dataset load_batch_file(const std::filesystem::path& p) {
  if (!std::filesystem::is_regular_file(p)) throw Error("missing CIFAR-10 batch '" + p.string() + "'");
  return load_cifar10_batch(read_file_bytes(p.string()));
}

}  // namespace

Dataset load_cifar10_training_set(const std::string& dir) {
  const auto base = cifar_batch_dir(dir);
  std::vector<Dataset> parts;
  for (int b = 1; b <= 5; ++b) {
    parts.push_back(load_batch_file(base / ("data_batch_" + std::to_string(b) + ".bin")));
  }
  return concatenate(parts);
}

Dataset load_cifar10_test_set(const std::string& dir) {
  return load_batch_file(cifar_batch_dir(dir) / "test_batch.bin");
}

}  // namespace dsi
