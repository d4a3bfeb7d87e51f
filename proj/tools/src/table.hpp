#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dsi::cli {

/// Shortest decimal that round-trips to the same double.
std::string shortest(double v);
std::string fixed(double v, int digits);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& out) const;
  /// Space-padded columns, first column left-aligned, the rest right-aligned.
  void write_text(std::ostream& out) const;
};

}  // namespace dsi::cli
