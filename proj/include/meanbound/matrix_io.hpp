#pragma once

// Plain-text matrix files: the first line holds the dimension, followed by
// `dim` rows of `dim` whitespace-separated decimals. Lines starting with '#'
// and blank lines are ignored.

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "meanbound/matrix.hpp"

namespace meanbound {

class parse_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline bool next_data_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace detail

/// Parses a symmetric matrix; asymmetry above kInputSymmetryTol raises
/// matrix_error whose message carries the residual.
inline SymMatrix read_matrix(std::istream& in, const std::string& source = "<input>") {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw parse_error(source + ":" + std::to_string(lineno) + ": " + msg);
  };
  if (!detail::next_data_line(in, line, lineno)) fail("missing dimension line");
  long long dim = 0;
  {
    std::istringstream ls(line);
    std::string extra;
    if (!(ls >> dim) || (ls >> extra)) fail("expected a single integer dimension");
    if (dim < 1 || dim > 4096) fail("dimension must lie in [1, 4096]");
  }
  const auto n = static_cast<std::size_t>(dim);
  std::vector<double> rows;
  rows.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!detail::next_data_line(in, line, lineno))
      fail("expected " + std::to_string(n) + " rows, found " + std::to_string(r));
    std::istringstream ls(line);
    std::string tok;
    std::size_t count = 0;
    while (ls >> tok) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) fail("not a number: '" + tok + "'");
      rows.push_back(x);
      ++count;
    }
    if (count != n) fail("row has " + std::to_string(count) + " entries, expected " + std::to_string(n));
  }
  if (detail::next_data_line(in, line, lineno)) fail("unexpected trailing content");
  try {
    return SymMatrix::from_rows(n, std::move(rows));
  } catch (const matrix_error& e) {
    throw matrix_error(source + ": " + e.what(), e.residual());
  } catch (const std::invalid_argument& e) {
    throw parse_error(source + ": " + e.what());
  }
}

inline SymMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open matrix file: " + path);
  return read_matrix(in, path);
}

/// Writes with 17 significant digits so the file reads back exactly.
inline void write_matrix(std::ostream& os, const SymMatrix& m) {
  const auto old = os.precision(17);
  os << m.dim() << '\n';
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) os << (j ? " " : "") << m(i, j);
    os << '\n';
  }
  os.precision(old);
}

}  // namespace meanbound
