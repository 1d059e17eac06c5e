#include "mlnf/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

namespace mlnf {

namespace {

bool is_skippable(std::string_view line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string_view::npos || line[pos] == '%' || line[pos] == '#';
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Entry {
  std::size_t row;
  std::size_t col;
  double value;
};

struct CoordinateData {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Entry> entries;
  std::vector<std::size_t> lines;
};

CoordinateData read_coordinates(std::istream& in, const std::string& source) {
  CoordinateData data;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::size_t nnz = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_skippable(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3) {
      throw ParseError(source, lineno, "expected 3 fields, found " + std::to_string(fields.size()));
    }
    if (!have_header) {
      if (!parse_number(fields[0], data.rows) || !parse_number(fields[1], data.cols) ||
          !parse_number(fields[2], nnz)) {
        throw ParseError(source, lineno, "malformed header, expected 'rows cols nnz'");
      }
      have_header = true;
      data.entries.reserve(nnz);
      continue;
    }
    Entry e{};
    if (!parse_number(fields[0], e.row) || !parse_number(fields[1], e.col)) {
      throw ParseError(source, lineno, "malformed index");
    }
    if (!parse_number(fields[2], e.value) || !std::isfinite(e.value)) {
      throw ParseError(source, lineno, "malformed or non-finite value");
    }
    if (e.row >= data.rows || e.col >= data.cols) {
      throw ParseError(source, lineno,
                       "index (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                           ") out of range for " + std::to_string(data.rows) + "x" +
                           std::to_string(data.cols));
    }
    if (data.entries.size() == nnz) {
      throw ParseError(source, lineno, "more entries than the declared " + std::to_string(nnz));
    }
    data.entries.push_back(e);
    data.lines.push_back(lineno);
  }
  if (!have_header) throw ParseError(source, lineno, "missing header");
  if (data.entries.size() != nnz) {
    throw ParseError(source, lineno,
                     "declared " + std::to_string(nnz) + " entries, found " +
                         std::to_string(data.entries.size()));
  }
  return data;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

DenseMatrix read_matrix(std::istream& in, const std::string& source) {
  const CoordinateData data = read_coordinates(in, source);
  DenseMatrix m(data.rows, data.cols);
  std::vector<bool> seen(data.rows * data.cols, false);
  for (std::size_t i = 0; i < data.entries.size(); ++i) {
    const Entry& e = data.entries[i];
    const std::size_t idx = e.row * data.cols + e.col;
    if (seen[idx]) throw ParseError(source, data.lines[i], "duplicate entry");
    seen[idx] = true;
    m(e.row, e.col) = e.value;
  }
  return m;
}

void write_matrix(std::ostream& out, const DenseMatrix& m) {
  std::size_t nnz = 0;
  for (double v : m.data()) nnz += v != 0.0 ? 1 : 0;
  out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) out << i << ' ' << j << ' ' << format_double(m(i, j)) << '\n';
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_matrix(in, path.string());
}

void save_matrix(const DenseMatrix& m, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_matrix(out, m);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

HorizontalNetwork load_network(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  const std::string source = path.string();
  const CoordinateData data = read_coordinates(in, source);
  if (data.rows != data.cols) {
    throw ParseError(source, 1, "network matrix must be square");
  }
  DenseMatrix w(data.rows, data.cols);
  std::vector<bool> seen(data.rows * data.cols, false);
  for (std::size_t i = 0; i < data.entries.size(); ++i) {
    const Entry& e = data.entries[i];
    if (seen[e.row * data.cols + e.col]) throw ParseError(source, data.lines[i], "duplicate entry");
    seen[e.row * data.cols + e.col] = true;
    if (seen[e.col * data.cols + e.row] && e.row != e.col && w(e.col, e.row) != e.value) {
      throw ParseError(source, data.lines[i], "asymmetric weight for mirrored entry");
    }
    w(e.row, e.col) = e.value;
    w(e.col, e.row) = e.value;
  }
  return HorizontalNetwork(std::move(w));
}

LabelVector load_labels(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  LabelVector labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_skippable(line)) continue;
    const auto fields = split_fields(line);
    int v = 0;
    if (fields.size() != 1 || !parse_number(fields[0], v)) {
      throw ParseError(path.string(), lineno, "expected one integer label");
    }
    labels.push_back(v);
  }
  return labels;
}

void save_labels(const LabelVector& labels, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  for (int l : labels) out << l << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace mlnf
