#ifndef MLNF_MATRIX_IO_HPP_
#define MLNF_MATRIX_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "mlnf/eval.hpp"
#include "mlnf/matcore.hpp"
#include "mlnf/netstruct.hpp"

namespace mlnf {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coordinate text format:
//
//   % optional comment lines (also '#')
//   rows cols nnz
//   row col value      <- nnz lines, 0-indexed
//
// Values are written with 17 significant digits so load(save(m)) == m bit for bit.
// Entries that are not listed are zero.

DenseMatrix read_matrix(std::istream& in, const std::string& source = "<stream>");
void write_matrix(std::ostream& out, const DenseMatrix& m);

DenseMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const DenseMatrix& m, const std::filesystem::path& path);

/// Loads a square matrix as a horizontal network. Entries listed on only one side of the
/// diagonal are mirrored; entries listed on both sides must agree.
HorizontalNetwork load_network(const std::filesystem::path& path);

/// One integer label per line.
LabelVector load_labels(const std::filesystem::path& path);
void save_labels(const LabelVector& labels, const std::filesystem::path& path);

}  // namespace mlnf

#endif  // MLNF_MATRIX_IO_HPP_
