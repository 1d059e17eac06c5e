#ifndef MLNF_MATCORE_HPP_
#define MLNF_MATCORE_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlnf {

using Vector = std::vector<double>;

/// Raised whenever two operands are not conformable. Shapes are never broadcast.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised on invalid input values (negative data, empty vectors, bad configuration).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Row-major dense real matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols, 0.0}; }
  static DenseMatrix ones(std::size_t rows, std::size_t cols) { return {rows, cols, 1.0}; }
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }
  std::span<double> row(std::size_t i) { return std::span<double>(data_).subspan(i * cols_, cols_); }

  DenseMatrix transpose() const;
  bool all_finite() const;
  bool nonnegative() const;

  /// "RxC" for error messages.
  std::string shape_string() const;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s);

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix m);

/// Nonnegative positive/negative parts of a signed matrix: source == plus - minus.
struct SplitPair {
  DenseMatrix plus;
  DenseMatrix minus;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// a^T * b without materializing the transpose.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
/// a * b^T without materializing the transpose.
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

Vector matvec(const DenseMatrix& m, std::span<const double> v);
/// m^T * v
Vector matvec_t(const DenseMatrix& m, std::span<const double> v);
/// u * v^T
DenseMatrix outer(std::span<const double> u, std::span<const double> v);

double frobenius_sq(const DenseMatrix& m);
/// ||a - b||_F^2 without allocating the difference.
double frobenius_sq_diff(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);
SplitPair pos_neg_split(const DenseMatrix& m);
Vector row_sums(const DenseMatrix& m);
Vector col_sums(const DenseMatrix& m);

/// Entrywise max(m, 0).
DenseMatrix clamp_nonnegative(DenseMatrix m);

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what);

}  // namespace mlnf

#endif  // MLNF_MATCORE_HPP_
