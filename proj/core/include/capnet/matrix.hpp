#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace capnet {

using Vector = std::vector<double>;

// Dense row-major matrix of finite doubles.
class Matrix {
 public:
  Matrix() = default;
  // rows x cols zeros; both dimensions must be positive.
  Matrix(std::size_t rows, std::size_t cols);
  // Takes ownership of row-major `entries`; throws ShapeError on a length
  // mismatch and InvalidArgument on non-finite entries.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);
  static Matrix row_vector(std::span<const double> v);
  static Matrix column_vector(std::span<const double> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return entries_[i * cols_ + j];
  }

  std::span<const double> data() const noexcept { return entries_; }
  std::span<double> data() noexcept { return entries_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {entries_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept {
    return {entries_.data() + i * cols_, cols_};
  }
  Vector column(std::size_t j) const;

  Matrix transpose() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s) noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);

// y = W x
Vector multiply(const Matrix& w, std::span<const double> x);
// y = W^T x
Vector multiply_transposed(const Matrix& w, std::span<const double> x);
// u v^T scaled by s
Matrix outer(double s, std::span<const double> u, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double max_abs_entry(const Matrix& w);

}  // namespace capnet
