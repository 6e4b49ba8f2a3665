#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cqr {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  static Matrix from_rows(std::size_t rows, std::size_t cols,
                          std::span<const double> row_major);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  Vector col(std::size_t j) const;
  void set_col(std::size_t j, std::span<const double> v);

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::span<const double> values() const noexcept { return data_; }

  Matrix transposed() const;
  Vector diag() const;
  double trace() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  /// this += s * other
  Matrix& add_scaled(const Matrix& other, double s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

/// a^T * b without forming the transpose.
Matrix transpose_times(const Matrix& a, const Matrix& b);
/// a^T * x
Vector transpose_times(const Matrix& a, std::span<const double> x);

/// (M + M^T) / 2
Matrix symmetrized(const Matrix& m);
Matrix outer(std::span<const double> u, std::span<const double> v);
/// Sum of elementwise products, i.e. tr(A B^T).
double inner(const Matrix& a, const Matrix& b);

double max_abs(const Matrix& m);
double frobenius_norm(const Matrix& m);
/// max_ij |M - M^T|
double asymmetry(const Matrix& m);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double max_abs(std::span<const double> a);
/// y += s * x
void axpy(double s, std::span<const double> x, std::span<double> y);
Vector operator+(Vector a, std::span<const double> b);
Vector operator-(Vector a, std::span<const double> b);
Vector operator*(double s, Vector a);

}  // namespace cqr
