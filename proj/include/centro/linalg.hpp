#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace centro {

using Complex = std::complex<double>;

/// Thrown when operand shapes do not fit the operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by iterative routines that hit their iteration cap. Carries the
/// last iterate so callers can decide whether it is good enough.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_estimate)
      : std::runtime_error(what), last_estimate_(last_estimate) {}
  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

/// Dense complex matrix, row-major. Entries are always finite.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  ComplexMatrix transpose() const;
  ComplexMatrix scaled(Complex c) const;
  Complex trace() const;
  double max_abs() const;
  double frobenius_norm() const;
  bool all_finite() const;

  /// Copy of the block starting at (r0, c0) with the given shape.
  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& src);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest elementwise modulus of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Multiset of eigenvalues of one matrix.
struct Spectrum {
  std::vector<Complex> eigenvalues;
  std::size_t source_dim = 0;
};

/// Exchange matrix: ones on the anti-diagonal.
ComplexMatrix counter_identity(std::size_t s);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr(M^k) by repeated multiplication; k == 1 is the plain diagonal sum.
Complex trace_power(const ComplexMatrix& m, int k);

/// Tr(M^1), ..., Tr(M^kmax) sharing the power chain.
std::vector<Complex> trace_powers(const ComplexMatrix& m, int kmax);

/// Largest singular value by power iteration on M*M. Stops once the relative
/// change of the estimate drops below tol; gives up after 10·n iterations
/// (at least 100) with ConvergenceError.
double operator_norm_estimate(const ComplexMatrix& m, double tol = 1e-6);

/// Greedy nearest-neighbour matching of two multisets after sorting by
/// (re, im). Returns the largest matched distance; throws on size mismatch.
double spectrum_match_distance(std::span<const Complex> a, std::span<const Complex> b);

nlohmann::json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Spectrum& s);
Spectrum spectrum_from_json(const nlohmann::json& j);

// OpenBLAS keeps its own thread pool; trial-level parallelism lives above it.
void pin_blas_single_threaded();

}  // namespace centro
