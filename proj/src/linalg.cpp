#include "centro/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <cblas.h>

extern "C" void openblas_set_num_threads(int);

namespace centro {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("entries length does not match rows*cols");
  }
  if (!all_finite()) throw std::invalid_argument("matrix entries must be finite");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

ComplexMatrix ComplexMatrix::scaled(Complex c) const {
  ComplexMatrix out = *this;
  for (auto& x : out.data_) x *= c;
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace of non-square matrix");
  Complex s = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
  return s;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t rows,
                                   std::size_t cols) const {
  if (r0 + rows > rows_ || c0 + cols > cols_) throw DimensionError("block out of range");
  ComplexMatrix b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& src) {
  if (r0 + src.rows() > rows_ || c0 + src.cols() > cols_) {
    throw DimensionError("block out of range");
  }
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j) (*this)(r0 + i, c0 + j) = src(i, j);
}

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("shape mismatch");
}

}  // namespace

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b);
  ComplexMatrix out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += bd[i];
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b);
  ComplexMatrix out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bd[i];
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b);
  double m = 0.0;
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < ad.size(); ++i) m = std::max(m, std::abs(ad[i] - bd[i]));
  return m;
}

ComplexMatrix counter_identity(std::size_t s) {
  if (s == 0) throw std::invalid_argument("counter_identity: size must be positive");
  ComplexMatrix j(s, s);
  for (std::size_t i = 0; i < s; ++i) j(i, s - 1 - i) = 1.0;
  return j;
}

void pin_blas_single_threaded() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
  pin_blas_single_threaded();
  ComplexMatrix c(a.rows(), b.cols());
  if (c.rows() == 0 || c.cols() == 0) return c;
  const Complex one = 1.0;
  const Complex zero = 0.0;
  cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(a.rows()),
              static_cast<int>(b.cols()), static_cast<int>(a.cols()), &one, a.data().data(),
              static_cast<int>(a.cols()), b.data().data(), static_cast<int>(b.cols()), &zero,
              c.data().data(), static_cast<int>(c.cols()));
  return c;
}

Complex trace_power(const ComplexMatrix& m, int k) {
  if (k < 1) throw std::invalid_argument("trace_power: k must be >= 1");
  return trace_powers(m, k).back();
}

std::vector<Complex> trace_powers(const ComplexMatrix& m, int kmax) {
  if (!m.is_square()) throw DimensionError("trace_power: matrix must be square");
  if (kmax < 1) throw std::invalid_argument("trace_powers: kmax must be >= 1");
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(kmax));
  out.push_back(m.trace());
  if (kmax == 1) return out;
  ComplexMatrix p = m;
  for (int k = 2; k < kmax; ++k) {
    p = matmul(p, m);
    out.push_back(p.trace());
  }
  // Last power only needs its diagonal: Tr(P·M) = Σ_ij P_ij M_ji.
  const std::size_t n = m.rows();
  Complex t = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t += p(i, j) * m(j, i);
  out.push_back(t);
  return out;
}

double operator_norm_estimate(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) throw DimensionError("operator_norm_estimate: matrix must be square");
  const std::size_t n = m.rows();
  if (n == 0) return 0.0;
  const double fro = m.frobenius_norm();
  if (fro == 0.0) return 0.0;

  // Deterministic, non-degenerate start vector.
  std::vector<Complex> v(n), w(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = Complex(1.0 + 0.1 * static_cast<double>(i % 7), 0.3);
  auto normalize = [](std::vector<Complex>& x) {
    double s = 0.0;
    for (const auto& e : x) s += std::norm(e);
    s = std::sqrt(s);
    for (auto& e : x) e /= s;
    return s;
  };
  normalize(v);

  const std::size_t cap = std::max<std::size_t>(100, 10 * n);
  double sigma = 0.0;
  for (std::size_t it = 0; it < cap; ++it) {
    // w = M v, then v = M* w.
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m(i, j) * v[j];
      w[i] = s;
    }
    double mv = 0.0;
    for (const auto& e : w) mv += std::norm(e);
    const double next = std::sqrt(mv);
    std::fill(v.begin(), v.end(), Complex{});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v[j] += std::conj(m(i, j)) * w[i];
    if (normalize(v) == 0.0) return next;
    if (it > 0 && std::abs(next - sigma) <= tol * next) return next;
    sigma = next;
  }
  throw ConvergenceError("operator_norm_estimate: no convergence within iteration cap", sigma);
}

double spectrum_match_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw DimensionError("spectra have different sizes");
  auto by_re_im = [](const Complex& x, const Complex& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  };
  std::vector<Complex> sa(a.begin(), a.end());
  std::vector<Complex> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end(), by_re_im);
  std::sort(sb.begin(), sb.end(), by_re_im);
  std::vector<bool> used(sb.size(), false);
  double worst = 0.0;
  for (const auto& x : sa) {
    std::size_t best = sb.size();
    double best_d = 0.0;
    for (std::size_t j = 0; j < sb.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - sb[j]);
      if (best == sb.size() || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

nlohmann::json to_json(const ComplexMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& x : m.data()) entries.push_back({x.real(), x.imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  std::vector<Complex> entries;
  entries.reserve(rows * cols);
  for (const auto& e : j.at("entries")) entries.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return {rows, cols, std::move(entries)};
}

nlohmann::json to_json(const Spectrum& s) {
  nlohmann::json ev = nlohmann::json::array();
  for (const auto& x : s.eigenvalues) ev.push_back({x.real(), x.imag()});
  return {{"source_dim", s.source_dim}, {"eigenvalues", std::move(ev)}};
}

Spectrum spectrum_from_json(const nlohmann::json& j) {
  Spectrum s;
  s.source_dim = j.at("source_dim").get<std::size_t>();
  for (const auto& e : j.at("eigenvalues")) s.eigenvalues.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  if (s.eigenvalues.size() != s.source_dim) throw DimensionError("spectrum length != source_dim");
  return s;
}

}  // namespace centro
