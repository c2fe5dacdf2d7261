#include "centro/eigensolver.hpp"

#include <algorithm>
#include <cmath>

#include <lapacke.h>

#include "centro/reduction.hpp"

namespace centro {

namespace {

Complex trace_of_square(const ComplexMatrix& m) {
  const std::size_t n = m.rows();
  Complex t = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t += m(i, j) * m(j, i);
  return t;
}

void check_trace_identities(const ComplexMatrix& m, const Spectrum& s, double tol) {
  const double n = static_cast<double>(m.rows());
  const double norm = m.frobenius_norm();
  Complex s1 = 0.0, s2 = 0.0;
  for (const auto& l : s.eigenvalues) {
    s1 += l;
    s2 += l * l;
  }
  // The additive floor keeps the zero matrix (norm 0) from demanding exactness
  // beyond rounding.
  const double floor = 1e-300;
  if (std::abs(s1 - m.trace()) > tol * n * norm + floor ||
      std::abs(s2 - trace_of_square(m)) > tol * n * norm * norm + floor) {
    throw EigenError("eigenvalues violate the trace identities", s.eigenvalues.size());
  }
}

}  // namespace

Spectrum eigenvalues_dense(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) throw DimensionError("eigenvalues_dense: matrix must be square");
  if (!m.all_finite()) throw std::invalid_argument("eigenvalues_dense: non-finite entries");
  const std::size_t n = m.rows();
  Spectrum s;
  s.source_dim = n;
  if (n == 0) return s;

  pin_blas_single_threaded();
  // zgeev overwrites its input. The row-major buffer read as column-major is
  // M^T, which has the same eigenvalues.
  std::vector<Complex> work(m.data().begin(), m.data().end());
  s.eigenvalues.resize(n);
  const auto ln = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'N', ln, reinterpret_cast<lapack_complex_double*>(work.data()), ln,
      reinterpret_cast<lapack_complex_double*>(s.eigenvalues.data()), nullptr, 1, nullptr, 1);
  if (info > 0) {
    // Elements info..n-1 (0-based) of w converged.
    throw EigenError("QR iteration did not converge", n - static_cast<std::size_t>(info));
  }
  if (info < 0) throw std::logic_error("zgeev: invalid argument " + std::to_string(-info));
  check_trace_identities(m, s, tol);
  return s;
}

Spectrum eigenvalues_centrosymmetric(const CentrosymmetricMatrix& m, double tol) {
  if (m.n() == 1) return eigenvalues_dense(m.matrix(), tol);
  const BlockReduction r = block_reduce(m);
  Spectrum s1 = eigenvalues_dense(r.t1, tol);
  Spectrum s2 = eigenvalues_dense(r.t2, tol);
  Spectrum out;
  out.source_dim = m.n();
  out.eigenvalues = std::move(s1.eigenvalues);
  out.eigenvalues.insert(out.eigenvalues.end(), s2.eigenvalues.begin(), s2.eigenvalues.end());
  return out;
}

double spectral_radius(const Spectrum& spec) {
  if (spec.eigenvalues.empty()) throw std::invalid_argument("spectral_radius: empty spectrum");
  double r = 0.0;
  for (const auto& l : spec.eigenvalues) r = std::max(r, std::abs(l));
  return r;
}

}  // namespace centro
