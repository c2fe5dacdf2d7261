#pragma once

#include <stdexcept>
#include <string>

#include "centro/centro_gen.hpp"
#include "centro/linalg.hpp"

namespace centro {

/// The QR iteration failed to converge. `deflated` is the number of trailing
/// eigenvalues that had converged when it gave up.
class EigenError : public std::runtime_error {
 public:
  EigenError(const std::string& what, std::size_t deflated = 0)
      : std::runtime_error(what), deflated_(deflated) {}
  std::size_t deflated() const noexcept { return deflated_; }

 private:
  std::size_t deflated_;
};

inline constexpr double kDefaultEigenTol = 1e-10;

/// All eigenvalues of a dense complex matrix: balancing, Hessenberg reduction
/// and shifted QR with deflation (LAPACK zgeev). Every result is checked
/// against |Σλ - Tr M| <= tol·n·‖M‖ and |Σλ² - Tr M²| <= tol·n·‖M‖², with
/// ‖M‖ the Frobenius norm; a violation raises EigenError.
Spectrum eigenvalues_dense(const ComplexMatrix& m, double tol = kDefaultEigenTol);

/// eig(T1) ⊎ eig(T2) through the block reduction. Two half-size solves.
Spectrum eigenvalues_centrosymmetric(const CentrosymmetricMatrix& m,
                                     double tol = kDefaultEigenTol);

double spectral_radius(const Spectrum& spec);

}  // namespace centro
