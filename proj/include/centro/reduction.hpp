#pragma once

#include <json.hpp>

#include "centro/centro_gen.hpp"
#include "centro/linalg.hpp"

namespace centro {

enum class Parity { even, odd };

/// Q^T M Q = diag(t1, t2) for a centrosymmetric M.
///
/// With n = 2s and quadrants M = [[A, B], [C, D]]:   t1 = A + JC,  t2 = A - JC.
/// With n = 2s + 1 and M = [[A, x, B], [y, q, yJ], [C, Jx, D]]:
///   t1 = [[A + JC, √2·x], [√2·y, q]]  ((s+1)×(s+1)),   t2 = A - JC  (s×s).
struct BlockReduction {
  ComplexMatrix t1;
  ComplexMatrix t2;
  ComplexMatrix q;
  Parity parity = Parity::even;
};

/// Real orthogonal Q with Q^T M Q block diagonal for every centrosymmetric M.
///
///   n = 2s:    Q = 1/√2 [[I, -I], [J, J]]
///   n = 2s+1:  Q = 1/√2 [[I, 0, -I], [0, √2, 0], [J, 0, J]]
///
/// The trailing block column is [-I; J] rather than [-J; I]; that choice is
/// what makes the lower block exactly A - JC instead of J(A - JC)J.
ComplexMatrix build_orthogonal_q(std::size_t n);

/// Forms t1 and t2 straight from the quadrants in O(n²).
BlockReduction block_reduce(const CentrosymmetricMatrix& m);

struct ReductionResidual {
  double similarity = 0;   // max |Q^T M Q - diag(t1, t2)|
  double orthogonality = 0;  // max |Q^T Q - I|

  double worst() const noexcept { return std::max(similarity, orthogonality); }
};

/// Recomputes Q^T M Q densely and compares it against the blocks.
ReductionResidual verify_reduction(const CentrosymmetricMatrix& m, const BlockReduction& r);

nlohmann::json to_json(const BlockReduction& r);

}  // namespace centro
