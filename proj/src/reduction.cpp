#include "centro/reduction.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace centro {

ComplexMatrix build_orthogonal_q(std::size_t n) {
  if (n < 2) throw std::invalid_argument("build_orthogonal_q: n must be >= 2");
  const std::size_t s = n / 2;
  const std::size_t tail = n - s;  // first index of the trailing block column
  const double h = std::numbers::sqrt2 / 2.0;
  ComplexMatrix q(n, n);
  for (std::size_t i = 0; i < s; ++i) {
    q(i, i) = h;                        // I
    q(i, tail + i) = -h;                // -I
    q(n - 1 - i, i) = h;                // J (bottom-left)
    q(n - 1 - i, tail + i) = h;         // J (bottom-right)
  }
  if (n % 2 == 1) q(s, s) = 1.0;
  return q;
}

BlockReduction block_reduce(const CentrosymmetricMatrix& cm) {
  const ComplexMatrix& m = cm.matrix();
  const std::size_t n = m.rows();
  if (n < 2) throw std::invalid_argument("block_reduce: n must be >= 2");
  if (!is_centrosymmetric(m, 0.0)) throw std::invalid_argument("block_reduce: input not centrosymmetric");

  const std::size_t s = n / 2;
  const bool odd = n % 2 == 1;

  // (JC)(i, j) = C(s-1-i, j) = M(n-1-i, j).
  ComplexMatrix t1(odd ? s + 1 : s, odd ? s + 1 : s);
  ComplexMatrix t2(s, s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      const Complex a = m(i, j);
      const Complex jc = m(n - 1 - i, j);
      t1(i, j) = a + jc;
      t2(i, j) = a - jc;
    }
  }
  if (odd) {
    const double r2 = std::numbers::sqrt2;
    for (std::size_t i = 0; i < s; ++i) {
      t1(i, s) = r2 * m(i, s);  // √2·x
      t1(s, i) = r2 * m(s, i);  // √2·y
    }
    t1(s, s) = m(s, s);
  }
  return {std::move(t1), std::move(t2), build_orthogonal_q(n), odd ? Parity::odd : Parity::even};
}

ReductionResidual verify_reduction(const CentrosymmetricMatrix& cm, const BlockReduction& r) {
  const ComplexMatrix& m = cm.matrix();
  const std::size_t n = m.rows();
  if (r.q.rows() != n || r.q.cols() != n || r.t1.rows() + r.t2.rows() != n ||
      !r.t1.is_square() || !r.t2.is_square()) {
    throw DimensionError("verify_reduction: inconsistent shapes");
  }
  const ComplexMatrix qt = r.q.transpose();
  ComplexMatrix blocks(n, n);
  blocks.set_block(0, 0, r.t1);
  blocks.set_block(r.t1.rows(), r.t1.rows(), r.t2);

  ReductionResidual res;
  res.similarity = max_abs_diff(matmul(matmul(qt, m), r.q), blocks);
  res.orthogonality = max_abs_diff(matmul(qt, r.q), ComplexMatrix::identity(n));
  return res;
}

nlohmann::json to_json(const BlockReduction& r) {
  return {{"parity", r.parity == Parity::even ? "even" : "odd"},
          {"t1", to_json(r.t1)},
          {"t2", to_json(r.t2)},
          {"q", to_json(r.q)}};
}

}  // namespace centro
