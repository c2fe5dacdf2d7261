#include <doctest.h>

#include <cmath>

#include "centro/eigensolver.hpp"
#include "centro/reduction.hpp"

using namespace centro;

TEST_CASE("Q for n=2 and n=3") {
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(max_abs_diff(build_orthogonal_q(2), ComplexMatrix{{h, -h}, {h, h}}) <= 1e-15);
  CHECK(max_abs_diff(build_orthogonal_q(3), ComplexMatrix{{h, 0.0, -h}, {0.0, 1.0, 0.0}, {h, 0.0, h}}) <= 1e-15);
  CHECK_THROWS_AS(build_orthogonal_q(1), std::invalid_argument);
  CHECK_THROWS_AS(build_orthogonal_q(0), std::invalid_argument);
}

TEST_CASE("Q is orthogonal") {
  for (std::size_t n : {2u, 3u, 6u, 7u, 16u, 33u}) {
    const auto q = build_orthogonal_q(n);
    CHECK(max_abs_diff(matmul(q.transpose(), q), ComplexMatrix::identity(n)) <= 1e-12);
    for (const auto& x : q.data()) CHECK(x.imag() == 0.0);
  }
}

TEST_CASE("n=7 Q has the unit middle column") {
  const auto q = build_orthogonal_q(7);
  for (std::size_t i = 0; i < 7; ++i) CHECK(q(i, 3) == Complex(i == 3 ? 1.0 : 0.0));
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(q(0, 0) - h) <= 1e-15);
  CHECK(std::abs(q(6, 0) - h) <= 1e-15);  // J block under I
  CHECK(std::abs(q(0, 4) + h) <= 1e-15);
  CHECK(std::abs(q(6, 4) - h) <= 1e-15);
  CHECK(q(6, 6) == Complex(0.0));
}

TEST_CASE("2x2 [[a,b],[b,a]] reduces to a+b and a-b") {
  const Complex a(1.5, -0.25), b(0.5, 2.0);
  const auto m = CentrosymmetricMatrix::from_matrix(ComplexMatrix{{a, b}, {b, a}});
  const auto r = block_reduce(m);
  CHECK(r.parity == Parity::even);
  CHECK(std::abs(r.t1(0, 0) - (a + b)) <= 1e-15);
  CHECK(std::abs(r.t2(0, 0) - (a - b)) <= 1e-15);
  CHECK(verify_reduction(m, r).worst() <= 1e-15);
}

TEST_CASE("identity reduces to identities") {
  for (std::size_t n : {4u, 5u}) {
    const auto r = block_reduce(CentrosymmetricMatrix::from_matrix(ComplexMatrix::identity(n)));
    CHECK(r.t1 == ComplexMatrix::identity((n + 1) / 2));
    CHECK(r.t2 == ComplexMatrix::identity(n / 2));
  }
}

TEST_CASE("odd border carries sqrt(2) factors") {
  const auto m = sample_centrosymmetric(5, {}, {8, 0});
  const auto r = block_reduce(m);
  CHECK(r.parity == Parity::odd);
  CHECK(r.t1.rows() == 3);
  CHECK(r.t2.rows() == 2);
  const auto& mm = m.matrix();
  CHECK(std::abs(r.t1(0, 2) - std::sqrt(2.0) * mm(0, 2)) <= 1e-15);
  CHECK(std::abs(r.t1(2, 0) - std::sqrt(2.0) * mm(2, 0)) <= 1e-15);
  CHECK(r.t1(2, 2) == mm(2, 2));
}

TEST_CASE("reduction residual on random matrices") {
  for (std::size_t n = 2; n <= 40; ++n) {
    for (std::uint64_t t = 0; t < 3; ++t) {
      const auto m = sample_centrosymmetric(n, {}, {31, n * 10 + t});
      const auto r = block_reduce(m);
      CHECK(r.t1.rows() == (n + 1) / 2);
      CHECK(r.t2.rows() == n / 2);
      CHECK(verify_reduction(m, r).worst() <= 1e-12);
    }
  }
}

TEST_CASE("a corrupted block is detected") {
  const auto m = sample_centrosymmetric(6, {}, {4, 4});
  auto r = block_reduce(m);
  r.t1(0, 0) += 0.5;
  CHECK(verify_reduction(m, r).similarity >= 0.4);
}

TEST_CASE("block spectra union matches the dense spectrum") {
  for (std::size_t n : {2u, 3u, 8u, 9u, 24u, 25u}) {
    const auto m = sample_centrosymmetric(n, {}, {55, n});
    const auto r = block_reduce(m);
    auto s1 = eigenvalues_dense(r.t1).eigenvalues;
    const auto s2 = eigenvalues_dense(r.t2).eigenvalues;
    s1.insert(s1.end(), s2.begin(), s2.end());
    const auto dense = eigenvalues_dense(m.matrix()).eigenvalues;
    CHECK(spectrum_match_distance(s1, dense) <= 1e-9);
  }
}

TEST_CASE("block entries have variance 2/n") {
  const std::size_t n = 16, trials = 4000;
  double s1 = 0.0, s2 = 0.0;
  std::vector<double> a1, a2;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto r = block_reduce(sample_centrosymmetric(n, {}, {66, t}));
    a1.push_back(std::norm(r.t1(2, 5)));
    a2.push_back(std::norm(r.t2(7, 0)));
    s1 += a1.back();
    s2 += a2.back();
  }
  auto check = [&](const std::vector<double>& a, double sum) {
    const double mean = sum / trials;
    double v = 0.0;
    for (double x : a) v += (x - mean) * (x - mean);
    const double se = std::sqrt(v / (trials - 1) / trials);
    CHECK(std::abs(mean - 2.0 / n) <= 5 * se);
  };
  check(a1, s1);
  check(a2, s2);
}

TEST_CASE("reduction JSON") {
  const auto r = block_reduce(sample_centrosymmetric(3, {}, {1, 1}));
  const auto j = to_json(r);
  CHECK(j.at("parity") == "odd");
  CHECK(matrix_from_json(j.at("t1")) == r.t1);
  CHECK(matrix_from_json(j.at("t2")) == r.t2);
}
