#include <doctest.h>

#include <cmath>
#include <thread>

#include "centro/centro_gen.hpp"
#include "centro/parallel.hpp"

using namespace centro;

TEST_CASE("free entry count") {
  CHECK(free_entry_count(1) == 1);
  CHECK(free_entry_count(2) == 2);
  CHECK(free_entry_count(4) == 8);
  CHECK(free_entry_count(5) == 13);
}

TEST_CASE("free entries: brute-force count of mirror pairs") {
  // Orbits of (i, j) -> (n-1-i, n-1-j) on the grid, counted by marking.
  for (std::size_t n = 1; n <= 9; ++n) {
    std::vector<bool> seen(n * n, false);
    std::size_t orbits = 0, fixed = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (seen[i * n + j]) continue;
        ++orbits;
        seen[i * n + j] = true;
        seen[(n - 1 - i) * n + (n - 1 - j)] = true;
        if (i == n - 1 - i && j == n - 1 - j) ++fixed;
      }
    CHECK(free_entry_count(n) == orbits);
    CHECK(fixed == n % 2);
  }
}

TEST_CASE("small samples") {
  const auto m1 = sample_centrosymmetric(1, {}, {3, 0});
  CHECK(m1.n() == 1);
  // n = 1: the single raw draw is divided by sqrt(1).
  CounterRng rng({3, 0});
  std::vector<Complex> raw(1);
  draw_entries({}, rng, raw);
  CHECK(m1.matrix()(0, 0) == raw[0]);

  const auto m2 = sample_centrosymmetric(2, {}, {3, 1}).matrix();
  CHECK(m2(0, 0) == m2(1, 1));
  CHECK(m2(0, 1) == m2(1, 0));
  CHECK(m2(0, 0) != m2(0, 1));
}

TEST_CASE("sampled matrices are exactly centrosymmetric") {
  for (std::size_t n = 1; n <= 17; ++n) {
    const auto m = sample_centrosymmetric(n, {}, {42, n}).matrix();
    CHECK(is_centrosymmetric(m, 0.0));
    const auto j = counter_identity(n);
    // J M J permutes entries, so equality is exact.
    ComplexMatrix jmj(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) jmj(r, c) = m(n - 1 - r, n - 1 - c);
    CHECK(jmj == m);
  }
}

TEST_CASE("n=5 uses 13 raw draws in row-major order") {
  const std::size_t n = 5;
  const auto m = sample_centrosymmetric(n, {}, {9, 4}).matrix();
  CounterRng rng({9, 4});
  std::vector<Complex> raw(13);
  draw_entries({}, rng, raw);
  const double s = 1.0 / std::sqrt(5.0);
  // First free entry is (0,0), the center (2,2) is the 13th.
  CHECK(m(0, 0) == raw[0] * s);
  CHECK(m(2, 2) == raw[12] * s);
  CHECK(m(2, 1) == raw[11] * s);
  CHECK(m(2, 3) == m(2, 1));
}

TEST_CASE("is_centrosymmetric") {
  CHECK(is_centrosymmetric(ComplexMatrix::identity(6), 0.0));
  CHECK_FALSE(is_centrosymmetric(ComplexMatrix{{1.0, 2.0}, {3.0, 4.0}}, 0.0));
  CHECK(is_centrosymmetric(ComplexMatrix{{1.0, 2.0}, {2.0, 1.0 + 1e-9}}, 1e-8));
  CHECK_THROWS_AS(is_centrosymmetric(ComplexMatrix(2, 3), 0.0), DimensionError);
  CHECK_THROWS_AS(CentrosymmetricMatrix::from_matrix(ComplexMatrix{{1.0, 2.0}, {3.0, 4.0}}),
                  std::invalid_argument);
}

TEST_CASE("sampling is reproducible across thread schedules") {
  const std::size_t count = 32;
  auto draw_all = [&](unsigned threads) {
    std::vector<ComplexMatrix> out(count);
    parallel_for(count, threads, [&](std::size_t t) {
      out[t] = sample_centrosymmetric(9, {}, {77, t}).matrix();
    });
    return out;
  };
  const auto one = draw_all(1);
  CHECK(draw_all(3) == one);
  CHECK(draw_all(8) == one);
  CHECK(one[0] != one[1]);
}

TEST_CASE("moment self-test on 1e6 draws") {
  const auto r = moment_self_test({}, 1'000'000, {2024, 0});
  CHECK(std::abs(r.mean) <= 5e-3);
  CHECK(std::abs(r.second) <= 5e-3);
  CHECK(r.abs2 >= 0.995);
  CHECK(r.abs2 <= 1.005);
  CHECK(r.passed());
  CHECK_THROWS_AS(moment_self_test({}, 100, {1, 0}), std::invalid_argument);
}

TEST_CASE("entry variance is 1/n") {
  const std::size_t n = 8, trials = 10'000;
  double s = 0.0, s2 = 0.0;
  std::vector<double> samples;
  for (std::size_t t = 0; t < trials; ++t) {
    const Complex x = sample_centrosymmetric(n, {}, {5, t}).matrix()(1, 6);
    samples.push_back(std::norm(x));
    s += std::norm(x);
  }
  const double v = s / trials;
  for (double a : samples) s2 += (a - v) * (a - v);
  const double se = std::sqrt(s2 / (trials - 1) / trials);
  CHECK(std::abs(v - 1.0 / n) <= 5 * se);
}

TEST_CASE("centrosymmetric JSON round trip") {
  const auto m = sample_centrosymmetric(4, {}, {12, 3});
  const auto j = to_json(m);
  CHECK(j.at("n") == 4);
  CHECK(j.at("seed") == 12);
  CHECK(j.at("dist") == "standard_complex_gaussian");
  CHECK(j.at("entries").size() == 16);
  const auto back = centrosymmetric_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.matrix() == m.matrix());
  CHECK(back.stream().stream_index == 3);
}
