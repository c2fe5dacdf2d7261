#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "centro/harness.hpp"
#include "centro/stats.hpp"

using namespace centro;

TEST_CASE("sample moments of 1..4") {
  const std::vector<double> x{1, 2, 3, 4};
  const auto m = stats::sample_moments(x);
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.variance == doctest::Approx(5.0 / 3.0));
  CHECK(m.skewness == doctest::Approx(0.0));
  CHECK(m.excess_kurtosis == doctest::Approx(-1.36));
}

TEST_CASE("normal cdf") {
  CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(stats::normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(stats::normal_cdf(2.0, 0.0, 4.0) == doctest::Approx(stats::normal_cdf(1.0)));
}

TEST_CASE("KS statistic") {
  auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  const std::vector<double> one{0.5};
  CHECK(stats::ks_statistic(one, uniform) == doctest::Approx(0.5));
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back((i + 0.5) / 100.0);
  CHECK(stats::ks_statistic(grid, uniform) == doctest::Approx(0.005));
  CHECK(stats::ks_pvalue(0.0, 100) == doctest::Approx(1.0));
  CHECK(stats::ks_pvalue(0.5, 1000) < 1e-12);
  // Critical value at 5% for large n is 1.358/sqrt(n).
  CHECK(stats::ks_pvalue(1.358 / std::sqrt(10000.0), 10000) == doctest::Approx(0.05).epsilon(0.02));
}

TEST_CASE("chi-square upper tail") {
  CHECK(stats::chi_square_pvalue(24.995790, 15) == doctest::Approx(0.05).epsilon(1e-5));
  CHECK(stats::chi_square_pvalue(2.0, 2) == doctest::Approx(std::exp(-1.0)));
  CHECK(stats::chi_square_pvalue(0.0, 15) == doctest::Approx(1.0));
}

TEST_CASE("histogram") {
  const std::vector<double> x{0.0, 0.1, 0.5, 0.9, 1.0};
  const auto h = stats::histogram(x, 2);
  REQUIRE(h.edges.size() == 3);
  CHECK(h.edges.front() == 0.0);
  CHECK(h.edges.back() == 1.0);
  CHECK(h.counts[0] == 2);
  CHECK(h.counts[1] == 3);
  CHECK_THROWS_AS(stats::histogram(x, 0), std::invalid_argument);
  CHECK_THROWS_AS(stats::histogram(std::vector<double>{}, 3), std::invalid_argument);
}

TEST_CASE("synthetic uniform disc passes the radial and angular checks") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> pts;
  for (int i = 0; i < 2000; ++i) pts.push_back(std::polar(std::sqrt(u(gen)), 2 * std::numbers::pi * u(gen)));
  CHECK(radial_ks_uniform_disc(pts) <= 0.04);
  const double chi2 = angular_chi_square(pts, kAngularSectors);
  CHECK(stats::chi_square_pvalue(chi2, kAngularSectors - 1) >= 0.001);

  // Points bunched on the unit circle fail the radial check.
  std::vector<Complex> ring;
  for (int i = 0; i < 2000; ++i) ring.push_back(std::polar(1.0, 2 * std::numbers::pi * u(gen)));
  CHECK(radial_ks_uniform_disc(ring) >= 0.9);
}
