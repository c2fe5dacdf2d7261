#include "centro/centro_gen.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/random/normal_distribution.hpp>

namespace centro {

EntryDistribution EntryDistribution::from_name(const std::string& name) {
  if (name == "standard_complex_gaussian" || name == "gaussian") return standard_complex_gaussian();
  throw std::invalid_argument("unknown entry distribution: " + name);
}

void draw_entries(const EntryDistribution& dist, CounterRng& rng, std::span<Complex> out) {
  switch (dist.kind) {
    case EntryDistribution::Kind::standard_complex_gaussian: {
      // Re and Im independent N(0, 1/2).
      boost::random::normal_distribution<double> normal(0.0, std::sqrt(0.5));
      for (auto& x : out) {
        const double re = normal(rng);
        const double im = normal(rng);
        x = Complex(re, im);
      }
      return;
    }
  }
  throw std::logic_error("unhandled entry distribution");
}

std::size_t free_entry_count(std::size_t n) noexcept { return (n * n + 1) / 2; }

CentrosymmetricMatrix sample_centrosymmetric(std::size_t n, const EntryDistribution& dist,
                                             SeedStream stream) {
  if (n == 0) throw std::invalid_argument("sample_centrosymmetric: n must be positive");
  CounterRng rng(stream);
  std::vector<Complex> raw(free_entry_count(n));
  draw_entries(dist, rng, raw);

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix m(n, n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t mi = n - 1 - i;
      const std::size_t mj = n - 1 - j;
      if (i * n + j > mi * n + mj) continue;  // owned by its mirror
      const Complex v = raw[next++] * scale;
      m(i, j) = v;
      m(mi, mj) = v;
    }
  }
  return CentrosymmetricMatrix(std::move(m), stream, dist);
}

bool is_centrosymmetric(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) throw DimensionError("is_centrosymmetric: matrix must be square");
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(m(i, j) - m(n - 1 - i, n - 1 - j)) > tol) return false;
  return true;
}

CentrosymmetricMatrix CentrosymmetricMatrix::from_matrix(ComplexMatrix m, SeedStream stream,
                                                         EntryDistribution dist) {
  if (!is_centrosymmetric(m, 0.0)) {
    throw std::invalid_argument("matrix is not centrosymmetric");
  }
  return CentrosymmetricMatrix(std::move(m), stream, std::move(dist));
}

MomentSelfTestReport moment_self_test(const EntryDistribution& dist, std::size_t draws,
                                      SeedStream stream) {
  if (draws < 10'000) throw std::invalid_argument("moment_self_test: need at least 1e4 draws");
  CounterRng rng(stream);
  std::vector<Complex> x(draws);
  draw_entries(dist, rng, x);

  const double n = static_cast<double>(draws);
  Complex s1 = 0.0, s2 = 0.0;
  double sa = 0.0;
  for (const auto& v : x) {
    s1 += v;
    s2 += v * v;
    sa += std::norm(v);
  }
  MomentSelfTestReport r;
  r.draws = draws;
  r.mean = s1 / n;
  r.second = s2 / n;
  r.abs2 = sa / n;

  double v1 = 0.0, v2 = 0.0, va = 0.0;
  for (const auto& v : x) {
    v1 += std::norm(v - r.mean);
    v2 += std::norm(v * v - r.second);
    const double d = std::norm(v) - r.abs2;
    va += d * d;
  }
  r.mean_se = std::sqrt(v1 / (n - 1) / n);
  r.second_se = std::sqrt(v2 / (n - 1) / n);
  r.abs2_se = std::sqrt(va / (n - 1) / n);

  if (std::abs(r.mean) > 5 * r.mean_se) r.violations.emplace_back("E[x] != 0");
  if (std::abs(r.second) > 5 * r.second_se) r.violations.emplace_back("E[x^2] != 0");
  if (std::abs(r.abs2 - 1.0) > 5 * r.abs2_se) r.violations.emplace_back("E[|x|^2] != 1");
  return r;
}

nlohmann::json to_json(const CentrosymmetricMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& x : m.matrix().data()) entries.push_back({x.real(), x.imag()});
  return {{"n", m.n()},
          {"seed", m.stream().master_seed},
          {"stream", m.stream().stream_index},
          {"dist", m.distribution().name()},
          {"entries", std::move(entries)}};
}

CentrosymmetricMatrix centrosymmetric_from_json(const nlohmann::json& j) {
  const auto n = j.at("n").get<std::size_t>();
  std::vector<Complex> entries;
  entries.reserve(n * n);
  for (const auto& e : j.at("entries")) entries.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  SeedStream stream{j.value("seed", std::uint64_t{0}), j.value("stream", std::uint64_t{0})};
  return CentrosymmetricMatrix::from_matrix(ComplexMatrix(n, n, std::move(entries)), stream,
                                            EntryDistribution::from_name(j.value("dist", std::string("standard_complex_gaussian"))));
}

nlohmann::json to_json(const MomentSelfTestReport& r) {
  return {{"draws", r.draws},
          {"mean", {r.mean.real(), r.mean.imag()}},
          {"mean_se", r.mean_se},
          {"second", {r.second.real(), r.second.imag()}},
          {"second_se", r.second_se},
          {"abs2", r.abs2},
          {"abs2_se", r.abs2_se},
          {"violations", r.violations},
          {"passed", r.passed()}};
}

}  // namespace centro
