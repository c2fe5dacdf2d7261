#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "centro/linalg.hpp"
#include "centro/random.hpp"

namespace centro {

/// Law of the raw entries x_ij. Must have E[x] = 0, E[x^2] = 0, E[|x|^2] = 1.
struct EntryDistribution {
  enum class Kind { standard_complex_gaussian };

  Kind kind = Kind::standard_complex_gaussian;
  std::string descriptor = "standard_complex_gaussian";

  static EntryDistribution standard_complex_gaussian() { return {}; }
  static EntryDistribution from_name(const std::string& name);
  const std::string& name() const noexcept { return descriptor; }

  friend bool operator==(const EntryDistribution& a, const EntryDistribution& b) {
    return a.kind == b.kind;
  }
};

/// Fills out[0..count) with raw draws from dist using rng.
void draw_entries(const EntryDistribution& dist, CounterRng& rng, std::span<Complex> out);

/// A square matrix with m(i, j) == m(n-1-i, n-1-j) bit-for-bit, together with
/// the stream and law it was drawn from.
class CentrosymmetricMatrix {
 public:
  /// Wraps an existing matrix; throws std::invalid_argument unless it is
  /// exactly centrosymmetric.
  static CentrosymmetricMatrix from_matrix(ComplexMatrix m, SeedStream stream = {},
                                           EntryDistribution dist = {});

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t n() const noexcept { return m_.rows(); }
  SeedStream stream() const noexcept { return stream_; }
  const EntryDistribution& distribution() const noexcept { return dist_; }

 private:
  friend CentrosymmetricMatrix sample_centrosymmetric(std::size_t, const EntryDistribution&,
                                                      SeedStream);
  CentrosymmetricMatrix(ComplexMatrix m, SeedStream stream, EntryDistribution dist)
      : m_(std::move(m)), stream_(stream), dist_(std::move(dist)) {}

  ComplexMatrix m_;
  SeedStream stream_;
  EntryDistribution dist_;
};

/// Number of independent entries of an n×n centrosymmetric matrix, ceil(n²/2).
std::size_t free_entry_count(std::size_t n) noexcept;

/// Draws ceil(n²/2) raw entries in row-major order over the positions that are
/// lexicographically <= their mirror, copies each to the mirror and scales
/// everything by 1/sqrt(n).
CentrosymmetricMatrix sample_centrosymmetric(std::size_t n, const EntryDistribution& dist,
                                             SeedStream stream);

bool is_centrosymmetric(const ComplexMatrix& m, double tol);

struct MomentSelfTestReport {
  std::size_t draws = 0;
  Complex mean;         // E[x]
  double mean_se = 0;
  Complex second;       // E[x^2]
  double second_se = 0;
  double abs2 = 0;      // E[|x|^2]
  double abs2_se = 0;
  std::vector<std::string> violations;  // moments more than 5 SE off target

  bool passed() const noexcept { return violations.empty(); }
};

MomentSelfTestReport moment_self_test(const EntryDistribution& dist, std::size_t draws,
                                      SeedStream stream);

nlohmann::json to_json(const CentrosymmetricMatrix& m);
CentrosymmetricMatrix centrosymmetric_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MomentSelfTestReport& r);

}  // namespace centro
