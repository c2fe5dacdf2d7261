#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "centro/centro_gen.hpp"
#include "centro/linalg.hpp"

namespace centro {

/// E[Tr(M^k) · Tr(conj(M)^l)] for the Gaussian centrosymmetric ensemble.
/// l == 0 asks for E[Tr(M^k)].
struct MomentQuery {
  std::size_t n = 0;
  int k = 1;
  int l = 0;

  void validate() const;
};

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kEnumerationBudget = 100'000'000;

/// Brute force over every (i_1..i_k, j_1..j_l) in {1..n}^{k+l}. Each factor is
/// mapped to its free entry under (i, j) ~ (n+1-i, n+1-j); a monomial
/// contributes Π p! when every free entry occurs p times unconjugated and p
/// times conjugated, and 0 otherwise. The integer total is divided by
/// n^{(k+l)/2} once at the end. Throws BudgetExceeded when n^{k+l} > budget
/// and std::invalid_argument for non-Gaussian laws.
Rational exact_mixed_trace_moment(const MomentQuery& q,
                                  const EntryDistribution& dist = {},
                                  std::uint64_t budget = kEnumerationBudget);

/// E[Tr(M^k)]; identically zero for the circular Gaussian law.
Rational exact_single_trace_moment(std::size_t n, int k, const EntryDistribution& dist = {},
                                   std::uint64_t budget = kEnumerationBudget);

/// The same expectation by summing over Wick pairings instead of index tuples:
/// for every bijection between unconjugated and conjugated factors, count the
/// index assignments for which each pair hits the same free entry. Cost is
/// k!·3^k independent of n.
Rational wick_mixed_trace_moment(const MomentQuery& q, const EntryDistribution& dist = {});

enum class MomentMethod { enumeration, wick };

struct ExactMoment {
  Rational value;
  MomentMethod method = MomentMethod::enumeration;
};

/// Enumeration when it fits the budget, Wick pairing count otherwise.
ExactMoment exact_trace_moment(const MomentQuery& q, const EntryDistribution& dist = {},
                               std::uint64_t budget = kEnumerationBudget);

/// n → ∞ limit: 2k when k == l, else 0.
double asymptotic_prediction(int k, int l);

struct McEstimate {
  Complex mean;
  double se = 0;  // sqrt(Σ|x - mean|² / (T(T-1)))
  std::size_t trials = 0;
};

/// Monte Carlo estimate from `trials` sampled matrices on substreams
/// (seed, 0..trials-1).
McEstimate mc_trace_moment(const MomentQuery& q, std::size_t trials, std::uint64_t seed,
                           unsigned threads = 0);

/// All estimates for k in [1, kmax] and l in [0, lmax] from one shared set of
/// samples. Indexed [k-1][l].
std::vector<std::vector<McEstimate>> mc_trace_moment_grid(std::size_t n, int kmax, int lmax,
                                                          std::size_t trials, std::uint64_t seed,
                                                          unsigned threads = 0);

struct MomentResult {
  MomentQuery query;
  ExactMoment exact;
  std::optional<McEstimate> mc;
  double prediction = 0;
};

nlohmann::json to_json(const MomentResult& r);

}  // namespace centro
