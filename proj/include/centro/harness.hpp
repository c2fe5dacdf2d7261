#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "centro/centro_gen.hpp"
#include "centro/linalg.hpp"

namespace centro {

/// P(z) = a_1 z + ... + a_d z^d. There is no constant term: it shifts every
/// L(f) by the same amount and vanishes after centering.
class TestPolynomial {
 public:
  explicit TestPolynomial(std::vector<Complex> coeffs);

  /// Comma-separated a_1,...,a_d, e.g. "0,0,2,1" for 2x^3 + x^4.
  static TestPolynomial parse(const std::string& text);

  std::size_t degree() const noexcept { return coeffs_.size(); }
  const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
  Complex operator()(Complex z) const noexcept;
  std::string to_string() const;

  friend bool operator==(const TestPolynomial&, const TestPolynomial&) = default;

 private:
  std::vector<Complex> coeffs_;
};

/// L(P) = Σ_i P(λ_i).
Complex les(const Spectrum& spec, const TestPolynomial& poly);

/// Limiting variance of the centered LES: Σ_k 2k|a_k|².
double predicted_sigma2(const TestPolynomial& poly);

/// 2 / (1 - z·conj(eta))², the limiting Cov(Tr R_z°, conj Tr R_eta°).
Complex predicted_resolvent_covariance(Complex z, Complex eta);

/// Σ_i 1/(z - λ_i). Throws std::domain_error if z is within 1e-9 of an
/// eigenvalue.
Complex resolvent_trace(const Spectrum& spec, Complex z);

/// |Tr R_z - n/z - Σ_{k=1}^{kmax} z^{-k-1} Tr M^k|, with Tr R_z taken from the
/// spectrum and the traces from matrix powers.
double resolvent_series_residual(const ComplexMatrix& m, const Spectrum& spec, Complex z,
                                 int kmax = 8);

enum class GuardMode {
  spectral_radius,  // reject when max|λ| > rho
  operator_norm,    // reject unless ‖T1‖ <= rho and ‖T2‖ <= rho
};

struct RunConfig {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  EntryDistribution dist;
  std::optional<TestPolynomial> poly;
  std::vector<Complex> contour_points;
  double rho = 2.2;
  double tau = 0.5;
  GuardMode guard = GuardMode::spectral_radius;
  unsigned threads = 0;  // 0: resolve from environment; never affects results
  bool keep_spectra = false;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

/// Default contour: `count` equally spaced points on |z| = 2 + tau.
std::vector<Complex> default_contour(double tau, std::size_t count = 8);

struct TrialRecord {
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;  // substream key
  Complex les;
  double spectral_radius = 0;
  std::optional<double> block_norm;
  std::vector<Complex> resolvent;  // aligned with RunConfig::contour_points
  bool accepted = true;
};

struct SummaryStats {
  Complex mean;                 // raw mean of L over accepted trials
  double variance = 0;          // mean |L°|², divisor T-1
  double variance_real = 0;     // Var(Re L°)
  double variance_scaled = 0;   // mean |L°/√n|²
  double skewness = 0;          // of Re L°
  double excess_kurtosis = 0;   // of Re L°
  double ks_statistic = 0;      // Re L° against N(0, σ²/2)
  double ks_pvalue = 0;
  double predicted_sigma2 = 0;
};

struct TrialBatch {
  RunConfig config;
  std::vector<TrialRecord> records;  // one per trial, in trial order
  std::vector<Complex> les_values;   // accepted trials only
  std::size_t guard_rejections = 0;
  std::optional<SummaryStats> summaries;
  std::vector<Spectrum> spectra;     // filled when config.keep_spectra

  /// L - mean(L) for accepted trials.
  std::vector<Complex> centered_les() const;
};

/// Samples config.trials matrices on substreams (master_seed, t), solves each
/// through the block reduction, and records L(P) and Tr R_z for every
/// contour point. Results do not depend on the thread count.
TrialBatch run_trials(const RunConfig& config);

/// run_trials plus the CLT summary. Requires config.poly.
TrialBatch run_clt_experiment(const RunConfig& config);

SummaryStats summarize_les(const TrialBatch& batch);

struct CovarianceEntry {
  Complex z;
  Complex eta;
  Complex empirical;
  Complex predicted;
  double relative_error = 0;  // |empirical - predicted| / |predicted|
};

struct CovarianceReport {
  TrialBatch batch;
  double max_spectral_radius = 0;
  std::vector<CovarianceEntry> entries;  // every ordered pair of contour points
};

CovarianceReport run_covariance_kernel_experiment(const RunConfig& config);

struct CircularLawReport {
  TrialBatch batch;             // spectra retained for scatter output
  std::size_t eigenvalue_count = 0;
  double radial_ks = 0;         // vs F(r) = min(r², 1)
  double radial_ks_pvalue = 0;
  double angular_chi2 = 0;      // 16 equal sectors
  double angular_pvalue = 0;
  double fraction_outside = 0;  // |λ| > 1.05
  double spectral_radius = 0;
};

inline constexpr std::size_t kAngularSectors = 16;

/// KS distance between the empirical CDF of |λ| and r ↦ min(r², 1).
double radial_ks_uniform_disc(std::span<const Complex> eigenvalues);

/// Pearson chi-square of arg(λ) counts over `sectors` equal sectors.
double angular_chi_square(std::span<const Complex> eigenvalues, std::size_t sectors);

CircularLawReport run_circular_law_experiment(const RunConfig& config);

nlohmann::json to_json(const SummaryStats& s);
nlohmann::json to_json(const TrialRecord& r, const RunConfig& config);
nlohmann::json summary_json(const TrialBatch& batch);
nlohmann::json to_json(const CovarianceReport& r);
nlohmann::json to_json(const CircularLawReport& r);

/// One JSON object per line, in trial order.
void write_jsonl(const TrialBatch& batch, std::ostream& out);

/// Key used for contour points in JSON objects, e.g. "2.5,0".
std::string contour_key(Complex z);

}  // namespace centro
