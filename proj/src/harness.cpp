#include "centro/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "centro/eigensolver.hpp"
#include "centro/parallel.hpp"
#include "centro/reduction.hpp"
#include "centro/stats.hpp"

namespace centro {

// ---------------------------------------------------------------------------
// Test polynomials

TestPolynomial::TestPolynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("test polynomial needs degree >= 1");
  if (coeffs_.back() == Complex(0.0)) throw std::invalid_argument("leading coefficient a_d must be nonzero");
  for (const auto& a : coeffs_)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw std::invalid_argument("polynomial coefficients must be finite");
}

TestPolynomial TestPolynomial::parse(const std::string& text) {
  std::vector<Complex> coeffs;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto first = tok.find_first_not_of(" \t");
    const auto last = tok.find_last_not_of(" \t");
    if (first == std::string::npos) throw std::invalid_argument("empty coefficient in --poly");
    tok = tok.substr(first, last - first + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw std::invalid_argument("bad coefficient '" + tok + "' in --poly");
    }
    coeffs.emplace_back(v, 0.0);
  }
  return TestPolynomial(std::move(coeffs));
}

Complex TestPolynomial::operator()(Complex z) const noexcept {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc * z;
}

std::string TestPolynomial::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ',';
    std::ostringstream os;
    os << coeffs_[i].real();
    if (coeffs_[i].imag() != 0.0) os << (coeffs_[i].imag() < 0 ? "" : "+") << coeffs_[i].imag() << 'i';
    out += os.str();
  }
  return out;
}

Complex les(const Spectrum& spec, const TestPolynomial& poly) {
  Complex s = 0.0;
  for (const auto& l : spec.eigenvalues) s += poly(l);
  return s;
}

double predicted_sigma2(const TestPolynomial& poly) {
  double s = 0.0;
  const auto& a = poly.coeffs();
  for (std::size_t k = 1; k <= a.size(); ++k) s += 2.0 * static_cast<double>(k) * std::norm(a[k - 1]);
  return s;
}

Complex predicted_resolvent_covariance(Complex z, Complex eta) {
  const Complex d = 1.0 - z * std::conj(eta);
  return 2.0 / (d * d);
}

Complex resolvent_trace(const Spectrum& spec, Complex z) {
  Complex s = 0.0;
  for (const auto& l : spec.eigenvalues) {
    const Complex d = z - l;
    if (std::abs(d) <= 1e-9) throw std::domain_error("resolvent_trace: z is too close to an eigenvalue");
    s += 1.0 / d;
  }
  return s;
}

double resolvent_series_residual(const ComplexMatrix& m, const Spectrum& spec, Complex z, int kmax) {
  const Complex tr = resolvent_trace(spec, z);
  const auto traces = trace_powers(m, kmax);
  Complex series = static_cast<double>(m.rows()) / z;
  Complex zpow = 1.0 / (z * z);  // z^{-k-1} at k = 1
  for (int k = 1; k <= kmax; ++k) {
    series += zpow * traces[static_cast<std::size_t>(k - 1)];
    zpow /= z;
  }
  return std::abs(tr - series);
}

// ---------------------------------------------------------------------------
// Configuration

void RunConfig::validate() const {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  for (const auto& z : contour_points)
    if (!(std::abs(z) > 1.2)) throw std::invalid_argument("contour points must satisfy |z| > 1.2");
}

namespace {

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }
Complex complex_from(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

const char* guard_name(GuardMode g) {
  return g == GuardMode::spectral_radius ? "spectral_radius" : "operator_norm";
}

GuardMode guard_from(const std::string& s) {
  if (s == "spectral_radius" || s == "spectral-radius") return GuardMode::spectral_radius;
  if (s == "operator_norm" || s == "operator-norm") return GuardMode::operator_norm;
  throw std::invalid_argument("unknown guard mode: " + s);
}

// Slow convergence only happens when the top two singular values nearly tie;
// the last iterate is then already close enough for a threshold test.
double guard_norm(const ComplexMatrix& t) {
  try {
    return operator_norm_estimate(t);
  } catch (const ConvergenceError& e) {
    return e.last_estimate();
  }
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json poly = nullptr;
  if (c.poly) {
    poly = nlohmann::json::array();
    for (const auto& a : c.poly->coeffs()) poly.push_back(complex_json(a));
  }
  nlohmann::json contour = nlohmann::json::array();
  for (const auto& z : c.contour_points) contour.push_back(complex_json(z));
  return {{"n", c.n},
          {"trials", c.trials},
          {"seed", c.master_seed},
          {"dist", c.dist.name()},
          {"poly", std::move(poly)},
          {"contour", std::move(contour)},
          {"rho", c.rho},
          {"tau", c.tau},
          {"guard", guard_name(c.guard)},
          {"keep_spectra", c.keep_spectra}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.n = j.at("n").get<std::size_t>();
  c.trials = j.at("trials").get<std::size_t>();
  c.master_seed = j.at("seed").get<std::uint64_t>();
  c.dist = EntryDistribution::from_name(j.value("dist", std::string("standard_complex_gaussian")));
  if (j.contains("poly") && !j.at("poly").is_null()) {
    std::vector<Complex> coeffs;
    for (const auto& a : j.at("poly")) coeffs.push_back(a.is_array() ? complex_from(a) : Complex(a.get<double>()));
    c.poly = TestPolynomial(std::move(coeffs));
  }
  if (j.contains("contour"))
    for (const auto& z : j.at("contour")) c.contour_points.push_back(complex_from(z));
  c.rho = j.value("rho", 2.2);
  c.tau = j.value("tau", 0.5);
  c.guard = guard_from(j.value("guard", std::string("spectral_radius")));
  c.keep_spectra = j.value("keep_spectra", false);
  c.validate();
  return c;
}

std::vector<Complex> default_contour(double tau, std::size_t count) {
  std::vector<Complex> pts;
  pts.reserve(count);
  const double r = 2.0 + tau;
  for (std::size_t i = 0; i < count; ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
    pts.push_back(std::polar(r, theta));
  }
  return pts;
}

std::string contour_key(Complex z) {
  char buf[64];
  auto r1 = std::to_chars(buf, buf + sizeof buf, z.real());
  *r1.ptr++ = ',';
  auto r2 = std::to_chars(r1.ptr, buf + sizeof buf, z.imag());
  return std::string(buf, r2.ptr);
}

// ---------------------------------------------------------------------------
// Trial loop

std::vector<Complex> TrialBatch::centered_les() const {
  if (les_values.empty()) return {};
  Complex mean = 0.0;
  for (const auto& l : les_values) mean += l;
  mean /= static_cast<double>(les_values.size());
  std::vector<Complex> out;
  out.reserve(les_values.size());
  for (const auto& l : les_values) out.push_back(l - mean);
  return out;
}

TrialBatch run_trials(const RunConfig& config) {
  config.validate();
  TrialBatch batch;
  batch.config = config;
  batch.records.resize(config.trials);
  if (config.keep_spectra) batch.spectra.resize(config.trials);

  parallel_for(config.trials, resolve_thread_count(config.threads), [&](std::size_t t) {
    const SeedStream stream{config.master_seed, t};
    TrialRecord& rec = batch.records[t];
    rec.trial_index = t;
    rec.seed = stream.key();
    try {
      const CentrosymmetricMatrix cm = sample_centrosymmetric(config.n, config.dist, stream);
      Spectrum spec = eigenvalues_centrosymmetric(cm);
      rec.spectral_radius = spectral_radius(spec);
      if (config.poly) rec.les = les(spec, *config.poly);
      rec.resolvent.reserve(config.contour_points.size());
      for (const auto& z : config.contour_points) rec.resolvent.push_back(resolvent_trace(spec, z));

      if (config.guard == GuardMode::operator_norm && config.n >= 2) {
        const BlockReduction r = block_reduce(cm);
        rec.block_norm = std::max(guard_norm(r.t1), guard_norm(r.t2));
        rec.accepted = *rec.block_norm <= config.rho;
      } else {
        rec.accepted = rec.spectral_radius <= config.rho;
      }
      if (config.keep_spectra) batch.spectra[t] = std::move(spec);
    } catch (const EigenError& e) {
      throw EigenError("trial " + std::to_string(t) + ": " + e.what(), e.deflated());
    }
  });

  for (const auto& rec : batch.records) {
    if (!rec.accepted) {
      ++batch.guard_rejections;
      continue;
    }
    if (config.poly) batch.les_values.push_back(rec.les);
  }
  return batch;
}

SummaryStats summarize_les(const TrialBatch& batch) {
  if (!batch.config.poly) throw std::invalid_argument("summarize_les: no test polynomial");
  const auto centered = batch.centered_les();
  if (centered.size() < 2) throw std::runtime_error("summarize_les: fewer than two accepted trials");

  SummaryStats s;
  for (const auto& l : batch.les_values) s.mean += l;
  s.mean /= static_cast<double>(batch.les_values.size());

  const double t = static_cast<double>(centered.size());
  double abs2 = 0.0;
  std::vector<double> re;
  re.reserve(centered.size());
  for (const auto& c : centered) {
    abs2 += std::norm(c);
    re.push_back(c.real());
  }
  s.variance = abs2 / (t - 1.0);
  s.variance_scaled = s.variance / static_cast<double>(batch.config.n);
  const auto m = stats::sample_moments(re);
  s.variance_real = m.variance;
  s.skewness = m.skewness;
  s.excess_kurtosis = m.excess_kurtosis;
  s.predicted_sigma2 = predicted_sigma2(*batch.config.poly);
  const double real_var = s.predicted_sigma2 / 2.0;
  s.ks_statistic = stats::ks_statistic(re, [real_var](double x) { return stats::normal_cdf(x, 0.0, real_var); });
  s.ks_pvalue = stats::ks_pvalue(s.ks_statistic, re.size());
  return s;
}

TrialBatch run_clt_experiment(const RunConfig& config) {
  if (!config.poly) throw std::invalid_argument("clt experiment requires a test polynomial");
  if (config.trials < 2) throw std::invalid_argument("clt experiment requires trials >= 2");
  TrialBatch batch = run_trials(config);
  if (batch.les_values.empty()) throw std::runtime_error("all trials were rejected by the guard");
  batch.summaries = summarize_les(batch);
  return batch;
}

CovarianceReport run_covariance_kernel_experiment(const RunConfig& config) {
  if (config.contour_points.empty()) throw std::invalid_argument("covariance experiment requires contour points");
  if (config.trials < 2) throw std::invalid_argument("covariance experiment requires trials >= 2");
  CovarianceReport rep;
  rep.batch = run_trials(config);
  const auto& recs = rep.batch.records;
  for (const auto& r : recs) rep.max_spectral_radius = std::max(rep.max_spectral_radius, r.spectral_radius);
  for (const auto& z : config.contour_points) {
    if (std::abs(z) < 1.2 * rep.max_spectral_radius) {
      throw std::domain_error("contour point " + contour_key(z) + " lies within 1.2x the observed spectral radius");
    }
  }

  const std::size_t p = config.contour_points.size();
  std::vector<Complex> mean(p, 0.0);
  std::size_t accepted = 0;
  for (const auto& r : recs) {
    if (!r.accepted) continue;
    ++accepted;
    for (std::size_t a = 0; a < p; ++a) mean[a] += r.resolvent[a];
  }
  if (accepted < 2) throw std::runtime_error("fewer than two trials passed the guard");
  for (auto& m : mean) m /= static_cast<double>(accepted);

  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) {
      Complex acc = 0.0;
      for (const auto& r : recs) {
        if (!r.accepted) continue;
        acc += (r.resolvent[a] - mean[a]) * std::conj(r.resolvent[b] - mean[b]);
      }
      CovarianceEntry e;
      e.z = config.contour_points[a];
      e.eta = config.contour_points[b];
      e.empirical = acc / static_cast<double>(accepted - 1);
      e.predicted = predicted_resolvent_covariance(e.z, e.eta);
      e.relative_error = std::abs(e.empirical - e.predicted) / std::abs(e.predicted);
      rep.entries.push_back(e);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Circular law

double radial_ks_uniform_disc(std::span<const Complex> eigenvalues) {
  std::vector<double> r;
  r.reserve(eigenvalues.size());
  for (const auto& l : eigenvalues) r.push_back(std::abs(l));
  return stats::ks_statistic(r, [](double x) { return std::min(x * x, 1.0); });
}

double angular_chi_square(std::span<const Complex> eigenvalues, std::size_t sectors) {
  if (eigenvalues.empty() || sectors == 0) throw std::invalid_argument("angular_chi_square: empty input");
  std::vector<std::size_t> counts(sectors, 0);
  for (const auto& l : eigenvalues) {
    const double u = (std::arg(l) + std::numbers::pi) / (2.0 * std::numbers::pi);
    counts[std::min(static_cast<std::size_t>(u * static_cast<double>(sectors)), sectors - 1)]++;
  }
  const double expected = static_cast<double>(eigenvalues.size()) / static_cast<double>(sectors);
  double chi2 = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  return chi2;
}

CircularLawReport run_circular_law_experiment(const RunConfig& config) {
  if (config.n < 200) throw std::invalid_argument("circular-law experiment requires n >= 200");
  RunConfig cfg = config;
  cfg.keep_spectra = true;
  CircularLawReport rep;
  rep.batch = run_trials(cfg);

  std::vector<Complex> all;
  for (const auto& s : rep.batch.spectra) all.insert(all.end(), s.eigenvalues.begin(), s.eigenvalues.end());
  rep.eigenvalue_count = all.size();
  rep.radial_ks = radial_ks_uniform_disc(all);
  rep.radial_ks_pvalue = stats::ks_pvalue(rep.radial_ks, all.size());
  rep.angular_chi2 = angular_chi_square(all, kAngularSectors);
  rep.angular_pvalue = stats::chi_square_pvalue(rep.angular_chi2, static_cast<double>(kAngularSectors - 1));
  std::size_t outside = 0;
  for (const auto& l : all) {
    if (std::abs(l) > 1.05) ++outside;
    rep.spectral_radius = std::max(rep.spectral_radius, std::abs(l));
  }
  rep.fraction_outside = static_cast<double>(outside) / static_cast<double>(all.size());
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json to_json(const SummaryStats& s) {
  return {{"mean", complex_json(s.mean)},
          {"variance", s.variance},
          {"variance_real", s.variance_real},
          {"variance_scaled", s.variance_scaled},
          {"skewness", s.skewness},
          {"excess_kurtosis", s.excess_kurtosis},
          {"ks_statistic", s.ks_statistic},
          {"ks_pvalue", s.ks_pvalue},
          {"predicted_sigma2", s.predicted_sigma2}};
}

nlohmann::json to_json(const TrialRecord& r, const RunConfig& config) {
  nlohmann::json j = {{"trial_index", r.trial_index}, {"seed", r.seed}};
  if (config.poly) j["les"] = complex_json(r.les);
  j["spectral_radius"] = r.spectral_radius;
  if (r.block_norm) j["block_norm"] = *r.block_norm;
  nlohmann::json res = nlohmann::json::object();
  for (std::size_t a = 0; a < r.resolvent.size(); ++a)
    res[contour_key(config.contour_points[a])] = complex_json(r.resolvent[a]);
  j["resolvent"] = std::move(res);
  j["accepted"] = r.accepted;
  return j;
}

nlohmann::json summary_json(const TrialBatch& batch) {
  nlohmann::json j = {{"config", to_json(batch.config)},
                      {"trials", batch.records.size()},
                      {"accepted", batch.records.size() - batch.guard_rejections},
                      {"guard_rejections", batch.guard_rejections}};
  j["summaries"] = batch.summaries ? to_json(*batch.summaries) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const CovarianceReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"z", complex_json(e.z)},
                       {"eta", complex_json(e.eta)},
                       {"empirical", complex_json(e.empirical)},
                       {"predicted", complex_json(e.predicted)},
                       {"relative_error", e.relative_error}});
  }
  nlohmann::json j = summary_json(r.batch);
  j["max_spectral_radius"] = r.max_spectral_radius;
  j["covariance"] = std::move(entries);
  return j;
}

nlohmann::json to_json(const CircularLawReport& r) {
  nlohmann::json j = summary_json(r.batch);
  j["eigenvalue_count"] = r.eigenvalue_count;
  j["radial_ks"] = r.radial_ks;
  j["radial_ks_pvalue"] = r.radial_ks_pvalue;
  j["angular_chi2"] = r.angular_chi2;
  j["angular_sectors"] = kAngularSectors;
  j["angular_pvalue"] = r.angular_pvalue;
  j["fraction_outside_1_05"] = r.fraction_outside;
  j["spectral_radius"] = r.spectral_radius;
  return j;
}

void write_jsonl(const TrialBatch& batch, std::ostream& out) {
  for (const auto& r : batch.records) out << to_json(r, batch.config).dump() << '\n';
}

}  // namespace centro
