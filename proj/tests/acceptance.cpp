// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "centro/eigensolver.hpp"
#include "centro/harness.hpp"
#include "centro/moments.hpp"
#include "centro/reduction.hpp"

using namespace centro;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

// Exact spectral norm from the Hermitian matrix M^H M.
double spectral_norm(const ComplexMatrix& m) {
  ComplexMatrix mh(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mh(j, i) = std::conj(m(i, j));
  double top = 0.0;
  for (const auto& l : eigenvalues_dense(matmul(mh, m)).eigenvalues) top = std::max(top, l.real());
  return std::sqrt(top);
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome reduction_exactness() {
  Outcome o;
  double worst = 0.0, worst_match = 0.0;
  for (std::size_t n : {2u, 3u, 4u, 5u, 16u, 17u, 32u, 33u}) {
    for (std::uint64_t t = 0; t < 100; ++t) {
      const auto m = sample_centrosymmetric(n, {}, {1001, n * 1000 + t});
      const auto r = block_reduce(m);
      const auto res = verify_reduction(m, r);
      worst = std::max(worst, res.worst());
      o.require(res.orthogonality <= 1e-12, fmt("n=%zu t=%llu orthogonality %.3g", n, (unsigned long long)t, res.orthogonality));
      o.require(res.similarity <= 1e-12, fmt("n=%zu t=%llu residual %.3g", n, (unsigned long long)t, res.similarity));

      auto split = eigenvalues_dense(r.t1).eigenvalues;
      const auto lower = eigenvalues_dense(r.t2).eigenvalues;
      split.insert(split.end(), lower.begin(), lower.end());
      const auto dense = eigenvalues_dense(m.matrix()).eigenvalues;
      const double d = spectrum_match_distance(split, dense);
      const double tol = 1e-8 * static_cast<double>(n) * (1.0 + spectral_norm(m.matrix()));
      worst_match = std::max(worst_match, d / tol);
      o.require(d <= tol, fmt("n=%zu t=%llu eigenvalue mismatch %.3g", n, (unsigned long long)t, d));
    }
  }
  if (o.pass) o.detail = fmt("worst residual %.2e, worst match/tol %.2e", worst, worst_match);
  return o;
}

Outcome circular_law() {
  RunConfig c;
  c.n = 2000;
  c.trials = 1;
  c.master_seed = 2000;
  const auto r = run_circular_law_experiment(c);
  Outcome o;
  o.require(r.radial_ks <= 0.05, fmt("radial KS %.4f > 0.05", r.radial_ks));
  o.require(r.angular_pvalue >= 0.01, fmt("angular p %.4f < 0.01", r.angular_pvalue));
  o.require(r.fraction_outside <= 0.01, fmt("fraction outside %.4f > 0.01", r.fraction_outside));
  if (o.pass) {
    o.detail = fmt("radial KS %.4f, angular chi2 %.2f (p=%.3f), outside %.4f", r.radial_ks, r.angular_chi2,
                   r.angular_pvalue, r.fraction_outside);
  }
  return o;
}

Outcome clt_variance() {
  Outcome o;
  RunConfig c;
  c.n = 512;
  c.trials = 400;
  c.master_seed = 512;

  c.poly = TestPolynomial({1.0});
  const auto lin = run_clt_experiment(c).summaries.value();
  o.require(lin.variance >= 1.7 && lin.variance <= 2.3, fmt("P=x variance %.4f outside [1.7, 2.3]", lin.variance));
  o.require(std::abs(lin.skewness) <= 0.3, fmt("P=x skewness %.4f", lin.skewness));
  o.require(std::abs(lin.excess_kurtosis) <= 0.6, fmt("P=x excess kurtosis %.4f", lin.excess_kurtosis));

  c.poly = TestPolynomial::parse("0,0,2,1");
  const auto quart = run_clt_experiment(c).summaries.value();
  o.require(quart.variance >= 25.6 && quart.variance <= 38.4,
            fmt("P=2x^3+x^4 variance %.4f outside [25.6, 38.4]", quart.variance));

  const std::string numbers = fmt("P=x var %.4f skew %.3f kurt %.3f; P=2x^3+x^4 var %.3f", lin.variance,
                                  lin.skewness, lin.excess_kurtosis, quart.variance);
  o.detail = o.pass ? numbers : o.detail + " (" + numbers + ")";
  return o;
}

Outcome covariance_kernel() {
  RunConfig c;
  c.n = 256;
  c.trials = 500;
  c.master_seed = 256;
  c.contour_points = {Complex(2.0), Complex(-2.0)};
  const auto r = run_covariance_kernel_experiment(c);
  Outcome o;
  std::string numbers;
  for (const auto& e : r.entries) {
    if (e.z != Complex(2.0)) continue;
    o.require(e.relative_error <= 0.25, fmt("eta=%g: relative error %.3f > 0.25", e.eta.real(), e.relative_error));
    numbers += fmt("eta=%g: %.4f vs %.4f (%.1f%%) ", e.eta.real(), e.empirical.real(), e.predicted.real(),
                   100.0 * e.relative_error);
  }
  o.detail = o.pass ? numbers : o.detail + " (" + numbers + ")";
  return o;
}

Outcome moment_oracle() {
  Outcome o;
  auto exact = [](std::size_t n, int k, int l) { return exact_trace_moment({n, k, l}).value; };
  o.require(exact(4, 1, 1) == Rational{2, 1}, "exact(4,1,1) != 2");
  o.require(exact(5, 1, 1) == Rational{9, 5}, "exact(5,1,1) != 9/5");
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int k = 1; k <= 3; ++k)
      for (int l = 1; l <= 3; ++l)
        if (k != l) o.require(exact(n, k, l) == Rational{0, 1}, fmt("exact(%zu,%d,%d) != 0", n, k, l));
    for (int k = 1; k <= 4; ++k) o.require(exact(n, k, 0) == Rational{0, 1}, fmt("E Tr M^%d != 0 at n=%zu", k, n));
  }

  double worst_z = 0.0;
  for (std::size_t n : {4u, 5u, 8u}) {
    const auto grid = mc_trace_moment_grid(n, 3, 3, 100'000, 7000 + n);
    for (int k = 1; k <= 3; ++k)
      for (int l = 0; l <= 3; ++l) {
        const auto& est = grid[k - 1][l];
        const double want = exact(n, k, l).value();
        const double z = std::abs(est.mean - want) / est.se;
        worst_z = std::max(worst_z, z);
        o.require(z <= 3.0, fmt("MC n=%zu k=%d l=%d off by %.2f SE", n, k, l, z));
      }
  }

  for (int k = 1; k <= 3; ++k) {
    const double v = exact(64, k, k).value();
    o.require(std::abs(v - 2.0 * k) <= 0.1 * 2.0 * k, fmt("exact(64,%d,%d)=%.4f not within 10%% of %d", k, k, v, 2 * k));
  }
  if (o.pass) o.detail = fmt("worst MC deviation %.2f SE, exact(64,3,3)=%.5f", worst_z, exact(64, 3, 3).value());
  return o;
}

Outcome resolvent_series() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto m = sample_centrosymmetric(256, {}, {6256, t});
    const auto spec = eigenvalues_centrosymmetric(m);
    const Complex z = std::polar(2.5, 2.0 * std::numbers::pi * static_cast<double>(t) / 50.0);
    const double r = resolvent_series_residual(m.matrix(), spec, z);
    worst = std::max(worst, r);
    o.require(r <= 0.05, fmt("sample %llu: residual %.4f > 0.05", (unsigned long long)t, r));
  }
  if (o.pass) o.detail = fmt("worst residual %.4f", worst);
  return o;
}

Outcome determinism() {
  Outcome o;
  RunConfig c;
  c.n = 64;
  c.trials = 64;
  c.master_seed = 8;
  c.poly = TestPolynomial::parse("0,0,2,1");
  c.contour_points = default_contour(0.5);
  std::string reference;
  for (unsigned threads : {1u, 2u, 8u}) {
    c.threads = threads;
    std::ostringstream out;
    write_jsonl(run_clt_experiment(c), out);
    if (threads == 1) reference = out.str();
    o.require(out.str() == reference, fmt("JSONL differs at %u threads", threads));
  }
  o.require(!reference.empty(), "empty JSONL");
  if (o.pass) o.detail = fmt("%zu bytes identical at 1, 2, 8 threads", reference.size());
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 reduction exactness", reduction_exactness},
      {"2 circular law", circular_law},
      {"3 CLT variance", clt_variance},
      {"4 covariance kernel", covariance_kernel},
      {"5 moment oracle", moment_oracle},
      {"6 resolvent series", resolvent_series},
      {"7 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%s] %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
