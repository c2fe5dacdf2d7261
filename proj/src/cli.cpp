#include "centro/cli.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "centro/centro_gen.hpp"
#include "centro/eigensolver.hpp"
#include "centro/harness.hpp"
#include "centro/moments.hpp"
#include "centro/plot_data.hpp"
#include "centro/reduction.hpp"

namespace centro::cli {

namespace {

// Raised for flag combinations CLI11 cannot express; maps to exit code 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A check the command performs on its own result failed; exit code 1.
class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string poly;
  int k = 1;
  int l = 0;
  std::string contour;
  double rho = 2.2;
  double tau = 0.5;
  std::string guard = "spectral_radius";
  unsigned threads = 0;
  std::string out;
  std::string format = "json";
  std::string jsonl;
  std::string histogram;
  std::string histogram_scaled;
  std::string scatter;
  std::string config;
  std::string save_config;
  std::size_t draws = 1'000'000;
  std::size_t bins = kDefaultHistogramBins;
  bool dense = false;
};

double parse_double(const std::string& tok) {
  const auto first = tok.find_first_not_of(" \t");
  const auto last = tok.find_last_not_of(" \t");
  if (first == std::string::npos) throw UsageError("empty number");
  const std::string t = tok.substr(first, last - first + 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size()) throw UsageError("bad number '" + t + "'");
  return v;
}

void write_text(const Flags& f, const std::string& text, std::ostream& out) {
  if (f.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(f.out);
  if (!file) throw std::runtime_error("cannot open " + f.out + " for writing");
  file << text;
  if (!file) throw std::runtime_error("write to " + f.out + " failed");
}

void write_json(const Flags& f, const nlohmann::json& j, std::ostream& out) {
  write_text(f, j.dump(2) + "\n", out);
}

RunConfig build_config(const Flags& f, const CLI::App& sub, std::size_t default_n, std::size_t default_trials) {
  RunConfig c;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw std::runtime_error("cannot read config " + f.config);
    c = run_config_from_json(nlohmann::json::parse(in));
  } else {
    c.n = default_n;
    c.trials = default_trials;
  }
  auto given = [&](const char* name) {
    const auto* opt = sub.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--n")) c.n = f.n;
  if (given("--trials")) c.trials = f.trials;
  if (given("--seed")) c.master_seed = f.seed;
  if (given("--poly")) c.poly = TestPolynomial::parse(f.poly);
  if (given("--contour")) c.contour_points = parse_contour(f.contour);
  if (given("--rho")) c.rho = f.rho;
  if (given("--tau")) c.tau = f.tau;
  if (given("--guard")) c.guard = f.guard == "operator-norm" || f.guard == "operator_norm" ? GuardMode::operator_norm : GuardMode::spectral_radius;
  c.threads = f.threads;
  c.validate();
  if (!f.save_config.empty()) {
    std::ofstream cfg(f.save_config);
    if (!cfg) throw std::runtime_error("cannot write " + f.save_config);
    cfg << to_json(c).dump(2) << '\n';
  }
  return c;
}

void write_jsonl_file(const TrialBatch& batch, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_jsonl(batch, out);
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

void add_run_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--n", f.n, "matrix size")->check(CLI::PositiveNumber);
  sub->add_option("--trials", f.trials, "number of Monte Carlo trials")->check(CLI::PositiveNumber);
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--rho", f.rho, "guard threshold")->check(CLI::PositiveNumber);
  sub->add_option("--guard", f.guard, "guard mode")
      ->check(CLI::IsMember({"spectral_radius", "spectral-radius", "operator_norm", "operator-norm"}));
  sub->add_option("--threads", f.threads, "worker threads (default: CENTRO_SPECTRA_THREADS or all cores)");
  sub->add_option("--config", f.config, "RunConfig JSON to start from; explicit flags override it");
  sub->add_option("--save-config", f.save_config, "write the effective RunConfig as JSON");
  sub->add_option("--jsonl", f.jsonl, "per-trial JSONL records");
}

}  // namespace

std::vector<std::complex<double>> parse_contour(const std::string& text) {
  std::vector<std::complex<double>> pts;
  std::stringstream ss(text);
  std::string pair;
  while (std::getline(ss, pair, ';')) {
    if (pair.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = pair.find(',');
    if (comma == std::string::npos) throw UsageError("contour point '" + pair + "' must be re,im");
    pts.emplace_back(parse_double(pair.substr(0, comma)), parse_double(pair.substr(comma + 1)));
  }
  if (pts.empty()) throw UsageError("--contour has no points");
  return pts;
}

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral statistics of random centrosymmetric matrices", "centro_spectra"};
  app.require_subcommand(1);
  Flags f;

  auto* sample = app.add_subcommand("sample", "draw one centrosymmetric matrix");
  sample->add_option("--n", f.n, "matrix size")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", f.seed, "master seed");
  sample->add_option("--stream", f.stream, "stream index");

  auto* reduce = app.add_subcommand("reduce", "block-reduce a sampled matrix and verify the similarity");
  reduce->add_option("--n", f.n, "matrix size")->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  reduce->add_option("--seed", f.seed, "master seed");
  reduce->add_option("--stream", f.stream, "stream index");

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of a sampled matrix");
  spectrum->add_option("--n", f.n, "matrix size")->required()->check(CLI::PositiveNumber);
  spectrum->add_option("--seed", f.seed, "master seed");
  spectrum->add_option("--stream", f.stream, "stream index");
  spectrum->add_flag("--dense", f.dense, "skip the block reduction");

  auto* circular = app.add_subcommand("circular-law", "radial/angular checks of the eigenvalue cloud");
  add_run_flags(circular, f);
  circular->add_option("--scatter", f.scatter, "eigenvalue scatter CSV");

  auto* clt = app.add_subcommand("clt", "centered linear eigenvalue statistics vs the predicted variance");
  add_run_flags(clt, f);
  clt->add_option("--poly", f.poly, "coefficients a_1,...,a_d");
  clt->add_option("--histogram", f.histogram, "histogram CSV of Re L°");
  clt->add_option("--histogram-scaled", f.histogram_scaled, "histogram CSV of Re L°/sqrt(n)");
  clt->add_option("--bins", f.bins, "histogram bins")->check(CLI::PositiveNumber);

  auto* cov = app.add_subcommand("resolvent-cov", "covariance of resolvent traces vs 2(1 - z conj(eta))^-2");
  add_run_flags(cov, f);
  cov->add_option("--contour", f.contour, "points \"re,im;re,im;...\"");
  cov->add_option("--tau", f.tau, "contour margin; default contour radius is 2 + tau")->check(CLI::PositiveNumber);

  auto* moments = app.add_subcommand("moments", "exact and Monte Carlo E[Tr M^k Tr conj(M)^l]");
  moments->add_option("--n", f.n, "matrix size")->required()->check(CLI::PositiveNumber);
  moments->add_option("--k", f.k, "power on M")->check(CLI::PositiveNumber);
  moments->add_option("--l", f.l, "power on conj(M), 0 for E[Tr M^k]")->check(CLI::NonNegativeNumber);
  moments->add_option("--trials", f.trials, "Monte Carlo trials (>= 1000); omit to skip");
  moments->add_option("--seed", f.seed, "master seed");
  moments->add_option("--threads", f.threads, "worker threads");

  auto* self = app.add_subcommand("self-test", "moment check of the entry distribution");
  self->add_option("--draws", f.draws, "number of draws")->check(CLI::Range(std::size_t{10'000}, std::size_t{1} << 40));
  self->add_option("--seed", f.seed, "master seed");

  for (auto* sub : app.get_subcommands({})) {
    sub->add_option("--out", f.out, "output path (default stdout)");
    sub->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (sample->parsed()) {
      const auto m = sample_centrosymmetric(f.n, EntryDistribution{}, SeedStream{f.seed, f.stream});
      write_json(f, to_json(m), out);
    } else if (reduce->parsed()) {
      const auto m = sample_centrosymmetric(f.n, EntryDistribution{}, SeedStream{f.seed, f.stream});
      const auto r = block_reduce(m);
      const auto res = verify_reduction(m, r);
      nlohmann::json j = to_json(r);
      j["n"] = f.n;
      j["seed"] = f.seed;
      j["residual"] = res.similarity;
      j["orthogonality_residual"] = res.orthogonality;
      write_json(f, j, out);
      if (res.worst() > 1e-12) throw CheckFailed("reduction residual exceeds 1e-12");
    } else if (spectrum->parsed()) {
      const auto m = sample_centrosymmetric(f.n, EntryDistribution{}, SeedStream{f.seed, f.stream});
      const Spectrum s = f.dense ? eigenvalues_dense(m.matrix()) : eigenvalues_centrosymmetric(m);
      if (f.format == "csv") {
        std::ostringstream os;
        write_scatter_csv(s.eigenvalues, os);
        write_text(f, os.str(), out);
      } else {
        nlohmann::json j = to_json(s);
        j["n"] = f.n;
        j["seed"] = f.seed;
        j["spectral_radius"] = spectral_radius(s);
        write_json(f, j, out);
      }
    } else if (circular->parsed()) {
      const RunConfig c = build_config(f, *circular, 2000, 1);
      const auto rep = run_circular_law_experiment(c);
      if (!f.jsonl.empty()) write_jsonl_file(rep.batch, f.jsonl);
      if (!f.scatter.empty()) emit_plot_data(rep.batch, PlotKind::scatter, f.scatter);
      if (f.format == "csv") {
        std::ostringstream os;
        std::vector<Complex> all;
        for (const auto& s : rep.batch.spectra) all.insert(all.end(), s.eigenvalues.begin(), s.eigenvalues.end());
        write_scatter_csv(all, os);
        write_text(f, os.str(), out);
      } else {
        write_json(f, to_json(rep), out);
      }
    } else if (clt->parsed()) {
      const RunConfig c = build_config(f, *clt, 512, 400);
      if (!c.poly) throw UsageError("clt requires --poly (or a config with a polynomial)");
      const auto batch = run_clt_experiment(c);
      if (!f.jsonl.empty()) write_jsonl_file(batch, f.jsonl);
      if (!f.histogram.empty()) emit_plot_data(batch, PlotKind::histogram, f.histogram, f.bins);
      if (!f.histogram_scaled.empty()) emit_plot_data(batch, PlotKind::histogram_scaled, f.histogram_scaled, f.bins);
      if (f.format == "csv") {
        std::ostringstream os;
        std::vector<double> re;
        for (const auto& v : batch.centered_les()) re.push_back(v.real());
        write_histogram_csv(re, f.bins, predicted_sigma2(*c.poly), "Re(L°)", os);
        write_text(f, os.str(), out);
      } else {
        write_json(f, summary_json(batch), out);
      }
    } else if (cov->parsed()) {
      RunConfig c = build_config(f, *cov, 256, 500);
      if (c.contour_points.empty()) c.contour_points = default_contour(c.tau);
      const auto rep = run_covariance_kernel_experiment(c);
      if (!f.jsonl.empty()) write_jsonl_file(rep.batch, f.jsonl);
      write_json(f, to_json(rep), out);
    } else if (moments->parsed()) {
      MomentResult r;
      r.query = MomentQuery{f.n, f.k, f.l};
      r.query.validate();
      r.exact = exact_trace_moment(r.query);
      r.prediction = f.l == 0 ? 0.0 : asymptotic_prediction(f.k, f.l);
      if (moments->count("--trials") > 0) {
        r.mc = mc_trace_moment(r.query, f.trials, f.seed, f.threads);
      }
      write_json(f, to_json(r), out);
    } else if (self->parsed()) {
      const auto rep = moment_self_test(EntryDistribution{}, f.draws, SeedStream{f.seed, 0});
      write_json(f, to_json(rep), out);
      if (!rep.passed()) throw CheckFailed("entry distribution failed the moment self-test");
    }
  } catch (const CheckFailed& e) {
    err << "check failed: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace centro::cli
