#include "centro/plot_data.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "centro/stats.hpp"

namespace centro {

void write_scatter_csv(std::span<const Complex> eigenvalues, std::ostream& out) {
  out.precision(17);
  out << "re,im\n";
  for (const auto& l : eigenvalues) out << l.real() << ',' << l.imag() << '\n';
}

void write_histogram_csv(std::span<const double> samples, std::size_t bins, double overlay_sigma2,
                         const std::string& label, std::ostream& out) {
  const auto h = stats::histogram(samples, bins);
  out.precision(17);
  out << "# histogram of " << label << " over " << samples.size() << " samples\n";
  out << "# overlay: normal mean=0 sigma2=" << overlay_sigma2 << " real_part_sigma2=" << overlay_sigma2 / 2.0
      << '\n';
  out << "bin_lo,bin_hi,count,density\n";
  const double total = static_cast<double>(samples.size());
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double width = h.edges[b + 1] - h.edges[b];
    out << h.edges[b] << ',' << h.edges[b + 1] << ',' << h.counts[b] << ','
        << static_cast<double>(h.counts[b]) / (total * width) << '\n';
  }
}

void emit_plot_data(const TrialBatch& batch, PlotKind kind, const std::filesystem::path& path, std::size_t bins) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");

  if (kind == PlotKind::scatter) {
    if (batch.spectra.empty()) throw std::invalid_argument("scatter plot needs retained spectra");
    std::vector<Complex> all;
    for (const auto& s : batch.spectra) all.insert(all.end(), s.eigenvalues.begin(), s.eigenvalues.end());
    write_scatter_csv(all, out);
  } else {
    if (!batch.config.poly || batch.les_values.empty()) {
      throw std::invalid_argument("histogram needs accepted LES values");
    }
    const double sigma2 = predicted_sigma2(*batch.config.poly);
    const double scale = kind == PlotKind::histogram_scaled ? 1.0 / std::sqrt(static_cast<double>(batch.config.n)) : 1.0;
    std::vector<double> re;
    for (const auto& c : batch.centered_les()) re.push_back(c.real() * scale);
    const bool scaled = kind == PlotKind::histogram_scaled;
    write_histogram_csv(re, bins, scaled ? sigma2 / static_cast<double>(batch.config.n) : sigma2,
                        scaled ? "Re(L°)/sqrt(n)" : "Re(L°)", out);
  }
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace centro
