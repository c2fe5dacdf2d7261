#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include "centro/harness.hpp"

namespace centro {

enum class PlotKind {
  scatter,           // re,im of every retained eigenvalue
  histogram,         // Re L°
  histogram_scaled,  // Re L° / √n
};

inline constexpr std::size_t kDefaultHistogramBins = 30;

/// CSV with header "re,im", one eigenvalue per row.
void write_scatter_csv(std::span<const Complex> eigenvalues, std::ostream& out);

/// Comment lines carry the overlay parameters, then "bin_lo,bin_hi,count,density".
///   # overlay: normal mean=0 sigma2=<complex variance> real_part_sigma2=<half of it>
void write_histogram_csv(std::span<const double> samples, std::size_t bins, double overlay_sigma2,
                         const std::string& label, std::ostream& out);

/// Writes plot data for a batch to path. Scatter needs retained spectra;
/// histograms need accepted LES values. Throws std::runtime_error on I/O
/// failure and std::invalid_argument on an empty batch.
void emit_plot_data(const TrialBatch& batch, PlotKind kind, const std::filesystem::path& path,
                    std::size_t bins = kDefaultHistogramBins);

}  // namespace centro
