#pragma once

// Closed-form fitting of the vertical scalings by minimising the discrete
// collage distance sum_m (w_m - (Phi g)(z_m))^2, where g is the
// nearest-neighbour extension of the data. The objective separates by
// segment, and each segment's term is quadratic in its own d_i.

#include <cstddef>
#include <span>
#include <vector>

#include "fif/ifs_core.hpp"
#include "fif/series.hpp"

namespace fif {

struct FitOptions {
  double d_max = 0.99;
};

struct FitReport {
  std::vector<double> d;
  std::vector<bool> clamped;
  std::vector<bool> degenerate;
  double collage_rss = 0.0;
  double contraction_factor = 0.0;
  /// sqrt(collage_rss / M) / (1 - contraction_factor)
  double collage_bound = 0.0;

  bool any_clamped() const;
  bool any_flagged() const;
};

/// Half-open range [begin, end) of sample indices belonging to one segment.
struct SampleRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

/// Throws fif::Error(data) unless every knot is a sample of `series` and the
/// end knots are the first and last samples.
void require_knots_on_series(const Series& series, const Knots& knots);

/// Samples of each segment: [x_{i-1}, x_i), last segment closed.
std::vector<SampleRange> partition_samples(const Series& series, const Knots& knots);

FitReport fit_d_discrete(const Series& series, const Knots& knots, FitOptions options = {});

/// Per-segment collage residuals for the given scalings.
std::vector<double> collage_segment_residuals(const Series& series, const Knots& knots,
                                              std::span<const double> d);

double collage_residual(const Series& series, const Knots& knots, std::span<const double> d);

inline FifModel fitted_model(const Knots& knots, const FitReport& report) {
  return FifModel(knots, report.d);
}

}  // namespace fif
