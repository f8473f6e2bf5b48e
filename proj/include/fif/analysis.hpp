#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>

#include "fif/collage_fit.hpp"
#include "fif/quadratic.hpp"

namespace fif {

/// sqrt(sum_m (h(z_m) - w_m)^2 / M) for any callable h.
template <class H>
  requires std::invocable<H&, double>
double rms_error(H&& h, const Series& series) {
  double sum = 0.0;
  for (std::size_t m = 0; m < series.size(); ++m) {
    const double r = h(series.z()[m]) - series.w()[m];
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(series.size()));
}

/// Fractal model evaluated at `depth`, or at its default depth when depth < 0.
double rms_error(const FifModel& model, const Series& series, int depth = -1);
double rms_error(const QuadModel& model, const Series& series);

struct ComparisonRow {
  std::string dataset;
  double fractal_rms = 0.0;
  double quadratic_rms = 0.0;
  double collage_bound = 0.0;
  double contraction_factor = 0.0;
  int eval_depth = 0;
  bool clamped = false;
};

struct CompareOptions {
  FitOptions fit;
  int depth = -1;  // < 0: default depth of the fitted model
};

/// Fits both models on the same (series, knots) and reports their errors.
ComparisonRow compare(const Series& series, const Knots& knots, CompareOptions options = {},
                      std::string dataset = {});

}  // namespace fif
