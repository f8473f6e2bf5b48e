#include "fif/analysis.hpp"

namespace fif {

double rms_error(const FifModel& model, const Series& series, int depth) {
  const int d = depth < 0 ? default_depth(model) : depth;
  return rms_error([&](double x) { return evaluate_fif(model, x, d); }, series);
}

double rms_error(const QuadModel& model, const Series& series) {
  return rms_error([&](double x) { return evaluate_quad(model, x); }, series);
}

ComparisonRow compare(const Series& series, const Knots& knots, CompareOptions options,
                      std::string dataset) {
  const FitReport report = fit_d_discrete(series, knots, options.fit);
  const FifModel fractal = fitted_model(knots, report);
  const QuadModel quad = fit_quadratic(series, knots);

  ComparisonRow row;
  row.dataset = std::move(dataset);
  row.eval_depth = options.depth < 0 ? default_depth(fractal) : options.depth;
  row.fractal_rms = rms_error(fractal, series, row.eval_depth);
  row.quadratic_rms = rms_error(quad, series);
  row.collage_bound = report.collage_bound;
  row.contraction_factor = report.contraction_factor;
  row.clamped = report.any_clamped();
  return row;
}

}  // namespace fif
