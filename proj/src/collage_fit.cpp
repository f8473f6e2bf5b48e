#include "fif/collage_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "fif/error.hpp"

namespace fif {

namespace {

// (alpha - w, beta - g(gamma)) at one sample of one segment.
struct CollageTerms {
  double misfit;
  double lever;
};

CollageTerms collage_terms(const Series& series, const Knots& knots, std::size_t segment,
                           std::size_t m) {
  const double t = knots.local_coordinate(segment, series.z()[m]);
  const double alpha = std::lerp(knots[segment].y, knots[segment + 1].y, t);
  const double beta = std::lerp(knots.first().y, knots.last().y, t);
  const double gamma = std::lerp(knots.a(), knots.b(), t);
  return {alpha - series.w()[m], beta - series.nearest(gamma)};
}

double max_abs(std::span<const double> v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, std::abs(x));
  return out;
}

}  // namespace

bool FitReport::any_clamped() const {
  return std::find(clamped.begin(), clamped.end(), true) != clamped.end();
}

bool FitReport::any_flagged() const {
  return any_clamped() || std::find(degenerate.begin(), degenerate.end(), true) != degenerate.end();
}

void require_knots_on_series(const Series& series, const Knots& knots) {
  if (knots.first().x != series.front_z() || knots.last().x != series.back_z()) {
    throw Error(ErrorKind::data,
                fmt::format("end knots [{}, {}] must be the first and last samples [{}, {}]",
                            knots.a(), knots.b(), series.front_z(), series.back_z()));
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const std::size_t m = series.find(knots[i].x);
    if (m == Series::npos) {
      throw Error(ErrorKind::data,
                  fmt::format("knot {} at x = {} is not a sample abscissa", i, knots[i].x));
    }
    if (knots[i].y != series.w()[m]) {
      throw Error(ErrorKind::data,
                  fmt::format("knot {} ordinate {} differs from sample value {}", i, knots[i].y,
                              series.w()[m]));
    }
  }
}

std::vector<SampleRange> partition_samples(const Series& series, const Knots& knots) {
  const auto z = series.z();
  std::vector<SampleRange> out(knots.segments());
  for (std::size_t i = 0; i < knots.segments(); ++i) {
    const auto lo = std::lower_bound(z.begin(), z.end(), knots[i].x);
    const auto hi = i + 1 == knots.segments() ? std::upper_bound(z.begin(), z.end(), knots[i + 1].x)
                                              : std::lower_bound(z.begin(), z.end(), knots[i + 1].x);
    out[i] = {static_cast<std::size_t>(lo - z.begin()), static_cast<std::size_t>(hi - z.begin())};
  }
  return out;
}

FitReport fit_d_discrete(const Series& series, const Knots& knots, FitOptions options) {
  if (!(options.d_max > 0.0 && options.d_max < 1.0)) {
    throw Error(ErrorKind::invalid_argument,
                fmt::format("d_max must lie in (0, 1), got {}", options.d_max));
  }
  require_knots_on_series(series, knots);

  const std::size_t n = knots.segments();
  double knot_scale = 0.0;
  for (const auto& p : knots.points()) knot_scale = std::max(knot_scale, std::abs(p.y));
  const double eps_den = 1e-12 * static_cast<double>(series.size()) *
                         std::pow(max_abs(series.w()) + knot_scale, 2);

  FitReport report;
  report.d.assign(n, 0.0);
  report.clamped.assign(n, false);
  report.degenerate.assign(n, false);

  const auto ranges = partition_samples(series, knots);
  for (std::size_t i = 0; i < n; ++i) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t m = ranges[i].begin; m < ranges[i].end; ++m) {
      const auto [misfit, lever] = collage_terms(series, knots, i, m);
      num += misfit * lever;
      den += lever * lever;
    }
    if (!(den >= eps_den) || den == 0.0) {  // flat in d_i
      report.degenerate[i] = true;
      continue;
    }
    double d = num / den;
    if (std::abs(d) > options.d_max) {
      d = std::copysign(options.d_max, d);
      report.clamped[i] = true;
    }
    report.d[i] = d;
  }

  report.collage_rss = collage_residual(series, knots, report.d);
  report.contraction_factor = max_abs(report.d);
  report.collage_bound = std::sqrt(report.collage_rss / static_cast<double>(series.size())) /
                         (1.0 - report.contraction_factor);
  return report;
}

std::vector<double> collage_segment_residuals(const Series& series, const Knots& knots,
                                              std::span<const double> d) {
  require_knots_on_series(series, knots);
  if (d.size() != knots.segments()) {
    throw Error(ErrorKind::invalid_argument,
                fmt::format("expected {} scalings, got {}", knots.segments(), d.size()));
  }
  const auto ranges = partition_samples(series, knots);
  std::vector<double> out(knots.segments(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t m = ranges[i].begin; m < ranges[i].end; ++m) {
      const auto [misfit, lever] = collage_terms(series, knots, i, m);
      const double r = d[i] * lever - misfit;
      out[i] += r * r;
    }
  }
  return out;
}

double collage_residual(const Series& series, const Knots& knots, std::span<const double> d) {
  const auto per_segment = collage_segment_residuals(series, knots, d);
  return std::accumulate(per_segment.begin(), per_segment.end(), 0.0);
}

}  // namespace fif
