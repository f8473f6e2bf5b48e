#include "fif/quadratic.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fif/collage_fit.hpp"
#include "fif/error.hpp"

namespace fif {

namespace {

QuadSegment to_monomial(const Point& p0, const Point& p1, double s) {
  const double slope = (p1.y - p0.y) / (p1.x - p0.x);
  return {s, slope - s * (p0.x + p1.x), p0.y - slope * p0.x + s * p0.x * p1.x, false};
}

bool hits(const QuadSegment& q, const Point& p) {
  const double magnitude =
      std::max({1.0, std::abs(p.y), std::abs(q.k * p.x * p.x), std::abs(q.r * p.x), std::abs(q.l)});
  return std::abs(q(p.x) - p.y) <= 1e-9 * magnitude;
}

}  // namespace

QuadModel::QuadModel(Knots knots, std::vector<double> bubble, std::vector<bool> chord_fallback)
    : knots_(std::move(knots)), bubble_(std::move(bubble)) {
  if (bubble_.size() != knots_.segments()) {
    throw Error(ErrorKind::invalid_argument,
                fmt::format("expected {} quadratic coefficients, got {}", knots_.segments(),
                            bubble_.size()));
  }
  if (!chord_fallback.empty() && chord_fallback.size() != bubble_.size()) {
    throw Error(ErrorKind::invalid_argument, "chord fallback flags do not match segment count");
  }
  coeffs_.reserve(bubble_.size());
  for (std::size_t i = 0; i < bubble_.size(); ++i) {
    auto seg = to_monomial(knots_[i], knots_[i + 1], bubble_[i]);
    seg.chord_fallback = !chord_fallback.empty() && chord_fallback[i];
    coeffs_.push_back(seg);
  }
}

QuadModel QuadModel::from_coefficients(Knots knots, std::vector<QuadSegment> coeffs) {
  if (coeffs.size() != knots.segments()) {
    throw Error(ErrorKind::schema, fmt::format("expected {} quadratic segments, got {}",
                                               knots.segments(), coeffs.size()));
  }
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!hits(coeffs[i], knots[i]) || !hits(coeffs[i], knots[i + 1])) {
      throw Error(ErrorKind::schema,
                  fmt::format("quadratic segment {} does not interpolate its knots", i));
    }
  }
  std::vector<double> bubble;
  bubble.reserve(coeffs.size());
  for (const auto& c : coeffs) bubble.push_back(c.k);
  return QuadModel(std::move(knots), std::move(bubble), std::move(coeffs));
}

double QuadModel::operator()(double x) const {
  const std::size_t i = knots_.segment_of(x);
  const Point& p0 = knots_[i];
  const Point& p1 = knots_[i + 1];
  const double t = knots_.local_coordinate(i, x);
  return std::lerp(p0.y, p1.y, t) + bubble_[i] * (x - p0.x) * (x - p1.x);
}

QuadModel fit_quadratic(const Series& series, const Knots& knots) {
  require_knots_on_series(series, knots);
  const auto ranges = partition_samples(series, knots);
  const auto z = series.z();
  const auto w = series.w();

  std::vector<double> bubble(knots.segments(), 0.0);
  std::vector<bool> fallback(knots.segments(), false);
  for (std::size_t i = 0; i < knots.segments(); ++i) {
    const Point& p0 = knots[i];
    const Point& p1 = knots[i + 1];
    double num = 0.0;
    double den = 0.0;
    for (std::size_t m = ranges[i].begin; m < ranges[i].end; ++m) {
      const double chord = std::lerp(p0.y, p1.y, knots.local_coordinate(i, z[m]));
      const double b = (z[m] - p0.x) * (z[m] - p1.x);
      num += (w[m] - chord) * b;
      den += b * b;
    }
    if (den > 0.0) {
      bubble[i] = num / den;
    } else {
      fallback[i] = true;
    }
  }
  return QuadModel(knots, std::move(bubble), std::move(fallback));
}

double evaluate_quad(const QuadModel& model, double x) {
  const Knots& knots = model.knots();
  if (!(x >= knots.a() && x <= knots.b())) {
    throw Error(ErrorKind::invalid_argument,
                fmt::format("x = {} outside model domain [{}, {}]", x, knots.a(), knots.b()));
  }
  return model(x);
}

std::vector<double> quad_segment_residuals(const QuadModel& model, const Series& series) {
  const auto ranges = partition_samples(series, model.knots());
  std::vector<double> out(ranges.size(), 0.0);
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    for (std::size_t m = ranges[i].begin; m < ranges[i].end; ++m) {
      const double r = series.w()[m] - model(series.z()[m]);
      out[i] += r * r;
    }
  }
  return out;
}

}  // namespace fif
