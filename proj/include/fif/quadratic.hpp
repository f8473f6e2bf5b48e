#pragma once

// Piecewise-quadratic baseline with one fitted scalar per segment.
//
// On segment [x0, x1] the model is q(x) = L(x) + s (x - x0)(x - x1), where L
// is the chord through the segment's knot values. This is the family
// {k x^2 + r x + l : q(x0) = y0, q(x1) = y1} with k = s.

#include <cstddef>
#include <vector>

#include "fif/ifs_core.hpp"
#include "fif/series.hpp"

namespace fif {

struct QuadSegment {
  double k = 0.0;
  double r = 0.0;
  double l = 0.0;
  /// No interior sample: s fixed at 0 and q is the chord.
  bool chord_fallback = false;

  double operator()(double x) const { return (k * x + r) * x + l; }
};

class QuadModel {
 public:
  /// Chord-plus-bubble coefficient s per segment.
  QuadModel(Knots knots, std::vector<double> bubble, std::vector<bool> chord_fallback = {});

  /// Restores a model from its monomial coefficients. Throws fif::Error(schema)
  /// when a segment misses its knot values by more than 1e-9 relative.
  static QuadModel from_coefficients(Knots knots, std::vector<QuadSegment> coeffs);

  const Knots& knots() const { return knots_; }
  const std::vector<QuadSegment>& coefficients() const { return coeffs_; }
  const std::vector<double>& bubble() const { return bubble_; }
  std::size_t segments() const { return coeffs_.size(); }

  /// Evaluates in chord-plus-bubble form, so knot values are exact.
  double operator()(double x) const;

 private:
  QuadModel(Knots knots, std::vector<double> bubble, std::vector<QuadSegment> coeffs)
      : knots_(std::move(knots)), bubble_(std::move(bubble)), coeffs_(std::move(coeffs)) {}

  Knots knots_;
  std::vector<double> bubble_;
  std::vector<QuadSegment> coeffs_;
};

QuadModel fit_quadratic(const Series& series, const Knots& knots);

/// Throws fif::Error(invalid_argument) outside [a,b].
double evaluate_quad(const QuadModel& model, double x);

/// Sum of squared residuals of each segment over its own samples.
std::vector<double> quad_segment_residuals(const QuadModel& model, const Series& series);

}  // namespace fif
