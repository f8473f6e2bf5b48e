#pragma once

// Affine iterated function systems on the graph of a function and the
// fractal interpolation function (FIF) they define.
//
// Segment i (0-based here) spans [x_i, x_{i+1}]. A point belongs to the
// segment whose half-open interval [x_i, x_{i+1}) contains it; the last
// segment is closed at b.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace fif {

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

/// x -> slope * x + intercept
struct AffineFn {
  double slope = 0.0;
  double intercept = 0.0;

  double operator()(double x) const { return slope * x + intercept; }
};

/// Interpolation points of an IFS: at least three, strictly increasing in x.
class Knots {
 public:
  /// Throws fif::Error(invalid_argument) on fewer than 3 points, non-finite
  /// values, or abscissae that are not strictly increasing.
  explicit Knots(std::vector<Point> points);

  std::span<const Point> points() const { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  std::size_t segments() const { return points_.size() - 1; }

  double a() const { return points_.front().x; }
  double b() const { return points_.back().x; }
  const Point& first() const { return points_.front(); }
  const Point& last() const { return points_.back(); }

  /// Index of the segment containing x (half-open, last closed). x outside
  /// [a,b] is clamped to the nearest end segment.
  std::size_t segment_of(double x) const;

  /// Position of x within its segment, in [0,1].
  double local_coordinate(std::size_t segment, double x) const;

  bool operator==(const Knots&) const = default;

 private:
  std::vector<Point> points_;
};

/// Coefficients of A_i(x, y) = (a x + e, c x + d y + f).
struct SegmentMap {
  double a = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
  double f = 0.0;

  /// Horizontal part u_i: [a,b] -> [x_{i-1}, x_i].
  AffineFn u() const { return {a, e}; }
  /// Vertical offset p_i.
  AffineFn p() const { return {c, f}; }

  Point apply(Point pt) const { return {a * pt.x + e, c * pt.x + d * pt.y + f}; }
};

/// The three affine functions that rewrite the Hutchinson operator as
///   (Phi g)(x) = alpha(x) - d (beta(x) - g(gamma(x)))
/// on one segment. alpha is the chord through the segment's knots, beta maps
/// the segment ends to y_0 and y_N, gamma maps the segment onto [a,b].
struct SegmentFunctions {
  AffineFn alpha;
  AffineFn beta;
  AffineFn gamma;
};

SegmentFunctions alpha_beta_gamma(const Knots& knots, std::size_t segment);

class FifModel {
 public:
  /// Builds the IFS for `knots` with vertical scalings `d` (one per segment).
  /// Throws fif::Error(invalid_argument) on a length mismatch or |d_i| >= 1.
  FifModel(Knots knots, std::span<const double> d);

  const Knots& knots() const { return knots_; }
  std::span<const SegmentMap> maps() const { return maps_; }
  std::size_t segments() const { return maps_.size(); }
  std::vector<double> scalings() const;

  /// max_i |d_i|
  double contraction_factor() const { return contraction_; }

  /// One step of the operator at a single abscissa, given a callable g on
  /// [a,b]. Reads g only at gamma_i(x).
  template <class G>
  double image_at(double x, G&& g) const {
    const std::size_t i = knots_.segment_of(x);
    const Local loc = local(i, x);
    return loc.alpha - maps_[i].d * (loc.beta - g(loc.gamma));
  }

  /// Chord through (x_0, y_0) and (x_N, y_N).
  double chord(double x) const;

 private:
  friend double evaluate_fif(const FifModel&, double, int);

  struct Local {
    double alpha;
    double beta;
    double gamma;
  };
  // Endpoint-exact evaluation of alpha_i, beta_i, gamma_i at x.
  Local local(std::size_t segment, double x) const;

  Knots knots_;
  std::vector<SegmentMap> maps_;
  double contraction_ = 0.0;
};

FifModel build_model(Knots knots, std::span<const double> d);

/// A function on [a,b] represented by samples; read between samples by
/// linear interpolation.
class SampledFunction {
 public:
  SampledFunction(std::vector<double> grid, std::vector<double> values);

  /// n >= 2 equally spaced samples of f on [lo, hi], endpoints exact.
  template <class F>
  static SampledFunction tabulate(double lo, double hi, std::size_t n, F&& f) {
    std::vector<double> grid = uniform_grid(lo, hi, n);
    std::vector<double> values(grid.size());
    std::transform(grid.begin(), grid.end(), values.begin(), f);
    return SampledFunction(std::move(grid), std::move(values));
  }

  static std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

  std::span<const double> grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return grid_.size(); }

  double operator()(double x) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// Phi applied to a sampled g, returned on g's own grid. g(gamma_i(x)) is
/// read by linear interpolation. The grid must start at a and end at b.
SampledFunction hutchinson_apply(const FifModel& model, const SampledFunction& g);

/// Phi applied to a callable g, sampled at `grid` (any points in [a,b]).
template <class G>
std::vector<double> hutchinson_apply(const FifModel& model, G&& g,
                                     std::span<const double> grid) {
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out[j] = model.image_at(grid[j], g);
  return out;
}

/// Smallest D with contraction^D < 1e-9, capped at 48 (at least 1).
int default_depth(const FifModel& model);

/// (Phi^depth b0)(x) where b0 is the chord through the end knots. Every
/// knot is reproduced exactly for depth >= 1.
double evaluate_fif(const FifModel& model, double x, int depth);
double evaluate_fif(const FifModel& model, double x);

/// sup |g* - Phi g*| over `resolution` uniform points, with g* evaluated at
/// `depth` and Phi applied to g* as a function (no resampling).
double fixed_point_residual(const FifModel& model, std::size_t resolution, int depth);

}  // namespace fif
