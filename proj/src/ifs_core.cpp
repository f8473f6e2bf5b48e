#include "fif/ifs_core.hpp"

#include <fmt/format.h>

#include "fif/error.hpp"

namespace fif {

namespace {

constexpr int kMaxDefaultDepth = 48;
constexpr double kDepthTolerance = 1e-9;

}  // namespace

Knots::Knots(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.size() < 3) {
    throw Error(ErrorKind::invalid_argument,
                fmt::format("need at least 3 knots (2 segments), got {}", points_.size()));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
      throw Error(ErrorKind::invalid_argument, fmt::format("knot {} is not finite", i));
    }
    if (i > 0 && !(points_[i - 1].x < points_[i].x)) {
      throw Error(ErrorKind::invalid_argument,
                  fmt::format("knot abscissae must increase strictly (knot {})", i));
    }
  }
}

std::size_t Knots::segment_of(double x) const {
  // first knot strictly greater than x closes the segment
  auto it = std::upper_bound(points_.begin(), points_.end(), x,
                             [](double v, const Point& p) { return v < p.x; });
  const auto idx = static_cast<std::size_t>(it - points_.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, segments() - 1);
}

double Knots::local_coordinate(std::size_t segment, double x) const {
  const double lo = points_[segment].x;
  const double hi = points_[segment + 1].x;
  return std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
}

SegmentFunctions alpha_beta_gamma(const Knots& knots, std::size_t segment) {
  if (segment >= knots.segments()) {
    throw Error(ErrorKind::invalid_argument,
                fmt::format("segment {} out of range [0, {})", segment, knots.segments()));
  }
  const auto [x0, y0] = knots[segment];
  const auto [x1, y1] = knots[segment + 1];
  const double a = knots.a();
  const double b = knots.b();
  const double ya = knots.first().y;
  const double yb = knots.last().y;
  const double w = x1 - x0;
  return {
      {(y1 - y0) / w, (x1 * y0 - x0 * y1) / w},
      {(yb - ya) / w, (x1 * ya - x0 * yb) / w},
      {(b - a) / w, (x1 * a - x0 * b) / w},
  };
}

FifModel::FifModel(Knots knots, std::span<const double> d) : knots_(std::move(knots)) {
  const std::size_t n = knots_.segments();
  if (d.size() != n) {
    throw Error(ErrorKind::invalid_argument,
                fmt::format("expected {} vertical scalings, got {}", n, d.size()));
  }
  const double a = knots_.a();
  const double b = knots_.b();
  const double ya = knots_.first().y;
  const double yb = knots_.last().y;
  const double span = b - a;
  maps_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(d[i]) < 1.0)) {
      throw Error(ErrorKind::invalid_argument,
                  fmt::format("|d[{}]| = {} is not contractive (must be < 1)", i, d[i]));
    }
    const auto [xp, yp] = knots_[i];
    const auto [xi, yi] = knots_[i + 1];
    SegmentMap m;
    m.a = (xi - xp) / span;
    m.c = (yi - yp - d[i] * (yb - ya)) / span;
    m.d = d[i];
    m.e = (b * xp - a * xi) / span;
    m.f = (b * yp - a * yi - d[i] * (b * ya - a * yb)) / span;
    maps_.push_back(m);
    contraction_ = std::max(contraction_, std::abs(d[i]));
  }
}

std::vector<double> FifModel::scalings() const {
  std::vector<double> out;
  out.reserve(maps_.size());
  for (const auto& m : maps_) out.push_back(m.d);
  return out;
}

double FifModel::chord(double x) const {
  const double t = std::clamp((x - knots_.a()) / (knots_.b() - knots_.a()), 0.0, 1.0);
  return std::lerp(knots_.first().y, knots_.last().y, t);
}

FifModel::Local FifModel::local(std::size_t segment, double x) const {
  const double t = knots_.local_coordinate(segment, x);
  return {
      std::lerp(knots_[segment].y, knots_[segment + 1].y, t),
      std::lerp(knots_.first().y, knots_.last().y, t),
      std::clamp(std::lerp(knots_.a(), knots_.b(), t), knots_.a(), knots_.b()),
  };
}

FifModel build_model(Knots knots, std::span<const double> d) {
  return FifModel(std::move(knots), d);
}

SampledFunction::SampledFunction(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() < 2 || grid_.size() != values_.size()) {
    throw Error(ErrorKind::invalid_argument,
                "sampled function needs >= 2 samples and matching grid/value lengths");
  }
  for (std::size_t j = 1; j < grid_.size(); ++j) {
    if (!(grid_[j - 1] < grid_[j])) {
      throw Error(ErrorKind::invalid_argument, "sample grid must increase strictly");
    }
  }
}

std::vector<double> SampledFunction::uniform_grid(double lo, double hi, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "uniform grid needs n >= 2");
  std::vector<double> grid(n);
  for (std::size_t j = 0; j < n; ++j) {
    grid[j] = std::lerp(lo, hi, static_cast<double>(j) / static_cast<double>(n - 1));
  }
  grid.back() = hi;
  return grid;
}

double SampledFunction::operator()(double x) const {
  if (x <= grid_.front()) return values_.front();
  if (x >= grid_.back()) return values_.back();
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const auto j = static_cast<std::size_t>(it - grid_.begin());
  const double t = (x - grid_[j - 1]) / (grid_[j] - grid_[j - 1]);
  return std::lerp(values_[j - 1], values_[j], t);
}

SampledFunction hutchinson_apply(const FifModel& model, const SampledFunction& g) {
  const auto grid = g.grid();
  if (grid.front() != model.knots().a() || grid.back() != model.knots().b()) {
    throw Error(ErrorKind::invalid_argument,
                fmt::format("grid [{}, {}] does not span the model domain [{}, {}]",
                            grid.front(), grid.back(), model.knots().a(),
                            model.knots().b()));
  }
  std::vector<double> values = hutchinson_apply(model, g, grid);
  return SampledFunction(std::vector<double>(grid.begin(), grid.end()), std::move(values));
}

int default_depth(const FifModel& model) {
  const double c = model.contraction_factor();
  double power = c;
  for (int depth = 1; depth < kMaxDefaultDepth; ++depth) {
    if (power < kDepthTolerance) return depth;
    power *= c;
  }
  return kMaxDefaultDepth;
}

double evaluate_fif(const FifModel& model, double x, int depth) {
  const Knots& knots = model.knots();
  if (!(x >= knots.a() && x <= knots.b())) {
    throw Error(ErrorKind::invalid_argument,
                fmt::format("x = {} outside model domain [{}, {}]", x, knots.a(), knots.b()));
  }
  if (depth < 0) throw Error(ErrorKind::invalid_argument, "depth must be >= 0");

  // Descend along gamma, then fold g = alpha - d (beta - g) back up. Folding
  // in this order keeps knot values exact.
  struct Level {
    double alpha;
    double beta;
    double d;
  };
  std::vector<Level> chain;
  chain.reserve(static_cast<std::size_t>(depth));
  double pos = x;
  bool truncated = false;
  for (int level = 0; level < depth; ++level) {
    const std::size_t i = knots.segment_of(pos);
    const auto loc = model.local(i, pos);
    const double d = model.maps_[i].d;
    chain.push_back({loc.alpha, loc.beta, d});
    if (d == 0.0) {
      truncated = true;
      break;
    }
    pos = loc.gamma;
  }
  double g = truncated ? 0.0 : model.chord(pos);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    g = it->d == 0.0 ? it->alpha : it->alpha - it->d * (it->beta - g);
  }
  return g;
}

double evaluate_fif(const FifModel& model, double x) {
  return evaluate_fif(model, x, default_depth(model));
}

double fixed_point_residual(const FifModel& model, std::size_t resolution, int depth) {
  if (resolution < 2) throw Error(ErrorKind::invalid_argument, "resolution must be >= 2");
  const auto grid =
      SampledFunction::uniform_grid(model.knots().a(), model.knots().b(), resolution);
  const auto g_star = [&](double x) { return evaluate_fif(model, x, depth); };
  double worst = 0.0;
  for (double x : grid) {
    worst = std::max(worst, std::abs(g_star(x) - model.image_at(x, g_star)));
  }
  return worst;
}

}  // namespace fif
