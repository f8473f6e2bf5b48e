#pragma once

#include <random>
#include <vector>

#include "fif/ifs_core.hpp"
#include "fif/series.hpp"
#include "oracles.hpp"

namespace test {

inline fif::Series to_series(const oracle::Instance& inst) {
  std::vector<double> z, w;
  for (const auto& s : inst.data) {
    z.push_back(s.z);
    w.push_back(s.w);
  }
  return fif::Series(std::move(z), std::move(w));
}

inline fif::Knots to_knots(const oracle::Instance& inst) {
  std::vector<fif::Point> pts;
  for (auto k : inst.knots) pts.push_back({inst.data[k].z, inst.data[k].w});
  return fif::Knots(std::move(pts));
}

/// Random knots on a random interval with random ordinates.
inline fif::Knots random_knots(std::mt19937_64& rng, std::size_t segments) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<fif::Point> pts;
  double x = 20.0 * (unit(rng) - 0.5);
  for (std::size_t i = 0; i <= segments; ++i) {
    pts.push_back({x, 10.0 * (unit(rng) - 0.5)});
    x += 0.05 + 3.0 * unit(rng);
  }
  return fif::Knots(std::move(pts));
}

inline std::vector<double> random_scalings(std::mt19937_64& rng, std::size_t n, double bound) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  std::vector<double> d(n);
  for (auto& v : d) v = dist(rng);
  return d;
}

}  // namespace test
