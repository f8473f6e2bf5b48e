#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fif {

/// Discrete data {(z_m, w_m)} with strictly increasing abscissae.
class Series {
 public:
  /// Throws fif::Error(invalid_argument) on length mismatch, fewer than two
  /// samples, non-finite values or non-increasing abscissae.
  Series(std::vector<double> z, std::vector<double> w);

  /// z_m = 1..M
  static Series indexed(std::vector<double> w);

  std::span<const double> z() const { return z_; }
  std::span<const double> w() const { return w_; }
  std::size_t size() const { return z_.size(); }

  double front_z() const { return z_.front(); }
  double back_z() const { return z_.back(); }

  /// Position of abscissa x, or npos when x is not a sample abscissa.
  std::size_t find(double x) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Piecewise-constant extension: value of the nearest sample, ties to the
  /// left. Points outside the data range take the end values.
  double nearest(double x) const;

  bool operator==(const Series&) const = default;

 private:
  std::vector<double> z_;
  std::vector<double> w_;
};

}  // namespace fif
