#include "fif/series.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fif/error.hpp"

namespace fif {

Series::Series(std::vector<double> z, std::vector<double> w)
    : z_(std::move(z)), w_(std::move(w)) {
  if (z_.size() != w_.size()) {
    throw Error(ErrorKind::invalid_argument,
                fmt::format("series has {} abscissae but {} values", z_.size(), w_.size()));
  }
  if (z_.size() < 2) throw Error(ErrorKind::invalid_argument, "series needs at least 2 samples");
  for (std::size_t m = 0; m < z_.size(); ++m) {
    if (!std::isfinite(z_[m]) || !std::isfinite(w_[m])) {
      throw Error(ErrorKind::invalid_argument, fmt::format("sample {} is not finite", m + 1));
    }
    if (m > 0 && !(z_[m - 1] < z_[m])) {
      throw Error(ErrorKind::invalid_argument,
                  fmt::format("abscissae must increase strictly (sample {})", m + 1));
    }
  }
}

Series Series::indexed(std::vector<double> w) {
  std::vector<double> z(w.size());
  for (std::size_t m = 0; m < z.size(); ++m) z[m] = static_cast<double>(m + 1);
  return Series(std::move(z), std::move(w));
}

std::size_t Series::find(double x) const {
  const auto it = std::lower_bound(z_.begin(), z_.end(), x);
  if (it == z_.end() || *it != x) return npos;
  return static_cast<std::size_t>(it - z_.begin());
}

double Series::nearest(double x) const {
  const auto it = std::lower_bound(z_.begin(), z_.end(), x);
  if (it == z_.begin()) return w_.front();
  if (it == z_.end()) return w_.back();
  const auto right = static_cast<std::size_t>(it - z_.begin());
  const std::size_t left = right - 1;
  return (x - z_[left]) <= (z_[right] - x) ? w_[left] : w_[right];
}

}  // namespace fif
