#pragma once

// Test-signal generators, series ingestion, normalisation and knot
// selection. All generators use z_m = m (1-based).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "fif/ifs_core.hpp"
#include "fif/series.hpp"

namespace fif {

struct NormalizationParams {
  double s1 = 0.0;  // mean
  double s2 = 1.0;  // population standard deviation
};

/// f(x) = -6x + 5x^2 + 5x^3 - 5x^4 + x^5 evaluated in Horner form.
double test_polynomial(double x);

/// v_m = f(7(m-1)/(2(M-1)) - 1), m = 1..M, mapping [-1, 2.5] onto [1, M].
Series gen_polynomial(std::size_t m_count);

/// Purine/pyrimidine walk: v_1 = 0, then +1 for A/G and -1 for C/T from the
/// second nucleotide on. Accepts plain text or FASTA ('>' lines skipped);
/// whitespace ignored, case-insensitive.
Series gen_dna_walk(std::string_view text);

/// Gaussian random walk v_1 = 0, v_m = v_{m-1} + xi_m with xi ~ N(0, 1).
/// Bitwise reproducible for a given (M, seed).
Series gen_random_walk(std::size_t m_count, std::uint64_t seed);

/// One column (values, z_m = m) or two columns (z, w); optional header row.
Series load_series_csv(const std::filesystem::path& path);
Series parse_series_csv(std::string_view text);

std::pair<Series, NormalizationParams> normalize(const Series& raw);

struct ExtremaOptions {
  std::size_t window = 101;  // centred moving-average width
  double prominence = 0.05;
};

/// Knots at the end samples plus the given 1-based interior sample indices.
Knots select_knots_manual(const Series& series, std::span<const std::size_t> interior);

/// Knots at the end samples plus the `segments - 1` most prominent local
/// extrema of the smoothed series.
Knots select_knots_extrema(const Series& series, std::size_t segments,
                           ExtremaOptions options = {});

/// Centred moving average; windows are truncated at the ends.
std::vector<double> moving_average(std::span<const double> v, std::size_t window);

struct Extremum {
  std::size_t index = 0;  // 0-based
  double prominence = 0.0;
  bool maximum = true;
};

/// Interior local extrema of v with their topographic prominence. Plateaus
/// report their middle sample.
std::vector<Extremum> find_extrema(std::span<const double> v);

}  // namespace fif
