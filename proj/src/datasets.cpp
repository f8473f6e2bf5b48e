#include "fif/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <fmt/format.h>

#include "fif/error.hpp"

namespace fif {

namespace {

bool parse_double(std::string_view field, double& out) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return false;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size() && std::isfinite(out);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Topographic prominence of a local maximum at `peak`.
double peak_prominence(std::span<const double> v, std::size_t peak) {
  const double h = v[peak];
  double left_min = h;
  for (std::size_t j = peak; j-- > 0;) {
    if (v[j] > h) break;
    left_min = std::min(left_min, v[j]);
  }
  double right_min = h;
  for (std::size_t j = peak + 1; j < v.size(); ++j) {
    if (v[j] > h) break;
    right_min = std::min(right_min, v[j]);
  }
  return h - std::max(left_min, right_min);
}

std::vector<std::size_t> local_maxima(std::span<const double> v) {
  std::vector<std::size_t> peaks;
  std::size_t i = 1;
  while (i + 1 < v.size()) {
    if (v[i - 1] < v[i]) {
      std::size_t ahead = i + 1;
      while (ahead + 1 < v.size() && v[ahead] == v[i]) ++ahead;
      if (v[ahead] < v[i]) {
        peaks.push_back((i + ahead - 1) / 2);
        i = ahead;
        continue;
      }
    }
    ++i;
  }
  return peaks;
}

}  // namespace

double test_polynomial(double x) {
  return x * (-6.0 + x * (5.0 + x * (5.0 + x * (-5.0 + x))));
}

Series gen_polynomial(std::size_t m_count) {
  if (m_count < 2) throw Error(ErrorKind::invalid_argument, "polynomial series needs M >= 2");
  std::vector<double> v(m_count);
  const double denom = 2.0 * static_cast<double>(m_count - 1);
  for (std::size_t m = 0; m < m_count; ++m) {
    v[m] = test_polynomial(7.0 * static_cast<double>(m) / denom - 1.0);
  }
  return Series::indexed(std::move(v));
}

Series gen_dna_walk(std::string_view text) {
  std::vector<double> v;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const auto line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    if (!line.empty() && line.front() == '>') continue;
    for (char ch : line) {
      if (std::isspace(static_cast<unsigned char>(ch))) continue;
      double step = 0.0;
      switch (std::toupper(static_cast<unsigned char>(ch))) {
        case 'A':
        case 'G':
          step = 1.0;
          break;
        case 'C':
        case 'T':
          step = -1.0;
          break;
        default:
          throw Error(ErrorKind::data,
                      fmt::format("line {}: '{}' is not a nucleotide (A, C, G, T)", line_no, ch));
      }
      v.push_back(v.empty() ? 0.0 : v.back() + step);
    }
  }
  if (v.empty()) throw Error(ErrorKind::data, "DNA input contains no nucleotides");
  if (v.size() < 2) throw Error(ErrorKind::data, "DNA walk needs at least 2 nucleotides");
  return Series::indexed(std::move(v));
}

Series gen_random_walk(std::size_t m_count, std::uint64_t seed) {
  if (m_count < 2) throw Error(ErrorKind::invalid_argument, "random walk needs M >= 2");
  boost::random::mt19937_64 engine(seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(m_count, 0.0);
  for (std::size_t m = 1; m < m_count; ++m) v[m] = v[m - 1] + normal(engine);
  return Series::indexed(std::move(v));
}

Series parse_series_csv(std::string_view text) {
  std::vector<double> first;
  std::vector<double> second;
  std::size_t columns = 0;
  std::size_t line_no = 0;
  bool seen_row = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    const auto fields = split_fields(line);
    double a = 0.0;
    if (!seen_row && !parse_double(fields.front(), a)) {
      seen_row = true;  // header
      continue;
    }
    seen_row = true;
    if (fields.size() > 2) {
      throw Error(ErrorKind::data, fmt::format("line {}: expected 1 or 2 columns, got {}",
                                               line_no, fields.size()));
    }
    if (columns == 0) columns = fields.size();
    if (fields.size() != columns) {
      throw Error(ErrorKind::data, fmt::format("line {}: expected {} columns, got {}", line_no,
                                               columns, fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double value = 0.0;
      if (!parse_double(fields[c], value)) {
        throw Error(ErrorKind::data, fmt::format("line {}: '{}' is not a number", line_no,
                                                 std::string(fields[c])));
      }
      (c == 0 ? first : second).push_back(value);
    }
  }
  if (first.size() < 2) throw Error(ErrorKind::data, "series CSV needs at least 2 data rows");
  try {
    if (columns == 1) return Series::indexed(std::move(first));
    return Series(std::move(first), std::move(second));
  } catch (const Error& e) {
    throw Error(ErrorKind::data, e.what());
  }
}

Series load_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_series_csv(buf.str());
}

std::pair<Series, NormalizationParams> normalize(const Series& raw) {
  const auto v = raw.w();
  const auto count = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= count;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / count);
  if (!(sd > 0.0)) throw Error(ErrorKind::data, "cannot normalize a constant series");
  std::vector<double> w(v.size());
  std::transform(v.begin(), v.end(), w.begin(), [&](double x) { return (x - mean) / sd; });
  return {Series({raw.z().begin(), raw.z().end()}, std::move(w)), {mean, sd}};
}

Knots select_knots_manual(const Series& series, std::span<const std::size_t> interior) {
  const std::size_t count = series.size();
  std::vector<std::size_t> idx(interior.begin(), interior.end());
  std::sort(idx.begin(), idx.end());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (idx[j] <= 1 || idx[j] >= count) {
      throw Error(ErrorKind::invalid_argument,
                  fmt::format("interior knot index {} must lie in [2, {}]", idx[j], count - 1));
    }
    if (j > 0 && idx[j] == idx[j - 1]) {
      throw Error(ErrorKind::invalid_argument, fmt::format("duplicate knot index {}", idx[j]));
    }
  }
  std::vector<Point> points;
  points.reserve(idx.size() + 2);
  points.push_back({series.z().front(), series.w().front()});
  for (std::size_t i : idx) points.push_back({series.z()[i - 1], series.w()[i - 1]});
  points.push_back({series.z().back(), series.w().back()});
  return Knots(std::move(points));
}

std::vector<double> moving_average(std::span<const double> v, std::size_t window) {
  if (window == 0) throw Error(ErrorKind::invalid_argument, "smoothing window must be >= 1");
  const std::size_t half = window / 2;
  std::vector<double> prefix(v.size() + 1, 0.0);
  for (std::size_t j = 0; j < v.size(); ++j) prefix[j + 1] = prefix[j] + v[j];
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const std::size_t lo = j >= half ? j - half : 0;
    const std::size_t hi = std::min(v.size(), j + (window - half));
    out[j] = window == 1 ? v[j] : (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return out;
}

std::vector<Extremum> find_extrema(std::span<const double> v) {
  std::vector<Extremum> out;
  for (std::size_t p : local_maxima(v)) out.push_back({p, peak_prominence(v, p), true});
  std::vector<double> negated(v.size());
  std::transform(v.begin(), v.end(), negated.begin(), [](double x) { return -x; });
  for (std::size_t p : local_maxima(negated)) out.push_back({p, peak_prominence(negated, p), false});
  std::sort(out.begin(), out.end(),
            [](const Extremum& l, const Extremum& r) { return l.index < r.index; });
  return out;
}

Knots select_knots_extrema(const Series& series, std::size_t segments, ExtremaOptions options) {
  if (segments < 2) throw Error(ErrorKind::invalid_argument, "need at least 2 segments");
  const auto smooth = moving_average(series.w(), options.window);
  auto candidates = find_extrema(smooth);
  std::erase_if(candidates, [&](const Extremum& e) { return e.prominence < options.prominence; });
  const std::size_t wanted = segments - 1;
  if (candidates.size() < wanted) {
    throw Error(ErrorKind::data,
                fmt::format("found {} extrema with prominence >= {}, need {}", candidates.size(),
                            options.prominence, wanted));
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Extremum& l, const Extremum& r) { return l.prominence > r.prominence; });
  candidates.resize(wanted);
  std::vector<std::size_t> interior;
  for (const auto& e : candidates) interior.push_back(e.index + 1);
  return select_knots_manual(series, interior);
}

}  // namespace fif
