#include "fif/fif.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "fif/analysis.hpp"
#include "fif/datasets.hpp"
#include "fif/error.hpp"
#include "fif/model_file.hpp"
#include "json.hpp"

struct fif_series {
  fif::Series value;
};

struct fif_knots {
  fif::Knots value;
};

struct fif_model {
  fif::ModelFile file;
  // Present for fitted models only.
  std::optional<std::string> report_json;
};

namespace {

thread_local std::string g_last_error;

fif_status fail(fif_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

fif_status status_of(fif::ErrorKind kind) {
  switch (kind) {
    case fif::ErrorKind::invalid_argument: return FIF_ERR_INVALID_ARGUMENT;
    case fif::ErrorKind::data: return FIF_ERR_DATA;
    case fif::ErrorKind::numeric: return FIF_ERR_NUMERIC;
    case fif::ErrorKind::io: return FIF_ERR_IO;
    case fif::ErrorKind::schema: return FIF_ERR_SCHEMA;
  }
  return FIF_ERR_INTERNAL;
}

template <class F>
fif_status guarded(F&& body) {
  try {
    body();
    return FIF_OK;
  } catch (const fif::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FIF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FIF_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw fif::Error(fif::ErrorKind::invalid_argument, what);
}

char* copy_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fif::Error(fif::ErrorKind::io, fmt::format("cannot open '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fractal_report(const fif::Series& series, const fif::FitReport& report,
                           const fif::FifModel& model) {
  nlohmann::ordered_json j;
  const int depth = fif::default_depth(model);
  j["method"] = "fractal";
  j["samples"] = series.size();
  j["segments"] = report.d.size();
  j["d"] = report.d;
  j["clamped"] = report.clamped;
  j["degenerate"] = report.degenerate;
  j["collage_rss"] = report.collage_rss;
  j["contraction_factor"] = report.contraction_factor;
  j["collage_bound"] = report.collage_bound;
  j["eval_depth"] = depth;
  j["rms"] = fif::rms_error(model, series, depth);
  return j.dump(2) + "\n";
}

std::string quadratic_report(const fif::Series& series, const fif::QuadModel& model) {
  nlohmann::ordered_json j;
  j["method"] = "quadratic";
  j["samples"] = series.size();
  j["segments"] = model.segments();
  nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
  std::vector<bool> fallback;
  for (const auto& c : model.coefficients()) {
    coeffs.push_back({c.k, c.r, c.l});
    fallback.push_back(c.chord_fallback);
  }
  j["coefficients"] = std::move(coeffs);
  j["chord_fallback"] = fallback;
  j["segment_rss"] = fif::quad_segment_residuals(model, series);
  j["rms"] = fif::rms_error(model, series);
  return j.dump(2) + "\n";
}

}  // namespace

extern "C" {

const char* fif_last_error(void) { return g_last_error.c_str(); }

const char* fif_version(void) { return fif::kToolVersion.data(); }

void fif_string_free(char* str) { std::free(str); }

fif_status fif_series_from_arrays(const double* z, const double* w, size_t n, fif_series** out) {
  return guarded([&] {
    require(w != nullptr && out != nullptr, "null argument");
    std::vector<double> values(w, w + n);
    if (z == nullptr) {
      *out = new fif_series{fif::Series::indexed(std::move(values))};
    } else {
      *out = new fif_series{fif::Series(std::vector<double>(z, z + n), std::move(values))};
    }
  });
}

fif_status fif_series_load_csv(const char* path, fif_series** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new fif_series{fif::load_series_csv(path)};
  });
}

fif_status fif_series_write_csv(const fif_series* series, const char* path,
                                const char* value_column) {
  return guarded([&] {
    require(series != nullptr && path != nullptr, "null argument");
    std::string text = fmt::format("z,{}\n", value_column ? value_column : "w");
    const auto z = series->value.z();
    const auto w = series->value.w();
    for (std::size_t m = 0; m < z.size(); ++m) text += fmt::format("{},{}\n", z[m], w[m]);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw fif::Error(fif::ErrorKind::io, fmt::format("cannot write '{}'", path));
    file << text;
    if (!file) throw fif::Error(fif::ErrorKind::io, fmt::format("write to '{}' failed", path));
  });
}

fif_status fif_series_gen_polynomial(size_t m, fif_series** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new fif_series{fif::gen_polynomial(m)};
  });
}

fif_status fif_series_gen_dna(const char* text, size_t len, fif_series** out) {
  return guarded([&] {
    require(out != nullptr && (text != nullptr || len == 0), "null argument");
    *out = new fif_series{fif::gen_dna_walk(std::string_view(text ? text : "", len))};
  });
}

fif_status fif_series_gen_random_walk(size_t m, uint64_t seed, fif_series** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new fif_series{fif::gen_random_walk(m, seed)};
  });
}

fif_status fif_series_normalize(const fif_series* raw, fif_series** out, double* s1, double* s2) {
  return guarded([&] {
    require(raw != nullptr && out != nullptr, "null argument");
    auto [series, params] = fif::normalize(raw->value);
    *out = new fif_series{std::move(series)};
    if (s1) *s1 = params.s1;
    if (s2) *s2 = params.s2;
  });
}

size_t fif_series_size(const fif_series* series) { return series ? series->value.size() : 0; }

const double* fif_series_z(const fif_series* series) {
  return series ? series->value.z().data() : nullptr;
}

const double* fif_series_w(const fif_series* series) {
  return series ? series->value.w().data() : nullptr;
}

void fif_series_free(fif_series* series) { delete series; }

fif_status fif_knots_manual(const fif_series* series, const size_t* interior, size_t n,
                            fif_knots** out) {
  return guarded([&] {
    require(series != nullptr && out != nullptr && (interior != nullptr || n == 0),
            "null argument");
    std::vector<std::size_t> idx(interior, interior + n);
    *out = new fif_knots{fif::select_knots_manual(series->value, idx)};
  });
}

fif_status fif_knots_extrema(const fif_series* series, size_t segments, size_t window,
                             double prominence, fif_knots** out) {
  return guarded([&] {
    require(series != nullptr && out != nullptr, "null argument");
    fif::ExtremaOptions options;
    if (window > 0) options.window = window;
    if (prominence >= 0.0) options.prominence = prominence;
    *out = new fif_knots{fif::select_knots_extrema(series->value, segments, options)};
  });
}

fif_status fif_knots_from_arrays(const double* x, const double* y, size_t n, fif_knots** out) {
  return guarded([&] {
    require(x != nullptr && y != nullptr && out != nullptr, "null argument");
    std::vector<fif::Point> points(n);
    for (std::size_t i = 0; i < n; ++i) points[i] = {x[i], y[i]};
    *out = new fif_knots{fif::Knots(std::move(points))};
  });
}

size_t fif_knots_size(const fif_knots* knots) { return knots ? knots->value.size() : 0; }

fif_status fif_knots_get(const fif_knots* knots, size_t i, double* x, double* y) {
  return guarded([&] {
    require(knots != nullptr, "null argument");
    require(i < knots->value.size(), "knot index out of range");
    if (x) *x = knots->value[i].x;
    if (y) *y = knots->value[i].y;
  });
}

void fif_knots_free(fif_knots* knots) { delete knots; }

fif_status fif_fit_fractal(const fif_series* series, const fif_knots* knots, double d_max,
                           fif_model** out) {
  return guarded([&] {
    require(series != nullptr && knots != nullptr && out != nullptr, "null argument");
    fif::FitOptions options;
    if (d_max > 0.0) options.d_max = d_max;
    const auto report = fif::fit_d_discrete(series->value, knots->value, options);
    fif::FractalFit fit{fif::fitted_model(knots->value, report), report.clamped,
                        report.degenerate};
    auto json = fractal_report(series->value, report, fit.model);
    *out = new fif_model{{std::move(fit), {}, {}}, std::move(json)};
  });
}

fif_status fif_fit_quadratic(const fif_series* series, const fif_knots* knots, fif_model** out) {
  return guarded([&] {
    require(series != nullptr && knots != nullptr && out != nullptr, "null argument");
    auto quad = fif::fit_quadratic(series->value, knots->value);
    auto json = quadratic_report(series->value, quad);
    *out = new fif_model{{std::move(quad), {}, {}}, std::move(json)};
  });
}

fif_status fif_model_build_fractal(const fif_knots* knots, const double* d, size_t n,
                                   fif_model** out) {
  return guarded([&] {
    require(knots != nullptr && d != nullptr && out != nullptr, "null argument");
    fif::FractalFit fit{fif::build_model(knots->value, std::span<const double>(d, n)),
                        std::vector<bool>(n, false), std::vector<bool>(n, false)};
    *out = new fif_model{{std::move(fit), {}, {}}, std::nullopt};
  });
}

fif_model_kind fif_model_kind_of(const fif_model* model) {
  return model && !model->file.is_fractal() ? FIF_MODEL_QUADRATIC : FIF_MODEL_FRACTAL;
}

size_t fif_model_segments(const fif_model* model) {
  return model ? model->file.knots().segments() : 0;
}

fif_status fif_model_domain(const fif_model* model, double* a, double* b) {
  return guarded([&] {
    require(model != nullptr, "null argument");
    if (a) *a = model->file.knots().a();
    if (b) *b = model->file.knots().b();
  });
}

int fif_model_flagged(const fif_model* model) {
  if (model == nullptr) return 0;
  if (const auto* fit = std::get_if<fif::FractalFit>(&model->file.model)) {
    for (std::size_t i = 0; i < fit->clamped.size(); ++i) {
      if (fit->clamped[i] || fit->degenerate[i]) return 1;
    }
    return 0;
  }
  for (const auto& c : std::get<fif::QuadModel>(model->file.model).coefficients()) {
    if (c.chord_fallback) return 1;
  }
  return 0;
}

fif_status fif_model_scaling(const fif_model* model, size_t i, double* d, int* flags) {
  return guarded([&] {
    require(model != nullptr, "null argument");
    const auto* fit = std::get_if<fif::FractalFit>(&model->file.model);
    require(fit != nullptr, "not a fractal model");
    require(i < fit->model.segments(), "segment index out of range");
    if (d) *d = fit->model.maps()[i].d;
    if (flags) {
      *flags = (fit->clamped[i] ? FIF_FLAG_CLAMPED : 0) |
               (fit->degenerate[i] ? FIF_FLAG_DEGENERATE : 0);
    }
  });
}

fif_status fif_model_quadratic(const fif_model* model, size_t i, double* k, double* r, double* l,
                               int* flags) {
  return guarded([&] {
    require(model != nullptr, "null argument");
    const auto* quad = std::get_if<fif::QuadModel>(&model->file.model);
    require(quad != nullptr, "not a quadratic model");
    require(i < quad->segments(), "segment index out of range");
    const auto& c = quad->coefficients()[i];
    if (k) *k = c.k;
    if (r) *r = c.r;
    if (l) *l = c.l;
    if (flags) *flags = c.chord_fallback ? FIF_FLAG_CHORD : 0;
  });
}

int fif_model_default_depth(const fif_model* model) {
  if (model == nullptr) return 0;
  const auto* fit = std::get_if<fif::FractalFit>(&model->file.model);
  return fit ? fif::default_depth(fit->model) : 0;
}

fif_status fif_model_eval(const fif_model* model, const double* x, size_t n, int depth,
                          double* out) {
  return guarded([&] {
    require(model != nullptr && (n == 0 || (x != nullptr && out != nullptr)), "null argument");
    if (const auto* fit = std::get_if<fif::FractalFit>(&model->file.model)) {
      const int d = depth < 0 ? fif::default_depth(fit->model) : depth;
      for (std::size_t j = 0; j < n; ++j) out[j] = fif::evaluate_fif(fit->model, x[j], d);
    } else {
      const auto& quad = std::get<fif::QuadModel>(model->file.model);
      for (std::size_t j = 0; j < n; ++j) out[j] = fif::evaluate_quad(quad, x[j]);
    }
  });
}

fif_status fif_model_set_provenance(fif_model* model, const char* input_sha256, int has_seed,
                                    uint64_t seed, double s1, double s2) {
  return guarded([&] {
    require(model != nullptr, "null argument");
    require(s2 > 0.0, "normalization deviation must be positive");
    model->file.provenance.input_sha256 = input_sha256 ? input_sha256 : "";
    model->file.provenance.seed = has_seed ? std::optional<std::uint64_t>(seed) : std::nullopt;
    model->file.normalization = {s1, s2};
  });
}

fif_status fif_model_to_json(const fif_model* model, char** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    *out = copy_string(fif::to_json(model->file));
  });
}

fif_status fif_model_from_json(const char* text, size_t len, fif_model** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new fif_model{fif::model_from_json(std::string_view(text, len)), std::nullopt};
  });
}

fif_status fif_model_report_json(const fif_model* model, char** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    require(model->report_json.has_value(), "model carries no fit report");
    *out = copy_string(*model->report_json);
  });
}

void fif_model_free(fif_model* model) { delete model; }

fif_status fif_rms_error(const fif_model* model, const fif_series* series, int depth,
                         double* out) {
  return guarded([&] {
    require(model != nullptr && series != nullptr && out != nullptr, "null argument");
    if (const auto* fit = std::get_if<fif::FractalFit>(&model->file.model)) {
      *out = fif::rms_error(fit->model, series->value, depth);
    } else {
      *out = fif::rms_error(std::get<fif::QuadModel>(model->file.model), series->value);
    }
  });
}

fif_status fif_compare(const fif_series* series, const fif_knots* knots, double d_max, int depth,
                       fif_comparison* out) {
  return guarded([&] {
    require(series != nullptr && knots != nullptr && out != nullptr, "null argument");
    fif::CompareOptions options;
    if (d_max > 0.0) options.fit.d_max = d_max;
    options.depth = depth;
    const auto row = fif::compare(series->value, knots->value, options);
    *out = {row.fractal_rms, row.quadratic_rms, row.collage_bound,
            row.contraction_factor, row.eval_depth, row.clamped ? 1 : 0};
  });
}

fif_status fif_sha256_file(const char* path, char out[65]) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    const auto hex = fif::sha256_hex(read_file(path));
    std::memcpy(out, hex.c_str(), 65);
  });
}

}  // extern "C"
