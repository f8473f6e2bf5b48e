// fif: generate series, fit fractal / quadratic models, evaluate and compare.
//
// Exit codes: 0 success, 1 data or numeric error, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fif/fif.h"
#include "json.hpp"

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct CliError {
  int code;
  std::string message;
};

struct SeriesDeleter {
  void operator()(fif_series* p) const { fif_series_free(p); }
};
struct KnotsDeleter {
  void operator()(fif_knots* p) const { fif_knots_free(p); }
};
struct ModelDeleter {
  void operator()(fif_model* p) const { fif_model_free(p); }
};
struct StringDeleter {
  void operator()(char* p) const { fif_string_free(p); }
};
using SeriesPtr = std::unique_ptr<fif_series, SeriesDeleter>;
using KnotsPtr = std::unique_ptr<fif_knots, KnotsDeleter>;
using ModelPtr = std::unique_ptr<fif_model, ModelDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

void check(fif_status status) {
  if (status == FIF_OK) return;
  const int code = status == FIF_ERR_INVALID_ARGUMENT ? kExitUsage : kExitData;
  throw CliError{code, fif_last_error()};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitData, "cannot open '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError{kExitData, "cannot write '" + path + "'"};
  out << text;
}

std::string format_double(double v) {
  // %.17g round-trips and is stable across runs
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sha256_of(const std::string& path) {
  char hex[65] = {};
  check(fif_sha256_file(path.c_str(), hex));
  return hex;
}

struct GlobalOptions {
  std::string out;
  std::optional<std::uint64_t> seed;
  int depth = -1;
  double d_max = 0.99;
  bool strict = false;
  std::string format = "text";
};

struct KnotSpec {
  std::vector<std::size_t> interior;
  std::string mode = "manual";
  std::size_t segments = 0;
  std::size_t window = 101;
  double prominence = 0.05;
};

void add_knot_options(CLI::App* cmd, KnotSpec& spec) {
  cmd->add_option("--knots", spec.interior, "Interior knots as 1-based sample indices")
      ->delimiter(',');
  cmd->add_option("--knots-mode", spec.mode, "manual | extrema")
      ->check(CLI::IsMember({"manual", "extrema"}));
  cmd->add_option("--n", spec.segments, "Number of segments (extrema mode)");
  cmd->add_option("--window", spec.window, "Smoothing window (extrema mode)");
  cmd->add_option("--prominence", spec.prominence, "Minimum prominence (extrema mode)");
}

KnotsPtr make_knots(const fif_series* series, const KnotSpec& spec) {
  fif_knots* raw = nullptr;
  if (spec.mode == "extrema") {
    if (spec.segments < 2) throw CliError{kExitUsage, "--knots-mode extrema needs --n >= 2"};
    check(fif_knots_extrema(series, spec.segments, spec.window, spec.prominence, &raw));
  } else {
    if (spec.interior.empty()) {
      throw CliError{kExitUsage, "missing knot specification (--knots or --knots-mode extrema)"};
    }
    check(fif_knots_manual(series, spec.interior.data(), spec.interior.size(), &raw));
  }
  return KnotsPtr(raw);
}

SeriesPtr load_series(const std::string& path) {
  fif_series* raw = nullptr;
  check(fif_series_load_csv(path.c_str(), &raw));
  return SeriesPtr(raw);
}

// ---- gen --------------------------------------------------------------------

struct GenArgs {
  std::string kind;
  std::size_t m = 10000;
  std::string input;
};

int run_gen(const GenArgs& args, const GlobalOptions& g) {
  fif_series* raw = nullptr;
  if (args.kind == "polynomial") {
    check(fif_series_gen_polynomial(args.m, &raw));
  } else if (args.kind == "random-walk") {
    check(fif_series_gen_random_walk(args.m, g.seed.value_or(0), &raw));
  } else {
    if (args.input.empty()) throw CliError{kExitUsage, "--kind dna requires --input"};
    const std::string text = read_text(args.input);
    check(fif_series_gen_dna(text.data(), text.size(), &raw));
  }
  SeriesPtr series(raw);

  fif_series* norm_raw = nullptr;
  double s1 = 0.0;
  double s2 = 1.0;
  check(fif_series_normalize(series.get(), &norm_raw, &s1, &s2));
  SeriesPtr normalized(norm_raw);

  const std::string prefix = g.out.empty() ? "series" : g.out;
  check(fif_series_write_csv(series.get(), (prefix + ".raw.csv").c_str(), "v"));
  check(fif_series_write_csv(normalized.get(), (prefix + ".csv").c_str(), "w"));

  nlohmann::ordered_json sidecar;
  sidecar["kind"] = args.kind;
  sidecar["samples"] = fif_series_size(series.get());
  sidecar["seed"] = args.kind == "random-walk" ? nlohmann::ordered_json(g.seed.value_or(0))
                                                : nlohmann::ordered_json(nullptr);
  sidecar["input_sha256"] = args.kind == "dna" ? sha256_of(args.input) : std::string();
  sidecar["s1"] = s1;
  sidecar["s2"] = s2;
  sidecar["tool_version"] = fif_version();
  write_text(prefix + ".norm.json", sidecar.dump(2) + "\n");

  if (g.format == "json") {
    std::cout << sidecar.dump(2) << "\n";
  } else {
    std::cout << "wrote " << prefix << ".csv (" << fif_series_size(series.get())
              << " samples, s1=" << format_double(s1) << ", s2=" << format_double(s2) << ")\n";
  }
  return 0;
}

// ---- fit --------------------------------------------------------------------

struct FitArgs {
  std::string method = "fractal";
  std::string series;
  KnotSpec knots;
  std::string report;
  std::string norm;
  bool normalize = false;
};

int run_fit(const FitArgs& args, const GlobalOptions& g) {
  SeriesPtr series = load_series(args.series);
  double s1 = 0.0;
  double s2 = 1.0;
  if (args.normalize) {
    fif_series* raw = nullptr;
    check(fif_series_normalize(series.get(), &raw, &s1, &s2));
    series.reset(raw);
  } else if (!args.norm.empty()) {
    try {
      const auto sidecar = nlohmann::json::parse(read_text(args.norm));
      s1 = sidecar.at("s1").get<double>();
      s2 = sidecar.at("s2").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw CliError{kExitData, "bad normalization sidecar: " + std::string(e.what())};
    }
  }
  KnotsPtr knots = make_knots(series.get(), args.knots);

  fif_model* raw = nullptr;
  if (args.method == "fractal") {
    check(fif_fit_fractal(series.get(), knots.get(), g.d_max, &raw));
  } else {
    check(fif_fit_quadratic(series.get(), knots.get(), &raw));
  }
  ModelPtr model(raw);
  check(fif_model_set_provenance(model.get(), sha256_of(args.series).c_str(),
                                 g.seed.has_value(), g.seed.value_or(0), s1, s2));

  char* json = nullptr;
  check(fif_model_to_json(model.get(), &json));
  StringPtr model_json(json);
  check(fif_model_report_json(model.get(), &json));
  StringPtr report_json(json);

  const std::string out = g.out.empty() ? "model.json" : g.out;
  std::string report_path = args.report;
  if (report_path.empty()) {
    const auto dot = out.rfind(".json");
    report_path = (dot == std::string::npos ? out : out.substr(0, dot)) + ".report.json";
  }
  write_text(out, model_json.get());
  write_text(report_path, report_json.get());

  if (g.format == "json") {
    std::cout << report_json.get();
  } else {
    const std::size_t n = fif_model_segments(model.get());
    std::cout << args.method << " model, " << n << " segments -> " << out << "\n";
    for (std::size_t i = 0; i < n; ++i) {
      int flags = 0;
      if (args.method == "fractal") {
        double d = 0.0;
        check(fif_model_scaling(model.get(), i, &d, &flags));
        std::cout << "  d[" << i + 1 << "] = " << format_double(d);
      } else {
        double k = 0.0, r = 0.0, l = 0.0;
        check(fif_model_quadratic(model.get(), i, &k, &r, &l, &flags));
        std::cout << "  q[" << i + 1 << "] = (" << format_double(k) << ", " << format_double(r)
                  << ", " << format_double(l) << ")";
      }
      if (flags & FIF_FLAG_CLAMPED) std::cout << " [clamped]";
      if (flags & FIF_FLAG_DEGENERATE) std::cout << " [degenerate]";
      if (flags & FIF_FLAG_CHORD) std::cout << " [chord]";
      std::cout << "\n";
    }
  }
  if (g.strict && fif_model_flagged(model.get())) {
    throw CliError{kExitData, "fit flagged clamped/degenerate segments (--strict)"};
  }
  return 0;
}

// ---- eval -------------------------------------------------------------------

struct EvalArgs {
  std::string model;
  std::size_t grid = 0;
  std::string at;
};

int run_eval(const EvalArgs& args, const GlobalOptions& g) {
  const std::string text = read_text(args.model);
  fif_model* raw = nullptr;
  check(fif_model_from_json(text.data(), text.size(), &raw));
  ModelPtr model(raw);

  std::vector<double> xs;
  if (!args.at.empty()) {
    SeriesPtr series = load_series(args.at);
    const double* z = fif_series_z(series.get());
    xs.assign(z, z + fif_series_size(series.get()));
  } else {
    if (args.grid < 2) throw CliError{kExitUsage, "eval needs --grid >= 2 or --at FILE"};
    double a = 0.0, b = 0.0;
    check(fif_model_domain(model.get(), &a, &b));
    xs.resize(args.grid);
    for (std::size_t j = 0; j < args.grid; ++j) {
      const double t = static_cast<double>(j) / static_cast<double>(args.grid - 1);
      xs[j] = (1.0 - t) * a + t * b;
    }
    xs.front() = a;
    xs.back() = b;
  }
  std::vector<double> values(xs.size());
  check(fif_model_eval(model.get(), xs.data(), xs.size(), g.depth, values.data()));

  std::string csv = "x,value\n";
  for (std::size_t j = 0; j < xs.size(); ++j) {
    csv += format_double(xs[j]) + "," + format_double(values[j]) + "\n";
  }
  write_text(g.out.empty() ? "curve.csv" : g.out, csv);
  return 0;
}

// ---- compare ----------------------------------------------------------------

struct CompareArgs {
  std::string series;
  KnotSpec knots;
  bool all_examples = false;
  bool normalize = false;
};

nlohmann::ordered_json row_json(const std::string& name, const fif_comparison& row) {
  nlohmann::ordered_json j;
  j["dataset"] = name;
  j["fractal_rms"] = row.fractal_rms;
  j["quadratic_rms"] = row.quadratic_rms;
  j["collage_bound"] = row.collage_bound;
  j["contraction_factor"] = row.contraction_factor;
  j["eval_depth"] = row.eval_depth;
  j["clamped"] = row.clamped != 0;
  return j;
}

int run_compare(const CompareArgs& args, const GlobalOptions& g) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  auto add_row = [&](const std::string& name, const fif_series* series, const fif_knots* knots) {
    fif_comparison row{};
    check(fif_compare(series, knots, g.d_max, g.depth, &row));
    rows.push_back(row_json(name, row));
  };
  auto normalized = [](SeriesPtr raw) {
    fif_series* out = nullptr;
    check(fif_series_normalize(raw.get(), &out, nullptr, nullptr));
    return SeriesPtr(out);
  };

  if (args.all_examples) {
    fif_series* raw = nullptr;
    check(fif_series_gen_polynomial(10000, &raw));
    SeriesPtr poly = normalized(SeriesPtr(raw));
    const std::size_t poly_knots[] = {500, 4000, 7500};
    fif_knots* k = nullptr;
    check(fif_knots_manual(poly.get(), poly_knots, 3, &k));
    KnotsPtr pk(k);
    add_row("polynomial", poly.get(), pk.get());

    check(fif_series_gen_random_walk(10000, g.seed.value_or(0), &raw));
    SeriesPtr walk = normalized(SeriesPtr(raw));
    check(fif_knots_extrema(walk.get(), 10, 0, -1.0, &k));
    KnotsPtr wk(k);
    add_row("random-walk", walk.get(), wk.get());
  } else {
    if (args.series.empty()) throw CliError{kExitUsage, "compare needs --series or --all-examples"};
    SeriesPtr series = load_series(args.series);
    if (args.normalize) series = normalized(std::move(series));
    KnotsPtr knots = make_knots(series.get(), args.knots);
    add_row(args.series, series.get(), knots.get());
  }

  nlohmann::ordered_json doc;
  doc["tool_version"] = fif_version();
  doc["rows"] = rows;
  const std::string json = doc.dump(2) + "\n";
  if (!g.out.empty()) write_text(g.out, json);

  if (g.format == "json") {
    std::cout << json;
  } else {
    std::printf("%-24s %12s %12s %12s %8s %6s\n", "dataset", "fractal", "quadratic",
                "collage_bnd", "max|d|", "depth");
    for (const auto& r : rows) {
      std::printf("%-24s %12.7f %12.7f %12.7f %8.4f %6d%s\n",
                  r["dataset"].get<std::string>().c_str(), r["fractal_rms"].get<double>(),
                  r["quadratic_rms"].get<double>(), r["collage_bound"].get<double>(),
                  r["contraction_factor"].get<double>(), r["eval_depth"].get<int>(),
                  r["clamped"].get<bool>() ? "  [clamped]" : "");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractal interpolation: fit, evaluate and compare 1-D series approximations"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(fif_version()));

  GlobalOptions g;
  app.add_option("--out", g.out, "Output path (or prefix for gen)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--depth", g.depth, "FIF evaluation depth (default: automatic)");
  app.add_option("--d-max", g.d_max, "Clamp for |d_i|")->check(CLI::Range(1e-9, 0.999999));
  app.add_flag("--strict", g.strict, "Fail when a fit flags any segment");
  app.add_option("--format", g.format, "text | json")->check(CLI::IsMember({"text", "json"}));

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a series (raw + normalized CSV)");
  gen->add_option("--kind", gen_args.kind, "polynomial | dna | random-walk")
      ->required()
      ->check(CLI::IsMember({"polynomial", "dna", "random-walk"}));
  gen->add_option("--m", gen_args.m, "Number of samples")->check(CLI::Range(2, 100000000));
  gen->add_option("--input", gen_args.input, "DNA sequence (plain text or FASTA)");

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Fit a fractal or quadratic model to a series");
  fit->add_option("--method", fit_args.method, "fractal | quadratic")
      ->check(CLI::IsMember({"fractal", "quadratic"}));
  fit->add_option("--series", fit_args.series, "Series CSV")->required();
  add_knot_options(fit, fit_args.knots);
  fit->add_option("--report", fit_args.report, "Fit report JSON path");
  fit->add_option("--norm", fit_args.norm, "Normalization sidecar written by gen");
  fit->add_flag("--normalize", fit_args.normalize, "Normalize the series before fitting");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate a model on a grid or at series abscissae");
  eval->add_option("--model", eval_args.model, "Model JSON")->required();
  auto* grid_opt = eval->add_option("--grid", eval_args.grid, "Uniform grid resolution");
  eval->add_option("--at", eval_args.at, "Series CSV whose abscissae to use")->excludes(grid_opt);

  CompareArgs cmp_args;
  auto* cmp = app.add_subcommand("compare", "Compare fractal and quadratic approximation errors");
  cmp->add_option("--series", cmp_args.series, "Series CSV");
  add_knot_options(cmp, cmp_args.knots);
  cmp->add_flag("--all-examples", cmp_args.all_examples, "Run the built-in example pipelines");
  cmp->add_flag("--normalize", cmp_args.normalize, "Normalize the series first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return run_gen(gen_args, g);
    if (*fit) return run_fit(fit_args, g);
    if (*eval) return run_eval(eval_args, g);
    if (*cmp) return run_compare(cmp_args, g);
  } catch (const CliError& e) {
    std::cerr << "fif: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "fif: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
