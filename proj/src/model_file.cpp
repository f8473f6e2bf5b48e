#include "fif/model_file.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "fif/error.hpp"
#include "json.hpp"

namespace fif {

namespace {

using Json = nlohmann::ordered_json;

Json knots_json(const Knots& knots) {
  Json out = Json::array();
  for (const auto& p : knots.points()) out.push_back({p.x, p.y});
  return out;
}

Knots knots_from(const Json& j) {
  std::vector<Point> points;
  for (const auto& p : j.at("knots")) {
    if (!p.is_array() || p.size() != 2) throw Error(ErrorKind::schema, "knot must be [x, y]");
    points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  try {
    return Knots(std::move(points));
  } catch (const Error& e) {
    throw Error(ErrorKind::schema, e.what());
  }
}

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<bool> flags_from(const Json& j, std::size_t n) {
  auto flags = j.get<std::vector<bool>>();
  if (flags.size() != n) throw Error(ErrorKind::schema, "flag list length mismatch");
  return flags;
}

}  // namespace

const Knots& ModelFile::knots() const {
  return std::visit(
      [](const auto& m) -> const Knots& {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, FractalFit>) {
          return m.model.knots();
        } else {
          return m.knots();
        }
      },
      model);
}

std::string to_json(const ModelFile& file) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = file.is_fractal() ? "fractal" : "quadratic";
  const Knots& knots = file.knots();
  j["domain"] = {knots.a(), knots.b()};
  j["knots"] = knots_json(knots);

  Json params;
  if (const auto* fractal = std::get_if<FractalFit>(&file.model)) {
    params["d"] = fractal->model.scalings();
    params["clamped"] = fractal->clamped;
    params["degenerate"] = fractal->degenerate;
    Json maps = Json::array();
    for (const auto& m : fractal->model.maps()) {
      maps.push_back({{"a", m.a}, {"c", m.c}, {"d", m.d}, {"e", m.e}, {"f", m.f}});
    }
    params["maps"] = std::move(maps);
  } else {
    const auto& quad = std::get<QuadModel>(file.model);
    Json coeffs = Json::array();
    std::vector<bool> fallback;
    for (const auto& c : quad.coefficients()) {
      coeffs.push_back({c.k, c.r, c.l});
      fallback.push_back(c.chord_fallback);
    }
    params["coefficients"] = std::move(coeffs);
    params["chord_fallback"] = fallback;
  }
  j["parameters"] = std::move(params);
  j["normalization"] = {{"s1", file.normalization.s1}, {"s2", file.normalization.s2}};
  Json prov;
  prov["input_sha256"] = file.provenance.input_sha256;
  prov["seed"] = file.provenance.seed ? Json(*file.provenance.seed) : Json(nullptr);
  prov["tool_version"] = file.provenance.tool_version;
  j["provenance"] = std::move(prov);
  return j.dump(2) + "\n";
}

ModelFile model_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::data, fmt::format("model file is not valid JSON: {}", e.what()));
  }
  try {
    const auto version = j.at("schema_version").get<std::string>();
    if (version != kSchemaVersion) {
      throw Error(ErrorKind::schema, fmt::format("unsupported schema_version '{}'", version));
    }
    Knots knots = knots_from(j);
    const auto& domain = j.at("domain");
    if (domain.size() != 2 || domain[0].get<double>() != knots.a() ||
        domain[1].get<double>() != knots.b()) {
      throw Error(ErrorKind::schema, "domain does not match the end knots");
    }
    const auto& params = j.at("parameters");
    const auto kind = j.at("kind").get<std::string>();
    const std::size_t n = knots.segments();

    auto model = [&]() -> std::variant<FractalFit, QuadModel> {
      if (kind == "fractal") {
        const auto d = params.at("d").get<std::vector<double>>();
        FractalFit fit{FifModel(knots, d), flags_from(params.at("clamped"), n),
                       flags_from(params.at("degenerate"), n)};
        if (params.contains("maps")) {
          const auto& maps = params.at("maps");
          if (maps.size() != n) throw Error(ErrorKind::schema, "maps length mismatch");
          for (std::size_t i = 0; i < n; ++i) {
            const auto& m = fit.model.maps()[i];
            const auto& s = maps[i];
            if (!close(s.at("a").get<double>(), m.a) || !close(s.at("c").get<double>(), m.c) ||
                !close(s.at("d").get<double>(), m.d) || !close(s.at("e").get<double>(), m.e) ||
                !close(s.at("f").get<double>(), m.f)) {
              throw Error(ErrorKind::schema, fmt::format("map {} disagrees with knots and d", i));
            }
          }
        }
        return fit;
      }
      if (kind == "quadratic") {
        const auto fallback = flags_from(params.at("chord_fallback"), n);
        std::vector<QuadSegment> coeffs;
        for (const auto& c : params.at("coefficients")) {
          if (!c.is_array() || c.size() != 3) {
            throw Error(ErrorKind::schema, "quadratic coefficients must be [k, r, l]");
          }
          const bool chord = coeffs.size() < fallback.size() && fallback[coeffs.size()];
          coeffs.push_back({c[0].get<double>(), c[1].get<double>(), c[2].get<double>(), chord});
        }
        return QuadModel::from_coefficients(knots, std::move(coeffs));
      }
      throw Error(ErrorKind::schema, fmt::format("unknown model kind '{}'", kind));
    }();

    ModelFile out{std::move(model), {}, {}};
    const auto& norm = j.at("normalization");
    out.normalization = {norm.at("s1").get<double>(), norm.at("s2").get<double>()};
    const auto& prov = j.at("provenance");
    out.provenance.input_sha256 = prov.at("input_sha256").get<std::string>();
    if (!prov.at("seed").is_null()) out.provenance.seed = prov.at("seed").get<std::uint64_t>();
    out.provenance.tool_version = prov.at("tool_version").get<std::string>();
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::schema, fmt::format("model file: {}", e.what()));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::invalid_argument) throw Error(ErrorKind::schema, e.what());
    throw;
  }
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::io, "SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace fif
