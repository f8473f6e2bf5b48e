#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "fif/collage_fit.hpp"
#include "fif/error.hpp"
#include "fif/model_file.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace {

fif::ModelFile fractal_file(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto inst = oracle::random_instance(rng, 80, 4);
  const auto knots = test::to_knots(inst);
  const auto report = fif::fit_d_discrete(test::to_series(inst), knots);
  return {fif::FractalFit{fif::fitted_model(knots, report), report.clamped, report.degenerate},
          {0.25, 1.75},
          {fif::sha256_hex("abc"), seed, std::string(fif::kToolVersion)}};
}

fif::ModelFile quadratic_file() {
  std::mt19937_64 rng(8);
  const auto inst = oracle::random_instance(rng, 60, 3);
  return {fif::fit_quadratic(test::to_series(inst), test::to_knots(inst)), {}, {"", {}, "0.1.0"}};
}

fif::ErrorKind kind_of(const std::string& text) {
  try {
    fif::model_from_json(text);
  } catch (const fif::Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return fif::ErrorKind::io;
}

}  // namespace

TEST_SUITE("model_file") {
  TEST_CASE("sha256") {
    CHECK(fif::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(fif::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  }

  TEST_CASE("fractal model round trip is byte identical") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto file = fractal_file(seed);
      const auto text = fif::to_json(file);
      const auto back = fif::model_from_json(text);
      CHECK(fif::to_json(back) == text);
      REQUIRE(back.is_fractal());
      const auto& a = std::get<fif::FractalFit>(file.model).model;
      const auto& b = std::get<fif::FractalFit>(back.model).model;
      for (std::size_t i = 0; i < a.segments(); ++i) CHECK(a.scalings()[i] == b.scalings()[i]);
      CHECK(back.normalization.s1 == 0.25);
      CHECK(back.provenance == file.provenance);
    }
  }

  TEST_CASE("quadratic model round trip") {
    const auto file = quadratic_file();
    const auto text = fif::to_json(file);
    const auto back = fif::model_from_json(text);
    CHECK(fif::to_json(back) == text);
    CHECK_FALSE(back.is_fractal());
    CHECK_FALSE(back.provenance.seed.has_value());
    const auto& q = std::get<fif::QuadModel>(back.model);
    const auto& knots = q.knots();
    for (std::size_t i = 0; i < knots.size(); ++i) CHECK(q(knots[i].x) == knots[i].y);
  }

  TEST_CASE("layout") {
    const auto j = nlohmann::json::parse(fif::to_json(fractal_file(3)));
    CHECK(j["schema_version"] == "1");
    CHECK(j["kind"] == "fractal");
    CHECK(j["domain"].size() == 2);
    CHECK(j["parameters"]["d"].size() == 4);
    CHECK(j["parameters"]["maps"].size() == 4);
    CHECK(j["provenance"]["seed"] == 3);
    CHECK(j["provenance"]["tool_version"] == "0.1.0");
  }

  TEST_CASE("invalid content is rejected") {
    const auto text = fif::to_json(fractal_file(4));
    auto j = nlohmann::ordered_json::parse(text);

    auto wrong_version = j;
    wrong_version["schema_version"] = "2";
    CHECK(kind_of(wrong_version.dump()) == fif::ErrorKind::schema);

    auto wrong_kind = j;
    wrong_kind["kind"] = "spline";
    CHECK(kind_of(wrong_kind.dump()) == fif::ErrorKind::schema);

    auto bad_d = j;
    bad_d["parameters"]["d"][0] = 1.5;
    CHECK(kind_of(bad_d.dump()) == fif::ErrorKind::schema);

    auto bad_map = j;
    bad_map["parameters"]["maps"][1]["f"] = bad_map["parameters"]["maps"][1]["f"].get<double>() + 1.0;
    CHECK(kind_of(bad_map.dump()) == fif::ErrorKind::schema);

    auto bad_domain = j;
    bad_domain["domain"][1] = 1e6;
    CHECK(kind_of(bad_domain.dump()) == fif::ErrorKind::schema);

    auto missing = j;
    missing.erase("knots");
    CHECK(kind_of(missing.dump()) == fif::ErrorKind::schema);

    CHECK(kind_of("{not json") == fif::ErrorKind::data);

    auto quad = nlohmann::ordered_json::parse(fif::to_json(quadratic_file()));
    quad["parameters"]["coefficients"][0][2] = quad["parameters"]["coefficients"][0][2].get<double>() + 0.1;
    CHECK(kind_of(quad.dump()) == fif::ErrorKind::schema);
  }
}
