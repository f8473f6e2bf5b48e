#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "fif/error.hpp"
#include "fif/ifs_core.hpp"
#include "oracles.hpp"
#include "support.hpp"

using fif::Knots;
using fif::Point;

namespace {

Knots tent_knots() { return Knots({{0, 0}, {0.5, 0.5}, {1, 0}}); }

fif::FifModel takagi_model() {
  const std::vector<double> d{0.5, 0.5};
  return fif::build_model(tent_knots(), d);
}

double piecewise_linear(const Knots& k, double x) {
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    if (x <= k[i + 1].x) {
      return k[i].y + (k[i + 1].y - k[i].y) * (x - k[i].x) / (k[i + 1].x - k[i].x);
    }
  }
  return k.last().y;
}

}  // namespace

TEST_SUITE("ifs_core") {
  TEST_CASE("knots reject bad input") {
    CHECK_THROWS_AS(Knots({{0, 0}, {1, 1}}), fif::Error);
    CHECK_THROWS_AS(Knots({{0, 0}, {1, 1}, {1, 2}}), fif::Error);
    CHECK_THROWS_AS(Knots({{0, 0}, {2, 1}, {1, 2}}), fif::Error);
    CHECK_THROWS_AS(Knots({{0, 0}, {1, NAN}, {2, 2}}), fif::Error);
  }

  TEST_CASE("segment membership is half-open with the last segment closed") {
    const Knots k({{0, 0}, {1, 0}, {3, 0}, {4, 0}});
    CHECK(k.segment_of(0.0) == 0);
    CHECK(k.segment_of(0.999) == 0);
    CHECK(k.segment_of(1.0) == 1);
    CHECK(k.segment_of(3.0) == 2);
    CHECK(k.segment_of(4.0) == 2);
  }

  TEST_CASE("build_model reproduces the hand-derived tent coefficients") {
    const auto model = takagi_model();
    const auto maps = model.maps();
    REQUIRE(maps.size() == 2);
    CHECK(maps[0].a == doctest::Approx(0.5));
    CHECK(maps[1].a == doctest::Approx(0.5));
    CHECK(maps[0].e == doctest::Approx(0.0));
    CHECK(maps[1].e == doctest::Approx(0.5));
    CHECK(maps[0].c == doctest::Approx(0.5));
    CHECK(maps[1].c == doctest::Approx(-0.5));
    CHECK(maps[0].f == doctest::Approx(0.0));
    CHECK(maps[1].f == doctest::Approx(0.5));
    CHECK(model.contraction_factor() == 0.5);
  }

  TEST_CASE("build_model partitions [a,b]") {
    const Knots k({{0, 0}, {1, 1}, {2, 0}});
    const std::vector<double> d{0.3, -0.3};
    const auto model = fif::build_model(k, d);
    CHECK(model.maps()[0].a == doctest::Approx(0.5));
    CHECK(model.maps()[1].a == doctest::Approx(0.5));
    CHECK(model.maps()[0].a + model.maps()[1].a == doctest::Approx(1.0));
  }

  TEST_CASE("build_model rejects non-contractive and mismatched scalings") {
    const auto k = tent_knots();
    CHECK_THROWS_AS(fif::build_model(k, std::vector<double>{1.0, 0.0}), fif::Error);
    CHECK_THROWS_AS(fif::build_model(k, std::vector<double>{0.2, -1.5}), fif::Error);
    CHECK_THROWS_AS(fif::build_model(k, std::vector<double>{0.2}), fif::Error);
    CHECK_THROWS_AS(fif::build_model(k, std::vector<double>{0.2, 0.2, 0.2}), fif::Error);
  }

  TEST_CASE("collinear knots with zero scaling fix the line") {
    const Knots k({{0, 1}, {1, 3}, {2.5, 6}, {4, 9}});
    const auto model = fif::build_model(k, std::vector<double>(3, 0.0));
    for (std::size_t i = 0; i < 3; ++i) {
      // c_i = slope * (x_i - x_{i-1}) / (b - a)
      const double width = k[i + 1].x - k[i].x;
      CHECK(model.maps()[i].c == doctest::Approx(2.0 * width / 4.0));
    }
    const auto line = fif::SampledFunction::tabulate(0, 4, 101, [](double x) { return 1 + 2 * x; });
    const auto image = fif::hutchinson_apply(model, line);
    for (std::size_t j = 0; j < image.size(); ++j) {
      CHECK(image.values()[j] == doctest::Approx(line.values()[j]).epsilon(1e-12));
    }
  }

  TEST_CASE("endpoint mapping holds on random configurations") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const auto knots = test::random_knots(rng, 2 + trial % 7);
      const auto d = test::random_scalings(rng, knots.segments(), 0.99);
      const auto model = fif::build_model(knots, d);
      for (std::size_t i = 0; i < model.segments(); ++i) {
        const auto lo = model.maps()[i].apply(knots.first());
        const auto hi = model.maps()[i].apply(knots.last());
        const double scale = 1.0 + std::abs(knots[i].x) + std::abs(knots[i].y);
        CHECK(std::abs(lo.x - knots[i].x) <= 1e-12 * scale);
        CHECK(std::abs(lo.y - knots[i].y) <= 1e-12 * scale);
        CHECK(std::abs(hi.x - knots[i + 1].x) <= 1e-12 * scale);
        CHECK(std::abs(hi.y - knots[i + 1].y) <= 1e-12 * scale);
      }
    }
  }

  TEST_CASE("alpha, beta, gamma hit their endpoint values") {
    const auto k = tent_knots();
    const auto f = fif::alpha_beta_gamma(k, 0);
    CHECK(f.gamma(0.0) == doctest::Approx(0.0));
    CHECK(f.gamma(0.5) == doctest::Approx(1.0));
    CHECK(f.alpha(0.0) == doctest::Approx(0.0));
    CHECK(f.alpha(0.5) == doctest::Approx(0.5));
    // y_0 = y_N = 0 makes beta vanish
    CHECK(f.beta.slope == 0.0);
    CHECK(f.beta.intercept == 0.0);
    CHECK_THROWS_AS(fif::alpha_beta_gamma(k, 2), fif::Error);
  }

  TEST_CASE("gamma inverts u on random knots") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      const auto knots = test::random_knots(rng, 4);
      const auto model = fif::build_model(knots, std::vector<double>(4, 0.1));
      for (std::size_t i = 0; i < 4; ++i) {
        const auto f = fif::alpha_beta_gamma(knots, i);
        const auto u = model.maps()[i].u();
        for (double t : {0.0, 0.3, 0.77, 1.0}) {
          const double x = knots.a() + t * (knots.b() - knots.a());
          CHECK(f.gamma(u(x)) == doctest::Approx(x).epsilon(1e-10));
        }
        CHECK(f.beta(knots[i].x) == doctest::Approx(knots.first().y).epsilon(1e-10));
        CHECK(f.beta(knots[i + 1].x) == doctest::Approx(knots.last().y).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("hutchinson_apply with zero scaling gives the knot interpolant") {
    std::mt19937_64 rng(3);
    const auto knots = test::random_knots(rng, 5);
    const auto model = fif::build_model(knots, std::vector<double>(5, 0.0));
    const auto g = fif::SampledFunction::tabulate(knots.a(), knots.b(), 257,
                                                  [](double x) { return std::sin(x); });
    const auto image = fif::hutchinson_apply(model, g);
    for (std::size_t j = 0; j < image.size(); ++j) {
      CHECK(image.values()[j] ==
            doctest::Approx(piecewise_linear(knots, image.grid()[j])).epsilon(1e-12));
    }
  }

  TEST_CASE("hutchinson_apply of a chord-matching g passes through all knots") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      const auto knots = test::random_knots(rng, 6);
      const auto model = fif::build_model(knots, test::random_scalings(rng, 6, 0.9));
      // g agrees with the knots at a and b, arbitrary elsewhere
      const auto g = [&](double x) {
        return model.chord(x) + std::sin(3 * x) * (x - knots.a()) * (x - knots.b());
      };
      std::vector<double> xs;
      for (const auto& p : knots.points()) xs.push_back(p.x);
      const auto image = fif::hutchinson_apply(model, g, xs);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(image[i] == doctest::Approx(knots[i].y).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("hutchinson_apply rejects a grid not spanning [a,b]") {
    const auto model = takagi_model();
    const auto g = fif::SampledFunction::tabulate(0.0, 0.9, 11, [](double) { return 0.0; });
    CHECK_THROWS_AS(fif::hutchinson_apply(model, g), fif::Error);
  }

  TEST_CASE("Takagi iterates contract by at most max|d|") {
    const auto model = takagi_model();
    auto g = fif::SampledFunction::tabulate(0, 1, 1025, [](double) { return 0.0; });
    double prev_gap = -1.0;
    for (int n = 0; n < 20; ++n) {
      const auto next = fif::hutchinson_apply(model, g);
      double gap = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        gap = std::max(gap, std::abs(next.values()[j] - g.values()[j]));
      }
      if (prev_gap > 1e-14) CHECK(gap <= 0.5 * prev_gap * (1 + 1e-12) + 1e-15);
      prev_gap = gap;
      g = next;
    }
    // the grid iteration converges to the Takagi function
    for (std::size_t j = 0; j < g.size(); j += 37) {
      CHECK(g.values()[j] == doctest::Approx(oracle::takagi(g.grid()[j])).epsilon(1e-5));
    }
  }

  TEST_CASE("evaluate_fif reproduces knots exactly at every depth >= 1") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
      const auto knots = test::random_knots(rng, 2 + trial % 9);
      const auto model = fif::build_model(knots, test::random_scalings(rng, knots.segments(), 0.99));
      for (int depth : {1, 2, 7, 30}) {
        for (const auto& p : knots.points()) CHECK(fif::evaluate_fif(model, p.x, depth) == p.y);
      }
    }
  }

  TEST_CASE("evaluate_fif at depth 0 is the chord, zero scaling is piecewise linear") {
    const Knots k({{0, 1}, {1, 4}, {3, -2}, {4, 0}});
    const auto model = fif::build_model(k, std::vector<double>{0.0, 0.0, 0.0});
    for (double x = 0.0; x <= 4.0; x += 0.125) {
      CHECK(fif::evaluate_fif(model, x, 1) == doctest::Approx(piecewise_linear(k, x)).epsilon(1e-12));
      CHECK(fif::evaluate_fif(model, x, 0) == doctest::Approx(1.0 - 0.25 * x).epsilon(1e-12));
    }
  }

  TEST_CASE("evaluate_fif matches the Takagi function") {
    const auto model = takagi_model();
    CHECK(fif::evaluate_fif(model, 0.25, 40) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fif::evaluate_fif(model, 1.0 / 3.0, 60) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    const double d40 = fif::evaluate_fif(model, 0.3, 40);
    const double d41 = fif::evaluate_fif(model, 0.3, 41);
    CHECK(std::abs(d40 - d41) <= std::pow(0.5, 40));
    for (double x = 0.0; x <= 1.0; x += 1.0 / 97.0) {
      CHECK(fif::evaluate_fif(model, x) == doctest::Approx(oracle::takagi(x)).epsilon(1e-8));
      // symmetric knots and scalings give a symmetric attractor
      CHECK(fif::evaluate_fif(model, x, 40) ==
            doctest::Approx(fif::evaluate_fif(model, 1.0 - x, 40)).epsilon(1e-9));
    }
  }

  TEST_CASE("evaluate_fif depth convergence") {
    std::mt19937_64 rng(4);
    const auto knots = test::random_knots(rng, 5);
    const auto model = fif::build_model(knots, test::random_scalings(rng, 5, 0.8));
    const double c = model.contraction_factor();
    // C bounds |Phi b0 - b0|; the D-th increment is at most c^D C
    double big_c = 0.0;
    for (double t = 0.0; t <= 1.0; t += 1.0 / 512) {
      const double x = knots.a() + t * (knots.b() - knots.a());
      big_c = std::max(big_c, std::abs(fif::evaluate_fif(model, x, 1) - fif::evaluate_fif(model, x, 0)));
    }
    for (int depth : {1, 5, 10, 20}) {
      for (double t = 0.0; t <= 1.0; t += 1.0 / 128) {
        const double x = knots.a() + t * (knots.b() - knots.a());
        const double gap =
            std::abs(fif::evaluate_fif(model, x, depth) - fif::evaluate_fif(model, x, depth + 1));
        CHECK(gap <= std::pow(c, depth) * big_c * (1 + 1e-9) + 1e-12);
      }
    }
  }

  TEST_CASE("evaluate_fif rejects out-of-domain input") {
    const auto model = takagi_model();
    CHECK_THROWS_AS(fif::evaluate_fif(model, -0.01, 5), fif::Error);
    CHECK_THROWS_AS(fif::evaluate_fif(model, 1.01, 5), fif::Error);
    CHECK_THROWS_AS(fif::evaluate_fif(model, 0.5, -1), fif::Error);
  }

  TEST_CASE("default depth") {
    const auto k = tent_knots();
    CHECK(fif::default_depth(fif::build_model(k, std::vector<double>{0.0, 0.0})) == 1);
    // 0.5^29 = 1.86e-9, 0.5^30 = 9.3e-10
    CHECK(fif::default_depth(takagi_model()) == 30);
    CHECK(fif::default_depth(fif::build_model(k, std::vector<double>{0.9, 0.1})) == 48);
  }

  TEST_CASE("fixed_point_residual") {
    const auto k = tent_knots();
    CHECK(fif::fixed_point_residual(fif::build_model(k, std::vector<double>{0, 0}), 513, 1) <= 1e-15);
    CHECK(fif::fixed_point_residual(takagi_model(), 4097, 40) < 1e-6);
    std::mt19937_64 rng(9);
    const auto knots = test::random_knots(rng, 4);
    const auto model = fif::build_model(knots, std::vector<double>{0.9, -0.9, 0.5, 0.2});
    CHECK(fif::fixed_point_residual(model, 2049, 200) < 1e-6);
    CHECK_THROWS_AS(fif::fixed_point_residual(model, 1, 10), fif::Error);
  }

  TEST_CASE("sup-norm contraction on random sampled functions") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      const auto knots = test::random_knots(rng, 3 + trial % 5);
      const auto model = fif::build_model(knots, test::random_scalings(rng, knots.segments(), 0.95));
      auto grid = fif::SampledFunction::uniform_grid(knots.a(), knots.b(), 301);
      std::vector<double> gv(grid.size()), hv(grid.size());
      for (auto& v : gv) v = normal(rng);
      for (auto& v : hv) v = normal(rng);
      const fif::SampledFunction g(grid, gv), h(grid, hv);
      const auto pg = fif::hutchinson_apply(model, g);
      const auto ph = fif::hutchinson_apply(model, h);
      double num = 0.0, den = 0.0;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        num = std::max(num, std::abs(pg.values()[j] - ph.values()[j]));
        den = std::max(den, std::abs(gv[j] - hv[j]));
      }
      CHECK(num / den <= model.contraction_factor() + 1e-8);
    }
  }
}
