#include <doctest.h>

#include <array>
#include <cmath>

#include "acsfa/hybrid.hpp"
#include "support.hpp"

using namespace acsfa;
using namespace acsfa::hybrid;

namespace {

const tsplib::TspInstance& ulysses16() {
  static const auto inst = tsplib::load_instance(testing::kDataDir / "ulysses16.tsp");
  return inst;
}

}  // namespace

TEST_CASE("brightness is the reciprocal tour length") {
  CHECK(brightness(100) == doctest::Approx(0.01));
  CHECK(brightness(426) > brightness(427));
  CHECK_THROWS_AS(brightness(0), std::invalid_argument);
}

TEST_CASE("initial population is uniform inside the bounds") {
  const ParamBounds b;
  Rng rng(8);
  const auto pop = init_population(b, 20000, rng);
  REQUIRE(pop.size() == 20000);
  std::array<double, kDims> mean{};
  for (const auto& v : pop) {
    CHECK(b.contains(v));
    for (std::size_t d = 0; d < kDims; ++d) mean[d] += v.x[d] / 20000.0;
  }
  for (std::size_t d = 0; d < kDims; ++d) {
    const double centre = 0.5 * (b.ranges[d].low + b.ranges[d].high);
    CHECK(mean[d] == doctest::Approx(centre).epsilon(0.02));
  }
  ParamBounds pinned;
  pinned.ranges[firefly::kRho] = {0.3, 0.3};
  for (const auto& v : init_population(pinned, 50, rng)) CHECK(v.rho() == 0.3);
}

TEST_CASE("summaries bracket the population") {
  std::vector<firefly::Firefly> pop(3);
  pop[0].position.x = {1, 0.5, 0.5, 0, 0.8};
  pop[1].position.x = {4, 1.0, 0.7, 6, 1.0};
  pop[2].position.x = {7, 0.6, 0.9, 3, 0.9};
  const auto row = summarize(pop);
  CHECK(row.mean[firefly::kBeta] == doctest::Approx(4.0));
  CHECK(row.min[firefly::kGamma] == 0.0);
  CHECK(row.max[firefly::kQ0] == 0.9);
  CHECK(row.mean[firefly::kDelta] == doctest::Approx(0.9));
}

TEST_CASE("a single ant with pinned parameters is plain ACS") {
  const auto& inst = ulysses16();
  AcsfaConfig cfg;
  cfg.iterations = 80;
  cfg.ants = 1;
  cfg.bounds.ranges = {{{2.0, 2.0}, {0.1, 0.1}, {0.9, 0.9}, {1.0, 1.0}, {1.0, 1.0}}};
  Rng hybrid_rng(31);
  const auto h = run_acsfa(inst, cfg, hybrid_rng);

  acs::AcsParams params;
  params.ants = 1;
  Rng acs_rng(31);
  acs_rng.discard(kDims);  // the hybrid draws the initial population first
  const auto a = acs::run_acs(inst, params, cfg.iterations, acs_rng);

  CHECK(h.record.best_trace == a.best_trace);
  CHECK(h.record.best.order == a.best.order);
  CHECK(h.final_alpha == doctest::Approx(cfg.ff_alpha0));
}

TEST_CASE("run_acsfa") {
  const auto& inst = ulysses16();
  AcsfaConfig cfg;
  cfg.iterations = 40;

  SUBCASE("traces cover every iteration and stay in bounds") {
    Rng rng(5);
    const auto r = run_acsfa(inst, cfg, rng);
    REQUIRE(r.trace.size() == 40);
    REQUIRE(r.record.best_trace.size() == 40);
    for (const auto& row : r.trace)
      for (std::size_t d = 0; d < kDims; ++d) {
        CHECK(row.min[d] <= row.mean[d] + 1e-12);
        CHECK(row.mean[d] <= row.max[d] + 1e-12);
        CHECK(row.min[d] >= cfg.bounds.ranges[d].low);
        CHECK(row.max[d] <= cfg.bounds.ranges[d].high);
      }
    for (std::size_t k = 1; k < 40; ++k)
      CHECK(r.record.best_trace[k] <= r.record.best_trace[k - 1]);
    CHECK(r.record.best.length == tsplib::tour_length(inst, r.record.best.order));
    CHECK(cfg.bounds.contains(r.best_params));
    CHECK(r.final_alpha <= cfg.ff_alpha0);
    CHECK(r.final_alpha >= cfg.ff_alpha0 * std::pow(cfg.bounds.ranges[firefly::kDelta].low, 40));
  }
  SUBCASE("seeded runs are deterministic") {
    Rng a(12), b(12);
    const auto ra = run_acsfa(inst, cfg, a);
    const auto rb = run_acsfa(inst, cfg, b);
    CHECK(ra.record.best.order == rb.record.best.order);
    CHECK(ra.best_params == rb.best_params);
    CHECK(ra.trace.back().mean == rb.trace.back().mean);
  }
  SUBCASE("a time limit stops early") {
    cfg.iterations = 1000000;
    cfg.time_limit = 1e-9;
    Rng rng(1);
    CHECK(run_acsfa(inst, cfg, rng).trace.size() == 1);
  }
  SUBCASE("invalid configuration") {
    Rng rng(1);
    cfg.ants = 0;
    CHECK_THROWS_AS(run_acsfa(inst, cfg, rng), std::invalid_argument);
    cfg = {};
    cfg.bounds.ranges[firefly::kRho] = {0.5, 1.5};
    CHECK_THROWS_AS(run_acsfa(inst, cfg, rng), std::invalid_argument);
  }
}
