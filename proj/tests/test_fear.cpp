#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "fearbrake/fear.hpp"

using namespace fearbrake;
using occ::Band;

TEST_CASE("band classification uses half-open cuts") {
  const occ::IntensityBands bands;
  CHECK(bands.classify(0.0) == Band::VeryLow);
  CHECK(bands.classify(0.24) == Band::VeryLow);
  CHECK(bands.classify(0.2401) == Band::Low);
  CHECK(bands.classify(0.5) == Band::Low);
  CHECK(bands.classify(0.5001) == Band::Medium);
  CHECK(bands.classify(0.73) == Band::Medium);
  CHECK(bands.classify(0.7301) == Band::High);
  CHECK(bands.classify(0.9) == Band::High);
  CHECK(bands.classify(0.9001) == Band::VeryHigh);
  CHECK(bands.classify(1.0) == Band::VeryHigh);
  CHECK(std::string(occ::band_name(Band::Medium)) == "Medium");
}

TEST_CASE("fear config validation") {
  occ::FearConfig config;
  CHECK_NOTHROW(config.validate());
  config.w_undesirability = 0.9;
  CHECK_THROWS_AS(config.validate(), fuzzy::SpecError);  // weights sum != 1
  config = {};
  config.threshold = 1.5;
  CHECK_THROWS_AS(config.validate(), fuzzy::SpecError);
  config = {};
  config.bands.upper = {0.5, 0.4, 0.7, 0.9};
  CHECK_THROWS_AS(config.validate(), fuzzy::SpecError);
}

TEST_CASE("potential is the convex combination, intensity the excess") {
  occ::FearConfig config;
  config.w_undesirability = 0.78;
  config.w_likelihood = 0.132;
  config.w_global_intensity = 0.088;
  CHECK(occ::fear_potential(1.0, 0.0, 0.0, config) == doctest::Approx(0.78));
  CHECK(occ::fear_potential(0.5, 0.5, 0.5, config) == doctest::Approx(0.5));
  CHECK(occ::fear_intensity(0.7, 0.3) == doctest::Approx(0.4));
  CHECK(occ::fear_intensity(0.2, 0.3) == 0.0);
}

TEST_CASE("amended undesirability reproduces every reference check") {
  const occ::FearModel model;
  const auto& checks = occ::undesirability_reference_checks();
  REQUIRE(checks.size() == 14);
  for (const auto& c : checks) {
    const double actual = model.undesirability(c.imp_goal, c.ach_goal);
    CHECK(std::abs(actual - c.expected) <= 0.03);
  }
  // Frozen spot values from an independent engine run.
  CHECK(model.undesirability(0.10, 0.5) == doctest::Approx(0.250000).epsilon(1e-4));
  CHECK(model.undesirability(0.27, 0.0) == doctest::Approx(0.527198).epsilon(1e-4));
  CHECK(model.undesirability(0.56, 0.5) == doctest::Approx(0.570027).epsilon(1e-4));
  CHECK(model.undesirability(0.80, 0.0) == doctest::Approx(0.913918).epsilon(1e-4));
  CHECK(model.undesirability(0.96, 0.0) == doctest::Approx(0.914857).epsilon(1e-4));
  CHECK(model.undesirability(1.00, 1.0) == doctest::Approx(0.083300).epsilon(1e-4));
}

TEST_CASE("printed rulebase misses the four top-achievement checks") {
  const occ::FearModel printed(occ::FearConfig{}, /*amended_rules=*/false);
  const auto& checks = occ::undesirability_reference_checks();
  std::vector<int> failing;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const double actual =
        printed.undesirability(checks[i].imp_goal, checks[i].ach_goal);
    if (std::abs(actual - checks[i].expected) > 0.03) {
      failing.push_back(static_cast<int>(i) + 1);
    }
  }
  CHECK(failing == occ::unamended_failing_checks());
  CHECK(failing == std::vector<int>{5, 8, 11, 14});
  // Frozen values of the printed-table misses.
  CHECK(printed.undesirability(0.40, 1.0) == doctest::Approx(0.231139).epsilon(1e-4));
  CHECK(printed.undesirability(0.60, 1.0) == doctest::Approx(0.428775).epsilon(1e-4));
  CHECK(printed.undesirability(0.79, 1.0) == doctest::Approx(0.758629).epsilon(1e-4));
  CHECK(printed.undesirability(1.00, 1.0) == doctest::Approx(0.500000).epsilon(1e-4));
}

TEST_CASE("likelihood and global-intensity spot values") {
  const occ::FearModel model;
  CHECK(model.likelihood(0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(model.likelihood(0.0, 1.0) == doctest::Approx(0.9167).epsilon(1e-3));
  CHECK(model.likelihood(1.0, 0.0) == doctest::Approx(0.0833).epsilon(1e-3));
  CHECK(model.global_intensity(1.0, 1.0) == doctest::Approx(0.9167).epsilon(1e-3));
  CHECK(model.global_intensity(0.0, 0.0) == doctest::Approx(0.0833).epsilon(1e-3));
}

TEST_CASE("appraise composes the three stages and the threshold") {
  occ::FearConfig config;
  config.w_undesirability = 0.78;
  config.w_likelihood = 0.132;
  config.w_global_intensity = 0.088;
  config.threshold = 0.1;
  const occ::FearModel model(config);
  occ::AppraisalInputs in;
  in.imp_goal = 1.0;
  in.ach_goal = 0.2;
  in.distance_norm = 0.1;
  in.speed_norm = 0.9;
  in.sense_of_reality = 0.8;
  in.proximity = 0.7;
  const auto state = model.appraise(in);
  CHECK(state.undesirability ==
        doctest::Approx(model.undesirability(1.0, 0.2)));
  CHECK(state.likelihood == doctest::Approx(model.likelihood(0.1, 0.9)));
  CHECK(state.global_intensity ==
        doctest::Approx(model.global_intensity(0.8, 0.7)));
  CHECK(state.potential ==
        doctest::Approx(0.78 * state.undesirability +
                        0.132 * state.likelihood +
                        0.088 * state.global_intensity));
  CHECK(state.threshold == 0.1);
  CHECK(state.intensity == doctest::Approx(state.potential - 0.1));
  CHECK(state.band == config.bands.classify(state.intensity));
}

TEST_CASE("shipped rulebase files match the in-code builders") {
  const std::string dir = std::string(FEARBRAKE_DATA_DIR) + "/rulebases/";
  const struct {
    const char* file;
    fuzzy::FisSpec fis;
  } pairs[] = {
      {"undesirability_amended.json", occ::make_undesirability_fis(true)},
      {"undesirability_printed.json", occ::make_undesirability_fis(false)},
      {"likelihood.json", occ::make_likelihood_fis()},
      {"global_intensity.json", occ::make_global_intensity_fis()},
  };
  for (const auto& p : pairs) {
    const auto loaded = fuzzy::load_fis(dir + p.file);
    REQUIRE(loaded.rules().size() == p.fis.rules().size());
    for (double a : {0.0, 0.15, 0.4, 0.62, 0.85, 1.0}) {
      for (double b : {0.0, 0.3, 0.55, 0.77, 1.0}) {
        CHECK(loaded.evaluate({a, b}) == p.fis.evaluate({a, b}));
      }
    }
  }
}
