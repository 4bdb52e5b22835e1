// End-to-end acceptance gate. Each test case checks one release criterion
// and prints a single PASS/FAIL line with the figures that decided it.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fearbrake/fear.hpp"
#include "fearbrake/fuzzy.hpp"
#include "fearbrake/sim.hpp"

using namespace fearbrake;
using occ::Band;

namespace {

const std::string kScenarioDir = std::string(FEARBRAKE_DATA_DIR) + "/scenarios/";

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void report(int criterion, const char* name, bool pass,
            const std::string& detail) {
  std::printf("[criterion %d] %s: %s (%s)\n", criterion, name,
              pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

}  // namespace

TEST_CASE("criterion 1: undesirability reference checks") {
  Stopwatch timer;
  const occ::FearModel amended;
  const occ::FearModel printed(occ::FearConfig{}, /*amended_rules=*/false);
  const auto& checks = occ::undesirability_reference_checks();

  int amended_hits = 0;
  std::vector<int> printed_failing;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    if (std::abs(amended.undesirability(c.imp_goal, c.ach_goal) - c.expected) <=
        0.03) {
      ++amended_hits;
    }
    if (std::abs(printed.undesirability(c.imp_goal, c.ach_goal) - c.expected) >
        0.03) {
      printed_failing.push_back(static_cast<int>(i) + 1);
    }
  }
  const bool pass = amended_hits == 14 &&
                    printed_failing == std::vector<int>{5, 8, 11, 14};
  std::string failing_list;
  for (int idx : printed_failing) {
    failing_list += (failing_list.empty() ? "" : ",") + std::to_string(idx);
  }
  // The published account of the unamended table only calls out checks 11
  // and 14; the printed rules actually miss {5, 8, 11, 14}, a strict
  // superset, so that is the frozen expectation here.
  report(1, "undesirability reference checks", pass,
         fmt("amended %d/14 within 0.03; printed misses {%s}; %.2fs",
             amended_hits, failing_list.c_str(), timer.seconds()));
  CHECK(pass);
  CHECK(timer.seconds() < 1.0);
}

TEST_CASE("criterion 2: centroid agrees with a finer integration") {
  Stopwatch timer;
  const auto out =
      fuzzy::uniform_partition("out", 0.0, 1.0, {"VL", "L", "M", "H", "VH"});
  std::mt19937 gen(987654);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int failures = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::array<double, 5> clips{};
    double total = 0.0;
    for (auto& c : clips) {
      c = uni(gen) < 0.3 ? 0.0 : uni(gen);
      total += c;
    }
    if (total == 0.0) clips[2] = 0.5;
    const auto mu_at = [&](double x) {
      double mu = 0.0;
      for (std::size_t t = 0; t < 5; ++t) {
        mu = std::max(mu, std::min(clips[t], out.terms[t].second(x)));
      }
      return mu;
    };
    std::vector<double> xs;
    std::vector<double> mu;
    xs.reserve(10001);
    mu.reserve(10001);
    for (int i = 0; i <= 10000; ++i) {
      xs.push_back(static_cast<double>(i) * 1e-4);
      mu.push_back(mu_at(xs.back()));
    }
    const double coarse = fuzzy::defuzzify_centroid(xs, mu);
    double mass = 0.0;
    double moment = 0.0;
    for (int i = 0; i <= 100000; ++i) {
      const double x = static_cast<double>(i) * 1e-5;
      const double m = mu_at(x);
      mass += m;
      moment += x * m;
    }
    const double err = std::abs(coarse - moment / mass);
    worst = std::max(worst, err);
    if (err > 1e-3) ++failures;
  }
  const bool pass = failures == 0 && timer.seconds() < 10.0;
  report(2, "centroid vs finer independent integration", pass,
         fmt("1000 trials, %d beyond 1e-3, worst gap %.2e; %.2fs", failures,
             worst, timer.seconds()));
  CHECK(pass);
}

TEST_CASE("criterion 3: boundary-term centroids") {
  Stopwatch timer;
  const occ::FearModel model;
  const double top = model.likelihood(0.0, 1.0);
  const double bottom = model.likelihood(1.0, 0.0);
  const bool pass =
      std::abs(top - 0.9167) <= 5e-3 && std::abs(bottom - 0.0833) <= 5e-3;
  report(3, "boundary-term centroids", pass,
         fmt("top %.4f vs 0.9167, bottom %.4f vs 0.0833; %.2fs", top, bottom,
             timer.seconds()));
  CHECK(pass);
}

TEST_CASE("criterion 4: stage monotonicity (strict)") {
  Stopwatch timer;
  const occ::FearModel model;
  long violations = 0;
  double worst = 0.0;
  const auto sweep = [&](auto eval, bool increasing) {
    for (double fixed : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      double prev = eval(0.0, fixed);
      for (int i = 1; i <= 100; ++i) {
        const double x = static_cast<double>(i) / 100.0;
        const double y = eval(x, fixed);
        const double step = increasing ? prev - y : y - prev;
        if (step > 0.0) {
          ++violations;
          worst = std::max(worst, step);
        }
        prev = y;
      }
    }
  };
  sweep([&](double x, double f) { return model.undesirability(x, f); }, true);
  sweep([&](double x, double f) { return model.undesirability(f, x); }, false);
  sweep([&](double x, double f) { return model.likelihood(x, f); }, false);
  sweep([&](double x, double f) { return model.likelihood(f, x); }, true);
  sweep([&](double x, double f) { return model.global_intensity(x, f); }, true);
  sweep([&](double x, double f) { return model.global_intensity(f, x); }, true);

  // Band classification must be monotone in the intensity itself.
  bool bands_monotone = true;
  const occ::IntensityBands bands;
  Band prev_band = bands.classify(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const Band b = bands.classify(static_cast<double>(i) / 1000.0);
    if (b < prev_band) bands_monotone = false;
    prev_band = b;
  }

  // Zero tolerance on purpose. Centroid defuzzification of this rulebase is
  // known to dip slightly where adjacent boundary rules share a consequent
  // (the clipped edge ramp shifts the centroid), so the stage sweeps fail
  // by up to about 2e-3 per 0.01 step. The failure is reported rather than
  // tolerated; see the repository notes on defuzzification wobble.
  const bool pass = violations == 0 && bands_monotone;
  report(4, "stage monotonicity (strict)", pass,
         fmt("%ld wrong-direction steps across 0.01 grids, worst %.2e; band "
             "classification %s; %.2fs",
             violations, worst, bands_monotone ? "monotone" : "NOT monotone",
             timer.seconds()));
  CHECK(pass);
}

TEST_CASE("criterion 5: car-following ensemble") {
  Stopwatch timer;
  const char* files[] = {"follow_sep5.json", "follow_sep9.json",
                         "follow_sep13.json", "follow_sep13_min60.json",
                         "follow_sep17.json"};
  bool pass = true;
  std::string detail;
  long collisions = 0;
  double worst_rho = -1.0;
  for (const char* file : files) {
    const auto config = sim::load_scenario(kScenarioDir + file);
    const auto runs = sim::run_repetitions(config, 50);
    for (const auto& run : runs) {
      if (run.collision) {
        ++collisions;
        pass = false;
      }
      worst_rho = std::max(worst_rho, run.spearman_gap_intensity);
      if (run.spearman_gap_intensity > -0.8) pass = false;
      if (config.separation_patches == 5.0) {
        // Tight start: fear must reach High while inside the stopping
        // distance, and relax to at most 0.5 afterwards.
        long high_tick = -1;
        for (const auto& row : run.log) {
          if (row.band >= Band::High && row.gap_patches < row.ssd_patches) {
            high_tick = row.tick;
            break;
          }
        }
        bool relaxed = false;
        if (high_tick >= 0) {
          for (const auto& row : run.log) {
            if (row.tick > high_tick && row.intensity <= 0.5) relaxed = true;
          }
        }
        if (high_tick < 0 || !relaxed) pass = false;
      }
      if (config.separation_patches == 17.0 && run.max_band > Band::Low) {
        pass = false;
      }
    }
  }
  if (timer.seconds() >= 60.0) pass = false;
  report(5, "car-following ensemble (5 configs x 50 seeds)", pass,
         fmt("%ld collisions, worst gap/fear rank correlation %.3f "
             "(need <= -0.8); %.2fs",
             collisions, worst_rho, timer.seconds()));
  CHECK(pass);
}

TEST_CASE("criterion 6: pedestrian emergency stop") {
  Stopwatch timer;
  const auto config = sim::load_scenario(kScenarioDir + "pedestrian_stop.json");
  const occ::FearModel shared(config.fear);
  bool pass = true;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto run = sim::run_scenario(config, seed, &shared);
    if (run.collision || run.log.size() != 80) pass = false;
    if (run.log.size() > 41) {
      if (run.log[40].command.kind != control::CommandKind::Brake) pass = false;
      if (run.log[40].band != Band::VeryHigh) pass = false;
      if (run.log[41].bullet_speed != 0.0) pass = false;
    } else {
      pass = false;
    }
  }
  report(6, "pedestrian emergency stop (10 seeds)", pass,
         fmt("brake on the appearance tick, stopped next tick, no "
             "collisions; %.2fs",
             timer.seconds()));
  CHECK(pass);
}

TEST_CASE("criterion 7: leader-aggressiveness learner") {
  Stopwatch timer;
  const auto aggressive =
      sim::load_scenario(kScenarioDir + "aggressive_leader.json");
  const auto run = sim::run_scenario(aggressive);
  bool pass = !run.collision && run.learner_activations >= 1;

  long first_aggressive = -1;
  for (const auto& row : run.log) {
    if (row.leader_mode == control::LeaderMode::Aggressive) {
      first_aggressive = row.tick;
      break;
    }
  }
  if (first_aggressive < 0) pass = false;
  long cautious_ticks = 0;
  for (const auto& row : run.log) {
    if (first_aggressive >= 0 && row.tick > first_aggressive &&
        row.tick <= first_aggressive + aggressive.agent.learner.hold_ticks &&
        row.leader_mode != control::LeaderMode::Aggressive) {
      pass = false;  // the latch must hold for its full duration
    }
    if (row.leader_mode == control::LeaderMode::Aggressive) {
      if (row.command.kind == control::CommandKind::Accelerate) {
        ++cautious_ticks;
        if (row.command.rate != aggressive.agent.cautious.accel_rate) {
          pass = false;
        }
      } else if (row.command.kind == control::CommandKind::Decelerate) {
        ++cautious_ticks;
        if (row.command.rate != aggressive.agent.cautious.decel_rate) {
          pass = false;
        }
      }
    }
  }
  if (cautious_ticks == 0) pass = false;

  const auto calm = sim::load_scenario(kScenarioDir + "calm_leader.json");
  const auto calm_run = sim::run_scenario(calm);
  if (calm_run.learner_activations != 0 || calm_run.collision) pass = false;

  report(7, "leader-aggressiveness learner", pass,
         fmt("stop-and-go leader: %ld activation(s), first at tick %ld, %ld "
             "cautious command ticks; steady leader: %ld activations; %.2fs",
             run.learner_activations, first_aggressive, cautious_ticks,
             calm_run.learner_activations, timer.seconds()));
  CHECK(pass);
}

TEST_CASE("criterion 8: bitwise reproducibility") {
  Stopwatch timer;
  const auto config = sim::load_scenario(kScenarioDir + "follow_sep5.json");
  std::ostringstream a;
  std::ostringstream b;
  sim::write_csv(a, sim::run_scenario(config, 7).log);
  sim::write_csv(b, sim::run_scenario(config, 7).log);
  const bool pass = !a.str().empty() && a.str() == b.str();
  report(8, "bitwise reproducibility of a seeded run", pass,
         fmt("two seed-7 runs, %zu-byte logs %s; %.2fs", a.str().size(),
             pass ? "identical" : "DIFFER", timer.seconds()));
  CHECK(pass);
}

TEST_CASE("criterion 9: stopping-distance formula") {
  Stopwatch timer;
  const double at_zero = sim::ssd_feet(0.0);
  const double at_ten = sim::ssd_feet(10.0, 0.45, 11.2);
  const bool pass = at_zero == 0.0 && std::abs(at_ten - 16.2) <= 0.1;
  report(9, "stopping-distance formula", pass,
         fmt("ssd(0) = %g, ssd(10) = %.4f ft vs 16.2 +/- 0.1; %.2fs", at_zero,
             at_ten, timer.seconds()));
  CHECK(pass);
}
