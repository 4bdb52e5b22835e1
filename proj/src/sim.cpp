#include "fearbrake/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace fearbrake::sim {

using control::ConfigError;

double patches_to_feet(double patches) { return patches * kFeetPerPatch; }
double feet_to_patches(double feet) { return feet / kFeetPerPatch; }

double ssd_feet(double speed_mph, double reaction_time_s,
                double decel_ftps2) {
  if (decel_ftps2 <= 0.0) throw ConfigError("ssd deceleration must be > 0");
  if (speed_mph < 0.0) throw ConfigError("ssd speed must be >= 0");
  return 1.47 * speed_mph * reaction_time_s +
         1.075 * speed_mph * speed_mph / decel_ftps2;
}

double osd(double v_b, double reaction_time_s, double spacing_s,
           double max_accel) {
  if (max_accel <= 0.0) throw ConfigError("osd acceleration must be > 0");
  if (v_b < 0.0 || reaction_time_s < 0.0 || spacing_s < 0.0) {
    throw ConfigError("osd inputs must be non-negative");
  }
  return v_b * reaction_time_s + 2.0 * spacing_s +
         v_b * std::sqrt(4.0 * spacing_s / max_accel);
}

// ---------------------------------------------------------------------
// MT19937, reference constants. Seeding follows init_by_array over the
// seed's 32-bit words so runs are reproducible across platforms.

SeededRng::SeededRng(std::uint64_t seed) {
  std::vector<std::uint32_t> key;
  key.push_back(static_cast<std::uint32_t>(seed & 0xffffffffULL));
  if (seed >> 32) key.push_back(static_cast<std::uint32_t>(seed >> 32));
  init_by_array(key);
}

void SeededRng::init_genrand(std::uint32_t s) {
  mt_[0] = s;
  for (int i = 1; i < 624; ++i) {
    mt_[i] = 1812433253UL * (mt_[i - 1] ^ (mt_[i - 1] >> 30)) +
             static_cast<std::uint32_t>(i);
  }
  mti_ = 624;
}

void SeededRng::init_by_array(const std::vector<std::uint32_t>& key) {
  init_genrand(19650218UL);
  std::size_t i = 1;
  std::size_t j = 0;
  std::size_t k = std::max<std::size_t>(624, key.size());
  for (; k; --k) {
    mt_[i] = (mt_[i] ^ ((mt_[i - 1] ^ (mt_[i - 1] >> 30)) * 1664525UL)) +
             key[j] + static_cast<std::uint32_t>(j);
    ++i;
    ++j;
    if (i >= 624) {
      mt_[0] = mt_[623];
      i = 1;
    }
    if (j >= key.size()) j = 0;
  }
  for (k = 623; k; --k) {
    mt_[i] = (mt_[i] ^ ((mt_[i - 1] ^ (mt_[i - 1] >> 30)) * 1566083941UL)) -
             static_cast<std::uint32_t>(i);
    ++i;
    if (i >= 624) {
      mt_[0] = mt_[623];
      i = 1;
    }
  }
  mt_[0] = 0x80000000UL;
}

std::uint32_t SeededRng::next_u32() {
  constexpr std::uint32_t kMatrixA = 0x9908b0dfUL;
  constexpr std::uint32_t kUpperMask = 0x80000000UL;
  constexpr std::uint32_t kLowerMask = 0x7fffffffUL;
  if (mti_ >= 624) {
    for (int kk = 0; kk < 624 - 397; ++kk) {
      const std::uint32_t y =
          (mt_[kk] & kUpperMask) | (mt_[kk + 1] & kLowerMask);
      mt_[kk] = mt_[kk + 397] ^ (y >> 1) ^ ((y & 1U) ? kMatrixA : 0U);
    }
    for (int kk = 624 - 397; kk < 623; ++kk) {
      const std::uint32_t y =
          (mt_[kk] & kUpperMask) | (mt_[kk + 1] & kLowerMask);
      mt_[kk] = mt_[kk + (397 - 624)] ^ (y >> 1) ^ ((y & 1U) ? kMatrixA : 0U);
    }
    const std::uint32_t y = (mt_[623] & kUpperMask) | (mt_[0] & kLowerMask);
    mt_[623] = mt_[396] ^ (y >> 1) ^ ((y & 1U) ? kMatrixA : 0U);
    mti_ = 0;
  }
  std::uint32_t y = mt_[mti_++];
  y ^= (y >> 11);
  y ^= (y << 7) & 0x9d2c5680UL;
  y ^= (y << 15) & 0xefc60000UL;
  y ^= (y >> 18);
  return y;
}

double SeededRng::next_double() {
  const std::uint32_t a = next_u32() >> 5;
  const std::uint32_t b = next_u32() >> 6;
  return (a * 67108864.0 + b) * (1.0 / 9007199254740992.0);
}

// ---------------------------------------------------------------------
// Leader profiles.

double LeaderProfile::initial_speed() const {
  switch (type) {
    case LeaderProfileType::RandomWalk: return start_speed;
    case LeaderProfileType::JitteredHold: return base;
    case LeaderProfileType::Scripted: return speeds.empty() ? 0.0 : speeds[0];
    case LeaderProfileType::Constant: return speed;
  }
  return 0.0;
}

double LeaderProfile::next(double current, SeededRng& rng, double accel_rate,
                           double decel_rate, long next_tick) const {
  switch (type) {
    case LeaderProfileType::RandomWalk: {
      const double r = rng.next_double();
      if (r < p_accel) {
        return std::min(current + accel_rate * kFeetPerPatch, high);
      }
      if (r < p_accel + p_decel) {
        return std::max(current - decel_rate * kFeetPerPatch, low);
      }
      return current;
    }
    case LeaderProfileType::JitteredHold:
      return base + jitter * (2.0 * rng.next_double() - 1.0);
    case LeaderProfileType::Scripted: {
      if (speeds.empty()) return 0.0;
      const auto idx = std::min<std::size_t>(
          static_cast<std::size_t>(std::max<long>(next_tick, 0)),
          speeds.size() - 1);
      return speeds[idx];
    }
    case LeaderProfileType::Constant: return speed;
  }
  return current;
}

// ---------------------------------------------------------------------
// Scenario configuration.

void ScenarioConfig::validate() const {
  std::vector<std::string> errors;
  auto require = [&](bool ok, const std::string& message) {
    if (!ok) errors.push_back(message);
  };
  require(ticks >= 0, "ticks: must be >= 0");
  require(tick_ms > 0.0, "tick_ms: must be > 0");
  require(separation_patches >= 1.0 && separation_patches <= 20.0,
          "separation_patches: must lie in [1, 20]");
  require(min_velocity >= 0.0 && max_velocity >= min_velocity,
          "min_velocity/max_velocity: need 0 <= min <= max");
  for (const auto& [name, rate] :
       std::initializer_list<std::pair<const char*, double>>{
           {"bullet.accel_rate", accel_bullet},
           {"bullet.decel_rate", decel_bullet},
           {"target.accel_rate", accel_target},
           {"target.decel_rate", decel_target}}) {
    require(rate >= 0.0 && rate <= 0.1,
            std::string(name) + ": must lie in [0, 0.1]");
  }
  require(reaction_time_s > 0.0, "reaction_time_s: must be > 0");
  require(decel_ftps2 > 0.0, "decel_ftps2: must be > 0");
  require(sensing_range_patches >= 0.0,
          "sensing_range_patches: must be >= 0");
  switch (leader.type) {
    case LeaderProfileType::RandomWalk:
      require(leader.p_accel >= 0.0 && leader.p_decel >= 0.0 &&
                  leader.p_accel + leader.p_decel <= 1.0,
              "leader.p_accel/p_decel: need non-negative values summing "
              "to at most 1");
      require(leader.low <= leader.high, "leader.low/high: need low <= high");
      break;
    case LeaderProfileType::JitteredHold:
      require(leader.jitter >= 0.0, "leader.jitter: must be >= 0");
      break;
    case LeaderProfileType::Scripted:
      require(!leader.speeds.empty(), "leader.speeds: must not be empty");
      break;
    case LeaderProfileType::Constant:
      require(leader.speed >= 0.0, "leader.speed: must be >= 0");
      break;
  }
  if (pedestrian) {
    require(pedestrian->tick >= 0, "pedestrian.tick: must be >= 0");
    require(pedestrian->gap_patches > 0.0,
            "pedestrian.gap_patches: must be > 0");
  }
  try {
    fear.validate();
  } catch (const std::exception& e) {
    errors.push_back(std::string("fear: ") + e.what());
  }
  try {
    agent.validate();
  } catch (const std::exception& e) {
    errors.push_back(std::string("agent: ") + e.what());
  }
  if (!errors.empty()) {
    std::string joined = "invalid scenario config:";
    for (const auto& e : errors) joined += "\n  - " + e;
    throw ConfigError(joined);
  }
}

namespace {

using nlohmann::json;

double get_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

LeaderProfile leader_from_json(const json& j) {
  LeaderProfile p;
  const auto type = j.at("type").get<std::string>();
  if (type == "random_walk") {
    p.type = LeaderProfileType::RandomWalk;
    p.start_speed = j.at("start_speed").get<double>();
    p.low = j.at("low").get<double>();
    p.high = j.at("high").get<double>();
    p.p_accel = j.at("p_accel").get<double>();
    p.p_decel = j.at("p_decel").get<double>();
  } else if (type == "jittered_hold") {
    p.type = LeaderProfileType::JitteredHold;
    p.base = j.at("base").get<double>();
    p.jitter = j.at("jitter").get<double>();
  } else if (type == "scripted") {
    p.type = LeaderProfileType::Scripted;
    p.speeds = j.at("speeds").get<std::vector<double>>();
  } else if (type == "constant") {
    p.type = LeaderProfileType::Constant;
    p.speed = j.at("speed").get<double>();
  } else {
    throw ConfigError("leader.type: unknown profile '" + type + "'");
  }
  return p;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario JSON parse error: ") + e.what());
  }
  ScenarioConfig c;
  try {
    if (!j.contains("velocity_unit") ||
        j.at("velocity_unit").get<std::string>() != "mph") {
      throw ConfigError(
          "velocity_unit: must be declared explicitly and be \"mph\"");
    }
    c.id = j.value("id", std::string("scenario"));
    c.ticks = j.value("ticks", 100L);
    c.tick_ms = get_or(j, "tick_ms", 1.0);
    c.seed = j.value("seed", std::uint64_t{0});
    c.separation_patches = j.at("separation_patches").get<double>();
    const auto& bullet = j.at("bullet");
    c.min_velocity = bullet.at("min_speed").get<double>();
    c.max_velocity = bullet.at("max_speed").get<double>();
    c.accel_bullet = bullet.at("accel_rate").get<double>();
    c.decel_bullet = bullet.at("decel_rate").get<double>();
    const auto& target = j.at("target");
    c.accel_target = target.at("accel_rate").get<double>();
    c.decel_target = target.at("decel_rate").get<double>();
    c.reaction_time_s = get_or(j, "reaction_time_s", 0.45);
    c.decel_ftps2 = get_or(j, "decel_ftps2", 11.2);
    c.sensing_range_patches = get_or(j, "sensing_range_patches", 10.0);
    c.leader = leader_from_json(j.at("leader"));
    if (j.contains("pedestrian")) {
      PedestrianEvent ev;
      ev.tick = j.at("pedestrian").at("tick").get<long>();
      ev.gap_patches = j.at("pedestrian").at("gap_patches").get<double>();
      c.pedestrian = ev;
    }
    if (j.contains("fear")) {
      const auto& f = j.at("fear");
      if (f.contains("weights")) {
        c.fear.w_undesirability = f.at("weights").at("undesirability");
        c.fear.w_likelihood = f.at("weights").at("likelihood");
        c.fear.w_global_intensity = f.at("weights").at("global_intensity");
      }
      c.fear.threshold = get_or(f, "threshold", c.fear.threshold);
    }
    if (j.contains("appraisal")) {
      const auto& a = j.at("appraisal");
      auto& lim = c.agent.limits;
      lim.d_max = get_or(a, "d_max", lim.d_max);
      lim.v_max = get_or(a, "v_max", lim.v_max);
      lim.ttc_max = get_or(a, "ttc_max", lim.ttc_max);
      lim.ssd_required_patches =
          get_or(a, "ssd_required_patches", lim.ssd_required_patches);
      lim.margin = get_or(a, "margin", lim.margin);
      lim.sense_of_reality =
          get_or(a, "sense_of_reality", lim.sense_of_reality);
    }
    c.agent.normal = {c.accel_bullet, c.decel_bullet};
    if (j.contains("controller")) {
      const auto& ctl = j.at("controller");
      c.agent.cautious.accel_rate =
          get_or(ctl, "cautious_accel", c.agent.cautious.accel_rate);
      c.agent.cautious.decel_rate =
          get_or(ctl, "cautious_decel", c.agent.cautious.decel_rate);
    }
    if (j.contains("learner")) {
      const auto& l = j.at("learner");
      auto& lc = c.agent.learner;
      lc.enabled = l.value("enabled", lc.enabled);
      lc.window_ticks = l.value("window_ticks", lc.window_ticks);
      lc.switch_threshold = l.value("switch_threshold", lc.switch_threshold);
      lc.hold_ticks = l.value("hold_ticks", lc.hold_ticks);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario config: ") + e.what());
  }
  c.validate();
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------
// World stepping.

WorldState make_world(const ScenarioConfig& config, std::uint64_t seed) {
  WorldState w{VehicleState{}, VehicleState{}, std::nullopt, 0,     false,
               config.separation_patches,     SeededRng(seed)};
  w.bullet = {0.0,
              config.min_velocity,
              config.min_velocity,
              config.max_velocity,
              config.accel_bullet,
              config.decel_bullet,
              VehicleRole::Bullet};
  w.target = {config.separation_patches,
              config.leader.initial_speed(),
              config.min_velocity,
              config.max_velocity,
              config.accel_target,
              config.decel_target,
              VehicleRole::Target};
  if (config.pedestrian) {
    inject_pedestrian(w, config.pedestrian->tick,
                      config.pedestrian->gap_patches);
  }
  return w;
}

void inject_pedestrian(WorldState& world, long tick, double gap_patches) {
  if (tick < world.tick) {
    throw ConfigError("pedestrian tick has already passed");
  }
  world.pedestrian = Pedestrian{tick, gap_patches, 0.0, false};
}

void step_world(WorldState& world, const ScenarioConfig& config,
                const control::MotorCommand& command) {
  if (world.collided) {
    throw std::logic_error("cannot step a collided world");
  }
  const double gap = world.target.position - world.bullet.position;
  world.target.speed =
      config.leader.next(world.target.speed, world.rng, config.accel_target,
                         config.decel_target, world.tick + 1);
  auto& bullet = world.bullet;
  switch (command.kind) {
    case control::CommandKind::Brake:
      bullet.speed = 0.0;
      break;
    case control::CommandKind::Accelerate:
      bullet.speed = std::max(
          std::min(bullet.speed + command.rate * kFeetPerPatch,
                   bullet.max_speed),
          bullet.min_speed);
      break;
    case control::CommandKind::Decelerate:
      // Decelerating is allowed to continue to 0 once already below the
      // operating minimum (for example right after a brake).
      bullet.speed =
          std::max(bullet.speed - command.rate * kFeetPerPatch,
                   bullet.speed < bullet.min_speed ? 0.0 : bullet.min_speed);
      break;
    case control::CommandKind::Hold:
      break;
  }
  world.prev_gap = gap;
  bullet.position += bullet.speed / kFeetPerPatch;
  world.target.position += world.target.speed / kFeetPerPatch;
  ++world.tick;
  if (world.target.position - bullet.position <= 0.0) world.collided = true;
  if (world.pedestrian && world.pedestrian->placed &&
      world.pedestrian->position - bullet.position <= 0.0) {
    world.collided = true;
  }
}

// ---------------------------------------------------------------------
// Scenario runner.

namespace {

constexpr double kGapEps = 1e-12;

void place_pedestrian_if_due(WorldState& world) {
  if (world.pedestrian && !world.pedestrian->placed &&
      world.tick >= world.pedestrian->appearance_tick) {
    world.pedestrian->position =
        world.bullet.position + world.pedestrian->gap_at_appearance;
    world.pedestrian->placed = true;
  }
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, std::uint64_t seed,
                       const occ::FearModel* shared_model) {
  config.validate();
  std::unique_ptr<occ::FearModel> local;
  if (!shared_model) {
    local = std::make_unique<occ::FearModel>(config.fear);
    shared_model = local.get();
  }
  WorldState world = make_world(config, seed);
  control::LearnerState learner;
  RunResult result;
  result.seed = seed;
  for (long k = 0; k < config.ticks; ++k) {
    place_pedestrian_if_due(world);
    const double gap = world.target.position - world.bullet.position;
    control::SensedState sensed;
    sensed.gap = gap;
    sensed.own_speed = world.bullet.speed;
    sensed.closing_speed = world.bullet.speed - world.target.speed;
    sensed.gap_opening = gap > world.prev_gap + kGapEps;
    if (world.pedestrian && world.pedestrian->placed) {
      const double ped_gap =
          world.pedestrian->position - world.bullet.position;
      if (ped_gap <= 0.0) {
        result.collision = true;
        world.collided = true;
        break;
      }
      if (ped_gap <= config.sensing_range_patches && ped_gap < gap) {
        sensed.pedestrian_detected = true;
        sensed.gap = ped_gap;
        sensed.closing_speed = world.bullet.speed;
      }
    }
    const control::LeaderMode mode_before = learner.leader_mode;
    auto step = control::step_agent(*shared_model, std::move(learner), sensed,
                                    k, config.agent);
    learner = std::move(step.learner);
    if (mode_before == control::LeaderMode::Normal &&
        learner.leader_mode == control::LeaderMode::Aggressive) {
      ++result.learner_activations;
    }
    TickLog row;
    row.tick = k;
    row.time_ms = static_cast<double>(k) * config.tick_ms;
    row.bullet_position = world.bullet.position;
    row.bullet_speed = world.bullet.speed;
    row.target_position = world.target.position;
    row.target_speed = world.target.speed;
    row.gap_patches = gap;
    row.gap_feet = patches_to_feet(gap);
    row.ssd_feet =
        ssd_feet(world.bullet.speed, config.reaction_time_s, config.decel_ftps2);
    row.ssd_patches = feet_to_patches(row.ssd_feet);
    row.undesirability = step.fear.undesirability;
    row.likelihood = step.fear.likelihood;
    row.global_intensity = step.fear.global_intensity;
    row.potential = step.fear.potential;
    row.intensity = step.fear.intensity;
    row.band = step.fear.band;
    row.command = step.command;
    row.leader_mode = learner.leader_mode;
    result.log.push_back(row);
    step_world(world, config, step.command);
    if (world.collided) {
      result.collision = true;
      break;
    }
  }
  result.min_gap = 0.0;
  if (!result.log.empty()) {
    std::vector<double> gaps;
    std::vector<double> intensities;
    gaps.reserve(result.log.size());
    intensities.reserve(result.log.size());
    result.min_gap = result.log.front().gap_patches;
    for (const auto& row : result.log) {
      gaps.push_back(row.gap_patches);
      intensities.push_back(row.intensity);
      result.min_gap = std::min(result.min_gap, row.gap_patches);
      result.max_band = std::max(result.max_band, row.band);
    }
    result.spearman_gap_intensity = spearman(gaps, intensities);
  }
  return result;
}

RunResult run_scenario(const ScenarioConfig& config) {
  return run_scenario(config, config.seed, nullptr);
}

std::vector<RunResult> run_repetitions(const ScenarioConfig& config,
                                       int repetitions) {
  config.validate();
  occ::FearModel shared(config.fear);
  std::vector<RunResult> results;
  results.reserve(static_cast<std::size_t>(repetitions));
  for (int i = 0; i < repetitions; ++i) {
    results.push_back(run_scenario(
        config, config.seed + static_cast<std::uint64_t>(i), &shared));
  }
  return results;
}

// ---------------------------------------------------------------------
// Statistics and output formats.

namespace {

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) /
                            2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char ch : raw) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) return 0.0;
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += ra[i];
    mean_b += rb[i];
  }
  mean_a /= n;
  mean_b /= n;
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = ra[i] - mean_a;
    const double db = rb[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a <= 0.0 || var_b <= 0.0) return 0.0;
  return cov / std::sqrt(var_a * var_b);
}

void write_csv(std::ostream& out, const std::vector<TickLog>& log) {
  out << "tick,time_ms,bullet_position_patches,bullet_speed_mph,"
         "target_position_patches,target_speed_mph,gap_patches,gap_feet,"
         "ssd_feet,ssd_patches,undesirability,likelihood,global_intensity,"
         "potential,intensity,band,command,command_rate,leader_mode\r\n";
  for (const auto& row : log) {
    out << row.tick << ',' << format_double(row.time_ms) << ','
        << format_double(row.bullet_position) << ','
        << format_double(row.bullet_speed) << ','
        << format_double(row.target_position) << ','
        << format_double(row.target_speed) << ','
        << format_double(row.gap_patches) << ','
        << format_double(row.gap_feet) << ','
        << format_double(row.ssd_feet) << ','
        << format_double(row.ssd_patches) << ','
        << format_double(row.undesirability) << ','
        << format_double(row.likelihood) << ','
        << format_double(row.global_intensity) << ','
        << format_double(row.potential) << ','
        << format_double(row.intensity) << ','
        << csv_field(occ::band_name(row.band)) << ','
        << csv_field(control::command_name(row.command.kind)) << ','
        << format_double(row.command.rate) << ','
        << csv_field(control::leader_mode_name(row.leader_mode)) << "\r\n";
  }
}

void write_svg(std::ostream& out, const std::vector<TickLog>& log,
               const std::string& title) {
  constexpr double kWidth = 900.0;
  constexpr double kHeight = 420.0;
  constexpr double kLeft = 60.0;
  constexpr double kRight = 840.0;
  constexpr double kTop = 50.0;
  constexpr double kBottom = 370.0;
  double max_gap = 1.0;
  for (const auto& row : log) max_gap = std::max(max_gap, row.gap_patches);
  const double ticks = log.empty()
                           ? 1.0
                           : std::max<double>(1.0,
                                 static_cast<double>(log.back().tick));
  auto x_of = [&](double tick) {
    return kLeft + (kRight - kLeft) * tick / ticks;
  };
  auto y_of = [&](double value, double scale) {
    return kBottom - (kBottom - kTop) * value / scale;
  };
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      << "width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "  <text x=\"" << kWidth / 2
      << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << title << "</text>\n"
      << "  <line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\""
      << kRight << "\" y2=\"" << kBottom
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
      << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kBottom << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  auto polyline = [&](const char* color, double scale, bool use_gap) {
    out << "  <polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& row : log) {
      const double v = use_gap ? row.gap_patches : row.intensity;
      out << format_double(x_of(static_cast<double>(row.tick))) << ','
          << format_double(y_of(v, scale)) << ' ';
    }
    out << "\"/>\n";
  };
  if (!log.empty()) {
    polyline("#c0392b", 1.0, false);   // fear intensity, [0,1] axis
    polyline("#2471a3", max_gap, true);  // gap, scaled to its own maximum
  }
  out << "  <text x=\"" << kLeft << "\" y=\"" << kBottom + 24
      << "\" font-family=\"sans-serif\" font-size=\"12\">tick</text>\n"
      << "  <text x=\"" << kRight - 220 << "\" y=\"" << kTop
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#c0392b\">"
         "fear intensity (0-1)</text>\n"
      << "  <text x=\"" << kRight - 220 << "\" y=\"" << kTop + 16
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#2471a3\">"
         "gap (patches, scaled to max "
      << format_double(max_gap) << ")</text>\n"
      << "</svg>\n";
}

std::string summary_json(const RunResult& result) {
  nlohmann::json j;
  j["seed"] = result.seed;
  j["ticks"] = result.log.size();
  j["collision"] = result.collision;
  j["min_gap_patches"] = result.min_gap;
  j["max_band"] = occ::band_name(result.max_band);
  j["learner_activations"] = result.learner_activations;
  j["spearman_gap_intensity"] = result.spearman_gap_intensity;
  return j.dump(2);
}

}  // namespace fearbrake::sim
