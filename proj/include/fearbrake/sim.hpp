#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fearbrake/controller.hpp"
#include "fearbrake/fear.hpp"

namespace fearbrake::sim {

inline constexpr double kFeetPerPatch = 100.0;

double patches_to_feet(double patches);
double feet_to_patches(double feet);

/// Stopping sight distance: reaction travel plus braking distance,
/// 1.47 * V * t + 1.075 * V^2 / a, in feet. Throws ConfigError for
/// non-positive deceleration or negative speed.
double ssd_feet(double speed_mph, double reaction_time_s = 0.45,
                double decel_ftps2 = 11.2);

/// Overtaking sight distance: V_b * t + 2s + V_b * sqrt(4s / a), in the
/// caller's consistent length unit. Implemented for formula coverage; no
/// scenario consumes it.
double osd(double v_b, double reaction_time_s, double spacing_s,
           double max_accel);

/// Mersenne Twister (MT19937) seeded with the reference init_by_array
/// scheme over the seed's 32-bit words; next_double draws two words and
/// keeps 53 mantissa bits, uniform on [0, 1).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  double next_double();
  std::uint32_t next_u32();

 private:
  void init_genrand(std::uint32_t s);
  void init_by_array(const std::vector<std::uint32_t>& key);

  std::array<std::uint32_t, 624> mt_{};
  int mti_ = 625;
};

enum class VehicleRole { Bullet, Target };

struct VehicleState {
  double position = 0.0;  // patches
  double speed = 0.0;     // mph
  double min_speed = 0.0;
  double max_speed = 0.0;
  double accel_rate = 0.0;  // per-tick slider, speed delta = rate * 100
  double decel_rate = 0.0;
  VehicleRole role = VehicleRole::Bullet;
};

enum class LeaderProfileType { RandomWalk, JitteredHold, Scripted, Constant };

/// How the target vehicle chooses its speed each tick. RandomWalk and
/// JitteredHold draw exactly one RNG value per tick; Scripted and Constant
/// draw none.
struct LeaderProfile {
  LeaderProfileType type = LeaderProfileType::Constant;
  // RandomWalk: cumulative accelerate/decelerate choices, clamped.
  double start_speed = 0.0;
  double low = 0.0;
  double high = 0.0;
  double p_accel = 0.0;
  double p_decel = 0.0;
  // JitteredHold: base speed plus independent uniform jitter.
  double base = 0.0;
  double jitter = 0.0;
  // Scripted: explicit speed per tick; the last entry repeats.
  std::vector<double> speeds;
  // Constant.
  double speed = 0.0;

  double initial_speed() const;
  /// Speed for tick next_tick, given the current speed. The walk applies
  /// the target's slider rates scaled by 100.
  double next(double current, SeededRng& rng, double accel_rate,
              double decel_rate, long next_tick) const;
};

struct PedestrianEvent {
  long tick = 0;           // appearance tick
  double gap_patches = 0;  // ahead of the bullet at appearance
};

/// A registered pedestrian event. The position is fixed relative to the
/// bullet at the appearance tick, then stays put.
struct Pedestrian {
  long appearance_tick = 0;
  double gap_at_appearance = 0.0;
  double position = 0.0;
  bool placed = false;
};

/// One full scenario: world geometry, vehicle limits, leader profile,
/// optional pedestrian, agent configuration, fear weights and seed.
struct ScenarioConfig {
  std::string id = "scenario";
  long ticks = 100;
  double tick_ms = 1.0;
  std::uint64_t seed = 0;
  double separation_patches = 5.0;
  double min_velocity = 10.0;  // mph
  double max_velocity = 100.0;
  double accel_bullet = 0.06;  // per-tick slider rates
  double decel_bullet = 0.03;
  double accel_target = 0.03;
  double decel_target = 0.03;
  double reaction_time_s = 0.45;
  double decel_ftps2 = 11.2;
  double sensing_range_patches = 10.0;
  LeaderProfile leader;
  std::optional<PedestrianEvent> pedestrian;
  occ::FearConfig fear;
  control::AgentConfig agent;

  void validate() const;  // throws ConfigError listing bad fields
};

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& json_text);

struct WorldState {
  VehicleState bullet;
  VehicleState target;
  std::optional<Pedestrian> pedestrian;
  long tick = 0;
  bool collided = false;
  double prev_gap = 0.0;
  SeededRng rng;
};

WorldState make_world(const ScenarioConfig& config, std::uint64_t seed);

/// Registers a stationary obstacle that the sensor starts reporting at
/// the given tick. Throws ConfigError if the tick has already passed.
void inject_pedestrian(WorldState& world, long tick, double gap_patches);

/// Advances the world one tick: the target follows its leader profile,
/// the bullet applies the command (Brake zeroes the speed immediately,
/// Accelerate/Decelerate move it by rate * 100 within its speed band,
/// except that decelerating from below the minimum is allowed to reach 0),
/// both positions advance by speed / 100 patches, and a collision is
/// recorded at gap <= 0. Throws ConfigError on a collided world.
void step_world(WorldState& world, const ScenarioConfig& config,
                const control::MotorCommand& command);

/// Everything logged for one tick, in CSV column order.
struct TickLog {
  long tick = 0;
  double time_ms = 0.0;
  double bullet_position = 0.0;
  double bullet_speed = 0.0;
  double target_position = 0.0;
  double target_speed = 0.0;
  double gap_patches = 0.0;
  double gap_feet = 0.0;
  double ssd_feet = 0.0;
  double ssd_patches = 0.0;
  double undesirability = 0.0;
  double likelihood = 0.0;
  double global_intensity = 0.0;
  double potential = 0.0;
  double intensity = 0.0;
  occ::Band band = occ::Band::VeryLow;
  control::MotorCommand command;
  control::LeaderMode leader_mode = control::LeaderMode::Normal;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<TickLog> log;
  bool collision = false;
  double min_gap = 0.0;
  occ::Band max_band = occ::Band::VeryLow;
  long learner_activations = 0;  // Normal -> Aggressive transitions
  double spearman_gap_intensity = 0.0;
};

/// Runs one scenario to completion (configured ticks, or collision). A
/// shared FearModel may be supplied to reuse its cache across runs; it
/// must be built from the same fear config.
RunResult run_scenario(const ScenarioConfig& config, std::uint64_t seed,
                       const occ::FearModel* shared_model = nullptr);
RunResult run_scenario(const ScenarioConfig& config);

/// Repetition i runs with seed config.seed + i; one fear model is shared.
std::vector<RunResult> run_repetitions(const ScenarioConfig& config,
                                       int repetitions);

/// Spearman rank correlation with average ranks for ties. Returns 0 when
/// either series is constant.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

void write_csv(std::ostream& out, const std::vector<TickLog>& log);

/// Static SVG 1.1 line chart: fear intensity and gap versus tick.
void write_svg(std::ostream& out, const std::vector<TickLog>& log,
               const std::string& title);

/// One-object JSON summary: seed, ticks, collision flag, min gap, max
/// band, learner activations, rank correlation.
std::string summary_json(const RunResult& result);

}  // namespace fearbrake::sim
