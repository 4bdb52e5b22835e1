#pragma once

#include <deque>
#include <stdexcept>
#include <utility>

#include "fearbrake/fear.hpp"

namespace fearbrake::control {

/// Thrown for invalid controller configuration (non-positive limits,
/// negative rates, bad learner window).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vehicles advance speed/100 patches per tick: with 1 patch = 100 feet,
/// 1 mph maps to 1 foot per tick at the prototype's tick scale.
inline constexpr double kSpeedToPatchesPerTick = 0.01;

enum class CommandKind { Accelerate, Decelerate, Brake, Hold };

const char* command_name(CommandKind kind);

/// One actuator instruction. `rate` is the per-tick slider value (speed
/// change = rate * 100 mph); it is 0 for Brake and Hold.
struct MotorCommand {
  CommandKind kind = CommandKind::Hold;
  double rate = 0.0;
};

/// A pair of per-tick slider rates. The normal regime pairs high
/// acceleration with the scenario's service deceleration; the cautious
/// regime pairs low acceleration with high deceleration.
struct DrivingRegime {
  double accel_rate = 0.05;
  double decel_rate = 0.05;
};

enum class LeaderMode { Normal, Aggressive };

const char* leader_mode_name(LeaderMode mode);

/// Leader-aggressiveness learner parameters. A disabled learner never
/// leaves Normal mode.
struct LearnerConfig {
  bool enabled = true;
  long window_ticks = 500;
  int switch_threshold = 3;
  long hold_ticks = 250;

  void validate() const;  // throws ConfigError
};

/// Rolling record of recent bands plus the latched mode. Aggressive mode
/// holds until hold_until_tick even if the switching stops.
struct LearnerState {
  std::deque<std::pair<long, occ::Band>> band_history;
  LeaderMode leader_mode = LeaderMode::Normal;
  long hold_until_tick = -1;
};

/// What the sensor reports each tick. Gap is to the nearest obstacle
/// ahead (leader, or a detected pedestrian if closer), in patches.
struct SensedState {
  double gap = 0.0;
  double own_speed = 0.0;      // mph
  double closing_speed = 0.0;  // mph, own minus obstacle; > 0 when closing
  bool gap_opening = false;    // gap grew since the previous tick
  bool pedestrian_detected = false;
};

/// Normalization limits for mapping sensed kinematics onto the [0,1]
/// appraisal inputs. ssd_required_patches is the stopping distance the
/// controller treats as its safety goal; the 3.4-patch default is the
/// reaction-plus-braking distance of a roughly 56 mph approach.
struct AppraisalLimits {
  double d_max = 20.0;    // patches
  double v_max = 100.0;   // mph
  double ttc_max = 30.0;  // ticks
  double ssd_required_patches = 3.4;
  double margin = 50.0;  // widens the goal-importance ramp to margin * ssd
  double sense_of_reality = 1.0;

  void validate() const;  // throws ConfigError
};

/// Maps raw sensed kinematics to the six appraisal inputs: clamped ratios
/// against d_max / v_max, the stopping-distance goal, and time-to-collision
/// against ttc_max (proximity is 0 when not closing).
occ::AppraisalInputs derive_appraisal(const SensedState& sensed,
                                      const AppraisalLimits& limits);

/// Appends (tick, band), drops entries older than the window, and counts
/// direct High<->Medium transitions between consecutive samples. Reaching
/// the threshold latches Aggressive until tick + hold_ticks; the mode
/// reverts to Normal once the hold expires without a new qualifying count.
LearnerState update_learner(LearnerState learner, occ::Band band, long tick,
                            const LearnerConfig& config);

/// Band-to-command policy. VeryLow/Low accelerate at the normal rate;
/// Medium accelerates at the cautious rate only while the gap opens and
/// otherwise decelerates at the normal rate; High/VeryHigh brake. An
/// Aggressive learner forces the cautious regime for every non-braking
/// band.
MotorCommand select_driving_rule(occ::Band band, const LearnerState& learner,
                                 const DrivingRegime& normal,
                                 const DrivingRegime& cautious,
                                 bool gap_opening);

/// Full per-agent configuration minus the fear model itself.
struct AgentConfig {
  AppraisalLimits limits;
  DrivingRegime normal{0.05, 0.05};
  DrivingRegime cautious{0.03, 0.05};
  LearnerConfig learner;

  void validate() const;  // throws ConfigError
};

/// Everything one control step produces, for logging.
struct AgentStepResult {
  occ::AppraisalInputs appraisal;
  occ::FearState fear;
  LearnerState learner;
  MotorCommand command;
};

/// One full control step: derive_appraisal, appraise, update_learner,
/// select_driving_rule, in that order. A detected pedestrian forces the
/// top band and an immediate Brake on the same tick. Regardless of band,
/// the command is overridden to Brake when the gap would close completely
/// within one tick at the current closing speed.
AgentStepResult step_agent(const occ::FearModel& model, LearnerState learner,
                           const SensedState& sensed, long tick,
                           const AgentConfig& config);

}  // namespace fearbrake::control
