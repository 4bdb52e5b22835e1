#include "fearbrake/controller.hpp"

#include <algorithm>
#include <cmath>

namespace fearbrake::control {

namespace {

constexpr double kClosingEps = 1e-9;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

bool is_high_medium_pair(occ::Band a, occ::Band b) {
  return (a == occ::Band::High && b == occ::Band::Medium) ||
         (a == occ::Band::Medium && b == occ::Band::High);
}

}  // namespace

const char* command_name(CommandKind kind) {
  switch (kind) {
    case CommandKind::Accelerate: return "Accelerate";
    case CommandKind::Decelerate: return "Decelerate";
    case CommandKind::Brake: return "Brake";
    case CommandKind::Hold: return "Hold";
  }
  return "Hold";
}

const char* leader_mode_name(LeaderMode mode) {
  return mode == LeaderMode::Aggressive ? "Aggressive" : "Normal";
}

void LearnerConfig::validate() const {
  if (window_ticks <= 0) throw ConfigError("learner window_ticks must be > 0");
  if (switch_threshold <= 0) {
    throw ConfigError("learner switch_threshold must be > 0");
  }
  if (hold_ticks < 0) throw ConfigError("learner hold_ticks must be >= 0");
}

void AppraisalLimits::validate() const {
  if (d_max <= 0.0) throw ConfigError("appraisal d_max must be > 0");
  if (v_max <= 0.0) throw ConfigError("appraisal v_max must be > 0");
  if (ttc_max <= 0.0) throw ConfigError("appraisal ttc_max must be > 0");
  if (ssd_required_patches <= 0.0) {
    throw ConfigError("appraisal ssd_required_patches must be > 0");
  }
  if (margin <= 0.0) throw ConfigError("appraisal margin must be > 0");
  if (sense_of_reality < 0.0 || sense_of_reality > 1.0) {
    throw ConfigError("appraisal sense_of_reality must lie in [0, 1]");
  }
}

void AgentConfig::validate() const {
  limits.validate();
  learner.validate();
  if (normal.accel_rate < 0.0 || normal.decel_rate < 0.0 ||
      cautious.accel_rate < 0.0 || cautious.decel_rate < 0.0) {
    throw ConfigError("regime rates must be non-negative");
  }
}

occ::AppraisalInputs derive_appraisal(const SensedState& sensed,
                                      const AppraisalLimits& limits) {
  limits.validate();
  occ::AppraisalInputs in;
  in.distance_norm = clamp01(sensed.gap / limits.d_max);
  in.speed_norm = clamp01(sensed.own_speed / limits.v_max);
  in.imp_goal = clamp01(
      1.0 - sensed.gap / (limits.ssd_required_patches * limits.margin));
  in.ach_goal = clamp01(sensed.gap / limits.ssd_required_patches);
  in.sense_of_reality = clamp01(limits.sense_of_reality);
  if (sensed.closing_speed > kClosingEps) {
    const double ttc =
        sensed.gap / (sensed.closing_speed * kSpeedToPatchesPerTick);
    in.proximity = clamp01(1.0 - ttc / limits.ttc_max);
  } else {
    in.proximity = 0.0;
  }
  return in;
}

LearnerState update_learner(LearnerState learner, occ::Band band, long tick,
                            const LearnerConfig& config) {
  if (!config.enabled) {
    learner.leader_mode = LeaderMode::Normal;
    learner.hold_until_tick = -1;
    return learner;
  }
  config.validate();
  learner.band_history.emplace_back(tick, band);
  const long oldest = tick - config.window_ticks + 1;
  while (!learner.band_history.empty() &&
         learner.band_history.front().first < oldest) {
    learner.band_history.pop_front();
  }
  int switches = 0;
  for (std::size_t i = 1; i < learner.band_history.size(); ++i) {
    if (is_high_medium_pair(learner.band_history[i - 1].second,
                            learner.band_history[i].second)) {
      ++switches;
    }
  }
  if (switches >= config.switch_threshold) {
    learner.leader_mode = LeaderMode::Aggressive;
    learner.hold_until_tick = tick + config.hold_ticks;
  } else if (learner.leader_mode == LeaderMode::Aggressive &&
             tick >= learner.hold_until_tick) {
    learner.leader_mode = LeaderMode::Normal;
  }
  return learner;
}

MotorCommand select_driving_rule(occ::Band band, const LearnerState& learner,
                                 const DrivingRegime& normal,
                                 const DrivingRegime& cautious,
                                 bool gap_opening) {
  if (band >= occ::Band::High) return {CommandKind::Brake, 0.0};
  const bool aggressive = learner.leader_mode == LeaderMode::Aggressive;
  if (band == occ::Band::Medium || aggressive) {
    if (gap_opening) return {CommandKind::Accelerate, cautious.accel_rate};
    const double decel =
        aggressive ? cautious.decel_rate : normal.decel_rate;
    return {CommandKind::Decelerate, decel};
  }
  return {CommandKind::Accelerate, normal.accel_rate};
}

AgentStepResult step_agent(const occ::FearModel& model, LearnerState learner,
                           const SensedState& sensed, long tick,
                           const AgentConfig& config) {
  config.validate();
  AgentStepResult result;
  result.appraisal = derive_appraisal(sensed, config.limits);
  result.fear = model.appraise(result.appraisal);
  if (sensed.pedestrian_detected) {
    result.fear.band = occ::Band::VeryHigh;
  }
  result.learner = update_learner(std::move(learner), result.fear.band, tick,
                                  config.learner);
  result.command =
      select_driving_rule(result.fear.band, result.learner, config.normal,
                          config.cautious, sensed.gap_opening);
  // Last-resort guard: brake when the gap would close completely within
  // one tick at the current closing speed.
  if (result.command.kind != CommandKind::Brake &&
      sensed.closing_speed > kClosingEps &&
      sensed.gap - sensed.closing_speed * kSpeedToPatchesPerTick <= 0.0) {
    result.command = {CommandKind::Brake, 0.0};
  }
  return result;
}

}  // namespace fearbrake::control
