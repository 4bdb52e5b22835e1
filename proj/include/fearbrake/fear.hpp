#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "fearbrake/fuzzy.hpp"

namespace fearbrake::occ {

/// Discrete fear intensity levels, ordered.
enum class Band { VeryLow, Low, Medium, High, VeryHigh };

const char* band_name(Band b);

/// Crisp intensity intervals for the five bands. The default resolves the
/// published overlapping ranges into half-open intervals with cut points
/// 0.24, 0.5, 0.73 and 0.9.
struct IntensityBands {
  // Upper bounds of VeryLow..High; VeryHigh covers the rest of [0,1].
  std::array<double, 4> upper = {0.24, 0.5, 0.73, 0.9};

  Band classify(double value) const;
};

/// The six crisp appraisal inputs, all in [0,1] (clamped on use).
struct AppraisalInputs {
  double imp_goal = 0.0;
  double ach_goal = 0.0;
  double distance_norm = 0.0;
  double speed_norm = 0.0;
  double sense_of_reality = 1.0;
  double proximity = 0.0;  // 1 = "About to", 0 = "NChance"
};

/// Convex weights for combining the three appraisals, plus the fear
/// threshold subtracted from the potential.
struct FearConfig {
  double w_undesirability = 1.0 / 3.0;
  double w_likelihood = 1.0 / 3.0;
  double w_global_intensity = 1.0 / 3.0;
  double threshold = 0.0;
  IntensityBands bands;

  void validate() const;  // throws fuzzy::SpecError on bad weights
};

/// Every intermediate value of one appraisal pass.
struct FearState {
  double undesirability = 0.0;
  double likelihood = 0.0;
  double global_intensity = 0.0;
  double potential = 0.0;
  double threshold = 0.0;
  double intensity = 0.0;
  Band band = Band::VeryLow;
};

double fear_potential(double undesirability, double likelihood,
                      double global_intensity, const FearConfig& config);
double fear_intensity(double potential, double threshold);

/// Canonical rulebases over uniform 5-term partitions of [0,1].
/// The amended undesirability base replaces the three rules in the
/// highest-achievement column whose published consequents contradict the
/// published validation outputs; `amended = false` yields the table as
/// printed.
fuzzy::FisSpec make_undesirability_fis(bool amended = true);
fuzzy::FisSpec make_likelihood_fis();
fuzzy::FisSpec make_global_intensity_fis();

/// One crisp spot check for the undesirability stage: the published
/// validation vector pairing random (imp_goal, ach_goal) inputs with
/// expected crisp outputs quoted to 2-3 decimals.
struct ReferenceCheck {
  double imp_goal;
  double ach_goal;
  double expected;
};

/// The 14 undesirability spot checks, in their published order.
const std::vector<ReferenceCheck>& undesirability_reference_checks();

/// 1-based indices of the reference checks that miss their expected value
/// (beyond the 0.03 quoting tolerance) when the rulebase is used exactly
/// as printed, without the amendment.
const std::vector<int>& unamended_failing_checks();

/// The full prospect-based fear pipeline: three fuzzy appraisal stages,
/// weighted potential, threshold gating, band classification.
///
/// Crisp inputs are quantized to the defuzzification step before inference
/// and results are cached, so repeated visits to the same operating point
/// cost one hash lookup. Caching is guarded by a mutex; appraise stays
/// safe to call from multiple threads.
class FearModel {
 public:
  explicit FearModel(FearConfig config = {}, bool amended_rules = true);
  FearModel(fuzzy::FisSpec undesirability, fuzzy::FisSpec likelihood,
            fuzzy::FisSpec global_intensity, FearConfig config = {});

  double undesirability(double imp_goal, double ach_goal) const;
  double likelihood(double distance_norm, double speed_norm) const;
  double global_intensity(double sense_of_reality, double proximity) const;

  FearState appraise(const AppraisalInputs& in) const;

  const FearConfig& config() const { return config_; }

 private:
  double cached_eval(int stage, const fuzzy::FisSpec& fis, double x1,
                     double x2) const;

  fuzzy::FisSpec undesirability_;
  fuzzy::FisSpec likelihood_;
  fuzzy::FisSpec global_intensity_;
  FearConfig config_;
  mutable std::mutex cache_mutex_;
  mutable std::array<std::unordered_map<std::uint64_t, double>, 3> cache_;
};

}  // namespace fearbrake::occ
