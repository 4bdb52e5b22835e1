#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fearbrake::fuzzy {

/// Thrown for structurally invalid fuzzy definitions (bad triangle
/// parameters, duplicate rule antecedents, unknown term labels).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an aggregate has zero mass, i.e. no rule fires for the
/// given inputs. Signals an incomplete rulebase.
class NoRuleCoverage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Triangular membership function with feet (left_foot, right_foot) and peak.
/// Validity (left_foot <= peak <= right_foot) is enforced at construction.
struct TriangularMf {
  double left_foot;
  double peak;
  double right_foot;

  TriangularMf(double d, double e, double f);

  /// Piecewise-linear membership degree, 0 outside [left_foot, right_foot],
  /// 1 at the peak.
  double operator()(double x) const;
};

/// A named variable over a closed interval with an ordered list of labeled
/// triangular terms. Term peaks must be strictly increasing.
struct LinguisticVariable {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::pair<std::string, TriangularMf>> terms;

  const TriangularMf& term(const std::string& label) const;
  bool has_term(const std::string& label) const;
};

/// Evenly spaced n-term partition of [lo, hi]. Interior terms have their
/// feet on the neighboring peaks; boundary terms peak at the domain
/// endpoints with the outer foot one step beyond the domain, so the
/// partition sums to 1 everywhere inside the domain.
LinguisticVariable uniform_partition(std::string name, double lo, double hi,
                                     const std::vector<std::string>& labels);

/// One conjunctive IF-THEN rule: a term label per input variable plus a
/// consequent term label of the output variable.
struct FuzzyRule {
  std::vector<std::string> antecedent;  // one label per input variable
  std::string consequent;
};

/// A complete Mamdani inference system: input variables, one output
/// variable, and a rule list. Immutable after construction; evaluation
/// is pure and thread safe.
class FisSpec {
 public:
  FisSpec(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
          std::vector<FuzzyRule> rules);

  /// Min-implication / max-aggregation inference with centroid
  /// defuzzification over the output domain. Inputs are clamped to
  /// their variable's domain. Throws NoRuleCoverage if nothing fires.
  double evaluate(const std::vector<double>& inputs) const;

  const std::vector<LinguisticVariable>& inputs() const { return inputs_; }
  const LinguisticVariable& output() const { return output_; }
  const std::vector<FuzzyRule>& rules() const { return rules_; }

  /// Defuzzification sample step over the output domain.
  static constexpr double kCentroidStep = 1e-4;

 private:
  std::vector<LinguisticVariable> inputs_;
  LinguisticVariable output_;
  std::vector<FuzzyRule> rules_;
};

/// Centroid of a sampled membership curve: sum(x*mu) / sum(mu) over
/// uniformly spaced samples. Throws NoRuleCoverage on zero total mass.
double defuzzify_centroid(const std::vector<double>& xs,
                          const std::vector<double>& mu);

/// JSON (de)serialization of the rulebase file format:
/// {"variables": [{"name", "domain", "terms": [{"label", "d", "e", "f"}]}],
///  "output": "...", "rules": [{"if": {var: label, ...}, "then": label}]}
FisSpec load_fis(const std::string& path);
FisSpec parse_fis(const std::string& json_text);
std::string fis_to_json(const FisSpec& fis);

}  // namespace fearbrake::fuzzy
