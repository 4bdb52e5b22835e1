#include "fearbrake/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fearbrake::fuzzy {

TriangularMf::TriangularMf(double d, double e, double f)
    : left_foot(d), peak(e), right_foot(f) {
  if (!(d <= e && e <= f)) {
    throw SpecError("triangular mf requires d <= e <= f, got (" +
                    std::to_string(d) + ", " + std::to_string(e) + ", " +
                    std::to_string(f) + ")");
  }
}

double TriangularMf::operator()(double x) const {
  if (x == peak) return 1.0;
  if (x <= left_foot || x >= right_foot) return 0.0;
  if (x < peak) return (x - left_foot) / (peak - left_foot);
  return (right_foot - x) / (right_foot - peak);
}

const TriangularMf& LinguisticVariable::term(const std::string& label) const {
  for (const auto& [l, mf] : terms) {
    if (l == label) return mf;
  }
  throw SpecError("variable '" + name + "' has no term '" + label + "'");
}

bool LinguisticVariable::has_term(const std::string& label) const {
  return std::any_of(terms.begin(), terms.end(),
                     [&](const auto& t) { return t.first == label; });
}

LinguisticVariable uniform_partition(std::string name, double lo, double hi,
                                     const std::vector<std::string>& labels) {
  if (labels.size() < 2) {
    throw SpecError("uniform_partition needs at least 2 labels");
  }
  if (!(lo < hi)) {
    throw SpecError("uniform_partition needs lo < hi");
  }
  const double step = (hi - lo) / static_cast<double>(labels.size() - 1);
  LinguisticVariable var{std::move(name), lo, hi, {}};
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const double peak = lo + static_cast<double>(k) * step;
    var.terms.emplace_back(labels[k],
                           TriangularMf(peak - step, peak, peak + step));
  }
  return var;
}

FisSpec::FisSpec(std::vector<LinguisticVariable> inputs,
                 LinguisticVariable output, std::vector<FuzzyRule> rules)
    : inputs_(std::move(inputs)),
      output_(std::move(output)),
      rules_(std::move(rules)) {
  if (inputs_.empty()) throw SpecError("FIS needs at least one input variable");
  if (rules_.empty()) throw SpecError("FIS rule list is empty");
  std::set<std::vector<std::string>> seen;
  for (const auto& rule : rules_) {
    if (rule.antecedent.size() != inputs_.size()) {
      throw SpecError("rule antecedent arity mismatch");
    }
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      if (!inputs_[i].has_term(rule.antecedent[i])) {
        throw SpecError("variable '" + inputs_[i].name + "' has no term '" +
                        rule.antecedent[i] + "'");
      }
    }
    if (!output_.has_term(rule.consequent)) {
      throw SpecError("output variable '" + output_.name + "' has no term '" +
                      rule.consequent + "'");
    }
    if (!seen.insert(rule.antecedent).second) {
      throw SpecError("duplicate rule antecedent");
    }
  }
}

double defuzzify_centroid(const std::vector<double>& xs,
                          const std::vector<double>& mu) {
  double mass = 0.0;
  double moment = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mass += mu[i];
    moment += xs[i] * mu[i];
  }
  if (mass <= 0.0) throw NoRuleCoverage("aggregate has zero mass");
  return moment / mass;
}

double FisSpec::evaluate(const std::vector<double>& raw) const {
  if (raw.size() != inputs_.size()) {
    throw SpecError("expected " + std::to_string(inputs_.size()) +
                    " inputs, got " + std::to_string(raw.size()));
  }
  // Clamp inputs to each variable's domain, then cache per-term degrees.
  std::vector<std::map<std::string, double>> degrees(inputs_.size());
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    const double x = std::clamp(raw[i], inputs_[i].lo, inputs_[i].hi);
    for (const auto& [label, mf] : inputs_[i].terms) {
      degrees[i][label] = mf(x);
    }
  }

  const auto n = static_cast<std::size_t>(
      std::llround((output_.hi - output_.lo) / kCentroidStep)) + 1;
  std::vector<double> xs(n);
  std::vector<double> agg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = output_.lo + static_cast<double>(i) * kCentroidStep;
  }

  bool fired = false;
  for (const auto& rule : rules_) {
    double strength = 1.0;
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      strength = std::min(strength, degrees[i].at(rule.antecedent[i]));
    }
    if (strength <= 0.0) continue;
    fired = true;
    const auto& mf = output_.term(rule.consequent);
    for (std::size_t i = 0; i < n; ++i) {
      agg[i] = std::max(agg[i], std::min(mf(xs[i]), strength));
    }
  }
  if (!fired) {
    throw NoRuleCoverage("no rule coverage for given inputs");
  }
  return defuzzify_centroid(xs, agg);
}

namespace {

using nlohmann::json;

LinguisticVariable variable_from_json(const json& jv) {
  LinguisticVariable var;
  var.name = jv.at("name").get<std::string>();
  var.lo = jv.at("domain").at(0).get<double>();
  var.hi = jv.at("domain").at(1).get<double>();
  for (const auto& jt : jv.at("terms")) {
    var.terms.emplace_back(
        jt.at("label").get<std::string>(),
        TriangularMf(jt.at("d").get<double>(), jt.at("e").get<double>(),
                     jt.at("f").get<double>()));
  }
  return var;
}

json variable_to_json(const LinguisticVariable& var) {
  json jt = json::array();
  for (const auto& [label, mf] : var.terms) {
    jt.push_back({{"label", label},
                  {"d", mf.left_foot},
                  {"e", mf.peak},
                  {"f", mf.right_foot}});
  }
  return {{"name", var.name}, {"domain", {var.lo, var.hi}}, {"terms", jt}};
}

}  // namespace

FisSpec parse_fis(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("rulebase JSON parse error: ") + e.what());
  }
  std::vector<LinguisticVariable> inputs;
  for (const auto& jv : j.at("variables")) {
    inputs.push_back(variable_from_json(jv));
  }
  LinguisticVariable output = variable_from_json(j.at("output"));
  std::vector<FuzzyRule> rules;
  for (const auto& jr : j.at("rules")) {
    FuzzyRule rule;
    const auto& cond = jr.at("if");
    for (const auto& in : inputs) {
      if (!cond.contains(in.name)) {
        throw SpecError("rule is missing antecedent for variable '" +
                        in.name + "'");
      }
      rule.antecedent.push_back(cond.at(in.name).get<std::string>());
    }
    rule.consequent = jr.at("then").get<std::string>();
    rules.push_back(std::move(rule));
  }
  return FisSpec(std::move(inputs), std::move(output), std::move(rules));
}

FisSpec load_fis(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open rulebase file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_fis(buf.str());
}

std::string fis_to_json(const FisSpec& fis) {
  json j;
  j["variables"] = json::array();
  for (const auto& in : fis.inputs()) {
    j["variables"].push_back(variable_to_json(in));
  }
  j["output"] = variable_to_json(fis.output());
  j["rules"] = json::array();
  for (const auto& rule : fis.rules()) {
    json cond;
    for (std::size_t i = 0; i < fis.inputs().size(); ++i) {
      cond[fis.inputs()[i].name] = rule.antecedent[i];
    }
    j["rules"].push_back({{"if", cond}, {"then", rule.consequent}});
  }
  return j.dump(2);
}

}  // namespace fearbrake::fuzzy
