#include "rowsim/dose.hpp"

#include <algorithm>
#include <cmath>

#include "rowsim/errors.hpp"

namespace rowsim {

void DoseCurve::validate(const char* name) const {
  if (anchors.empty()) throw ConfigError(std::string(name) + ".anchors: need at least one anchor");
  Ns prev_t = 0;
  for (const auto& a : anchors) {
    if (a.on_time <= prev_t)
      throw ConfigError(std::string(name) + ".anchors: on_times must be strictly increasing");
    if (a.dose <= 0.0) throw ConfigError(std::string(name) + ".anchors: doses must be positive");
    prev_t = a.on_time;
  }
  double prev_c = -1e30;
  for (const auto& p : temperature_scale) {
    if (p.celsius <= prev_c)
      throw ConfigError(std::string(name) + ".temperature_scale: unsorted temperatures");
    if (p.factor <= 0.0)
      throw ConfigError(std::string(name) + ".temperature_scale: factors must be positive");
    prev_c = p.celsius;
  }
}

double DoseCurve::temperature_factor(double celsius) const {
  if (temperature_scale.empty()) return 1.0;
  if (celsius <= temperature_scale.front().celsius) return temperature_scale.front().factor;
  if (celsius >= temperature_scale.back().celsius) return temperature_scale.back().factor;
  for (size_t i = 1; i < temperature_scale.size(); ++i) {
    const auto& lo = temperature_scale[i - 1];
    const auto& hi = temperature_scale[i];
    if (celsius <= hi.celsius) {
      const double w = (celsius - lo.celsius) / (hi.celsius - lo.celsius);
      return std::exp(std::log(lo.factor) * (1.0 - w) + std::log(hi.factor) * w);
    }
  }
  return temperature_scale.back().factor;
}

double DoseCurve::evaluate(Ns on_time, double celsius) const {
  if (on_time <= 0) throw ContractViolation("dose curve evaluated at nonpositive on_time");
  const double factor = temperature_factor(celsius);
  const double lt = std::log(static_cast<double>(on_time));

  if (on_time <= anchors.front().on_time) return anchors.front().dose * factor;
  if (on_time >= anchors.back().on_time) {
    const auto& last = anchors.back();
    const double ld = std::log(last.dose) +
                      tail_slope * (lt - std::log(static_cast<double>(last.on_time)));
    return std::exp(ld) * factor;
  }
  auto hi = std::upper_bound(anchors.begin(), anchors.end(), on_time,
                             [](Ns t, const Anchor& a) { return t < a.on_time; });
  const Anchor& b = *hi;
  const Anchor& a = *(hi - 1);
  const double la = std::log(static_cast<double>(a.on_time));
  const double lb = std::log(static_cast<double>(b.on_time));
  const double w = (lt - la) / (lb - la);
  return std::exp(std::log(a.dose) * (1.0 - w) + std::log(b.dose) * w) * factor;
}

void MechanismModel::validate() const {
  hammer.validate("model.hammer");
  press.validate("model.press");
  if (theta_hammer <= 0.0) throw ConfigError("model.theta_hammer: must be positive");
  if (theta_press <= 0.0) throw ConfigError("model.theta_press: must be positive");
  if (distance_coupling[0] != 1.0)
    throw ConfigError("model.distance_coupling: factor at distance 1 must be 1.0");
  if (distance_coupling[0] < distance_coupling[1] || distance_coupling[1] < distance_coupling[2] ||
      distance_coupling[2] < 0.0)
    throw ConfigError("model.distance_coupling: must be nonincreasing and nonnegative");
  if (min_on_time <= 0) throw ConfigError("model.min_on_time_ns: must be positive");
}

double MechanismModel::activations_to_flip(Ns on_time, double celsius) const {
  const double h = hammer_dose(on_time, celsius);
  const double p = press_dose(on_time, celsius);
  return std::min(theta_hammer / h, theta_press / p);
}

std::int64_t acmin_closed_form(const MechanismModel& model, Ns on_time, double celsius,
                               Pattern) {
  if (on_time < model.min_on_time)
    throw ContractViolation("acmin_closed_form: on_time below minimum row-open time");
  return static_cast<std::int64_t>(std::ceil(model.activations_to_flip(on_time, celsius)));
}

MechanismModel default_model() {
  MechanismModel m;
  m.hammer.anchors = {{36, 1.0}};
  m.hammer.tail_slope = 0.0;
  m.theta_hammer = 1000.0;

  // Press dose normalized to 1.0 at one refresh interval: 21x fewer
  // activations than hammer at 7.8us, 190x at 70.2us, near-flat below 186ns.
  m.press.anchors = {{36, 0.02}, {186, 1.17 / 21.0}, {7800, 1.0}, {70200, 190.0 / 21.0}};
  m.press.tail_slope = 1.0;
  m.press.temperature_scale = {{50.0, 1.0}, {80.0, 1.0 / 0.55}};
  m.theta_press = 1000.0 / 21.0;
  return m;
}

MechanismModel scaled_model(double factor) {
  MechanismModel m = default_model();
  m.theta_hammer *= factor;
  m.theta_press *= factor;
  return m;
}

MechanismModel table2_source_model() {
  MechanismModel m;
  m.hammer.anchors = {{36, 1.0}};
  m.hammer.tail_slope = 0.0;
  m.theta_hammer = 1000.0;
  m.theta_press = 1000.0 / 21.0;

  // Anchor doses chosen so theta_press / dose lands exactly on the published
  // activation counts for each row-open cap.
  const std::pair<Ns, double> ac_points[] = {{36, 1000.0}, {66, 809.0},  {96, 724.0},
                                             {186, 619.0}, {336, 555.0}, {636, 419.0}};
  for (const auto& [t, ac] : ac_points) m.press.anchors.push_back({t, m.theta_press / ac});
  m.press.tail_slope = 1.0;
  return m;
}

}  // namespace rowsim
