#include "gpptutor/sim/profile.hpp"

#include <cmath>
#include <numbers>

namespace gpptutor::sim {

namespace {

void CheckProbability(const std::string& name, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw SimulationError(name + " must be in [0, 1]");
}

}  // namespace

double StudentProfile::ErrorRate(const std::string& family) const {
  auto it = error_rate.find(family);
  return it == error_rate.end() ? default_error_rate : it->second;
}

void StudentProfile::Validate() const {
  for (const auto& [family, p] : error_rate) CheckProbability("error rate for " + family, p);
  CheckProbability("default error rate", default_error_rate);
  CheckProbability("backward preference", backward_preference);
  CheckProbability("detour rate", detour_rate);
  CheckProbability("hint rate", hint_rate);
  if (ErrorRate("elimination") >= 1.0 || ErrorRate("introduction") >= 1.0 || ErrorRate("equivalence") >= 1.0) {
    throw SimulationError("an error rate of 1 never produces a correct step");
  }
  if (think_sigma < 0.0) throw SimulationError("think_sigma must be non-negative");
  if (step_budget < 0) throw SimulationError("step_budget must be non-negative");
}

nlohmann::json StudentProfile::ToJson() const {
  return {{"error_rate", error_rate},
          {"default_error_rate", default_error_rate},
          {"think_mu", think_mu},
          {"think_sigma", think_sigma},
          {"backward_preference", backward_preference},
          {"detour_rate", detour_rate},
          {"hint_rate", hint_rate},
          {"step_budget", step_budget}};
}

StudentProfile StudentProfile::FromJson(const nlohmann::json& j) {
  StudentProfile p;
  p.error_rate = j.value("error_rate", std::map<std::string, double>{});
  p.default_error_rate = j.value("default_error_rate", 0.0);
  p.think_mu = j.value("think_mu", p.think_mu);
  p.think_sigma = j.value("think_sigma", p.think_sigma);
  p.backward_preference = j.value("backward_preference", 0.0);
  p.detour_rate = j.value("detour_rate", 0.0);
  p.hint_rate = j.value("hint_rate", 0.0);
  p.step_budget = j.value("step_budget", 0);
  p.Validate();
  return p;
}

double SimRng::Normal() {
  // Box-Muller; 1 - Unit() is in (0, 1] so the logarithm is finite.
  const double u1 = 1.0 - Unit();
  const double u2 = Unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double SimRng::LogNormal(double mu, double sigma) { return std::exp(mu + sigma * Normal()); }

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed ^ (salt * 0x9E3779B97F4A7C15ULL);
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace gpptutor::sim
