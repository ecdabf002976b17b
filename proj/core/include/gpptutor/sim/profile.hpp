#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace gpptutor::sim {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Behavioral parameters of a simulated student. All probabilities are in
/// [0, 1]; identical profile and seed give identical behavior.
struct StudentProfile {
  /// Chance of an incorrect attempt before each correct one, by rule family
  /// ("elimination", "introduction", "equivalence"). Missing families use
  /// `default_error_rate`.
  std::map<std::string, double> error_rate;
  double default_error_rate = 0.0;
  /// Think time per action is log-normal: exp(mu + sigma * N(0, 1)) ms.
  double think_mu = 8.5;
  double think_sigma = 0.5;
  /// Chance of solving a PS problem backward from the conclusion.
  double backward_preference = 0.0;
  /// Chance of an extra, off-path correct derivation before each step.
  double detour_rate = 0.0;
  /// Chance of asking for a hint before each GPP target.
  double hint_rate = 0.0;
  /// Maximum derivations per problem; 0 means unlimited.
  int step_budget = 0;

  double ErrorRate(const std::string& family) const;
  void Validate() const;

  nlohmann::json ToJson() const;
  static StudentProfile FromJson(const nlohmann::json& j);
};

/// Seeded source of every random choice a simulated student makes. Uses the
/// raw engine output only, so sequences are identical across standard
/// libraries.
class SimRng {
 public:
  explicit SimRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  /// Uniform in [0, 1).
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool Chance(double p) { return Unit() < p; }
  /// Uniform in [0, n); n > 0.
  std::size_t Below(std::size_t n) { return static_cast<std::size_t>(Unit() * static_cast<double>(n)); }
  double Normal();
  double LogNormal(double mu, double sigma);

 private:
  std::mt19937_64 engine_;
};

/// Stable 64-bit mix used to derive per-student seeds.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t salt);

}  // namespace gpptutor::sim
