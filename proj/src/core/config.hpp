#pragma once

#include "core/runner.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace deconv {

//! Typed access to one JSON object; finish() rejects keys nobody asked for.
//! Error messages carry the dotted key path.
class ConfigObject
{
public:
  ConfigObject(const nlohmann::json& j, std::string path);

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer(const std::string& key, int fallback) const;
  uint64_t seed(const std::string& key, uint64_t fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  ConfigObject object(const std::string& key) const;
  const nlohmann::json& raw(const std::string& key) const;
  std::string key_path(const std::string& key) const;
  //! Marks an optional key as known without reading it.
  void allow(const std::string& key) const { used_.insert(key); }
  void finish() const;

private:
  const nlohmann::json& j_;
  std::string path_;
  mutable std::set<std::string> used_;
};

struct SimulateConfig
{
  ScenarioSpec scenario;
  size_t n = 0;
  uint64_t seed = 1;
};

struct EstimateConfig
{
  std::string samples;
  BlockDims dims{ 1, 1 };
  double kappa = 0.75;
  EstimatorSettings estimator;
  uint64_t seed = 1;
  Lattice lattice;
};

struct AdaptConfig
{
  std::string samples;
  BlockDims dims{ 1, 1 };
  KappaGrid kappas;
  double beta = 1.0;
  double c_sigma = 0.0;
  EstimatorSettings estimator;
  uint64_t seed = 1;
  Lattice lattice;
};

struct ConjectureConfig
{
  std::vector<double> kappas{ 0.55, 0.6, 0.7, 0.8, 0.9, 0.95 };
  int K_max = 16;
  double x0 = 1.0;
  double x_min = -4.0;
  double x_max = 4.0;
  int points = 161;
  double c1 = 0.2;
  double c2 = 0.1;
  double c_b = 4.0;
};

struct BoundsConfig
{
  std::vector<double> kappas{ 0.55, 0.75, 1.0 };
  std::vector<double> S{ 0.5, 1.0, 2.0 };
  std::vector<double> nu{ 0.5, 1.0 };
  std::vector<double> m{ 2, 3, 4, 5, 6 };
  std::vector<double> d{ 1, 2 };
  int members = 25;
  uint64_t seed = 1;
};

ScenarioSpec parse_scenario(const ConfigObject& obj);
EstimatorSettings parse_estimator(const ConfigObject& obj);

SimulateConfig parse_simulate(const nlohmann::json& j);
EstimateConfig parse_estimate(const nlohmann::json& j);
AdaptConfig parse_adapt(const nlohmann::json& j);
ConjectureConfig parse_conjecture(const nlohmann::json& j);
BoundsConfig parse_bounds(const nlohmann::json& j);
ExperimentPlan parse_experiment(const nlohmann::json& j);

//! Parses text; malformed JSON is a ConfigError.
nlohmann::json parse_json_text(const std::string& text);

} // namespace deconv
