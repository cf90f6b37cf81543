#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cpa/dist.hpp"
#include "cpa/errors.hpp"
#include "cpa/mech.hpp"
#include "cpa/sim.hpp"

namespace cpa {

// Diagnostic anchored at a field path such as "agents[0].sensitivity" and a 1-based line (0 when
// the field is missing).
class ConfigError : public Error {
 public:
  ConfigError(std::string path, int line, const std::string& msg);
  const std::string& path() const { return path_; }
  int line() const { return line_; }

 private:
  std::string path_;
  int line_;
};

struct AgentConfig {
  DistFamily type_family = DistFamily::uniform;
  DistParams type_params;
  IncomeKind income_kind = IncomeKind::additive_error;
  IncomeParams income_params;
  double audit_cost = 0.0;
  double sensitivity = 0.0;
};

struct GridSettings {
  std::size_t theta_points = 128;
  std::size_t pi_points = 128;
};

struct SimulationSettings {
  std::uint64_t n_runs = 100000;
  std::uint64_t seed = 0;
};

struct OutputSettings {
  std::optional<std::string> directory;
  bool csv = true;
  bool json = true;
};

struct InstanceConfig {
  std::vector<AgentConfig> agent_configs;
  std::vector<AgentSpec> agents;
  GridSettings grids;
  SimulationSettings simulation;
  OutputSettings output;
  std::optional<SweepSpec> sweep;

  AuctionInstance instance() const { return AuctionInstance(agents); }
};

InstanceConfig parse_config(std::string_view text);
InstanceConfig load_config(const std::filesystem::path& file);

}  // namespace cpa
