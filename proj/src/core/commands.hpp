#pragma once

#include "core/config.hpp"
#include "core/io.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace deconv {

struct ConjectureRow
{
  double kappa = 0.0;
  int K = 0;
  double sup_stretch = 0.0;
  double sup_squeeze = 0.0;
  int intervals = 0;
  double norm_plain = 0.0;
  double norm_smoothed = 0.0;
};

struct ConjectureData
{
  std::vector<FigurePanel> panels;
  std::vector<ConjectureRow> summary;
  std::vector<std::string> certificates;
};

//! Stretch and squeeze profiles for every kappa and K = 1..K_max, with the
//! per-K statistics.
ConjectureData conjecture_data(const ConjectureConfig& config);

struct CommandOutcome
{
  std::string message;  //!< one line for the terminal
  size_t violations = 0; //!< bounds-check only
};

//! Runs one subcommand (simulate, estimate, adapt, conjecture, bounds-check,
//! experiment) from its JSON config, writing into `out_dir` together with a
//! copy of the config and MANIFEST.json.
CommandOutcome run_command(const std::string& name, const nlohmann::json& config,
                           const std::string& out_dir);

} // namespace deconv
