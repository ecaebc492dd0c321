#include "deconv/deconv.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

//! 0 ok, 2 config, 3 numerical; io and argument errors count as config.
int
exit_code(dcv_status s)
{
  switch (s) {
    case DCV_OK:
      return 0;
    case DCV_ERR_NUMERICAL:
      return 3;
    default:
      return 2;
  }
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Density deconvolution with unknown noise" };
  app.set_version_flag("--version", std::string(dcv_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  const char* names[] = { "simulate", "estimate", "adapt", "conjecture", "bounds-check",
                          "experiment" };
  const char* blurbs[] = { "draw samples from a scenario",
                           "fit the CF at one kappa and invert it",
                           "fit over a kappa grid and select",
                           "weighted-polynomial profiles and summary",
                           "check truncation and singular-value bounds",
                           "run a replicated experiment plan" };
  for (int i = 0; i < 6; ++i) {
    auto* sub = app.add_subcommand(names[i], blurbs[i]);
    sub->add_option("-c,--config", config_path, "JSON config file")->required();
    sub->add_option("-o,--out", out_dir, "output directory (default: output_dir key or .)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  std::ifstream is(config_path);
  if (!is) {
    std::cerr << "error: cannot read config '" << config_path << "'\n";
    return 2;
  }
  std::stringstream text;
  text << is.rdbuf();

  std::string config = text.str();
  if (out_dir.empty()) {
    out_dir = ".";
    const auto j = nlohmann::json::parse(config, nullptr, false);
    if (j.is_object() && j.contains("output_dir") && j["output_dir"].is_string())
      out_dir = j["output_dir"].get<std::string>();
  }

  size_t violations = 0;
  const dcv_status s = dcv_run_command(name.c_str(), config.c_str(), out_dir.c_str(), &violations);
  if (s != DCV_OK) {
    std::cerr << "error (" << name << "): " << dcv_last_error() << "\n";
    return exit_code(s);
  }
  std::cout << name << ": " << dcv_last_message() << " -> " << out_dir << "\n";
  if (name == "bounds-check" && violations > 0)
    return 3;
  return 0;
}
