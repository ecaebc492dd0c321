#pragma once

#include "core/runner.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace deconv {

void ensure_directory(const std::string& dir);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
//! Pretty JSON with a trailing newline.
void write_json_file(const std::string& path, const nlohmann::json& j);

//! One figure panel: values of a scaled profile on an x grid.
struct FigurePanel
{
  std::string name; //!< file stem
  double kappa = 0.0;
  int K = 0;
  std::string scaling;
  std::vector<double> x;
  std::vector<double> value;
};

//! One CSV per panel (x,value,kappa,K) plus MANIFEST.json listing them, in
//! `dir`. Returns the manifest.
nlohmann::json emit_figure_data(const std::vector<FigurePanel>& panels, const std::string& dir);

//! Rows of an experiment report as written by write_report_csv.
ExperimentReport read_report_csv(std::istream& is);

} // namespace deconv
