#include "core/io.hpp"

#include "core/errors.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace deconv {

void
ensure_directory(const std::string& dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create directory '" + dir + "'");
}

std::string
read_text_file(const std::string& path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void
write_text_file(const std::string& path, const std::string& content)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw IoError("cannot open '" + path + "' for writing");
  os << content;
  if (!os)
    throw IoError("write to '" + path + "' failed");
}

void
write_json_file(const std::string& path, const nlohmann::json& j)
{
  write_text_file(path, j.dump(2) + "\n");
}

nlohmann::json
emit_figure_data(const std::vector<FigurePanel>& panels, const std::string& dir)
{
  ensure_directory(dir);
  nlohmann::json manifest;
  manifest["columns"] = { "x", "value", "kappa", "K" };
  manifest["panels"] = nlohmann::json::array();
  for (const auto& p : panels) {
    if (p.x.size() != p.value.size())
      throw std::invalid_argument("panel " + p.name + " has mismatched columns");
    std::ostringstream os;
    os << "x,value,kappa,K\n" << std::setprecision(17);
    for (size_t i = 0; i < p.x.size(); ++i)
      os << p.x[i] << "," << p.value[i] << "," << p.kappa << "," << p.K << "\n";
    const std::string file = p.name + ".csv";
    write_text_file((std::filesystem::path(dir) / file).string(), os.str());
    manifest["panels"].push_back(
      { { "file", file }, { "kappa", p.kappa }, { "K", p.K }, { "scaling", p.scaling } });
  }
  write_json_file((std::filesystem::path(dir) / "MANIFEST.json").string(), manifest);
  return manifest;
}

ExperimentReport
read_report_csv(std::istream& is)
{
  ExperimentReport rep;
  std::string line;
  if (!std::getline(is, line) || line.rfind("n,label,", 0) != 0)
    throw IoError("not an experiment report");
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      f.push_back(cell);
    if (f.size() == 11)
      f.emplace_back();
    if (f.size() != 12)
      throw IoError("bad report row: " + line);
    auto num = [](const std::string& s) { return std::strtod(s.c_str(), nullptr); };
    CellRow r;
    r.n = size_t(std::stoull(f[0]));
    r.label = f[1];
    r.kappa = num(f[2]);
    r.replicate = std::stoi(f[3]);
    r.status = f[4];
    r.contrast = num(f[5]);
    r.cf_error = num(f[6]);
    r.density_error = num(f[7]);
    r.aligned_error = num(f[8]);
    r.m = std::stoi(f[9]);
    r.omega = num(f[10]);
    r.message = f[11];
    rep.rows.push_back(r);
  }
  rep.aggregates = aggregate(rep.rows);
  return rep;
}

} // namespace deconv
