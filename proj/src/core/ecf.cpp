#include "core/ecf.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace deconv {

SampleSet::SampleSet(BlockDims dims, std::vector<double> data)
  : dims_(dims)
  , data_(std::move(data))
{
  if (dims.d1 < 1 || dims.d2 < 0)
    throw std::invalid_argument("sample dimensions must satisfy d1 >= 1, d2 >= 0");
  const size_t d = static_cast<size_t>(dims.total());
  if (data_.size() % d != 0)
    throw std::invalid_argument("sample data length is not a multiple of the dimension");
  n_ = data_.size() / d;
  for (double v : data_) {
    if (!std::isfinite(v))
      throw std::invalid_argument("samples must be finite");
  }
}

SampleSet
SampleSet::subset(size_t begin, size_t end) const
{
  if (begin > end || end > n_)
    throw std::out_of_range("sample subset out of range");
  const size_t d = static_cast<size_t>(dim());
  return SampleSet(dims_, std::vector<double>(data_.begin() + static_cast<long>(begin * d),
                                              data_.begin() + static_cast<long>(end * d)));
}

void
write_samples_csv(std::ostream& os, const SampleSet& samples)
{
  const int d = samples.dim();
  for (int a = 0; a < d; ++a)
    os << (a ? "," : "") << "y" << (a + 1);
  os << "\n" << std::setprecision(17);
  for (size_t l = 0; l < samples.size(); ++l) {
    auto r = samples.row(l);
    for (int a = 0; a < d; ++a)
      os << (a ? "," : "") << r[static_cast<size_t>(a)];
    os << "\n";
  }
}

void
write_samples_csv(const std::string& path, const SampleSet& samples)
{
  std::ofstream os(path);
  if (!os)
    throw IoError("cannot open '" + path + "' for writing");
  write_samples_csv(os, samples);
  if (!os)
    throw IoError("write to '" + path + "' failed");
}

SampleSet
read_samples_csv(std::istream& is, BlockDims dims)
{
  const int d = dims.total();
  std::string line;
  if (!std::getline(is, line))
    throw IoError("sample CSV is empty");
  {
    std::istringstream hs(line);
    std::string cell;
    int a = 0;
    while (std::getline(hs, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r')
        cell.pop_back();
      if (cell != "y" + std::to_string(a + 1))
        throw IoError("unexpected sample CSV header '" + line + "'");
      ++a;
    }
    if (a != d)
      throw ConfigError("sample CSV has " + std::to_string(a) + " columns, dims need " +
                        std::to_string(d));
  }
  std::vector<double> data;
  size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r")
      continue;
    std::istringstream rs(line);
    std::string cell;
    int a = 0;
    while (std::getline(rs, cell, ',')) {
      size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw IoError("bad number on sample CSV line " + std::to_string(lineno));
      }
      data.push_back(v);
      ++a;
    }
    if (a != d)
      throw IoError("wrong column count on sample CSV line " + std::to_string(lineno));
  }
  if (data.empty())
    throw IoError("sample CSV has no rows");
  return SampleSet(dims, std::move(data));
}

SampleSet
read_samples_csv(const std::string& path, BlockDims dims)
{
  std::ifstream is(path);
  if (!is)
    throw IoError("cannot open '" + path + "'");
  return read_samples_csv(is, dims);
}

namespace {

inline cplx
unit_phase(double x)
{
  return { std::cos(x), std::sin(x) };
}

} // namespace

cplx
ecf_eval(const SampleSet& samples, std::span<const double> t)
{
  const size_t n = samples.size();
  if (n == 0)
    throw std::invalid_argument("empirical CF of an empty sample");
  const int d = samples.dim();
  if (static_cast<int>(t.size()) != d)
    throw std::invalid_argument("CF argument has wrong dimension");
  std::vector<cplx> terms(n);
  for (size_t l = 0; l < n; ++l) {
    auto y = samples.row(l);
    cplx term = unit_phase(t[0] * y[0]);
    for (int a = 1; a < d; ++a)
      term *= unit_phase(t[static_cast<size_t>(a)] * y[static_cast<size_t>(a)]);
    terms[l] = term;
  }
  return pairwise_sum(std::span<const cplx>(terms)) / static_cast<double>(n);
}

EcfTable
ecf_on_grid(const SampleSet& samples, const QuadratureGrid& grid)
{
  const size_t n = samples.size();
  if (n == 0)
    throw std::invalid_argument("empirical CF of an empty sample");
  if (!(samples.dims() == grid.dims()))
    throw std::invalid_argument("sample and grid dimensions differ");
  const int d = samples.dim();
  const size_t N = static_cast<size_t>(grid.nodes_per_axis());
  const auto& nodes = grid.axis().nodes;

  // phase[a][j * n + l] = exp(i x_j Y_{l,a})
  std::vector<std::vector<cplx>> phase(static_cast<size_t>(d), std::vector<cplx>(N * n));
  for (int a = 0; a < d; ++a) {
    auto& tab = phase[static_cast<size_t>(a)];
    for (size_t j = 0; j < N; ++j)
      for (size_t l = 0; l < n; ++l)
        tab[j * n + l] = unit_phase(nodes[j] * samples.row(l)[static_cast<size_t>(a)]);
  }

  EcfTable table;
  table.grid_id = grid.id();
  table.n = n;
  table.full.resize(grid.full_size());
  std::vector<cplx> terms(n);
  std::vector<size_t> digit(static_cast<size_t>(d));
  for (size_t k = 0; k < grid.full_size(); ++k) {
    size_t rest = k;
    for (int a = d - 1; a >= 0; --a) {
      digit[static_cast<size_t>(a)] = rest % N;
      rest /= N;
    }
    const cplx* p0 = phase[0].data() + digit[0] * n;
    for (size_t l = 0; l < n; ++l)
      terms[l] = p0[l];
    for (int a = 1; a < d; ++a) {
      const cplx* pa = phase[static_cast<size_t>(a)].data() + digit[static_cast<size_t>(a)] * n;
      for (size_t l = 0; l < n; ++l)
        terms[l] *= pa[l];
    }
    table.full[k] = pairwise_sum(std::span<const cplx>(terms)) / static_cast<double>(n);
  }

  std::vector<double> t(static_cast<size_t>(d), 0.0);
  table.first.resize(grid.first_size());
  for (size_t k = 0; k < grid.first_size(); ++k) {
    std::fill(t.begin(), t.end(), 0.0);
    auto x = grid.first_node(k);
    std::copy(x.begin(), x.end(), t.begin());
    table.first[k] = ecf_eval(samples, t);
  }
  table.second.resize(grid.second_size());
  for (size_t k = 0; k < grid.second_size(); ++k) {
    std::fill(t.begin(), t.end(), 0.0);
    auto x = grid.second_node(k);
    std::copy(x.begin(), x.end(), t.begin() + grid.dims().d1);
    table.second[k] = ecf_eval(samples, t);
  }
  return table;
}

EcfTable
cf_table(const CfFunction& cf, const QuadratureGrid& grid)
{
  const int d = grid.dim();
  EcfTable table;
  table.grid_id = grid.id();
  table.full.resize(grid.full_size());
  for (size_t k = 0; k < grid.full_size(); ++k)
    table.full[k] = cf(grid.node(k));
  std::vector<double> t(static_cast<size_t>(d), 0.0);
  table.first.resize(grid.first_size());
  for (size_t k = 0; k < grid.first_size(); ++k) {
    std::fill(t.begin(), t.end(), 0.0);
    auto x = grid.first_node(k);
    std::copy(x.begin(), x.end(), t.begin());
    table.first[k] = cf(t);
  }
  table.second.resize(grid.second_size());
  for (size_t k = 0; k < grid.second_size(); ++k) {
    std::fill(t.begin(), t.end(), 0.0);
    auto x = grid.second_node(k);
    std::copy(x.begin(), x.end(), t.begin() + grid.dims().d1);
    table.second[k] = cf(t);
  }
  return table;
}

double
second_moment(const SampleSet& samples)
{
  if (samples.size() == 0)
    throw std::invalid_argument("second moment of an empty sample");
  std::vector<double> sq(samples.size());
  for (size_t l = 0; l < samples.size(); ++l) {
    double s = 0.0;
    for (double v : samples.row(l))
      s += v * v;
    sq[l] = s;
  }
  return pairwise_sum(std::span<const double>(sq)) / static_cast<double>(samples.size());
}

} // namespace deconv
