#pragma once

#include "core/multiindex.hpp"
#include "core/quadrature.hpp"

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace deconv {

using cplx = std::complex<double>;
using CfFunction = std::function<cplx(std::span<const double>)>;

//! n observations in R^{d1+d2}, stored row-major.
class SampleSet
{
public:
  SampleSet() = default;
  SampleSet(BlockDims dims, std::vector<double> data);

  BlockDims dims() const { return dims_; }
  int dim() const { return dims_.total(); }
  size_t size() const { return n_; }
  std::span<const double> row(size_t l) const
  {
    return { data_.data() + l * static_cast<size_t>(dim()), static_cast<size_t>(dim()) };
  }
  const std::vector<double>& data() const { return data_; }

  //! Rows [begin, end) as a new set with the same block split.
  SampleSet subset(size_t begin, size_t end) const;

  bool operator==(const SampleSet& other) const
  {
    return dims_ == other.dims_ && data_ == other.data_;
  }

private:
  BlockDims dims_{};
  size_t n_ = 0;
  std::vector<double> data_;
};

//! Header y1..yd, one row per observation, 17 significant digits.
void write_samples_csv(std::ostream& os, const SampleSet& samples);
void write_samples_csv(const std::string& path, const SampleSet& samples);
SampleSet read_samples_csv(std::istream& is, BlockDims dims);
SampleSet read_samples_csv(const std::string& path, BlockDims dims);

//! Empirical CF tables on a quadrature grid: the full grid, the first-block
//! grid at t2 = 0 and the second-block grid at t1 = 0.
struct EcfTable
{
  std::string grid_id;
  size_t n = 0; //!< sample count, 0 for a table built from an exact CF
  std::vector<cplx> full;
  std::vector<cplx> first;
  std::vector<cplx> second;
};

//! (1/n) sum_l exp(i t.Y_l); terms summed pairwise in sample order.
cplx ecf_eval(const SampleSet& samples, std::span<const double> t);

//! Same values as ecf_eval at every node, bit for bit.
EcfTable ecf_on_grid(const SampleSet& samples, const QuadratureGrid& grid);

//! Table filled from an exact CF instead of data.
EcfTable cf_table(const CfFunction& cf, const QuadratureGrid& grid);

//! (1/n) sum_l |Y_l|^2.
double second_moment(const SampleSet& samples);

} // namespace deconv
