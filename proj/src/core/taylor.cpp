#include "core/taylor.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <sstream>

namespace deconv {

void
UpsilonParams::validate() const
{
  if (!(kappa > 0.0 && kappa <= 1.0))
    throw ConfigError("kappa must lie in (0, 1]");
  if (!(S > 0.0) || !std::isfinite(S))
    throw ConfigError("S must be positive and finite");
}

TaylorPoly::TaylorPoly(BlockDims dims, int max_degree, Role role)
  : dims_(dims)
  , max_degree_(max_degree)
  , role_(role)
{
  if (dims.d1 < 0 || dims.d2 < 0 || dims.total() < 1)
    throw std::invalid_argument("TaylorPoly needs at least one variable");
  if (max_degree < 0)
    throw std::invalid_argument("TaylorPoly max_degree must be >= 0");
  indices_ = MultiIndexSet::get(dims.total(), max_degree);
  params_.assign(indices_->size(), 0.0);
  if (role_ == Role::cf_candidate)
    params_[0] = 1.0;
}

TaylorPoly::TaylorPoly(BlockDims dims, int max_degree, std::vector<double> params,
                       Role role)
  : TaylorPoly(dims, max_degree, role)
{
  if (params.size() != params_.size())
    throw std::invalid_argument("TaylorPoly parameter vector has wrong length");
  params_ = std::move(params);
  if (role_ == Role::cf_candidate && params_[0] != 1.0)
    throw std::invalid_argument("characteristic-function candidate needs c_0 = 1");
}

TaylorPoly
TaylorPoly::constant_one(BlockDims dims, int max_degree)
{
  return TaylorPoly(dims, max_degree, Role::cf_candidate);
}

TaylorPoly
TaylorPoly::from_complex(BlockDims dims, int max_degree, std::span<const cplx> coeffs,
                         Role role)
{
  TaylorPoly p(dims, max_degree, Role::general);
  if (coeffs.size() != p.size())
    throw std::invalid_argument("coefficient vector has wrong length");
  for (size_t k = 0; k < p.size(); ++k) {
    const int order = p.indices().order(k);
    p.params_[k] = (order % 2 == 0) ? coeffs[k].real() : coeffs[k].imag();
  }
  if (role == Role::cf_candidate) {
    p.params_[0] = 1.0;
    p.role_ = role;
  }
  return p;
}

void
TaylorPoly::set_param(size_t k, double value)
{
  if (k == 0 && role_ == Role::cf_candidate && value != 1.0)
    throw std::invalid_argument("c_0 of a characteristic-function candidate is fixed to 1");
  params_.at(k) = value;
}

cplx
TaylorPoly::coeff(size_t k) const
{
  return parity_unit(indices_->order(k)) * params_[k];
}

std::vector<cplx>
TaylorPoly::coeffs() const
{
  std::vector<cplx> out(size());
  for (size_t k = 0; k < size(); ++k)
    out[k] = coeff(k);
  return out;
}

cplx
TaylorPoly::evaluate(std::span<const double> t) const
{
  const int d = dim();
  if (static_cast<int>(t.size()) != d)
    throw std::invalid_argument("evaluation point has wrong dimension");

  // powers[a][e] = t_a^e
  std::vector<double> powers(static_cast<size_t>(d * (max_degree_ + 1)));
  for (int a = 0; a < d; ++a) {
    double* row = powers.data() + a * (max_degree_ + 1);
    row[0] = 1.0;
    for (int e = 1; e <= max_degree_; ++e)
      row[e] = row[e - 1] * t[static_cast<size_t>(a)];
  }

  double re = 0.0;
  double im = 0.0;
  for (size_t k = 0; k < size(); ++k) {
    if (params_[k] == 0.0)
      continue;
    auto idx = (*indices_)[k];
    double mono = 1.0;
    for (int a = 0; a < d; ++a)
      mono *= powers[static_cast<size_t>(a * (max_degree_ + 1) + idx[static_cast<size_t>(a)])];
    if (indices_->order(k) % 2 == 0)
      re += params_[k] * mono;
    else
      im += params_[k] * mono;
  }
  return { re, im };
}

bool
TaylorPoly::operator==(const TaylorPoly& other) const
{
  return dims_ == other.dims_ && max_degree_ == other.max_degree_ &&
         role_ == other.role_ && params_ == other.params_;
}

double
upsilon_bound(int order, const UpsilonParams& params)
{
  if (order < 1)
    throw std::invalid_argument("the coefficient bound applies only to i != 0");
  const double m = static_cast<double>(order);
  // computed in log space: m log S - kappa m log m
  return std::exp(m * std::log(params.S) - params.kappa * m * std::log(m));
}

double
upsilon_bound(const MultiIndex& i, const UpsilonParams& params)
{
  return upsilon_bound(i.order(), params);
}

TaylorPoly
project_upsilon(const TaylorPoly& poly, const UpsilonParams& params)
{
  std::vector<double> p(poly.params().begin(), poly.params().end());
  p[0] = 1.0;
  for (size_t k = 1; k < p.size(); ++k) {
    const double bound = upsilon_bound(poly.indices().order(k), params);
    if (std::abs(p[k]) > bound)
      p[k] = std::copysign(bound, p[k]);
  }
  return TaylorPoly(poly.dims(), poly.max_degree(), std::move(p),
                    TaylorPoly::Role::cf_candidate);
}

bool
in_upsilon(const TaylorPoly& poly, const UpsilonParams& params, double rel_tol)
{
  if (poly.param(0) != 1.0)
    return false;
  for (size_t k = 1; k < poly.size(); ++k) {
    const double bound = upsilon_bound(poly.indices().order(k), params);
    if (!(std::abs(poly.param(k)) <= bound * (1.0 + rel_tol)))
      return false;
  }
  return true;
}

TaylorPoly
truncate(const TaylorPoly& poly, int m)
{
  if (m < 0)
    throw std::invalid_argument("truncation degree must be >= 0");
  if (m >= poly.max_degree())
    return poly;
  const size_t keep = poly.indices().prefix_size(m);
  std::vector<double> p(poly.params().begin(), poly.params().begin() + static_cast<long>(keep));
  return TaylorPoly(poly.dims(), m, std::move(p), poly.role());
}

TaylorPoly
slice(const TaylorPoly& poly, Block block)
{
  const BlockDims dims = poly.dims();
  const int kept = (block == Block::first) ? dims.d1 : dims.d2;
  if (kept == 0 || dims.d1 == 0 || dims.d2 == 0)
    throw std::invalid_argument("slice requires both blocks to be nonempty");
  const int offset = (block == Block::first) ? 0 : dims.d1;
  const int d = poly.dim();

  TaylorPoly out(BlockDims{ kept, 0 }, poly.max_degree(), poly.role());
  std::vector<int> sub(static_cast<size_t>(kept));
  for (size_t k = 0; k < poly.size(); ++k) {
    auto idx = poly.indices()[k];
    bool supported = true;
    for (int a = 0; a < d; ++a) {
      const bool inside = a >= offset && a < offset + kept;
      if (!inside && idx[static_cast<size_t>(a)] != 0) {
        supported = false;
        break;
      }
    }
    if (!supported)
      continue;
    for (int a = 0; a < kept; ++a)
      sub[static_cast<size_t>(a)] = idx[static_cast<size_t>(offset + a)];
    const auto target = out.indices().find(sub);
    out.set_param(*target, poly.param(k));
  }
  return out;
}

nlohmann::json
to_json(const TaylorPoly& poly)
{
  nlohmann::json j;
  j["dims"] = { poly.dims().d1, poly.dims().d2 };
  j["max_degree"] = poly.max_degree();
  j["role"] = poly.is_cf_candidate() ? "cf_candidate" : "general";
  nlohmann::json coeffs = nlohmann::json::array();
  for (size_t k = 0; k < poly.size(); ++k) {
    const auto idx = poly.indices()[k];
    const cplx c = poly.coeff(k);
    coeffs.push_back({ std::vector<int>(idx.begin(), idx.end()), c.real(), c.imag() });
  }
  j["coeffs"] = std::move(coeffs);
  return j;
}

TaylorPoly
taylor_from_json(const nlohmann::json& j)
{
  try {
    const BlockDims dims{ j.at("dims").at(0).get<int>(), j.at("dims").at(1).get<int>() };
    const int max_degree = j.at("max_degree").get<int>();
    const auto role = (j.value("role", std::string("general")) == "cf_candidate")
                        ? TaylorPoly::Role::cf_candidate
                        : TaylorPoly::Role::general;
    TaylorPoly shape(dims, max_degree);
    std::vector<cplx> coeffs(shape.size(), cplx(0.0, 0.0));
    for (const auto& entry : j.at("coeffs")) {
      const auto idx = entry.at(0).get<std::vector<int>>();
      const auto k = shape.indices().find(idx);
      if (!k)
        throw std::invalid_argument("coefficient index outside the polynomial support");
      coeffs[*k] = cplx(entry.at(1).get<double>(), entry.at(2).get<double>());
    }
    return TaylorPoly::from_complex(dims, max_degree, coeffs, role);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed TaylorPoly record: ") + e.what());
  }
}

} // namespace deconv
