#pragma once

#include "core/multiindex.hpp"

#include <complex>
#include <memory>
#include "json.hpp"
#include <span>
#include <vector>

namespace deconv {

using cplx = std::complex<double>;

//! Tail parameters of the analytic class: kappa in (0, 1], S > 0.
struct UpsilonParams
{
  double kappa = 1.0;
  double S = 1.0;

  //! Throws ConfigError when kappa is outside (0, 1] or S <= 0.
  void validate() const;
};

//! Truncated multivariate power series sum_i c_i prod_a t_a^{i_a} whose
//! coefficients obey the Hermitian parity conj(c_i) = (-1)^{|i|} c_i.
//!
//! Parity is structural: one real parameter p_i is stored per multi-index and
//! c_i = p_i for even |i|, c_i = i * p_i for odd |i|. Every TaylorPoly
//! therefore satisfies conj(phi(t)) = phi(-t) on real arguments.
class TaylorPoly
{
public:
  enum class Role
  {
    general,     //!< arbitrary element, e.g. a difference of two candidates
    cf_candidate //!< characteristic-function candidate, c_0 = 1
  };

  TaylorPoly() = default;

  //! Zero polynomial (or the constant 1 for a cf_candidate).
  TaylorPoly(BlockDims dims, int max_degree, Role role = Role::general);

  //! Builds from parity-reduced real parameters in MultiIndexSet order.
  TaylorPoly(BlockDims dims, int max_degree, std::vector<double> params,
             Role role = Role::general);

  static TaylorPoly constant_one(BlockDims dims, int max_degree);

  //! Keeps the real part of even-order and the imaginary part of odd-order
  //! coefficients; the other part is dropped.
  static TaylorPoly from_complex(BlockDims dims, int max_degree,
                                 std::span<const cplx> coeffs,
                                 Role role = Role::general);

  BlockDims dims() const { return dims_; }
  int dim() const { return dims_.total(); }
  int max_degree() const { return max_degree_; }
  Role role() const { return role_; }
  bool is_cf_candidate() const { return role_ == Role::cf_candidate; }

  const MultiIndexSet& indices() const { return *indices_; }
  size_t size() const { return params_.size(); }

  std::span<const double> params() const { return params_; }
  double param(size_t k) const { return params_[k]; }
  void set_param(size_t k, double value);

  //! Complex coefficient c_k reconstructed from the parity rule.
  cplx coeff(size_t k) const;
  std::vector<cplx> coeffs() const;

  //! phi(t). Throws std::invalid_argument on dimension mismatch.
  cplx evaluate(std::span<const double> t) const;

  bool operator==(const TaylorPoly&) const;

private:
  BlockDims dims_{};
  int max_degree_ = 0;
  Role role_ = Role::general;
  std::shared_ptr<const MultiIndexSet> indices_;
  std::vector<double> params_;
};

//! Parity factor: i^{|i| mod 2} as a complex unit (1 or i).
inline cplx
parity_unit(int order)
{
  return (order % 2 == 0) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
}

//! S^{|i|} |i|^{-kappa |i|}; only defined for |i| >= 1.
double upsilon_bound(int order, const UpsilonParams& params);
double upsilon_bound(const MultiIndex& i, const UpsilonParams& params);

//! Forces c_0 = 1 and clamps every other coefficient modulus to its bound,
//! keeping the sign.
TaylorPoly project_upsilon(const TaylorPoly& poly, const UpsilonParams& params);

//! Coefficient-wise membership test; `rel_tol` loosens the modulus bound.
bool in_upsilon(const TaylorPoly& poly, const UpsilonParams& params,
                double rel_tol = 0.0);

//! Drops every coefficient of order > m.
TaylorPoly truncate(const TaylorPoly& poly, int m);

//! Restriction to one block (the other block's variables set to zero). The
//! result lives in d1 (resp. d2) variables.
TaylorPoly slice(const TaylorPoly& poly, Block block);

//! {dims, max_degree, coeffs: [[index...], re, im]...}
nlohmann::json to_json(const TaylorPoly& poly);
TaylorPoly taylor_from_json(const nlohmann::json& j);

} // namespace deconv
