#pragma once

#include <symnoise/qbasis.hpp>

#include <functional>

// Liouville (superoperator) representation: an operator-valued linear map
// becomes an N^2 x N^2 matrix over the Liouville basis {I/sqrt(N), x_1, ...}.

namespace symnoise {

struct SuperOp {
  CMat mat;               // (N^2) x (N^2)
  std::string basis_tag;  // which basis the entries refer to

  bool is_real(double abs_tol = 1e-10) const {
    return mat.imag().cwiseAbs().maxCoeff() <= abs_tol;
  }
  RMat real_part() const { return mat.real(); }
};

using OperatorMap = std::function<CMat(const CMat&)>;

// entry (k, l) = <x_k, map(x_l)>_HS over the Liouville basis of `basis`
SuperOp liouville_matrix(const OperatorMap& map, const QBasis& basis,
                         const std::string& tag = "qbasis");

// apply a real Liouville matrix to a Hermitian operator
CMat apply_liouville(const RMat& superop, const CMat& x, const QBasis& basis);

}  // namespace symnoise
