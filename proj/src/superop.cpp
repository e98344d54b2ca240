#include <symnoise/superop.hpp>

namespace symnoise {

SuperOp liouville_matrix(const OperatorMap& map, const QBasis& basis,
                         const std::string& tag) {
  const int m = basis.liouville_size();
  SuperOp out;
  out.basis_tag = tag;
  out.mat.resize(m, m);
  for (int l = 0; l < m; ++l) {
    const CMat y = map(basis.liouville_element(l));
    for (int k = 0; k < m; ++k) out.mat(k, l) = hs_inner(basis.liouville_element(k), y);
  }
  return out;
}

CMat apply_liouville(const RMat& superop, const CMat& x, const QBasis& basis) {
  if (superop.rows() != basis.liouville_size() || superop.cols() != basis.liouville_size())
    throw ConfigError("apply_liouville: superoperator size mismatch");
  const RVec c = superop * expand_hermitian(x, basis);
  return reconstruct(c, basis);
}

}  // namespace symnoise
