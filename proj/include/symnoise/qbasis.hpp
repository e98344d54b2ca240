#pragma once

#include <symnoise/matrix_ops.hpp>

#include <functional>
#include <map>
#include <optional>
#include <vector>

// Eigenspace-adapted generator basis of su(N) for a Hermitian symmetry
// operator Q: Cartan (diagonal in Q's eigenbasis), Within(q) (off-diagonal
// inside one eigenblock) and Ladder(q -> q') (connecting two eigenblocks)
// generators, all traceless, Hermitian and HS-orthonormal. The normalized
// identity I/sqrt(N) is kept separately as index 0 of the Liouville basis.

namespace symnoise {

struct SectorSpectrum {
  RVec eigenvalues;                 // distinct, ascending
  std::vector<int> multiplicities;  // d_q per eigenvalue
  CMat transform;                   // columns = Q eigenvectors grouped by sector
  double grouping_tol = 0.0;
  std::vector<std::string> warnings;  // ambiguous clustering reports

  int dim() const { return static_cast<int>(transform.rows()); }
  int sector_count() const { return static_cast<int>(multiplicities.size()); }
  // first column index of sector s in `transform`
  int offset(int s) const;
};

enum class SectorClass { Cartan, Within, Ladder };

struct GenLabel {
  SectorClass cls = SectorClass::Cartan;
  int sector_a = -1;  // Within: the sector; Ladder: lower sector
  int sector_b = -1;  // Ladder: upper sector
  int index = 0;      // position inside its class

  // class identity ignoring `index`
  std::tuple<int, int, int> class_key() const {
    return {static_cast<int>(cls), sector_a, sector_b};
  }
  std::string to_string() const;
};

struct QBasis {
  SectorSpectrum spectrum;
  std::vector<CMat> generators;          // N^2 - 1 of them
  std::vector<GenLabel> labels;          // parallel to generators
  std::vector<double> root_projections;  // q' - q for Ladder, 0 otherwise
  CMat identity_direction;               // I/sqrt(N)

  int dim() const { return spectrum.dim(); }
  int size() const { return static_cast<int>(generators.size()); }

  // Liouville basis = {identity_direction, generators...}; index 0 is the
  // identity. liouville_label(0) is the identity tag.
  const CMat& liouville_element(int k) const {
    return k == 0 ? identity_direction : generators[k - 1];
  }
  int liouville_size() const { return size() + 1; }

  std::vector<int> indices_of_class(SectorClass cls) const;
  std::vector<int> indices_of_class(const GenLabel& like) const;
  // all distinct class keys in basis order
  std::vector<GenLabel> class_list() const;
};

// Eigendecompose Q and cluster eigenvalues into sectors. grouping_tol <= 0
// selects the default 1e-8 * max|lambda(Q)|. Ambiguous clusterings (a gap in
// (0.5 tol, 2 tol)) are recorded as warnings, not errors.
SectorSpectrum sector_decompose(const CMat& q, double grouping_tol = 0.0);

QBasis build_qbasis(const SectorSpectrum& spec);

struct CentralizerDims {
  int n_centralizer = 0;                 // N_Q = (N-1) + sum_q d_q (d_q - 1)
  std::vector<int> n_within;             // per sector, d_q (d_q - 1)
  std::map<std::pair<int, int>, int> n_ladder;  // (q, q') -> 2 d_q d_q'
};
CentralizerDims centralizer_dims(const QBasis& basis);

struct ClassifyReport {
  // HS norm of the projection of x onto each label class
  std::map<std::tuple<int, int, int>, double> class_weights;
  double cartan_weight = 0.0;
  double within_weight = 0.0;
  double ladder_weight = 0.0;
  double identity_weight = 0.0;
  bool symmetry_preserving = false;
};
ClassifyReport classify_operator(const CMat& x, const QBasis& basis,
                                 double rel_tol = tol::block_zero);

struct BlockPopulations {
  std::vector<double> populations;  // per-sector diagonal-block traces
  RMat offblock_max;                // (s1, s2): max |entry| in cross block
  RMat offblock_total;              // (s1, s2): sum of |entries|
};
BlockPopulations block_populations(const CMat& rho, const SectorSpectrum& spec);

// Expansion coefficients of x in the Liouville basis (identity first).
// Coefficients are real for Hermitian x.
RVec expand_hermitian(const CMat& x, const QBasis& basis);
CMat reconstruct(const RVec& coefficients, const QBasis& basis);

std::string qbasis_to_json(const QBasis& basis);
QBasis qbasis_from_json(const std::string& text);

}  // namespace symnoise
